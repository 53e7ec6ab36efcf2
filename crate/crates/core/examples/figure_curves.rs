//! Rate curves for K = N = 20, Λ = 4 at fixed Ms in {5, 10, 15}, for a
//! skewed and a uniform association. Writes CSVs into the directory given
//! as the first argument (default `curves`).

use std::path::PathBuf;

use coded_caching::cli::{curve_rows, render_csv, CurveSpec};
use coded_caching::config::LoadedConfig;
use coded_caching::envelope::{Scheme, SharingRule};
use coded_caching::model::{Association, DemandVector, NetworkConfig};
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "curves".into()));
    std::fs::create_dir_all(&dir)?;
    let network = NetworkConfig::new(20, 20, 4, Rational::ZERO, Rational::ZERO)?;
    for (name, profile) in [("skewed", [10, 5, 3, 2]), ("uniform", [5, 5, 5, 5])] {
        let loaded = LoadedConfig {
            network: network.clone(),
            assoc: Association::contiguous(&network, &profile)?,
            demand: DemandVector::identity(20),
            seed: 0,
        };
        for ms in [5, 10, 15] {
            let spec = CurveSpec {
                helper_mem: Rational::from(ms),
                start: Rational::ZERO,
                stop: Rational::from(20 - ms),
                step: Rational::new(1, 4),
            };
            let rows = curve_rows(&loaded, &spec, &Scheme::ALL, SharingRule::Hull, true)?;
            let support: Vec<Rational> = rows.iter().filter(|r| r.scheme1.is_some()).map(|r| r.private_mem).collect();
            let path = dir.join(format!("{name}_ms{ms}.csv"));
            std::fs::write(&path, render_csv(&rows, false, true))?;
            println!(
                "{}: scheme 1 defined for Mp in [{}, {}]",
                path.display(),
                support.first().map_or("-".into(), |r| r.to_string()),
                support.last().map_or("-".into(), |r| r.to_string())
            );
        }
    }
    Ok(())
}
