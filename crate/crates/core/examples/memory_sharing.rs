//! Memory sharing between scheme 2 corners at (Ms, Mp) = (1, 1): the nested
//! split, the exact LP envelope, and a segmented byte-level run.

use coded_caching::envelope::{achieve, corner_grid, materialize_shared_placement, Scheme, SchemeTag, SharingRule};
use coded_caching::model::{build_association, DemandVector, NetworkConfig};
use coded_caching::simulator::{choose_file_len, simulate, FileLibrary, DEFAULT_LEN_CAP};
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let config = NetworkConfig::new(4, 4, 2, Rational::ONE, Rational::ONE)?;
    let assoc = build_association(&config, &[vec![1, 2, 3], vec![4]])?;

    println!("corners:");
    for c in corner_grid(&config, &assoc, SchemeTag::Scheme2)? {
        println!("  {c}");
    }

    let d = DemandVector::identity(4);
    for rule in [SharingRule::Nested, SharingRule::Hull] {
        let got = achieve(&config, &assoc, Scheme::Scheme2, rule)?;
        println!("{rule:?}: {}", got.solution);
        if let Some(c) = got.solution.supporting_violation(&corner_grid(&config, &assoc, SchemeTag::Scheme2)?) {
            println!("  corner below the supporting plane: {c}");
        }
        let run = materialize_shared_placement(&got.solution, &config, &assoc, &d)?;
        let f = choose_file_len(&run, 1, DEFAULT_LEN_CAP)?;
        let report = simulate(&run, &config, &assoc, &d, &FileLibrary::generate(4, f, 9))?;
        println!(
            "  {} segments, {} transmissions, F = {f}, decoded {}, measured {}",
            run.segments.len(),
            run.num_transmissions(),
            report.success(),
            report.measured_rate
        );
    }
    Ok(())
}
