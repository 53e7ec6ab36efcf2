//! Scheme rates against the dedicated-cache, shared-cache and cut-set bounds,
//! including points in the high-memory corner where scheme 2 is optimal.

use coded_caching::bounds::bound_report;
use coded_caching::envelope::SharingRule;
use coded_caching::model::{Association, NetworkConfig};
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let base = NetworkConfig::new(6, 6, 3, Rational::ZERO, Rational::ZERO)?;
    let assoc = Association::contiguous(&base, &[3, 2, 1])?;
    let points = [
        (Rational::new(6, 5), Rational::new(14, 5)),
        (Rational::from(2), Rational::new(4, 3)),
        (Rational::from(4), Rational::new(4, 3)),
        (Rational::from(5), Rational::new(2, 3)),
    ];
    for (ms, mp) in points {
        let report = bound_report(&base.with_memory(ms, mp)?, &assoc, SharingRule::Hull)?;
        println!("{report}\n");
    }
    Ok(())
}
