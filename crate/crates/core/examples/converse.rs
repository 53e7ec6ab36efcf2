//! Acyclic side-information set for the association-unknown scheme and the
//! resulting converse value.

use coded_caching::converse::certify;
use coded_caching::model::{build_association, DemandVector, NetworkConfig};
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let config = NetworkConfig::new(4, 4, 2, Rational::ONE, Rational::ONE)?;
    let assoc = build_association(&config, &[vec![1, 2, 3], vec![4]])?;
    let cert = certify(&config, &assoc, &DemandVector(vec![1, 2, 3, 4]))?;
    for id in cert.h1.iter().chain(&cert.h2) {
        println!("  {id}");
    }
    println!("alpha >= {}, achieved {}, acyclic {}, tight {}", cert.alpha_lower, cert.kappa_upper, cert.acyclic, cert.tight);

    let alt = build_association(&config, &[vec![2, 4], vec![1, 3]])?;
    let cert = certify(&config, &alt, &DemandVector(vec![4, 3, 2, 1]))?;
    println!("L = (2, 2): |H1| = {}, |H2| = {}, tight {}", cert.h1.len(), cert.h2.len(), cert.tight);
    Ok(())
}
