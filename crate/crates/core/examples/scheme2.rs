//! Scheme 2: two-level placement over helper sets and intra-group
//! positions; with a uniform association every XOR carries four subfiles.

use coded_caching::envelope::{Scheme, SharingRule};
use coded_caching::model::{build_association, Association, DemandVector, NetworkConfig};
use coded_caching::scheme2::{deliver_scheme2, place_scheme2, rate_scheme2, Scheme2Params};
use coded_caching::simulator::run_end_to_end;
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let config = NetworkConfig::new(6, 6, 3, Rational::from(2), Rational::new(4, 3))?;
    let assoc = build_association(&config, &[vec![1, 2, 3], vec![4, 5], vec![6]])?;
    println!("{:?}", Scheme2Params::of(&config, &assoc)?);

    let placement = place_scheme2(&config, &assoc)?;
    println!("subpacketization {}", placement.subpacketization());
    let user1: Vec<String> = placement.private(1).iter().filter(|s| s.file == 1).map(|s| s.to_string()).collect();
    println!("user 1 holds of W1: {}", user1.join(" "));

    let d = DemandVector::identity(6);
    for tx in deliver_scheme2(&config, &assoc, &d)? {
        println!("  {tx}");
    }
    println!("rate {}", rate_scheme2(&config, &assoc)?);
    println!("decoded: {}", run_end_to_end(&config, &assoc, &d, Scheme::Scheme2, SharingRule::Hull, 3)?.passed());

    let uniform_cfg = config.with_memory(Rational::from(2), Rational::from(2))?;
    let uniform = Association::contiguous(&uniform_cfg, &[2, 2, 2])?;
    let tx = deliver_scheme2(&uniform_cfg, &uniform, &d)?;
    let counts: Vec<usize> = tx.iter().map(|t| t.summands.len()).collect();
    println!("uniform (2,2,2) at (2, 2): summands per transmission {counts:?}, rate {}", rate_scheme2(&uniform_cfg, &uniform)?);
    Ok(())
}
