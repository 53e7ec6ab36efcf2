//! Scheme 1 with a known association: feasibility gate, the helper and user
//! contents, and six coded transmissions of size 1/15.

use coded_caching::envelope::{Scheme, SharingRule};
use coded_caching::model::{build_association, DemandVector, NetworkConfig};
use coded_caching::scheme1::{deliver_scheme1, place_scheme1, rate_scheme1, scheme1_feasible};
use coded_caching::simulator::run_end_to_end;
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let config = NetworkConfig::new(6, 6, 3, Rational::new(6, 5), Rational::new(14, 5))?;
    let assoc = build_association(&config, &[vec![1, 2, 3], vec![4, 5], vec![6]])?;
    println!("{}", scheme1_feasible(&config, &assoc));

    let placement = place_scheme1(&config, &assoc)?;
    for helper in 1..=3 {
        let held: Vec<String> = placement.helper(helper).iter().filter(|s| s.file == 1).map(|s| s.to_string()).collect();
        println!("helper {helper}: {}", held.join(" "));
    }
    let user4: Vec<String> = placement.private(4).iter().filter(|s| s.file == 1).map(|s| s.to_string()).collect();
    println!("user 4:   {}", user4.join(" "));

    let d = DemandVector::identity(6);
    for tx in deliver_scheme1(&config, &d)? {
        println!("  {tx}");
    }
    println!("rate {}", rate_scheme1(&config)?);

    let e2e = run_end_to_end(&config, &assoc, &d, Scheme::Scheme1, SharingRule::Hull, 2)?;
    println!("decoded: {}", e2e.passed());

    let tight = config.with_memory(Rational::from(2), Rational::from(2))?;
    println!("at (2, 2): {}", scheme1_feasible(&tight, &assoc));
    Ok(())
}
