//! Association-unknown placement on four users and two helpers, then the
//! seven-transmission delivery and a byte-level decode.

use coded_caching::envelope::{Scheme, SharingRule};
use coded_caching::model::{build_association, DemandVector, NetworkConfig};
use coded_caching::scheme_unknown::{deliver_unknown, place_unknown, rate_unknown, UnknownSchemeParams};
use coded_caching::simulator::run_end_to_end;
use coded_caching::Rational;

fn main() -> coded_caching::Result<()> {
    let config = NetworkConfig::new(4, 4, 2, Rational::ONE, Rational::ONE)?;
    let assoc = build_association(&config, &[vec![1, 2, 3], vec![4]])?;
    let d = DemandVector(vec![1, 2, 3, 4]);

    let p = UnknownSchemeParams::of(&config);
    println!("t_s = {}, t_p = {}, alpha = {}", p.t_s, p.t_p, p.alpha());

    let placement = place_unknown(&config)?;
    let helper: Vec<String> = placement.helper(1).iter().filter(|s| s.file == 1).map(|s| s.to_string()).collect();
    let user: Vec<String> = placement.private(1).iter().filter(|s| s.file == 1).map(|s| s.to_string()).collect();
    println!("helper 1 holds of W1: {}", helper.join(" "));
    println!("user 1 holds of W1:   {}", user.join(" "));

    for tx in deliver_unknown(&config, &assoc, &d)? {
        println!("  {tx}  (size {})", tx.size);
    }
    println!("rate {}", rate_unknown(&config, assoc.profile())?);

    let e2e = run_end_to_end(&config, &assoc, &d, Scheme::Unknown, SharingRule::Hull, 1)?;
    println!(
        "decoded with F = {} bytes: {}, measured rate {}",
        e2e.report.file_len,
        e2e.passed(),
        e2e.report.measured_rate
    );
    Ok(())
}
