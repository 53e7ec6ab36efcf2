//! Byte-level decoding of every scheme over random demands on a random
//! eight-user association.

use coded_caching::envelope::{Scheme, SharingRule};
use coded_caching::model::{build_association, NetworkConfig};
use coded_caching::simulator::adversarial_sweep;
use coded_caching::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> coded_caching::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let config = NetworkConfig::new(10, 8, 3, Rational::new(10, 3), Rational::from(2))?;
    let mut groups = vec![Vec::new(); 3];
    for user in 1..=8 {
        groups[rng.gen_range(0..3)].push(user);
    }
    let assoc = build_association(&config, &groups)?;
    println!("association {groups:?}, profile {:?}", assoc.profile());
    for scheme in Scheme::ALL {
        match adversarial_sweep(&config, &assoc, scheme, SharingRule::Hull, 50, 7) {
            Ok(r) => println!("{scheme}: {}/{} decoded, worst rate {}", r.trials - r.failures, r.trials, r.worst_rate),
            Err(e) => println!("{scheme}: {e}"),
        }
    }
    Ok(())
}
