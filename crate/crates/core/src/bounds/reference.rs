//! Reference engines for the two classical special cases: dedicated caches
//! only, and shared caches only. Scheme 2 delegates its `t_s = 0` corners to
//! the dedicated engine; tests compare the association-unknown scheme
//! against both at `M_s = 0` and `M_p = 0`.

use crate::combinatorics::{choose_q, enumerate_ksubsets};
use crate::error::{Error, Result};
use crate::model::{Association, DemandVector, Label, Piece, Placement, Tier, Transmission};
use crate::rational::Rational;

/// Caching parameter `t = K M / N` for a dedicated-cache network.
pub fn dedicated_t(num_users: usize, num_files: usize, mem: Rational) -> Result<usize> {
    let t = Rational::from(num_users) * mem / Rational::from(num_files);
    t.to_usize().filter(|&t| t <= num_users).ok_or(Error::NonIntegral {
        scheme: "dedicated",
        what: format!("t = K·M/N = {t}"),
    })
}

/// Each file split into `C(K, t)` pieces `W_{n,τ}`; user `k` caches `τ ∋ k`.
pub fn place_dedicated(num_files: usize, num_helpers: usize, num_users: usize, t: usize) -> Result<Placement> {
    let mut placement = Placement::empty(num_files, num_helpers, num_users);
    let taus = enumerate_ksubsets(num_users, t);
    placement.subfile_size.insert(Tier::Single, choose_q(num_users, t)?.recip());
    for tau in &taus {
        let piece = Piece::new(Tier::Single, tau.clone(), None);
        for n in 1..=num_files {
            for k in tau.iter() {
                placement.private_contents[k - 1].insert(piece.of_file(n));
            }
        }
        placement.pieces.push(piece);
    }
    Ok(placement)
}

/// One transmission per `(t+1)`-subset `S` of users.
pub fn deliver_dedicated(num_users: usize, t: usize, d: &DemandVector) -> Result<Vec<Transmission>> {
    let size = choose_q(num_users, t)?.recip();
    Ok(enumerate_ksubsets(num_users, t + 1)
        .into_iter()
        .map(|s| {
            let summands = s
                .iter()
                .map(|k| Piece::new(Tier::Single, s.without(k), None).of_file(d.of(k)))
                .collect();
            Transmission { label: Label::Users { users: s, piece: None }, summands, size }
        })
        .collect())
}

/// `(K - t) / (t + 1)`.
pub fn dedicated_rate_at(num_users: usize, t: usize) -> Rational {
    Rational::from(num_users - t.min(num_users)) / Rational::from(t + 1)
}

/// Shared-cache placement: `C(Λ, t)` pieces, helper `λ` caches `τ ∋ λ`.
pub fn place_shared(num_files: usize, num_helpers: usize, num_users: usize, t: usize) -> Result<Placement> {
    let mut placement = Placement::empty(num_files, num_helpers, num_users);
    placement.subfile_size.insert(Tier::Tier1, choose_q(num_helpers, t)?.recip());
    for tau in enumerate_ksubsets(num_helpers, t) {
        let piece = Piece::new(Tier::Tier1, tau.clone(), None);
        for n in 1..=num_files {
            for h in tau.iter() {
                placement.helper_contents[h - 1].insert(piece.of_file(n));
            }
        }
        placement.pieces.push(piece);
    }
    Ok(placement)
}

/// Round-based shared-cache delivery: in round `j` the helpers with at least
/// `j` users are active, and each `(t+1)`-set of helpers meeting them sends
/// one XOR.
pub fn deliver_shared(
    assoc: &Association,
    t: usize,
    d: &DemandVector,
) -> Result<Vec<Transmission>> {
    let lambda = assoc.num_helpers();
    let size = choose_q(lambda, t)?.recip();
    let mut out = Vec::new();
    for round in 1..=assoc.largest_group() {
        let active: Vec<usize> = (1..=lambda).filter(|&h| assoc.profile()[h - 1] >= round).collect();
        for helpers in enumerate_ksubsets(lambda, t + 1) {
            let served: Vec<usize> = active.iter().copied().filter(|&h| helpers.contains(h)).collect();
            if served.is_empty() {
                continue;
            }
            let summands = served
                .iter()
                .map(|&h| {
                    let user = assoc.user_at(h, round).expect("active helper has this round's user");
                    Piece::new(Tier::Tier1, helpers.without(h), None).of_file(d.of(user))
                })
                .collect();
            out.push(Transmission { label: Label::Round { round, helpers: helpers.clone() }, summands, size });
        }
    }
    Ok(out)
}

/// `Σ_n L_n C(Λ-n, t) / C(Λ, t)`.
pub fn shared_rate_at(profile: &[usize], t: usize) -> Result<Rational> {
    let lambda = profile.len();
    let mut acc = Rational::ZERO;
    for (i, &l) in profile.iter().enumerate() {
        acc += Rational::from(l) * choose_q(lambda - (i + 1), t)?;
    }
    Ok(acc / choose_q(lambda, t)?)
}
