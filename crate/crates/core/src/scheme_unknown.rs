//! Placement without knowledge of the user-to-helper association.
//!
//! Every file is cut into a helper part of size `F1 = Ms/(Ms+Mp)` and a
//! private part of size `F2 = Mp/(Ms+Mp)`. The helper part follows the
//! shared-cache placement over `[Λ]` with `t_s = Λ(Ms+Mp)/N`; the private
//! part follows the dedicated-cache placement over `[K]` with
//! `t_p = K(Ms+Mp)/N`. Delivery serves the helper parts round by round and
//! the private parts with one XOR per `(t_p+1)`-set of users.

use crate::combinatorics::{choose_q, enumerate_ksubsets};
use crate::error::{Error, Result};
use crate::model::{
    check_run_inputs, Association, DemandVector, Label, NetworkConfig, Piece, Placement, Tier,
    Transmission,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnknownSchemeParams {
    pub t_s: Rational,
    pub t_p: Rational,
    pub f1: Rational,
    pub f2: Rational,
}

impl UnknownSchemeParams {
    pub fn of(config: &NetworkConfig) -> Self {
        let m = config.total_mem();
        let n = config.n();
        if m.is_zero() {
            // nothing cached: the whole file is sent as a single private-tier piece
            return UnknownSchemeParams {
                t_s: Rational::ZERO,
                t_p: Rational::ZERO,
                f1: Rational::ZERO,
                f2: Rational::ONE,
            };
        }
        UnknownSchemeParams {
            t_s: Rational::from(config.num_helpers) * m / n,
            t_p: Rational::from(config.num_users) * m / n,
            f1: config.helper_mem / m,
            f2: config.private_mem / m,
        }
    }

    /// The split ratio `α = F1`.
    pub fn alpha(&self) -> Rational {
        self.f1
    }

    /// Integer `t_s` and `t_p` for the tiers that are present.
    pub fn integral(&self) -> Result<ActiveTiers> {
        let need = |present: bool, t: Rational, what: &str| -> Result<Option<usize>> {
            if !present {
                return Ok(None);
            }
            t.to_usize().map(Some).ok_or(Error::NonIntegral {
                scheme: "association-unknown scheme",
                what: format!("{what} = {t}"),
            })
        };
        Ok(ActiveTiers {
            tier1: need(!self.f1.is_zero(), self.t_s, "t_s")?,
            tier2: need(!self.f2.is_zero(), self.t_p, "t_p")?,
        })
    }
}

/// Caching parameters of the tiers with non-zero size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActiveTiers {
    pub tier1: Option<usize>,
    pub tier2: Option<usize>,
}

pub fn place_unknown(config: &NetworkConfig) -> Result<Placement> {
    let params = UnknownSchemeParams::of(config);
    let tiers = params.integral()?;
    let (lambda, k) = (config.num_helpers, config.num_users);
    let mut placement = Placement::empty(config.num_files, lambda, k);

    if let Some(t_s) = tiers.tier1 {
        placement.subfile_size.insert(Tier::Tier1, params.f1 / choose_q(lambda, t_s)?);
        for tau in enumerate_ksubsets(lambda, t_s) {
            let piece = Piece::new(Tier::Tier1, tau.clone(), None);
            for n in 1..=config.num_files {
                for h in tau.iter() {
                    placement.helper_contents[h - 1].insert(piece.of_file(n));
                }
            }
            placement.pieces.push(piece);
        }
    }
    if let Some(t_p) = tiers.tier2 {
        placement.subfile_size.insert(Tier::Tier2, params.f2 / choose_q(k, t_p)?);
        for rho in enumerate_ksubsets(k, t_p) {
            let piece = Piece::new(Tier::Tier2, rho.clone(), None);
            for n in 1..=config.num_files {
                for u in rho.iter() {
                    placement.private_contents[u - 1].insert(piece.of_file(n));
                }
            }
            placement.pieces.push(piece);
        }
    }
    Ok(placement)
}

/// Tier-1 transmissions first (rounds ascending, `T` lexicographic), then
/// tier-2 (`S` lexicographic). Empty XORs are not sent.
pub fn deliver_unknown(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<Vec<Transmission>> {
    check_run_inputs(config, assoc, d)?;
    let params = UnknownSchemeParams::of(config);
    let tiers = params.integral()?;
    let (lambda, k) = (config.num_helpers, config.num_users);
    let mut out = Vec::new();

    if let Some(t_s) = tiers.tier1 {
        let size = params.f1 / choose_q(lambda, t_s)?;
        let sets = enumerate_ksubsets(lambda, t_s + 1);
        for round in 1..=assoc.largest_group() {
            for helpers in &sets {
                let summands: Vec<_> = helpers
                    .iter()
                    .filter_map(|h| {
                        let user = assoc.user_at(h, round)?;
                        Some(Piece::new(Tier::Tier1, helpers.without(h), None).of_file(d.of(user)))
                    })
                    .collect();
                if !summands.is_empty() {
                    out.push(Transmission {
                        label: Label::Round { round, helpers: helpers.clone() },
                        summands,
                        size,
                    });
                }
            }
        }
    }
    if let Some(t_p) = tiers.tier2 {
        let size = params.f2 / choose_q(k, t_p)?;
        for users in enumerate_ksubsets(k, t_p + 1) {
            let summands = users
                .iter()
                .map(|u| Piece::new(Tier::Tier2, users.without(u), None).of_file(d.of(u)))
                .collect();
            out.push(Transmission { label: Label::Users { users, piece: None }, summands, size });
        }
    }
    Ok(out)
}

/// Worst-case rate for profile `L`:
/// `α Σ_n L_n C(Λ-n, t_s)/C(Λ, t_s) + (1-α)(K - t_p)/(t_p + 1)`.
pub fn rate_unknown(config: &NetworkConfig, profile: &[usize]) -> Result<Rational> {
    let params = UnknownSchemeParams::of(config);
    let tiers = params.integral()?;
    let lambda = config.num_helpers;
    let k = config.num_users;
    let mut rate = Rational::ZERO;
    if let Some(t_s) = tiers.tier1 {
        let mut shared = Rational::ZERO;
        for (i, &l) in profile.iter().enumerate() {
            let n = i + 1;
            if n > lambda.saturating_sub(t_s) {
                break;
            }
            shared += Rational::from(l) * choose_q(lambda - n, t_s)?;
        }
        rate += params.f1 * shared / choose_q(lambda, t_s)?;
    }
    if let Some(t_p) = tiers.tier2 {
        rate += params.f2 * Rational::from(k - t_p) / Rational::from(t_p + 1);
    }
    Ok(rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::reference;
    use crate::combinatorics::KSubset;
    use crate::model::{build_association, total_size, SubfileId};
    use std::collections::BTreeSet;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn four_users() -> (NetworkConfig, Association) {
        let cfg = NetworkConfig::new(4, 4, 2, Rational::ONE, Rational::ONE).unwrap();
        let a = build_association(&cfg, &[vec![1, 2, 3], vec![4]]).unwrap();
        (cfg, a)
    }

    fn set(n: usize, e: &[usize]) -> KSubset {
        KSubset::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn four_users_placement() {
        let (cfg, _) = four_users();
        let p = place_unknown(&cfg).unwrap();
        let z1: BTreeSet<SubfileId> =
            (1..=4).map(|n| SubfileId::new(n, Tier::Tier1, set(2, &[1]), None)).collect();
        assert_eq!(p.helper(1), &z1);
        for rho in [&[1, 2][..], &[1, 3], &[1, 4]] {
            assert!(p.private(1).contains(&SubfileId::new(2, Tier::Tier2, set(4, rho), None)));
        }
        assert_eq!(p.private(1).len(), 12);
        assert_eq!(p.size_of_tier(Tier::Tier1), q(1, 4));
        assert_eq!(p.size_of_tier(Tier::Tier2), q(1, 12));
        for h in 1..=2 {
            assert_eq!(p.helper_memory(h), Rational::ONE);
        }
        for k in 1..=4 {
            assert_eq!(p.private_memory(k), Rational::ONE);
        }
        assert_eq!(p.coverage(), Rational::ONE);
    }

    #[test]
    fn four_users_delivery_and_rate() {
        let (cfg, a) = four_users();
        let tx = deliver_unknown(&cfg, &a, &DemandVector::identity(4)).unwrap();
        assert_eq!(tx.len(), 7);
        let tier1: Vec<_> = tx.iter().filter(|t| t.summands[0].tier() == Tier::Tier1).collect();
        assert_eq!(tier1.len(), 3);
        // X_{12,1} = W1_{1,2} + W1_{4,1}
        assert_eq!(
            tier1[0].summands,
            vec![
                SubfileId::new(1, Tier::Tier1, set(2, &[2]), None),
                SubfileId::new(4, Tier::Tier1, set(2, &[1]), None)
            ]
        );
        assert_eq!(tier1[1].summands, vec![SubfileId::new(2, Tier::Tier1, set(2, &[2]), None)]);
        assert_eq!(tier1[2].summands, vec![SubfileId::new(3, Tier::Tier1, set(2, &[2]), None)]);
        assert_eq!(total_size(&tx), q(13, 12));
        assert_eq!(rate_unknown(&cfg, a.profile()).unwrap(), q(13, 12));
    }

    #[test]
    fn full_memory_sends_nothing() {
        let cfg = NetworkConfig::new(4, 4, 2, Rational::from(2), Rational::from(2)).unwrap();
        let a = Association::contiguous(&cfg, &[2, 2]).unwrap();
        let tx = deliver_unknown(&cfg, &a, &DemandVector::identity(4)).unwrap();
        assert!(tx.is_empty());
        assert_eq!(rate_unknown(&cfg, a.profile()).unwrap(), Rational::ZERO);
    }

    #[test]
    fn all_singleton_groups_tier_one_count() {
        // Λ = 3, L = (1,1,1), t_s = 1: one round, C(3,2) = 3 helper pairs
        let cfg = NetworkConfig::new(3, 3, 3, Rational::ONE, Rational::ZERO).unwrap();
        let a = Association::contiguous(&cfg, &[1, 1, 1]).unwrap();
        let tx = deliver_unknown(&cfg, &a, &DemandVector::identity(3)).unwrap();
        let by_enumeration = enumerate_ksubsets(3, 2).len();
        assert_eq!(tx.len(), by_enumeration);
        assert_eq!(tx.len(), 3);
    }

    #[test]
    fn zero_memory_sends_every_file() {
        let cfg = NetworkConfig::new(4, 4, 2, Rational::ZERO, Rational::ZERO).unwrap();
        let a = Association::contiguous(&cfg, &[3, 1]).unwrap();
        assert_eq!(rate_unknown(&cfg, a.profile()).unwrap(), Rational::from(4));
        let tx = deliver_unknown(&cfg, &a, &DemandVector::identity(4)).unwrap();
        assert_eq!(tx.len(), 4);
        assert_eq!(total_size(&tx), Rational::from(4));
    }

    #[test]
    fn non_integral_parameters_are_rejected() {
        let cfg = NetworkConfig::new(4, 4, 2, Rational::new(1, 2), Rational::new(1, 2)).unwrap();
        assert!(matches!(place_unknown(&cfg), Err(Error::NonIntegral { .. })));
        assert!(matches!(rate_unknown(&cfg, &[3, 1]), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn uniform_profile_closed_form() {
        // K = 6, Λ = 3, N = 6, uniform L = (2,2,2)
        for (ms, mp) in [(1, 1), (2, 2), (1, 3), (3, 1), (2, 0), (0, 4)] {
            let cfg = NetworkConfig::new(6, 6, 3, Rational::from(ms), Rational::from(mp)).unwrap();
            let params = UnknownSchemeParams::of(&cfg);
            let m = cfg.total_mem();
            let base = Rational::from(6) * (Rational::ONE - m / cfg.n());
            let expected = params.f1 * base / (params.t_s + Rational::ONE)
                + params.f2 * base / (params.t_p + Rational::ONE);
            assert_eq!(rate_unknown(&cfg, &[2, 2, 2]).unwrap(), expected, "Ms={ms} Mp={mp}");
        }
    }

    #[test]
    fn reduces_to_dedicated_and_shared_schemes() {
        let strip = |tx: &[Transmission]| -> Vec<Vec<(usize, KSubset)>> {
            tx.iter()
                .map(|t| t.summands.iter().map(|s| (s.file, s.idx_a().clone())).collect())
                .collect()
        };
        // Ms = 0: exactly the dedicated-cache delivery
        let cfg = NetworkConfig::new(6, 6, 3, Rational::ZERO, Rational::from(2)).unwrap();
        let a = Association::contiguous(&cfg, &[3, 2, 1]).unwrap();
        let d = DemandVector(vec![3, 1, 2, 6, 5, 4]);
        let ours = deliver_unknown(&cfg, &a, &d).unwrap();
        let reference = reference::deliver_dedicated(6, 2, &d).unwrap();
        assert_eq!(strip(&ours), strip(&reference));

        // Mp = 0: exactly the shared-cache delivery
        let cfg = NetworkConfig::new(6, 6, 3, Rational::from(4), Rational::ZERO).unwrap();
        let ours = deliver_unknown(&cfg, &a, &d).unwrap();
        let reference = reference::deliver_shared(&a, 2, &d).unwrap();
        assert_eq!(strip(&ours), strip(&reference));
        let p = place_unknown(&cfg).unwrap();
        assert!(p.private_contents.iter().all(|z| z.is_empty()));
    }

    #[test]
    fn convex_combination_of_reference_rates() {
        let profile = [3, 2, 1];
        for (ms, mp) in [(1, 1), (2, 2), (1, 3), (3, 3), (1, 5)] {
            let cfg = NetworkConfig::new(6, 6, 3, Rational::from(ms), Rational::from(mp)).unwrap();
            let params = UnknownSchemeParams::of(&cfg);
            let Ok(ActiveTiers { tier1: Some(ts), tier2: Some(tp) }) = params.integral() else {
                continue;
            };
            let expected = params.alpha() * reference::shared_rate_at(&profile, ts).unwrap()
                + (Rational::ONE - params.alpha()) * reference::dedicated_rate_at(6, tp);
            assert_eq!(rate_unknown(&cfg, &profile).unwrap(), expected);
        }
    }
}
