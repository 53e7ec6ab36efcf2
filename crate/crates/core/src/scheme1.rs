//! Association-known scheme with a one-level split over user subsets.
//!
//! Each file is split into `C(K, t)` subfiles `W_{n,τ}`, `τ ⊆ [K]`,
//! `t = K(M_s+M_p)/N`. Helper `λ` stores `q = M_s C(K,t)/N` subfiles per file
//! among those with `τ ⊇ U_λ`; every user stores the remaining `τ ∋ k`.
//! Delivery is the dedicated-cache XOR over `(t+1)`-sets of users.
//!
//! When `q` is fractional every subfile is cut into `den(q)` equal slices and
//! the helper stores `q·den(q)` slices, so memory is still met with equality.

use std::fmt;

use crate::combinatorics::{choose_q, enumerate_ksubsets, KSubset};
use crate::error::{Error, Result};
use crate::model::{
    check_run_inputs, validate_demand, Association, DemandVector, Label, NetworkConfig, Piece,
    Placement, Tier, Transmission,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scheme1Params {
    pub t: usize,
    /// Subfiles per file stored at each helper.
    pub helper_quota: Rational,
    /// Slices per subfile; 1 unless the quota is fractional.
    pub slices: usize,
}

/// Outcome of the feasibility gate, listing every failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub t: Rational,
    pub largest_group: usize,
    pub helper_mem: Rational,
    /// `N C(K-L_1, t-L_1) / C(K, t)` when `t` is an integer.
    pub helper_cap: Option<Rational>,
    pub reasons: Vec<String>,
}

impl FeasibilityReport {
    pub fn feasible(&self) -> bool {
        self.reasons.is_empty()
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.feasible() {
            return write!(f, "feasible (t = {})", self.t);
        }
        write!(f, "{}", self.reasons.join("; "))
    }
}

/// `N C(K-L_1, t-L_1) / C(K, t)`: the most helper memory scheme 1 can use at `t`.
pub fn helper_capacity(config: &NetworkConfig, largest_group: usize, t: usize) -> Result<Rational> {
    let k = config.num_users;
    if t < largest_group {
        return Ok(Rational::ZERO);
    }
    Ok(config.n() * choose_q(k - largest_group, t - largest_group)? / choose_q(k, t)?)
}

pub fn scheme1_feasible(config: &NetworkConfig, assoc: &Association) -> FeasibilityReport {
    let t = Rational::from(config.num_users) * config.total_mem() / config.n();
    let l1 = assoc.largest_group();
    let mut report = FeasibilityReport {
        t,
        largest_group: l1,
        helper_mem: config.helper_mem,
        helper_cap: None,
        reasons: Vec::new(),
    };
    let Some(ti) = t.to_usize() else {
        report.reasons.push(format!("t = K(Ms+Mp)/N = {t} is not an integer"));
        return report;
    };
    if ti < l1 {
        report.reasons.push(format!("t = {ti} is below the largest group size L1 = {l1}"));
    }
    match helper_capacity(config, l1, ti) {
        Ok(cap) => {
            report.helper_cap = Some(cap);
            if ti >= l1 && config.helper_mem > cap {
                report.reasons.push(format!("Ms = {} exceeds N·C(K-L1,t-L1)/C(K,t) = {cap}", config.helper_mem));
            }
        }
        Err(e) => report.reasons.push(e.to_string()),
    }
    report
}

fn params_unchecked(config: &NetworkConfig) -> Result<Scheme1Params> {
    let k = config.num_users;
    let t = Rational::from(k) * config.total_mem() / config.n();
    let t = t.to_usize().ok_or(Error::NonIntegral { scheme: "scheme 1", what: format!("t = {t}") })?;
    let helper_quota = config.helper_mem * choose_q(k, t)? / config.n();
    let slices = usize::try_from(helper_quota.denom())
        .map_err(|_| Error::InvalidConfig(format!("helper quota {helper_quota} too fine")))?;
    Ok(Scheme1Params { t, helper_quota, slices })
}

/// Parameters of a feasible point, or the failed report.
pub fn scheme1_params(config: &NetworkConfig, assoc: &Association) -> Result<Scheme1Params> {
    let report = scheme1_feasible(config, assoc);
    if !report.feasible() {
        return Err(Error::Infeasible(Box::new(report)));
    }
    params_unchecked(config)
}

fn slice_ids(slices: usize) -> Vec<Option<KSubset>> {
    if slices == 1 {
        return vec![None];
    }
    (1..=slices).map(|r| Some(KSubset::new(slices, vec![r]).expect("slice index in range"))).collect()
}

pub fn place_scheme1(config: &NetworkConfig, assoc: &Association) -> Result<Placement> {
    let p = scheme1_params(config, assoc)?;
    let k = config.num_users;
    let mut placement = Placement::empty(config.num_files, config.num_helpers, k);
    placement
        .subfile_size
        .insert(Tier::Single, (choose_q(k, p.t)? * Rational::from(p.slices)).recip());
    let taus = enumerate_ksubsets(k, p.t);
    let slices = slice_ids(p.slices);
    for tau in &taus {
        for s in &slices {
            placement.pieces.push(Piece::new(Tier::Single, tau.clone(), s.clone()));
        }
    }

    let stored = (p.helper_quota * Rational::from(p.slices))
        .to_usize()
        .expect("quota times slices is integral");
    for h in 1..=config.num_helpers {
        let group = assoc.group(h);
        let chosen: Vec<&Piece> =
            placement.pieces.iter().filter(|pc| pc.idx_a.is_superset_of(group)).take(stored).collect();
        let ids: Vec<_> = (1..=config.num_files)
            .flat_map(|n| chosen.iter().map(move |pc| pc.of_file(n)))
            .collect();
        placement.helper_contents[h - 1].extend(ids);
    }
    for user in 1..=k {
        let helper = assoc.helper_of(user);
        let mut mine = Vec::new();
        for pc in placement.pieces.iter().filter(|pc| pc.idx_a.contains(user)) {
            for n in 1..=config.num_files {
                let id = pc.of_file(n);
                if !placement.helper_contents[helper - 1].contains(&id) {
                    mine.push(id);
                }
            }
        }
        placement.private_contents[user - 1].extend(mine);
    }
    Ok(placement)
}

/// One XOR per `(t+1)`-set of users (and per slice).
pub fn deliver_scheme1(config: &NetworkConfig, d: &DemandVector) -> Result<Vec<Transmission>> {
    validate_demand(config, d)?;
    let p = params_unchecked(config)?;
    let k = config.num_users;
    let size = (choose_q(k, p.t)? * Rational::from(p.slices)).recip();
    let slices = slice_ids(p.slices);
    let mut out = Vec::new();
    for users in enumerate_ksubsets(k, p.t + 1) {
        for (r, s) in slices.iter().enumerate() {
            let summands = users
                .iter()
                .map(|u| Piece::new(Tier::Single, users.without(u), s.clone()).of_file(d.of(u)))
                .collect();
            let piece = s.as_ref().map(|_| r + 1);
            out.push(Transmission { label: Label::Users { users: users.clone(), piece }, summands, size });
        }
    }
    Ok(out)
}

/// Delivery for a full run, with the association checked against `config`.
pub fn deliver_scheme1_checked(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<Vec<Transmission>> {
    check_run_inputs(config, assoc, d)?;
    scheme1_params(config, assoc)?;
    deliver_scheme1(config, d)
}

/// `(K - t) / (t + 1)`.
pub fn rate_scheme1(config: &NetworkConfig) -> Result<Rational> {
    let p = params_unchecked(config)?;
    Ok(Rational::from(config.num_users - p.t) / Rational::from(p.t + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_association, total_size, SubfileId};
    use std::collections::BTreeSet;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn six_users_quota() -> (NetworkConfig, Association) {
        let cfg = NetworkConfig::new(6, 6, 3, q(6, 5), q(14, 5)).unwrap();
        let a = build_association(&cfg, &[vec![1, 2, 3], vec![4, 5], vec![6]]).unwrap();
        (cfg, a)
    }

    fn taus(p: &BTreeSet<SubfileId>, file: usize) -> Vec<String> {
        p.iter().filter(|s| s.file == file).map(|s| s.idx_a().to_string()).collect()
    }

    #[test]
    fn six_users_quota_feasibility() {
        let (cfg, a) = six_users_quota();
        let r = scheme1_feasible(&cfg, &a);
        assert!(r.feasible(), "{r}");
        assert_eq!(r.t, Rational::from(4));
        assert_eq!(r.helper_cap, Some(q(6, 5)));
        assert_eq!(scheme1_params(&cfg, &a).unwrap().helper_quota, Rational::from(3));
    }

    #[test]
    fn six_users_quota_placement() {
        let (cfg, a) = six_users_quota();
        let p = place_scheme1(&cfg, &a).unwrap();
        assert_eq!(taus(p.helper(1), 1), vec!["1234", "1235", "1236"]);
        assert_eq!(
            taus(p.private(4), 2),
            vec!["1234", "1246", "1346", "2345", "2346", "2456", "3456"]
        );
        for h in 1..=3 {
            assert_eq!(p.helper_memory(h), q(6, 5));
        }
        for k in 1..=6 {
            assert_eq!(p.private_memory(k), q(14, 5));
        }
        assert!(p.overlap(&a).is_none());
    }

    #[test]
    fn side_information_is_complete() {
        let (cfg, a) = six_users_quota();
        let p = place_scheme1(&cfg, &a).unwrap();
        for k in 1..=6 {
            let mut seen: BTreeSet<SubfileId> = p.private(k).clone();
            seen.extend(p.helper(a.helper_of(k)).iter().cloned());
            let want: BTreeSet<SubfileId> = (1..=6)
                .flat_map(|n| p.file_pieces(n).collect::<Vec<_>>())
                .filter(|s| s.idx_a().contains(k))
                .collect();
            assert_eq!(seen, want, "user {k}");
        }
    }

    #[test]
    fn six_users_quota_delivery() {
        let (cfg, a) = six_users_quota();
        let tx = deliver_scheme1_checked(&cfg, &a, &DemandVector::identity(6)).unwrap();
        assert_eq!(tx.len(), 6);
        assert!(tx.iter().all(|t| t.size == q(1, 15)));
        assert_eq!(total_size(&tx), q(2, 5));
        assert_eq!(rate_scheme1(&cfg).unwrap(), q(2, 5));
    }

    #[test]
    fn edge_values_of_t() {
        let (cfg, a) = six_users_quota();
        let full = cfg.with_memory(Rational::from(2), Rational::from(4)).unwrap();
        assert!(deliver_scheme1_checked(&full, &a, &DemandVector::identity(6)).unwrap().is_empty());
        assert_eq!(rate_scheme1(&full).unwrap(), Rational::ZERO);
        let near = cfg.with_memory(Rational::ONE, Rational::from(4)).unwrap();
        assert_eq!(deliver_scheme1(&near, &DemandVector::identity(6)).unwrap().len(), 1);
        assert_eq!(rate_scheme1(&near).unwrap(), q(1, 6));
    }

    #[test]
    fn infeasible_points_list_every_reason() {
        let (cfg, a) = six_users_quota();
        let low_t = cfg.with_memory(Rational::ZERO, Rational::from(2)).unwrap();
        let r = scheme1_feasible(&low_t, &a);
        assert!(!r.feasible());
        assert!(r.reasons[0].contains("below the largest group"));
        let too_much = cfg.with_memory(Rational::from(2), Rational::from(2)).unwrap();
        let r = scheme1_feasible(&too_much, &a);
        assert!(r.reasons.iter().any(|s| s.contains("exceeds")), "{r}");
        assert!(matches!(place_scheme1(&too_much, &a), Err(Error::Infeasible(_))));
        let frac = cfg.with_memory(Rational::ONE, q(5, 2)).unwrap();
        assert!(scheme1_feasible(&frac, &a).reasons[0].contains("not an integer"));
    }

    #[test]
    fn zero_helper_memory_is_dedicated_placement() {
        let (cfg, a) = six_users_quota();
        let c = cfg.with_memory(Rational::ZERO, Rational::from(3)).unwrap();
        assert!(scheme1_feasible(&c, &a).feasible());
        let p = place_scheme1(&c, &a).unwrap();
        assert!(p.helper_contents.iter().all(|z| z.is_empty()));
        let reference = crate::bounds::reference::place_dedicated(6, 3, 6, 3).unwrap();
        assert_eq!(p.private_contents, reference.private_contents);
    }

    #[test]
    fn fractional_quota_is_sliced() {
        // K = N = 20, L = (5,5,5,5), Ms = 5, t = 16: q = 5·C(20,16)/20 = 4845/4
        let cfg = NetworkConfig::new(20, 20, 4, Rational::from(5), Rational::from(11)).unwrap();
        let a = Association::contiguous(&cfg, &[5, 5, 5, 5]).unwrap();
        let p = scheme1_params(&cfg, &a).unwrap();
        assert_eq!(p.helper_quota, q(4845, 4));
        assert_eq!(p.slices, 4);

        // small instance exercised end to end: K = N = 4, L = (2,2), Ms = 1/2, t = 3
        let cfg = NetworkConfig::new(4, 4, 2, q(1, 2), q(5, 2)).unwrap();
        let a = Association::contiguous(&cfg, &[2, 2]).unwrap();
        let p = scheme1_params(&cfg, &a).unwrap();
        assert_eq!((p.helper_quota, p.slices), (q(1, 2), 2));
        let pl = place_scheme1(&cfg, &a).unwrap();
        for h in 1..=2 {
            assert_eq!(pl.helper_memory(h), q(1, 2));
        }
        for k in 1..=4 {
            assert_eq!(pl.private_memory(k), q(5, 2));
        }
        let tx = deliver_scheme1(&cfg, &DemandVector::identity(4)).unwrap();
        assert_eq!(tx.len(), 2);
        assert_eq!(total_size(&tx), rate_scheme1(&cfg).unwrap());
    }
}
