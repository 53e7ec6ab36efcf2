//! Reference curves and lower bounds: the dedicated-cache (MaN) and
//! shared-cache (PUE) envelopes, the cut-set bound, and the high-memory
//! optimality check.

pub mod reference;

use std::fmt;

use crate::envelope::{achieve, Scheme, SharingRule};
use crate::error::{Error, Result};
use crate::hull::{eval_hull, lower_hull, Knot};
use crate::model::{Association, NetworkConfig};
use crate::rational::Rational;

fn check_mem(num_files: usize, mem: Rational) -> Result<()> {
    if mem.is_negative() || mem > Rational::from(num_files) {
        return Err(Error::InvalidConfig(format!("memory {mem} outside [0, {num_files}]")));
    }
    Ok(())
}

/// Integer-`t` corners `(tN/K, (K-t)/(t+1))` of the dedicated-cache curve, hulled.
pub fn man_hull(num_users: usize, num_files: usize) -> Vec<Knot<usize>> {
    let n = Rational::from(num_files);
    let k = Rational::from(num_users);
    lower_hull(
        (0..=num_users)
            .map(|t| Knot { x: Rational::from(t) * n / k, y: reference::dedicated_rate_at(num_users, t), tag: t })
            .collect(),
    )
}

/// Integer-`t` corners `(tN/Λ, Σ L_n C(Λ-n,t)/C(Λ,t))` of the shared-cache curve, hulled.
pub fn pue_hull(profile: &[usize], num_files: usize) -> Result<Vec<Knot<usize>>> {
    let lambda = profile.len();
    let n = Rational::from(num_files);
    let mut knots = Vec::with_capacity(lambda + 1);
    for t in 0..=lambda {
        knots.push(Knot {
            x: Rational::from(t) * n / Rational::from(lambda),
            y: reference::shared_rate_at(profile, t)?,
            tag: t,
        });
    }
    Ok(lower_hull(knots))
}

/// Dedicated-cache rate under uncoded placement at per-user memory `mem`.
pub fn man_rate(num_users: usize, num_files: usize, mem: Rational) -> Result<Rational> {
    check_mem(num_files, mem)?;
    Ok(eval_hull(&man_hull(num_users, num_files), mem).expect("memory checked"))
}

/// Shared-cache rate for profile `L` at per-helper memory `mem`.
pub fn pue_rate(profile: &[usize], num_files: usize, mem: Rational) -> Result<Rational> {
    check_mem(num_files, mem)?;
    Ok(eval_hull(&pue_hull(profile, num_files)?, mem).expect("memory checked"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSet {
    pub value: Rational,
    /// Smallest `u` attaining the maximum.
    pub u: usize,
}

/// `max_u (u - (u M_p + λ_u M_s) / ⌊N/u⌋)` over `u ∈ [1..min(N,K)]`, each term
/// clamped at 0. Users are taken group by group in internal helper order.
pub fn cutset_bound(config: &NetworkConfig, assoc: &Association) -> CutSet {
    let order = assoc.ordered_users();
    let mut best = CutSet { value: Rational::ZERO, u: 1 };
    for u in 1..=config.num_files.min(config.num_users) {
        let lambda_u = assoc.helper_of(order[u - 1]);
        let floor = Rational::from(config.num_files / u);
        let term = Rational::from(u)
            - (Rational::from(u) * config.private_mem + Rational::from(lambda_u) * config.helper_mem) / floor;
        let term = term.max(Rational::ZERO);
        if term > best.value {
            best = CutSet { value: term, u };
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighMemoryVerdict {
    /// `M_s ≥ N(1-1/Λ)` and `M_p ≥ N(1-1/L_1)`.
    pub in_high_memory_region: bool,
    /// Inside the triangle spanned by `(N(1-1/Λ), (N/Λ)(1-1/L_1))`,
    /// `(N(1-1/Λ), N/Λ)` and `(N, 0)`.
    pub in_corner_triangle: bool,
    pub scheme2_rate: Rational,
    pub closed_form: Rational,
    pub cutset: Rational,
    /// All three values agree.
    pub optimal: bool,
}

pub fn high_memory_optimality(config: &NetworkConfig, assoc: &Association) -> Result<HighMemoryVerdict> {
    let n = config.n();
    let lambda = Rational::from(config.num_helpers);
    let l1 = Rational::from(assoc.largest_group().max(1));
    let (ms, mp) = (config.helper_mem, config.private_mem);
    let ms_floor = n * (Rational::ONE - lambda.recip());
    let in_high_memory_region = ms >= ms_floor && mp >= n * (Rational::ONE - l1.recip());
    let in_corner_triangle =
        ms >= ms_floor && ms + mp <= n && mp >= (Rational::ONE - l1.recip()) * (n - ms);
    let scheme2_rate = achieve(config, assoc, Scheme::Scheme2, SharingRule::Hull)?.rate;
    let closed_form = Rational::ONE - config.total_mem() / n;
    let cutset = cutset_bound(config, assoc).value;
    Ok(HighMemoryVerdict {
        in_high_memory_region,
        in_corner_triangle,
        scheme2_rate,
        closed_form,
        cutset,
        optimal: scheme2_rate == closed_form && closed_form == cutset,
    })
}

/// One scheme's rate against the bounds at the same memory point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeBound {
    pub scheme: Scheme,
    /// `None` where the scheme is not defined.
    pub rate: Option<Rational>,
    pub above_man: bool,
    pub below_pue: bool,
    pub above_cutset: bool,
    pub meets_man: bool,
    pub meets_cutset: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub helper_mem: Rational,
    pub private_mem: Rational,
    pub cutset: CutSet,
    pub man_lower: Rational,
    pub pue_upper: Rational,
    pub schemes: Vec<SchemeBound>,
    pub high_memory: HighMemoryVerdict,
}

impl BoundReport {
    /// Every defined scheme sits between the bounds.
    pub fn consistent(&self) -> bool {
        self.schemes.iter().all(|s| s.above_man && s.below_pue && s.above_cutset)
    }
}

pub fn bound_report(config: &NetworkConfig, assoc: &Association, rule: SharingRule) -> Result<BoundReport> {
    let m = config.total_mem();
    let man_lower = man_rate(config.num_users, config.num_files, m)?;
    let pue_upper = pue_rate(assoc.profile(), config.num_files, m)?;
    let cutset = cutset_bound(config, assoc);
    let mut schemes = Vec::new();
    for scheme in Scheme::ALL {
        let rate = match achieve(config, assoc, scheme, rule) {
            Ok(a) => Some(a.rate),
            Err(Error::Infeasible(_)) | Err(Error::OutsideEnvelope { .. }) => None,
            Err(e) => return Err(e),
        };
        let check = |f: &dyn Fn(Rational) -> bool| rate.is_none_or(f);
        schemes.push(SchemeBound {
            scheme,
            rate,
            above_man: check(&|r| r >= man_lower),
            below_pue: check(&|r| r <= pue_upper),
            above_cutset: check(&|r| r >= cutset.value),
            meets_man: rate == Some(man_lower),
            meets_cutset: rate == Some(cutset.value),
        });
    }
    Ok(BoundReport {
        helper_mem: config.helper_mem,
        private_mem: config.private_mem,
        cutset,
        man_lower,
        pue_upper,
        schemes,
        high_memory: high_memory_optimality(config, assoc)?,
    })
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "memory      Ms = {}, Mp = {}", self.helper_mem, self.private_mem)?;
        writeln!(f, "cutset      {} (u = {})", self.cutset.value, self.cutset.u)?;
        writeln!(f, "man         {}", self.man_lower)?;
        writeln!(f, "pue         {}", self.pue_upper)?;
        for s in &self.schemes {
            match s.rate {
                None => writeln!(f, "{:<11} undefined", s.scheme.to_string())?,
                Some(r) => {
                    let mut tags = Vec::new();
                    if s.meets_man {
                        tags.push("= man");
                    }
                    if s.meets_cutset {
                        tags.push("= cutset");
                    }
                    if !(s.above_man && s.below_pue && s.above_cutset) {
                        tags.push("OUT OF BOUNDS");
                    }
                    write!(f, "{:<11} {}", s.scheme.to_string(), r)?;
                    for tag in tags {
                        write!(f, " {tag}")?;
                    }
                    writeln!(f)?
                }
            }
        }
        let hm = &self.high_memory;
        write!(
            f,
            "high-memory region: {}, corner triangle: {}, optimal: {}",
            hm.in_high_memory_region, hm.in_corner_triangle, hm.optimal
        )
    }
}
