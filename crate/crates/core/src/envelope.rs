//! Memory sharing: rates at arbitrary `(M_s, M_p)` as convex combinations of
//! integer-parameter corner points, and the segmented runs that realize them.
//!
//! * The association-unknown scheme keeps its split ratio `α` and sends its
//!   two tiers through the shared-cache and dedicated-cache envelopes at the
//!   same total memory.
//! * Scheme 1 interpolates between feasible `t` at fixed `M_s`.
//! * Scheme 2 either solves the exact linear program over all its corners
//!   ([`SharingRule::Hull`]) or splits `t_s` first and `t_p` second
//!   ([`SharingRule::Nested`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bounds::{man_hull, pue_hull, reference};
use crate::error::{Error, Result};
use crate::hull::{mixture_at, Knot};
use crate::lp::{minimize, LpOutcome};
use crate::model::{
    check_run_inputs, Association, DemandVector, NetworkConfig, Placement, Provenance, RatePoint,
    Run, Segment, Transmission,
};
use crate::rational::Rational;
use crate::scheme1::{self, helper_capacity, scheme1_feasible, FeasibilityReport};
use crate::scheme2::{self, Scheme2Params};
use crate::scheme_unknown::{self, ActiveTiers, UnknownSchemeParams};

/// The three achievable schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Unknown,
    Scheme1,
    Scheme2,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Unknown, Scheme::Scheme1, Scheme::Scheme2];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Unknown => "unknown",
            Scheme::Scheme1 => "scheme1",
            Scheme::Scheme2 => "scheme2",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unknown" => Ok(Scheme::Unknown),
            "scheme1" => Ok(Scheme::Scheme1),
            "scheme2" => Ok(Scheme::Scheme2),
            other => Err(Error::Parse(format!("unknown scheme {other:?}"))),
        }
    }
}

/// How scheme 2 reaches a non-lattice memory point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SharingRule {
    /// Minimum over every convex combination of corners.
    #[default]
    Hull,
    /// Split `t_s` between its neighbours at the target `M_p`, then split
    /// `t_p` inside each branch.
    Nested,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    Unknown,
    Scheme1,
    Scheme2,
    Dedicated,
    /// Helper caches only; one tier of the association-unknown scheme.
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CornerParams {
    Unknown { t_s: usize, t_p: usize },
    Scheme1 { t: usize },
    Scheme2 { t_s: usize, t_p: usize },
    Dedicated { t: usize },
    Shared { t: usize },
}

impl fmt::Display for CornerParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CornerParams::Unknown { t_s, t_p } => write!(f, "unknown(t_s={t_s}, t_p={t_p})"),
            CornerParams::Scheme1 { t } => write!(f, "scheme1(t={t})"),
            CornerParams::Scheme2 { t_s, t_p } => write!(f, "scheme2(t_s={t_s}, t_p={t_p})"),
            CornerParams::Dedicated { t } => write!(f, "dedicated(t={t})"),
            CornerParams::Shared { t } => write!(f, "shared(t={t})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerPoint {
    pub helper_mem: Rational,
    pub private_mem: Rational,
    pub rate: Rational,
    pub params: CornerParams,
}

impl CornerPoint {
    pub fn tag(&self) -> SchemeTag {
        match self.params {
            CornerParams::Unknown { .. } => SchemeTag::Unknown,
            CornerParams::Scheme1 { .. } => SchemeTag::Scheme1,
            CornerParams::Scheme2 { .. } => SchemeTag::Scheme2,
            CornerParams::Dedicated { .. } => SchemeTag::Dedicated,
            CornerParams::Shared { .. } => SchemeTag::Shared,
        }
    }
}

impl fmt::Display for CornerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}) R = {} via {}", self.helper_mem, self.private_mem, self.rate, self.params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeSolution {
    pub weights: Vec<(CornerPoint, Rational)>,
    pub achieved_rate: Rational,
    /// LP multipliers for `(Σw = 1, Σw·M_s, Σw·M_p)` when solved by the LP.
    pub duals: Option<[Rational; 3]>,
}

impl EnvelopeSolution {
    fn single(corner: CornerPoint) -> Self {
        EnvelopeSolution { achieved_rate: corner.rate, weights: vec![(corner, Rational::ONE)], duals: None }
    }

    fn from_weights(weights: Vec<(CornerPoint, Rational)>) -> Self {
        let weights: Vec<_> = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        let achieved_rate = weights.iter().map(|(c, w)| *w * c.rate).sum();
        EnvelopeSolution { weights, achieved_rate, duals: None }
    }

    /// Weights are a convex combination reaching the target exactly.
    pub fn is_valid_for(&self, helper_mem: Rational, private_mem: Rational) -> bool {
        let total: Rational = self.weights.iter().map(|(_, w)| *w).sum();
        let ms: Rational = self.weights.iter().map(|(c, w)| *w * c.helper_mem).sum();
        let mp: Rational = self.weights.iter().map(|(c, w)| *w * c.private_mem).sum();
        let r: Rational = self.weights.iter().map(|(c, w)| *w * c.rate).sum();
        self.weights.iter().all(|(_, w)| !w.is_negative())
            && total == Rational::ONE
            && ms == helper_mem
            && mp == private_mem
            && r == self.achieved_rate
    }

    /// First corner lying strictly below the supporting plane given by the
    /// duals. `None` certifies optimality over `corners`.
    pub fn supporting_violation<'a>(&self, corners: &'a [CornerPoint]) -> Option<&'a CornerPoint> {
        let [y0, y1, y2] = self.duals?;
        corners.iter().find(|c| c.rate < y0 + y1 * c.helper_mem + y2 * c.private_mem)
    }
}

impl fmt::Display for EnvelopeSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|(c, w)| format!("{w}·{c}")).collect();
        write!(f, "R = {} = {}", self.achieved_rate, parts.join(" + "))
    }
}

fn dedicated_corner(config: &NetworkConfig, t: usize) -> CornerPoint {
    CornerPoint {
        helper_mem: Rational::ZERO,
        private_mem: Rational::from(t) * config.n() / Rational::from(config.num_users),
        rate: reference::dedicated_rate_at(config.num_users, t),
        params: CornerParams::Dedicated { t },
    }
}

fn shared_corner(config: &NetworkConfig, assoc: &Association, t: usize) -> Result<CornerPoint> {
    Ok(CornerPoint {
        helper_mem: Rational::from(t) * config.n() / Rational::from(config.num_helpers),
        private_mem: Rational::ZERO,
        rate: reference::shared_rate_at(assoc.profile(), t)?,
        params: CornerParams::Shared { t },
    })
}

fn scheme2_corner(config: &NetworkConfig, assoc: &Association, t_s: usize, t_p: usize) -> Result<CornerPoint> {
    let n = config.n();
    let ms = Rational::from(t_s) * n / Rational::from(config.num_helpers);
    let mp = if t_s == config.num_helpers {
        Rational::ZERO
    } else {
        Rational::from(t_p) * (n - ms) / Rational::from(assoc.largest_group())
    };
    let at = config.with_memory(ms, mp)?;
    Ok(CornerPoint {
        helper_mem: ms,
        private_mem: mp,
        rate: scheme2::rate_scheme2(&at, assoc)?,
        params: CornerParams::Scheme2 { t_s, t_p },
    })
}

/// Integer-parameter corners of a scheme in the `(M_s, M_p)` plane, sorted by
/// memory with duplicates resolved to the lowest rate.
///
/// `Unknown` yields the shared-cache and dedicated-cache corners its two tiers
/// are built from.
pub fn corner_grid(config: &NetworkConfig, assoc: &Association, tag: SchemeTag) -> Result<Vec<CornerPoint>> {
    let mut raw = Vec::new();
    let k = config.num_users;
    match tag {
        SchemeTag::Dedicated => raw.extend((0..=k).map(|t| dedicated_corner(config, t))),
        SchemeTag::Shared => {
            for t in 0..=config.num_helpers {
                raw.push(shared_corner(config, assoc, t)?);
            }
        }
        SchemeTag::Unknown => {
            raw.extend(corner_grid(config, assoc, SchemeTag::Dedicated)?);
            raw.extend(corner_grid(config, assoc, SchemeTag::Shared)?);
        }
        SchemeTag::Scheme1 => {
            let l1 = assoc.largest_group();
            for t in l1..=k {
                let total = Rational::from(t) * config.n() / Rational::from(k);
                let rate = reference::dedicated_rate_at(k, t);
                let cap = helper_capacity(config, l1, t)?.min(total);
                for ms in [Rational::ZERO, cap] {
                    raw.push(CornerPoint { helper_mem: ms, private_mem: total - ms, rate, params: CornerParams::Scheme1 { t } });
                }
            }
        }
        SchemeTag::Scheme2 => {
            raw.extend(corner_grid(config, assoc, SchemeTag::Dedicated)?);
            for t_s in 1..config.num_helpers {
                for t_p in 0..=assoc.largest_group() {
                    raw.push(scheme2_corner(config, assoc, t_s, t_p)?);
                }
            }
            raw.push(scheme2_corner(config, assoc, config.num_helpers, 0)?);
        }
    }
    let mut best: BTreeMap<(Rational, Rational), CornerPoint> = BTreeMap::new();
    for c in raw {
        let key = (c.helper_mem, c.private_mem);
        match best.get(&key) {
            Some(old) if old.rate <= c.rate => {}
            _ => {
                best.insert(key, c);
            }
        }
    }
    Ok(best.into_values().collect())
}

/// Lowest-rate convex combination of `corners` with the target memories,
/// solved exactly. `None` when the target is outside their convex hull.
pub fn envelope_at(corners: &[CornerPoint], helper_mem: Rational, private_mem: Rational) -> Option<EnvelopeSolution> {
    if corners.is_empty() {
        return None;
    }
    let a = vec![
        vec![Rational::ONE; corners.len()],
        corners.iter().map(|c| c.helper_mem).collect(),
        corners.iter().map(|c| c.private_mem).collect(),
    ];
    let b = [Rational::ONE, helper_mem, private_mem];
    let c: Vec<Rational> = corners.iter().map(|c| c.rate).collect();
    match minimize(&a, &b, &c) {
        LpOutcome::Optimal(sol) => {
            let weights = corners.iter().cloned().zip(sol.x.iter().copied()).collect();
            let mut out = EnvelopeSolution::from_weights(weights);
            out.duals = Some([sol.duals[0], sol.duals[1], sol.duals[2]]);
            Some(out)
        }
        LpOutcome::Infeasible | LpOutcome::Unbounded => None,
    }
}

/// Neighbouring-lattice split of scheme 2. `None` when a branch would need
/// more than `N` total memory.
pub fn nested_scheme2(config: &NetworkConfig, assoc: &Association) -> Result<Option<EnvelopeSolution>> {
    let n = config.n();
    let lambda = config.num_helpers;
    let l1 = assoc.largest_group();
    let (ms, mp) = (config.helper_mem, config.private_mem);
    let ts = Rational::from(lambda) * ms / n;
    let branches: Vec<(usize, Rational)> = if ts.is_integer() {
        vec![(ts.floor() as usize, Rational::ONE)]
    } else {
        let (lo, hi) = (ts.floor() as usize, ts.ceil() as usize);
        let w_hi = ts - Rational::from(lo);
        vec![(lo, Rational::ONE - w_hi), (hi, w_hi)]
    };
    let mut weights = Vec::new();
    for (t_s, w) in branches {
        let ms_b = Rational::from(t_s) * n / Rational::from(lambda);
        if ms_b + mp > n {
            return Ok(None);
        }
        let knots: Vec<Knot<CornerPoint>> = if t_s == 0 {
            (0..=config.num_users).map(|t| dedicated_corner(config, t)).map(|c| Knot { x: c.private_mem, y: c.rate, tag: c }).collect()
        } else if t_s == lambda {
            let c = scheme2_corner(config, assoc, lambda, 0)?;
            vec![Knot { x: c.private_mem, y: c.rate, tag: c }]
        } else {
            let mut v = Vec::new();
            for t_p in 0..=l1 {
                let c = scheme2_corner(config, assoc, t_s, t_p)?;
                v.push(Knot { x: c.private_mem, y: c.rate, tag: c });
            }
            v
        };
        let Some(mix) = mixture_at(&knots, mp) else {
            return Ok(None);
        };
        for (i, wi) in mix {
            weights.push((knots[i].tag.clone(), w * wi));
        }
    }
    Ok(Some(EnvelopeSolution::from_weights(weights)))
}

/// Fixed-`α` tiers through the shared-cache and dedicated-cache envelopes.
pub fn unknown_envelope(config: &NetworkConfig, assoc: &Association) -> Result<EnvelopeSolution> {
    let m = config.total_mem();
    if m.is_zero() {
        return Ok(EnvelopeSolution::single(dedicated_corner(config, 0)));
    }
    let alpha = UnknownSchemeParams::of(config).alpha();
    let mut weights = Vec::new();
    if !alpha.is_zero() {
        let hull = pue_hull(assoc.profile(), config.num_files)?;
        for (i, w) in mixture_at(&hull, m).expect("total memory within [0, N]") {
            weights.push((shared_corner(config, assoc, hull[i].tag)?, alpha * w));
        }
    }
    if alpha != Rational::ONE {
        let hull = man_hull(config.num_users, config.num_files);
        for (i, w) in mixture_at(&hull, m).expect("total memory within [0, N]") {
            weights.push((dedicated_corner(config, hull[i].tag), (Rational::ONE - alpha) * w));
        }
    }
    Ok(EnvelopeSolution::from_weights(weights))
}

fn scheme1_corner(config: &NetworkConfig, t: usize) -> CornerPoint {
    let k = config.num_users;
    CornerPoint {
        helper_mem: config.helper_mem,
        private_mem: Rational::from(t) * config.n() / Rational::from(k) - config.helper_mem,
        rate: reference::dedicated_rate_at(k, t),
        params: CornerParams::Scheme1 { t },
    }
}

/// Scheme 1 between the neighbouring feasible `t` at the same `M_s`.
pub fn scheme1_envelope(config: &NetworkConfig, assoc: &Association) -> Result<EnvelopeSolution> {
    let k = config.num_users;
    let t = Rational::from(k) * config.total_mem() / config.n();
    let (lo, hi) = (t.floor() as usize, t.ceil() as usize);
    let mut report = FeasibilityReport {
        t,
        largest_group: assoc.largest_group(),
        helper_mem: config.helper_mem,
        helper_cap: None,
        reasons: Vec::new(),
    };
    for cand in [lo, hi] {
        let total = Rational::from(cand) * config.n() / Rational::from(k);
        let sub = match config.with_memory(config.helper_mem, total - config.helper_mem) {
            Ok(c) => scheme1_feasible(&c, assoc),
            Err(_) => {
                report.reasons.push(format!("t = {cand} needs total memory {total} below Ms = {}", config.helper_mem));
                continue;
            }
        };
        report.reasons.extend(sub.reasons.into_iter().map(|r| format!("sharing corner t = {cand}: {r}")));
    }
    if !report.feasible() {
        return Err(Error::Infeasible(Box::new(report)));
    }
    let knots: Vec<Knot<CornerPoint>> = [lo, hi]
        .into_iter()
        .map(|t| scheme1_corner(config, t))
        .map(|c| Knot { x: c.private_mem, y: c.rate, tag: c })
        .collect();
    let mix = mixture_at(&knots, config.private_mem).expect("target between neighbours");
    Ok(EnvelopeSolution::from_weights(mix.into_iter().map(|(i, w)| (knots[i].tag.clone(), w)).collect()))
}

/// A scheme's rate at `config`'s memory point and how it is realized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Achieved {
    /// `None` for the cross-scheme mixture.
    pub scheme: Option<Scheme>,
    pub rate: Rational,
    pub solution: EnvelopeSolution,
    /// The point is a lattice point of the scheme itself.
    pub direct: bool,
    pub rule: SharingRule,
}

impl Achieved {
    pub fn rate_point(&self, config: &NetworkConfig) -> RatePoint {
        RatePoint {
            helper_mem: config.helper_mem,
            private_mem: config.private_mem,
            rate: self.rate,
            provenance: if self.direct { Provenance::Formula } else { Provenance::Envelope },
        }
    }
}

fn direct(scheme: Scheme, config: &NetworkConfig, rate: Rational, params: CornerParams) -> Achieved {
    let corner = CornerPoint { helper_mem: config.helper_mem, private_mem: config.private_mem, rate, params };
    Achieved { scheme: Some(scheme), rate, solution: EnvelopeSolution::single(corner), direct: true, rule: SharingRule::Hull }
}

fn shared_point(scheme: Scheme, solution: EnvelopeSolution, rule: SharingRule) -> Achieved {
    Achieved { scheme: Some(scheme), rate: solution.achieved_rate, solution, direct: false, rule }
}

fn outside(config: &NetworkConfig) -> Error {
    Error::OutsideEnvelope { ms: config.helper_mem.to_string(), mp: config.private_mem.to_string() }
}

/// Rate of `scheme` at `config`: the scheme itself on its lattice, memory
/// sharing elsewhere.
pub fn achieve(config: &NetworkConfig, assoc: &Association, scheme: Scheme, rule: SharingRule) -> Result<Achieved> {
    config.validate()?;
    match scheme {
        Scheme::Unknown => {
            let params = UnknownSchemeParams::of(config);
            match params.integral() {
                Ok(ActiveTiers { tier1, tier2 }) => {
                    let rate = scheme_unknown::rate_unknown(config, assoc.profile())?;
                    let p = CornerParams::Unknown { t_s: tier1.unwrap_or(0), t_p: tier2.unwrap_or(0) };
                    Ok(direct(scheme, config, rate, p))
                }
                Err(Error::NonIntegral { .. }) => Ok(shared_point(scheme, unknown_envelope(config, assoc)?, rule)),
                Err(e) => Err(e),
            }
        }
        Scheme::Scheme1 => {
            let t = Rational::from(config.num_users) * config.total_mem() / config.n();
            if t.is_integer() {
                let p = scheme1::scheme1_params(config, assoc)?;
                Ok(direct(scheme, config, scheme1::rate_scheme1(config)?, CornerParams::Scheme1 { t: p.t }))
            } else {
                Ok(shared_point(scheme, scheme1_envelope(config, assoc)?, rule))
            }
        }
        Scheme::Scheme2 => match Scheme2Params::of(config, assoc) {
            Ok(p) => {
                let params = match p {
                    Scheme2Params::Dedicated { t } => CornerParams::Dedicated { t },
                    Scheme2Params::TwoLevel { t_s, t_p } => CornerParams::Scheme2 { t_s, t_p },
                };
                Ok(direct(scheme, config, scheme2::rate_scheme2(config, assoc)?, params))
            }
            Err(Error::NonIntegral { .. }) => {
                if rule == SharingRule::Nested {
                    if let Some(sol) = nested_scheme2(config, assoc)? {
                        return Ok(shared_point(scheme, sol, SharingRule::Nested));
                    }
                }
                let corners = corner_grid(config, assoc, SchemeTag::Scheme2)?;
                let sol = envelope_at(&corners, config.helper_mem, config.private_mem).ok_or_else(|| outside(config))?;
                Ok(shared_point(scheme, sol, SharingRule::Hull))
            }
            Err(e) => Err(e),
        },
    }
}

/// Lower convex envelope of `scheme` at `config`: like [`achieve`], but a
/// lattice point whose own formula lies above the memory-sharing hull reports
/// the hull. With [`SharingRule::Nested`] this is [`achieve`].
pub fn achieve_envelope(config: &NetworkConfig, assoc: &Association, scheme: Scheme, rule: SharingRule) -> Result<Achieved> {
    let got = achieve(config, assoc, scheme, rule)?;
    if !got.direct || rule == SharingRule::Nested {
        return Ok(got);
    }
    let hull = match scheme {
        Scheme::Unknown => Some(unknown_envelope(config, assoc)?),
        Scheme::Scheme1 => None,
        Scheme::Scheme2 => {
            let corners = corner_grid(config, assoc, SchemeTag::Scheme2)?;
            envelope_at(&corners, config.helper_mem, config.private_mem)
        }
    };
    Ok(match hull {
        Some(sol) if sol.achieved_rate < got.rate => shared_point(scheme, sol, SharingRule::Hull),
        _ => got,
    })
}

/// Lowest rate over the union of every scheme's corners.
pub fn achieve_mixed(config: &NetworkConfig, assoc: &Association) -> Result<Achieved> {
    config.validate()?;
    let mut corners = corner_grid(config, assoc, SchemeTag::Scheme2)?;
    corners.extend(corner_grid(config, assoc, SchemeTag::Scheme1)?);
    corners.extend(corner_grid(config, assoc, SchemeTag::Shared)?);
    let sol = envelope_at(&corners, config.helper_mem, config.private_mem).ok_or_else(|| outside(config))?;
    Ok(Achieved { scheme: None, rate: sol.achieved_rate, solution: sol, direct: false, rule: SharingRule::Hull })
}

fn corner_run(
    corner: &CornerPoint,
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<(Placement, Vec<Transmission>)> {
    let at = config.with_memory(corner.helper_mem, corner.private_mem)?;
    let (n, lambda, k) = (config.num_files, config.num_helpers, config.num_users);
    Ok(match corner.params {
        CornerParams::Unknown { .. } => {
            (scheme_unknown::place_unknown(&at)?, scheme_unknown::deliver_unknown(&at, assoc, d)?)
        }
        CornerParams::Scheme1 { .. } => (scheme1::place_scheme1(&at, assoc)?, scheme1::deliver_scheme1(&at, d)?),
        CornerParams::Scheme2 { .. } => (scheme2::place_scheme2(&at, assoc)?, scheme2::deliver_scheme2(&at, assoc, d)?),
        CornerParams::Dedicated { t } => (reference::place_dedicated(n, lambda, k, t)?, reference::deliver_dedicated(k, t, d)?),
        CornerParams::Shared { t } => (reference::place_shared(n, lambda, k, t)?, reference::deliver_shared(assoc, t, d)?),
    })
}

/// Splits every file into one segment per weighted corner; each segment is
/// placed and delivered by its corner's scheme on its own.
pub fn materialize_shared_placement(
    solution: &EnvelopeSolution,
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<Run> {
    check_run_inputs(config, assoc, d)?;
    let mut segments = Vec::with_capacity(solution.weights.len());
    for (corner, w) in &solution.weights {
        let (placement, transmissions) = corner_run(corner, config, assoc, d)?;
        segments.push(Segment {
            weight: *w,
            description: corner.params.to_string(),
            helper_mem: corner.helper_mem,
            private_mem: corner.private_mem,
            placement,
            transmissions,
        });
    }
    Ok(Run { segments })
}

/// Placement and delivery for `scheme` at `config`, segmented when needed.
pub fn build_run(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
    scheme: Scheme,
    rule: SharingRule,
) -> Result<Run> {
    let achieved = achieve(config, assoc, scheme, rule)?;
    materialize_shared_placement(&achieved.solution, config, assoc, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_association;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn four_users(ms: Rational, mp: Rational) -> (NetworkConfig, Association) {
        let cfg = NetworkConfig::new(4, 4, 2, ms, mp).unwrap();
        let a = build_association(&cfg, &[vec![1, 2, 3], vec![4]]).unwrap();
        (cfg, a)
    }

    /// Minimum over every triple of corners, by Cramer's rule on the 3×3 system.
    fn brute_force(corners: &[CornerPoint], ms: Rational, mp: Rational) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        let n = corners.len();
        let mut consider = |w: &[(usize, Rational)]| {
            if w.iter().any(|(_, x)| x.is_negative()) {
                return;
            }
            let r: Rational = w.iter().map(|&(i, x)| x * corners[i].rate).sum();
            best = Some(best.map_or(r, |b| b.min(r)));
        };
        for i in 0..n {
            let c = &corners[i];
            if c.helper_mem == ms && c.private_mem == mp {
                consider(&[(i, Rational::ONE)]);
            }
            for j in i + 1..n {
                // two-point combinations on the segment i-j
                let (a, b) = (&corners[i], &corners[j]);
                let (dx, dy) = (b.helper_mem - a.helper_mem, b.private_mem - a.private_mem);
                let lam = if !dx.is_zero() { (ms - a.helper_mem) / dx } else if !dy.is_zero() { (mp - a.private_mem) / dy } else { continue };
                if a.helper_mem + lam * dx == ms && a.private_mem + lam * dy == mp {
                    consider(&[(i, Rational::ONE - lam), (j, lam)]);
                }
                for k in j + 1..n {
                    let p = [&corners[i], &corners[j], &corners[k]];
                    let det3 = |m: [[Rational; 3]; 3]| {
                        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
                    };
                    let base = [
                        [Rational::ONE; 3],
                        [p[0].helper_mem, p[1].helper_mem, p[2].helper_mem],
                        [p[0].private_mem, p[1].private_mem, p[2].private_mem],
                    ];
                    let d = det3(base);
                    if d.is_zero() {
                        continue;
                    }
                    let rhs = [Rational::ONE, ms, mp];
                    let mut w = Vec::new();
                    for col in 0..3 {
                        let mut m = base;
                        for row in 0..3 {
                            m[row][col] = rhs[row];
                        }
                        w.push(([i, j, k][col], det3(m) / d));
                    }
                    consider(&w);
                }
            }
        }
        best
    }

    #[test]
    fn scheme2_grid_contains_the_decomposition_corners() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let g = corner_grid(&cfg, &a, SchemeTag::Scheme2).unwrap();
        let find = |ms: Rational, mp: Rational| g.iter().find(|c| c.helper_mem == ms && c.private_mem == mp).map(|c| c.rate);
        assert_eq!(find(Rational::ZERO, Rational::ONE), Some(q(3, 2)));
        assert_eq!(find(Rational::from(2), q(2, 3)), Some(q(1, 2)));
        assert_eq!(find(Rational::from(2), q(4, 3)), Some(q(1, 6)));
        assert_eq!(find(Rational::from(4), Rational::ZERO), Some(Rational::ZERO));
        let n_full = g.iter().filter(|c| c.helper_mem == Rational::from(4)).count();
        assert_eq!(n_full, 1);
    }

    #[test]
    fn nested_rule_reproduces_the_worked_decomposition() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let sol = nested_scheme2(&cfg, &a).unwrap().unwrap();
        assert_eq!(sol.achieved_rate, q(11, 12));
        let w: Vec<_> = sol.weights.iter().map(|(c, w)| (c.helper_mem, c.private_mem, *w)).collect();
        assert_eq!(
            w,
            vec![
                (Rational::ZERO, Rational::ONE, q(1, 2)),
                (Rational::from(2), q(2, 3), q(1, 4)),
                (Rational::from(2), q(4, 3), q(1, 4)),
            ]
        );
        assert!(sol.is_valid_for(Rational::ONE, Rational::ONE));
    }

    #[test]
    fn hull_rule_matches_brute_force() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let g = corner_grid(&cfg, &a, SchemeTag::Scheme2).unwrap();
        let sol = envelope_at(&g, Rational::ONE, Rational::ONE).unwrap();
        assert_eq!(sol.achieved_rate, q(31, 36));
        assert_eq!(Some(sol.achieved_rate), brute_force(&g, Rational::ONE, Rational::ONE));
        assert!(sol.is_valid_for(Rational::ONE, Rational::ONE));
        assert!(sol.supporting_violation(&g).is_none());

        let cfg6 = NetworkConfig::new(6, 6, 3, Rational::ZERO, Rational::ZERO).unwrap();
        let a6 = Association::contiguous(&cfg6, &[3, 2, 1]).unwrap();
        let g6 = corner_grid(&cfg6, &a6, SchemeTag::Scheme2).unwrap();
        for (ms, mp) in [(q(1, 2), q(1, 3)), (q(3, 2), q(5, 2)), (Rational::from(3), q(7, 4)), (q(11, 2), q(1, 2))] {
            let sol = envelope_at(&g6, ms, mp).unwrap();
            assert_eq!(Some(sol.achieved_rate), brute_force(&g6, ms, mp), "({ms}, {mp})");
            assert!(sol.supporting_violation(&g6).is_none());
        }
    }

    #[test]
    fn corner_targets_get_full_weight() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let g = corner_grid(&cfg, &a, SchemeTag::Scheme2).unwrap();
        let c = g.iter().find(|c| c.helper_mem == Rational::from(2) && c.private_mem == q(2, 3)).unwrap();
        let sol = envelope_at(&g, c.helper_mem, c.private_mem).unwrap();
        assert_eq!(sol.achieved_rate, c.rate);
        assert!(envelope_at(&g, Rational::from(3), Rational::from(2)).is_none());
    }

    #[test]
    fn unknown_lattice_point_is_direct() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let got = achieve(&cfg, &a, Scheme::Unknown, SharingRule::Hull).unwrap();
        assert!(got.direct);
        assert_eq!(got.rate, q(13, 12));
        assert_eq!(unknown_envelope(&cfg, &a).unwrap().achieved_rate, q(13, 12));
    }

    #[test]
    fn unknown_envelope_keeps_the_split_ratio() {
        let (cfg, a) = four_users(q(1, 2), q(1, 2));
        let got = achieve(&cfg, &a, Scheme::Unknown, SharingRule::Hull).unwrap();
        assert!(!got.direct);
        assert!(got.solution.is_valid_for(q(1, 2), q(1, 2)));
        // α = 1/2, M = 1: shared hull at 1 is 4 - 1·(4 - 3/2)/2, dedicated hull is 3/2
        assert_eq!(got.rate, q(1, 2) * q(11, 4) + q(1, 2) * q(3, 2));
    }

    #[test]
    fn scheme1_slice_interpolation() {
        let cfg = NetworkConfig::new(20, 20, 4, Rational::from(5), q(29, 2)).unwrap();
        let a = Association::contiguous(&cfg, &[10, 5, 3, 2]).unwrap();
        let got = achieve(&cfg, &a, Scheme::Scheme1, SharingRule::Hull).unwrap();
        assert_eq!(got.rate, q(1, 2) * q(1, 20));
        let too_low = cfg.with_memory(Rational::from(5), q(27, 2)).unwrap();
        assert!(matches!(achieve(&too_low, &a, Scheme::Scheme1, SharingRule::Hull), Err(Error::Infeasible(_))));
    }

    #[test]
    fn nested_falls_back_near_full_helper_memory() {
        let (cfg, a) = four_users(Rational::from(3), Rational::ONE);
        assert!(nested_scheme2(&cfg, &a).unwrap().is_none());
        let got = achieve(&cfg, &a, Scheme::Scheme2, SharingRule::Nested).unwrap();
        assert_eq!(got.rule, SharingRule::Hull);
        assert_eq!(got.rate, Rational::ZERO);
    }

    #[test]
    fn materialized_runs_keep_memory_and_rate() {
        let (cfg, a) = four_users(Rational::ONE, Rational::ONE);
        let d = DemandVector::identity(4);
        for rule in [SharingRule::Nested, SharingRule::Hull] {
            let achieved = achieve(&cfg, &a, Scheme::Scheme2, rule).unwrap();
            let run = materialize_shared_placement(&achieved.solution, &cfg, &a, &d).unwrap();
            assert_eq!(run.rate(), achieved.rate);
            for h in 1..=2 {
                assert_eq!(run.helper_memory(h), Rational::ONE);
            }
            for k in 1..=4 {
                assert_eq!(run.private_memory(k), Rational::ONE);
            }
        }
        let run = build_run(&cfg, &a, &d, Scheme::Scheme2, SharingRule::Nested).unwrap();
        assert_eq!(run.num_transmissions(), 10);
    }

    #[test]
    fn mixed_envelope_is_no_worse() {
        let cfg = NetworkConfig::new(6, 6, 3, q(6, 5), q(14, 5)).unwrap();
        let a = Association::contiguous(&cfg, &[3, 2, 1]).unwrap();
        let mixed = achieve_mixed(&cfg, &a).unwrap();
        for s in Scheme::ALL {
            if let Ok(r) = achieve(&cfg, &a, s, SharingRule::Hull) {
                assert!(mixed.rate <= r.rate, "{s}");
            }
        }
    }
}
