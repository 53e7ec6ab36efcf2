//! Association-known scheme with a two-level split over helpers and
//! intra-group positions.
//!
//! Each file is split into `C(Λ, t_s) C(L_1, t_p)` mini-subfiles
//! `W_{n,τ,ρ}` with `τ ⊆ [Λ]`, `ρ ⊆ [L_1]`, where `t_s = Λ M_s/N` and
//! `t_p = L_1 M_p/(N - M_s)`. Helper `λ` stores every `τ ∋ λ`; user
//! `U_λ(j)` stores every `τ ∌ λ` with `j ∈ ρ`. For each `T × S` with
//! `|T| = t_s+1`, `|S| = t_p+1` the server XORs `W_{d, T∖λ, S∖j}` over the
//! users `U_λ(j)` present in `T × S`.
//!
//! `t_s = 0` runs the dedicated-cache scheme with `t = K M_p/N` instead.

use crate::bounds::reference;
use crate::combinatorics::{choose_q, enumerate_ksubsets};
use crate::error::{Error, Result};
use crate::model::{
    check_run_inputs, Association, DemandVector, Label, NetworkConfig, Piece, Placement, Tier,
    Transmission,
};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme2Params {
    /// `t_s = 0`: dedicated caches only.
    Dedicated { t: usize },
    TwoLevel { t_s: usize, t_p: usize },
}

fn non_integral(what: String) -> Error {
    Error::NonIntegral { scheme: "scheme 2", what }
}

impl Scheme2Params {
    pub fn of(config: &NetworkConfig, assoc: &Association) -> Result<Self> {
        let n = config.n();
        let lambda = config.num_helpers;
        let l1 = assoc.largest_group();
        let ts = Rational::from(lambda) * config.helper_mem / n;
        let t_s = ts.to_usize().ok_or_else(|| non_integral(format!("t_s = ΛMs/N = {ts}")))?;
        if t_s == 0 {
            return Ok(Scheme2Params::Dedicated { t: reference::dedicated_t(config.num_users, config.num_files, config.private_mem)? });
        }
        if t_s == lambda {
            return Ok(Scheme2Params::TwoLevel { t_s, t_p: 0 });
        }
        let tp = Rational::from(l1) * config.private_mem / (n - config.helper_mem);
        let t_p = tp
            .to_usize()
            .filter(|&t| t <= l1)
            .ok_or_else(|| non_integral(format!("t_p = L1·Mp/(N-Ms) = {tp}")))?;
        Ok(Scheme2Params::TwoLevel { t_s, t_p })
    }
}

fn mini_size(lambda: usize, l1: usize, t_s: usize, t_p: usize) -> Result<Rational> {
    Ok((choose_q(lambda, t_s)? * choose_q(l1, t_p)?).recip())
}

pub fn place_scheme2(config: &NetworkConfig, assoc: &Association) -> Result<Placement> {
    let (t_s, t_p) = match Scheme2Params::of(config, assoc)? {
        Scheme2Params::Dedicated { t } => {
            return reference::place_dedicated(config.num_files, config.num_helpers, config.num_users, t)
        }
        Scheme2Params::TwoLevel { t_s, t_p } => (t_s, t_p),
    };
    let lambda = config.num_helpers;
    let l1 = assoc.largest_group();
    let mut placement = Placement::empty(config.num_files, lambda, config.num_users);
    placement.subfile_size.insert(Tier::TwoLevel, mini_size(lambda, l1, t_s, t_p)?);
    let rhos = enumerate_ksubsets(l1, t_p);
    for tau in enumerate_ksubsets(lambda, t_s) {
        for rho in &rhos {
            let piece = Piece::new(Tier::TwoLevel, tau.clone(), Some(rho.clone()));
            for n in 1..=config.num_files {
                let id = piece.of_file(n);
                for h in 1..=lambda {
                    if tau.contains(h) {
                        placement.helper_contents[h - 1].insert(id.clone());
                        continue;
                    }
                    for j in rho.iter() {
                        if let Some(u) = assoc.user_at(h, j) {
                            placement.private_contents[u - 1].insert(id.clone());
                        }
                    }
                }
            }
            placement.pieces.push(piece);
        }
    }
    Ok(placement)
}

/// `T` lexicographic outer, `S` lexicographic inner; sets reaching no user
/// send nothing.
pub fn deliver_scheme2(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<Vec<Transmission>> {
    check_run_inputs(config, assoc, d)?;
    let (t_s, t_p) = match Scheme2Params::of(config, assoc)? {
        Scheme2Params::Dedicated { t } => return reference::deliver_dedicated(config.num_users, t, d),
        Scheme2Params::TwoLevel { t_s, t_p } => (t_s, t_p),
    };
    let lambda = config.num_helpers;
    let l1 = assoc.largest_group();
    let size = mini_size(lambda, l1, t_s, t_p)?;
    let position_sets = enumerate_ksubsets(l1, t_p + 1);
    let mut out = Vec::new();
    for helpers in enumerate_ksubsets(lambda, t_s + 1) {
        for positions in &position_sets {
            let mut summands = Vec::new();
            for h in helpers.iter() {
                for j in positions.iter() {
                    if let Some(u) = assoc.user_at(h, j) {
                        let piece = Piece::new(Tier::TwoLevel, helpers.without(h), Some(positions.without(j)));
                        summands.push(piece.of_file(d.of(u)));
                    }
                }
            }
            if !summands.is_empty() {
                out.push(Transmission {
                    label: Label::Product { helpers: helpers.clone(), positions: positions.clone() },
                    summands,
                    size,
                });
            }
        }
    }
    Ok(out)
}

/// `Σ_{n=1}^{Λ-t_s} C(Λ-n, t_s) [C(L_1, t_p+1) - C(L_1-L_n, t_p+1)] / (C(Λ,t_s) C(L_1,t_p))`.
pub fn rate_scheme2(config: &NetworkConfig, assoc: &Association) -> Result<Rational> {
    let (t_s, t_p) = match Scheme2Params::of(config, assoc)? {
        Scheme2Params::Dedicated { t } => return Ok(reference::dedicated_rate_at(config.num_users, t)),
        Scheme2Params::TwoLevel { t_s, t_p } => (t_s, t_p),
    };
    let lambda = config.num_helpers;
    let profile = assoc.profile();
    let l1 = assoc.largest_group();
    let mut count = Rational::ZERO;
    for n in 1..=lambda - t_s {
        let reached = choose_q(l1, t_p + 1)? - choose_q(l1 - profile[n - 1], t_p + 1)?;
        count += choose_q(lambda - n, t_s)? * reached;
    }
    Ok(count * mini_size(lambda, l1, t_s, t_p)?)
}
