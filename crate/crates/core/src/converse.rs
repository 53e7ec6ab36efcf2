//! Index-coding converse for the association-unknown delivery.
//!
//! Every mini-subfile of `H = H1 ∪ H2` is a receiver wanting it, with the
//! side information of the user demanding its file. If the side-information
//! graph restricted to `H` is acyclic, `|H|` (in file units) lower-bounds
//! every linear index code, and equality with the achieved rate certifies
//! the delivery optimal for the placement.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;

use crate::combinatorics::{choose_q, enumerate_ksubsets, KSubset};
use crate::error::Result;
use crate::model::{check_run_inputs, Association, DemandVector, NetworkConfig, Piece, Placement, SubfileId, Tier};
use crate::rational::Rational;
use crate::scheme_unknown::{place_unknown, rate_unknown, UnknownSchemeParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConverseCertificate {
    pub h1: BTreeSet<SubfileId>,
    pub h2: BTreeSet<SubfileId>,
    /// `|H1|·F1/C(Λ,t_s) + |H2|·F2/C(K,t_p)`.
    pub alpha_lower: Rational,
    /// Rate achieved by the delivery.
    pub kappa_upper: Rational,
    pub acyclic: bool,
    pub tight: bool,
}

/// `H1`: for the user demanding `n` at helper `c`, every `W1_{n,τ}` with
/// `τ ∩ [c] = ∅`. `H2`: for the `i`-th user (group by group), every
/// `W2_{n,S}` avoiding the first `i` users.
pub fn build_h(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
) -> Result<(BTreeSet<SubfileId>, BTreeSet<SubfileId>)> {
    check_run_inputs(config, assoc, d)?;
    let tiers = UnknownSchemeParams::of(config).integral()?;
    let mut h1 = BTreeSet::new();
    let mut h2 = BTreeSet::new();
    let order = assoc.ordered_users();
    if let Some(t_s) = tiers.tier1 {
        let taus = enumerate_ksubsets(config.num_helpers, t_s);
        for &user in &order {
            let c = assoc.helper_of(user);
            for tau in taus.iter().filter(|tau| KSubset::min(tau).is_none_or(|m| m > c)) {
                h1.insert(Piece::new(Tier::Tier1, tau.clone(), None).of_file(d.of(user)));
            }
        }
    }
    if let Some(t_p) = tiers.tier2 {
        let sets = enumerate_ksubsets(config.num_users, t_p);
        for (i, &user) in order.iter().enumerate() {
            let earlier = &order[..=i];
            for s in sets.iter().filter(|s| s.is_disjoint_from(earlier)) {
                h2.insert(Piece::new(Tier::Tier2, s.clone(), None).of_file(d.of(user)));
            }
        }
    }
    Ok((h1, h2))
}

/// Whether the side-information digraph on `h` has a topological order.
/// Each element is wanted by the user demanding its file; it points to
/// every other element that user already holds.
pub fn verify_acyclic(
    placement: &Placement,
    assoc: &Association,
    d: &DemandVector,
    h: &BTreeSet<SubfileId>,
) -> bool {
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: BTreeMap<&SubfileId, _> = h.iter().map(|s| (s, graph.add_node(()))).collect();
    for (wanted, &from) in &nodes {
        let Some(receiver) = d.demander_of(wanted.file) else { continue };
        for (other, &to) in &nodes {
            if from != to && placement.knows(assoc, receiver, other) {
                graph.add_edge(from, to, ());
            }
        }
    }
    toposort(&graph, None).is_ok()
}

pub fn certify(config: &NetworkConfig, assoc: &Association, d: &DemandVector) -> Result<ConverseCertificate> {
    let (h1, h2) = build_h(config, assoc, d)?;
    let params = UnknownSchemeParams::of(config);
    let tiers = params.integral()?;
    let mut alpha_lower = Rational::ZERO;
    if let Some(t_s) = tiers.tier1 {
        alpha_lower += Rational::from(h1.len()) * params.f1 / choose_q(config.num_helpers, t_s)?;
    }
    if let Some(t_p) = tiers.tier2 {
        alpha_lower += Rational::from(h2.len()) * params.f2 / choose_q(config.num_users, t_p)?;
    }
    let kappa_upper = rate_unknown(config, assoc.profile())?;
    let placement = place_unknown(config)?;
    let all: BTreeSet<SubfileId> = h1.union(&h2).cloned().collect();
    let acyclic = verify_acyclic(&placement, assoc, d, &all);
    Ok(ConverseCertificate { h1, h2, alpha_lower, kappa_upper, acyclic, tight: acyclic && alpha_lower == kappa_upper })
}
