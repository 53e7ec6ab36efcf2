//! Network configuration, user-to-helper association, demands, subfile
//! naming, and the placement / transmission containers shared by every
//! scheme.
//!
//! Files, users and helpers are numbered from 1. Helpers are relabeled
//! internally so that the association profile is non-increasing; the
//! user-supplied labels survive in [`Association::original_label`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::combinatorics::KSubset;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `N` files, `K` users, `Λ` helpers, helper memory `M_s`, private memory `M_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkConfig {
    pub num_files: usize,
    pub num_users: usize,
    pub num_helpers: usize,
    pub helper_mem: Rational,
    pub private_mem: Rational,
}

impl NetworkConfig {
    pub fn new(
        num_files: usize,
        num_users: usize,
        num_helpers: usize,
        helper_mem: Rational,
        private_mem: Rational,
    ) -> Result<Self> {
        let cfg = NetworkConfig { num_files, num_users, num_helpers, helper_mem, private_mem };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.num_files == 0 || self.num_users == 0 || self.num_helpers == 0 {
            return bad("N, K and Λ must be positive".into());
        }
        if self.num_files < self.num_users {
            return bad(format!("N = {} must be at least K = {}", self.num_files, self.num_users));
        }
        if self.num_helpers > self.num_users {
            return bad(format!("Λ = {} must not exceed K = {}", self.num_helpers, self.num_users));
        }
        if self.helper_mem.is_negative() || self.private_mem.is_negative() {
            return bad("memory sizes must be non-negative".into());
        }
        if self.total_mem() > Rational::from(self.num_files) {
            return bad(format!(
                "Ms + Mp = {} exceeds N = {}",
                self.total_mem(),
                self.num_files
            ));
        }
        Ok(())
    }

    pub fn total_mem(&self) -> Rational {
        self.helper_mem + self.private_mem
    }

    /// Same network at a different memory point.
    pub fn with_memory(&self, helper_mem: Rational, private_mem: Rational) -> Result<Self> {
        NetworkConfig::new(self.num_files, self.num_users, self.num_helpers, helper_mem, private_mem)
    }

    pub fn n(&self) -> Rational {
        Rational::from(self.num_files)
    }
}

/// A partition of the users into helper groups, relabeled so that group
/// sizes are non-increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    groups: Vec<Vec<usize>>,
    profile: Vec<usize>,
    cache_of: Vec<usize>,
    original_label: Vec<usize>,
}

/// Builds the internal association from a user-supplied partition, where
/// `partition[i]` lists the users attached to helper label `i + 1`.
pub fn build_association(config: &NetworkConfig, partition: &[Vec<usize>]) -> Result<Association> {
    let k = config.num_users;
    if partition.len() != config.num_helpers {
        return Err(Error::AssociationShape(format!(
            "expected {} helper groups, got {}",
            config.num_helpers,
            partition.len()
        )));
    }
    let mut owner: Vec<Option<usize>> = vec![None; k];
    for (label, group) in partition.iter().enumerate() {
        for &user in group {
            if user == 0 || user > k {
                return Err(Error::InvalidAssociation {
                    user,
                    reason: format!("not a user id in [1..{k}]"),
                });
            }
            if let Some(prev) = owner[user - 1] {
                return Err(Error::InvalidAssociation {
                    user,
                    reason: format!("assigned to helpers {} and {}", prev + 1, label + 1),
                });
            }
            owner[user - 1] = Some(label);
        }
    }
    if let Some(missing) = owner.iter().position(Option::is_none) {
        return Err(Error::InvalidAssociation {
            user: missing + 1,
            reason: "not attached to any helper".into(),
        });
    }

    let mut order: Vec<usize> = (0..partition.len()).collect();
    // stable: ties keep the original label order
    order.sort_by_key(|&i| std::cmp::Reverse(partition[i].len()));

    let groups: Vec<Vec<usize>> = order
        .iter()
        .map(|&i| {
            let mut g = partition[i].clone();
            g.sort_unstable();
            g
        })
        .collect();
    let profile = groups.iter().map(Vec::len).collect();
    let mut cache_of = vec![0; k];
    for (h, g) in groups.iter().enumerate() {
        for &u in g {
            cache_of[u - 1] = h + 1;
        }
    }
    let original_label = order.iter().map(|&i| i + 1).collect();
    Ok(Association { groups, profile, cache_of, original_label })
}

impl Association {
    /// Consecutive users per group: profile `(3, 1)` gives `{{1,2,3},{4}}`.
    pub fn contiguous(config: &NetworkConfig, profile: &[usize]) -> Result<Self> {
        let mut next = 1;
        let partition: Vec<Vec<usize>> = profile
            .iter()
            .map(|&len| {
                let g = (next..next + len).collect();
                next += len;
                g
            })
            .collect();
        build_association(config, &partition)
    }

    pub fn num_helpers(&self) -> usize {
        self.groups.len()
    }

    pub fn num_users(&self) -> usize {
        self.cache_of.len()
    }

    /// The non-increasing profile `L`.
    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// `L_1`, the size of the largest group.
    pub fn largest_group(&self) -> usize {
        self.profile.first().copied().unwrap_or(0)
    }

    /// Users of internal helper `helper` (1-based), ascending.
    pub fn group(&self, helper: usize) -> &[usize] {
        &self.groups[helper - 1]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// `U_λ(j)`: the `j`-th user (1-based) of helper `λ`.
    pub fn user_at(&self, helper: usize, j: usize) -> Option<usize> {
        self.groups.get(helper - 1)?.get(j.checked_sub(1)?).copied()
    }

    /// Internal helper `λ_k` serving `user`.
    pub fn helper_of(&self, user: usize) -> usize {
        self.cache_of[user - 1]
    }

    /// Position `j` of `user` within its group.
    pub fn position_of(&self, user: usize) -> usize {
        let g = self.group(self.helper_of(user));
        g.iter().position(|&u| u == user).expect("user in its own group") + 1
    }

    /// User-supplied label of each internal helper.
    pub fn original_label(&self) -> &[usize] {
        &self.original_label
    }

    /// Users listed group by group in internal helper order.
    pub fn ordered_users(&self) -> Vec<usize> {
        self.groups.iter().flatten().copied().collect()
    }

    /// Reconstructs the partition as it was supplied.
    pub fn to_original_partition(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.groups.len()];
        for (internal, &label) in self.original_label.iter().enumerate() {
            out[label - 1] = self.groups[internal].clone();
        }
        out
    }
}

/// `d_k` for every user `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandVector(pub Vec<usize>);

impl DemandVector {
    /// User `k` demands file `k`.
    pub fn identity(num_users: usize) -> Self {
        DemandVector((1..=num_users).collect())
    }

    pub fn of(&self, user: usize) -> usize {
        self.0[user - 1]
    }

    /// The user demanding `file`, if any.
    pub fn demander_of(&self, file: usize) -> Option<usize> {
        self.0.iter().position(|&f| f == file).map(|p| p + 1)
    }
}

pub fn validate_demand(config: &NetworkConfig, d: &DemandVector) -> Result<()> {
    if d.0.len() != config.num_users {
        return Err(Error::InvalidDemand {
            position: d.0.len().min(config.num_users) + 1,
            reason: format!("expected {} demands, got {}", config.num_users, d.0.len()),
        });
    }
    let mut seen = BTreeMap::new();
    for (i, &f) in d.0.iter().enumerate() {
        if f == 0 || f > config.num_files {
            return Err(Error::InvalidDemand {
                position: i + 1,
                reason: format!("file {f} outside [1..{}]", config.num_files),
            });
        }
        if let Some(first) = seen.insert(f, i + 1) {
            return Err(Error::InvalidDemand {
                position: i + 1,
                reason: format!("file {f} already demanded by user {first}"),
            });
        }
    }
    Ok(())
}

/// Checks that an association and a demand belong to `config`.
pub fn check_run_inputs(config: &NetworkConfig, assoc: &Association, d: &DemandVector) -> Result<()> {
    if assoc.num_users() != config.num_users || assoc.num_helpers() != config.num_helpers {
        return Err(Error::AssociationShape(format!(
            "association covers {} users on {} helpers, config has K = {}, Λ = {}",
            assoc.num_users(),
            assoc.num_helpers(),
            config.num_users,
            config.num_helpers
        )));
    }
    validate_demand(config, d)
}

/// Which family of subfiles a piece belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    /// Helper-cached part indexed by `τ ⊆ [Λ]` (association-unknown scheme).
    Tier1,
    /// Private-cached part indexed by `ρ ⊆ [K]` (association-unknown scheme).
    Tier2,
    /// One-level split indexed by `τ ⊆ [K]` (scheme 1 and dedicated caches).
    Single,
    /// Two-level split indexed by `τ ⊆ [Λ]` and `ρ ⊆ [L_1]` (scheme 2).
    TwoLevel,
}

/// A piece of every file: the same coordinates exist for each file `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub tier: Tier,
    pub idx_a: KSubset,
    pub idx_b: Option<KSubset>,
}

impl Piece {
    pub fn new(tier: Tier, idx_a: KSubset, idx_b: Option<KSubset>) -> Self {
        Piece { tier, idx_a, idx_b }
    }

    pub fn of_file(&self, file: usize) -> SubfileId {
        SubfileId { file, piece: self.clone() }
    }
}

/// One mini-subfile: a piece of a particular file.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubfileId {
    pub file: usize,
    pub piece: Piece,
}

impl SubfileId {
    pub fn new(file: usize, tier: Tier, idx_a: KSubset, idx_b: Option<KSubset>) -> Self {
        SubfileId { file, piece: Piece { tier, idx_a, idx_b } }
    }

    pub fn tier(&self) -> Tier {
        self.piece.tier
    }

    pub fn idx_a(&self) -> &KSubset {
        &self.piece.idx_a
    }

    pub fn idx_b(&self) -> Option<&KSubset> {
        self.piece.idx_b.as_ref()
    }
}

impl fmt::Display for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.piece.tier {
            Tier::Tier1 => "W1",
            Tier::Tier2 => "W2",
            Tier::Single | Tier::TwoLevel => "W",
        };
        write!(f, "{tag}[{},{}", self.file, self.piece.idx_a)?;
        if let Some(b) = &self.piece.idx_b {
            write!(f, ",{b}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cache contents for one scheme run. Sizes are fractions of the file
/// (or of the segment, inside a memory-sharing run).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub num_files: usize,
    /// The pieces every file is split into, in canonical order.
    pub pieces: Vec<Piece>,
    pub subfile_size: BTreeMap<Tier, Rational>,
    /// `Z_λ`, indexed by internal helper `λ - 1`.
    pub helper_contents: Vec<BTreeSet<SubfileId>>,
    /// `Z_k`, indexed by user `k - 1`.
    pub private_contents: Vec<BTreeSet<SubfileId>>,
}

impl Placement {
    pub fn empty(num_files: usize, num_helpers: usize, num_users: usize) -> Self {
        Placement {
            num_files,
            pieces: Vec::new(),
            subfile_size: BTreeMap::new(),
            helper_contents: vec![BTreeSet::new(); num_helpers],
            private_contents: vec![BTreeSet::new(); num_users],
        }
    }

    pub fn size_of_tier(&self, tier: Tier) -> Rational {
        self.subfile_size.get(&tier).copied().unwrap_or(Rational::ZERO)
    }

    pub fn size_of(&self, id: &SubfileId) -> Rational {
        self.size_of_tier(id.tier())
    }

    /// Number of pieces per file.
    pub fn subpacketization(&self) -> usize {
        self.pieces.len()
    }

    pub fn file_pieces(&self, file: usize) -> impl Iterator<Item = SubfileId> + '_ {
        self.pieces.iter().map(move |p| p.of_file(file))
    }

    pub fn helper_memory(&self, helper: usize) -> Rational {
        self.helper_contents[helper - 1].iter().map(|s| self.size_of(s)).sum()
    }

    pub fn private_memory(&self, user: usize) -> Rational {
        self.private_contents[user - 1].iter().map(|s| self.size_of(s)).sum()
    }

    pub fn helper(&self, helper: usize) -> &BTreeSet<SubfileId> {
        &self.helper_contents[helper - 1]
    }

    pub fn private(&self, user: usize) -> &BTreeSet<SubfileId> {
        &self.private_contents[user - 1]
    }

    /// Whether `user` can read `id` from its own cache or its helper's.
    pub fn knows(&self, assoc: &Association, user: usize, id: &SubfileId) -> bool {
        self.private(user).contains(id) || self.helper(assoc.helper_of(user)).contains(id)
    }

    /// First `(user, subfile)` stored both privately and at the user's helper.
    pub fn overlap(&self, assoc: &Association) -> Option<(usize, SubfileId)> {
        (1..=self.private_contents.len()).find_map(|k| {
            let helper = self.helper(assoc.helper_of(k));
            self.private(k).intersection(helper).next().map(|s| (k, s.clone()))
        })
    }

    /// Sum of piece sizes over one file; 1 for a complete split.
    pub fn coverage(&self) -> Rational {
        self.pieces.iter().map(|p| self.size_of_tier(p.tier)).sum()
    }
}

/// The generating index of a transmission.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// `X_{T,j}`: round `j`, helper set `T`.
    Round { round: usize, helpers: KSubset },
    /// `X_S` over users, optionally for one refinement piece.
    Users { users: KSubset, piece: Option<usize> },
    /// `X_{T×S}`: helper set `T`, intra-group position set `S`.
    Product { helpers: KSubset, positions: KSubset },
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Round { round, helpers } => write!(f, "X[{helpers},{round}]"),
            Label::Users { users, piece: None } => write!(f, "X[{users}]"),
            Label::Users { users, piece: Some(p) } => write!(f, "X[{users}#{p}]"),
            Label::Product { helpers, positions } => write!(f, "X[{helpers},{positions}]"),
        }
    }
}

/// XOR of equal-size subfiles broadcast on the shared link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub label: Label,
    pub summands: Vec<SubfileId>,
    pub size: Rational,
}

impl fmt::Display for Transmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{} = {}", self.label, parts.join(" + "))
    }
}

/// Total normalized length of a transmission list.
pub fn total_size(transmissions: &[Transmission]) -> Rational {
    transmissions.iter().map(|t| t.size).sum()
}

/// One independently placed and delivered part of every file.
#[derive(Debug, Clone)]
pub struct Segment {
    /// Fraction of each file carried by this segment.
    pub weight: Rational,
    pub description: String,
    /// Memory point the segment's scheme runs at.
    pub helper_mem: Rational,
    pub private_mem: Rational,
    pub placement: Placement,
    pub transmissions: Vec<Transmission>,
}

/// A full scheme execution: one segment for a direct run, several under
/// memory sharing.
#[derive(Debug, Clone)]
pub struct Run {
    pub segments: Vec<Segment>,
}

impl Run {
    pub fn single(
        description: impl Into<String>,
        helper_mem: Rational,
        private_mem: Rational,
        placement: Placement,
        transmissions: Vec<Transmission>,
    ) -> Self {
        Run {
            segments: vec![Segment {
                weight: Rational::ONE,
                description: description.into(),
                helper_mem,
                private_mem,
                placement,
                transmissions,
            }],
        }
    }

    /// Normalized delivery load `Σ weight · Σ size`.
    pub fn rate(&self) -> Rational {
        self.segments.iter().map(|s| s.weight * total_size(&s.transmissions)).sum()
    }

    pub fn num_transmissions(&self) -> usize {
        self.segments.iter().map(|s| s.transmissions.len()).sum()
    }

    pub fn helper_memory(&self, helper: usize) -> Rational {
        self.segments.iter().map(|s| s.weight * s.placement.helper_memory(helper)).sum()
    }

    pub fn private_memory(&self, user: usize) -> Rational {
        self.segments.iter().map(|s| s.weight * s.placement.private_memory(user)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Formula,
    Simulated,
    Envelope,
    Bound,
}

/// A point on a rate-memory surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatePoint {
    pub helper_mem: Rational,
    pub private_mem: Rational,
    pub rate: Rational,
    pub provenance: Provenance,
}

impl fmt::Display for RatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R({}, {}) = {} ({}) [{:?}]",
            self.helper_mem,
            self.private_mem,
            self.rate,
            self.rate.to_decimal_string(),
            self.provenance
        )
    }
}
