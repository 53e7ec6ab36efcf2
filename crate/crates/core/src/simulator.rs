//! Byte-level execution of a run: seeded file contents, cache filling, XOR
//! payloads, and per-user decoding from nothing but the user's own cache,
//! its helper's cache, and the broadcast.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::envelope::{build_run, Scheme, SharingRule};
use crate::error::{Error, Result};
use crate::model::{check_run_inputs, Association, DemandVector, NetworkConfig, Piece, Run, SubfileId};
use crate::rational::{lcm_checked, Rational};

/// Default ceiling on the synthesized file length.
pub const DEFAULT_LEN_CAP: u128 = 1 << 24;

/// `N` files of `F` pseudorandom bytes drawn from ChaCha8 seeded with `seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileLibrary {
    pub file_len: usize,
    pub files: Vec<Vec<u8>>,
    pub seed: u64,
}

impl FileLibrary {
    pub fn generate(num_files: usize, file_len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let files = (0..num_files)
            .map(|_| {
                let mut f = vec![0u8; file_len];
                rng.fill_bytes(&mut f);
                f
            })
            .collect();
        FileLibrary { file_len, files, seed }
    }

    pub fn file(&self, n: usize) -> &[u8] {
        &self.files[n - 1]
    }
}

/// Smallest multiple of every segment and piece denominator that is at
/// least `min_len`.
pub fn choose_file_len(run: &Run, min_len: usize, cap: u128) -> Result<usize> {
    let mut base: u128 = 1;
    let overflow = |needed| Error::FileLengthCap { needed, cap };
    for seg in &run.segments {
        let mut dens = vec![seg.weight.denom() as u128];
        dens.extend(seg.placement.subfile_size.values().map(|s| (seg.weight * *s).denom() as u128));
        for d in dens {
            base = lcm_checked(base, d).ok_or_else(|| overflow(u128::MAX))?;
            if base > cap {
                return Err(overflow(base));
            }
        }
    }
    let scale = (min_len as u128).div_ceil(base).max(1);
    let len = base.checked_mul(scale).ok_or_else(|| overflow(u128::MAX))?;
    if len > cap {
        return Err(overflow(len));
    }
    Ok(len as usize)
}

/// Byte range of every piece inside each segment.
struct Layout {
    ranges: Vec<BTreeMap<Piece, (usize, usize)>>,
}

impl Layout {
    fn new(run: &Run, file_len: usize) -> Self {
        let f = Rational::from(file_len);
        let mut offset = Rational::ZERO;
        let mut ranges = Vec::new();
        for seg in &run.segments {
            let mut at = offset;
            let mut map = BTreeMap::new();
            for p in &seg.placement.pieces {
                let len = seg.weight * seg.placement.size_of_tier(p.tier) * f;
                map.insert(p.clone(), (at.to_usize().expect("integral offset"), len.to_usize().expect("integral length")));
                at += len;
            }
            offset += seg.weight * f;
            ranges.push(map);
        }
        Layout { ranges }
    }

    fn bytes<'a>(&self, lib: &'a FileLibrary, seg: usize, id: &SubfileId) -> &'a [u8] {
        let (start, len) = self.ranges[seg][&id.piece];
        &lib.file(id.file)[start..start + len]
    }

    fn len(&self, seg: usize, id: &SubfileId) -> usize {
        self.ranges[seg][&id.piece].1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeFailure {
    pub segment: usize,
    pub missing: SubfileId,
    /// The transmission carrying `missing`, if any.
    pub carried_by: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserReport {
    pub user: usize,
    pub file: usize,
    pub success: bool,
    pub bytes_from_private: usize,
    pub bytes_from_helper: usize,
    pub bytes_from_air: usize,
    pub failure: Option<DecodeFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeReport {
    pub file_len: usize,
    pub users: Vec<UserReport>,
    pub air_bytes: usize,
    pub measured_rate: Rational,
    pub helper_bytes: Vec<usize>,
    pub private_bytes: Vec<usize>,
    /// Every cache within `M·F` bytes.
    pub memory_ok: bool,
    /// Every cache exactly at `M·F` bytes.
    pub memory_exact: bool,
}

impl DecodeReport {
    pub fn success(&self) -> bool {
        self.memory_ok && self.users.iter().all(|u| u.success)
    }

    pub fn first_failure(&self) -> Option<(usize, &DecodeFailure)> {
        self.users.iter().find_map(|u| u.failure.as_ref().map(|f| (u.user, f)))
    }
}

type Store = BTreeMap<(usize, SubfileId), Vec<u8>>;

/// Executes `run` on `lib` and decodes every user's demand.
pub fn simulate(
    run: &Run,
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
    lib: &FileLibrary,
) -> Result<DecodeReport> {
    check_run_inputs(config, assoc, d)?;
    let f = lib.file_len;
    let layout = Layout::new(run, f);

    let mut helper_store: Vec<Store> = vec![Store::new(); config.num_helpers];
    let mut private_store: Vec<Store> = vec![Store::new(); config.num_users];
    for (s, seg) in run.segments.iter().enumerate() {
        for (h, z) in seg.placement.helper_contents.iter().enumerate() {
            for id in z {
                helper_store[h].insert((s, id.clone()), layout.bytes(lib, s, id).to_vec());
            }
        }
        for (k, z) in seg.placement.private_contents.iter().enumerate() {
            for id in z {
                private_store[k].insert((s, id.clone()), layout.bytes(lib, s, id).to_vec());
            }
        }
    }
    let total = |st: &Store| st.values().map(Vec::len).sum::<usize>();
    let helper_bytes: Vec<usize> = helper_store.iter().map(total).collect();
    let private_bytes: Vec<usize> = private_store.iter().map(total).collect();
    let fr = Rational::from(f);
    let budget_h = config.helper_mem * fr;
    let budget_p = config.private_mem * fr;
    let within = |b: &usize, cap: Rational| Rational::from(*b) <= cap;
    let exact = |b: &usize, cap: Rational| Rational::from(*b) == cap;
    let memory_ok = helper_bytes.iter().all(|b| within(b, budget_h)) && private_bytes.iter().all(|b| within(b, budget_p));
    let memory_exact = helper_bytes.iter().all(|b| exact(b, budget_h)) && private_bytes.iter().all(|b| exact(b, budget_p));

    // broadcast
    let mut air: Vec<(usize, &crate::model::Transmission, Vec<u8>)> = Vec::new();
    let mut air_bytes = 0;
    for (s, seg) in run.segments.iter().enumerate() {
        for tx in &seg.transmissions {
            let len = layout.len(s, &tx.summands[0]);
            let mut payload = vec![0u8; len];
            for id in &tx.summands {
                for (p, b) in payload.iter_mut().zip(layout.bytes(lib, s, id)) {
                    *p ^= b;
                }
            }
            air_bytes += len;
            air.push((s, tx, payload));
        }
    }

    let mut users = Vec::with_capacity(config.num_users);
    for k in 1..=config.num_users {
        let want = d.of(k);
        let own = &private_store[k - 1];
        let shared = &helper_store[assoc.helper_of(k) - 1];
        let lookup = |key: &(usize, SubfileId)| own.get(key).or_else(|| shared.get(key));
        let mut rebuilt: BTreeMap<(usize, SubfileId), Vec<u8>> = BTreeMap::new();
        let (mut from_private, mut from_helper, mut from_air) = (0, 0, 0);
        for (s, seg) in run.segments.iter().enumerate() {
            for id in seg.placement.file_pieces(want) {
                let key = (s, id);
                if let Some(b) = own.get(&key) {
                    from_private += b.len();
                    rebuilt.insert(key, b.clone());
                } else if let Some(b) = shared.get(&key) {
                    from_helper += b.len();
                    rebuilt.insert(key, b.clone());
                }
            }
        }
        for (s, tx, payload) in &air {
            let unknown: Vec<&SubfileId> = tx
                .summands
                .iter()
                .filter(|id| lookup(&(*s, (*id).clone())).is_none() && !rebuilt.contains_key(&(*s, (*id).clone())))
                .collect();
            let [target] = unknown.as_slice() else { continue };
            if target.file != want {
                continue;
            }
            let mut bytes = payload.clone();
            for id in tx.summands.iter().filter(|id| id != target) {
                let key = (*s, id.clone());
                let known = lookup(&key).or_else(|| rebuilt.get(&key)).expect("other summands are known");
                for (p, b) in bytes.iter_mut().zip(known) {
                    *p ^= b;
                }
            }
            from_air += bytes.len();
            rebuilt.insert((*s, (*target).clone()), bytes);
        }

        let mut out = vec![0u8; f];
        let mut failure = None;
        'segments: for (s, seg) in run.segments.iter().enumerate() {
            for id in seg.placement.file_pieces(want) {
                let key = (s, id);
                match rebuilt.get(&key) {
                    Some(b) => {
                        let (start, len) = layout.ranges[s][&key.1.piece];
                        out[start..start + len].copy_from_slice(b);
                    }
                    None => {
                        let carried_by = seg
                            .transmissions
                            .iter()
                            .find(|t| t.summands.contains(&key.1))
                            .map(|t| t.to_string());
                        failure = Some(DecodeFailure { segment: s, missing: key.1, carried_by });
                        break 'segments;
                    }
                }
            }
        }
        let success = failure.is_none() && out == lib.file(want);
        users.push(UserReport {
            user: k,
            file: want,
            success,
            bytes_from_private: from_private,
            bytes_from_helper: from_helper,
            bytes_from_air: from_air,
            failure,
        });
    }
    Ok(DecodeReport {
        file_len: f,
        users,
        air_bytes,
        measured_rate: Rational::from(air_bytes) / fr,
        helper_bytes,
        private_bytes,
        memory_ok,
        memory_exact,
    })
}

/// Outcome of one end-to-end run against the analytic rate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndToEnd {
    pub report: DecodeReport,
    pub analytic_rate: Rational,
}

impl EndToEnd {
    pub fn passed(&self) -> bool {
        self.report.success() && self.report.measured_rate == self.analytic_rate
    }
}

pub fn run_end_to_end(
    config: &NetworkConfig,
    assoc: &Association,
    d: &DemandVector,
    scheme: Scheme,
    rule: SharingRule,
    seed: u64,
) -> Result<EndToEnd> {
    let run = build_run(config, assoc, d, scheme, rule)?;
    let f = choose_file_len(&run, 1, DEFAULT_LEN_CAP)?;
    let lib = FileLibrary::generate(config.num_files, f, seed);
    let report = simulate(&run, config, assoc, d, &lib)?;
    Ok(EndToEnd { report, analytic_rate: run.rate() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub trials: usize,
    pub failures: usize,
    pub worst_rate: Rational,
    /// Every distinct measured rate.
    pub rates: Vec<Rational>,
    pub first_failure: Option<(DemandVector, String)>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Every ordered choice of `K` distinct files out of `N`.
pub fn distinct_demands(num_files: usize, num_users: usize) -> Vec<DemandVector> {
    fn extend(cur: &mut Vec<usize>, used: &mut [bool], k: usize, out: &mut Vec<DemandVector>) {
        if cur.len() == k {
            out.push(DemandVector(cur.clone()));
            return;
        }
        for f in 0..used.len() {
            if !used[f] {
                used[f] = true;
                cur.push(f + 1);
                extend(cur, used, k, out);
                cur.pop();
                used[f] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; num_files], num_users, &mut out);
    out
}

/// Runs every demand in parallel; trial `i` uses file seed `seed + i`.
pub fn demand_sweep(
    config: &NetworkConfig,
    assoc: &Association,
    scheme: Scheme,
    rule: SharingRule,
    demands: &[DemandVector],
    seed: u64,
) -> Result<SweepReport> {
    let results: Vec<Result<EndToEnd>> = demands
        .par_iter()
        .enumerate()
        .map(|(i, d)| run_end_to_end(config, assoc, d, scheme, rule, seed.wrapping_add(i as u64)))
        .collect();
    let mut failures = 0;
    let mut rates = Vec::new();
    let mut first_failure = None;
    for (d, r) in demands.iter().zip(results) {
        let e = r?;
        if !rates.contains(&e.report.measured_rate) {
            rates.push(e.report.measured_rate);
        }
        if !e.passed() {
            failures += 1;
            if first_failure.is_none() {
                let why = match e.report.first_failure() {
                    Some((u, f)) => format!(
                        "user {u} cannot recover {} in segment {} (carried by {})",
                        f.missing,
                        f.segment,
                        f.carried_by.as_deref().unwrap_or("no transmission")
                    ),
                    None if !e.report.memory_ok => "cache over budget".to_string(),
                    None => format!("measured {} against analytic {}", e.report.measured_rate, e.analytic_rate),
                };
                first_failure = Some((d.clone(), why));
            }
        }
    }
    rates.sort();
    Ok(SweepReport {
        trials: demands.len(),
        failures,
        worst_rate: rates.last().copied().unwrap_or(Rational::ZERO),
        rates,
        first_failure,
    })
}

/// `trials` random distinct demands drawn from `seed`.
pub fn adversarial_sweep(
    config: &NetworkConfig,
    assoc: &Association,
    scheme: Scheme,
    rule: SharingRule,
    trials: usize,
    seed: u64,
) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut files: Vec<usize> = (1..=config.num_files).collect();
    let demands: Vec<DemandVector> = (0..trials.max(1))
        .map(|_| {
            files.shuffle(&mut rng);
            DemandVector(files[..config.num_users].to_vec())
        })
        .collect();
    demand_sweep(config, assoc, scheme, rule, &demands, seed)
}
