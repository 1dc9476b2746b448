//! Worst-case radius of affine list decoding.
//!
//! `n_{k,E}` is the least length `n` such that every set of `E` error
//! positions in `[0, n)` misses at least one `k`-term arithmetic progression.
//! Equivalently, with `h(n)` the minimum number of positions hitting every
//! `k`-term progression in `[0, n)`, `n_{k,E} = min { n : h(n) >= E + 1 }`.
//! `h` is computed for increasing `n` with an exact branch-and-bound, using
//! `h(n) - h(n-1)` in `{0, 1}` and the values already known for shorter
//! lengths as suffix lower bounds.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Error positions `S` inside `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorSupport {
    positions: Vec<usize>,
    n: usize,
}

impl ErrorSupport {
    pub fn new(mut positions: Vec<usize>, n: usize) -> Result<Self> {
        positions.sort_unstable();
        positions.dedup();
        if positions.last().is_some_and(|&p| p >= n) {
            return Err(Error::Parameter(format!("support exceeds length {n}")));
        }
        Ok(Self { positions, n })
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self) -> usize {
        self.positions.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.positions.binary_search(&i).is_ok()
    }
}

/// Outcome of the radius search for one `(k, E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub k: usize,
    pub errors: usize,
    /// `n_{k,E}`.
    pub n: usize,
    /// Weight-`E` support hitting every `k`-progression of length `n - 1`.
    pub witness: ErrorSupport,
}

/// First progression `(r, s)` of `k` terms inside `[0, n)` avoiding `S`, in
/// order of increasing `s` then `r`.
pub fn surviving_progression(support: &ErrorSupport, n: usize, k: usize) -> Option<(usize, usize)> {
    if k == 0 {
        return Some((0, 1));
    }
    if n < k {
        return None;
    }
    let max_step = if k == 1 { 1 } else { (n - 1) / (k - 1) };
    (1..=max_step).find_map(|s| {
        (0..n - (k - 1) * s)
            .find(|&r| (0..k).all(|i| !support.contains(r + i * s)))
            .map(|r| (r, s))
    })
}

/// Whether `S` meets every `k`-term arithmetic progression inside `[0, n)`.
pub fn hits_all_aps(support: &ErrorSupport, n: usize, k: usize) -> bool {
    surviving_progression(support, n, k).is_none()
}

pub fn smallest_prime_factor(k: usize) -> usize {
    (2..=k).find(|d| k % d == 0).unwrap_or(k)
}

/// Largest length handled by the hitting-set search.
pub const MAX_LENGTH: usize = 64 * WORDS;
const WORDS: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Mask([u64; WORDS]);

impl Mask {
    fn with(mut self, i: usize) -> Self {
        self.0[i / 64] |= 1 << (i % 64);
        self
    }

    fn meets(&self, other: &Mask) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn positions(&self) -> Vec<usize> {
        (0..MAX_LENGTH)
            .filter(|&i| self.0[i / 64] >> (i % 64) & 1 == 1)
            .collect()
    }
}

/// Search was stopped by its deadline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Timeout;

/// Incremental solver for `h(n)` at a fixed progression length `k`.
#[derive(Clone, Debug)]
pub struct RadiusSolver {
    k: usize,
    /// `min_hit[len]` = `h(len)`.
    min_hit: Vec<usize>,
    /// An optimal hitting set for each length.
    optimal: Vec<Vec<usize>>,
}

struct SearchCtx<'a> {
    n: usize,
    budget: usize,
    min_hit: &'a [usize],
    /// Progressions grouped by their last element.
    ending_at: Vec<Vec<Mask>>,
    deadline: Option<Instant>,
    /// Smallest top-level branch index known to hold a solution.
    found_at: AtomicUsize,
    timed_out: AtomicBool,
    nodes: AtomicU64,
}

impl SearchCtx<'_> {
    /// Smallest last element of a progression not yet hit by `chosen`,
    /// scanning from `from` (everything ending earlier is hit).
    fn first_unhit(&self, chosen: &Mask, from: usize) -> Option<usize> {
        (from..self.n).find(|&p| self.ending_at[p].iter().any(|ap| !ap.meets(chosen)))
    }

    fn tick(&self, branch: usize) -> bool {
        if self.found_at.load(Ordering::Relaxed) < branch || self.timed_out.load(Ordering::Relaxed) {
            return false;
        }
        let nodes = self.nodes.fetch_add(1, Ordering::Relaxed);
        if nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }

    /// Branch choices for the next element `x` of the hitting set, given the
    /// elements so far are all below `from`. `x` must not exceed the end of
    /// the first unhit progression, and enough budget must remain for the
    /// suffix `(x, n)`, whose progressions are all still unhit.
    fn choices(&self, chosen: &Mask, count: usize, from: usize) -> std::result::Result<Vec<usize>, ()> {
        let Some(last) = self.first_unhit(chosen, from) else {
            return Err(());
        };
        if count == self.budget {
            return Ok(Vec::new());
        }
        Ok((from..=last)
            .rev()
            .take_while(|&x| count + 1 + self.min_hit[self.n - x - 1] <= self.budget)
            .collect())
    }

    fn dfs(&self, branch: usize, chosen: Mask, count: usize, from: usize) -> Option<Mask> {
        if !self.tick(branch) {
            return None;
        }
        let xs = match self.choices(&chosen, count, from) {
            Err(()) => return Some(chosen),
            Ok(xs) => xs,
        };
        xs.into_iter()
            .find_map(|x| self.dfs(branch, chosen.with(x), count + 1, x + 1))
    }

    /// Runs the subtrees below the first two levels in parallel. The result is
    /// the solution of the lowest-indexed subtree that has one, whatever the
    /// schedule: a subtree only gives up once a lower index has succeeded.
    fn solve(&self) -> Option<Mask> {
        let root = Mask::default();
        let first = match self.choices(&root, 0, 0) {
            Err(()) => return Some(root),
            Ok(xs) => xs,
        };
        let pairs: Vec<(Mask, usize)> = first
            .into_iter()
            .flat_map(|x| {
                let m = root.with(x);
                match self.choices(&m, 1, x + 1) {
                    Err(()) => vec![(m, usize::MAX)],
                    Ok(ys) => ys.into_iter().map(move |y| (m.with(y), y)).collect(),
                }
            })
            .collect();
        pairs
            .into_par_iter()
            .enumerate()
            .find_map_first(|(branch, (m, y))| {
                let hit = if y == usize::MAX {
                    Some(m)
                } else {
                    self.dfs(branch, m, 2, y + 1)
                };
                if hit.is_some() {
                    self.found_at.fetch_min(branch, Ordering::Relaxed);
                }
                hit
            })
    }
}

impl RadiusSolver {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter("progression length must be at least 2".into()));
        }
        Ok(Self {
            k,
            min_hit: vec![0],
            optimal: vec![Vec::new()],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Lengths solved so far.
    pub fn solved_len(&self) -> usize {
        self.min_hit.len() - 1
    }

    /// `h(n)` and an optimal hitting set, if already computed.
    pub fn hitting_number(&self, n: usize) -> Option<(usize, &[usize])> {
        self.min_hit
            .get(n)
            .map(|&h| (h, self.optimal[n].as_slice()))
    }

    /// Progressions of the ambient length `n`, grouped by last element.
    fn progressions(&self, n: usize) -> Vec<Vec<Mask>> {
        let k = self.k;
        (0..n)
            .map(|last| {
                (1..=last / (k - 1))
                    .map(|s| {
                        (0..k).fold(Mask::default(), |m, i| m.with(last - i * s))
                    })
                    .collect()
            })
            .collect()
    }

    /// Solves lengths up to `n`.
    pub fn extend_to(&mut self, n: usize, deadline: Option<Instant>) -> std::result::Result<(), Timeout> {
        assert!(n <= MAX_LENGTH, "length {n} exceeds {MAX_LENGTH}");
        while self.solved_len() < n {
            let len = self.solved_len() + 1;
            let prev = self.min_hit[len - 1];
            let ctx = SearchCtx {
                n: len,
                budget: prev,
                min_hit: &self.min_hit,
                ending_at: self.progressions(len),
                deadline,
                found_at: AtomicUsize::new(usize::MAX),
                timed_out: AtomicBool::new(false),
                nodes: AtomicU64::new(0),
            };
            let found = ctx.solve();
            if ctx.timed_out.load(Ordering::Relaxed) && found.is_none() {
                return Err(Timeout);
            }
            let (h, set) = match found {
                Some(mask) => (prev, mask.positions()),
                None => {
                    // adding the new last position to an optimum of len - 1 hits everything
                    let mut s = self.optimal[len - 1].clone();
                    s.push(len - 1);
                    (prev + 1, s)
                }
            };
            self.min_hit.push(h);
            self.optimal.push(set);
        }
        Ok(())
    }

    /// `n_{k,E}` with a witness for length `n_{k,E} - 1`.
    pub fn n_k_e(&mut self, errors: usize, deadline: Option<Instant>) -> std::result::Result<RadiusResult, Timeout> {
        loop {
            if let Some(n) = (1..self.min_hit.len()).find(|&n| self.min_hit[n] > errors) {
                // h grows by at most one per step, so h(n - 1) = errors
                let witness = ErrorSupport::new(self.optimal[n - 1].clone(), n - 1)
                    .expect("positions lie below n - 1");
                debug_assert_eq!(witness.weight(), errors);
                return Ok(RadiusResult {
                    k: self.k,
                    errors,
                    n,
                    witness,
                });
            }
            let next = self.solved_len() + 1;
            self.extend_to(next, deadline)?;
        }
    }
}

/// Minimum size of a set meeting every `k`-term progression in `[0, n)`.
pub fn min_ap_hitting_number(n: usize, k: usize) -> Result<usize> {
    let mut solver = RadiusSolver::new(k)?;
    if n > MAX_LENGTH {
        return Err(Error::Parameter(format!("length {n} exceeds {MAX_LENGTH}")));
    }
    solver.extend_to(n, None).expect("no deadline");
    Ok(solver.min_hit[n])
}

/// `n_{k,E}` together with a weight-`E` witness for `n_{k,E} - 1`.
#[allow(non_snake_case)]
pub fn compute_n_kE(k: usize, errors: usize) -> Result<RadiusResult> {
    let mut solver = RadiusSolver::new(k)?;
    if k * (errors + 1) > MAX_LENGTH {
        return Err(Error::Parameter(format!(
            "k (E + 1) = {} may exceed the supported length {MAX_LENGTH}",
            k * (errors + 1)
        )));
    }
    Ok(solver.n_k_e(errors, None).expect("no deadline"))
}

/// Largest subset of `[0, n)` without a `k`-term arithmetic progression.
///
/// Independent of the hitting-set solver: a direct include/exclude search
/// over bitmasks, pruned with the already-computed values for shorter
/// lengths (a suffix of length `l` contributes at most `r(k, l)`).
pub fn erdos_turan_r(k: usize, n: usize) -> Result<usize> {
    if n > 64 {
        return Err(Error::Parameter("erdos_turan_r supports n <= 64".into()));
    }
    if k == 0 {
        return Ok(0);
    }
    let mut best_by_len = vec![0usize; n + 1];
    for len in 1..=n {
        let mut best = best_by_len[len - 1];
        // r grows by at most one per extra position
        best_by_len[len] = best + 1;
        ap_free_dfs(k, len, 0, 0, 0, &best_by_len, &mut best);
        best_by_len[len] = best;
    }
    Ok(best_by_len[n])
}

fn closes_progression(k: usize, set: u64, x: usize) -> bool {
    if k == 1 {
        return true;
    }
    (1..=x / (k - 1)).any(|s| (1..k).all(|j| set >> (x - j * s) & 1 == 1))
}

fn ap_free_dfs(k: usize, len: usize, pos: usize, set: u64, size: usize, table: &[usize], best: &mut usize) {
    if size > *best {
        *best = size;
    }
    if pos == len || size + table[len - pos] <= *best {
        return;
    }
    if !closes_progression(k, set, pos) {
        ap_free_dfs(k, len, pos + 1, set | 1 << pos, size + 1, table, best);
    }
    ap_free_dfs(k, len, pos + 1, set, size, table, best);
}

/// Recursive adversarial error vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCaseVector {
    /// `v_i`, of length `k^(i-1) (k-1)`.
    pub v: Vec<bool>,
    /// `v_i` without its trailing `k^(i-2) + .. + 1` ones.
    pub w: Vec<bool>,
    /// Length of `w_i`: `((k-2) k^i + 1) / (k-1)`.
    pub n: usize,
    /// Weight of `w_i`: `n_i - (k-1)^i`.
    pub errors: usize,
}

impl WorstCaseVector {
    pub fn support(&self) -> ErrorSupport {
        let pos = self.w.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
        ErrorSupport::new(pos, self.n).expect("support inside w")
    }
}

/// `v_1 = 0^(k-1)`, `v_{i+1} = (v_i, 1^(k^(i-1)))` repeated `k - 1` times.
pub fn worst_case_vector(k: usize, level: u32) -> Result<WorstCaseVector> {
    if k < 3 || level == 0 {
        return Err(Error::Parameter("need k >= 3 and level >= 1".into()));
    }
    let mut v = vec![false; k - 1];
    for i in 1..level {
        let block: Vec<bool> = v.iter().copied().chain(std::iter::repeat_n(true, k.pow(i - 1))).collect();
        v = block.repeat(k - 1);
    }
    let trailing = (k.pow(level - 1) - 1) / (k - 1);
    let n = ((k - 2) * k.pow(level) + 1) / (k - 1);
    debug_assert_eq!(v.len() - trailing, n);
    debug_assert!(v[n..].iter().all(|b| *b));
    let w = v[..n].to_vec();
    let errors = n - (k - 1).pow(level);
    Ok(WorstCaseVector { v, w, n, errors })
}

/// Upper bound on the correctable number of errors at length `n`:
/// `n/(k-2) (log_k(n/(k-2)) - 1/k) - (k-2)/k`.
///
/// Evaluated in floating point and rounded outwards by a relative `1e-9`.
pub fn upper_bound_e(k: usize, n: usize) -> Result<f64> {
    if k < 3 || n < k {
        return Err(Error::Parameter("need k >= 3 and n >= k".into()));
    }
    let (kf, x) = (k as f64, n as f64 / (k - 2) as f64);
    let val = x * (x.ln() / kf.ln() - 1.0 / kf) - (kf - 2.0) / kf;
    Ok(val + 1e-9 * val.abs().max(1.0))
}

/// The simplified bound `n/(k-2) log_k(n/(k-2))`.
pub fn upper_bound_e_simple(k: usize, n: usize) -> Result<f64> {
    if k < 3 || n < k {
        return Err(Error::Parameter("need k >= 3 and n >= k".into()));
    }
    let x = n as f64 / (k - 2) as f64;
    let val = x * x.ln() / (k as f64).ln();
    Ok(val + 1e-9 * val.abs().max(1.0))
}
