//! Seeded experiments: Monte Carlo success rates of window enumeration, and
//! the `n_{k,E}` table.
//!
//! Randomness comes from `ChaCha8Rng` (crate `rand_chacha` 0.3). Trial `i`
//! uses the generator seeded with `seed` on stream `i`, so results do not
//! depend on how trials are spread over threads.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{enumerate_subsequences, SubsequenceMode};
use crate::error::{Error, Result};
use crate::radius::{hits_all_aps, RadiusResult, RadiusSolver};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessRow {
    pub errors: usize,
    pub successes: u64,
    pub trials: u64,
}

impl SuccessRow {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Fraction of random weight-`E` supports in `[0, n)` that leave at least one
/// enumerated window of length `k` untouched, for each `E` in `[0, e_max]`.
///
/// One random ordering of the positions is drawn per trial and the support for
/// `E` is its first `E` entries, so supports are nested in `E` and shared
/// between modes.
pub fn simulate_success_rate(
    n: usize,
    k: usize,
    e_max: usize,
    trials: u64,
    mode: SubsequenceMode,
    seed: u64,
) -> Result<Vec<SuccessRow>> {
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is needed".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("window {k} does not fit in length {n}")));
    }
    let windows = enumerate_subsequences(n, k, mode);
    // largest E for which each trial still succeeds
    let best: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut rank = vec![0; n];
            for (i, &p) in order.iter().enumerate() {
                rank[p] = i;
            }
            windows
                .iter()
                .map(|&(r, s)| (0..k).map(|i| rank[r + i * s]).min().unwrap())
                .max()
                .unwrap_or(0)
        })
        .collect();
    Ok((0..=e_max)
        .map(|e| SuccessRow {
            errors: e,
            successes: best.iter().filter(|&&b| b >= e).count() as u64,
            trials,
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadiusCell {
    Solved(RadiusResult),
    Timeout { k: usize, errors: usize },
}

impl RadiusCell {
    pub fn k(&self) -> usize {
        match self {
            RadiusCell::Solved(r) => r.k,
            RadiusCell::Timeout { k, .. } => *k,
        }
    }

    pub fn errors(&self) -> usize {
        match self {
            RadiusCell::Solved(r) => r.errors,
            RadiusCell::Timeout { errors, .. } => *errors,
        }
    }

    pub fn value(&self) -> Option<usize> {
        match self {
            RadiusCell::Solved(r) => Some(r.n),
            RadiusCell::Timeout { .. } => None,
        }
    }
}

/// `n_{k,E}` for all `k` in `ks` and `E` in `[0, e_max]`, in `(k, E)` order.
/// Each cell gets `budget` of search time; once a cell times out the rest of
/// its row is reported as timed out. Every witness is checked again by
/// [`hits_all_aps`].
pub fn radius_table(ks: &[usize], e_max: usize, budget: Option<Duration>) -> Result<Vec<RadiusCell>> {
    let rows: Vec<Result<Vec<RadiusCell>>> = ks
        .par_iter()
        .map(|&k| {
            let mut solver = RadiusSolver::new(k)?;
            let mut row = Vec::with_capacity(e_max + 1);
            let mut timed_out = false;
            for e in 0..=e_max {
                if !timed_out {
                    let deadline = budget.map(|b| Instant::now() + b);
                    match solver.n_k_e(e, deadline) {
                        Ok(r) => {
                            if r.witness.weight() != e || !hits_all_aps(&r.witness, r.n - 1, k) {
                                return Err(Error::Parameter(format!("witness check failed for k={k} E={e}")));
                            }
                            row.push(RadiusCell::Solved(r));
                            continue;
                        }
                        Err(_) => timed_out = true,
                    }
                }
                row.push(RadiusCell::Timeout { k, errors: e });
            }
            Ok(row)
        })
        .collect();
    let mut out = Vec::new();
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}
