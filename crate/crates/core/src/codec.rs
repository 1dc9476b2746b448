//! Sparse polynomial evaluation codes over `F_p` at consecutive powers of a
//! root of unity, with majority-rule unique decoding and list decoding over
//! contiguous or arithmetic-progression windows.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gcd, DiscreteLogTable, Field, FieldElement, PrimeField};
use crate::prony::prony_interpolate_affine;
use crate::recurrence::{berlekamp_massey, clean_up};
use crate::sparse_poly::{PolynomialJson, SparsePolynomial};

pub type Poly = SparsePolynomial<FieldElement>;

/// Code of length `n` for polynomials with at most `sparsity` terms and
/// degree below `m`, evaluated at `alpha^0 .. alpha^(n-1)`.
#[derive(Clone, Debug)]
pub struct CodeParameters {
    field: PrimeField,
    group: DiscreteLogTable,
    n: usize,
    sparsity: usize,
}

impl CodeParameters {
    /// Uses the deterministic root of unity of order `m` from
    /// [`PrimeField::find_primitive_root_of_unity`].
    pub fn new(field: PrimeField, m: u64, n: usize, sparsity: usize) -> Result<Self> {
        let alpha = field.find_primitive_root_of_unity(m)?;
        Self::with_alpha(field, alpha, m, n, sparsity)
    }

    pub fn with_alpha(
        field: PrimeField,
        alpha: FieldElement,
        m: u64,
        n: usize,
        sparsity: usize,
    ) -> Result<Self> {
        if sparsity == 0 {
            return Err(Error::Parameter("sparsity bound must be at least 1".into()));
        }
        if n == 0 || n as u64 > m {
            return Err(Error::Parameter(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
        }
        if (field.modulus() - 1) % m != 0 {
            return Err(Error::Parameter(format!(
                "m = {m} does not divide p - 1 = {}",
                field.modulus() - 1
            )));
        }
        let group = field.discrete_log_table(alpha, m)?;
        Ok(Self {
            field,
            group,
            n,
            sparsity,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn alpha(&self) -> FieldElement {
        self.group.alpha()
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn group(&self) -> &DiscreteLogTable {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    /// Window length `2T` used by every decoder.
    pub fn window(&self) -> usize {
        2 * self.sparsity
    }

    /// `floor(n / 2T)` when `2T | m`.
    pub fn minimum_distance(&self) -> Option<usize> {
        (self.order() % self.window() as u64 == 0).then(|| self.n / self.window())
    }
}

/// A length-`n` word, possibly corrupted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceivedWord(pub Vec<FieldElement>);

impl ReceivedWord {
    pub fn values(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn distance(&self, other: &ReceivedWord) -> usize {
        hamming_distance(&self.0, &other.0)
    }

    pub fn to_json(&self, field: &PrimeField) -> WordJson {
        WordJson {
            p: field.modulus(),
            values: self.0.iter().map(|x| x.value()).collect(),
        }
    }

    pub fn from_json(field: &PrimeField, json: &WordJson) -> Result<Self> {
        if json.p != field.modulus() {
            return Err(Error::Format(format!(
                "word is over F_{}, expected F_{}",
                json.p,
                field.modulus()
            )));
        }
        json.values
            .iter()
            .map(|&v| field.element_checked(v))
            .collect::<Result<Vec<_>>>()
            .map(ReceivedWord)
    }
}

/// Wire form of a word: `{"p": .., "values": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub p: u64,
    pub values: Vec<u64>,
}

pub fn hamming_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}

pub fn encode(f: &Poly, params: &CodeParameters) -> Result<ReceivedWord> {
    if f.sparsity() > params.sparsity {
        return Err(Error::NotEncodable(format!(
            "{} terms exceed the sparsity bound {}",
            f.sparsity(),
            params.sparsity
        )));
    }
    if let Some(d) = f.degree().filter(|&d| d >= params.order()) {
        return Err(Error::NotEncodable(format!(
            "degree {d} is not below m = {}",
            params.order()
        )));
    }
    Ok(ReceivedWord(f.evaluate_geometric(
        &params.field,
        &params.alpha(),
        0,
        1,
        params.n,
    )))
}

/// Adds a uniformly random nonzero offset at every position of `support`.
pub fn corrupt<R: Rng + ?Sized>(
    field: &PrimeField,
    word: &ReceivedWord,
    support: &BTreeSet<usize>,
    rng: &mut R,
) -> Result<ReceivedWord> {
    let mut out = word.clone();
    for &i in support {
        let slot = out.0.get_mut(i).ok_or_else(|| {
            Error::Parameter(format!("error position {i} outside word of length {}", word.len()))
        })?;
        let offset = field.element(rng.gen_range(1..field.modulus()) as i64);
        *slot = field.add(slot, &offset);
    }
    Ok(out)
}

/// Two `T`-sparse polynomials whose codewords differ in exactly `floor(n / 2T)`
/// positions, showing the minimum distance is attained.
///
/// These are `f_x(alpha z)` and `f_y(alpha z)` where
/// `f_x = (1/T) sum_{i<T} z^(i m / T)` and `f_y = (-1/T) sum_{i<T} z^((2i+1) m / 2T)`.
/// Unshifted, `f_x` and `f_y` evaluate to `(1, 0^(T-1), 1, ...)` and
/// `(-1, 0^(T-1), 1, ...)`, which differ at every index `= 0 mod 2T`, i.e.
/// `ceil(n / 2T)` times. The argument shift by `alpha` moves the pattern to
/// `(0^(T-1), 1, 0^(T-1), -1, ...)` so the count is `floor(n / 2T)` for every `n`.
pub fn worst_case_pair(params: &CodeParameters) -> Result<(Poly, Poly)> {
    let (f, m, t) = (&params.field, params.order(), params.sparsity as u64);
    if m % (2 * t) != 0 {
        return Err(Error::Parameter(format!("2T = {} does not divide m = {m}", 2 * t)));
    }
    let inv_t = f.inv(&f.element(t as i64)).expect("T < p");
    let fx = Poly::from_terms(f, (0..t).map(|i| (i * m / t, inv_t)).collect());
    let fy = Poly::from_terms(
        f,
        (0..t).map(|i| ((2 * i + 1) * m / (2 * t), f.neg(&inv_t))).collect(),
    );
    let a = params.alpha();
    Ok((fx.scale_argument(f, &a), fy.scale_argument(f, &a)))
}

/// Majority-rule unique decoding over the disjoint `2T`-blocks.
///
/// The block generators are compared; a generator held by a strict majority
/// of blocks is accepted. Each majority block is cleaned up against the
/// received word with `budget` errors and interpolated; the candidate with
/// fewest mismatches is returned. Correct whenever at most `budget` errors
/// occurred and `n >= 2T(2 budget + 1)`.
pub fn unique_decode_majority(
    word: &ReceivedWord,
    params: &CodeParameters,
    budget: usize,
) -> Result<Poly> {
    let f = &params.field;
    let k = params.window();
    let blocks = word.len() / k;
    if blocks == 0 || word.len() != params.n {
        return Err(Error::Parameter(format!(
            "word of length {} holds no full block of {k}",
            word.len()
        )));
    }
    let generators: Vec<_> = (0..blocks)
        .map(|b| berlekamp_massey(f, &word.0[b * k..(b + 1) * k]))
        .collect();
    let mut counts: HashMap<_, usize> = HashMap::new();
    for g in &generators {
        *counts.entry(g).or_default() += 1;
    }
    let winner = counts
        .into_iter()
        .find(|(_, c)| 2 * c > blocks)
        .map(|(g, _)| g.clone())
        .ok_or(Error::Ambiguous)?;

    let mut best: Option<(usize, Poly)> = None;
    for (b, g) in generators.iter().enumerate() {
        if *g != winner {
            continue;
        }
        let start = b * k;
        match clean_up(f, g, &word.0, start, budget) {
            Ok(Some(_)) => {}
            Ok(None) | Err(Error::DegenerateGenerator) => continue,
            Err(e) => return Err(e),
        }
        let window = &word.0[start..start + k];
        let Ok(p) = prony_interpolate_affine(f, window, &params.group, start as u64, 1) else {
            continue;
        };
        let d = word.distance(&encode(&p, params)?);
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, p));
        }
    }
    best.map(|(_, p)| p).ok_or_else(|| {
        Error::NotACodeword("majority generator does not interpolate within budget".into())
    })
}

/// Which windows `(r, s)` the list decoder examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubsequenceMode {
    /// `s = 1`, starts `0, k, 2k, ..`
    ContiguousDisjoint,
    /// `s = 1`, every start.
    ContiguousAll,
    /// Every step, each residue class cut into disjoint runs of `k`.
    AffineDisjoint,
    /// Every step and every start.
    AffineAll,
}

impl SubsequenceMode {
    pub const ALL: [SubsequenceMode; 4] = [
        SubsequenceMode::ContiguousDisjoint,
        SubsequenceMode::ContiguousAll,
        SubsequenceMode::AffineDisjoint,
        SubsequenceMode::AffineAll,
    ];

    fn is_affine(self) -> bool {
        matches!(self, Self::AffineDisjoint | Self::AffineAll)
    }

    fn is_disjoint(self) -> bool {
        matches!(self, Self::ContiguousDisjoint | Self::AffineDisjoint)
    }
}

impl fmt::Display for SubsequenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ContiguousDisjoint => "contiguous-disjoint",
            Self::ContiguousAll => "contiguous-all",
            Self::AffineDisjoint => "affine-disjoint",
            Self::AffineAll => "affine-all",
        })
    }
}

impl FromStr for SubsequenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|m| m.to_string() == norm)
            .ok_or_else(|| Error::Parameter(format!("unknown subsequence mode {s:?}")))
    }
}

/// Start/step pairs `(r, s)` with `r + (k-1) s <= n - 1`, sorted by `(s, r)`.
pub fn enumerate_subsequences(n: usize, k: usize, mode: SubsequenceMode) -> Vec<(usize, usize)> {
    if k == 0 || k > n {
        return Vec::new();
    }
    let max_step = if !mode.is_affine() || k == 1 {
        1
    } else {
        (n - 1) / (k - 1)
    };
    let mut out = Vec::new();
    for s in 1..=max_step {
        let span = (k - 1) * s;
        let mut starts: Vec<usize> = if mode.is_disjoint() {
            // residue class c is cut into runs c, c + ks, c + 2ks, ..
            (0..s)
                .flat_map(|c| (c..).step_by(k * s).take_while(|&r| r + span < n))
                .collect()
        } else {
            (0..n - span).collect()
        };
        starts.sort_unstable();
        out.extend(starts.into_iter().map(|r| (r, s)));
    }
    out
}

/// One list-decoding candidate and the window it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub polynomial: Poly,
    /// Positions where its codeword disagrees with the received word.
    pub mismatches: usize,
    pub start: usize,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub mode: SubsequenceMode,
    /// Deduplicated, ordered by `(mismatches, step, start)`.
    pub candidates: Vec<Candidate>,
    /// Windows interpolated.
    pub windows_examined: usize,
    /// Windows dropped because `gcd(s, m) > 1`.
    pub windows_skipped: usize,
}

impl DecodeOutcome {
    pub fn contains(&self, f: &Poly) -> bool {
        self.candidates.iter().any(|c| c.polynomial == *f)
    }

    pub fn to_json(&self, field: &PrimeField) -> DecodeReport {
        DecodeReport {
            mode: self.mode.to_string(),
            windows_examined: self.windows_examined,
            windows_skipped: self.windows_skipped,
            candidates: self
                .candidates
                .iter()
                .map(|c| CandidateReport {
                    polynomial: c.polynomial.to_json(field),
                    mismatches: c.mismatches,
                    start: c.start,
                    step: c.step,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeReport {
    pub mode: String,
    pub windows_examined: usize,
    pub windows_skipped: usize,
    pub candidates: Vec<CandidateReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub polynomial: PolynomialJson,
    pub mismatches: usize,
    pub start: usize,
    pub step: usize,
}

/// List decoding from windows of length `2T`.
///
/// Every window `(r, s)` of `mode` with `gcd(s, m) = 1` is interpolated; the
/// recovered polynomial is re-encoded and its mismatches against the word are
/// counted. With `sieve`, candidates with more than `budget` mismatches are
/// dropped. If some examined window is error-free the transmitted polynomial
/// is in the list.
pub fn list_decode(
    word: &ReceivedWord,
    params: &CodeParameters,
    budget: usize,
    mode: SubsequenceMode,
    sieve: bool,
) -> Result<DecodeOutcome> {
    if word.len() != params.n {
        return Err(Error::Parameter(format!(
            "word length {} differs from code length {}",
            word.len(),
            params.n
        )));
    }
    let k = params.window();
    let m = params.order();
    let (usable, skipped): (Vec<_>, Vec<_>) = enumerate_subsequences(word.len(), k, mode)
        .into_iter()
        .partition(|&(_, s)| gcd(s as u64, m) == 1);

    let found: Vec<Candidate> = usable
        .par_iter()
        .filter_map(|&(r, s)| {
            let window: Vec<_> = (0..k).map(|i| word.0[r + i * s]).collect();
            let p = prony_interpolate_affine(&params.field, &window, &params.group, r as u64, s as u64)
                .ok()?;
            let codeword = encode(&p, params).ok()?;
            let mismatches = word.distance(&codeword);
            (!sieve || mismatches <= budget).then_some(Candidate {
                polynomial: p,
                mismatches,
                start: r,
                step: s,
            })
        })
        .collect();

    let mut candidates: Vec<Candidate> = Vec::new();
    let mut seen = HashSet::new();
    for c in found {
        // `found` follows the (s, r) order of `usable`, so the first hit is the smallest window
        if seen.insert(c.polynomial.clone()) {
            candidates.push(c);
        }
    }
    candidates.sort_by_key(|c| (c.mismatches, c.step, c.start));
    Ok(DecodeOutcome {
        mode,
        candidates,
        windows_examined: usable.len(),
        windows_skipped: skipped.len(),
    })
}
