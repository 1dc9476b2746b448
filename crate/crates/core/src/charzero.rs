//! Sparse evaluation codes over the rationals.
//!
//! Points are distinct positive rationals. A nonzero polynomial with at most
//! `2T` terms has at most `2T - 1` positive roots (Descartes), so two distinct
//! `T`-sparse polynomials agree on at most `2T - 1` points and the code has
//! minimum distance `n - 2T + 1`. Decoding is only provided for geometric
//! points `alpha^i`, where affine windows of the word are again geometric.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::codec::{enumerate_subsequences, hamming_distance, SubsequenceMode};
use crate::error::{Error, Result};
use crate::field::{parse_rational, rational_to_string, Field, Rational, RationalField};
use crate::prony::prony_interpolate_rational;
use crate::sparse_poly::SparsePolynomial;

pub type RationalPoly = SparsePolynomial<Rational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealCodeParameters {
    points: Vec<Rational>,
    sparsity: usize,
    /// Ratio `alpha` when `points[i] = alpha^i`.
    alpha: Option<Rational>,
    degree_bound: u64,
}

impl RealCodeParameters {
    /// Arbitrary distinct positive points. Such codes can be encoded but not
    /// decoded.
    pub fn new(points: Vec<Rational>, sparsity: usize) -> Result<Self> {
        if sparsity == 0 {
            return Err(Error::Parameter("sparsity bound must be at least 1".into()));
        }
        if points.iter().any(|x| !x.is_positive()) {
            return Err(Error::Parameter("evaluation points must be positive".into()));
        }
        let mut sorted = points.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("evaluation points must be distinct".into()));
        }
        Ok(Self {
            points,
            sparsity,
            alpha: None,
            degree_bound: 0,
        })
    }

    /// Points `alpha^0, ..., alpha^(n-1)`; decoded exponents are searched in
    /// `[0, degree_bound]`.
    pub fn geometric(alpha: Rational, n: usize, sparsity: usize, degree_bound: u64) -> Result<Self> {
        let q = RationalField;
        if !alpha.is_positive() || alpha == q.one() {
            return Err(Error::Parameter("ratio must be positive and different from 1".into()));
        }
        let mut points = Vec::with_capacity(n);
        let mut x = q.one();
        for _ in 0..n {
            points.push(x.clone());
            x = q.mul(&x, &alpha);
        }
        let mut params = Self::new(points, sparsity)?;
        params.alpha = Some(alpha);
        params.degree_bound = degree_bound;
        Ok(params)
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }

    pub fn alpha(&self) -> Option<&Rational> {
        self.alpha.as_ref()
    }

    pub fn degree_bound(&self) -> u64 {
        self.degree_bound
    }

    /// `n - 2T + 1`, or `None` when `n < 2T` and the code has distance 1 at
    /// best.
    pub fn minimum_distance(&self) -> Option<usize> {
        (self.len() + 1).checked_sub(2 * self.sparsity).filter(|&d| d > 0)
    }
}

pub fn encode_real(f: &RationalPoly, params: &RealCodeParameters) -> Result<Vec<Rational>> {
    if f.sparsity() > params.sparsity {
        return Err(Error::NotEncodable(format!(
            "{} terms exceed the bound {}",
            f.sparsity(),
            params.sparsity
        )));
    }
    let q = RationalField;
    Ok(params.points.iter().map(|x| f.eval(&q, x)).collect())
}

/// Sign changes in the coefficient sequence, ordered by exponent. This bounds
/// the number of positive roots.
pub fn sign_changes(f: &RationalPoly) -> usize {
    f.terms()
        .windows(2)
        .filter(|w| w[0].1.is_positive() != w[1].1.is_positive())
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealDecoded {
    pub polynomial: RationalPoly,
    pub mismatches: usize,
    /// Window `(start, step)` the polynomial was first interpolated from.
    pub start: usize,
    pub step: usize,
}

/// Interpolates every affine window of length `2T`, then keeps the candidates
/// within `floor(delta / 2)` of the word. Succeeds only if exactly one
/// polynomial remains.
pub fn unique_decode_real(word: &[Rational], params: &RealCodeParameters, errors: usize) -> Result<RealDecoded> {
    let alpha = params
        .alpha
        .as_ref()
        .ok_or_else(|| Error::Parameter("decoding needs geometric points".into()))?;
    let n = params.len();
    let t = params.sparsity;
    if word.len() != n {
        return Err(Error::Parameter(format!("word has length {}, expected {n}", word.len())));
    }
    if n < 2 * t + 2 * errors {
        return Err(Error::Parameter(format!("length {n} is below 2T + 2E = {}", 2 * t + 2 * errors)));
    }
    let radius = (n - 2 * t + 1) / 2;
    let mut survivors: Vec<RealDecoded> = Vec::new();
    for (r, s) in enumerate_subsequences(n, 2 * t, SubsequenceMode::AffineAll) {
        let window: Vec<Rational> = (0..2 * t).map(|i| word[r + i * s].clone()).collect();
        let Ok(f) = prony_interpolate_rational(&window, alpha, r as u64, s as u64, params.degree_bound) else {
            continue;
        };
        if survivors.iter().any(|c| c.polynomial == f) {
            continue;
        }
        let mismatches = hamming_distance(&encode_real(&f, params)?, word);
        if mismatches <= radius {
            survivors.push(RealDecoded {
                polynomial: f,
                mismatches,
                start: r,
                step: s,
            });
        }
    }
    if survivors.len() == 1 {
        Ok(survivors.pop().unwrap())
    } else {
        Err(Error::NoUniqueDecode(survivors.len()))
    }
}

/// Rational word with entries written as `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalWordJson {
    pub values: Vec<String>,
}

pub fn word_to_json(word: &[Rational]) -> RationalWordJson {
    RationalWordJson {
        values: word.iter().map(rational_to_string).collect(),
    }
}

pub fn word_from_json(json: &RationalWordJson) -> Result<Vec<Rational>> {
    json.values.iter().map(|s| parse_rational(s)).collect()
}

/// Number of points where two words agree.
pub fn agreements(a: &[Rational], b: &[Rational]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x == y).count()
}

/// Whether `f` vanishes at `x`.
pub fn is_root(f: &RationalPoly, x: &Rational) -> bool {
    f.eval(&RationalField, x).is_zero()
}
