//! Blahut / Ben-Or–Tiwari interpolation: generator, roots, exponents,
//! then a transposed Vandermonde solve for the coefficients.

use crate::error::{Error, Result};
use crate::field::{gcd, DiscreteLogTable, Field, FieldElement, PrimeField, Rational, RationalField};
use crate::recurrence::{berlekamp_massey, GeneratorPolynomial};
use crate::sparse_poly::SparsePolynomial;

/// Solves `sum_j c_j b_j^i = a_i` for `0 <= i < t` in `O(t^2)`.
///
/// With `M(z) = prod_j (z - b_j)` and `q_j = M / (z - b_j)`, the coefficient is
/// `c_j = <q_j, a> / q_j(b_j)`, since `<q_j, a> = sum_l c_l q_j(b_l)` and
/// `q_j` vanishes at every other node.
pub fn solve_transposed_vandermonde<F: Field>(
    field: &F,
    nodes: &[F::Elem],
    rhs: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let t = nodes.len();
    if rhs.len() != t {
        return Err(Error::Parameter(format!(
            "{t} nodes but {} right-hand sides",
            rhs.len()
        )));
    }
    let master = GeneratorPolynomial::from_roots(field, nodes).coefficients(field);
    let mut out = Vec::with_capacity(t);
    for b in nodes {
        // synthetic division of the master polynomial by (z - b)
        let mut q = vec![field.zero(); t];
        let mut carry = field.zero();
        for i in (0..t).rev() {
            carry = field.add(&master[i + 1], &field.mul(&carry, b));
            q[i] = carry.clone();
        }
        let num = q
            .iter()
            .zip(rhs)
            .fold(field.zero(), |acc, (qi, ai)| field.add(&acc, &field.mul(qi, ai)));
        let den = q
            .iter()
            .rev()
            .fold(field.zero(), |acc, qi| field.add(&field.mul(&acc, b), qi));
        out.push(field.div(&num, &den).ok_or(Error::Singular)?);
    }
    Ok(out)
}

/// Shared pipeline: BM on the window, roots and exponents via `locate`,
/// coefficients of `g(z)` from the Vandermonde system, and a final check that
/// the recovered terms reproduce the whole window.
///
/// `locate` maps the generator to `(exponent, node)` pairs where `node` is
/// the root `beta^exponent` of the generator.
fn interpolate_window<F: Field>(
    field: &F,
    window: &[F::Elem],
    locate: impl FnOnce(&GeneratorPolynomial<F::Elem>) -> Vec<(u64, F::Elem)>,
) -> Result<Vec<(u64, F::Elem)>> {
    let lambda = berlekamp_massey(field, window);
    let t = lambda.degree();
    if 2 * t > window.len() {
        return Err(Error::NotACodeword(format!(
            "linear complexity {t} exceeds half the window length {}",
            window.len()
        )));
    }
    let roots = locate(&lambda);
    if roots.len() != t {
        return Err(Error::NotACodeword(format!(
            "generator of degree {t} has {} roots in the evaluation group",
            roots.len()
        )));
    }
    let nodes: Vec<F::Elem> = roots.iter().map(|(_, b)| b.clone()).collect();
    let coeffs = solve_transposed_vandermonde(field, &nodes, &window[..t])?;

    // the recurrence already fixes the tail; this guards the root search
    let mut powers: Vec<F::Elem> = coeffs.clone();
    for (i, a) in window.iter().enumerate() {
        let v = powers.iter().fold(field.zero(), |acc, x| field.add(&acc, x));
        if v != *a {
            return Err(Error::NotACodeword(format!("window entry {i} not reproduced")));
        }
        for (x, b) in powers.iter_mut().zip(&nodes) {
            *x = field.mul(x, b);
        }
    }
    Ok(roots.into_iter().map(|(e, _)| e).zip(coeffs).collect())
}

/// Recovers `f` from `window[i] = f(alpha^i)`, where `group` tabulates `alpha`.
pub fn prony_interpolate(
    field: &PrimeField,
    window: &[FieldElement],
    group: &DiscreteLogTable,
) -> Result<SparsePolynomial<FieldElement>> {
    prony_interpolate_affine(field, window, group, 0, 1)
}

/// Recovers `f` from `window[i] = f(alpha^(r + i*s))` with `gcd(s, m) = 1`.
///
/// The window holds `g(beta^i)` for `g(z) = f(alpha^r z)` and `beta = alpha^s`.
/// A root `beta^e = alpha^(s e)` of the generator has logarithm `s e mod m`,
/// which pins down `e` because `s` is invertible modulo `m`. Coefficients are
/// untwisted by `c_j = d_j alpha^(-r e_j)`.
pub fn prony_interpolate_affine(
    field: &PrimeField,
    window: &[FieldElement],
    group: &DiscreteLogTable,
    start: u64,
    step: u64,
) -> Result<SparsePolynomial<FieldElement>> {
    let m = group.order();
    if step == 0 || gcd(step, m) != 1 {
        return Err(Error::Parameter(format!(
            "step {step} is not coprime to the group order {m}"
        )));
    }
    let step_inv = modular_inverse(step % m, m);
    let terms = interpolate_window(field, window, |lambda| {
        group
            .powers()
            .iter()
            .enumerate()
            .filter(|(_, x)| field.is_zero(&lambda.eval(field, x)))
            .map(|(log, x)| {
                let e = (log as u128 * step_inv as u128 % m as u128) as u64;
                debug_assert_eq!(group.log(*x), Some(log as u64));
                (e, *x)
            })
            .collect()
    })?;
    let untwisted = terms
        .into_iter()
        .map(|(e, d)| (e, field.mul(&d, &group.power_signed(-((start % m * e % m) as i64)))))
        .collect();
    Ok(SparsePolynomial::from_terms(field, untwisted))
}

fn modular_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// Rational counterpart of [`prony_interpolate_affine`] for points `alpha^i`
/// with `alpha` a positive rational other than 1.
///
/// Exponents are searched in `[0, degree_bound]`: a root must equal
/// `(alpha^step)^e` for some `e` in that range.
pub fn prony_interpolate_rational(
    window: &[Rational],
    alpha: &Rational,
    start: u64,
    step: u64,
    degree_bound: u64,
) -> Result<SparsePolynomial<Rational>> {
    let q = RationalField;
    if step == 0 {
        return Err(Error::Parameter("step must be positive".into()));
    }
    let beta = q.pow(alpha, step);
    let terms = interpolate_window(&q, window, |lambda| {
        let mut roots = Vec::new();
        let mut x = q.one();
        for e in 0..=degree_bound {
            if roots.len() == lambda.degree() {
                break;
            }
            if q.is_zero(&lambda.eval(&q, &x)) {
                roots.push((e, x.clone()));
            }
            x = q.mul(&x, &beta);
        }
        roots
    })?;
    let alpha_inv = q
        .inv(alpha)
        .ok_or_else(|| Error::Parameter("alpha must be nonzero".into()))?;
    let twist = q.pow(&alpha_inv, start);
    let untwisted = terms
        .into_iter()
        .map(|(e, d)| {
            let c = q.mul(&d, &q.pow(&twist, e));
            (e, c)
        })
        .collect();
    Ok(SparsePolynomial::from_terms(&q, untwisted))
}
