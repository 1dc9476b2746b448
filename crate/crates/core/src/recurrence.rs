//! Linear recurrences: Berlekamp–Massey synthesis, generator checks and the
//! sequence clean-up used to sieve decoding candidates.

use crate::error::{Error, Result};
use crate::field::Field;

/// Monic `Lambda(z) = z^t - sum_{i<t} lambda_i z^i`, stored as `lambda_0..lambda_{t-1}`.
///
/// A sequence is generated by `Lambda` when `a_{j+t} = sum_i lambda_i a_{j+i}`.
/// Degree 0 (`Lambda = 1`) generates only the zero sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorPolynomial<E> {
    lambda: Vec<E>,
}

impl<E: Clone + PartialEq> GeneratorPolynomial<E> {
    pub fn from_recurrence(lambda: Vec<E>) -> Self {
        Self { lambda }
    }

    /// Builds `prod_j (z - root_j)`.
    pub fn from_roots<F: Field<Elem = E>>(field: &F, roots: &[E]) -> Self {
        // dense coefficients, low degree first
        let mut poly = vec![field.one()];
        for r in roots {
            let mut next = vec![field.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = field.add(&next[i + 1], c);
                next[i] = field.sub(&next[i], &field.mul(c, r));
            }
            poly = next;
        }
        poly.pop();
        Self {
            lambda: poly.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.lambda.len()
    }

    /// Recurrence coefficients `lambda_0..lambda_{t-1}`.
    pub fn recurrence(&self) -> &[E] {
        &self.lambda
    }

    /// Dense coefficients of `Lambda`, lowest degree first, ending with the leading 1.
    pub fn coefficients<F: Field<Elem = E>>(&self, field: &F) -> Vec<E> {
        let mut c: Vec<E> = self.lambda.iter().map(|l| field.neg(l)).collect();
        c.push(field.one());
        c
    }

    /// `Lambda(z)` by Horner's rule.
    pub fn eval<F: Field<Elem = E>>(&self, field: &F, z: &E) -> E {
        self.coefficients(field)
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, z), c))
    }

    /// The next term implied by the `t` terms preceding it.
    fn step<F: Field<Elem = E>>(&self, field: &F, window: &[E]) -> E {
        self.lambda
            .iter()
            .zip(window)
            .fold(field.zero(), |acc, (l, a)| field.add(&acc, &field.mul(l, a)))
    }
}

/// Minimal monic generator of `window` (Berlekamp–Massey).
pub fn berlekamp_massey<F: Field>(field: &F, window: &[F::Elem]) -> GeneratorPolynomial<F::Elem> {
    // connection polynomial C(x) = 1 + c_1 x + ... with a_i + sum_j c_j a_{i-j} = 0
    let mut c = vec![field.one()];
    let mut b = vec![field.one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last_disc = field.one();

    for i in 0..window.len() {
        let mut d = window[i].clone();
        for j in 1..=len.min(c.len() - 1) {
            d = field.add(&d, &field.mul(&c[j], &window[i - j]));
        }
        if field.is_zero(&d) {
            shift += 1;
            continue;
        }
        let coef = field.div(&d, &last_disc).expect("stored discrepancy is nonzero");
        let prev = c.clone();
        if c.len() < b.len() + shift {
            c.resize(b.len() + shift, field.zero());
        }
        for (j, bj) in b.iter().enumerate() {
            c[j + shift] = field.sub(&c[j + shift], &field.mul(&coef, bj));
        }
        if 2 * len <= i {
            len = i + 1 - len;
            b = prev;
            last_disc = d;
            shift = 1;
        } else {
            shift += 1;
        }
    }

    c.resize(len + 1, field.zero());
    let lambda = (0..len).map(|l| field.neg(&c[len - l])).collect();
    GeneratorPolynomial { lambda }
}

/// Whether `lambda` generates every term of `seq` from its predecessors.
pub fn generates<F: Field>(
    field: &F,
    lambda: &GeneratorPolynomial<F::Elem>,
    seq: &[F::Elem],
) -> bool {
    let t = lambda.degree();
    if seq.len() <= t {
        return true;
    }
    (0..seq.len() - t).all(|j| lambda.step(field, &seq[j..j + t]) == seq[j + t])
}

/// Result of regenerating a received word from a trusted window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanedWord<E> {
    pub corrected: Vec<E>,
    pub mismatches: usize,
}

/// Regenerates the whole word from `received[start .. start + deg]` by running
/// the recurrence forwards and backwards, then counts disagreements.
///
/// Returns `Ok(None)` when more than `budget` positions disagree. Running
/// backwards needs `lambda_0 != 0`; a degenerate generator with `start > 0`
/// is an error. The trusted window itself is never altered.
pub fn clean_up<F: Field>(
    field: &F,
    lambda: &GeneratorPolynomial<F::Elem>,
    received: &[F::Elem],
    start: usize,
    budget: usize,
) -> Result<Option<CleanedWord<F::Elem>>> {
    let n = received.len();
    let t = lambda.degree();
    if start + t > n {
        return Err(Error::Parameter(format!(
            "window [{start}, {}) exceeds word length {n}",
            start + t
        )));
    }
    let mut out = vec![field.zero(); n];
    out[start..start + t].clone_from_slice(&received[start..start + t]);
    if t > 0 {
        for i in start + t..n {
            out[i] = lambda.step(field, &out[i - t..i]);
        }
        if start > 0 {
            let lead_inv = field
                .inv(&lambda.recurrence()[0])
                .ok_or(Error::DegenerateGenerator)?;
            for i in (0..start).rev() {
                // a_{i+t} = lambda_0 a_i + sum_{l>=1} lambda_l a_{i+l}
                let tail = lambda.recurrence()[1..]
                    .iter()
                    .zip(&out[i + 1..i + t])
                    .fold(field.zero(), |acc, (l, a)| field.add(&acc, &field.mul(l, a)));
                out[i] = field.mul(&field.sub(&out[i + t], &tail), &lead_inv);
            }
        }
    }
    let mismatches = out.iter().zip(received).filter(|(a, b)| a != b).count();
    Ok((mismatches <= budget).then_some(CleanedWord {
        corrected: out,
        mismatches,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElement, PrimeField};
    use crate::sparse_poly::SparsePolynomial;
    use proptest::prelude::*;

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    fn elems(f: &PrimeField, v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x)).collect()
    }

    #[test]
    fn constant_sequence() {
        let f = f13();
        let g = berlekamp_massey(&f, &elems(&f, &[1, 1, 1, 1]));
        assert_eq!(g.recurrence(), &[f.one()]);
        assert_eq!(g.coefficients(&f), elems(&f, &[-1, 1]));
    }

    #[test]
    fn zero_sequence() {
        let f = f13();
        let g = berlekamp_massey(&f, &elems(&f, &[0, 0, 0, 0]));
        assert_eq!(g.degree(), 0);
        assert!(berlekamp_massey(&f, &[]).degree() == 0);
    }

    #[test]
    fn example_generator_is_product_of_locators() {
        let f = f13();
        let p = SparsePolynomial::from_terms(&f, vec![(2, f.element(3)), (7, f.element(5))]);
        let w = p.evaluate_geometric(&f, &f.element(2), 0, 1, 4);
        let g = berlekamp_massey(&f, &w);
        // (z - 4)(z - 11) = z^2 - 15 z + 44 = z^2 - 2 z + 5 over F_13
        assert_eq!(g.coefficients(&f), elems(&f, &[5, -2, 1]));
        assert_eq!(g, GeneratorPolynomial::from_roots(&f, &elems(&f, &[4, 11])));
        assert!(generates(&f, &g, &w));
        let longer = p.evaluate_geometric(&f, &f.element(2), 0, 1, 30);
        assert!(generates(&f, &g, &longer));
    }

    #[test]
    fn generates_examples() {
        let f = f13();
        let g = GeneratorPolynomial::from_recurrence(vec![f.one()]);
        assert!(generates(&f, &g, &elems(&f, &[5, 5, 5])));
        assert!(!generates(&f, &g, &elems(&f, &[5, 5, 6])));
    }

    #[test]
    fn clean_up_exact_word() {
        let f = PrimeField::new(97).unwrap();
        let a = f.find_primitive_root_of_unity(96).unwrap();
        let p = SparsePolynomial::from_terms(&f, vec![(3, f.element(7)), (40, f.element(90))]);
        let word = p.evaluate_geometric(&f, &a, 0, 1, 20);
        let g = berlekamp_massey(&f, &word[5..9]);
        for start in 0..=18 {
            let c = clean_up(&f, &g, &word, start, 0).unwrap().unwrap();
            assert_eq!(c.mismatches, 0);
            assert_eq!(c.corrected, word);
        }
    }

    #[test]
    fn clean_up_repairs_single_error() {
        let f = PrimeField::new(97).unwrap();
        let a = f.find_primitive_root_of_unity(96).unwrap();
        let p = SparsePolynomial::from_terms(&f, vec![(3, f.element(7)), (40, f.element(90))]);
        let word = p.evaluate_geometric(&f, &a, 0, 1, 20);
        let g = berlekamp_massey(&f, &word[0..4]);
        for bad in 0..20 {
            let mut recv = word.clone();
            recv[bad] = f.add(&recv[bad], &f.element(11));
            let start = if bad < 10 { 12 } else { 2 };
            let c = clean_up(&f, &g, &recv, start, 1).unwrap().unwrap();
            assert_eq!(c.mismatches, 1);
            assert_eq!(c.corrected, word);
            assert_eq!(clean_up(&f, &g, &recv, start, 0).unwrap(), None);
        }
    }

    #[test]
    fn clean_up_rejects_wrong_generator() {
        let f = PrimeField::new(97).unwrap();
        let a = f.find_primitive_root_of_unity(96).unwrap();
        let p = SparsePolynomial::from_terms(&f, vec![(3, f.element(7)), (40, f.element(90))]);
        let q = SparsePolynomial::from_terms(&f, vec![(3, f.element(7)), (41, f.element(90))]);
        let word = p.evaluate_geometric(&f, &a, 0, 1, 20);
        let wrong = berlekamp_massey(&f, &q.evaluate_geometric(&f, &a, 0, 1, 4));
        assert_eq!(clean_up(&f, &wrong, &word, 0, 1).unwrap(), None);
    }

    #[test]
    fn clean_up_degenerate_generator() {
        let f = f13();
        // z^2 - z: lambda_0 = 0
        let g = GeneratorPolynomial::from_recurrence(elems(&f, &[0, 1]));
        let w = elems(&f, &[3, 1, 1, 1]);
        assert_eq!(clean_up(&f, &g, &w, 1, 4), Err(Error::DegenerateGenerator));
        assert!(clean_up(&f, &g, &w, 0, 4).unwrap().is_some());
        assert!(clean_up(&f, &g, &w, 3, 4).is_err());
    }

    /// All monic polynomials of degree `d` over F_p, as recurrence vectors.
    fn all_recurrences(p: u64, d: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..p).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn minimality_exhaustive_f3() {
        // every window of length <= 5 over F_3
        let f = PrimeField::new(3).unwrap();
        for len in 1..=5u32 {
            for code in 0..3u64.pow(len) {
                let w: Vec<_> = (0..len).map(|i| f.element((code / 3u64.pow(i) % 3) as i64)).collect();
                let g = berlekamp_massey(&f, &w);
                assert!(generates(&f, &g, &w), "{w:?}");
                assert!(g.degree() <= w.len());
                for d in 0..g.degree() {
                    for lam in all_recurrences(3, d) {
                        let cand = GeneratorPolynomial::from_recurrence(
                            lam.iter().map(|&x| f.element(x as i64)).collect(),
                        );
                        assert!(!generates(&f, &cand, &w), "{w:?} has generator of degree {d}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bm_output_generates_window(v in proptest::collection::vec(0i64..13, 1..12)) {
            let f = f13();
            let w = elems(&f, &v);
            let g = berlekamp_massey(&f, &w);
            prop_assert!(generates(&f, &g, &w));
            prop_assert!(g.degree() <= w.len());
        }

        #[test]
        fn generation_survives_truncation(v in proptest::collection::vec(0i64..13, 1..12), a in 0usize..12, b in 0usize..12) {
            let f = f13();
            let w = elems(&f, &v);
            let g = berlekamp_massey(&f, &w[..w.len() / 2 + 1]);
            if generates(&f, &g, &w) {
                let (lo, hi) = (a.min(b).min(w.len()), a.max(b).min(w.len()));
                prop_assert!(generates(&f, &g, &w[lo..hi]));
            }
        }

        #[test]
        fn clean_window_yields_locator_product(
            exps in proptest::collection::btree_set(0u64..96, 0..6),
            seed in 1i64..97,
        ) {
            let f = PrimeField::new(97).unwrap();
            let a = f.find_primitive_root_of_unity(96).unwrap();
            let terms: Vec<_> = exps.iter().enumerate()
                .map(|(i, &e)| (e, f.element(seed * (i as i64 + 1) % 96 + 1))).collect();
            let p = SparsePolynomial::from_terms(&f, terms);
            let t = p.sparsity();
            let w = p.evaluate_geometric(&f, &a, 0, 1, 2 * t + 3);
            let roots: Vec<_> = p.exponents().map(|e| f.pow(&a, e)).collect();
            prop_assert_eq!(berlekamp_massey(&f, &w), GeneratorPolynomial::from_roots(&f, &roots));
        }
    }
}
