//! Sparse polynomials `sum_j c_j z^(e_j)` stored as their nonzero terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, PrimeField, Rational, RationalField};

/// Terms sorted by strictly increasing exponent, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePolynomial<E> {
    terms: Vec<(u64, E)>,
}

impl<E: Clone + PartialEq> SparsePolynomial<E> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Builds the canonical form: sorts by exponent, merges repeated
    /// exponents, drops zero coefficients.
    pub fn from_terms<F: Field<Elem = E>>(field: &F, mut terms: Vec<(u64, E)>) -> Self {
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(u64, E)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(lc, &c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Self { terms: out }
    }

    pub fn monomial<F: Field<Elem = E>>(field: &F, e: u64, c: E) -> Self {
        Self::from_terms(field, vec![(e, c)])
    }

    pub fn terms(&self) -> &[(u64, E)] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|(e, _)| *e)
    }

    pub fn eval<F: Field<Elem = E>>(&self, field: &F, x: &E) -> E {
        self.terms.iter().fold(field.zero(), |acc, (e, c)| {
            field.add(&acc, &field.mul(c, &field.pow(x, *e)))
        })
    }

    /// `f(alpha^(r + i*s))` for `i = 0..count`.
    pub fn evaluate_geometric<F: Field<Elem = E>>(
        &self,
        field: &F,
        alpha: &E,
        start: u64,
        step: u64,
        count: usize,
    ) -> Vec<E> {
        // term-wise geometric progressions: c * b^(r+is) = (c b^r) (b^s)^i
        let mut cur: Vec<E> = self
            .terms
            .iter()
            .map(|(e, c)| field.mul(c, &field.pow(&field.pow(alpha, *e), start)))
            .collect();
        let ratios: Vec<E> = self
            .terms
            .iter()
            .map(|(e, _)| field.pow(&field.pow(alpha, *e), step))
            .collect();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(cur.iter().fold(field.zero(), |a, x| field.add(&a, x)));
            for (x, q) in cur.iter_mut().zip(&ratios) {
                *x = field.mul(x, q);
            }
        }
        out
    }

    /// `g(z) = f(lambda * z)`: coefficient `c_j` becomes `c_j * lambda^(e_j)`.
    pub fn scale_argument<F: Field<Elem = E>>(&self, field: &F, lambda: &E) -> Self {
        Self::from_terms(
            field,
            self.terms
                .iter()
                .map(|(e, c)| (*e, field.mul(c, &field.pow(lambda, *e))))
                .collect(),
        )
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(e, c)| (*e, field.neg(c))));
        Self::from_terms(field, terms)
    }
}

/// Inverse DFT of `v` with respect to `alpha`, where `alpha` has order `v.len()`.
///
/// Returns the unique `f` of degree `< m` with `f(alpha^i) = v[i]`, computed
/// as `(1/m) * DFT_{alpha^-1}(v)` in `O(m^2)`.
pub fn inverse_dft(
    field: &PrimeField,
    v: &[FieldElement],
    alpha: FieldElement,
) -> Result<SparsePolynomial<FieldElement>> {
    let m = v.len() as u64;
    if m == 0 {
        return Err(Error::Parameter("empty vector".into()));
    }
    if field.order(alpha) != Some(m) {
        return Err(Error::Parameter(format!(
            "alpha = {alpha} does not have order {m}"
        )));
    }
    let alpha_inv = field.inv(&alpha).expect("alpha is nonzero");
    let m_inv = field
        .inv(&field.element(m as i64))
        .expect("m divides p - 1, hence is invertible");
    let mut terms = Vec::new();
    let mut root = field.one(); // alpha^(-e)
    for e in 0..m {
        let mut x = field.one();
        let mut acc = field.zero();
        for vi in v {
            acc = field.add(&acc, &field.mul(vi, &x));
            x = field.mul(&x, &root);
        }
        terms.push((e, field.mul(&acc, &m_inv)));
        root = field.mul(&root, &alpha_inv);
    }
    Ok(SparsePolynomial::from_terms(field, terms))
}

/// Wire form of a polynomial over `F_p`: `{"p": .., "terms": [[e, c], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub p: u64,
    pub terms: Vec<(u64, u64)>,
}

impl SparsePolynomial<FieldElement> {
    pub fn to_json(&self, field: &PrimeField) -> PolynomialJson {
        PolynomialJson {
            p: field.modulus(),
            terms: self.terms.iter().map(|(e, c)| (*e, c.value())).collect(),
        }
    }

    pub fn from_json(field: &PrimeField, json: &PolynomialJson) -> Result<Self> {
        if json.p != field.modulus() {
            return Err(Error::Format(format!(
                "polynomial is over F_{}, expected F_{}",
                json.p,
                field.modulus()
            )));
        }
        if json.terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Format("exponents must be strictly ascending".into()));
        }
        let terms = json
            .terms
            .iter()
            .map(|&(e, c)| Ok((e, field.element_checked(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(field, terms))
    }
}

/// Wire form of a rational polynomial: `{"terms": [[e, "num/den"], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalPolynomialJson {
    pub terms: Vec<(u64, String)>,
}

impl SparsePolynomial<Rational> {
    pub fn to_rational_json(&self) -> RationalPolynomialJson {
        RationalPolynomialJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, crate::field::rational_to_string(c)))
                .collect(),
        }
    }

    pub fn from_rational_json(json: &RationalPolynomialJson) -> Result<Self> {
        if json.terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Format("exponents must be strictly ascending".into()));
        }
        let terms = json
            .terms
            .iter()
            .map(|(e, c)| Ok((*e, crate::field::parse_rational(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(&RationalField, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f13() -> PrimeField {
        PrimeField::new(13).unwrap()
    }

    fn example(field: &PrimeField) -> SparsePolynomial<FieldElement> {
        SparsePolynomial::from_terms(field, vec![(2, field.element(3)), (7, field.element(5))])
    }

    /// Plain modular evaluation with u64 arithmetic, no field type involved.
    fn direct_eval(p: u64, terms: &[(u64, u64)], x: u64) -> u64 {
        terms.iter().fold(0, |acc, &(e, c)| {
            let mut xe = 1;
            for _ in 0..e {
                xe = xe * x % p;
            }
            (acc + c * xe) % p
        })
    }

    #[test]
    fn canonical_form() {
        let f = f13();
        let p = SparsePolynomial::from_terms(
            &f,
            vec![(5, f.element(1)), (2, f.element(4)), (5, f.element(12)), (0, f.zero())],
        );
        assert_eq!(p.terms(), &[(2, f.element(4))]);
        assert_eq!(p.sparsity(), 1);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn evaluate_zero_polynomial() {
        let f = f13();
        let z = SparsePolynomial::<FieldElement>::zero();
        assert_eq!(z.evaluate_geometric(&f, &f.element(2), 0, 1, 5), vec![f.zero(); 5]);
    }

    #[test]
    fn evaluate_example_matches_direct() {
        let f = f13();
        let v = example(&f).evaluate_geometric(&f, &f.element(2), 0, 1, 4);
        let expected: Vec<u64> = (0..4)
            .map(|i| direct_eval(13, &[(2, 3), (7, 5)], direct_eval(13, &[(i, 1)], 2)))
            .collect();
        assert_eq!(expected[..3], [8, 2, 3]);
        assert_eq!(v.iter().map(|x| x.value()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn evaluate_monomial() {
        let f = PrimeField::new(97).unwrap();
        let a = f.find_primitive_root_of_unity(96).unwrap();
        for e in [0u64, 1, 5, 95] {
            let p = SparsePolynomial::monomial(&f, e, f.one());
            let v = p.evaluate_geometric(&f, &a, 0, 1, 10);
            for (i, x) in v.iter().enumerate() {
                assert_eq!(*x, f.pow(&a, e * i as u64));
            }
        }
    }

    #[test]
    fn inverse_dft_of_zero() {
        let f = f13();
        let p = inverse_dft(&f, &vec![f.zero(); 12], f.element(2)).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn inverse_dft_rejects_wrong_order() {
        let f = f13();
        assert!(inverse_dft(&f, &vec![f.zero(); 6], f.element(2)).is_err());
    }

    #[test]
    fn periodic_pattern_has_weight_t() {
        // x = (0^(T-1), 1, 0^(T-1), 1, ...) over one period of length m
        let f = PrimeField::new(97).unwrap();
        for (t, m) in [(1u64, 2u64), (2, 12), (3, 12), (3, 96), (4, 32), (6, 96)] {
            let a = f.find_primitive_root_of_unity(m).unwrap();
            let v: Vec<_> = (0..m)
                .map(|i| if i % t == t - 1 { f.one() } else { f.zero() })
                .collect();
            let p = inverse_dft(&f, &v, a).unwrap();
            assert_eq!(p.sparsity() as u64, t, "T={t} m={m}");
            assert_eq!(p.evaluate_geometric(&f, &a, 0, 1, m as usize), v);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = f13();
        let p = example(&f);
        let s = serde_json::to_string(&p.to_json(&f)).unwrap();
        assert_eq!(s, r#"{"p":13,"terms":[[2,3],[7,5]]}"#);
        let back: PolynomialJson = serde_json::from_str(&s).unwrap();
        assert_eq!(SparsePolynomial::from_json(&f, &back).unwrap(), p);
        let bad = PolynomialJson { p: 13, terms: vec![(7, 5), (2, 3)] };
        assert!(SparsePolynomial::from_json(&f, &bad).is_err());
        let bad = PolynomialJson { p: 13, terms: vec![(2, 13)] };
        assert!(SparsePolynomial::from_json(&f, &bad).is_err());
    }

    fn arb_poly(m: u64, p: u64, max_terms: usize) -> impl Strategy<Value = Vec<(u64, u64)>> {
        proptest::collection::vec((0..m, 1..p), 0..=max_terms)
    }

    proptest! {
        #[test]
        fn dft_round_trip(terms in arb_poly(12, 13, 6)) {
            let f = f13();
            let p = SparsePolynomial::from_terms(
                &f, terms.iter().map(|&(e, c)| (e, f.element(c as i64))).collect());
            let v = p.evaluate_geometric(&f, &f.element(2), 0, 1, 12);
            prop_assert_eq!(inverse_dft(&f, &v, f.element(2)).unwrap(), p);
        }

        #[test]
        fn affine_evaluation_is_substitution(terms in arb_poly(96, 97, 5), r in 0u64..200, s in 1u64..50) {
            let f = PrimeField::new(97).unwrap();
            let a = f.find_primitive_root_of_unity(96).unwrap();
            let p = SparsePolynomial::from_terms(
                &f, terms.iter().map(|&(e, c)| (e, f.element(c as i64))).collect());
            let g = p.scale_argument(&f, &f.pow(&a, r));
            let beta = f.pow(&a, s);
            prop_assert_eq!(
                p.evaluate_geometric(&f, &a, r, s, 8),
                g.evaluate_geometric(&f, &beta, 0, 1, 8)
            );
        }
    }
}
