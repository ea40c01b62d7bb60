//! Homogeneous forms and the contraction action.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::field::Field;
use crate::matrix::SparseRow;
use crate::ring::{same_ring, Monomial, MonomialBasis, PolyRing};

/// A homogeneous polynomial. Zero coefficients are never stored.
#[derive(Clone)]
pub struct Form<F: Field> {
    ring: Arc<PolyRing<F>>,
    degree: u32,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Form<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>, degree: u32) -> Self {
        Form {
            ring: ring.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        let mut f = Form::zero(ring, 0);
        f.add_term(Monomial::one(ring.nvars()), c);
        f
    }

    pub fn one(ring: &Arc<PolyRing<F>>) -> Self {
        Form::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<PolyRing<F>>, i: usize) -> Self {
        Form::monomial(ring, Monomial::var(ring.nvars(), i))
    }

    pub fn monomial(ring: &Arc<PolyRing<F>>, m: Monomial) -> Self {
        let mut f = Form::zero(ring, m.degree());
        f.add_term(m, ring.field().one());
        f
    }

    /// Builds a form from terms, checking homogeneity. Repeated monomials are
    /// summed.
    pub fn from_terms(
        ring: &Arc<PolyRing<F>>,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, F::Elem)>,
    ) -> Result<Self, AlgebraError> {
        let mut f = Form::zero(ring, degree);
        for (m, c) in terms {
            if m.nvars() != ring.nvars() {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "monomial with {} exponents in a ring with {} variables",
                    m.nvars(),
                    ring.nvars()
                )));
            }
            if m.degree() != degree {
                return Err(AlgebraError::Inhomogeneous {
                    monomial: m.display_with(ring.names()),
                    found: m.degree(),
                    expected: degree,
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// `sum_k coeffs[k] * var(offset + k)`
    pub fn linear(ring: &Arc<PolyRing<F>>, offset: usize, coeffs: &[F::Elem]) -> Self {
        let mut f = Form::zero(ring, 1);
        for (k, c) in coeffs.iter().enumerate() {
            f.add_term(Monomial::var(ring.nvars(), offset + k), c.clone());
        }
        f
    }

    /// The divided power `L^[k]` of the linear form `L = sum_j c_j v_{offset+j}`:
    /// the coefficient of `v^a` is `prod_j c_j^{a_j}`, with no multinomial
    /// factors. Under contraction, `h o L^[k] = h(c) L^[k - deg h]`.
    pub fn linear_divided_power(
        ring: &Arc<PolyRing<F>>,
        offset: usize,
        coeffs: &[F::Elem],
        k: u32,
    ) -> Self {
        let field = ring.field();
        let sub = MonomialBasis::new(coeffs.len(), k);
        let mut f = Form::zero(ring, k);
        for a in sub.monomials() {
            let mut c = field.one();
            for (j, &e) in a.exps().iter().enumerate() {
                c = field.mul(&c, &field.pow(&coeffs[j], e as u32));
            }
            let mut exps = vec![0u16; ring.nvars()];
            exps[offset..offset + coeffs.len()].copy_from_slice(a.exps());
            f.add_term(Monomial::new(exps), c);
        }
        f
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        let field = self.ring.field().clone();
        if field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = field.add(v, &c);
                if field.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F::Elem)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    fn check_ring(&self, other: &Form<F>) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Form<F>) -> Result<Form<F>, AlgebraError> {
        self.check_ring(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(AlgebraError::DegreeMismatch(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Form<F> {
        let field = self.field();
        let mut out = Form::zero(&self.ring, self.degree);
        if field.is_zero(c) {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), field.mul(v, c));
        }
        out
    }

    pub fn sub(&self, other: &Form<F>) -> Result<Form<F>, AlgebraError> {
        self.add(&other.scale(&self.field().neg(&self.field().one())))
    }

    /// Product of forms over the same ring.
    pub fn multiply(&self, other: &Form<F>) -> Result<Form<F>, AlgebraError> {
        self.check_ring(other)?;
        let field = self.field();
        let mut out = Form::zero(&self.ring, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.mul(b), field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Form<F> {
        let mut acc = Form::one(&self.ring);
        for _ in 0..k {
            acc = acc.multiply(self).expect("same ring");
        }
        acc
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Form<F> {
        let mut out = Form::zero(&self.ring, self.degree + m.degree());
        for (a, c) in &self.terms {
            out.terms.insert(a.mul(m), c.clone());
        }
        out
    }

    /// Contraction `self o big`: `self` lives in R, `big` in the dual ring S.
    /// On monomials `x^a o X^b = X^(b-a)` when `a <= b` and `0` otherwise.
    pub fn contract(&self, big: &Form<F>) -> Result<Form<F>, AlgebraError> {
        if !self.ring.pairs_with(&big.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if self.degree > big.degree {
            return Err(AlgebraError::DegreeMismatch(format!(
                "cannot contract a degree {} form into a degree {} form",
                self.degree, big.degree
            )));
        }
        let field = self.field();
        let mut out = Form::zero(&big.ring, big.degree - self.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &big.terms {
                if let Some(q) = a.complement_in(b) {
                    out.add_term(q, field.mul(ca, cb));
                }
            }
        }
        Ok(out)
    }

    /// Evaluates the form at a point of affine space.
    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        let field = self.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (j, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    v = field.mul(&v, &field.pow(&point[j], e as u32));
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    /// Coordinates in the monomial basis of the form's degree.
    pub fn to_row(&self) -> SparseRow<F::Elem> {
        let basis = self.ring.basis(self.degree);
        let mut row: SparseRow<F::Elem> = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    basis.index_of(m).expect("monomial in basis") as u32,
                    c.clone(),
                )
            })
            .collect();
        row.sort_by_key(|e| e.0);
        row
    }

    pub fn from_row(ring: &Arc<PolyRing<F>>, degree: u32, row: &SparseRow<F::Elem>) -> Self {
        let basis = ring.basis(degree);
        let mut f = Form::zero(ring, degree);
        for (col, c) in row {
            f.add_term(basis.get(*col as usize).clone(), c.clone());
        }
        f
    }
}

impl<F: Field> PartialEq for Form<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring)
            && (self.degree == other.degree || (self.is_zero() && other.is_zero()))
            && self.terms == other.terms
    }
}

impl<F: Field> fmt::Display for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = self.field();
        let mut first = true;
        for (m, c) in self.terms() {
            let coef = field.format(c);
            let mono = m.display_with(self.ring.names());
            let body = match (coef.as_str(), mono.as_str()) {
                (c, "1") => c.to_string(),
                ("1", m) => m.to_string(),
                (c, m) => format!("{c}*{m}"),
            };
            if first {
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Form<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn xy() -> Arc<PolyRing<PrimeField>> {
        PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()])
    }

    #[test]
    fn difference_of_squares() {
        let r = xy();
        let f = *r.field();
        let x = Form::var(&r, 0);
        let y = Form::var(&r, 1);
        let prod = x.add(&y).unwrap().multiply(&x.sub(&y).unwrap()).unwrap();
        let expect = Form::from_terms(
            &r,
            2,
            [
                (Monomial::new(vec![2, 0]), f.one()),
                (Monomial::new(vec![0, 2]), f.from_i64(-1)),
            ],
        )
        .unwrap();
        assert_eq!(prod, expect);
        assert_eq!(prod.multiply(&Form::one(&r)).unwrap(), prod);
    }

    #[test]
    fn cube_of_binomial() {
        // multinomial expansion of (u + 3v)^3: 1, 9, 27, 27
        let r = xy();
        let f = *r.field();
        let l = Form::linear(&r, 0, &[f.one(), f.from_i64(3)]);
        let cube = l.pow(3);
        let coeffs: Vec<u32> = cube.terms().map(|(_, c)| *c).collect();
        assert_eq!(coeffs, vec![1, 9, 27, 27]);
    }

    #[test]
    fn contraction_rule() {
        let r = PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]);
        let s = r.dual();
        let x = Form::var(&r, 0);
        let big_x3 = Form::monomial(&s, Monomial::new(vec![3, 0]));
        assert_eq!(
            x.contract(&big_x3).unwrap(),
            Form::monomial(&s, Monomial::new(vec![2, 0]))
        );
        let big_y = Form::var(&s, 1);
        assert!(x.contract(&big_y).unwrap().is_zero());
        // (xy) o X^2 Y = X, and agrees with x o (y o X^2 Y)
        let xy_ = Form::monomial(&r, Monomial::new(vec![1, 1]));
        let big = Form::monomial(&s, Monomial::new(vec![2, 1]));
        let lhs = xy_.contract(&big).unwrap();
        let rhs = x
            .contract(&Form::var(&r, 1).contract(&big).unwrap())
            .unwrap();
        assert_eq!(lhs, Form::var(&s, 0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_has_no_factorials() {
        // x o X^3 = X^2 exactly, where differentiation would give 3 X^2
        let r = PolyRing::new(PrimeField::new(3).unwrap(), vec!["x".into()]);
        let s = r.dual();
        let out = Form::var(&r, 0)
            .contract(&Form::monomial(&s, Monomial::new(vec![3])))
            .unwrap();
        assert_eq!(out.coefficient(&Monomial::new(vec![2])), 1);
    }

    #[test]
    fn contraction_errors() {
        let r = xy();
        let s = r.dual();
        let quad = Form::monomial(&r, Monomial::new(vec![2, 0]));
        assert!(matches!(
            quad.contract(&Form::var(&s, 0)),
            Err(AlgebraError::DegreeMismatch(_))
        ));
        let other = PolyRing::new(PrimeField::default(), vec!["a".into()]);
        assert!(matches!(
            Form::var(&other, 0).contract(&Form::var(&s, 0)),
            Err(AlgebraError::RingMismatch)
        ));
    }

    #[test]
    fn divided_power_contracts_like_evaluation() {
        // (3u - v) o (U + 3V)^[3] = 0
        let r = xy();
        let s = r.dual();
        let f = *r.field();
        let big = Form::linear_divided_power(&s, 0, &[f.one(), f.from_i64(3)], 3);
        let coeffs: Vec<u32> = big.terms().map(|(_, c)| *c).collect();
        assert_eq!(coeffs, vec![1, 3, 9, 27]);
        let ell = Form::linear(&r, 0, &[f.from_i64(3), f.from_i64(-1)]);
        assert!(ell.contract(&big).unwrap().is_zero());
    }

    #[test]
    fn inhomogeneous_terms_rejected() {
        let r = xy();
        let f = *r.field();
        let err = Form::from_terms(
            &r,
            2,
            [
                (Monomial::new(vec![2, 0]), f.one()),
                (Monomial::new(vec![0, 1]), f.one()),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            AlgebraError::Inhomogeneous {
                monomial: "y".into(),
                found: 1,
                expected: 2
            }
        );
    }
}
