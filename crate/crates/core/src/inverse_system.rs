//! Perazzo forms, catalecticants and annihilators.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::closed_forms::binomial_u64;
use crate::error::AlgebraError;
use crate::field::Field;
use crate::form::Form;
use crate::ideals::{generators_in_degree, span_of_products, GradedIdeal, HVector};
use crate::matrix::{rank_of_rows, ExactMatrix, RowEchelon, Rref};
use crate::ring::{Monomial, PolyRing};

/// Number of extra draws after the first when sampled points fail general
/// position.
pub const RESAMPLE_LIMIT: usize = 8;

/// Integer polynomial given by `(exponents, coefficient)` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly {
    pub terms: Vec<(Vec<u16>, i64)>,
}

/// Explicit `p_i` (over the u-block, degree `d-1`) and optional `g` (over
/// the whole dual ring, degree `d`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralParts {
    pub p: Vec<IntPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<IntPoly>,
}

/// `F = X_0 p_0 + ... + X_n p_n (+ g)` in `K[X_0..X_n, U_1..U_m]_d`.
///
/// Unless explicit parts are given, `p_i = L_i^[d-1]` for the linear forms
/// `L_i = sum_k c_{i,k} U_k`. The same `L_i` define the points of the
/// double-point scheme. Coefficients are integers so one spec is meaningful
/// over every field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerazzoSpec {
    pub n: usize,
    pub m: usize,
    pub d: u32,
    pub linear_forms: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<GeneralParts>,
    /// Asserts `n + 1 = C(d+m-2, m-1)` with independent `p_i`; checked on
    /// construction of the form.
    #[serde(default)]
    pub full: bool,
}

impl PerazzoSpec {
    pub fn new(n: usize, m: usize, d: u32, linear_forms: Vec<Vec<i64>>) -> Self {
        let full = n + 1 == binomial_u64(d as u64 + m as u64 - 2, m as u64 - 1) as usize;
        PerazzoSpec {
            n,
            m,
            d,
            linear_forms,
            parts: None,
            full,
        }
    }

    pub fn with_parts(n: usize, m: usize, d: u32, parts: GeneralParts, full: bool) -> Self {
        PerazzoSpec {
            n,
            m,
            d,
            linear_forms: Vec::new(),
            parts: Some(parts),
            full,
        }
    }

    pub fn nvars(&self) -> usize {
        self.n + self.m + 1
    }

    pub fn linear_form<F: Field>(&self, field: &F, i: usize) -> Vec<F::Elem> {
        self.linear_forms[i]
            .iter()
            .map(|&c| field.from_i64(c))
            .collect()
    }

    pub fn linear_forms_in<F: Field>(&self, field: &F) -> Vec<Vec<F::Elem>> {
        (0..self.linear_forms.len())
            .map(|i| self.linear_form(field, i))
            .collect()
    }

    /// Checks parameter ranges, shapes and pairwise independence of the
    /// `L_i` over `field`.
    pub fn validate<F: Field>(&self, field: &F) -> Result<(), AlgebraError> {
        if self.n < 2 || self.m < 2 || self.d < 3 {
            return Err(AlgebraError::InvalidParameters(format!(
                "need n >= 2, m >= 2, d >= 3 (got n={}, m={}, d={})",
                self.n, self.m, self.d
            )));
        }
        if let Some(parts) = &self.parts {
            if parts.p.len() != self.n + 1 {
                return Err(AlgebraError::InvalidParameters(format!(
                    "{} parts p_i given, expected {}",
                    parts.p.len(),
                    self.n + 1
                )));
            }
            if self.linear_forms.is_empty() {
                return Ok(());
            }
        }
        if self.linear_forms.len() != self.n + 1 {
            return Err(AlgebraError::InvalidParameters(format!(
                "{} linear forms given, expected {}",
                self.linear_forms.len(),
                self.n + 1
            )));
        }
        if let Some(bad) = self.linear_forms.iter().position(|l| l.len() != self.m) {
            return Err(AlgebraError::InvalidParameters(format!(
                "linear form L_{bad} has {} coefficients, expected {}",
                self.linear_forms[bad].len(),
                self.m
            )));
        }
        let ls = self.linear_forms_in(field);
        for (i, l) in ls.iter().enumerate() {
            if l.iter().all(|c| field.is_zero(c)) {
                return Err(AlgebraError::InvalidParameters(format!("L_{i} is zero")));
            }
        }
        for i in 0..ls.len() {
            for j in i + 1..ls.len() {
                if proportional(field, &ls[i], &ls[j]) {
                    return Err(AlgebraError::DependentLinearForms(i, j));
                }
            }
        }
        Ok(())
    }

    /// Draws monic forms `L_i = U_1 + sum_{k>1} lambda_{i,k} U_k` with
    /// `lambda` uniform in `1..=bound`, pairwise distinct, and resamples
    /// (up to [`RESAMPLE_LIMIT`] times) until the points are in general
    /// position over `field`.
    pub fn sample_full<F: Field>(
        field: &F,
        m: usize,
        d: u32,
        seed: u64,
        bound: i64,
    ) -> Result<(PerazzoSpec, usize), AlgebraError> {
        let n = crate::closed_forms::full_n(m, d)?;
        crate::closed_forms::check_full(n, m, d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for attempt in 0..=RESAMPLE_LIMIT {
            let mut seen = HashSet::new();
            let mut forms = Vec::with_capacity(n + 1);
            while forms.len() < n + 1 {
                let mut l = vec![1i64];
                l.extend((1..m).map(|_| rng.gen_range(1..=bound)));
                if seen.insert(l.clone()) {
                    forms.push(l);
                }
            }
            let spec = PerazzoSpec::new(n, m, d, forms);
            if spec.validate(field).is_ok() && crate::ideals::general_position_check(field, &spec) {
                return Ok((spec, attempt));
            }
        }
        Err(AlgebraError::RetriesExhausted(RESAMPLE_LIMIT))
    }
}

fn proportional<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let minor = field.sub(&field.mul(&a[i], &b[j]), &field.mul(&a[j], &b[i]));
            if !field.is_zero(&minor) {
                return false;
            }
        }
    }
    true
}

fn int_poly_form<F: Field>(
    ring: &Arc<PolyRing<F>>,
    poly: &IntPoly,
    offset: usize,
    degree: u32,
) -> Result<Form<F>, AlgebraError> {
    let field = ring.field();
    let mut terms = Vec::with_capacity(poly.terms.len());
    for (e, c) in &poly.terms {
        if offset + e.len() > ring.nvars() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "exponent vector of length {} does not fit",
                e.len()
            )));
        }
        let mut exps = vec![0u16; ring.nvars()];
        exps[offset..offset + e.len()].copy_from_slice(e);
        terms.push((Monomial::new(exps), field.from_i64(*c)));
    }
    Form::from_terms(ring, degree, terms)
}

/// The dual generator of a spec, in `ring = K[X_0..X_n, U_1..U_m]`.
pub fn build_perazzo_form<F: Field>(
    ring: &Arc<PolyRing<F>>,
    spec: &PerazzoSpec,
) -> Result<Form<F>, AlgebraError> {
    let field = ring.field();
    spec.validate(field)?;
    if ring.nvars() != spec.nvars() {
        return Err(AlgebraError::DimensionMismatch(format!(
            "ring has {} variables, spec needs {}",
            ring.nvars(),
            spec.nvars()
        )));
    }
    let nx = spec.n + 1;
    let parts: Vec<Form<F>> = match &spec.parts {
        Some(gp) => {
            gp.p.iter()
                .map(|p| int_poly_form(ring, p, nx, spec.d - 1))
                .collect::<Result<_, _>>()?
        }
        None => (0..nx)
            .map(|i| Form::linear_divided_power(ring, nx, &spec.linear_form(field, i), spec.d - 1))
            .collect(),
    };
    if spec.full {
        crate::closed_forms::check_full(spec.n, spec.m, spec.d)?;
        let rows: Vec<_> = parts.iter().map(Form::to_row).collect();
        let rank = rank_of_rows(field, ring.basis(spec.d - 1).len(), &rows);
        if rank < nx {
            return Err(AlgebraError::NotFull { rank, expected: nx });
        }
    }
    let mut f = Form::zero(ring, spec.d);
    for (i, p) in parts.iter().enumerate() {
        f = f.add(&Form::var(ring, i).multiply(p)?)?;
    }
    if let Some(g) = spec.parts.as_ref().and_then(|gp| gp.g.as_ref()) {
        f = f.add(&int_poly_form(ring, g, 0, spec.d)?)?;
    }
    if f.is_zero() {
        return Err(AlgebraError::ZeroForm);
    }
    Ok(f)
}

/// Catalecticant of `big` in degree `t`: rows indexed by the monomials
/// `x^a` of `R_t`, row `a` holding the coordinates of `x^a o big` in
/// `S_{d-t}`.
pub fn catalecticant<F: Field>(big: &Form<F>, t: u32) -> Result<ExactMatrix<F>, AlgebraError> {
    let d = big.degree();
    if t > d {
        return Err(AlgebraError::DegreeMismatch(format!(
            "catalecticant degree {t} exceeds form degree {d}"
        )));
    }
    let s = big.ring();
    let rbasis = s.basis(t);
    let sbasis = s.basis(d - t);
    let mut rows = vec![Vec::new(); rbasis.len()];
    for (r, a) in rbasis.monomials().iter().enumerate() {
        for (g, c) in big.terms() {
            if let Some(q) = a.complement_in(g) {
                rows[r].push((
                    sbasis.index_of(&q).expect("quotient in basis") as u32,
                    c.clone(),
                ));
            }
        }
    }
    ExactMatrix::from_rows(s.field().clone(), sbasis.len(), rows)
}

/// `Ann_R(F)` as a graded ideal: `Ann_t` is the kernel of the degree-`t`
/// catalecticant and equals `R_t` above the degree of `F`.
pub struct Annihilator<F: Field> {
    ring: Arc<PolyRing<F>>,
    form: Form<F>,
    cache: Mutex<BTreeMap<u32, Arc<Rref<F>>>>,
}

impl<F: Field> Annihilator<F> {
    /// `ring` is the ring acting on `form` by contraction.
    pub fn new(ring: &Arc<PolyRing<F>>, form: Form<F>) -> Result<Self, AlgebraError> {
        if !ring.pairs_with(form.ring()) {
            return Err(AlgebraError::RingMismatch);
        }
        if form.is_zero() {
            return Err(AlgebraError::ZeroForm);
        }
        Ok(Annihilator {
            ring: ring.clone(),
            form,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn form(&self) -> &Form<F> {
        &self.form
    }

    pub fn socle_degree(&self) -> u32 {
        self.form.degree()
    }
}

impl<F: Field> GradedIdeal<F> for Annihilator<F> {
    fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    fn piece(&self, t: u32) -> Arc<Rref<F>> {
        if let Some(p) = self.cache.lock().expect("piece cache poisoned").get(&t) {
            return p.clone();
        }
        let field = self.ring.field().clone();
        let ncols = self.ring.basis(t).len();
        let p = if t > self.form.degree() {
            Rref::full(field, ncols)
        } else {
            let cat = catalecticant(&self.form, t).expect("degree in range");
            let trans = cat.transpose();
            let kernel = Rref::from_rows(field.clone(), ncols, trans.rows().iter()).kernel();
            Rref::from_rows(field, ncols, kernel.iter())
        };
        let p = Arc::new(p);
        self.cache
            .lock()
            .expect("piece cache poisoned")
            .entry(t)
            .or_insert(p)
            .clone()
    }

    fn contains(&self, f: &Form<F>) -> bool {
        f.is_zero()
            || f.degree() > self.form.degree()
            || f.contract(&self.form).map(|r| r.is_zero()).unwrap_or(false)
    }
}

/// Minimal generators of `Ann(F)` grouped by degree, with graded dimensions
/// of `Ann` and of `A_F` in degrees `0..=d+1`.
#[derive(Clone, Debug)]
pub struct AnnihilatorResult<F: Field> {
    pub generators: BTreeMap<u32, Vec<Form<F>>>,
    pub ann_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
}

impl<F: Field> AnnihilatorResult<F> {
    pub fn count_in_degree(&self, t: u32) -> usize {
        self.generators.get(&t).map_or(0, Vec::len)
    }
}

pub fn annihilator_min_gens<F: Field>(ann: &Annihilator<F>) -> AnnihilatorResult<F> {
    let d = ann.socle_degree();
    let ring = ann.ring();
    let mut generators = BTreeMap::new();
    let mut ann_dims = Vec::new();
    let mut quotient_dims = Vec::new();
    for t in 0..=d + 1 {
        let dim = ann.dim(t);
        ann_dims.push(dim);
        quotient_dims.push(ring.basis(t).len() - dim);
        let g = generators_in_degree(ann, t);
        if !g.is_empty() {
            generators.insert(t, g);
        }
    }
    AnnihilatorResult {
        generators,
        ann_dims,
        quotient_dims,
    }
}

/// Whether `Ann_t = R_1 Ann_{t-1}`, i.e. no generators in degree `t`.
pub fn no_generators_in_degree<F: Field>(ann: &Annihilator<F>, t: u32) -> bool {
    let ech: RowEchelon<F> = span_of_products(ann.ring(), t, &ann.piece(t - 1));
    ech.rank() == ann.dim(t)
}

/// Ranks of the catalecticants of `big`, i.e. the Hilbert function of
/// `R/Ann(big)`.
pub fn inverse_system_hf<F: Field>(big: &Form<F>) -> HVector {
    let field = big.field();
    let h = (0..=big.degree())
        .map(|t| {
            let cat = catalecticant(big, t).expect("degree in range");
            rank_of_rows(field, cat.ncols(), cat.rows()) as u64
        })
        .collect();
    HVector::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn toy_spec() -> PerazzoSpec {
        PerazzoSpec::new(
            3,
            2,
            4,
            vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 3]],
        )
    }

    #[test]
    fn toy_form() {
        let field = PrimeField::default();
        let s = PolyRing::perazzo(field, 3, 2, true);
        let spec = toy_spec();
        assert!(spec.full);
        let f = build_perazzo_form(&s, &spec).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.num_terms(), 10);
        assert_eq!(
            f.to_string(),
            "X0*U1^3 + X1*U2^3 + X2*U1^3 + X2*U1^2*U2 + X2*U1*U2^2 + X2*U2^3 \
             + X3*U1^3 + 3*X3*U1^2*U2 + 9*X3*U1*U2^2 + 27*X3*U2^3"
        );
        assert_eq!(inverse_system_hf(&f).entries(), [1, 6, 6, 6, 1]);
    }

    #[test]
    fn dependent_forms_rejected() {
        let field = PrimeField::default();
        let s = PolyRing::perazzo(field, 2, 2, true);
        let spec = PerazzoSpec::new(2, 2, 3, vec![vec![1, 2], vec![2, 4], vec![0, 1]]);
        assert_eq!(
            build_perazzo_form(&s, &spec).unwrap_err(),
            AlgebraError::DependentLinearForms(0, 1)
        );
    }

    #[test]
    fn catalecticant_extremes() {
        let field = PrimeField::default();
        let s = PolyRing::perazzo(field, 2, 2, true);
        let spec = PerazzoSpec::new(2, 2, 3, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let f = build_perazzo_form(&s, &spec).unwrap();
        let c0 = catalecticant(&f, 0).unwrap();
        assert_eq!((c0.nrows(), c0.ncols()), (1, s.basis(3).len()));
        let c3 = catalecticant(&f, 3).unwrap();
        assert_eq!(c3.ncols(), 1);
        assert_eq!(rank_of_rows(&field, 1, c3.rows()), 1);
        assert!(catalecticant(&f, 4).is_err());
        assert_eq!(inverse_system_hf(&f).entries(), [1, 5, 5, 1]);
    }

    #[test]
    fn single_variable_annihilator() {
        let field = PrimeField::default();
        let s = PolyRing::new(field, vec!["X".into()]);
        let r = s.dual();
        let f = Form::monomial(&s, Monomial::new(vec![3]));
        let ann = Annihilator::new(&r, f).unwrap();
        let res = annihilator_min_gens(&ann);
        assert_eq!(res.generators.len(), 1);
        assert_eq!(res.generators[&4][0].to_string(), "x^4");
        assert_eq!(res.quotient_dims, [1, 1, 1, 1, 0]);
    }

    #[test]
    fn toy_generators() {
        let field = PrimeField::default();
        let s = PolyRing::perazzo(field, 3, 2, true);
        let r = s.dual();
        let f = build_perazzo_form(&s, &toy_spec()).unwrap();
        let ann = Annihilator::new(&r, f.clone()).unwrap();
        let res = annihilator_min_gens(&ann);
        assert_eq!(res.count_in_degree(2), 15);
        assert_eq!(res.count_in_degree(4), 5);
        assert_eq!(res.generators.len(), 2);
        for g in res.generators.values().flatten() {
            assert!(g.contract(&f).unwrap().is_zero());
        }
        assert!(no_generators_in_degree(&ann, 6));
        // scaling the dual generator leaves the annihilator unchanged
        let scaled = Annihilator::new(&r, f.scale(&7)).unwrap();
        for t in 0..=5 {
            assert_eq!(*scaled.piece(t), *ann.piece(t));
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let field = PrimeField::default();
        let (a, _) = PerazzoSpec::sample_full(&field, 3, 3, 11, 32002).unwrap();
        let (b, _) = PerazzoSpec::sample_full(&field, 3, 3, 11, 32002).unwrap();
        let (c, _) = PerazzoSpec::sample_full(&field, 3, 3, 12, 32002).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.n, 5);
        assert!(a.linear_forms.iter().all(|l| l[0] == 1));
    }
}
