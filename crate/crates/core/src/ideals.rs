//! Homogeneous ideals handled degree by degree.
//!
//! An ideal is anything that can produce its graded pieces `I_t` as reduced
//! row echelon bases over the monomial basis of `R_t` ([`GradedIdeal`]).
//! Pieces of generator-defined ideals grow by `I_t = R_1 I_{t-1} + (gens)_t`;
//! intersections are computed piecewise. No Gröbner machinery is involved, so
//! every consumer bounds the degrees it asks for.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::field::Field;
use crate::form::Form;
use crate::inverse_system::PerazzoSpec;
use crate::matrix::{intersect_rrefs, rank_of_rows, RowEchelon, Rref, SparseRow};
use crate::ring::{same_ring, Monomial, PolyRing};

/// Graded h-vector. Trailing zeros are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    entries: Vec<u64>,
    /// False when the defining difference had not vanished inside the window.
    pub stabilized: bool,
}

impl HVector {
    pub fn new(mut entries: Vec<u64>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        HVector {
            entries,
            stabilized: true,
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().eq(self.entries.iter().rev())
    }
}

/// Hilbert function on a window `0..=T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertFunction {
    pub values: Vec<u64>,
    /// `Some(0)` for artinian quotients, `Some(v)` once the first difference
    /// vanished at the top of the window.
    pub stable_value: Option<u64>,
}

/// A degree-`t` subspace of `R_t`.
#[derive(Clone, Debug)]
pub struct GradedSubspace<F: Field> {
    pub degree: u32,
    pub basis: Arc<Rref<F>>,
}

impl<F: Field> GradedSubspace<F> {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }
}

pub trait GradedIdeal<F: Field>: Send + Sync {
    fn ring(&self) -> &Arc<PolyRing<F>>;

    /// `I_t` in reduced row echelon form over the monomial basis of `R_t`.
    fn piece(&self, t: u32) -> Arc<Rref<F>>;

    fn contains(&self, f: &Form<F>) -> bool {
        f.is_zero() || self.piece(f.degree()).contains(&f.to_row())
    }

    fn dim(&self, t: u32) -> usize {
        self.piece(t).rank()
    }
}

/// Rows of `x_k * v` for all variables `x_k` and rows `v` of degree `t`.
pub(crate) fn multiply_up<'a, F: Field>(
    ring: &PolyRing<F>,
    t: u32,
    rows: &'a [SparseRow<F::Elem>],
) -> impl Iterator<Item = SparseRow<F::Elem>> + 'a {
    let tab = ring.mul_table(t);
    let nv = ring.nvars();
    (0..nv).flat_map(move |k| {
        let tab = tab.clone();
        rows.iter().map(move |r| {
            r.iter()
                .map(|(c, v)| (tab[*c as usize * nv + k], v.clone()))
                .collect::<SparseRow<F::Elem>>()
        })
    })
}

/// Echelon form of `R_1 * lower` inside `R_t`, where `lower` is a
/// degree-`t-1` piece.
pub(crate) fn span_of_products<F: Field>(
    ring: &PolyRing<F>,
    t: u32,
    lower: &Rref<F>,
) -> RowEchelon<F> {
    let ncols = ring.basis(t).len();
    let mut ech = RowEchelon::new(ring.field().clone(), ncols);
    if t == 0 || lower.rank() == 0 {
        return ech;
    }
    if lower.rank() == ring.basis(t - 1).len() {
        // R_1 R_{t-1} = R_t
        for c in 0..ncols as u32 {
            ech.insert(&[(c, ring.field().one())]);
        }
        return ech;
    }
    for row in multiply_up(ring, t - 1, lower.rows()) {
        ech.insert(&row);
        if ech.is_full() {
            break;
        }
    }
    ech
}

/// Ideal given by homogeneous generators; pieces are built on demand and
/// cached.
pub struct HomogeneousIdeal<F: Field> {
    ring: Arc<PolyRing<F>>,
    gens: Vec<Form<F>>,
    cache: Mutex<BTreeMap<u32, Arc<Rref<F>>>>,
}

impl<F: Field> HomogeneousIdeal<F> {
    pub fn new(ring: &Arc<PolyRing<F>>, gens: Vec<Form<F>>) -> Result<Self, AlgebraError> {
        for g in &gens {
            if !same_ring(ring, g.ring()) {
                return Err(AlgebraError::RingMismatch);
            }
            if g.is_zero() {
                return Err(AlgebraError::ZeroForm);
            }
        }
        Ok(HomogeneousIdeal {
            ring: ring.clone(),
            gens,
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn generators(&self) -> &[Form<F>] {
        &self.gens
    }

    pub fn generators_of_degree(&self, t: u32) -> impl Iterator<Item = &Form<F>> {
        self.gens.iter().filter(move |g| g.degree() == t)
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.gens.iter().map(Form::degree).max().unwrap_or(0)
    }

    fn compute_piece(&self, t: u32, lower: Option<&Rref<F>>) -> Rref<F> {
        let ring = &self.ring;
        let mut ech = match lower {
            Some(l) => span_of_products(ring, t, l),
            None => RowEchelon::new(ring.field().clone(), ring.basis(t).len()),
        };
        for g in self.generators_of_degree(t) {
            ech.insert(&g.to_row());
        }
        ech.into_rref()
    }
}

impl<F: Field> GradedIdeal<F> for HomogeneousIdeal<F> {
    fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    fn piece(&self, t: u32) -> Arc<Rref<F>> {
        let start = {
            let cache = self.cache.lock().expect("piece cache poisoned");
            if let Some(p) = cache.get(&t) {
                return p.clone();
            }
            cache.range(..t).next_back().map(|(k, v)| (*k, v.clone()))
        };
        let (mut s, mut lower) = match start {
            Some((k, v)) => (k + 1, Some(v)),
            None => (0, None),
        };
        let mut fresh = Vec::new();
        while s <= t {
            let p = Arc::new(self.compute_piece(s, lower.as_deref()));
            fresh.push((s, p.clone()));
            lower = Some(p);
            s += 1;
        }
        let mut cache = self.cache.lock().expect("piece cache poisoned");
        for (k, v) in fresh {
            cache.entry(k).or_insert(v);
        }
        cache[&t].clone()
    }
}

impl<F: Field> std::fmt::Debug for HomogeneousIdeal<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

/// Degreewise intersection of several ideals.
pub struct IntersectionIdeal<F: Field> {
    ring: Arc<PolyRing<F>>,
    members: Vec<Arc<dyn GradedIdeal<F>>>,
    cache: Mutex<BTreeMap<u32, Arc<Rref<F>>>>,
}

impl<F: Field> IntersectionIdeal<F> {
    pub fn new(members: Vec<Arc<dyn GradedIdeal<F>>>) -> Result<Self, AlgebraError> {
        let Some(first) = members.first() else {
            return Err(AlgebraError::InvalidParameters("empty intersection".into()));
        };
        let ring = first.ring().clone();
        if members.iter().any(|m| !same_ring(&ring, m.ring())) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(IntersectionIdeal {
            ring,
            members,
            cache: Mutex::new(BTreeMap::new()),
        })
    }
}

impl<F: Field> GradedIdeal<F> for IntersectionIdeal<F> {
    fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    fn piece(&self, t: u32) -> Arc<Rref<F>> {
        if let Some(p) = self.cache.lock().expect("piece cache poisoned").get(&t) {
            return p.clone();
        }
        let pieces: Vec<Arc<Rref<F>>> = self.members.iter().map(|m| m.piece(t)).collect();
        let refs: Vec<&Rref<F>> = pieces.iter().map(|p| p.as_ref()).collect();
        let p = Arc::new(intersect_rrefs(&refs));
        self.cache
            .lock()
            .expect("piece cache poisoned")
            .entry(t)
            .or_insert(p)
            .clone()
    }

    fn contains(&self, f: &Form<F>) -> bool {
        self.members.iter().all(|m| m.contains(f))
    }
}

pub fn ideal_graded_piece<F: Field>(ideal: &dyn GradedIdeal<F>, t: u32) -> GradedSubspace<F> {
    GradedSubspace {
        degree: t,
        basis: ideal.piece(t),
    }
}

/// Minimal generators of degree `t`: a greedy complement of `R_1 I_{t-1}`
/// inside `I_t`, scanning the reduced basis of `I_t` in order.
pub fn generators_in_degree<F: Field>(ideal: &dyn GradedIdeal<F>, t: u32) -> Vec<Form<F>> {
    let ring = ideal.ring();
    let piece = ideal.piece(t);
    if piece.rank() == 0 {
        return Vec::new();
    }
    let mut ech = if t == 0 {
        RowEchelon::new(ring.field().clone(), 1)
    } else {
        span_of_products(ring, t, &ideal.piece(t - 1))
    };
    if ech.rank() == piece.rank() {
        return Vec::new();
    }
    piece
        .rows()
        .iter()
        .filter(|r| ech.insert(r))
        .map(|r| Form::from_row(ring, t, r))
        .collect()
}

/// Number of minimal generators in degree `t`.
pub fn generator_count_in_degree<F: Field>(ideal: &dyn GradedIdeal<F>, t: u32) -> usize {
    let piece = ideal.piece(t);
    if t == 0 {
        return piece.rank();
    }
    let ech = span_of_products(ideal.ring(), t, &ideal.piece(t - 1));
    piece.rank() - ech.rank()
}

/// Result of [`intersect_ideals_up_to`].
pub struct IntersectionResult<F: Field> {
    pub pieces: Vec<GradedSubspace<F>>,
    pub generators: BTreeMap<u32, Vec<Form<F>>>,
    /// True when new generators appeared in the top degree, so the window
    /// may be too small to see all of them.
    pub top_degree_has_generators: bool,
}

pub fn intersect_ideals_up_to<F: Field>(
    ideals: Vec<Arc<dyn GradedIdeal<F>>>,
    top: u32,
) -> Result<IntersectionResult<F>, AlgebraError> {
    let inter = IntersectionIdeal::new(ideals)?;
    let pieces = (0..=top).map(|t| ideal_graded_piece(&inter, t)).collect();
    let mut generators = BTreeMap::new();
    for t in 0..=top {
        let g = generators_in_degree(&inter, t);
        if !g.is_empty() {
            generators.insert(t, g);
        }
    }
    let top_degree_has_generators = generators.contains_key(&top);
    Ok(IntersectionResult {
        pieces,
        generators,
        top_degree_has_generators,
    })
}

/// Linear forms in the u-block vanishing at the point `c` of `P^{m-1}`:
/// `c_b u_a - c_a u_b` for `b != a`, where `a` is the first nonzero
/// coordinate of `c`.
pub fn vanishing_linear_forms<F: Field>(
    ring: &Arc<PolyRing<F>>,
    u_offset: usize,
    c: &[F::Elem],
) -> Result<Vec<Form<F>>, AlgebraError> {
    let field = ring.field();
    let Some(a) = c.iter().position(|v| !field.is_zero(v)) else {
        return Err(AlgebraError::InvalidParameters("zero linear form".into()));
    };
    let mut out = Vec::new();
    for b in 0..c.len() {
        if b == a {
            continue;
        }
        let mut coeffs = vec![field.zero(); c.len()];
        coeffs[a] = c[b].clone();
        coeffs[b] = field.neg(&c[a]);
        out.push(Form::linear(ring, u_offset, &coeffs));
    }
    Ok(out)
}

/// `(x_j for j != i, x_i^2, l_{i,2}, ..., l_{i,m})`: the double point at the
/// point of the u-space dual to `L_i`, pointing in the `x_i` direction.
pub fn double_point_ideal<F: Field>(
    ring: &Arc<PolyRing<F>>,
    spec: &PerazzoSpec,
    i: usize,
) -> Result<HomogeneousIdeal<F>, AlgebraError> {
    if i > spec.n {
        return Err(AlgebraError::InvalidParameters(format!(
            "double point index {i} out of range 0..={}",
            spec.n
        )));
    }
    check_perazzo_ring(ring, spec)?;
    let nx = spec.n + 1;
    let c = spec.linear_form(ring.field(), i);
    let mut gens = Vec::new();
    for j in 0..nx {
        if j == i {
            gens.push(Form::var(ring, j).pow(2));
        } else {
            gens.push(Form::var(ring, j));
        }
    }
    gens.extend(vanishing_linear_forms(ring, nx, &c)?);
    HomogeneousIdeal::new(ring, gens)
}

fn check_perazzo_ring<F: Field>(
    ring: &PolyRing<F>,
    spec: &PerazzoSpec,
) -> Result<(), AlgebraError> {
    if ring.nvars() != spec.n + spec.m + 1 {
        return Err(AlgebraError::DimensionMismatch(format!(
            "ring has {} variables, spec needs {}",
            ring.nvars(),
            spec.n + spec.m + 1
        )));
    }
    Ok(())
}

/// Rows: the points `L_i`; columns: monomials of `K[u]_t`; entries `c^a`.
pub fn point_evaluation_rows<F: Field>(
    field: &F,
    points: &[Vec<F::Elem>],
    t: u32,
) -> (usize, Vec<SparseRow<F::Elem>>) {
    let m = points.first().map_or(0, Vec::len);
    let basis = crate::ring::MonomialBasis::new(m, t);
    let rows = points
        .iter()
        .map(|c| {
            basis
                .monomials()
                .iter()
                .enumerate()
                .filter_map(|(k, a)| {
                    let mut v = field.one();
                    for (j, &e) in a.exps().iter().enumerate() {
                        v = field.mul(&v, &field.pow(&c[j], e as u32));
                    }
                    (!field.is_zero(&v)).then_some((k as u32, v))
                })
                .collect()
        })
        .collect();
    (basis.len(), rows)
}

/// Whether the `n+1` points impose independent conditions on `K[u]_{d-1}`.
pub fn general_position_check<F: Field>(field: &F, spec: &PerazzoSpec) -> bool {
    let points = spec.linear_forms_in(field);
    let (ncols, rows) = point_evaluation_rows(field, &points, spec.d - 1);
    rank_of_rows(field, ncols, &rows) == points.len()
}

/// The generators of `I(Z_F)`: all `x_i x_j`, the `x_i l_{i,k}`, and a basis
/// of the degree-`d` forms in `u` vanishing at the points.
pub fn zf_ideal<F: Field>(
    ring: &Arc<PolyRing<F>>,
    spec: &PerazzoSpec,
) -> Result<HomogeneousIdeal<F>, AlgebraError> {
    check_perazzo_ring(ring, spec)?;
    let field = ring.field();
    if !general_position_check(field, spec) {
        return Err(AlgebraError::NotGeneralPosition);
    }
    let nx = spec.n + 1;
    let mut gens = Vec::new();
    for i in 0..nx {
        for j in i..nx {
            gens.push(Form::var(ring, i).multiply(&Form::var(ring, j))?);
        }
    }
    for i in 0..nx {
        let c = spec.linear_form(field, i);
        for l in vanishing_linear_forms(ring, nx, &c)? {
            gens.push(Form::var(ring, i).multiply(&l)?);
        }
    }
    gens.extend(point_ideal_forms(ring, spec, spec.d)?);
    HomogeneousIdeal::new(ring, gens)
}

/// Basis of the degree-`t` forms in the u-variables vanishing at the points.
pub fn point_ideal_forms<F: Field>(
    ring: &Arc<PolyRing<F>>,
    spec: &PerazzoSpec,
    t: u32,
) -> Result<Vec<Form<F>>, AlgebraError> {
    let field = ring.field();
    let points = spec.linear_forms_in(field);
    let (ncols, rows) = point_evaluation_rows(field, &points, t);
    let kernel = Rref::from_rows(field.clone(), ncols, rows.iter()).kernel();
    let ubasis = crate::ring::MonomialBasis::new(spec.m, t);
    let nx = spec.n + 1;
    kernel
        .iter()
        .map(|v| {
            Form::from_terms(
                ring,
                t,
                v.iter().map(|(k, c)| {
                    let mut e = vec![0u16; ring.nvars()];
                    e[nx..].copy_from_slice(ubasis.get(*k as usize).exps());
                    (Monomial::new(e), c.clone())
                }),
            )
        })
        .collect()
}

/// Hilbert function of `R/I` on `0..=top` and the derived h-vector: the
/// function itself when the quotient is artinian inside the window, its first
/// difference otherwise.
pub fn quotient_hf_and_hvector<F: Field>(
    ideal: &dyn GradedIdeal<F>,
    top: u32,
) -> (HilbertFunction, HVector) {
    let ring = ideal.ring();
    let values: Vec<u64> = (0..=top)
        .map(|t| (ring.basis(t).len() - ideal.dim(t)) as u64)
        .collect();
    hf_to_hvector(values)
}

pub fn hf_to_hvector(values: Vec<u64>) -> (HilbertFunction, HVector) {
    if values.contains(&0) {
        let h = HVector::new(values.clone());
        return (
            HilbertFunction {
                values,
                stable_value: Some(0),
            },
            h,
        );
    }
    let diff: Vec<i64> = values
        .iter()
        .enumerate()
        .map(|(t, &v)| v as i64 - if t == 0 { 0 } else { values[t - 1] as i64 })
        .collect();
    let stabilized = diff.len() >= 2 && *diff.last().unwrap() == 0;
    let mut h = HVector::new(diff.iter().map(|&v| v.max(0) as u64).collect());
    h.stabilized = stabilized && diff.iter().all(|&v| v >= 0);
    let stable_value = h.stabilized.then(|| *values.last().unwrap());
    (
        HilbertFunction {
            values,
            stable_value,
        },
        h,
    )
}

/// Whether every generator of `small` of degree at most `top` lies in `big`,
/// which is the same as containment of all graded pieces up to `top`.
pub fn is_contained<F: Field>(
    small: &HomogeneousIdeal<F>,
    big: &dyn GradedIdeal<F>,
    top: u32,
) -> bool {
    small
        .generators()
        .iter()
        .filter(|g| g.degree() <= top)
        .all(|g| big.contains(g))
}

/// Whether `I_t` and `J_t` coincide for all `t <= top`.
pub fn pieces_equal<F: Field>(a: &dyn GradedIdeal<F>, b: &dyn GradedIdeal<F>, top: u32) -> bool {
    (0..=top).all(|t| *a.piece(t) == *b.piece(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn ring3() -> Arc<PolyRing<PrimeField>> {
        PolyRing::new(
            PrimeField::default(),
            vec!["x".into(), "y".into(), "z".into()],
        )
    }

    fn ci(ring: &Arc<PolyRing<PrimeField>>) -> HomogeneousIdeal<PrimeField> {
        let x = Form::var(ring, 0);
        let y = Form::var(ring, 1);
        let z = Form::var(ring, 2);
        let xy = x.sub(&y).unwrap();
        HomogeneousIdeal::new(ring, vec![xy, y.pow(2), z.pow(3)]).unwrap()
    }

    #[test]
    fn principal_piece() {
        let r = PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]);
        let i = HomogeneousIdeal::new(&r, vec![Form::var(&r, 0)]).unwrap();
        let p = ideal_graded_piece(&i, 2);
        assert_eq!(p.dim(), 2);
        let j = HomogeneousIdeal::new(&r, vec![Form::var(&r, 0).pow(2)]).unwrap();
        assert_eq!(j.dim(1), 0);
    }

    #[test]
    fn complete_intersection_hvector() {
        let r = ring3();
        let i = ci(&r);
        assert_eq!(i.dim(2), 4);
        let (hf, h) = quotient_hf_and_hvector(&i, 6);
        assert_eq!(hf.values, [1, 2, 2, 1, 0, 0, 0]);
        assert_eq!(h.entries(), [1, 2, 2, 1]);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]);
        let a: Arc<dyn GradedIdeal<_>> =
            Arc::new(HomogeneousIdeal::new(&r, vec![Form::var(&r, 0)]).unwrap());
        let b: Arc<dyn GradedIdeal<_>> =
            Arc::new(HomogeneousIdeal::new(&r, vec![Form::var(&r, 1)]).unwrap());
        let res = intersect_ideals_up_to(vec![a, b], 3).unwrap();
        let gens: Vec<String> = res
            .generators
            .values()
            .flatten()
            .map(|g| g.to_string())
            .collect();
        assert_eq!(gens, ["x*y"]);
        assert!(!res.top_degree_has_generators);
    }

    #[test]
    fn containment() {
        let r = PolyRing::new(PrimeField::default(), vec!["x".into(), "y".into()]);
        let x = HomogeneousIdeal::new(&r, vec![Form::var(&r, 0)]).unwrap();
        let x2 = HomogeneousIdeal::new(&r, vec![Form::var(&r, 0).pow(2)]).unwrap();
        assert!(is_contained(&x, &x, 3));
        assert!(is_contained(&x2, &x, 3));
        assert!(!is_contained(&x, &x2, 3));
    }

    #[test]
    fn vanishing_forms() {
        let r = PolyRing::new(PrimeField::default(), vec!["u".into(), "v".into()]);
        let f = *r.field();
        let ls = vanishing_linear_forms(&r, 0, &[f.one(), f.from_i64(3)]).unwrap();
        assert_eq!(ls[0].to_string(), "3*u + 32002*v");
        let ls = vanishing_linear_forms(&r, 0, &[f.one(), f.zero()]).unwrap();
        assert_eq!(ls[0].to_string(), "32002*v");
        assert!(vanishing_linear_forms(&r, 0, &[f.zero(), f.zero()]).is_err());
    }

    #[test]
    fn hvector_of_points_like_function() {
        let (hf, h) = hf_to_hvector(vec![1, 13, 16, 20, 20, 20]);
        assert_eq!(h.entries(), [1, 12, 3, 4]);
        assert_eq!(hf.stable_value, Some(20));
        let (_, h) = hf_to_hvector(vec![1, 3, 6, 10]);
        assert!(!h.stabilized);
    }
}
