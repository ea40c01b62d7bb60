//! Graded Betti numbers from Koszul homology, and table arithmetic.
//!
//! For a graded quotient `M = R/I` the Betti number `beta_{i,j}` is the
//! dimension of the homology of
//!
//! ```text
//! L^{i+1} V (x) M_{t-1}  ->  L^i V (x) M_t  ->  L^{i-1} V (x) M_{t+1}
//! ```
//!
//! at the middle, `t = j - i`, where `V` is spanned by the variables and the
//! maps are `e_S (x) m -> sum_p (-1)^p e_{S - s_p} (x) x_{s_p} m`. Only the
//! pieces `M_{t-1}, M_t, M_{t+1}` enter, so finitely many graded pieces give
//! exact answers on a window.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::closed_forms::binomial;
use crate::error::AlgebraError;
use crate::field::Field;
use crate::ideals::GradedIdeal;
use crate::matrix::{rank_of_rows, Rref, SparseRow};
use crate::ring::Monomial;

/// Sparse graded Betti table: `(i, j) -> beta_{i,j}`, zero entries absent.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable {
    nvars: usize,
    entries: BTreeMap<(usize, i64), u64>,
}

impl BettiTable {
    pub fn new(nvars: usize) -> Self {
        BettiTable {
            nvars,
            entries: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: i64, v: u64) {
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add(&mut self, i: usize, j: i64, v: u64) {
        if v != 0 {
            *self.entries.entry((i, j)).or_insert(0) += v;
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i64), u64> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest homological index with a nonzero entry.
    pub fn projective_dimension(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.0).max()
    }

    /// `(min, max)` of `j - i` over the entries.
    pub fn row_range(&self) -> Option<(i64, i64)> {
        let rows = self.entries.keys().map(|&(i, j)| j - i as i64);
        let lo = rows.clone().min()?;
        Some((lo, rows.max()?))
    }

    /// Entries `beta_{i, i+r}` for `i = 0..=max_i`.
    pub fn row(&self, r: i64, max_i: usize) -> Vec<u64> {
        (0..=max_i).map(|i| self.get(i, i as i64 + r)).collect()
    }

    /// Nonzero entries of row `r` in increasing `i`.
    pub fn row_nonzero(&self, r: i64) -> Vec<u64> {
        self.iter()
            .filter(|&(i, j, _)| j - i as i64 == r)
            .map(|(_, _, v)| v)
            .collect()
    }

    pub fn total(&self, i: usize) -> u64 {
        self.iter().filter(|e| e.0 == i).map(|e| e.2).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct BettiRepr {
    nvars: usize,
    entries: Vec<(usize, i64, u64)>,
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BettiRepr {
            nvars: self.nvars,
            entries: self.iter().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BettiRepr::deserialize(d)?;
        let mut t = BettiTable::new(r.nvars);
        for (i, j, v) in r.entries {
            t.add(i, j, v);
        }
        Ok(t)
    }
}

/// `max (j - i)` over the nonzero entries.
pub fn regularity(b: &BettiTable) -> Result<i64, AlgebraError> {
    b.row_range().map(|r| r.1).ok_or(AlgebraError::EmptyTable)
}

/// Table of `omega(-t)` for a Cohen-Macaulay quotient of codimension `c`:
/// `out(k, j) = B(c - k, nvars + t - j)`. Entries with `i > c` are outside
/// the hypothesis and dropped.
pub fn dual_betti_table(b: &BettiTable, c: usize, t: i64) -> BettiTable {
    let nv = b.nvars as i64;
    let mut out = BettiTable::new(b.nvars);
    for (i, j, v) in b.iter() {
        if i <= c {
            out.add(c - i, nv + t - j, v);
        }
    }
    out
}

/// Betti table of the mapping cone of `omega_{R/J}(-d) -> R/J`:
/// `cone(i, j) = B(i, j) + B(c + 1 - i, nvars + d - j)`.
pub fn mapping_cone_betti(b: &BettiTable, c: usize, d: i64) -> BettiTable {
    let mut out = b.clone();
    for (k, j, v) in dual_betti_table(b, c, d).iter() {
        out.add(k + 1, j, v);
    }
    out
}

/// Coefficients `0..=top` of `(sum (-1)^i beta_{i,j} t^j) / (1 - t)^nvars`.
pub fn hilbert_series_from_betti(b: &BettiTable, top: u32) -> Vec<i64> {
    let nv = b.nvars as i64;
    (0..=top as i64)
        .map(|k| {
            let mut acc: i128 = 0;
            for (i, j, v) in b.iter() {
                if j > k {
                    continue;
                }
                let c = binomial(k - j + nv - 1, nv - 1);
                let c: i128 = c.try_into().expect("series coefficient fits in i128");
                let term = c * v as i128;
                acc += if i % 2 == 0 { term } else { -term };
            }
            i64::try_from(acc).expect("series coefficient fits in i64")
        })
        .collect()
}

/// Degreewise presentation of `R/I` on the window `0..=top`: complement
/// bases and the action of every variable `M_t -> M_{t+1}` for `t < top`.
/// When a piece vanishes the window ends below it and every higher piece is
/// known to be zero.
#[derive(Clone, Debug)]
pub struct GradedModulePieces<F: Field> {
    field: F,
    nvars: usize,
    dims: Vec<usize>,
    zero_above: bool,
    tags: Vec<Vec<Monomial>>,
    /// `action[t][k][b]`: image of basis element `b` of `M_t` under `x_k`.
    action: Vec<Vec<Vec<SparseRow<F::Elem>>>>,
}

impl<F: Field> GradedModulePieces<F> {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// Highest degree with known data.
    pub fn top(&self) -> u32 {
        self.dims.len().saturating_sub(1) as u32
    }

    /// Whether all pieces above `top` are known to vanish.
    pub fn is_zero_above(&self) -> bool {
        self.zero_above
    }

    /// `dim M_t`, `None` if outside the window.
    pub fn dim(&self, t: i64) -> Option<usize> {
        if t < 0 {
            Some(0)
        } else if (t as usize) < self.dims.len() {
            Some(self.dims[t as usize])
        } else if self.zero_above {
            Some(0)
        } else {
            None
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Monomials whose classes form the chosen basis of `M_t`.
    pub fn basis_tags(&self, t: u32) -> &[Monomial] {
        &self.tags[t as usize]
    }

    /// Image of basis element `b` of `M_t` under `x_k`, if available.
    pub fn act(&self, t: i64, k: usize, b: usize) -> Option<&SparseRow<F::Elem>> {
        if t < 0 {
            return None;
        }
        self.action.get(t as usize).map(|a| &a[k][b])
    }

    fn action_available(&self, t: i64) -> bool {
        t < 0
            || (t as usize) < self.action.len()
            || self.dim(t) == Some(0)
            || self.dim(t + 1) == Some(0)
    }

    /// Checks `x_a x_b = x_b x_a` on each `M_t`, `t + 2 <= top`.
    pub fn actions_commute(&self) -> bool {
        let f = &self.field;
        for t in 0..self.action.len().saturating_sub(1) {
            for a in 0..self.nvars {
                for b in a + 1..self.nvars {
                    for e in 0..self.dims[t] {
                        let ab = apply(f, &self.action[t + 1][b], &self.action[t][a][e]);
                        let ba = apply(f, &self.action[t + 1][a], &self.action[t][b][e]);
                        if ab != ba {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `v * A` for a sparse vector over the rows of `A`.
fn apply<F: Field>(
    field: &F,
    a: &[SparseRow<F::Elem>],
    v: &SparseRow<F::Elem>,
) -> SparseRow<F::Elem> {
    let mut acc: BTreeMap<u32, F::Elem> = BTreeMap::new();
    for (r, c) in v {
        for (col, x) in &a[*r as usize] {
            let e = acc.entry(*col).or_insert_with(|| field.zero());
            *e = field.add(e, &field.mul(c, x));
        }
    }
    acc.into_iter().filter(|(_, v)| !field.is_zero(v)).collect()
}

/// Pieces of `R/I` for `t = 0..=top`.
///
/// With a seed, the monomial coordinates of every degree are shuffled before
/// reduction, which changes the complement bases but not the module.
pub fn quotient_module_pieces<F: Field>(
    ideal: &dyn GradedIdeal<F>,
    top: u32,
    seed: Option<u64>,
) -> GradedModulePieces<F> {
    let ring = ideal.ring();
    let field = ring.field().clone();
    let nv = ring.nvars();

    struct Level<E> {
        perm: Vec<u32>,
        inv: Vec<u32>,
        rref_rows: Vec<SparseRow<E>>,
        pivot_row: HashMap<u32, usize>,
        free: Vec<u32>,
        free_pos: HashMap<u32, u32>,
    }

    let mut levels: Vec<Level<F::Elem>> = Vec::new();
    let mut zero_above = false;
    for t in 0..=top {
        let n = ring.basis(t).len();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(s ^ ((t as u64 + 1) << 32));
            perm.shuffle(&mut rng);
        }
        let mut inv = vec![0u32; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        let piece = ideal.piece(t);
        let rref = if seed.is_some() {
            let rows: Vec<SparseRow<F::Elem>> = piece
                .rows()
                .iter()
                .map(|r| {
                    let mut r: SparseRow<F::Elem> = r
                        .iter()
                        .map(|(c, v)| (perm[*c as usize], v.clone()))
                        .collect();
                    r.sort_by_key(|e| e.0);
                    r
                })
                .collect();
            Rref::from_rows(field.clone(), n, rows.iter())
        } else {
            (*piece).clone()
        };
        let free: Vec<u32> = rref.free_columns().into_iter().map(|c| c as u32).collect();
        let free_pos = free
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k as u32))
            .collect();
        let pivot_row = rref
            .pivots()
            .iter()
            .enumerate()
            .map(|(r, &c)| (c, r))
            .collect();
        let empty = free.is_empty();
        levels.push(Level {
            perm,
            inv,
            rref_rows: rref.rows().to_vec(),
            pivot_row,
            free,
            free_pos,
        });
        if empty {
            zero_above = true;
            break;
        }
    }
    if zero_above {
        levels.pop();
    }

    let mut tags = Vec::new();
    let mut dims = Vec::new();
    for (t, lv) in levels.iter().enumerate() {
        let basis = ring.basis(t as u32);
        dims.push(lv.free.len());
        tags.push(
            lv.free
                .iter()
                .map(|&c| basis.get(lv.inv[c as usize] as usize).clone())
                .collect(),
        );
    }

    let mut action = Vec::new();
    for t in 0..dims.len() {
        if t + 1 >= levels.len() {
            break;
        }
        let tab = ring.mul_table(t as u32);
        let (lo, hi) = (&levels[t], &levels[t + 1]);
        let mut per_var = Vec::with_capacity(nv);
        for k in 0..nv {
            let mut imgs = Vec::with_capacity(lo.free.len());
            for &c in &lo.free {
                let mono = lo.inv[c as usize] as usize;
                let target = hi.perm[tab[mono * nv + k] as usize];
                let img: SparseRow<F::Elem> = if let Some(&p) = hi.free_pos.get(&target) {
                    vec![(p, field.one())]
                } else {
                    let row = &hi.rref_rows[hi.pivot_row[&target]];
                    row.iter()
                        .skip(1)
                        .map(|(col, v)| (hi.free_pos[col], field.neg(v)))
                        .collect()
                };
                imgs.push(img);
            }
            per_var.push(imgs);
        }
        action.push(per_var);
    }

    GradedModulePieces {
        field,
        nvars: nv,
        dims,
        zero_above,
        tags,
        action,
    }
}

/// Subsets of `0..n` of size `k` as bitmasks, in lexicographic order of their
/// sorted elements, with a reverse index.
struct Subsets {
    masks: Vec<u32>,
    index: HashMap<u32, u32>,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        let mut masks = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u32>) {
            if cur.len() == k {
                out.push(cur.iter().fold(0u32, |m, &i| m | (1 << i)));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, k, 0, &mut cur, &mut masks);
        let index = masks
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u32))
            .collect();
        Subsets { masks, index }
    }
}

/// Rows of the Koszul differential `L^i V (x) M_t -> L^{i-1} V (x) M_{t+1}`
/// and its column count.
pub fn koszul_differential<F: Field>(
    m: &GradedModulePieces<F>,
    i: usize,
    t: i64,
) -> Option<(usize, Vec<SparseRow<F::Elem>>)> {
    let nv = m.nvars;
    let dt = m.dim(t)?;
    let dn = m.dim(t + 1)?;
    if i == 0 || i > nv || dt == 0 || dn == 0 {
        return Some((0, Vec::new()));
    }
    if !m.action_available(t) {
        return None;
    }
    let field = &m.field;
    let src = Subsets::new(nv, i);
    let dst = Subsets::new(nv, i - 1);
    let ncols = dst.masks.len() * dn;
    let mut rows = Vec::with_capacity(src.masks.len() * dt);
    for &mask in &src.masks {
        for b in 0..dt {
            let mut row: SparseRow<F::Elem> = Vec::new();
            let mut p = 0;
            for var in 0..nv {
                if mask & (1 << var) == 0 {
                    continue;
                }
                let block = dst.index[&(mask & !(1 << var))] as usize * dn;
                let img = m.act(t, var, b).expect("action available");
                for (col, v) in img {
                    let v = if p % 2 == 0 { v.clone() } else { field.neg(v) };
                    row.push(((block + *col as usize) as u32, v));
                }
                p += 1;
            }
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
    }
    Some((ncols, rows))
}

fn cell_rank<F: Field>(m: &GradedModulePieces<F>, i: usize, t: i64) -> Option<usize> {
    let (ncols, rows) = koszul_differential(m, i, t)?;
    Some(rank_of_rows(&m.field, ncols, &rows))
}

/// Betti numbers of `M` in rows `0..=max_row`. Every required cell must be
/// inside the window; otherwise the missing `(i, j)` cells are reported.
pub fn betti_table_oracle<F: Field>(
    m: &GradedModulePieces<F>,
    max_row: u32,
) -> Result<BettiTable, AlgebraError> {
    let nv = m.nvars;
    let mut needed = Vec::new();
    for t in 0..=max_row as i64 {
        for i in 0..=nv {
            needed.push((i, t));
            needed.push((i + 1, t - 1));
        }
    }
    needed.sort();
    needed.dedup();
    let ranks: HashMap<(usize, i64), Option<usize>> = needed
        .par_iter()
        .map(|&(i, t)| ((i, t), cell_rank(m, i, t)))
        .collect();
    let mut table = BettiTable::new(nv);
    let mut missing = Vec::new();
    for t in 0..=max_row as i64 {
        for i in 0..=nv {
            let Some(dt) = m.dim(t) else {
                missing.push((i, i as i64 + t));
                continue;
            };
            match (ranks[&(i, t)], ranks[&(i + 1, t - 1)]) {
                (Some(out), Some(inc)) => {
                    let lam = binomial(nv as i64, i as i64);
                    let lam: usize = lam.try_into().expect("small binomial");
                    let v = lam * dt - out - inc;
                    table.add(i, i as i64 + t, v as u64);
                }
                _ => missing.push((i, i as i64 + t)),
            }
        }
    }
    if missing.is_empty() {
        Ok(table)
    } else {
        Err(AlgebraError::WindowTooSmall(missing))
    }
}

/// Oracle Betti table of `R/I` through row `max_row`, building the pieces it
/// needs.
pub fn oracle_betti_of_ideal<F: Field>(
    ideal: &dyn GradedIdeal<F>,
    max_row: u32,
    seed: Option<u64>,
) -> Result<BettiTable, AlgebraError> {
    let m = quotient_module_pieces(ideal, max_row + 1, seed);
    let max_row = if m.is_zero_above() {
        max_row.min(m.top())
    } else {
        max_row
    };
    betti_table_oracle(&m, max_row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::form::Form;
    use crate::ideals::HomogeneousIdeal;
    use crate::ring::PolyRing;
    use std::sync::Arc;

    fn ring(names: &[&str]) -> Arc<PolyRing<PrimeField>> {
        PolyRing::new(
            PrimeField::default(),
            names.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn table(nv: usize, e: &[(usize, i64, u64)]) -> BettiTable {
        let mut t = BettiTable::new(nv);
        for &(i, j, v) in e {
            t.add(i, j, v);
        }
        t
    }

    fn ci_table() -> BettiTable {
        table(
            3,
            &[
                (0, 0, 1),
                (1, 1, 1),
                (1, 2, 1),
                (1, 3, 1),
                (2, 3, 1),
                (2, 4, 1),
                (2, 5, 1),
                (3, 6, 1),
            ],
        )
    }

    #[test]
    fn free_module_one_variable() {
        let r = ring(&["x"]);
        let zero = HomogeneousIdeal::new(&r, vec![]).unwrap();
        let m = quotient_module_pieces(&zero, 3, None);
        assert_eq!(m.dims(), [1, 1, 1, 1]);
        assert_eq!(m.act(0, 0, 0).unwrap(), &vec![(0, 1)]);
        assert!(!m.is_zero_above());
    }

    #[test]
    fn maximal_ideal_is_koszul() {
        for nv in 1..=5usize {
            let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let r = PolyRing::new(PrimeField::default(), names);
            let gens = (0..nv).map(|i| Form::var(&r, i)).collect();
            let i = HomogeneousIdeal::new(&r, gens).unwrap();
            let b = oracle_betti_of_ideal(&i, 3, None).unwrap();
            for k in 0..=nv {
                assert_eq!(
                    b.get(k, k as i64),
                    crate::closed_forms::binomial_u64(nv as u64, k as u64)
                );
            }
            assert_eq!(b.iter().count(), nv + 1);
        }
    }

    #[test]
    fn complete_intersection_table() {
        let r = ring(&["x", "y", "z"]);
        let x = Form::var(&r, 0);
        let y = Form::var(&r, 1);
        let z = Form::var(&r, 2);
        let i = HomogeneousIdeal::new(&r, vec![x.sub(&y).unwrap(), y.pow(2), z.pow(3)]).unwrap();
        let b = oracle_betti_of_ideal(&i, 10, None).unwrap();
        assert_eq!(b, ci_table());
        assert_eq!(regularity(&b).unwrap(), 3);
        assert_eq!(hilbert_series_from_betti(&b, 6), [1, 2, 2, 1, 0, 0, 0]);
        let seeded = oracle_betti_of_ideal(&i, 10, Some(5)).unwrap();
        assert_eq!(seeded, b);
    }

    #[test]
    fn window_reports_missing_cells() {
        let r = ring(&["x", "y"]);
        let i = HomogeneousIdeal::new(&r, vec![Form::var(&r, 0).pow(2)]).unwrap();
        let m = quotient_module_pieces(&i, 2, None);
        match betti_table_oracle(&m, 2) {
            Err(AlgebraError::WindowTooSmall(cells)) => assert!(cells.contains(&(0, 2))),
            other => panic!("expected window error, got {other:?}"),
        }
        assert!(m.actions_commute());
    }

    #[test]
    fn duality_example() {
        // R/(y^2, z^3) in three variables, twist 3
        let b = table(3, &[(0, 0, 1), (1, 2, 1), (1, 3, 1), (2, 5, 1)]);
        let w = dual_betti_table(&b, 2, 3);
        assert_eq!(w, table(3, &[(0, 1, 1), (1, 3, 1), (1, 4, 1), (2, 6, 1)]));
        assert_eq!(dual_betti_table(&w, 2, 3), b);
        assert_eq!(mapping_cone_betti(&b, 2, 3), ci_table());
    }

    #[test]
    fn cone_of_empty_table() {
        let b = table(4, &[(0, 0, 1)]);
        let c = mapping_cone_betti(&b, 3, 2);
        assert_eq!(c, table(4, &[(0, 0, 1), (4, 6, 1)]));
    }

    #[test]
    fn series_of_principal_quotient() {
        let b = table(1, &[(0, 0, 1), (1, 1, 1)]);
        assert_eq!(hilbert_series_from_betti(&b, 4), [1, 0, 0, 0, 0]);
        let free = table(1, &[(0, 0, 1)]);
        assert_eq!(hilbert_series_from_betti(&free, 3), [1, 1, 1, 1]);
    }

    #[test]
    fn regularity_of_empty_table() {
        assert_eq!(
            regularity(&BettiTable::new(2)),
            Err(AlgebraError::EmptyTable)
        );
    }

    #[test]
    fn koszul_squares_to_zero() {
        let r = ring(&["x", "y", "z"]);
        let i = HomogeneousIdeal::new(
            &r,
            vec![
                Form::var(&r, 0).multiply(&Form::var(&r, 1)).unwrap(),
                Form::var(&r, 2).pow(2),
            ],
        )
        .unwrap();
        let m = quotient_module_pieces(&i, 4, Some(1));
        assert!(m.actions_commute());
        for t in 0..2i64 {
            for k in 2..=3usize {
                let (_, a) = koszul_differential(&m, k, t).unwrap();
                let (ncols, b) = koszul_differential(&m, k - 1, t + 1).unwrap();
                let field = *m.field();
                for row in &a {
                    let prod = apply(&field, &b, row);
                    assert!(prod.is_empty(), "d^2 != 0 at ({k},{t}), {ncols} cols");
                }
            }
        }
    }

    #[test]
    fn json_is_sparse_triples() {
        let b = table(3, &[(0, 0, 1), (1, 2, 4)]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"nvars":3,"entries":[[0,0,1],[1,2,4]]}"#);
        let back: BettiTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
    }
}
