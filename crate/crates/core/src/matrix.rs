//! Exact matrices and elimination kernels.
//!
//! Matrices are stored as sparse rows `(column, value)` sorted by column.
//! Elimination always pivots on the first nonzero column of a row, so every
//! result is a deterministic function of the input rows.
//!
//! [`RowEchelon`] is the incremental workhorse: rows are reduced against the
//! current pivots through a dense scratch accumulator and appended when they
//! are independent. [`RowEchelon::into_rref`] back-substitutes to the reduced
//! row echelon form, from which kernels and normal forms are read off.
//! [`rank_of_rows`] additionally switches to dense elimination for matrices
//! of at most [`DENSE_MAX_COLS`] columns.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::AlgebraError;
use crate::field::Field;

pub type SparseRow<E> = Vec<(u32, E)>;

/// Column bound for the dense rank path.
pub const DENSE_MAX_COLS: usize = 2000;

const NO_PIVOT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct ExactMatrix<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseRow<F::Elem>>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zero(field: F, nrows: usize, ncols: usize) -> Self {
        ExactMatrix {
            field,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Wraps sparse rows, sorting them and dropping explicit zeros.
    pub fn from_rows(
        field: F,
        ncols: usize,
        rows: Vec<SparseRow<F::Elem>>,
    ) -> Result<Self, AlgebraError> {
        let mut clean = Vec::with_capacity(rows.len());
        for mut row in rows {
            row.retain(|(_, v)| !field.is_zero(v));
            row.sort_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(AlgebraError::DimensionMismatch(
                    "repeated column in sparse row".into(),
                ));
            }
            if let Some((c, _)) = row.last() {
                if *c as usize >= ncols {
                    return Err(AlgebraError::DimensionMismatch(format!(
                        "column {c} out of bounds for {ncols} columns"
                    )));
                }
            }
            clean.push(row);
        }
        Ok(ExactMatrix {
            field,
            ncols,
            rows: clean,
        })
    }

    pub fn from_dense(
        field: F,
        ncols: usize,
        dense: &[Vec<F::Elem>],
    ) -> Result<Self, AlgebraError> {
        let mut rows = Vec::with_capacity(dense.len());
        for r in dense {
            if r.len() != ncols {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "row of length {} in a matrix with {ncols} columns",
                    r.len()
                )));
            }
            rows.push(
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !field.is_zero(v))
                    .map(|(c, v)| (c as u32, v.clone()))
                    .collect(),
            );
        }
        Ok(ExactMatrix { field, ncols, rows })
    }

    pub fn from_i64(field: F, ncols: usize, dense: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        let conv: Vec<Vec<F::Elem>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_dense(field, ncols, &conv)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseRow<F::Elem>> {
        self.rows
    }

    pub fn row(&self, r: usize) -> &SparseRow<F::Elem> {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> F::Elem {
        match self.rows[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<SparseRow<F::Elem>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                cols[*c as usize].push((r as u32, v.clone()));
            }
        }
        ExactMatrix {
            field: self.field.clone(),
            ncols: self.rows.len(),
            rows: cols,
        }
    }

    /// `self * other`
    pub fn mul(&self, other: &ExactMatrix<F>) -> Result<Self, AlgebraError> {
        if self.ncols != other.nrows() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols,
                other.nrows(),
                other.ncols
            )));
        }
        let field = &self.field;
        let mut acc = Accumulator::new(field, other.ncols);
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            for (k, a) in row {
                for (c, b) in &other.rows[*k as usize] {
                    acc.add_scaled(field, *c, a, b);
                }
            }
            rows.push(acc.drain(field));
        }
        Ok(ExactMatrix {
            field: field.clone(),
            ncols: other.ncols,
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![self.field.zero(); self.ncols];
                for (c, v) in row {
                    d[*c as usize] = v.clone();
                }
                d
            })
            .collect()
    }
}

impl<F: Field> PartialEq for ExactMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }
}

/// Dense scratch row with a min-heap of touched columns.
struct Accumulator<F: Field> {
    vals: Vec<F::Elem>,
    live: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

impl<F: Field> Accumulator<F> {
    fn new(field: &F, ncols: usize) -> Self {
        Accumulator {
            vals: vec![field.zero(); ncols],
            live: vec![false; ncols],
            heap: BinaryHeap::new(),
        }
    }

    #[inline]
    fn touch(&mut self, c: u32) {
        if !self.live[c as usize] {
            self.live[c as usize] = true;
            self.heap.push(Reverse(c));
        }
    }

    fn load(&mut self, row: &[(u32, F::Elem)]) {
        for (c, v) in row {
            self.vals[*c as usize] = v.clone();
            self.touch(*c);
        }
    }

    /// `vals[c] += a * b`
    fn add_scaled(&mut self, field: &F, c: u32, a: &F::Elem, b: &F::Elem) {
        let cur = &mut self.vals[c as usize];
        *cur = field.add(cur, &field.mul(a, b));
        self.touch(c);
    }

    /// Empties the accumulator into a sorted sparse row.
    fn drain(&mut self, field: &F) -> SparseRow<F::Elem> {
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            self.live[c as usize] = false;
            let v = std::mem::replace(&mut self.vals[c as usize], field.zero());
            if !field.is_zero(&v) {
                out.push((c, v));
            }
        }
        out
    }

    /// Reduces the loaded row against pivot rows (each with leading one),
    /// scanning columns in increasing order. Returns the remainder, which has
    /// no entries in pivot columns, and leaves the accumulator empty.
    fn reduce(
        &mut self,
        field: &F,
        rows: &[SparseRow<F::Elem>],
        pivot_row: &[u32],
    ) -> SparseRow<F::Elem> {
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            self.live[c as usize] = false;
            let v = std::mem::replace(&mut self.vals[c as usize], field.zero());
            if field.is_zero(&v) {
                continue;
            }
            let pr = pivot_row[c as usize];
            if pr == NO_PIVOT {
                out.push((c, v));
                continue;
            }
            for (col, e) in rows[pr as usize].iter().skip(1) {
                let slot = &mut self.vals[*col as usize];
                *slot = field.sub_mul(slot, &v, e);
                if !self.live[*col as usize] {
                    self.live[*col as usize] = true;
                    self.heap.push(Reverse(*col));
                }
            }
        }
        out
    }
}

/// Incremental row echelon form (leading coefficients one, not reduced
/// above pivots).
pub struct RowEchelon<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseRow<F::Elem>>,
    pivot_row: Vec<u32>,
    acc: Accumulator<F>,
}

impl<F: Field> RowEchelon<F> {
    pub fn new(field: F, ncols: usize) -> Self {
        let acc = Accumulator::new(&field, ncols);
        RowEchelon {
            field,
            ncols,
            rows: Vec::new(),
            pivot_row: vec![NO_PIVOT; ncols],
            acc,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Remainder of `row` modulo the current span.
    pub fn reduce(&mut self, row: &[(u32, F::Elem)]) -> SparseRow<F::Elem> {
        self.acc.load(row);
        self.acc.reduce(&self.field, &self.rows, &self.pivot_row)
    }

    pub fn contains(&mut self, row: &[(u32, F::Elem)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Adds `row` to the span; returns whether it was independent.
    pub fn insert(&mut self, row: &[(u32, F::Elem)]) -> bool {
        if self.is_full() {
            return false;
        }
        let rem = self.reduce(row);
        if rem.is_empty() {
            return false;
        }
        self.push_remainder(rem);
        true
    }

    fn push_remainder(&mut self, mut rem: SparseRow<F::Elem>) {
        let inv = self.field.inv(&rem[0].1).expect("nonzero leading entry");
        if !self.field.is_one(&inv) {
            for e in rem.iter_mut() {
                e.1 = self.field.mul(&e.1, &inv);
            }
        }
        self.pivot_row[rem[0].0 as usize] = self.rows.len() as u32;
        self.rows.push(rem);
    }

    /// Back-substitutes into reduced row echelon form, rows sorted by pivot.
    pub fn into_rref(mut self) -> Rref<F> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r][0].0);
        let mut rows: Vec<SparseRow<F::Elem>> = order
            .iter()
            .map(|&r| std::mem::take(&mut self.rows[r]))
            .collect();
        let mut pivot_row = vec![NO_PIVOT; self.ncols];
        for (k, row) in rows.iter().enumerate() {
            pivot_row[row[0].0 as usize] = k as u32;
        }
        // Rows below k are already reduced when row k is processed.
        for k in (0..rows.len()).rev() {
            let needs = rows[k]
                .iter()
                .skip(1)
                .any(|(c, _)| pivot_row[*c as usize] != NO_PIVOT);
            if !needs {
                continue;
            }
            let lead = rows[k][0].clone();
            let tail: Vec<(u32, F::Elem)> = rows[k][1..].to_vec();
            self.acc.load(&tail);
            let rem = self.acc.reduce(&self.field, &rows, &pivot_row);
            let mut row = Vec::with_capacity(rem.len() + 1);
            row.push(lead);
            row.extend(rem);
            rows[k] = row;
        }
        let pivots = rows.iter().map(|r| r[0].0).collect();
        Rref {
            field: self.field,
            ncols: self.ncols,
            rows,
            pivots,
            pivot_row,
        }
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    field: F,
    ncols: usize,
    rows: Vec<SparseRow<F::Elem>>,
    pivots: Vec<u32>,
    pivot_row: Vec<u32>,
}

impl<F: Field> Rref<F> {
    pub fn from_rows<'a, I>(field: F, ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseRow<F::Elem>>,
        F::Elem: 'a,
    {
        let mut ech = RowEchelon::new(field, ncols);
        for r in rows {
            ech.insert(r);
        }
        ech.into_rref()
    }

    pub fn empty(field: F, ncols: usize) -> Self {
        Rref {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NO_PIVOT; ncols],
        }
    }

    /// The whole space, as the identity matrix.
    pub fn full(field: F, ncols: usize) -> Self {
        let one = field.one();
        Rref {
            rows: (0..ncols as u32).map(|c| vec![(c, one.clone())]).collect(),
            pivots: (0..ncols as u32).collect(),
            pivot_row: (0..ncols as u32).collect(),
            field,
            ncols,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NO_PIVOT
    }

    /// The row whose pivot is `col`.
    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseRow<F::Elem>> {
        match self.pivot_row[col] {
            NO_PIVOT => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Remainder of `row` modulo the row space: the unique representative
    /// supported on free columns.
    pub fn reduce(&self, row: &[(u32, F::Elem)]) -> SparseRow<F::Elem> {
        let mut acc = Accumulator::new(&self.field, self.ncols);
        acc.load(row);
        acc.reduce(&self.field, &self.rows, &self.pivot_row)
    }

    pub fn contains(&self, row: &[(u32, F::Elem)]) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column
    /// in increasing order.
    pub fn kernel(&self) -> Vec<SparseRow<F::Elem>> {
        let free = self.free_columns();
        let mut slot = vec![NO_PIVOT; self.ncols];
        for (k, &c) in free.iter().enumerate() {
            slot[c] = k as u32;
        }
        let mut out: Vec<SparseRow<F::Elem>> = vec![Vec::new(); free.len()];
        for row in &self.rows {
            let piv = row[0].0;
            for (c, v) in row.iter().skip(1) {
                out[slot[*c as usize] as usize].push((piv, self.field.neg(v)));
            }
        }
        for (k, &c) in free.iter().enumerate() {
            out[k].push((c as u32, self.field.one()));
            out[k].sort_by_key(|e| e.0);
        }
        out
    }

    pub fn to_matrix(&self) -> ExactMatrix<F> {
        ExactMatrix {
            field: self.field.clone(),
            ncols: self.ncols,
            rows: self.rows.clone(),
        }
    }
}

impl<F: Field> PartialEq for Rref<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ncols == other.ncols && self.rows == other.rows
    }
}

/// Rank, right-kernel basis and reduced row echelon form of `m`.
pub fn rref_rank_kernel<F: Field>(m: &ExactMatrix<F>) -> (usize, ExactMatrix<F>, ExactMatrix<F>) {
    let rref = Rref::from_rows(m.field.clone(), m.ncols, m.rows.iter());
    let kernel = ExactMatrix {
        field: m.field.clone(),
        ncols: m.ncols,
        rows: rref.kernel(),
    };
    (rref.rank(), kernel, rref.to_matrix())
}

/// Reduced basis of `rowspace(a) ∩ rowspace(b)`.
///
/// Computed as the common annihilator of the two right kernels.
pub fn intersect_rowspaces<F: Field>(
    a: &ExactMatrix<F>,
    b: &ExactMatrix<F>,
) -> Result<ExactMatrix<F>, AlgebraError> {
    if a.ncols != b.ncols {
        return Err(AlgebraError::DimensionMismatch(format!(
            "cannot intersect row spaces in {} and {} columns",
            a.ncols, b.ncols
        )));
    }
    let field = a.field.clone();
    let ra = Rref::from_rows(field.clone(), a.ncols, a.rows.iter());
    let rb = Rref::from_rows(field.clone(), b.ncols, b.rows.iter());
    let out = intersect_rrefs(&[&ra, &rb]);
    Ok(out.to_matrix())
}

/// Intersection of several row spaces in the same ambient space.
pub fn intersect_rrefs<F: Field>(spaces: &[&Rref<F>]) -> Rref<F> {
    assert!(!spaces.is_empty());
    let field = spaces[0].field.clone();
    let ncols = spaces[0].ncols;
    let mut functionals = RowEchelon::new(field.clone(), ncols);
    for s in spaces {
        for k in s.kernel() {
            functionals.insert(&k);
        }
    }
    let kernel = functionals.into_rref().kernel();
    Rref::from_rows(field, ncols, kernel.iter())
}

/// Rank of the matrix with the given rows, dense elimination when the column
/// count is at most [`DENSE_MAX_COLS`], sparse otherwise.
pub fn rank_of_rows<F: Field>(field: &F, ncols: usize, rows: &[SparseRow<F::Elem>]) -> usize {
    if rows.is_empty() || ncols == 0 {
        return 0;
    }
    if ncols <= DENSE_MAX_COLS && (rows.len() as u64) * (ncols as u64) <= 16_000_000 {
        dense_rank(field, ncols, rows)
    } else {
        let mut ech = RowEchelon::new(field.clone(), ncols);
        for r in rows {
            ech.insert(r);
            if ech.is_full() {
                break;
            }
        }
        ech.rank()
    }
}

fn dense_rank<F: Field>(field: &F, ncols: usize, rows: &[SparseRow<F::Elem>]) -> usize {
    let mut mat: Vec<Vec<F::Elem>> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut d = vec![field.zero(); ncols];
            for (c, v) in r {
                d[*c as usize] = v.clone();
            }
            d
        })
        .collect();
    let nrows = mat.len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !field.is_zero(&mat[r][col])) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = field.inv(&mat[rank][col]).expect("nonzero pivot");
        for v in mat[rank][col..].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let (top, bottom) = mat.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom.iter_mut() {
            if field.is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for (dst, src) in row[col..].iter_mut().zip(&pivot[col..]) {
                if !field.is_zero(src) {
                    *dst = field.sub_mul(dst, &f, src);
                }
            }
        }
        rank += 1;
    }
    rank
}
