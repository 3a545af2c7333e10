//! Sparse exact linear algebra: reduced row-echelon form, kernels, and the
//! subspace algebra (span, sum, intersection) used by every other module.
//!
//! Elimination first splits a matrix into the connected components of its
//! row/column incidence graph. Components are independent linear systems, so
//! they are reduced separately (and in parallel) and the pivot rows merged
//! back in pivot-column order. The merged result is exactly the reduced
//! row-echelon form of the whole matrix. The Dirac constraint matrices are
//! graded by spinor parity and column degree, which makes the components
//! small.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Field, Modulus};

/// A sparse row: `(column, value)` pairs sorted by column, no stored zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

/// A sparse matrix stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, F::one())]).collect();
        Matrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from rows of `(column, value)` entries in any order.
    /// Duplicate columns are summed and zeros dropped.
    pub fn from_entries(cols: usize, rows: Vec<Vec<(usize, F)>>) -> Self {
        let data: Vec<SparseRow<F>> = rows.into_iter().map(|r| normalize_row(cols, r)).collect();
        Matrix { rows: data.len(), cols, data }
    }

    pub fn from_dense(cols: usize, rows: &[Vec<F>]) -> Self {
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged dense matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect::<Vec<_>>();
        Matrix { rows: data.len(), cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let dense: Vec<Vec<F>> = rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect();
        Self::from_dense(cols, &dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.data[r]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &SparseRow<F>> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<SparseRow<F>> {
        self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of range");
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        self.data
            .iter()
            .map(|row| {
                let mut d = vec![F::zero(); self.cols];
                for (c, v) in row {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn dense_row(&self, r: usize) -> Vec<F> {
        let mut d = vec![F::zero(); self.cols];
        for (c, v) in &self.data[r] {
            d[*c] = v.clone();
        }
        d
    }

    pub fn push_row(&mut self, row: Vec<(usize, F)>) {
        self.data.push(normalize_row(self.cols, row));
        self.rows += 1;
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: data.len(), cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                r
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix<F> {
        let data = idx.iter().map(|&i| self.data[i].clone()).collect::<Vec<_>>();
        Matrix { rows: data.len(), cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix<F> {
        let mut data: Vec<SparseRow<F>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, k: &F) -> Matrix<F> {
        if k.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|row| row.iter().map(|(c, v)| (*c, v.mul_ref(k))).collect())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_rows(a, b, |x, y| x.add_ref(y)))
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        self.add(&other.scale(&F::from_i64(-1)))
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, F)> = Vec::new();
                for (k, a) in row {
                    for (c, b) in &other.data[*k] {
                        acc.push((*c, a.mul_ref(b)));
                    }
                }
                normalize_row(other.cols, acc)
            })
            .collect();
        Matrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        self.data
            .iter()
            .map(|row| row.iter().fold(F::zero(), |acc, (c, a)| acc.add_ref(&a.mul_ref(&v[*c]))))
            .collect()
    }

    /// Applies the matrix to a sparse vector.
    pub fn mul_sparse(&self, v: &[(usize, F)]) -> SparseRow<F> {
        let dense_v = {
            let mut d = vec![F::zero(); self.cols];
            for (c, x) in v {
                d[*c] = x.clone();
            }
            d
        };
        self.mul_vec(&dense_v)
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    /// Matrix inverse, or `None` if singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let r = rref(&aug);
        if r.pivot_cols.len() < n || r.pivot_cols[n - 1] != n - 1 {
            return None;
        }
        let data = (0..n)
            .map(|i| r.reduced.data[i].iter().filter(|(c, _)| *c >= n).map(|(c, v)| (c - n, v.clone())).collect())
            .collect();
        Some(Matrix { rows: n, cols: n, data })
    }
}

fn normalize_row<F: Field>(cols: usize, mut row: Vec<(usize, F)>) -> SparseRow<F> {
    row.sort_by_key(|e| e.0);
    let mut out: SparseRow<F> = Vec::with_capacity(row.len());
    for (c, v) in row {
        assert!(c < cols, "column {c} out of range {cols}");
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.add_ref(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn merge_rows<F: Field>(a: &[(usize, F)], b: &[(usize, F)], op: impl Fn(&F, &F) -> F) -> SparseRow<F> {
    let zero = F::zero();
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ca == cb {
            let v = op(&a[i].1, &b[j].1);
            i += 1;
            j += 1;
            (ca, v)
        } else if ca < cb {
            let v = op(&a[i].1, &zero);
            i += 1;
            (ca, v)
        } else {
            let v = op(&zero, &b[j].1);
            j += 1;
            (cb, v)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    out
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F> {
    pub rank: usize,
    /// The unique reduced row-echelon form; zero rows at the bottom.
    pub reduced: Matrix<F>,
    pub pivot_cols: Vec<usize>,
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Reduced row-echelon form with pivot columns ascending.
pub fn rref<F: Field>(m: &Matrix<F>) -> Rref<F> {
    let pivot_rows = reduce_rows(m.cols, m.data.iter().filter(|r| !r.is_empty()).cloned().collect());
    let rank = pivot_rows.len();
    let pivot_cols = pivot_rows.iter().map(|r| r[0].0).collect();
    let mut data = pivot_rows;
    data.resize(m.rows.max(rank), Vec::new());
    Rref { rank, reduced: Matrix { rows: m.rows.max(rank), cols: m.cols, data }, pivot_cols }
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).rank
}

/// Reduces a set of nonzero rows to the pivot rows of their RREF, sorted by
/// pivot column.
fn reduce_rows<F: Field>(cols: usize, rows: Vec<SparseRow<F>>) -> Vec<SparseRow<F>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut dsu = Dsu::new(cols);
    for r in &rows {
        let c0 = r[0].0;
        for (c, _) in &r[1..] {
            dsu.union(c0, *c);
        }
    }
    let mut comp_of_col = vec![usize::MAX; cols];
    let mut comp_cols: Vec<Vec<usize>> = Vec::new();
    let mut comp_id = vec![usize::MAX; cols];
    for (c, comp) in comp_of_col.iter_mut().enumerate() {
        let root = dsu.find(c);
        if comp_id[root] == usize::MAX {
            comp_id[root] = comp_cols.len();
            comp_cols.push(Vec::new());
        }
        *comp = comp_id[root];
        comp_cols[comp_id[root]].push(c);
    }
    let mut comp_rows: Vec<Vec<SparseRow<F>>> = vec![Vec::new(); comp_cols.len()];
    for r in rows {
        let k = comp_of_col[r[0].0];
        comp_rows[k].push(r);
    }

    let jobs: Vec<(Vec<usize>, Vec<SparseRow<F>>)> =
        comp_cols.into_iter().zip(comp_rows).filter(|(_, r)| !r.is_empty()).collect();

    let reduce_job = |(gcols, rows): (Vec<usize>, Vec<SparseRow<F>>)| -> Vec<SparseRow<F>> {
        let local = |c: usize| gcols.binary_search(&c).expect("column outside component");
        let lrows: Vec<SparseRow<F>> =
            rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (local(c), v)).collect()).collect();
        eliminate(gcols.len(), lrows)
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (gcols[c], v)).collect())
            .collect()
    };

    let big = jobs.len() > 1 && jobs.iter().map(|j| j.1.len()).sum::<usize>() > 64;
    let mut out: Vec<SparseRow<F>> = if big {
        jobs.into_par_iter().map(reduce_job).flatten().collect()
    } else {
        jobs.into_iter().flat_map(reduce_job).collect()
    };
    out.sort_by_key(|r| r[0].0);
    out
}

/// Scatter/gather accumulator for sparse row reduction.
struct Accumulator<F> {
    vals: Vec<F>,
    marked: Vec<bool>,
    heap: BinaryHeap<Reverse<usize>>,
}

impl<F: Field> Accumulator<F> {
    fn new(n: usize) -> Self {
        Accumulator { vals: vec![F::zero(); n], marked: vec![false; n], heap: BinaryHeap::new() }
    }

    fn load(&mut self, row: &[(usize, F)]) {
        for (c, v) in row {
            self.vals[*c] = v.clone();
            self.touch(*c);
        }
    }

    fn touch(&mut self, c: usize) {
        if !self.marked[c] {
            self.marked[c] = true;
            self.heap.push(Reverse(c));
        }
    }

    /// `acc -= f * row`, where `row[0]` is a pivot at a column already popped.
    fn axpy_tail(&mut self, f: &F, row: &[(usize, F)]) {
        for (c, v) in &row[1..] {
            self.vals[*c] = self.vals[*c].sub_mul(f, v);
            self.touch(*c);
        }
    }

    /// Reduces the loaded row against `pivot_of`, visiting columns in
    /// ascending order. Columns without a pivot are collected into the
    /// output, which is therefore sorted.
    fn reduce(&mut self, pivot_of: &[usize], pivots: &[SparseRow<F>]) -> SparseRow<F> {
        let mut out = Vec::new();
        while let Some(Reverse(c)) = self.heap.pop() {
            self.marked[c] = false;
            let v = std::mem::replace(&mut self.vals[c], F::zero());
            if v.is_zero() {
                continue;
            }
            let p = pivot_of[c];
            if p != usize::MAX {
                self.axpy_tail(&v, &pivots[p]);
            } else {
                out.push((c, v));
            }
        }
        out
    }
}

/// Gauss-Jordan elimination on one component. Rows are reduced one at a time
/// against the current pivots, then a final back-substitution pass clears the
/// entries above later pivots.
fn eliminate<F: Field>(ncols: usize, mut rows: Vec<SparseRow<F>>) -> Vec<SparseRow<F>> {
    rows.sort_by(|a, b| a[0].0.cmp(&b[0].0).then(a.len().cmp(&b.len())));
    let mut acc = Accumulator::new(ncols);
    let mut pivot_of = vec![usize::MAX; ncols];
    let mut pivots: Vec<SparseRow<F>> = Vec::new();

    for row in rows {
        acc.load(&row);
        let mut reduced = acc.reduce(&pivot_of, &pivots);
        if reduced.is_empty() {
            continue;
        }
        let lead = reduced[0].1.inv();
        for e in reduced.iter_mut() {
            e.1 = e.1.mul_ref(&lead);
        }
        pivot_of[reduced[0].0] = pivots.len();
        pivots.push(reduced);
    }

    // Back-substitution, highest pivot first, so every row only meets
    // pivot rows that are already fully reduced.
    let mut order: Vec<usize> = (0..pivots.len()).collect();
    order.sort_by_key(|&i| Reverse(pivots[i][0].0));
    let mut done_pivot_of = vec![usize::MAX; ncols];
    for &i in &order {
        let row = std::mem::take(&mut pivots[i]);
        let lead = row[0].clone();
        acc.load(&row[1..]);
        let mut tail = acc.reduce(&done_pivot_of, &pivots);
        let mut full = Vec::with_capacity(tail.len() + 1);
        full.push(lead);
        full.append(&mut tail);
        done_pivot_of[full[0].0] = i;
        pivots[i] = full;
    }
    pivots.sort_by_key(|r| r[0].0);
    pivots
}

/// Pivot columns of a dense matrix over `Z/p`, i.e. the columns that are not
/// in the span of the columns before them.
pub fn pivot_cols_mod(m: &Modulus, mut rows: Vec<Vec<u64>>) -> Vec<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(r) = (top..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(top, r);
        let inv = m.inv(rows[top][c]);
        let pivot: Vec<u64> = rows[top].iter().map(|&v| m.mul(v, inv)).collect();
        for row in &mut rows[top + 1..] {
            let f = row[c];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot).skip(c) {
                    *x = m.sub(*x, m.mul(f, y));
                }
            }
        }
        rows[top] = pivot;
        pivots.push(c);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    pivots
}

/// Canonical basis of `{v : m·v = 0}`.
pub fn kernel<F: Field>(m: &Matrix<F>) -> SubspaceBasis<F> {
    let r = rref(m);
    let vectors = kernel_vectors(m.cols, &r.reduced.data[..r.rank], &r.pivot_cols);
    SubspaceBasis::span_rows(m.cols, vectors)
}

/// The standard (non-canonical) kernel basis read off an RREF.
fn kernel_vectors<F: Field>(cols: usize, pivot_rows: &[SparseRow<F>], pivot_cols: &[usize]) -> Vec<SparseRow<F>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivot_cols {
        is_pivot[p] = true;
    }
    let mut by_free: Vec<Vec<(usize, F)>> = vec![Vec::new(); cols];
    for (r, row) in pivot_rows.iter().enumerate() {
        for (c, v) in &row[1..] {
            if !is_pivot[*c] {
                by_free[*c].push((pivot_cols[r], v.neg_ref()));
            }
        }
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|f| {
            let mut v = std::mem::take(&mut by_free[f]);
            v.push((f, F::one()));
            v.sort_by_key(|e| e.0);
            v
        })
        .collect()
}

/// A subspace of `F^ambient_dim` in canonical form: the rows of its reduced
/// row-echelon basis. Equal subspaces have identical canonical bases.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<F> {
    ambient_dim: usize,
    rows: Vec<SparseRow<F>>,
}

impl<F: Field> SubspaceBasis<F> {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, rows: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, rows: (0..ambient_dim).map(|i| vec![(i, F::one())]).collect() }
    }

    /// The coordinate subspace spanned by the given unit vectors.
    pub fn coordinate(ambient_dim: usize, coords: impl IntoIterator<Item = usize>) -> Self {
        let mut c: Vec<usize> = coords.into_iter().collect();
        c.sort_unstable();
        c.dedup();
        SubspaceBasis { ambient_dim, rows: c.into_iter().map(|i| vec![(i, F::one())]).collect() }
    }

    /// Span of arbitrary (possibly dependent) vectors given as matrix rows.
    pub fn span(vectors: &Matrix<F>) -> Self {
        Self::span_rows(vectors.cols, vectors.data.clone())
    }

    pub fn span_rows(ambient_dim: usize, rows: Vec<SparseRow<F>>) -> Self {
        let rows = rows.into_iter().map(|r| normalize_row(ambient_dim, r)).filter(|r| !r.is_empty()).collect();
        SubspaceBasis { ambient_dim, rows: reduce_rows(ambient_dim, rows) }
    }

    /// Canonical basis for vectors that must be linearly independent.
    pub fn from_independent(vectors: &Matrix<F>) -> Result<Self> {
        let s = Self::span(vectors);
        if s.dim() != vectors.rows() {
            return Err(Error::DependentVectors { given: vectors.rows(), rank: s.dim() });
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SparseRow<F>] {
        &self.rows
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn to_matrix(&self) -> Matrix<F> {
        Matrix { rows: self.rows.len(), cols: self.ambient_dim, data: self.rows.clone() }
    }

    pub fn dense_vector(&self, i: usize) -> Vec<F> {
        let mut d = vec![F::zero(); self.ambient_dim];
        for (c, v) in &self.rows[i] {
            d[*c] = v.clone();
        }
        d
    }

    /// Whether `v` lies in the subspace.
    pub fn contains(&self, v: &[(usize, F)]) -> bool {
        let v = normalize_row(self.ambient_dim, v.to_vec());
        let mut pivot_of = vec![usize::MAX; self.ambient_dim];
        for (i, r) in self.rows.iter().enumerate() {
            pivot_of[r[0].0] = i;
        }
        let mut acc = Accumulator::new(self.ambient_dim);
        acc.load(&v);
        acc.reduce(&pivot_of, &self.rows).is_empty()
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis<F>) -> bool {
        self.ambient_dim == other.ambient_dim && self.rows.iter().all(|r| other.contains(r))
    }

    /// Vectors spanning the annihilator under the bilinear pairing
    /// `<u, v> = Σ u_i v_i`.
    pub fn annihilator_rows(&self) -> Vec<SparseRow<F>> {
        kernel_vectors(self.ambient_dim, &self.rows, &self.pivot_cols())
    }

    pub fn annihilator(&self) -> SubspaceBasis<F> {
        SubspaceBasis::span_rows(self.ambient_dim, self.annihilator_rows())
    }

    pub fn sum(&self, other: &SubspaceBasis<F>) -> Result<SubspaceBasis<F>> {
        self.check_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(SubspaceBasis { ambient_dim: self.ambient_dim, rows: reduce_rows(self.ambient_dim, rows) })
    }

    pub fn intersect(&self, other: &SubspaceBasis<F>) -> Result<SubspaceBasis<F>> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SubspaceBasis::zero(self.ambient_dim));
        }
        let mut eqs = self.annihilator_rows();
        eqs.extend(other.annihilator_rows());
        let m = Matrix { rows: eqs.len(), cols: self.ambient_dim, data: eqs };
        Ok(kernel(&m))
    }

    /// Image of the subspace under `v ↦ v·m` (rows times matrix).
    pub fn image_under(&self, m: &Matrix<F>) -> Result<SubspaceBasis<F>> {
        if m.rows() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: m.rows() });
        }
        let rows = self.to_matrix().mul(m).data;
        Ok(SubspaceBasis::span_rows(m.cols(), rows))
    }

    fn check_ambient(&self, other: &SubspaceBasis<F>) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }
}

/// Solution set of `m·x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<F> {
    /// The particular solution with every free variable set to zero.
    pub particular: Vec<F>,
    /// Dimension of the solution set (`cols - rank`).
    pub freedom: usize,
}

/// Solves `m·x = b` exactly; `None` if inconsistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Result<Option<Solution<F>>> {
    Ok(solve_many(m, &[b.to_vec()])?.pop().expect("one right-hand side"))
}

/// Solves `m·x = b` for several right-hand sides with one elimination.
pub fn solve_many<F: Field>(m: &Matrix<F>, rhs: &[Vec<F>]) -> Result<Vec<Option<Solution<F>>>> {
    for b in rhs {
        if b.len() != m.rows() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: b.len() });
        }
    }
    let n = m.cols();
    let k = rhs.len();
    let data: Vec<SparseRow<F>> = (0..m.rows())
        .map(|r| {
            let mut row = m.data[r].clone();
            for (j, b) in rhs.iter().enumerate() {
                if !b[r].is_zero() {
                    row.push((n + j, b[r].clone()));
                }
            }
            row
        })
        .collect();
    let aug = Matrix { rows: m.rows(), cols: n + k, data };
    let r = rref(&aug);
    let rank_m = r.pivot_cols.iter().filter(|&&c| c < n).count();
    Ok((0..k)
        .map(|j| {
            let col = n + j;
            let consistent = !r.pivot_cols.contains(&col);
            consistent.then(|| {
                let mut x = vec![F::zero(); n];
                for (row, &p) in r.reduced.data[..r.rank].iter().zip(&r.pivot_cols) {
                    if p >= n {
                        continue;
                    }
                    if let Ok(pos) = row.binary_search_by_key(&col, |e| e.0) {
                        x[p] = row[pos].1.clone();
                    }
                }
                Solution { particular: x, freedom: n - rank_m }
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> Matrix<Q> {
        Matrix::from_i64(rows)
    }

    #[test]
    fn rref_identity_and_zero() {
        let r = rref(&Matrix::<Q>::identity(2));
        assert_eq!((r.rank, r.pivot_cols.clone()), (2, vec![0, 1]));
        let z = rref(&Matrix::<Q>::zeros(3, 4));
        assert_eq!(z.rank, 0);
        assert!(z.pivot_cols.is_empty());
        assert_eq!(z.reduced.rows(), 3);
    }

    #[test]
    fn rref_gaussian_rank_one() {
        // [[1, i], [i, -1]]: the second row is i times the first.
        let i = Q::i();
        let mat = Matrix::from_dense(2, &[vec![Q::one(), i.clone()], vec![i, Q::from_i64(-1)]]);
        let r = rref(&mat);
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_cols, vec![0]);
        assert_eq!(r.reduced.get(0, 1), Q::i());
    }

    #[test]
    fn rref_is_reduced() {
        let mat = m(&[vec![0, 2, 4, 1], vec![1, 1, 1, 1], vec![2, 4, 6, 3], vec![0, 0, 0, 5]]);
        let r = rref(&mat);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivot_cols, vec![0, 1, 3]);
        let want = m(&[vec![1, 0, -1, 0], vec![0, 1, 2, 0], vec![0, 0, 0, 1], vec![0, 0, 0, 0]]);
        assert_eq!(r.reduced, want);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::<Q>::identity(3)).is_zero());
        assert_eq!(kernel(&Matrix::<Q>::zeros(2, 5)).dim(), 5);
        let k = kernel(&m(&[vec![1, 1]]));
        assert_eq!(k.to_matrix(), m(&[vec![1, -1]]));
    }

    #[test]
    fn intersect_examples() {
        let a = SubspaceBasis::span(&m(&[vec![1, 0, 1], vec![0, 1, 0]]));
        let b = SubspaceBasis::span(&m(&[vec![1, 1, 1]]));
        assert_eq!(a.intersect(&b).unwrap(), b);
        assert_eq!(a.intersect(&a).unwrap(), a);

        let p = SubspaceBasis::<Q>::coordinate(4, [0, 1]);
        let q = SubspaceBasis::<Q>::coordinate(4, [2, 3]);
        assert!(p.intersect(&q).unwrap().is_zero());

        let bad = SubspaceBasis::<Q>::full(3);
        assert!(matches!(p.intersect(&bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn from_independent_rejects_dependent() {
        let r = SubspaceBasis::from_independent(&m(&[vec![1, 2], vec![2, 4]]));
        assert!(matches!(r, Err(Error::DependentVectors { given: 2, rank: 1 })));
    }

    #[test]
    fn block_diagonal_components() {
        // Two independent blocks interleaved in column order.
        let mat = m(&[vec![0, 1, 0, 2], vec![1, 0, 3, 0], vec![0, 2, 0, 4], vec![2, 0, 5, 0]]);
        let r = rref(&mat);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivot_cols, vec![0, 1, 2]);
        assert_eq!(r.reduced.row(1), &[(1, Q::one()), (3, Q::from_i64(2))]);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let s = solve(&a, &[Q::from_i64(3), Q::from_i64(2)]).unwrap().unwrap();
        assert_eq!(s.particular, vec![Q::one(), Q::one()]);
        assert_eq!(s.freedom, 0);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a), Matrix::identity(2));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
        let inconsistent = solve(&m(&[vec![1, 1], vec![1, 1]]), &[Q::one(), Q::zero()]).unwrap();
        assert!(inconsistent.is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix<Q>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..3, c), r).prop_map(|rows| Matrix::from_i64(&rows))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(mat in arb_matrix()) {
            let k = kernel(&mat);
            prop_assert_eq!(rank(&mat) + k.dim(), mat.cols());
            for row in k.rows() {
                prop_assert!(mat.mul_sparse(row).is_empty());
            }
        }

        #[test]
        fn canonical_span(mat in arb_matrix(), seed in 0i64..5) {
            // A different spanning set of the same space gives the same basis.
            let s = SubspaceBasis::span(&mat);
            let mut mixed = mat.clone();
            let n = mat.rows();
            for r in 0..n {
                let other = mat.row((r + 1) % n).to_vec();
                let scaled: Vec<_> = other.into_iter().map(|(c, v)| (c, v * Q::from_i64(seed))).collect();
                let mut row = mat.row(r).to_vec();
                row.extend(scaled);
                mixed.push_row(row);
            }
            prop_assert_eq!(SubspaceBasis::span(&mixed), s);
        }

        #[test]
        fn intersection_laws(a in arb_matrix(), b in arb_matrix()) {
            let cols = a.cols().min(b.cols());
            let trim = |x: &Matrix<Q>| Matrix::from_entries(cols, x.row_iter().map(|r| r.iter().filter(|e| e.0 < cols).cloned().collect()).collect());
            let sa = SubspaceBasis::span(&trim(&a));
            let sb = SubspaceBasis::span(&trim(&b));
            let i1 = sa.intersect(&sb).unwrap();
            prop_assert_eq!(&i1, &sb.intersect(&sa).unwrap());
            prop_assert!(i1.is_subspace_of(&sa));
            prop_assert!(i1.is_subspace_of(&sb));
            let sum = sa.sum(&sb).unwrap();
            prop_assert_eq!(i1.dim() + sum.dim(), sa.dim() + sb.dim());
        }
    }
}
