//! Tableaux `A ⊆ V*⊗W`, their prolongations, Cartan characters and the
//! Cartan test.
//!
//! Coordinates on `V*⊗W` are `(i, w) ↦ i·dim_w + w`. Symmetric tensors in
//! `S²V*⊗W` use the pairs `i ≤ j` in lexicographic order, see
//! [`sym_pairs`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel, pivot_cols_mod, rank, rref, Matrix, SubspaceBasis};
use crate::poly::DiffOp;
use crate::scalar::{Field, Modulus};

#[derive(Clone, Debug, PartialEq)]
pub struct Tableau<F> {
    dim_v: usize,
    dim_w: usize,
    basis: SubspaceBasis<F>,
}

/// A first prolongation in both presentations.
#[derive(Clone, Debug, PartialEq)]
pub struct Prolongation<F> {
    /// `A^(1)` as a subspace of `S²V*⊗W`.
    pub raw: SubspaceBasis<F>,
    /// `A^(1)` as a tableau in `V*⊗A`, the basis of `A` serving as the new
    /// fibre coordinates.
    pub lifted: Tableau<F>,
}

/// Index pairs `(i, j)` with `i ≤ j < n`, in the order used for `S²V*`.
pub fn sym_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn skew_pair_index(n: usize, i: usize, j: usize) -> usize {
    // Position of (i, j), i < j, among the pairs in lexicographic order.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl<F: Field> Tableau<F> {
    pub fn new(dim_v: usize, dim_w: usize, basis: SubspaceBasis<F>) -> Result<Self> {
        if basis.ambient_dim() != dim_v * dim_w {
            return Err(Error::DimensionMismatch { expected: dim_v * dim_w, found: basis.ambient_dim() });
        }
        Ok(Tableau { dim_v, dim_w, basis })
    }

    pub fn zero(dim_v: usize, dim_w: usize) -> Self {
        Tableau { dim_v, dim_w, basis: SubspaceBasis::zero(dim_v * dim_w) }
    }

    pub fn full(dim_v: usize, dim_w: usize) -> Self {
        Tableau { dim_v, dim_w, basis: SubspaceBasis::full(dim_v * dim_w) }
    }

    /// Symbol tableau of a first-order system: `σ ∈ V*⊗W` with
    /// `Σ c·M·σ_var = 0` over the constant-coefficient terms of each
    /// operator. `V*` is indexed by the variables, `W` by spinor components.
    pub fn symbol_of(ops: &[DiffOp<F>]) -> Self {
        let nv = ops.first().map_or(0, |op| op.nvars());
        let s = ops.first().map_or(0, |op| op.spinor_dim());
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); ops.len() * s];
        for (i, op) in ops.iter().enumerate() {
            for (var, c, m) in op.constant_part() {
                for nu in 0..s {
                    for (mu, v) in m.row(nu) {
                        rows[i * s + nu].push((var * s + mu, c.mul_ref(v)));
                    }
                }
            }
        }
        Tableau { dim_v: nv, dim_w: s, basis: kernel(&Matrix::from_entries(nv * s, rows)) }
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &SubspaceBasis<F> {
        &self.basis
    }

    /// `δ` restricted to `V*⊗A'` where `A'` is the span of our basis and the
    /// unknown `c_{i,r}` (column `i·dim A + r`) is the coefficient of
    /// `u^i ⊗ a_r`. Row `(p<q, w)` holds `Σ_r c_{p,r}·a_r[q,w] − c_{q,r}·a_r[p,w]`.
    fn skew_matrix(&self) -> Matrix<F> {
        let (n, dw, d) = (self.dim_v, self.dim_w, self.dim());
        let npairs = n * n.saturating_sub(1) / 2;
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); npairs * dw];
        for (r, a) in self.basis.rows().iter().enumerate() {
            for (idx, val) in a {
                let (j, w) = (idx / dw, idx % dw);
                for i in 0..n {
                    if i < j {
                        rows[skew_pair_index(n, i, j) * dw + w].push((i * d + r, val.clone()));
                    } else if i > j {
                        rows[skew_pair_index(n, j, i) * dw + w].push((i * d + r, val.neg_ref()));
                    }
                }
            }
        }
        Matrix::from_entries(n * d, rows)
    }

    /// The first prolongation as a tableau over `W' = A`.
    pub fn prolong_lifted(&self) -> Tableau<F> {
        let basis = if self.dim() == 0 { SubspaceBasis::zero(0) } else { kernel(&self.skew_matrix()) };
        Tableau { dim_v: self.dim_v, dim_w: self.dim(), basis }
    }

    /// `dim A^(1)` without building the raw presentation.
    pub fn prolongation_dim(&self) -> usize {
        if self.dim() == 0 {
            return 0;
        }
        let m = self.skew_matrix();
        m.cols() - rank(&m)
    }

    /// Maps a lifted coordinate vector `c` to the symmetric tensor
    /// `T[i≤j][w] = Σ_r c_{i,r}·a_r[j,w]`.
    pub fn to_symmetric(&self, c: &[(usize, F)]) -> Vec<(usize, F)> {
        let (n, dw, d) = (self.dim_v, self.dim_w, self.dim());
        let mut out: std::collections::BTreeMap<usize, F> = std::collections::BTreeMap::new();
        for (col, cv) in c {
            let (i, r) = (col / d, col % d);
            for (idx, av) in &self.basis.rows()[r] {
                let (j, w) = (idx / dw, idx % dw);
                if i <= j {
                    let pos = (skew_pair_index(n + 1, i, j + 1)) * dw + w;
                    let e = out.entry(pos).or_insert_with(F::zero);
                    *e = e.add_ref(&cv.mul_ref(av));
                }
            }
        }
        out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// `A^(1) = S²V*⊗W ∩ V*⊗A` in both presentations.
    pub fn prolong(&self) -> Prolongation<F> {
        let lifted = self.prolong_lifted();
        let ambient = self.dim_v * (self.dim_v + 1) / 2 * self.dim_w;
        let raw_rows = lifted.basis.rows().par_iter().map(|c| self.to_symmetric(c)).collect();
        let raw = SubspaceBasis::span_rows(ambient, raw_rows);
        Prolongation { raw, lifted }
    }

    /// `dim Λ²V*⊗W − dim δ(V*⊗A)`.
    pub fn h02_dim(&self) -> usize {
        let total = self.dim_v * self.dim_v.saturating_sub(1) / 2 * self.dim_w;
        if self.dim() == 0 {
            return total;
        }
        total - rank(&self.skew_matrix())
    }

    /// Images `a_r(b)` of every basis vector, as rows over `W`.
    fn evaluate(&self, rows: &[Vec<(usize, F)>], b: &[F]) -> Matrix<F> {
        let dw = self.dim_w;
        let out = rows
            .iter()
            .map(|a| {
                let mut v: Vec<(usize, F)> = Vec::new();
                for (idx, val) in a {
                    let bi = &b[idx / dw];
                    if !bi.is_zero() {
                        v.push((idx % dw, bi.mul_ref(val)));
                    }
                }
                v
            })
            .collect();
        Matrix::from_entries(dw, out)
    }

    /// Block matrix with rows `a_r` and column block `j` holding `a_r(b_j)`.
    fn character_matrix(&self, ob: &OrderedBasis<F>) -> Matrix<F> {
        let dw = self.dim_w;
        let frames: Vec<Vec<F>> = (0..self.dim_v).map(|j| ob.frame_vector(j)).collect();
        let rows = self
            .basis
            .rows()
            .par_iter()
            .map(|a| {
                let mut v: Vec<(usize, F)> = Vec::new();
                for (j, b) in frames.iter().enumerate() {
                    for (idx, val) in a {
                        let bi = &b[idx / dw];
                        if !bi.is_zero() {
                            v.push((j * dw + idx % dw, bi.mul_ref(val)));
                        }
                    }
                }
                v
            })
            .collect();
        Matrix::from_entries(self.dim_v * dw, rows)
    }

    /// Cartan characters `s_1..s_n` for the given ordering.
    pub fn characters(&self, ob: &OrderedBasis<F>) -> Result<Vec<usize>> {
        ob.check_size(self.dim_v)?;
        let mut s = vec![0; self.dim_v];
        if self.dim() == 0 {
            return Ok(s);
        }
        for p in rref(&self.character_matrix(ob)).pivot_cols {
            s[p / self.dim_w] += 1;
        }
        Ok(s)
    }

    fn characters_mod_p(&self, ob: &OrderedBasis<F>) -> Option<Vec<usize>> {
        let m = Modulus::new(CHECK_PRIME).expect("CHECK_PRIME is a prime = 1 mod 4");
        let dw = self.dim_w;
        let frames = (0..self.dim_v)
            .map(|j| ob.frame_vector(j).iter().map(|x| x.residue(&m)).collect::<Option<Vec<u64>>>())
            .collect::<Option<Vec<_>>>()?;
        let rows = self
            .basis
            .rows()
            .iter()
            .map(|a| {
                let mut v = vec![0; self.dim_v * dw];
                for (idx, val) in a {
                    let val = val.residue(&m)?;
                    for (j, b) in frames.iter().enumerate() {
                        let x = &mut v[j * dw + idx % dw];
                        *x = m.add(*x, m.mul(b[idx / dw], val));
                    }
                }
                Some(v)
            })
            .collect::<Option<Vec<_>>>()?;
        let mut s = vec![0; self.dim_v];
        for p in pivot_cols_mod(&m, rows) {
            s[p / dw] += 1;
        }
        Some(s)
    }

    /// `dim A_k` for `k = 1..n`.
    pub fn filtration_dims(&self, ob: &OrderedBasis<F>) -> Result<Vec<usize>> {
        let s = self.characters(ob)?;
        let mut left = self.dim();
        Ok(s.iter()
            .map(|sk| {
                left -= sk;
                left
            })
            .collect())
    }

    /// Cartan test against the given ordering.
    pub fn cartan_test(&self, ob: &OrderedBasis<F>) -> Result<CartanReport> {
        self.cartan_test_with(ob, self.prolongation_dim())
    }

    /// Cartan test with `dim A^(1)` already known.
    ///
    /// Dense frames make exact elimination of the character matrix slow, so
    /// the characters are first computed mod a prime. Partial ranks can only
    /// drop under reduction, and with the total rank fixed that can only
    /// raise `Σ k·s_k`. Since `Σ k·s_k ≥ dim A^(1)` holds exactly, a modular
    /// answer that meets this bound is exact. Anything else is recomputed
    /// over the field.
    pub fn cartan_test_with(&self, ob: &OrderedBasis<F>, dim_prolongation: usize) -> Result<CartanReport> {
        ob.check_size(self.dim_v)?;
        let characters = match self.characters_mod_p(ob) {
            Some(s) if s.iter().sum::<usize>() == self.dim() && weighted_sum(&s) == dim_prolongation => s,
            _ => self.characters(ob)?,
        };
        CartanReport::assemble(self.dim(), characters, dim_prolongation, ob.label.clone())
    }

    /// Picks an ordering of `V*` by the given strategy.
    pub fn search_ordering(&self, strategy: &OrderingStrategy<F>) -> Result<OrderedBasis<F>> {
        match strategy {
            OrderingStrategy::Given(ob) => {
                ob.check_size(self.dim_v)?;
                Ok(ob.clone())
            }
            OrderingStrategy::Greedy => Ok(self.greedy_ordering()),
            OrderingStrategy::Random(seed) => Ok(OrderedBasis::random(self.dim_v, *seed)),
        }
    }

    /// Column by column, picks the frame vector that maximises the next
    /// character among `e_c`, `e_c + e_d`, `e_c − e_d`; ties go to the
    /// earliest candidate.
    fn greedy_ordering(&self) -> OrderedBasis<F> {
        let n = self.dim_v;
        let unit = |c: usize| {
            let mut v = vec![F::zero(); n];
            v[c] = F::one();
            v
        };
        let mut pool: Vec<Vec<F>> = (0..n).map(unit).collect();
        for c in 0..n {
            for d in c + 1..n {
                let mut plus = unit(c);
                plus[d] = F::one();
                let mut minus = unit(c);
                minus[d] = F::from_i64(-1);
                pool.push(plus);
                pool.push(minus);
            }
        }

        let mut current: Vec<Vec<(usize, F)>> = self.basis.rows().to_vec();
        let mut chosen: Vec<Vec<F>> = Vec::with_capacity(n);
        let mut chosen_span = SubspaceBasis::<F>::zero(n);
        while chosen.len() < n {
            let independent = |b: &Vec<F>| !chosen_span.contains(&dense_to_sparse(b));
            let pick = if current.is_empty() {
                pool.iter().position(independent).expect("coordinate vectors span V*")
            } else {
                let scores: Vec<Option<usize>> = pool
                    .par_iter()
                    .map(|b| independent(b).then(|| rank(&self.evaluate(&current, b))))
                    .collect();
                let best = scores.iter().flatten().max().copied().expect("an independent candidate exists");
                scores.iter().position(|s| *s == Some(best)).unwrap()
            };
            let b = pool[pick].clone();
            if !current.is_empty() {
                // A_j is the kernel of a ↦ a(b) inside A_{j-1}.
                let images = self.evaluate(&current, &b);
                let coeffs = kernel(&images.transpose());
                let basis = Matrix::from_entries(n * self.dim_w, current);
                current = coeffs.to_matrix().mul(&basis).into_rows();
            }
            chosen_span = chosen_span.sum(&SubspaceBasis::span_rows(n, vec![dense_to_sparse(&b)])).unwrap();
            chosen.push(b);
        }
        OrderedBasis::from_frame(&chosen, "greedy").expect("greedy frame is independent")
    }
}

/// A prime `≡ 1 (mod 4)`, so `Q(i)` reduces into `Z/p`.
const CHECK_PRIME: u64 = 1_000_000_009;

/// `Σ k·s_k` with `k` counted from 1.
fn weighted_sum(s: &[usize]) -> usize {
    s.iter().enumerate().map(|(k, x)| (k + 1) * x).sum()
}

fn dense_to_sparse<F: Field>(v: &[F]) -> Vec<(usize, F)> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Grades of the basis vectors of a tableau, where coordinate `(i, w)` has
/// grade `grade_v[i] + grade_w[w]`. Fails if a basis vector is not
/// homogeneous.
pub fn basis_grades<F: Field>(t: &Tableau<F>, grade_v: &[usize], grade_w: &[usize]) -> Result<Vec<usize>> {
    let dw = t.dim_w();
    t.basis()
        .rows()
        .iter()
        .map(|a| homogeneous_grade(a, |idx| grade_v[idx / dw] + grade_w[idx % dw]))
        .collect()
}

/// Dimension of each graded piece of a subspace of `S²V*⊗W`; coordinate
/// `((i, j), w)` has grade `grade_v[i] + grade_v[j] + grade_w[w]`.
pub fn symmetric_graded_dims<F: Field>(
    raw: &SubspaceBasis<F>,
    grade_v: &[usize],
    grade_w: &[usize],
) -> Result<Vec<usize>> {
    let dw = grade_w.len();
    let pairs = sym_pairs(grade_v.len());
    if raw.ambient_dim() != pairs.len() * dw {
        return Err(Error::DimensionMismatch { expected: pairs.len() * dw, found: raw.ambient_dim() });
    }
    let mut dims: Vec<usize> = Vec::new();
    for a in raw.rows() {
        let g = homogeneous_grade(a, |idx| {
            let (i, j) = pairs[idx / dw];
            grade_v[i] + grade_v[j] + grade_w[idx % dw]
        })?;
        if dims.len() <= g {
            dims.resize(g + 1, 0);
        }
        dims[g] += 1;
    }
    Ok(dims)
}

fn homogeneous_grade<F>(a: &[(usize, F)], grade: impl Fn(usize) -> usize) -> Result<usize> {
    let g = grade(a[0].0);
    if a.iter().any(|(idx, _)| grade(*idx) != g) {
        return Err(Error::GradingViolation("subspace is not graded".into()));
    }
    Ok(g)
}

/// An ordered basis `u^1..u^n` of `V*`, stored with its dual frame
/// `b_1..b_n` of `V` (`u^i(b_j) = δ_ij`).
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedBasis<F> {
    /// Rows are the covectors `u^j` in the original coordinates.
    pub change: Matrix<F>,
    frame: Matrix<F>,
    pub label: String,
}

impl<F: Field> OrderedBasis<F> {
    pub fn identity(n: usize) -> Self {
        OrderedBasis { change: Matrix::identity(n), frame: Matrix::identity(n), label: "identity".into() }
    }

    /// From the covectors `u^1..u^n` given as rows.
    pub fn from_covectors(change: Matrix<F>, label: &str) -> Result<Self> {
        if change.rows() != change.cols() {
            return Err(Error::DimensionMismatch { expected: change.rows(), found: change.cols() });
        }
        let inv = change.inverse().ok_or(Error::SingularBasis)?;
        Ok(OrderedBasis { frame: inv, change, label: label.into() })
    }

    /// From the frame vectors `b_1..b_n`; the covectors are the dual basis.
    pub fn from_frame(frame: &[Vec<F>], label: &str) -> Result<Self> {
        let n = frame.len();
        let cols = Matrix::from_dense(n, frame).transpose();
        let change = cols.inverse().ok_or(Error::SingularBasis)?;
        Ok(OrderedBasis { change, frame: cols, label: label.into() })
    }

    /// A reproducible random basis with small integer entries.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            if let Ok(ob) = Self::from_covectors(Matrix::from_i64(&rows), &format!("random:{seed}")) {
                return ob;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.change.rows()
    }

    /// The frame vector `b_j` (0-based).
    pub fn frame_vector(&self, j: usize) -> Vec<F> {
        (0..self.dim()).map(|i| self.frame.get(i, j)).collect()
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

/// How to choose the ordering for a Cartan test.
#[derive(Clone, Debug)]
pub enum OrderingStrategy<F> {
    Given(OrderedBasis<F>),
    Greedy,
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanReport {
    pub dim_a: usize,
    pub filtration_dims: Vec<usize>,
    pub characters: Vec<usize>,
    pub rhs: usize,
    pub dim_prolongation: usize,
    pub involutive: bool,
    pub ordering_label: String,
}

impl CartanReport {
    fn assemble(dim_a: usize, characters: Vec<usize>, dim_prolongation: usize, ordering_label: String) -> Result<Self> {
        let rhs = weighted_sum(&characters);
        let mut left = dim_a;
        let filtration_dims = characters
            .iter()
            .map(|s| {
                left -= s;
                left
            })
            .collect();
        if dim_prolongation > rhs {
            return Err(Error::Invariant(format!("dim A^(1) = {dim_prolongation} exceeds Cartan bound {rhs}")));
        }
        Ok(CartanReport {
            dim_a,
            filtration_dims,
            characters,
            rhs,
            involutive: dim_prolongation == rhs,
            dim_prolongation,
            ordering_label,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{binomial, Q};

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    #[test]
    fn pair_indices() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(skew_pair_index(n, i, j), k);
                k += 1;
            }
        }
        // Symmetric pairs are the skew pairs of n + 1 with j shifted.
        for (pos, (i, j)) in sym_pairs(n).into_iter().enumerate() {
            assert_eq!(skew_pair_index(n + 1, i, j + 1), pos);
        }
    }

    #[test]
    fn zero_and_full_tableaux() {
        let z = Tableau::<Q>::zero(3, 2);
        assert_eq!(z.prolong().raw.dim(), 0);
        assert_eq!(z.h02_dim(), 3 * 2);
        let f = Tableau::<Q>::full(3, 2);
        let p = f.prolong();
        assert_eq!(p.raw.dim(), binomial(4, 2) as usize * 2);
        assert_eq!(p.lifted.dim(), p.raw.dim());
        assert_eq!(f.h02_dim(), 0);
        assert_eq!(f.filtration_dims(&OrderedBasis::identity(3)).unwrap(), vec![4, 2, 0]);
        let r = f.cartan_test(&OrderedBasis::identity(3)).unwrap();
        assert_eq!(r.characters, vec![2, 2, 2]);
        assert!(r.involutive);
    }

    #[test]
    fn greedy_on_full_tableau() {
        let f = Tableau::<Q>::full(4, 3);
        let ob = f.search_ordering(&OrderingStrategy::Greedy).unwrap();
        assert_eq!(f.characters(&ob).unwrap(), vec![3; 4]);
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(OrderedBasis::<Q>::random(6, 1), OrderedBasis::<Q>::random(6, 1));
        assert_ne!(OrderedBasis::<Q>::random(6, 1).change, OrderedBasis::<Q>::random(6, 2).change);
    }

    #[test]
    fn singular_basis_rejected() {
        let m = Matrix::<Q>::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(OrderedBasis::from_covectors(m, "bad"), Err(Error::SingularBasis));
    }

    #[test]
    fn single_equation_tableau() {
        // u_x = u_y in two variables: A = span{(1, 1)} over W = C, dim_v = 2.
        let a = SubspaceBasis::span_rows(2, vec![vec![(0, q(1)), (1, q(1))]]);
        let t = Tableau::new(2, 1, a).unwrap();
        // A^(1): symmetric with all entries equal, dimension 1.
        let p = t.prolong();
        assert_eq!(p.raw.dim(), 1);
        assert_eq!(p.raw.rows()[0], vec![(0, q(1)), (1, q(1)), (2, q(1))]);
        let r = t.cartan_test(&OrderedBasis::identity(2)).unwrap();
        assert_eq!(r.characters, vec![1, 0]);
        assert!(r.involutive);
        assert_eq!(t.h02_dim(), 0);
    }

    #[test]
    fn prolongation_dim_is_ordering_free() {
        let a = SubspaceBasis::span_rows(
            6,
            vec![vec![(0, q(1)), (3, q(1))], vec![(1, q(1)), (2, Q::i())], vec![(4, q(1)), (5, q(-1))]],
        );
        let t = Tableau::new(3, 2, a).unwrap();
        let d = t.prolong().raw.dim();
        for seed in 1..=5 {
            let ob = OrderedBasis::random(3, seed);
            let r = t.cartan_test_with(&ob, d).unwrap();
            assert!(r.rhs >= d);
            assert_eq!(r.characters.iter().sum::<usize>(), t.dim());
        }
    }
}
