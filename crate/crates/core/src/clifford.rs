//! Complex spinor representation of the Clifford algebra of Euclidean `R^n`.
//!
//! Generators are built from tensor products of Pauli matrices (the
//! Jordan–Wigner construction) and multiplied by `i`, so that
//! `γ_α γ_β + γ_β γ_α = -2 δ_{αβ}` and every entry lies in `{0, ±1, ±i}`.

use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix};
use crate::scalar::ComplexField;

/// Sizes attached to an operator on `M(n, k)`: `m = ⌊n/2⌋`, `s = 2^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RepParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub s: usize,
}

impl RepParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("n = {n}, need n >= 3")));
        }
        if k < 2 {
            return Err(Error::InvalidParameters(format!("k = {k}, need k >= 2")));
        }
        let m = n / 2;
        Ok(RepParams { n, k, m, s: 1 << m })
    }
}

#[derive(Clone, Debug)]
pub struct CliffordRep<F> {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// `gamma[α - 1]` is the matrix of Clifford multiplication by `ε_α`.
    pub gamma: Vec<Matrix<F>>,
    /// The grading operator on `Sp = Sp₊ ⊕ Sp₋`, present iff `n` is even.
    pub chirality: Option<Matrix<F>>,
}

fn pauli<F: ComplexField>() -> [Matrix<F>; 3] {
    let (o, z, i) = (F::one(), F::zero(), F::imag_unit());
    [
        Matrix::from_dense(2, &[vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]),
        Matrix::from_dense(2, &[vec![z.clone(), i.neg_ref()], vec![i, z.clone()]]),
        Matrix::from_dense(2, &[vec![o.clone(), z.clone()], vec![z, o.neg_ref()]]),
    ]
}

/// Kronecker product `a ⊗ b`.
pub fn kron<F: crate::Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let cols = a.cols() * b.cols();
    let mut rows = Vec::with_capacity(a.rows() * b.rows());
    for ra in 0..a.rows() {
        for rb in 0..b.rows() {
            let mut row = Vec::new();
            for (ca, va) in a.row(ra) {
                for (cb, vb) in b.row(rb) {
                    row.push((ca * b.cols() + cb, va.mul_ref(vb)));
                }
            }
            rows.push(row);
        }
    }
    Matrix::from_entries(cols, rows)
}

fn kron_all<F: crate::Field>(factors: &[&Matrix<F>]) -> Matrix<F> {
    factors.iter().fold(Matrix::identity(1), |acc, f| kron(&acc, f))
}

impl<F: ComplexField> CliffordRep<F> {
    /// Builds the spinor representation for `n >= 3`. Deterministic.
    pub fn build(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!("n = {n}, need n >= 3")));
        }
        let m = n / 2;
        let s = 1usize << m;
        let [s1, s2, s3] = pauli::<F>();
        let id2 = Matrix::<F>::identity(2);
        let i = F::imag_unit();

        let mut gamma = Vec::with_capacity(n);
        for j in 0..m {
            for p in [&s1, &s2] {
                let mut f: Vec<&Matrix<F>> = Vec::with_capacity(m);
                f.extend(std::iter::repeat_n(&s3, j));
                f.push(p);
                f.extend(std::iter::repeat_n(&id2, m - j - 1));
                gamma.push(kron_all(&f).scale(&i));
            }
        }
        let omega = kron_all(&vec![&s3; m]);
        let chirality = if n % 2 == 1 {
            gamma.push(omega.scale(&i));
            None
        } else {
            Some(omega)
        };
        Ok(CliffordRep { n, m, s, gamma, chirality })
    }

    /// `γ_α` for `1 <= alpha <= n`.
    pub fn gamma(&self, alpha: usize) -> Result<&Matrix<F>> {
        if alpha == 0 || alpha > self.n {
            return Err(Error::IndexOutOfRange { index: alpha, max: self.n });
        }
        Ok(&self.gamma[alpha - 1])
    }

    /// Clifford multiplication `ε_α . v`.
    pub fn apply(&self, alpha: usize, v: &[F]) -> Result<Vec<F>> {
        let g = self.gamma(alpha)?;
        if v.len() != self.s {
            return Err(Error::DimensionMismatch { expected: self.s, found: v.len() });
        }
        Ok(g.mul_vec(v))
    }

    /// Checks `γ_α γ_β + γ_β γ_α = -2 δ_{αβ} I` for every pair.
    pub fn satisfies_clifford_relation(&self) -> bool {
        let minus_two_id = Matrix::<F>::identity(self.s).scale(&F::from_i64(-2));
        let zero = Matrix::<F>::zeros(self.s, self.s);
        (0..self.n).all(|a| {
            (a..self.n).all(|b| {
                let ac = self.gamma[a].mul(&self.gamma[b]).add(&self.gamma[b].mul(&self.gamma[a]));
                ac == if a == b { minus_two_id.clone() } else { zero.clone() }
            })
        })
    }

    /// Dimensions of the `+1` and `-1` chirality eigenspaces (n even).
    pub fn chirality_split(&self) -> Option<(usize, usize)> {
        let c = self.chirality.as_ref()?;
        let id = Matrix::<F>::identity(self.s);
        let plus = kernel(&c.sub(&id)).dim();
        let minus = kernel(&c.add(&id)).dim();
        Some((plus, minus))
    }
}
