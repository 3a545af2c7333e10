//! The Euclidean k-Dirac operator `∂_i = Σ_α γ_α ∂/∂x_{αi}` on spinor
//! valued functions of an `n × k` real matrix `x`.

use std::sync::Arc;

use crate::clifford::{CliffordRep, RepParams};
use crate::error::{Error, Result};
use crate::linalg::{solve_many, Matrix, SubspaceBasis};
use crate::poly::{apply_op, monomial_basis, solution_space, ConstraintSystem, DiffOp, Poly, SpinorPoly, VariableSet};
use crate::scalar::ComplexField;
use crate::tableau::{sym_pairs, OrderedBasis, Tableau};
use crate::binomial;

/// Index of `x_{αi}` (1-based `alpha`, `i`) among the variables: row-major
/// in `α`.
pub fn x_index(k: usize, alpha: usize, i: usize) -> usize {
    (alpha - 1) * k + (i - 1)
}

pub(crate) fn x_names(n: usize, k: usize) -> Vec<String> {
    (1..=n).flat_map(|a| (1..=k).map(move |i| format!("x{a}_{i}"))).collect()
}

#[derive(Clone, Debug)]
pub struct EuclideanSystem<F> {
    pub params: RepParams,
    pub rep: CliffordRep<F>,
    pub vars: Arc<VariableSet>,
    /// Slot `i` (0-based) is `∂_{i+1}`.
    pub ops: Vec<DiffOp<F>>,
}

impl<F: ComplexField> EuclideanSystem<F> {
    pub fn build(n: usize, k: usize) -> Result<Self> {
        let params = RepParams::new(n, k)?;
        let rep = CliffordRep::build(n)?;
        let vars = Arc::new(VariableSet::uniform(x_names(n, k)));
        let nv = n * k;
        let ops = (1..=k)
            .map(|i| {
                let mut op = DiffOp::new(nv, params.s);
                for a in 1..=n {
                    op.push(Poly::constant(nv, F::one()), x_index(k, a, i), rep.gamma[a - 1].clone());
                }
                op
            })
            .collect();
        Ok(EuclideanSystem { params, rep, vars, ops })
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn s(&self) -> usize {
        self.params.s
    }

    /// Homogeneous monogenic spinors of degree `r`.
    pub fn solution_space(&self, r: u32) -> Result<SubspaceBasis<F>> {
        solution_space(&self.ops, &self.vars, self.s(), r)
    }

    pub fn is_monogenic(&self, psi: &SpinorPoly<F>) -> Result<bool> {
        for op in &self.ops {
            if !apply_op(op, psi)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The symbol tableau `E⊗T ⊆ V*⊗Sp`.
    pub fn tableau(&self) -> Tableau<F> {
        Tableau::symbol_of(&self.ops)
    }

    /// The coordinate ordering `x_{11}, …, x_{1k}, x_{21}, …, x_{nk}`.
    pub fn level0_ordering(&self) -> OrderedBasis<F> {
        let mut ob = OrderedBasis::identity(self.n() * self.k());
        ob.label = "paper".into();
        ob
    }

    /// The matrix `V` of the chart `x = V·t` (k = 2 only). Columns are the
    /// frame vectors of the ordering used for the first prolongation.
    pub fn chart(&self) -> Result<Matrix<F>> {
        if self.k() != 2 {
            return Err(Error::InvalidParameters(format!("the t-chart needs k = 2, got k = {}", self.k())));
        }
        let n = self.n();
        // (x variable, t index (1-based), coefficient)
        let mut entries: Vec<(usize, usize, i64)> = Vec::new();
        for a in 1..=n.saturating_sub(3) {
            entries.push((x_index(2, a, 1), 2 * a - 1, 1));
            entries.push((x_index(2, a, 2), 2 * a, 1));
        }
        entries.push((x_index(2, n - 2, 1), 2 * n - 5, 1));
        entries.push((x_index(2, n - 2, 2), 2 * n - 1, 1));
        entries.push((x_index(2, n - 1, 1), 2 * n, 1));
        entries.push((x_index(2, n - 1, 2), 2 * n - 4, 1));
        entries.push((x_index(2, n, 1), 2 * n - 3, 1));
        entries.push((x_index(2, n, 1), 2 * n - 2, 1));
        entries.push((x_index(2, n, 2), 2 * n - 3, 1));
        entries.push((x_index(2, n, 2), 2 * n - 2, -1));
        let mut rows = vec![Vec::new(); 2 * n];
        for (x, t, c) in entries {
            rows[x].push((t - 1, F::from_i64(c)));
        }
        Ok(Matrix::from_entries(2 * n, rows))
    }

    /// The ordering `e₁⊗ε₁, e₂⊗ε₁, …, (e₁+e₂)⊗ε_n, (e₁−e₂)⊗ε_n, e₂⊗ε_{n−2},
    /// e₁⊗ε_{n−1}` for the first prolongation (k = 2 only).
    pub fn chart_ordering(&self) -> Result<OrderedBasis<F>> {
        let v = self.chart()?;
        let frame: Vec<Vec<F>> = (0..v.cols()).map(|j| (0..v.rows()).map(|r| v.get(r, j)).collect()).collect();
        OrderedBasis::from_frame(&frame, "paper")
    }

    /// Dimensions of `A^(1) ∩ S²E⊗S²F⊗Sp` and `A^(1) ∩ Λ²E⊗Λ²F⊗Sp`, found
    /// as the `±1` eigenspaces of the swap `x_{αi}x_{βj} ↦ x_{αj}x_{βi}`.
    pub fn quadratic_component_dims(&self) -> Result<(usize, usize)> {
        let (n, k, s) = (self.n(), self.k(), self.s());
        let raw = self.tableau().prolong().raw;
        let pairs = sym_pairs(n * k);
        let pos = |p: usize, q: usize| {
            let (a, b) = if p <= q { (p, q) } else { (q, p) };
            pairs.binary_search(&(a, b)).expect("pair present")
        };
        let ambient = pairs.len() * s;
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (idx, &(p, q)) in pairs.iter().enumerate() {
            let (a, i) = (p / k, p % k);
            let (b, j) = (q / k, q % k);
            let image = pos(a * k + j, b * k + i);
            for mu in 0..s {
                let (c, d) = (idx * s + mu, image * s + mu);
                if c == d {
                    minus.push(vec![(c, F::one())]);
                } else {
                    plus.push(vec![(c, F::one()), (d, F::from_i64(-1))]);
                    minus.push(vec![(c, F::one()), (d, F::one())]);
                }
            }
        }
        let sym = raw.intersect(&crate::linalg::kernel(&Matrix::from_entries(ambient, plus)))?;
        let skew = raw.intersect(&crate::linalg::kernel(&Matrix::from_entries(ambient, minus)))?;
        if sym.dim() + skew.dim() != raw.dim() {
            return Err(Error::Invariant("A^(1) is not the sum of its swap eigenspaces".into()));
        }
        Ok((sym.dim(), skew.dim()))
    }

    /// Checks that `[∂̃_i, ∂̃_j]ψ` vanishes on `x_{1·} = 0` for all pairs,
    /// where `∂̃_i = Σ_{α≥2} γ_α ∂_{αi}`.
    pub fn restriction_commutator_check(&self, psi: &SpinorPoly<F>) -> Result<bool> {
        if !self.is_monogenic(psi)? {
            return Err(Error::NotMonogenic);
        }
        let (n, k) = (self.n(), self.k());
        let nv = n * k;
        let truncated: Vec<DiffOp<F>> = (1..=k)
            .map(|i| {
                let mut op = DiffOp::new(nv, self.s());
                for a in 2..=n {
                    op.push(Poly::constant(nv, F::one()), x_index(k, a, i), self.rep.gamma[a - 1].clone());
                }
                op
            })
            .collect();
        let first_row: Vec<usize> = (1..=k).map(|i| x_index(k, 1, i)).collect();
        for i in 0..k {
            for j in i + 1..k {
                let ij = apply_op(&truncated[i], &apply_op(&truncated[j], psi)?)?;
                let ji = apply_op(&truncated[j], &apply_op(&truncated[i], psi)?)?;
                if !ij.sub(&ji)?.restrict_zero(&first_row).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `s·[C(r+2n−4, 2n−4) + C(r−1+2n−4, 2n−4)]`, the number of free initial
/// data of degree `r` for the 2-Dirac operator.
pub fn initial_dim_formula(n: usize, k: usize, r: usize) -> Result<usize> {
    if k != 2 {
        return Err(Error::InvalidParameters(format!("initial data count is for k = 2, got k = {k}")));
    }
    if r < 2 {
        return Err(Error::InvalidParameters(format!("need r >= 2, got r = {r}")));
    }
    let p = RepParams::new(n, k)?;
    let d = (2 * n - 4) as u64;
    let r = r as u64;
    Ok(p.s * (binomial(r + d, d) + binomial(r - 1 + d, d)) as usize)
}

/// Solves for the unique monogenic `Ψ = g₁ + t_{2n−2}·g₂ + g` of degree `r`
/// in the chart coordinates. Every monomial of `g` either has degree at
/// least two in `t_{2n−2}, t_{2n−1}, t_{2n}`, or is linear in `t_{2n−1}`,
/// `t_{2n}` and free of `t_{2n−2}`. Without the second kind the system is
/// inconsistent already for `g₁ = t₁²·e`.
pub struct ExtensionSolver<'a, F> {
    sys: &'a EuclideanSystem<F>,
    r: u32,
    tvars: Arc<VariableSet>,
    chart: Matrix<F>,
    t_ops: Vec<DiffOp<F>>,
    system: ConstraintSystem<F>,
}

impl<'a, F: ComplexField> ExtensionSolver<'a, F> {
    pub fn new(sys: &'a EuclideanSystem<F>, r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameters(format!("need r >= 2, got r = {r}")));
        }
        let chart = sys.chart()?;
        let inv = chart.inverse().ok_or(Error::SingularBasis)?;
        let n = sys.n();
        let nt = 2 * n;
        let tvars = Arc::new(VariableSet::uniform((1..=nt).map(|j| format!("t{j}")).collect()));
        // ∂/∂x_{αi} = Σ_j (V⁻¹)_{j,(αi)} ∂/∂t_j
        let t_ops: Vec<DiffOp<F>> = (1..=2)
            .map(|i| {
                let mut op = DiffOp::new(nt, sys.s());
                for j in 0..nt {
                    let mut m = Matrix::zeros(sys.s(), sys.s());
                    for a in 1..=n {
                        let c = inv.get(j, x_index(2, a, i));
                        if !c.is_zero() {
                            m = m.add(&sys.rep.gamma[a - 1].scale(&c));
                        }
                    }
                    op.push(Poly::constant(nt, F::one()), j, m);
                }
                op
            })
            .collect();
        let tail = [nt - 3, nt - 2, nt - 1];
        let source: Vec<_> = monomial_basis(&tvars, r)
            .into_iter()
            .filter(|m| {
                let d: u32 = tail.iter().map(|&v| m[v]).sum();
                d >= 2 || (d == 1 && m[nt - 3] == 0)
            })
            .collect();
        let system = ConstraintSystem::build(&t_ops, &tvars, sys.s(), source)?;
        Ok(ExtensionSolver { sys, r, tvars, chart, t_ops, system })
    }

    /// Variables `t_1..t_{2n}` of the chart.
    pub fn chart_vars(&self) -> &Arc<VariableSet> {
        &self.tvars
    }

    /// Number of unknown coefficients of `g`.
    pub fn unknowns(&self) -> usize {
        self.system.matrix.cols()
    }

    fn check_initial(&self, g: &SpinorPoly<F>, degree: u32) -> Result<()> {
        if g.vars() != &self.tvars {
            return Err(Error::VariableMismatch);
        }
        let nt = self.tvars.len();
        for ((m, _), _) in g.coeffs() {
            if m[nt - 3..].iter().any(|&e| e > 0) {
                return Err(Error::Precondition("initial data may only involve t_1..t_{2n-3}".into()));
            }
            if self.tvars.weighted_degree(m) != degree {
                return Err(Error::Precondition(format!("initial data must be homogeneous of degree {degree}")));
            }
        }
        Ok(())
    }

    /// Extends each `(g₁, g₂)` pair; results are in chart coordinates.
    pub fn extend_many(&self, data: &[(SpinorPoly<F>, SpinorPoly<F>)]) -> Result<Vec<SpinorPoly<F>>> {
        let nt = self.tvars.len();
        let lead = Poly::var(nt, nt - 3);
        let mut heads = Vec::with_capacity(data.len());
        let mut rhs = Vec::with_capacity(data.len());
        for (g1, g2) in data {
            self.check_initial(g1, self.r)?;
            self.check_initial(g2, self.r - 1)?;
            let head = g1.add(&g2.mul_poly(&lead)?)?;
            let images: Vec<SpinorPoly<F>> = self
                .t_ops
                .iter()
                .map(|op| apply_op(op, &head).map(|p| p.scale(&F::from_i64(-1))))
                .collect::<Result<_>>()?;
            let b = self
                .system
                .rhs(&images)
                .ok_or_else(|| Error::Invariant("initial data admits no monogenic extension".into()))?;
            heads.push(head);
            rhs.push(b);
        }
        let solutions = solve_many(&self.system.matrix, &rhs)?;
        let s = self.sys.s();
        heads
            .into_iter()
            .zip(solutions)
            .map(|(head, sol)| {
                let sol = sol.ok_or_else(|| Error::Invariant("initial data admits no monogenic extension".into()))?;
                if sol.freedom != 0 {
                    return Err(Error::Invariant(format!("extension is not unique ({} free parameters)", sol.freedom)));
                }
                let coords: Vec<(usize, F)> =
                    sol.particular.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                let g = SpinorPoly::from_coords(self.tvars.clone(), s, &self.system.source, &coords);
                head.add(&g)
            })
            .collect()
    }

    pub fn extend(&self, g1: &SpinorPoly<F>, g2: &SpinorPoly<F>) -> Result<SpinorPoly<F>> {
        Ok(self.extend_many(&[(g1.clone(), g2.clone())])?.pop().expect("one extension"))
    }

    /// Rewrites a chart polynomial in the `x` variables (`t = V⁻¹x`).
    pub fn to_x(&self, psi: &SpinorPoly<F>) -> Result<SpinorPoly<F>> {
        let inv = self.chart.inverse().ok_or(Error::SingularBasis)?;
        psi.substitute_linear(self.sys.vars.clone(), &inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Field, Q};
    use num_traits::One;

    #[test]
    fn tableau_dims() {
        for (n, k, d) in [(3, 2, 8), (4, 2, 24), (3, 3, 12)] {
            let sys = EuclideanSystem::<Q>::build(n, k).unwrap();
            assert_eq!(sys.tableau().dim(), d);
        }
        assert!(EuclideanSystem::<Q>::build(2, 2).is_err());
        assert!(EuclideanSystem::<Q>::build(3, 1).is_err());
    }

    #[test]
    fn slot_on_linear_spinor() {
        // ∂₁(x_{11}·v) = γ₁v, nonzero for every v ≠ 0.
        let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
        let v = vec![Q::one(), Q::i()];
        let psi = SpinorPoly::monomial_times(sys.vars.clone(), sys.vars.unit(0), &v);
        let out = apply_op(&sys.ops[0], &psi).unwrap();
        let want = SpinorPoly::monomial_times(sys.vars.clone(), sys.vars.one(), &sys.rep.apply(1, &v).unwrap());
        assert_eq!(out, want);
        assert!(!out.is_zero());
    }

    #[test]
    fn chart_n3_matches_table() {
        let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
        let v = sys.chart().unwrap();
        let want = Matrix::<Q>::from_i64(&[
            vec![1, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 0, 1],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 0, 0],
            vec![0, 0, 1, -1, 0, 0],
        ]);
        assert_eq!(v, want);
        assert!(EuclideanSystem::<Q>::build(3, 3).unwrap().chart().is_err());
    }

    #[test]
    fn initial_formula() {
        assert_eq!(initial_dim_formula(3, 2, 2).unwrap(), 18);
        assert_eq!(initial_dim_formula(3, 2, 3).unwrap(), 32);
        assert_eq!(initial_dim_formula(3, 2, 4).unwrap(), 50);
        assert!(initial_dim_formula(3, 2, 1).is_err());
        assert!(initial_dim_formula(3, 3, 2).is_err());
    }

    #[test]
    fn zero_data_extends_to_zero() {
        let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
        let solver = ExtensionSolver::new(&sys, 2).unwrap();
        let z = SpinorPoly::zero(solver.chart_vars().clone(), 2);
        assert!(solver.extend(&z, &z).unwrap().is_zero());
    }

    #[test]
    fn extension_of_t1_squared() {
        let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
        let solver = ExtensionSolver::new(&sys, 2).unwrap();
        let tv = solver.chart_vars().clone();
        let g1 = SpinorPoly::term(tv.clone(), 2, vec![2, 0, 0, 0, 0, 0], 0, Q::one());
        let z = SpinorPoly::zero(tv, 2);
        let psi = solver.extend(&g1, &z).unwrap();
        assert_eq!(psi.coeff(&vec![2, 0, 0, 0, 0, 0], 0), Q::one());
        assert!(sys.is_monogenic(&solver.to_x(&psi).unwrap()).unwrap());
    }

    #[test]
    fn restriction_check_on_constants() {
        let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
        let c = SpinorPoly::monomial_times(sys.vars.clone(), sys.vars.one(), &[Q::one(), Q::from_i64(3)]);
        assert!(sys.restriction_commutator_check(&c).unwrap());
        let bad = SpinorPoly::term(sys.vars.clone(), 2, sys.vars.unit(0), 0, Q::one());
        assert_eq!(sys.restriction_commutator_check(&bad), Err(Error::NotMonogenic));
    }
}
