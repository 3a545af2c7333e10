//! The parabolic k-Dirac operator `D_i = Σ_α γ_α L_{αi}` on
//! `M(n, k, R) × A(k, R)` with coordinates `(x_{αi}, y_{rs})`, `r < s`.
//!
//! The left-invariant fields are `L_{αi} = ∂_{αi} − ½ Σ_j x_{αj} ∂_{ij}`,
//! where `∂_{ij} = ∂/∂y_{ij}` for `i < j`, `∂_{ij} = −∂_{ji}` and
//! `∂_{ii} = 0`. With this sign `[L_{αi}, L_{βj}] = δ_{αβ} ∂_{ij}`.

use std::sync::Arc;

use crate::clifford::{CliffordRep, RepParams};
use crate::error::{Error, Result};
use crate::euclidean::{x_index, x_names, EuclideanSystem};
use crate::linalg::{solve_many, SubspaceBasis};
use crate::poly::{apply_op, monomial_basis, solution_space, ConstraintSystem, DiffOp, Poly, SpinorPoly, VariableSet};
use crate::scalar::ComplexField;
use crate::tableau::{basis_grades, symmetric_graded_dims, OrderedBasis, Tableau};
use crate::{binomial, linalg::Matrix};

/// Index of `y_{rs}` (1-based, `r < s`) among the variables.
pub fn y_index(n: usize, k: usize, r: usize, s: usize) -> usize {
    let (r0, s0) = (r - 1, s - 1);
    n * k + r0 * (2 * k - r0 - 1) / 2 + (s0 - r0 - 1)
}

#[derive(Clone, Debug)]
pub struct ParabolicSystem<F> {
    pub params: RepParams,
    pub rep: CliffordRep<F>,
    /// `x_{αi}` (weight 1) followed by `y_{rs}` (weight 2).
    pub vars: Arc<VariableSet>,
    /// The Euclidean operator on the `x` variables alone.
    pub euclid: EuclideanSystem<F>,
    /// Scalar fields `L_{αi}`, index `(α−1)k + (i−1)`, spinor dimension 1.
    pub lfields: Vec<DiffOp<F>>,
    pub ops: Vec<DiffOp<F>>,
}

impl<F: ComplexField> ParabolicSystem<F> {
    pub fn build(n: usize, k: usize) -> Result<Self> {
        let params = RepParams::new(n, k)?;
        let euclid = EuclideanSystem::build(n, k)?;
        let rep = euclid.rep.clone();
        let mut names = x_names(n, k);
        let mut weights = vec![1; n * k];
        for r in 1..=k {
            for s in r + 1..=k {
                names.push(format!("y{r}_{s}"));
                weights.push(2);
            }
        }
        let vars = Arc::new(VariableSet::new(names, weights)?);
        let nv = vars.len();

        let mut lfields = Vec::with_capacity(n * k);
        let mut ops: Vec<DiffOp<F>> = (0..k).map(|_| DiffOp::new(nv, params.s)).collect();
        for a in 1..=n {
            for i in 1..=k {
                let terms = Self::lfield_terms(n, k, a, i);
                let mut l = DiffOp::new(nv, 1);
                for (c, var) in &terms {
                    l.push(c.clone(), *var, Matrix::identity(1));
                    ops[i - 1].push(c.clone(), *var, rep.gamma[a - 1].clone());
                }
                lfields.push(l);
            }
        }
        Ok(ParabolicSystem { params, rep, vars, euclid, lfields, ops })
    }

    /// `(coefficient, variable)` pairs of `L_{αi}`.
    fn lfield_terms(n: usize, k: usize, a: usize, i: usize) -> Vec<(Poly<F>, usize)> {
        let nv = n * k + k * (k - 1) / 2;
        let half = F::from_i64(1).div_ref(&F::from_i64(2));
        let mut terms = vec![(Poly::constant(nv, F::one()), x_index(k, a, i))];
        for j in 1..=k {
            if j == i {
                continue;
            }
            // −½ x_{αj} ∂_{ij}, with ∂_{ij} = ±∂/∂y_{min,max}.
            let (var, sign) = if i < j { (y_index(n, k, i, j), -1) } else { (y_index(n, k, j, i), 1) };
            let coeff = Poly::var(nv, x_index(k, a, j)).scale(&half.mul_ref(&F::from_i64(sign)));
            terms.push((coeff, var));
        }
        terms
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

    pub fn lfield(&self, alpha: usize, i: usize) -> &DiffOp<F> {
        &self.lfields[x_index(self.k(), alpha, i)]
    }

    /// The scalar operator `∂_{ij}` (1-based, any order).
    pub fn d_y(&self, i: usize, j: usize) -> DiffOp<F> {
        let nv = self.vars.len();
        let mut op = DiffOp::new(nv, 1);
        if i != j {
            let (var, sign) =
                if i < j { (y_index(self.n(), self.k(), i, j), 1) } else { (y_index(self.n(), self.k(), j, i), -1) };
            op.push(Poly::constant(nv, F::from_i64(sign)), var, Matrix::identity(1));
        }
        op
    }

    /// Verifies `[L_{αi}, L_{βj}] = δ_{αβ} ∂_{ij}` on every monomial of
    /// weighted degree at most `max_weight`. Returns the number of
    /// (pair, monomial) checks performed.
    pub fn bracket_check(&self, max_weight: u32) -> Result<usize> {
        let (n, k) = (self.n(), self.k());
        let monos: Vec<_> = (0..=max_weight).flat_map(|w| monomial_basis(&self.vars, w)).collect();
        let mut checked = 0;
        for a in 1..=n {
            for i in 1..=k {
                for b in 1..=n {
                    for j in 1..=k {
                        let (la, lb) = (self.lfield(a, i), self.lfield(b, j));
                        let expected = if a == b { self.d_y(i, j) } else { DiffOp::new(self.vars.len(), 1) };
                        for m in &monos {
                            let p = SpinorPoly::term(self.vars.clone(), 1, m.clone(), 0, F::one());
                            let ab = apply_op(la, &apply_op(lb, &p)?)?;
                            let ba = apply_op(lb, &apply_op(la, &p)?)?;
                            if ab.sub(&ba)? != apply_op(&expected, &p)? {
                                return Err(Error::Invariant(format!(
                                    "[L_{a}{i}, L_{b}{j}] differs on {}",
                                    self.vars.format_monomial(m)
                                )));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Weighted-homogeneous solutions of `D_iψ = 0` of weighted degree `r`.
    pub fn weighted_monogenic_space(&self, r: u32) -> Result<SubspaceBasis<F>> {
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

    /// The symbol tableau `E⊗T ⊕ Λ²E⊗Sp`; `V*` is indexed by the variables.
    pub fn tableau(&self) -> Tableau<F> {
        Tableau::symbol_of(&self.ops)
    }

    /// Grade of each `V*` coordinate: 0 for `x`, 1 for `y`.
    pub fn y_grades(&self) -> Vec<usize> {
        (0..self.vars.len()).map(|v| usize::from(v >= self.n() * self.k())).collect()
    }

    /// `x_{1·}, …, x_{n−1,·}`, then the `y_{rs}`, then `x_{n·}`.
    pub fn level0_ordering(&self) -> OrderedBasis<F> {
        let (n, k) = (self.n(), self.k());
        let nv = self.vars.len();
        let mut order: Vec<usize> = (0..(n - 1) * k).collect();
        order.extend(n * k..nv);
        order.extend((n - 1) * k..n * k);
        let rows: Vec<Vec<(usize, F)>> = order.into_iter().map(|v| vec![(v, F::one())]).collect();
        OrderedBasis::from_covectors(Matrix::from_entries(nv, rows), "paper").expect("a permutation is invertible")
    }

    /// `e₁∧e₂` first, then the Euclidean chart ordering (k = 2 only).
    pub fn level1_ordering(&self) -> Result<OrderedBasis<F>> {
        let chart = self.euclid.chart()?;
        let nv = self.vars.len();
        let mut frame = Vec::with_capacity(nv);
        let mut y = vec![F::zero(); nv];
        y[nv - 1] = F::one();
        frame.push(y);
        for j in 0..chart.cols() {
            let mut b = vec![F::zero(); nv];
            for (r, slot) in b.iter_mut().enumerate().take(chart.rows()) {
                *slot = chart.get(r, j);
            }
            frame.push(b);
        }
        OrderedBasis::from_frame(&frame, "paper")
    }

    fn require_k2(&self) -> Result<()> {
        if self.k() != 2 {
            return Err(Error::InvalidParameters(format!("decomposition needs k = 2, got k = {}", self.k())));
        }
        Ok(())
    }

    /// Dimensions of the pieces of `A^(1)` with 0, 1, 2 factors from `Λ²E`.
    pub fn prolongation_decomposition(&self) -> Result<Vec<usize>> {
        self.require_k2()?;
        let t = self.tableau();
        let raw = t.prolong().raw;
        symmetric_graded_dims(&raw, &self.y_grades(), &vec![0; t.dim_w()])
    }

    /// Dimensions of the pieces of `A^(2)` with 0..3 factors from `Λ²E`.
    pub fn second_prolongation_decomposition(&self) -> Result<Vec<usize>> {
        self.require_k2()?;
        let gv = self.y_grades();
        let t = self.tableau();
        let gw = basis_grades(&t, &gv, &vec![0; t.dim_w()])?;
        let raw = t.prolong_lifted().prolong().raw;
        symmetric_graded_dims(&raw, &gv, &gw)
    }

    /// Given a Euclidean monogenic `psi` and a homogeneous polynomial `g` of
    /// degree `l` in the `y` variables, finds a parabolic monogenic
    /// `Ψ = g·psi + h` of weighted degree `r + 2l` where every monomial of
    /// `h` has `y`-degree below `l`.
    pub fn lift_check(&self, psi: &SpinorPoly<F>, g: &Poly<F>) -> Result<SpinorPoly<F>> {
        Ok(self.lift_many(std::slice::from_ref(psi), g)?.pop().expect("one lift"))
    }

    /// [`Self::lift_check`] for several `psi` of one degree, sharing the
    /// linear system.
    pub fn lift_many(&self, psis: &[SpinorPoly<F>], g: &Poly<F>) -> Result<Vec<SpinorPoly<F>>> {
        let nk = self.n() * self.k();
        if g.nvars() != self.vars.len() {
            return Err(Error::VariableMismatch);
        }
        let y_degree = |m: &Vec<u32>| m[nk..].iter().sum::<u32>();
        let mut ls = g.terms().map(|(m, _)| {
            if m[..nk].iter().any(|&e| e > 0) {
                Err(Error::Precondition("g may only involve y variables".into()))
            } else {
                Ok(y_degree(m))
            }
        });
        let l = match ls.next() {
            None => return Ok(vec![SpinorPoly::zero(self.vars.clone(), self.s()); psis.len()]),
            Some(l) => l?,
        };
        for other in ls {
            if other? != l {
                return Err(Error::Precondition("g must be homogeneous".into()));
            }
        }
        let mut degree = None;
        for psi in psis {
            if !self.euclid.is_monogenic(psi)? {
                return Err(Error::NotMonogenic);
            }
            match (psi.homogeneous_degree(), degree) {
                (None, _) if psi.is_zero() => {}
                (None, _) => return Err(Error::Precondition("psi must be homogeneous".into())),
                (Some(r), None) => degree = Some(r),
                (Some(r), Some(d)) if r != d => {
                    return Err(Error::Precondition("all psi must share one degree".into()));
                }
                _ => {}
            }
        }
        let r = degree.unwrap_or(0);

        let x_map: Vec<usize> = (0..nk).collect();
        let mut leads = Vec::with_capacity(psis.len());
        let mut images = Vec::with_capacity(psis.len());
        for psi in psis {
            let lead = psi.embed(self.vars.clone(), &x_map)?.mul_poly(g)?;
            let img: Vec<SpinorPoly<F>> = self
                .ops
                .iter()
                .map(|op| apply_op(op, &lead).map(|p| p.scale(&F::from_i64(-1))))
                .collect::<Result<_>>()?;
            leads.push(lead);
            images.push(img);
        }
        let missing = || Error::Invariant("no parabolic monogenic lift exists".into());
        let lifts = if images.iter().flatten().all(|p| p.is_zero()) {
            leads
        } else {
            let source: Vec<_> =
                monomial_basis(&self.vars, r + 2 * l).into_iter().filter(|m| y_degree(m) < l).collect();
            let system = ConstraintSystem::build(&self.ops, &self.vars, self.s(), source)?;
            let rhs: Vec<Vec<F>> = images.iter().map(|img| system.rhs(img).ok_or_else(missing)).collect::<Result<_>>()?;
            let sols = solve_many(&system.matrix, &rhs)?;
            leads
                .into_iter()
                .zip(sols)
                .map(|(lead, sol)| {
                    let sol = sol.ok_or_else(missing)?;
                    let coords: Vec<(usize, F)> =
                        sol.particular.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
                    lead.add(&SpinorPoly::from_coords(self.vars.clone(), self.s(), &system.source, &coords))
                })
                .collect::<Result<_>>()?
        };
        for lifted in &lifts {
            if !self.is_monogenic(lifted)? {
                return Err(Error::Invariant("lift is not parabolic monogenic".into()));
            }
        }
        Ok(lifts)
    }
}

/// `s·C(k(n−1) + C(k,2) + 1, 2) − s·C(k,2)`.
pub fn prolongation_dim_formula(n: usize, k: usize) -> usize {
    let s = 1usize << (n / 2);
    let kk = binomial(k as u64, 2) as usize;
    s * binomial((k * (n - 1) + kk + 1) as u64, 2) as usize - s * kk
}

/// `s(2n−1)(4n²+2n−6)/6`, the Cartan bound at the first prolongation for
/// k = 2.
pub fn level1_rhs_formula(n: usize) -> usize {
    let s = 1usize << (n / 2);
    s * (2 * n - 1) * (4 * n * n + 2 * n - 6) / 6
}
