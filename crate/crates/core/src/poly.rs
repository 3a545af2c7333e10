//! Spinor-valued polynomials, weighted gradings, first-order differential
//! operators with polynomial coefficients, and polynomial solution spaces.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix, SubspaceBasis};
use crate::scalar::Field;

/// Exponent vector of a monomial, indexed like its [`VariableSet`].
pub type Monomial = Vec<u32>;

/// Named variables with positive integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSet {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl VariableSet {
    pub fn new(names: Vec<String>, weights: Vec<u32>) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: names.len(), found: weights.len() });
        }
        if weights.contains(&0) {
            return Err(Error::InvalidParameters("variable weights must be positive".into()));
        }
        Ok(VariableSet { names, weights })
    }

    /// All weights equal to one.
    pub fn uniform(names: Vec<String>) -> Self {
        let weights = vec![1; names.len()];
        VariableSet { names, weights }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, var: usize) -> u32 {
        self.weights[var]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weighted_degree(&self, mono: &[u32]) -> u32 {
        mono.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    pub fn unit(&self, var: usize) -> Monomial {
        let mut m = vec![0; self.len()];
        m[var] = 1;
        m
    }

    pub fn one(&self) -> Monomial {
        vec![0; self.len()]
    }

    pub fn format_monomial(&self, mono: &[u32]) -> String {
        let parts: Vec<String> = mono
            .iter()
            .zip(&self.names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of the given weighted degree, in descending lexicographic
/// order of exponent vectors (so `x₁²` precedes `x₁x₂`).
pub fn monomial_basis(vars: &VariableSet, weighted_degree: u32) -> Vec<Monomial> {
    fn rec(vars: &VariableSet, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == vars.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = vars.weight(i);
        for e in (0..=left / w).rev() {
            cur[i] = e;
            rec(vars, i + 1, left - e * w, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(vars, 0, weighted_degree, &mut vec![0; vars.len()], &mut out);
    out
}

/// Sort key for the descending lexicographic monomial order.
pub fn monomial_order_key(m: &Monomial) -> Reverse<&Monomial> {
    Reverse(m)
}

/// A scalar polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn monomial(mono: Monomial, c: F) -> Self {
        let nvars = mono.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut m = vec![0; nvars];
        m[var] = 1;
        Self::monomial(m, F::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, c: F) {
        add_into(&mut self.terms, mono, c);
    }

    pub fn add(&self, other: &Poly<F>) -> Poly<F> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &F) -> Poly<F> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul_ref(k));
        }
        out
    }

    pub fn mul(&self, other: &Poly<F>) -> Poly<F> {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly<F> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some((dm, k)) = mono_derivative(m, var) {
                out.add_term(dm, c.mul_ref(&F::from_i64(k as i64)));
            }
        }
        out
    }

    /// The weighted degree shared by all terms, or `None` if inhomogeneous
    /// (zero counts as homogeneous of every degree and returns `None` too).
    pub fn homogeneous_degree(&self, vars: &VariableSet) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| vars.weighted_degree(m));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }
}

fn add_into<K: Ord, F: Field>(map: &mut BTreeMap<K, F>, key: K, c: F) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let v = e.get().add_ref(&c);
            if v.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = v;
            }
        }
    }
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn mono_derivative(m: &[u32], var: usize) -> Option<(Monomial, u32)> {
    let e = m[var];
    if e == 0 {
        return None;
    }
    let mut d = m.to_vec();
    d[var] -= 1;
    Some((d, e))
}

/// A polynomial map from the variables into the spinor space `F^s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorPoly<F> {
    vars: Arc<VariableSet>,
    spinor_dim: usize,
    coeffs: BTreeMap<(Monomial, usize), F>,
}

impl<F: Field> SpinorPoly<F> {
    pub fn zero(vars: Arc<VariableSet>, spinor_dim: usize) -> Self {
        SpinorPoly { vars, spinor_dim, coeffs: BTreeMap::new() }
    }

    /// `c · mono · e_component`.
    pub fn term(vars: Arc<VariableSet>, spinor_dim: usize, mono: Monomial, component: usize, c: F) -> Self {
        let mut p = Self::zero(vars, spinor_dim);
        p.add_term(mono, component, c);
        p
    }

    /// `mono ⊗ v` for a spinor `v`.
    pub fn monomial_times(vars: Arc<VariableSet>, mono: Monomial, v: &[F]) -> Self {
        let mut p = Self::zero(vars, v.len());
        for (mu, c) in v.iter().enumerate() {
            p.add_term(mono.clone(), mu, c.clone());
        }
        p
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(Monomial, usize), &F)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, mono: &Monomial, component: usize) -> F {
        self.coeffs.get(&(mono.clone(), component)).cloned().unwrap_or_else(F::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, mono: Monomial, component: usize, c: F) {
        assert_eq!(mono.len(), self.vars.len(), "exponent vector size");
        assert!(component < self.spinor_dim, "spinor component out of range");
        add_into(&mut self.coeffs, (mono, component), c);
    }

    fn check_compatible(&self, other: &SpinorPoly<F>) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        if self.spinor_dim != other.spinor_dim {
            return Err(Error::DimensionMismatch { expected: self.spinor_dim, found: other.spinor_dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &SpinorPoly<F>) -> Result<SpinorPoly<F>> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for ((m, mu), c) in &other.coeffs {
            out.add_term(m.clone(), *mu, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SpinorPoly<F>) -> Result<SpinorPoly<F>> {
        self.add(&other.scale(&F::from_i64(-1)))
    }

    pub fn scale(&self, k: &F) -> SpinorPoly<F> {
        let mut out = SpinorPoly::zero(self.vars.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            out.add_term(m.clone(), *mu, c.mul_ref(k));
        }
        out
    }

    /// Multiplication by a scalar polynomial.
    pub fn mul_poly(&self, p: &Poly<F>) -> Result<SpinorPoly<F>> {
        if p.nvars() != self.vars.len() {
            return Err(Error::VariableMismatch);
        }
        let mut out = SpinorPoly::zero(self.vars.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            for (pm, pc) in p.terms() {
                out.add_term(mono_mul(m, pm), *mu, c.mul_ref(pc));
            }
        }
        Ok(out)
    }

    pub fn derivative(&self, var: usize) -> SpinorPoly<F> {
        let mut out = SpinorPoly::zero(self.vars.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            if let Some((dm, k)) = mono_derivative(m, var) {
                out.add_term(dm, *mu, c.mul_ref(&F::from_i64(k as i64)));
            }
        }
        out
    }

    /// Applies an `s × s` matrix to the spinor index.
    pub fn apply_matrix(&self, a: &Matrix<F>) -> Result<SpinorPoly<F>> {
        if a.cols() != self.spinor_dim || a.rows() != self.spinor_dim {
            return Err(Error::DimensionMismatch { expected: self.spinor_dim, found: a.cols() });
        }
        let at = a.transpose();
        let mut out = SpinorPoly::zero(self.vars.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            for (nu, v) in at.row(*mu) {
                out.add_term(m.clone(), *nu, v.mul_ref(c));
            }
        }
        Ok(out)
    }

    /// Drops every term containing one of the given variables, i.e. restricts
    /// to the subspace where they vanish.
    pub fn restrict_zero(&self, vars: &[usize]) -> SpinorPoly<F> {
        let mut out = SpinorPoly::zero(self.vars.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            if vars.iter().all(|&v| m[v] == 0) {
                out.add_term(m.clone(), *mu, c.clone());
            }
        }
        out
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.coeffs.keys().map(|(m, _)| self.vars.weighted_degree(m));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Moves the polynomial into a larger variable set. `map[j]` is the index
    /// of old variable `j` in `target`.
    pub fn embed(&self, target: Arc<VariableSet>, map: &[usize]) -> Result<SpinorPoly<F>> {
        if map.len() != self.vars.len() {
            return Err(Error::VariableMismatch);
        }
        let mut out = SpinorPoly::zero(target.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            let mut nm = vec![0; target.len()];
            for (j, e) in m.iter().enumerate() {
                nm[map[j]] += e;
            }
            out.add_term(nm, *mu, c.clone());
        }
        Ok(out)
    }

    /// Linear change of variables: old variable `j` becomes the linear form
    /// `Σ_l forms[j][l]·y_l` in the variables of `target`.
    pub fn substitute_linear(&self, target: Arc<VariableSet>, forms: &Matrix<F>) -> Result<SpinorPoly<F>> {
        if forms.rows() != self.vars.len() || forms.cols() != target.len() {
            return Err(Error::VariableMismatch);
        }
        let nt = target.len();
        let mut cache: HashMap<(usize, u32), Poly<F>> = HashMap::new();
        let mut power = |j: usize, e: u32| -> Poly<F> {
            cache
                .entry((j, e))
                .or_insert_with(|| {
                    let mut lin = Poly::zero(nt);
                    for (l, v) in forms.row(j) {
                        lin.add_term(Poly::<F>::var(nt, *l).terms.into_keys().next().unwrap(), v.clone());
                    }
                    (0..e).fold(Poly::constant(nt, F::one()), |acc, _| acc.mul(&lin))
                })
                .clone()
        };
        let mut out = SpinorPoly::zero(target.clone(), self.spinor_dim);
        for ((m, mu), c) in &self.coeffs {
            let mut prod = Poly::constant(nt, c.clone());
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&power(j, e));
                }
            }
            for (pm, pc) in prod.terms {
                out.add_term(pm, *mu, pc);
            }
        }
        Ok(out)
    }

    /// Coordinates with respect to `(monomial index, component)`; `None` if
    /// a term lies outside the given monomial list.
    pub fn to_coords(&self, monos: &[Monomial]) -> Option<Vec<(usize, F)>> {
        let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for ((m, mu), c) in &self.coeffs {
            let i = index.get(m)?;
            v.push((i * self.spinor_dim + mu, c.clone()));
        }
        v.sort_by_key(|e| e.0);
        Some(v)
    }

    pub fn from_coords(vars: Arc<VariableSet>, spinor_dim: usize, monos: &[Monomial], coords: &[(usize, F)]) -> Self {
        let mut p = SpinorPoly::zero(vars, spinor_dim);
        for (idx, c) in coords {
            p.add_term(monos[idx / spinor_dim].clone(), idx % spinor_dim, c.clone());
        }
        p
    }
}

/// One term `matrix ∘ (coeff · ∂_var)` of a first-order operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTerm<F> {
    pub coeff: Poly<F>,
    pub var: usize,
    pub matrix: Matrix<F>,
}

/// A first-order linear differential operator with polynomial coefficients
/// acting on spinor-valued polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<F> {
    nvars: usize,
    spinor_dim: usize,
    terms: Vec<DiffTerm<F>>,
}

impl<F: Field> DiffOp<F> {
    pub fn new(nvars: usize, spinor_dim: usize) -> Self {
        DiffOp { nvars, spinor_dim, terms: Vec::new() }
    }

    /// Adds `matrix ∘ (coeff · ∂_var)`; a zero matrix or coefficient is
    /// skipped.
    pub fn push(&mut self, coeff: Poly<F>, var: usize, matrix: Matrix<F>) {
        assert_eq!(coeff.nvars(), self.nvars, "coefficient variable count");
        assert!(var < self.nvars, "derivative variable out of range");
        assert_eq!((matrix.rows(), matrix.cols()), (self.spinor_dim, self.spinor_dim), "term matrix shape");
        if matrix.is_zero() || coeff.is_zero() {
            return;
        }
        self.terms.push(DiffTerm { coeff, var, matrix });
    }

    pub fn terms(&self) -> &[DiffTerm<F>] {
        &self.terms
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    /// The shift in weighted degree shared by all terms, if any.
    pub fn degree_shift(&self, vars: &VariableSet) -> Result<Option<i64>> {
        let mut shift: Option<i64> = None;
        for t in &self.terms {
            for (m, _) in t.coeff.terms() {
                let d = vars.weighted_degree(m) as i64 - vars.weight(t.var) as i64;
                match shift {
                    None => shift = Some(d),
                    Some(s) if s != d => {
                        return Err(Error::GradingViolation(format!("terms shift degree by {s} and {d}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(shift)
    }

    /// The terms with constant coefficients.
    pub fn constant_part(&self) -> impl Iterator<Item = (usize, F, &Matrix<F>)> {
        self.terms.iter().filter_map(|t| {
            let mut it = t.coeff.terms();
            let (m, c) = it.next()?;
            (it.next().is_none() && m.iter().all(|&e| e == 0)).then(|| (t.var, c.clone(), &t.matrix))
        })
    }
}

/// Applies a differential operator to a spinor polynomial.
pub fn apply_op<F: Field>(op: &DiffOp<F>, p: &SpinorPoly<F>) -> Result<SpinorPoly<F>> {
    if op.nvars != p.vars.len() {
        return Err(Error::VariableMismatch);
    }
    if op.spinor_dim != p.spinor_dim {
        return Err(Error::DimensionMismatch { expected: op.spinor_dim, found: p.spinor_dim });
    }
    let mut out = SpinorPoly::zero(p.vars.clone(), p.spinor_dim);
    for t in &op.terms {
        let d = p.derivative(t.var);
        if d.is_zero() {
            continue;
        }
        let d = d.mul_poly(&t.coeff)?.apply_matrix(&t.matrix)?;
        for ((m, mu), c) in d.coeffs {
            out.add_term(m, mu, c);
        }
    }
    Ok(out)
}

/// The linear system `op_i(p) = 0` with `p` ranging over the span of
/// `source × spinor components`. Rows are ordered by (operator, target
/// monomial in basis order, component), columns by (source monomial,
/// component).
#[derive(Clone, Debug)]
pub struct ConstraintSystem<F> {
    pub matrix: Matrix<F>,
    pub source: Vec<Monomial>,
    spinor_dim: usize,
    row_of: HashMap<(usize, Monomial, usize), usize>,
}

impl<F: Field> ConstraintSystem<F> {
    pub fn build(ops: &[DiffOp<F>], vars: &Arc<VariableSet>, spinor_dim: usize, source: Vec<Monomial>) -> Result<Self> {
        for op in ops {
            if op.nvars != vars.len() {
                return Err(Error::VariableMismatch);
            }
            if op.spinor_dim != spinor_dim {
                return Err(Error::DimensionMismatch { expected: spinor_dim, found: op.spinor_dim });
            }
        }
        let mut entries: Vec<((usize, Monomial, usize), usize, F)> = Vec::new();
        for (si, m) in source.iter().enumerate() {
            for mu in 0..spinor_dim {
                let col = si * spinor_dim + mu;
                let p = SpinorPoly::term(vars.clone(), spinor_dim, m.clone(), mu, F::one());
                for (i, op) in ops.iter().enumerate() {
                    let img = apply_op(op, &p)?;
                    for ((tm, nu), c) in img.coeffs {
                        entries.push(((i, tm, nu), col, c));
                    }
                }
            }
        }
        let mut keys: Vec<&(usize, Monomial, usize)> = entries.iter().map(|e| &e.0).collect();
        keys.sort_by(|a, b| (a.0, Reverse(&a.1), a.2).cmp(&(b.0, Reverse(&b.1), b.2)));
        keys.dedup();
        let row_of: HashMap<(usize, Monomial, usize), usize> =
            keys.into_iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut rows: Vec<Vec<(usize, F)>> = vec![Vec::new(); row_of.len()];
        for (key, col, c) in entries {
            rows[row_of[&key]].push((col, c));
        }
        let matrix = Matrix::from_entries(source.len() * spinor_dim, rows);
        Ok(ConstraintSystem { matrix, source, spinor_dim, row_of })
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    /// Right-hand side vector for `op_i(p) = images[i]`. `None` when an image
    /// has a term that no source monomial can reach (the system is then
    /// inconsistent unless that term is zero, which it is not).
    pub fn rhs(&self, images: &[SpinorPoly<F>]) -> Option<Vec<F>> {
        let mut b = vec![F::zero(); self.matrix.rows()];
        for (i, img) in images.iter().enumerate() {
            for ((m, mu), c) in &img.coeffs {
                let r = *self.row_of.get(&(i, m.clone(), *mu))?;
                b[r] = c.clone();
            }
        }
        Some(b)
    }

    pub fn solutions(&self) -> SubspaceBasis<F> {
        kernel(&self.matrix)
    }
}

/// Canonical basis of the homogeneous polynomial solutions of weighted
/// degree `weighted_degree`, in coordinates `(monomial index, component)`
/// over [`monomial_basis`].
pub fn solution_space<F: Field>(
    ops: &[DiffOp<F>],
    vars: &Arc<VariableSet>,
    spinor_dim: usize,
    weighted_degree: u32,
) -> Result<SubspaceBasis<F>> {
    for op in ops {
        match op.degree_shift(vars)? {
            Some(d) if d >= 0 => {
                return Err(Error::GradingViolation(format!("operator raises weighted degree by {d}")));
            }
            _ => {}
        }
    }
    let source = monomial_basis(vars, weighted_degree);
    Ok(ConstraintSystem::build(ops, vars, spinor_dim, source)?.solutions())
}

/// Converts a solution-space basis vector back into a polynomial.
pub fn basis_poly<F: Field>(
    space: &SubspaceBasis<F>,
    i: usize,
    vars: &Arc<VariableSet>,
    spinor_dim: usize,
    weighted_degree: u32,
) -> SpinorPoly<F> {
    let monos = monomial_basis(vars, weighted_degree);
    SpinorPoly::from_coords(vars.clone(), spinor_dim, &monos, &space.rows()[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn xyz() -> Arc<VariableSet> {
        Arc::new(VariableSet::uniform(vec!["x".into(), "y".into(), "z".into()]))
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_basis(&xyz(), 2).len(), 6);
        assert_eq!(monomial_basis(&xyz(), 3).len(), 10);
        assert_eq!(monomial_basis(&xyz(), 0), vec![vec![0, 0, 0]]);
        let b = monomial_basis(&xyz(), 2);
        assert_eq!(b[0], vec![2, 0, 0]);
        assert_eq!(b[1], vec![1, 1, 0]);
        assert_eq!(*b.last().unwrap(), vec![0, 0, 2]);
    }

    #[test]
    fn weighted_monomials() {
        let v = VariableSet::new(vec!["x".into(), "y".into()], vec![1, 2]).unwrap();
        assert_eq!(monomial_basis(&v, 2), vec![vec![2, 0], vec![0, 1]]);
        assert!(VariableSet::new(vec!["x".into()], vec![0]).is_err());
    }

    #[test]
    fn derivative_of_square() {
        let vars = xyz();
        let mut op = DiffOp::<Q>::new(3, 1);
        op.push(Poly::constant(3, Q::one()), 0, Matrix::identity(1));
        let p = SpinorPoly::term(vars.clone(), 1, vec![2, 0, 0], 0, Q::one());
        let want = SpinorPoly::term(vars.clone(), 1, vec![1, 0, 0], 0, Q::from_i64(2));
        assert_eq!(apply_op(&op, &p).unwrap(), want);
        let c = SpinorPoly::term(vars, 1, vec![0, 3, 1], 0, Q::one());
        assert!(apply_op(&op, &c).unwrap().is_zero());
    }

    #[test]
    fn mismatches_rejected() {
        let op = DiffOp::<Q>::new(2, 1);
        let p = SpinorPoly::term(xyz(), 1, vec![1, 0, 0], 0, Q::one());
        assert_eq!(apply_op(&op, &p), Err(Error::VariableMismatch));
        let mut raising = DiffOp::<Q>::new(3, 1);
        raising.push(Poly::monomial(vec![2, 0, 0], Q::one()), 0, Matrix::identity(1));
        assert!(matches!(solution_space(&[raising], &xyz(), 1, 2), Err(Error::GradingViolation(_))));
    }

    #[test]
    fn linear_substitution() {
        // (x + y)^2 with x = u + v, y = u - v gives 4u^2.
        let vars = Arc::new(VariableSet::uniform(vec!["x".into(), "y".into()]));
        let uv = Arc::new(VariableSet::uniform(vec!["u".into(), "v".into()]));
        let mut p = SpinorPoly::<Q>::zero(vars, 1);
        p.add_term(vec![2, 0], 0, Q::one());
        p.add_term(vec![1, 1], 0, Q::from_i64(2));
        p.add_term(vec![0, 2], 0, Q::one());
        let forms = Matrix::from_i64(&[vec![1, 1], vec![1, -1]]);
        let q = p.substitute_linear(uv.clone(), &forms).unwrap();
        assert_eq!(q, SpinorPoly::term(uv, 1, vec![2, 0], 0, Q::from_i64(4)));
    }

    #[test]
    fn laplace_like_kernel() {
        // ∂_x p = 0 in degree 2 over {x, y, z}: monomials free of x.
        let mut op = DiffOp::<Q>::new(3, 1);
        op.push(Poly::constant(3, Q::one()), 0, Matrix::identity(1));
        let sol = solution_space(&[op], &xyz(), 1, 2).unwrap();
        assert_eq!(sol.dim(), 3);
    }

    fn arb_poly(vars: Arc<VariableSet>) -> impl Strategy<Value = SpinorPoly<Q>> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u32..3, 0usize..2, -3i64..4), 0..6).prop_map(move |ts| {
            let mut p = SpinorPoly::zero(vars.clone(), 2);
            for (a, b, c, mu, k) in ts {
                p.add_term(vec![a, b, c], mu, Q::from_i64(k));
            }
            p
        })
    }

    fn arb_op() -> impl Strategy<Value = DiffOp<Q>> {
        proptest::collection::vec((0usize..3, 0usize..3, -2i64..3, -2i64..3), 1..4).prop_map(|ts| {
            let mut op = DiffOp::new(3, 2);
            for (cv, var, a, b) in ts {
                let mat = Matrix::from_dense(2, &[vec![Q::from_i64(a), Q::i()], vec![Q::from_i64(b), Q::zero()]]);
                op.push(Poly::var(3, cv), var, mat);
            }
            op
        })
    }

    proptest! {
        #[test]
        fn apply_op_is_linear(op in arb_op(), p in arb_poly(xyz()), q in arb_poly(xyz()), k in -3i64..4) {
            let a = Q::from_i64(k) + Q::i();
            let lhs = apply_op(&op, &p.scale(&a).add(&q).unwrap()).unwrap();
            let rhs = apply_op(&op, &p).unwrap().scale(&a).add(&apply_op(&op, &q).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partials_commute(p in arb_poly(xyz()), i in 0usize..3, j in 0usize..3) {
            prop_assert_eq!(p.derivative(i).derivative(j), p.derivative(j).derivative(i));
        }
    }
}
