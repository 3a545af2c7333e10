//! Root systems of type A, B, D and the Weyl dimension formula
//! `dim V_λ = Π⟨ρ+λ, α⟩ / Π⟨ρ, α⟩`, with the standard Euclidean pairing on
//! weight coordinates.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::{binomial, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    A,
    B,
    D,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub positive_roots: Vec<Vec<Rational>>,
    simple_roots: Vec<Vec<Rational>>,
}

fn unit(dim: usize, i: usize, c: i64) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = Rational::from_integer(BigInt::from(c));
    v
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn pair(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootSystem {
    /// `A_rank`, realised in `rank + 1` coordinates.
    pub fn a(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameters("A_0 has no roots".into()));
        }
        let d = rank + 1;
        let diff = |i, j| add(&unit(d, i, 1), &unit(d, j, -1));
        let positive_roots = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).map(|(i, j)| diff(i, j)).collect();
        let simple_roots = (0..rank).map(|i| diff(i, i + 1)).collect();
        Ok(RootSystem { family: Family::A, rank, positive_roots, simple_roots })
    }

    /// `B_m`: roots `e_i ± e_j` and `e_i`.
    pub fn b(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("B_0 has no roots".into()));
        }
        let mut positive_roots = Self::pm_roots(m);
        positive_roots.extend((0..m).map(|i| unit(m, i, 1)));
        let mut simple_roots: Vec<_> = (0..m - 1).map(|i| add(&unit(m, i, 1), &unit(m, i + 1, -1))).collect();
        simple_roots.push(unit(m, m - 1, 1));
        Ok(RootSystem { family: Family::B, rank: m, positive_roots, simple_roots })
    }

    /// `D_m` (m ≥ 2): roots `e_i ± e_j`.
    pub fn d(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameters(format!("D_{m} needs m >= 2")));
        }
        let positive_roots = Self::pm_roots(m);
        let mut simple_roots: Vec<_> = (0..m - 1).map(|i| add(&unit(m, i, 1), &unit(m, i + 1, -1))).collect();
        simple_roots.push(add(&unit(m, m - 2, 1), &unit(m, m - 1, 1)));
        Ok(RootSystem { family: Family::D, rank: m, positive_roots, simple_roots })
    }

    /// The root system of `so(n)`: `B_m` for `n = 2m + 1`, `D_m` for
    /// `n = 2m`.
    pub fn so(n: usize) -> Result<Self> {
        if n % 2 == 1 {
            Self::b(n / 2)
        } else {
            Self::d(n / 2)
        }
    }

    fn pm_roots(m: usize) -> Vec<Vec<Rational>> {
        let mut roots = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                roots.push(add(&unit(m, i, 1), &unit(m, j, -1)));
                roots.push(add(&unit(m, i, 1), &unit(m, j, 1)));
            }
        }
        roots
    }

    /// Number of weight coordinates.
    pub fn ambient_dim(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::D => self.rank,
        }
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Vec<Rational> {
        let two = Rational::from_integer(BigInt::from(2));
        let zero = vec![Rational::zero(); self.ambient_dim()];
        self.positive_roots.iter().fold(zero, |acc, r| add(&acc, r)).into_iter().map(|x| x / &two).collect()
    }

    pub fn is_dominant(&self, lambda: &HighestWeight) -> bool {
        self.simple_roots.iter().all(|a| !pair(&lambda.coords, a).is_negative())
    }
}

/// A weight in the standard coordinates; half-integers allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct HighestWeight {
    pub coords: Vec<Rational>,
}

impl HighestWeight {
    pub fn zero(dim: usize) -> Self {
        HighestWeight { coords: vec![Rational::zero(); dim] }
    }

    /// From twice the coordinates, so `[7, 1, 1]` is `(7/2, 1/2, 1/2)`.
    pub fn from_halves(twice: &[i64]) -> Self {
        let coords = twice.iter().map(|&t| Rational::new(BigInt::from(t), BigInt::from(2))).collect();
        HighestWeight { coords }
    }
}

/// Dimension of the irreducible module with highest weight `lambda`.
pub fn weyl_dim(rs: &RootSystem, lambda: &HighestWeight) -> Result<u64> {
    if lambda.coords.len() != rs.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: rs.ambient_dim(), found: lambda.coords.len() });
    }
    if !rs.is_dominant(lambda) {
        return Err(Error::NotDominant);
    }
    let rho = rs.rho();
    let shifted = add(&rho, &lambda.coords);
    let (mut num, mut den) = (Rational::one(), Rational::one());
    for a in &rs.positive_roots {
        num *= pair(&shifted, a);
        den *= pair(&rho, a);
    }
    let q = num / den;
    if !q.is_integer() {
        return Err(Error::Invariant(format!("Weyl formula produced the non-integer {q}")));
    }
    q.to_integer().to_u64().ok_or_else(|| Error::Invariant("dimension exceeds u64".into()))
}

/// `(m, 1/2, …, 1/2)`-style spin weights: `lead` given as twice the
/// coordinates, padded with `±1/2`; `last_negative` flips the final sign.
fn spin_weight(m: usize, lead: &[i64], last_negative: bool) -> HighestWeight {
    let mut twice: Vec<i64> = lead.to_vec();
    twice.resize(m, 1);
    if last_negative {
        twice[m - 1] = -twice[m - 1];
    }
    HighestWeight::from_halves(&twice)
}

/// Dimension of an `so(n)` module built from a spin weight, summed over both
/// half-spin versions when `n` is even.
fn so_spin_dim(n: usize, lead: &[i64]) -> Result<u64> {
    let m = n / 2;
    if n == 4 {
        // so(4) = sl(2) ⊕ sl(2); (a, b) ↦ sl(2) weights (a + b, a − b).
        let dims = |a: i64, b: i64| ((a + b) / 2 + 1) as u64 * ((a - b) / 2 + 1) as u64;
        let (a, b) = (lead[0], *lead.get(1).unwrap_or(&1));
        return Ok(dims(a, b) + dims(a, -b));
    }
    let rs = RootSystem::so(n)?;
    let plus = weyl_dim(&rs, &spin_weight(m, lead, false))?;
    if n % 2 == 1 {
        return Ok(plus);
    }
    Ok(plus + weyl_dim(&rs, &spin_weight(m, lead, true))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleRow {
    pub label: String,
    pub dim: u64,
}

/// The irreducible pieces of the cubic monogenic spinors for k = 2 with
/// their dimensions; the `sl(2)` factors are `S³E` (4) and `E⊠Λ²E` (2).
pub fn module_table(n: usize) -> Result<Vec<ModuleRow>> {
    if n < 3 {
        return Err(Error::InvalidParameters(format!("n = {n}, need n >= 3")));
    }
    let mut rows = vec![ModuleRow { label: "S³E⊗S³₀F⊠Sp".into(), dim: 4 * so_spin_dim(n, &[7])? }];
    if n == 4 {
        // E⊠Λ²E ⊗ (C²⊗S⁴C² ⊕ S⁴C²⊗C²)
        rows.push(ModuleRow { label: "E⊠Λ²E⊗(C²⊗S⁴C²⊕S⁴C²⊗C²)".into(), dim: 2 * (2 * 5 + 5 * 2) });
    } else if n >= 5 {
        rows.push(ModuleRow { label: "E⊠Λ²E⊗Λ²F⊠F⊠Sp".into(), dim: 2 * so_spin_dim(n, &[5, 3])? });
    }
    Ok(rows)
}

/// `2^{m+1}(n+1)n(n−1)/3`.
pub fn row1_formula(n: usize) -> u64 {
    let m = (n / 2) as u32;
    let n = n as u64;
    2u64.pow(m + 1) * (n + 1) * n * (n - 1) / 3
}

/// `2^{m+1}(n+1)(n−1)(n−3)/3`, for `n ≥ 5`.
pub fn row2_formula(n: usize) -> u64 {
    let m = (n / 2) as u32;
    let n = n as u64;
    2u64.pow(m + 1) * (n + 1) * (n - 1) * (n - 3) / 3
}

/// `s·C(2n, 3) − 2s(n−1)`, the dimension of cubic monogenic spinors for
/// k = 2.
pub fn cubic_total(n: usize) -> u64 {
    let s = 1u64 << (n / 2);
    s * binomial(2 * n as u64, 3) - 2 * s * (n as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn root_counts_and_rho() {
        for m in 2..6 {
            let d = RootSystem::d(m).unwrap();
            assert_eq!(d.positive_roots.len(), m * (m - 1));
            let want: Vec<Rational> = (0..m).map(|i| r((m - 1 - i) as i64, 1)).collect();
            assert_eq!(d.rho(), want);
            let b = RootSystem::b(m).unwrap();
            assert_eq!(b.positive_roots.len(), m * m);
            let want: Vec<Rational> = (0..m).map(|i| r(2 * (m - i) as i64 - 1, 2)).collect();
            assert_eq!(b.rho(), want);
        }
        assert_eq!(RootSystem::a(2).unwrap().positive_roots.len(), 3);
    }

    #[test]
    fn trivial_and_small() {
        let a1 = RootSystem::a(1).unwrap();
        assert_eq!(weyl_dim(&a1, &HighestWeight::zero(2)).unwrap(), 1);
        // S^3 of the defining sl(2) module.
        assert_eq!(weyl_dim(&a1, &HighestWeight::from_halves(&[6, 0])).unwrap(), 4);
        let b1 = RootSystem::b(1).unwrap();
        assert_eq!(weyl_dim(&b1, &HighestWeight::from_halves(&[7])).unwrap(), 8);
    }

    #[test]
    fn non_dominant_rejected() {
        let d3 = RootSystem::d(3).unwrap();
        assert_eq!(weyl_dim(&d3, &HighestWeight::from_halves(&[1, 3, 1])), Err(Error::NotDominant));
        assert!(matches!(weyl_dim(&d3, &HighestWeight::zero(2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn tables() {
        assert_eq!(module_table(3).unwrap().iter().map(|r| r.dim).collect::<Vec<_>>(), vec![32]);
        assert_eq!(module_table(4).unwrap().iter().map(|r| r.dim).collect::<Vec<_>>(), vec![160, 40]);
        assert_eq!(module_table(5).unwrap().iter().map(|r| r.dim).collect::<Vec<_>>(), vec![320, 128]);
        for n in 3..=9 {
            let total: u64 = module_table(n).unwrap().iter().map(|r| r.dim).sum();
            assert_eq!(total, cubic_total(n), "n = {n}");
            assert_eq!(module_table(n).unwrap()[0].dim, row1_formula(n));
            if n >= 5 {
                assert_eq!(module_table(n).unwrap()[1].dim, row2_formula(n));
            }
        }
    }
}
