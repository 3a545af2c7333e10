//! The full verification matrix, one group of checks per acceptance
//! criterion.

use std::thread;
use std::time::{Duration, Instant};

use kdirac::clifford::CliffordRep;
use kdirac::euclidean::{initial_dim_formula, EuclideanSystem, ExtensionSolver};
use kdirac::linalg::{Matrix, SubspaceBasis};
use kdirac::parabolic::{level1_rhs_formula, prolongation_dim_formula, y_index, ParabolicSystem};
use kdirac::poly::{basis_poly, monomial_basis, Poly, SpinorPoly};
use kdirac::tableau::{OrderedBasis, OrderingStrategy};
use kdirac::weyl::{module_table, weyl_dim, HighestWeight, RootSystem};
use kdirac::{Field, Q};

use crate::config::{Operator, Ordering, RunConfig};
use crate::expected;
use crate::report::{Check, CriterionSummary, Report};
use crate::run::run;

pub const CRITERIA: std::ops::RangeInclusive<u8> = 1..=13;

pub fn title(c: u8) -> &'static str {
    match c {
        1 => "Clifford relation",
        2 => "Euclidean tableau dimension",
        3 => "quadratic monogenic dimension",
        4 => "Euclidean level-1 involutivity for k = 2",
        5 => "Euclidean non-involutivity",
        6 => "free initial data",
        7 => "restriction commutator",
        8 => "parabolic bracket",
        9 => "parabolic level 0",
        10 => "parabolic level-1 involutivity for k = 2",
        11 => "lift existence",
        12 => "Weyl dimension formula",
        13 => "determinism",
        _ => "unknown criterion",
    }
}

type Checks = kdirac::Result<Vec<Check>>;

/// Runs the checks of one criterion. Errors become failed checks.
pub fn criterion(c: u8) -> Vec<Check> {
    let result = match c {
        1 => clifford_relation(),
        2 => euclidean_tableau(),
        3 => quadratic_dimension(),
        4 => euclidean_level_one(),
        5 => euclidean_non_involutive(),
        6 => initial_data(),
        7 => restriction_commutator(),
        8 => parabolic_bracket(),
        9 => parabolic_level_zero(),
        10 => parabolic_level_one(),
        11 => lift_existence(),
        12 => weyl_dimensions(),
        13 => determinism(),
        _ => Ok(vec![Check::error(format!("criterion {c}"), "no such criterion")]),
    };
    let checks = result.unwrap_or_else(|e| vec![Check::error(format!("criterion {c}"), e)]);
    checks.into_iter().map(|ch| ch.for_criterion(c)).collect()
}

/// Runs every criterion concurrently and assembles the report in criterion
/// order.
pub fn verify_matrix() -> Report {
    let results: Vec<(u8, Vec<Check>, Duration)> = thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .map(|c| {
                scope.spawn(move || {
                    let t = Instant::now();
                    let checks = criterion(c);
                    (c, checks, t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });

    let mut report = Report::new(None);
    for (c, checks, elapsed) in results {
        let failed = checks.iter().filter(|ch| !ch.pass).count();
        report.criteria.push(CriterionSummary { criterion: c, title: title(c).into(), checks: checks.len(), failed, pass: failed == 0 });
        report.checks.extend(checks);
        report.timing.push((format!("criterion {c}"), elapsed));
    }
    report
}

fn clifford_relation() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=8 {
        let rep = CliffordRep::<Q>::build(n)?;
        checks.push(Check::eq(format!("s at n={n}"), expected::spinor_dim(n), rep.s));
        // Every anticommutator, compared with −2δ I entry by entry.
        let id = Matrix::<Q>::identity(rep.s);
        let mut bad = 0;
        for a in 1..=n {
            for b in 1..=n {
                let (ga, gb) = (rep.gamma(a)?, rep.gamma(b)?);
                let anti = ga.mul(gb).add(&gb.mul(ga));
                let want = if a == b { id.scale(&Q::from_i64(-2)) } else { Matrix::zeros(rep.s, rep.s) };
                if anti != want {
                    bad += 1;
                }
            }
        }
        checks.push(Check::eq(format!("anticommutator failures at n={n}"), 0, bad));
        checks.push(Check::eq(format!("defining relation at n={n}"), true, rep.satisfies_clifford_relation()));
    }
    Ok(checks)
}

fn euclidean_tableau() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=6 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k)?;
            checks.push(Check::eq(format!("dim T at n={n} k={k}"), expected::euclidean_tableau(n, k), sys.tableau().dim()));
        }
    }
    Ok(checks)
}

fn quadratic_dimension() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=5 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k)?;
            let want = expected::euclidean_quadratic(n, k);
            checks.push(Check::eq(format!("prolongation at n={n} k={k}"), want, sys.tableau().prolongation_dim()));
            checks.push(Check::eq(format!("degree-2 solutions at n={n} k={k}"), want, sys.solution_space(2)?.dim()));
        }
    }
    let (sym, skew) = EuclideanSystem::<Q>::build(3, 2)?.quadratic_component_dims()?;
    checks.push(Check::eq("component split at n=3 k=2", [18, 0], [sym, skew]));
    Ok(checks)
}

fn euclidean_level_one() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=6 {
        let sys = EuclideanSystem::<Q>::build(n, 2)?;
        let l1 = sys.tableau().prolong_lifted();
        let d = l1.prolongation_dim();
        let r = l1.cartan_test_with(&sys.chart_ordering()?, d)?;
        let closed = expected::euclidean_cubic(n);
        checks.push(Check::eq(format!("characters at n={n}"), expected::euclidean_level1_characters(n), &r.characters));
        checks.push(Check::eq(format!("rhs at n={n}"), closed, r.rhs));
        checks.push(Check::eq(format!("dim A(2) at n={n}"), closed, d));
        checks.push(Check::eq(format!("involutive at n={n}"), true, r.involutive));
    }
    Ok(checks)
}

fn euclidean_non_involutive() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=6 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k)?;
            let t = sys.tableau();
            let d = t.prolongation_dim();
            let mut frames = vec![sys.level0_ordering(), t.search_ordering(&OrderingStrategy::Greedy)?];
            if n <= 4 {
                frames.extend((1..=5).map(|seed| OrderedBasis::random(t.dim_v(), seed)));
            }
            for ob in frames {
                let r = t.cartan_test_with(&ob, d)?;
                checks.push(Check::greater(format!("level 0 rhs at n={n} k={k} [{}]", ob.label), d, r.rhs));
            }
        }
    }
    for n in 3..=4 {
        let sys = EuclideanSystem::<Q>::build(n, 3)?;
        let l1 = sys.tableau().prolong_lifted();
        let d = l1.prolongation_dim();
        let mut frames = vec![l1.search_ordering(&OrderingStrategy::Greedy)?];
        frames.extend((1..=5).map(|seed| OrderedBasis::random(l1.dim_v(), seed)));
        for ob in frames {
            let r = l1.cartan_test_with(&ob, d)?;
            checks.push(Check::greater(format!("level 1 rhs at n={n} k=3 [{}]", ob.label), d, r.rhs));
        }
    }
    Ok(checks)
}

fn initial_data() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=4 {
        let sys = EuclideanSystem::<Q>::build(n, 2)?;
        for r in 2..=4u32 {
            checks.push(Check::eq(
                format!("solutions at n={n} r={r}"),
                initial_dim_formula(n, 2, r as usize)?,
                sys.solution_space(r)?.dim(),
            ));
        }
    }

    // Extend the basis pairs (g1, 0) and (0, g2) at n = 3, r = 2.
    let sys = EuclideanSystem::<Q>::build(3, 2)?;
    let solver = ExtensionSolver::new(&sys, 2)?;
    let tv = solver.chart_vars().clone();
    let s = sys.s();
    let lead = 2 * sys.n() - 3;
    let initial = |deg: u32| -> Vec<SpinorPoly<Q>> {
        monomial_basis(&tv, deg)
            .into_iter()
            .filter(|m| m[lead..].iter().all(|&e| e == 0))
            .flat_map(|m| (0..s).map(move |c| (m.clone(), c)))
            .map(|(m, c)| SpinorPoly::term(tv.clone(), s, m, c, Q::from_i64(1)))
            .collect()
    };
    let zero = SpinorPoly::zero(tv.clone(), s);
    let mut data: Vec<_> = initial(2).into_iter().map(|g1| (g1, zero.clone())).collect();
    data.extend(initial(1).into_iter().map(|g2| (zero.clone(), g2)));
    checks.push(Check::eq("initial data pairs at n=3 r=2", expected::euclidean_quadratic(3, 2), data.len()));

    let monos = monomial_basis(&sys.vars, 2);
    let mut rows = Vec::with_capacity(data.len());
    let mut monogenic = 0;
    for psi in solver.extend_many(&data)? {
        let x = solver.to_x(&psi)?;
        if sys.is_monogenic(&x)? {
            monogenic += 1;
        }
        rows.push(x.to_coords(&monos).ok_or(kdirac::Error::InvalidParameters("extension left degree 2".into()))?);
    }
    let span = SubspaceBasis::span(&Matrix::from_entries(monos.len() * s, rows));
    checks.push(Check::eq("monogenic extensions", data.len(), monogenic));
    checks.push(Check::eq("independent extensions", data.len(), span.dim()));
    checks.push(Check::eq("extensions inside solutions", true, span.is_subspace_of(&sys.solution_space(2)?)));
    Ok(checks)
}

fn restriction_commutator() -> Checks {
    let sys = EuclideanSystem::<Q>::build(3, 2)?;
    let mut checks = Vec::new();
    for r in 2..=3u32 {
        let space = sys.solution_space(r)?;
        let mut passed = 0;
        for i in 0..space.dim() {
            if sys.restriction_commutator_check(&basis_poly(&space, i, &sys.vars, sys.s(), r))? {
                passed += 1;
            }
        }
        checks.push(Check::eq(format!("degree {r} basis elements passing"), space.dim(), passed));
    }
    Ok(checks)
}

fn parabolic_bracket() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=4 {
        let sys = ParabolicSystem::<Q>::build(n, 2)?;
        let monos: usize = (0..=4).map(|w| monomial_basis(&sys.vars, w).len()).sum();
        let pairs = (2 * n) * (2 * n);
        checks.push(Check::eq(format!("bracket evaluations at n={n}"), pairs * monos, sys.bracket_check(4)?));
    }
    Ok(checks)
}

fn parabolic_level_zero() -> Checks {
    let mut checks = Vec::new();
    for (n, k) in [(3, 2), (4, 2), (5, 2), (3, 3)] {
        let sys = ParabolicSystem::<Q>::build(n, k)?;
        let t = sys.tableau();
        let d = t.prolongation_dim();
        checks.push(Check::eq(format!("dim T at n={n} k={k}"), expected::parabolic_tableau(n, k), t.dim()));
        checks.push(Check::eq(format!("dim A(1) at n={n} k={k}"), prolongation_dim_formula(n, k), d));
        let r = t.cartan_test_with(&sys.level0_ordering(), d)?;
        checks.push(Check::greater(format!("rhs at n={n} k={k}"), d, r.rhs));
    }
    Ok(checks)
}

fn parabolic_level_one() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=5 {
        let sys = ParabolicSystem::<Q>::build(n, 2)?;
        let l1 = sys.tableau().prolong_lifted();
        let d = l1.prolongation_dim();
        let r = l1.cartan_test_with(&sys.level1_ordering()?, d)?;
        let closed = level1_rhs_formula(n);
        checks.push(Check::eq(format!("characters at n={n}"), expected::parabolic_level1_characters(n), &r.characters));
        checks.push(Check::eq(format!("rhs at n={n}"), closed, r.rhs));
        checks.push(Check::eq(format!("dim A(2) at n={n}"), closed, d));
        checks.push(Check::eq(format!("involutive at n={n}"), true, r.involutive));
    }
    let pieces = ParabolicSystem::<Q>::build(3, 2)?.second_prolongation_decomposition()?;
    checks.push(Check::eq("pieces at n=3", [32, 18, 8, 2], pieces));
    Ok(checks)
}

fn lift_existence() -> Checks {
    let mut checks = Vec::new();
    for n in 3..=4 {
        let sys = ParabolicSystem::<Q>::build(n, 2)?;
        let nv = sys.vars.len();
        let y12 = y_index(n, 2, 1, 2);
        for (gname, g) in [("1", Poly::constant(nv, Q::from_i64(1))), ("y12", Poly::var(nv, y12))] {
            for r in 0..=2u32 {
                let space = sys.euclid.solution_space(r)?;
                let psis: Vec<_> =
                    (0..space.dim()).map(|i| basis_poly(&space, i, &sys.euclid.vars, sys.s(), r)).collect();
                let lifts = sys.lift_many(&psis, &g)?;
                let mut monogenic = 0;
                for lifted in &lifts {
                    if sys.is_monogenic(lifted)? {
                        monogenic += 1;
                    }
                }
                checks.push(Check::eq(format!("monogenic lifts at n={n} r={r} g={gname}"), psis.len(), monogenic));
            }
        }
    }
    Ok(checks)
}

fn spin_weight(m: usize, lead: &[i64]) -> HighestWeight {
    let mut twice = lead.to_vec();
    twice.resize(m, 1);
    HighestWeight::from_halves(&twice)
}

fn weyl_dimensions() -> Checks {
    let mut checks = Vec::new();
    for (name, rs) in [("A3", RootSystem::a(3)?), ("B3", RootSystem::b(3)?), ("D4", RootSystem::d(4)?)] {
        let zero = HighestWeight::zero(rs.ambient_dim());
        checks.push(Check::eq(format!("trivial module of {name}"), 1, weyl_dim(&rs, &zero)?));
    }
    for m in 3..=7u64 {
        let d = RootSystem::d(m as usize)?;
        let p = 2u64.pow(m as u32 - 2) * (2 * m + 1) * (2 * m) * (2 * m - 1) / 3;
        checks.push(Check::eq(format!("D{m} cubic weight"), p, weyl_dim(&d, &spin_weight(m as usize, &[7]))?));
        let p = (2 * m + 1) * (2 * m - 1) * (2 * m - 3) * 2u64.pow(m as u32 - 1) / 3;
        checks.push(Check::eq(format!("D{m} mixed weight"), p, weyl_dim(&d, &spin_weight(m as usize, &[5, 3]))?));
    }
    for m in 2..=6u64 {
        let b = RootSystem::b(m as usize)?;
        let p = 2u64.pow(m as u32) * (2 * m + 2) * (2 * m + 1) * (2 * m) / 6;
        checks.push(Check::eq(format!("B{m} cubic weight"), p, weyl_dim(&b, &spin_weight(m as usize, &[7]))?));
        let p = (m + 1) * m * (m - 1) * 2u64.pow(m as u32 + 3) / 3;
        checks.push(Check::eq(format!("B{m} mixed weight"), p, weyl_dim(&b, &spin_weight(m as usize, &[5, 3]))?));
    }
    for n in [6usize, 8] {
        let m = n / 2;
        let (plus, _) = CliffordRep::<Q>::build(n)?.chirality_split().ok_or(kdirac::Error::InvalidParameters("odd n".into()))?;
        let half = weyl_dim(&RootSystem::d(m)?, &spin_weight(m, &[1]))?;
        checks.push(Check::eq(format!("half-spin at n={n}"), plus as u64, half));
    }
    checks.push(Check::eq("module table row 1 at n=3", 32, module_table(3)?[0].dim));
    checks.push(Check::eq("special module at n=4", 40, module_table(4)?[1].dim));
    Ok(checks)
}

fn determinism() -> Checks {
    let mut checks = Vec::new();
    for seed in 1..=5 {
        let same = OrderedBasis::<Q>::random(6, seed) == OrderedBasis::<Q>::random(6, seed);
        checks.push(Check::eq(format!("random basis reproduces for seed {seed}"), true, same));
    }
    let sys = EuclideanSystem::<Q>::build(3, 3)?;
    let l1 = sys.tableau().prolong_lifted();
    let d = l1.prolongation_dim();
    let first = l1.cartan_test_with(&l1.search_ordering(&OrderingStrategy::Random(7))?, d)?;
    let second = l1.cartan_test_with(&l1.search_ordering(&OrderingStrategy::Random(7))?, d)?;
    checks.push(Check::eq("random ordering reproduces a Cartan test", true, first == second));

    let cfg = RunConfig::new(Operator::Parabolic, 3, 2, 1, Ordering::Random(3)).with_degree(2);
    let json = |c: &RunConfig| run(c).map(|r| r.to_json()).map_err(|e| e.to_string());
    match (json(&cfg), json(&cfg)) {
        (Ok(a), Ok(b)) => checks.push(Check::eq("repeated run gives identical JSON", true, a == b)),
        (Err(e), _) | (_, Err(e)) => checks.push(Check::error("repeated run", e)),
    }
    Ok(checks)
}
