use kdirac::euclidean::{initial_dim_formula, EuclideanSystem, ExtensionSolver};
use kdirac::linalg::{Matrix, SubspaceBasis};
use kdirac::poly::{basis_poly, monomial_basis, SpinorPoly};
use kdirac::tableau::OrderingStrategy;
use kdirac::{binomial, Field, Q};
use num_traits::One;

fn s_of(n: usize) -> usize {
    1 << (n / 2)
}

fn quadratic_formula(n: usize, k: usize) -> usize {
    let s = s_of(n) as u64;
    let (n, k) = (n as u64, k as u64);
    (s * binomial(k * (n - 1) + 1, 2) - s * binomial(k, 2)) as usize
}

#[test]
fn tableau_dimension_grid() {
    for n in 3..=6 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k).unwrap();
            assert_eq!(sys.tableau().dim(), k * s_of(n) * (n - 1), "n={n} k={k}");
        }
    }
}

#[test]
fn quadratic_spinors_two_ways() {
    for n in 3..=5 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k).unwrap();
            let want = quadratic_formula(n, k);
            assert_eq!(sys.tableau().prolongation_dim(), want, "prolongation n={n} k={k}");
            assert_eq!(sys.solution_space(2).unwrap().dim(), want, "solutions n={n} k={k}");
        }
    }
}

#[test]
fn quadratic_components() {
    for n in 3..=5 {
        for k in 2..=3 {
            let s = s_of(n) as u64;
            let (nn, kk) = (n as u64, k as u64);
            let sym = s * binomial(nn, 2) * binomial(kk + 1, 2);
            let skew = s * (binomial(kk, 2) * binomial(nn - 1, 2) - binomial(kk, 2));
            let sys = EuclideanSystem::<Q>::build(n, k).unwrap();
            assert_eq!(sys.quadratic_component_dims().unwrap(), (sym as usize, skew as usize), "n={n} k={k}");
        }
    }
    let sys = EuclideanSystem::<Q>::build(4, 2).unwrap();
    assert_eq!(sys.quadratic_component_dims().unwrap(), (72, 8));
}

#[test]
fn level_one_characters_under_chart_ordering() {
    for n in 3..=5 {
        let s = s_of(n);
        let sys = EuclideanSystem::<Q>::build(n, 2).unwrap();
        let l1 = sys.tableau().prolong_lifted();
        let report = l1.cartan_test(&sys.chart_ordering().unwrap()).unwrap();
        let mut want: Vec<usize> = (2..=2 * n - 2).rev().map(|j| j * s).collect();
        want.extend([0, 0, 0]);
        assert_eq!(report.characters, want, "n={n}");
        assert!(report.involutive);
        let cubic = s * binomial(2 * n as u64, 3) as usize - 2 * s * (n - 1);
        assert_eq!(report.rhs, cubic);
        assert_eq!(sys.solution_space(3).unwrap().dim(), cubic);
    }
}

#[test]
fn greedy_matches_chart_at_level_one_for_n3() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let l1 = sys.tableau().prolong_lifted();
    let ob = l1.search_ordering(&OrderingStrategy::Greedy).unwrap();
    let report = l1.cartan_test(&ob).unwrap();
    assert_eq!(report.characters, vec![8, 6, 4, 0, 0, 0]);
    assert_eq!(report.ordering_label, "greedy");
}

#[test]
fn level_zero_is_not_involutive() {
    for n in 3..=5 {
        for k in 2..=3 {
            let sys = EuclideanSystem::<Q>::build(n, k).unwrap();
            let t = sys.tableau();
            let report = t.cartan_test(&sys.level0_ordering()).unwrap();
            assert!(report.rhs > report.dim_prolongation, "n={n} k={k}");
            assert_eq!(report.rhs, s_of(n) * binomial((k * (n - 1) + 1) as u64, 2) as usize);
        }
    }
}

#[test]
fn free_initial_data_count() {
    for n in 3..=4 {
        let sys = EuclideanSystem::<Q>::build(n, 2).unwrap();
        for r in 2..=4u32 {
            assert_eq!(
                sys.solution_space(r).unwrap().dim(),
                initial_dim_formula(n, 2, r as usize).unwrap(),
                "n={n} r={r}"
            );
        }
    }
}

/// Extends every basis pair `(g1, 0)` and `(0, g2)` at n = 3, r = 2 and
/// checks that the results are monogenic and span the quadratic solutions.
#[test]
fn extensions_span_quadratic_solutions() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let solver = ExtensionSolver::new(&sys, 2).unwrap();
    let tv = solver.chart_vars().clone();
    let s = sys.s();
    let initial = |deg: u32| -> Vec<SpinorPoly<Q>> {
        monomial_basis(&tv, deg)
            .into_iter()
            .filter(|m| m[3..].iter().all(|&e| e == 0))
            .flat_map(|m| (0..s).map(move |c| (m.clone(), c)))
            .map(|(m, c)| SpinorPoly::term(tv.clone(), s, m, c, Q::one()))
            .collect()
    };
    let zero = SpinorPoly::zero(tv.clone(), s);
    let mut data: Vec<_> = initial(2).into_iter().map(|g1| (g1, zero.clone())).collect();
    data.extend(initial(1).into_iter().map(|g2| (zero.clone(), g2)));
    assert_eq!(data.len(), 18);

    let monos = monomial_basis(&sys.vars, 2);
    let rows: Vec<_> = solver
        .extend_many(&data)
        .unwrap()
        .iter()
        .map(|psi| {
            let x = solver.to_x(psi).unwrap();
            assert!(sys.is_monogenic(&x).unwrap());
            x.to_coords(&monos).unwrap()
        })
        .collect();
    let span = SubspaceBasis::span(&Matrix::from_entries(monos.len() * s, rows));
    assert_eq!(span.dim(), 18);
    assert!(span.is_subspace_of(&sys.solution_space(2).unwrap()));
}

#[test]
fn extension_rejects_bad_initial_data() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let solver = ExtensionSolver::new(&sys, 2).unwrap();
    let tv = solver.chart_vars().clone();
    let zero = SpinorPoly::zero(tv.clone(), 2);
    // t_4 is one of the tail variables.
    let tail = SpinorPoly::term(tv.clone(), 2, vec![1, 0, 0, 1, 0, 0], 0, Q::one());
    assert!(solver.extend(&tail, &zero).is_err());
    let wrong_degree = SpinorPoly::term(tv, 2, vec![1, 0, 0, 0, 0, 0], 0, Q::one());
    assert!(solver.extend(&wrong_degree, &zero).is_err());
    assert!(ExtensionSolver::new(&sys, 1).is_err());
}

#[test]
fn restriction_commutator_on_low_degrees() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    for r in 2..=3u32 {
        let space = sys.solution_space(r).unwrap();
        for i in 0..space.dim() {
            let psi = basis_poly(&space, i, &sys.vars, sys.s(), r);
            assert!(sys.restriction_commutator_check(&psi).unwrap(), "r={r} basis {i}");
        }
    }
}

#[test]
fn monogenic_test_rejects_linear_term() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let psi = SpinorPoly::term(sys.vars.clone(), 2, sys.vars.unit(0), 1, Q::from_i64(2));
    assert!(!sys.is_monogenic(&psi).unwrap());
}
