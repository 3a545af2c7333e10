use kdirac::euclidean::EuclideanSystem;
use kdirac::linalg::{rank, Matrix, SubspaceBasis};
use kdirac::tableau::{OrderedBasis, OrderingStrategy, Tableau};
use kdirac::{binomial, Field, Q};
use num_traits::Zero;
use proptest::prelude::*;

/// The tableau in the coordinates of a new frame: `a'(b_j) = a(b_j)`.
fn change_frame(t: &Tableau<Q>, ob: &OrderedBasis<Q>) -> Tableau<Q> {
    let (nv, dw) = (t.dim_v(), t.dim_w());
    let frames: Vec<Vec<Q>> = (0..nv).map(|j| ob.frame_vector(j)).collect();
    let rows: Vec<Vec<(usize, Q)>> = t
        .basis()
        .rows()
        .iter()
        .map(|a| {
            let mut dense = vec![Q::zero(); nv * dw];
            for (idx, v) in a {
                for (j, b) in frames.iter().enumerate() {
                    let x = &mut dense[j * dw + idx % dw];
                    *x = x.add_ref(&b[idx / dw].mul_ref(v));
                }
            }
            dense.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    Tableau::new(nv, dw, SubspaceBasis::span(&Matrix::from_entries(nv * dw, rows))).unwrap()
}

#[test]
fn prolongation_is_independent_of_frame() {
    for n in 3..=4 {
        let sys = EuclideanSystem::<Q>::build(n, 2).unwrap();
        let t = sys.tableau();
        let d = t.prolongation_dim();
        for seed in 1..=5 {
            let moved = change_frame(&t, &OrderedBasis::random(t.dim_v(), seed));
            assert_eq!(moved.dim(), t.dim());
            assert_eq!(moved.prolongation_dim(), d, "n={n} seed={seed}");
        }
    }
}

#[test]
fn characters_follow_the_frame() {
    // Identity characters of the moved tableau equal the characters of the
    // original one in that frame.
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let t = sys.tableau();
    for seed in 1..=3 {
        let ob = OrderedBasis::random(t.dim_v(), seed);
        let moved = change_frame(&t, &ob);
        assert_eq!(moved.characters(&OrderedBasis::identity(t.dim_v())).unwrap(), t.characters(&ob).unwrap());
    }
}

#[test]
fn second_prolongation_matches_cubic_solutions() {
    for n in 3..=4 {
        let sys = EuclideanSystem::<Q>::build(n, 2).unwrap();
        let twice = sys.tableau().prolong_lifted().prolongation_dim();
        assert_eq!(twice, sys.solution_space(3).unwrap().dim(), "n={n}");
    }
}

#[test]
fn h02_against_direct_rank() {
    let sys = EuclideanSystem::<Q>::build(3, 2).unwrap();
    let t = sys.tableau();
    let (nv, dw) = (t.dim_v(), t.dim_w());
    let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|p| (p + 1..nv).map(move |q| (p, q))).collect();
    // Rows are the images of e_i ⊗ a in Λ²V*⊗W, one per (i, a).
    let mut rows = Vec::new();
    for i in 0..nv {
        for a in t.basis().rows() {
            let mut row = Vec::new();
            for (pi, &(p, q)) in pairs.iter().enumerate() {
                for w in 0..dw {
                    let at = |v: usize| {
                        a.iter().find(|(idx, _)| *idx == v * dw + w).map(|(_, c)| c.clone()).unwrap_or(Q::zero())
                    };
                    let mut c = Q::zero();
                    if i == p {
                        c = c.add_ref(&at(q));
                    }
                    if i == q {
                        c = c.sub_ref(&at(p));
                    }
                    if !c.is_zero() {
                        row.push((pi * dw + w, c));
                    }
                }
            }
            rows.push(row);
        }
    }
    let image = rank(&Matrix::from_entries(pairs.len() * dw, rows));
    assert_eq!(t.h02_dim(), pairs.len() * dw - image);
}

/// For an involutive tableau the next prolongation has dimension
/// `Σ C(j+1, 2)·s_j`.
#[test]
fn involutive_characters_predict_next_prolongation() {
    let sys = EuclideanSystem::<Q>::build(3, 3).unwrap();
    let l1 = sys.tableau().prolong_lifted();
    let d = l1.prolongation_dim();
    let report = l1.cartan_test_with(&OrderedBasis::random(l1.dim_v(), 1), d).unwrap();
    assert!(report.involutive);
    let predicted: usize =
        report.characters.iter().enumerate().map(|(j, s)| binomial(j as u64 + 2, 2) as usize * s).sum();
    assert_eq!(predicted, l1.prolong_lifted().prolongation_dim());
    assert_eq!(predicted, sys.solution_space(4).unwrap().dim());
}

#[test]
fn greedy_is_not_generic_for_k3() {
    let sys = EuclideanSystem::<Q>::build(3, 3).unwrap();
    let l1 = sys.tableau().prolong_lifted();
    let d = l1.prolongation_dim();
    let greedy = l1.search_ordering(&OrderingStrategy::Greedy).unwrap();
    assert_eq!(l1.cartan_test_with(&greedy, d).unwrap().rhs, 82);
    assert_eq!(d, 80);
}

#[test]
fn random_orderings_reproduce() {
    let a = OrderedBasis::<Q>::random(9, 4);
    assert_eq!(a, OrderedBasis::random(9, 4));
    assert_ne!(a.change, OrderedBasis::<Q>::random(9, 5).change);
    assert_eq!(a.label, "random:4");
    assert!(a.change.inverse().is_some());
}

fn arb_tableau() -> impl Strategy<Value = Tableau<Q>> {
    (2usize..=4, 1usize..=3).prop_flat_map(|(nv, dw)| {
        let row = prop::collection::vec(-2i64..=2, nv * dw);
        prop::collection::vec(row, 1..=4).prop_map(move |rows| {
            let m = Matrix::<Q>::from_i64(&rows);
            Tableau::new(nv, dw, SubspaceBasis::span(&m)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cartan_bound_and_exact_characters(t in arb_tableau(), seed in 0u64..50) {
        let ob = OrderedBasis::random(t.dim_v(), seed);
        let d = t.prolongation_dim();
        let report = t.cartan_test_with(&ob, d).unwrap();
        prop_assert_eq!(&report.characters, &t.characters(&ob).unwrap());
        prop_assert!(report.rhs >= d);
        prop_assert_eq!(report.characters.iter().sum::<usize>(), t.dim());
    }
}
