use kdirac::clifford::CliffordRep;
use kdirac::weyl::{cubic_total, module_table, weyl_dim, HighestWeight, RootSystem};
use kdirac::Q;

fn spin(m: usize, lead: &[i64]) -> HighestWeight {
    let mut twice = lead.to_vec();
    twice.resize(m, 1);
    HighestWeight::from_halves(&twice)
}

#[test]
fn trivial_module_has_dimension_one() {
    for rs in [RootSystem::a(3), RootSystem::b(3), RootSystem::d(4)] {
        let rs = rs.unwrap();
        assert_eq!(weyl_dim(&rs, &HighestWeight::zero(rs.ambient_dim())).unwrap(), 1);
    }
}

#[test]
fn even_orthogonal_closed_forms() {
    for m in 3..=7u64 {
        let d = RootSystem::d(m as usize).unwrap();
        let cubic = weyl_dim(&d, &spin(m as usize, &[7])).unwrap();
        assert_eq!(3 * cubic, 2u64.pow(m as u32 - 2) * (2 * m + 1) * (2 * m) * (2 * m - 1), "m={m}");
        let mixed = weyl_dim(&d, &spin(m as usize, &[5, 3])).unwrap();
        assert_eq!(3 * mixed, (2 * m + 1) * (2 * m - 1) * (2 * m - 3) * 2u64.pow(m as u32 - 1), "m={m}");
    }
}

#[test]
fn odd_orthogonal_closed_forms() {
    for m in 2..=6u64 {
        let b = RootSystem::b(m as usize).unwrap();
        let cubic = weyl_dim(&b, &spin(m as usize, &[7])).unwrap();
        assert_eq!(6 * cubic, 2u64.pow(m as u32) * (2 * m + 2) * (2 * m + 1) * (2 * m), "m={m}");
        let mixed = weyl_dim(&b, &spin(m as usize, &[5, 3])).unwrap();
        assert_eq!(3 * mixed, (m + 1) * m * (m - 1) * 2u64.pow(m as u32 + 3), "m={m}");
    }
}

#[test]
fn half_spin_matches_chirality() {
    for n in [4usize, 6, 8] {
        let m = n / 2;
        let rep = CliffordRep::<Q>::build(n).unwrap();
        let (plus, minus) = rep.chirality_split().unwrap();
        let half = 1u64 << (m - 1);
        assert_eq!((plus as u64, minus as u64), (half, half), "n={n}");
        if n > 4 {
            let d = RootSystem::d(m).unwrap();
            assert_eq!(weyl_dim(&d, &spin(m, &[1])).unwrap(), half);
            let mut other = vec![1; m];
            other[m - 1] = -1;
            assert_eq!(weyl_dim(&d, &HighestWeight::from_halves(&other)).unwrap(), half);
        }
    }
    assert!(CliffordRep::<Q>::build(5).unwrap().chirality_split().is_none());
}

#[test]
fn cubic_module_table() {
    assert_eq!(module_table(3).unwrap()[0].dim, 32);
    assert_eq!(module_table(4).unwrap()[1].dim, 40);
    for n in 3..=10 {
        let rows = module_table(n).unwrap();
        assert_eq!(rows.iter().map(|r| r.dim).sum::<u64>(), cubic_total(n), "n={n}");
    }
}
