use std::path::PathBuf;

use kdirac_cli::{run, Operator, Ordering, RunConfig};

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn check(name: &str, cfg: RunConfig) {
    let report = run(&cfg).unwrap();
    assert!(report.all_pass(), "{}", report.to_text());
    assert_eq!(report.to_json(), golden(name), "{name} drifted; regenerate with --write-golden if intended");
}

#[test]
fn euclidean_level_zero() {
    check("euclidean_n3_k2_level0_chart.json", RunConfig::new(Operator::Euclidean, 3, 2, 0, Ordering::Chart));
}

#[test]
fn euclidean_level_one_with_cubics() {
    let cfg = RunConfig::new(Operator::Euclidean, 3, 2, 1, Ordering::Chart).with_degree(3);
    check("euclidean_n3_k2_level1_chart.json", cfg);
}

#[test]
fn euclidean_level_one_n4() {
    check("euclidean_n4_k2_level1_chart.json", RunConfig::new(Operator::Euclidean, 4, 2, 1, Ordering::Chart));
}

#[test]
fn euclidean_k3_random_frame() {
    check("euclidean_n3_k3_level1_random1.json", RunConfig::new(Operator::Euclidean, 3, 3, 1, Ordering::Random(1)));
}

#[test]
fn parabolic_weighted_degree_two() {
    let cfg = RunConfig::new(Operator::Parabolic, 3, 2, 0, Ordering::Chart).with_degree(2);
    check("parabolic_n3_k2_level0_degree2.json", cfg);
}

#[test]
fn parabolic_level_one() {
    check("parabolic_n3_k2_level1_chart.json", RunConfig::new(Operator::Parabolic, 3, 2, 1, Ordering::Chart));
}

#[test]
fn fixed_field_names() {
    let json = golden("parabolic_n3_k2_level1_chart.json");
    for field in ["\"characters\"", "\"rhs_cartan_test\"", "\"dim_prolongation\"", "\"involutive\"", "\"filtration_dims\"", "\"component_dims\"", "\"schema_version\": 1"] {
        assert!(json.contains(field), "missing {field}");
    }
}
