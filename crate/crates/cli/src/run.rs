use std::time::Instant;

use kdirac::euclidean::{initial_dim_formula, EuclideanSystem};
use kdirac::parabolic::{level1_rhs_formula, prolongation_dim_formula, ParabolicSystem};
use kdirac::tableau::{CartanReport, OrderedBasis, OrderingStrategy, Tableau};
use kdirac::weyl::module_table;
use kdirac::{binomial, Q};
use thiserror::Error;

use crate::config::{ConfigError, Operator, Ordering, RunConfig};
use crate::expected;
use crate::report::{CartanSection, Check, Report};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Compute(#[from] kdirac::Error),
}

impl RunError {
    /// Process exit code: 2 for a bad configuration, 1 for a failed
    /// computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Compute(_) => 1,
        }
    }
}

/// Runs one configuration and checks every closed form that applies to it.
pub fn run(cfg: &RunConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    let mut report = Report::new(Some(cfg.clone()));
    match cfg.operator {
        Operator::Euclidean => run_euclidean(cfg, &mut report)?,
        Operator::Parabolic => run_parabolic(cfg, &mut report)?,
    }
    Ok(report)
}

struct Clock(Instant);

impl Clock {
    fn start() -> Self {
        Clock(Instant::now())
    }

    fn lap(&mut self, report: &mut Report, stage: &str) {
        report.timing.push((stage.to_string(), self.0.elapsed()));
        self.0 = Instant::now();
    }
}

/// Lifts the tableau to `level`, picks the ordering and runs the Cartan test.
fn level_cartan(
    base: Tableau<Q>,
    cfg: &RunConfig,
    chart: impl FnOnce() -> kdirac::Result<OrderedBasis<Q>>,
    report: &mut Report,
) -> kdirac::Result<(Tableau<Q>, CartanReport)> {
    let mut clock = Clock::start();
    let mut tab = base;
    for _ in 0..cfg.level {
        tab = tab.prolong_lifted();
    }
    clock.lap(report, "tableau");
    let dim_prolongation = tab.prolongation_dim();
    clock.lap(report, "prolongation");
    let ob = match cfg.ordering {
        Ordering::Chart => chart()?,
        Ordering::Greedy => tab.search_ordering(&OrderingStrategy::Greedy)?,
        Ordering::Random(seed) => tab.search_ordering(&OrderingStrategy::Random(seed))?,
    };
    let cartan = tab.cartan_test_with(&ob, dim_prolongation)?;
    clock.lap(report, "cartan");
    report.dims.insert("tableau".into(), tab.dim() as u64);
    report.dims.insert("prolongation".into(), dim_prolongation as u64);
    report.cartan.push(CartanSection::new(format!("level {}", cfg.level), cartan.clone()));
    Ok((tab, cartan))
}

fn run_euclidean(cfg: &RunConfig, report: &mut Report) -> kdirac::Result<()> {
    let (n, k) = (cfg.n, cfg.k);
    let sys = EuclideanSystem::<Q>::build(n, k)?;
    let chart = || if cfg.level == 0 { Ok(sys.level0_ordering()) } else { sys.chart_ordering() };
    let (tab, cartan) = level_cartan(sys.tableau(), cfg, chart, report)?;
    let dp = cartan.dim_prolongation;

    let checks = &mut report.checks;
    match cfg.level {
        0 => {
            checks.push(Check::eq("tableau dimension", expected::euclidean_tableau(n, k), tab.dim()));
            checks.push(Check::eq("prolongation dimension", expected::euclidean_quadratic(n, k), dp));
        }
        1 => {
            checks.push(Check::eq("tableau dimension", expected::euclidean_quadratic(n, k), tab.dim()));
            if k == 2 {
                checks.push(Check::eq("prolongation dimension", expected::euclidean_cubic(n), dp));
            }
        }
        _ => {
            if k == 2 {
                checks.push(Check::eq("tableau dimension", expected::euclidean_cubic(n), tab.dim()));
            }
        }
    }
    if cfg.level == 1 && k == 2 && cfg.ordering == Ordering::Chart {
        checks.push(Check::eq("characters", expected::euclidean_level1_characters(n), &cartan.characters));
        checks.push(Check::eq("involutive", true, cartan.involutive));
    }

    if cfg.level == 1 {
        let t = Instant::now();
        let (sym, skew) = sys.quadratic_component_dims()?;
        report.component_dims.insert("quadratic_swap_eigenspaces".into(), vec![sym as u64, skew as u64]);
        report.checks.push(Check::eq("quadratic components", expected::euclidean_quadratic_split(n, k), [sym, skew]));
        if k == 2 {
            let rows: Vec<u64> = module_table(n)?.iter().map(|r| r.dim).collect();
            report.checks.push(Check::eq("cubic modules sum", dp as u64, rows.iter().sum::<u64>()));
            report.component_dims.insert("cubic_modules".into(), rows);
        }
        report.timing.push(("components".into(), t.elapsed()));
    }

    if let Some(r) = cfg.degree {
        let t = Instant::now();
        let d = sys.solution_space(r)?.dim();
        report.dims.insert(format!("solutions_degree_{r}"), d as u64);
        if k == 2 && r >= 2 {
            report.checks.push(Check::eq("initial data count", initial_dim_formula(n, k, r as usize)?, d));
        }
        report.timing.push(("solutions".into(), t.elapsed()));
    }
    Ok(())
}

fn run_parabolic(cfg: &RunConfig, report: &mut Report) -> kdirac::Result<()> {
    let (n, k) = (cfg.n, cfg.k);
    let sys = ParabolicSystem::<Q>::build(n, k)?;
    let chart = || if cfg.level == 0 { Ok(sys.level0_ordering()) } else { sys.level1_ordering() };
    let (tab, cartan) = level_cartan(sys.tableau(), cfg, chart, report)?;
    let dp = cartan.dim_prolongation;

    let checks = &mut report.checks;
    match cfg.level {
        0 => {
            checks.push(Check::eq("tableau dimension", expected::parabolic_tableau(n, k), tab.dim()));
            checks.push(Check::eq("prolongation dimension", prolongation_dim_formula(n, k), dp));
        }
        1 => {
            checks.push(Check::eq("tableau dimension", prolongation_dim_formula(n, k), tab.dim()));
            if k == 2 {
                checks.push(Check::eq("prolongation dimension", level1_rhs_formula(n), dp));
            }
        }
        _ => {
            if k == 2 {
                checks.push(Check::eq("tableau dimension", level1_rhs_formula(n), tab.dim()));
            }
        }
    }
    if cfg.level == 1 && k == 2 && cfg.ordering == Ordering::Chart {
        checks.push(Check::eq("characters", expected::parabolic_level1_characters(n), &cartan.characters));
        checks.push(Check::eq("rhs", level1_rhs_formula(n), cartan.rhs));
        checks.push(Check::eq("involutive", true, cartan.involutive));
    }

    if k == 2 && cfg.level < 2 {
        let t = Instant::now();
        let (name, pieces, want) = if cfg.level == 0 {
            ("prolongation_pieces", sys.prolongation_decomposition()?, expected::parabolic_first_pieces(n))
        } else {
            ("second_prolongation_pieces", sys.second_prolongation_decomposition()?, expected::parabolic_second_pieces(n))
        };
        report.checks.push(Check::eq(name.replace('_', " "), &want, &pieces));
        report.component_dims.insert(name.into(), pieces.iter().map(|&d| d as u64).collect());
        report.timing.push(("components".into(), t.elapsed()));
    }

    if let Some(r) = cfg.degree {
        let t = Instant::now();
        let d = sys.weighted_monogenic_space(r)?.dim();
        report.dims.insert(format!("weighted_solutions_degree_{r}"), d as u64);
        // Each weighted solution is a sum of lifts of Euclidean solutions
        // times monomials in the y variables.
        let ny = binomial(k as u64, 2) as usize;
        let mut lifts = 0;
        for l in 0..=r / 2 {
            let e = sys.euclid.solution_space(r - 2 * l)?.dim();
            lifts += e * expected::monomial_count(ny, l as usize);
        }
        report.checks.push(Check::eq("weighted dimension from lifts", lifts, d));
        report.timing.push(("solutions".into(), t.elapsed()));
    }
    Ok(())
}
