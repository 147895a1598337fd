//! Monte Carlo comparison of the one-query quantum solver with the classical
//! collision solver on `Z_p`.
//!
//! Every trial derives its own seed from `(seed, n, trial)`, builds a private
//! [`BlackBox`] with `ψ_s` for uniform `s` and a uniform `π`, and is
//! independent of every other trial, so the report does not depend on how
//! trials are scheduled.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::character::CharacterBasis;
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupElement, GroupSpec};
use crate::hidden::{
    collision_bound, guess_success, lower_bound_threshold, BlackBox, CollisionPlan, QuantumSolver,
};
use crate::{par, Limits};

/// Inputs of [`run_separation_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SeparationConfig {
    /// Prime group orders.
    pub orders: Vec<u64>,
    pub trials: usize,
    /// Query budgets `m`; `None` means `1..=⌈√(2n)⌉` for each `n`.
    pub budgets: Option<Vec<u64>>,
    pub seed: u64,
    /// Trials per order on which the quantum solver also runs.
    pub quantum_trials: usize,
    /// Keep one record per trial.
    pub audit: bool,
}

impl Default for SeparationConfig {
    fn default() -> Self {
        SeparationConfig {
            orders: vec![31, 101, 257],
            trials: 10_000,
            budgets: None,
            seed: 0,
            quantum_trials: 100,
            audit: false,
        }
    }
}

/// One `(n, m)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationRow {
    pub n: u64,
    pub m: u64,
    pub trials: usize,
    pub collisions: usize,
    /// Measured fraction of trials whose `m` queries produced a collision.
    pub collision_rate: f64,
    /// `√(p̂(1 − p̂)/trials)`.
    pub stderr: f64,
    /// `m² / (2n − m²)`; `None` when `m² ≥ 2n`.
    pub paper_bound: Option<f64>,
    /// `⌈√(2n/3)⌉`.
    pub threshold: u64,
    /// `1 / (n − m(m−1)/2)`, the chance of guessing after no collision.
    pub guess_success: f64,
    /// Queries used by every quantum run at this `n`.
    pub quantum_queries: u64,
    pub quantum_correct_rate: f64,
    pub seed: u64,
    /// `collision_rate ≤ paper_bound + 3·stderr`, true when the bound is void.
    pub within_bound: bool,
}

/// Per-order totals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSummary {
    pub n: u64,
    pub trials: usize,
    /// Lower median of the query count at which the first collision shows up.
    pub median_first_collision: Option<u64>,
    pub quantum_trials: usize,
    /// Largest query count over quantum runs.
    pub quantum_queries: u64,
    pub quantum_correct_rate: f64,
    /// Collision-determined answers that disagree with the hidden `ψ(1)`.
    pub wrong_classical_answers: usize,
}

/// What one trial saw, for `--audit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: u64,
    pub trial: usize,
    pub seed: u64,
    /// Hidden `ψ(1)`.
    pub s: u64,
    pub first_collision: Option<u64>,
    pub classical_answer: Option<u64>,
    pub quantum_answer: Option<u64>,
    pub quantum_queries: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub config: SeparationConfig,
    pub rows: Vec<SeparationRow>,
    pub orders: Vec<OrderSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<Vec<TrialRecord>>,
}

pub const CSV_HEADER: &str =
    "n,m,trials,collision_rate,stderr,paper_bound,threshold,quantum_queries,quantum_correct_rate,seed,guess_success";

impl SeparationReport {
    /// Every cell within its bound, every classical answer right, and every
    /// quantum run correct with one query.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
            && self.orders.iter().all(|o| {
                o.wrong_classical_answers == 0
                    && (o.quantum_trials == 0 || (o.quantum_queries == 1 && o.quantum_correct_rate == 1.0))
            })
    }

    /// CSV with `.` decimals; a void bound is written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let bound = r.paper_bound.map_or_else(|| "inf".to_string(), |b| b.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.n,
                r.m,
                r.trials,
                r.collision_rate,
                r.stderr,
                bound,
                r.threshold,
                r.quantum_queries,
                r.quantum_correct_rate,
                r.seed,
                r.guess_success
            );
        }
        out
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at order `n`.
pub fn trial_seed(seed: u64, n: u64, trial: usize) -> u64 {
    mix(mix(mix(seed) ^ n) ^ trial as u64)
}

/// Default budgets `1..=⌈√(2n)⌉`.
pub fn default_budgets(n: u64) -> Vec<u64> {
    let mut top = (2.0 * n as f64).sqrt() as u64;
    while top * top < 2 * n {
        top += 1;
    }
    (1..=top).collect()
}

struct TrialOutcome {
    s: u64,
    seed: u64,
    /// Collision within each budget, and whether its answer was right.
    cells: Vec<(bool, bool)>,
    first_collision: Option<u64>,
    classical_answer: Option<u64>,
    quantum: Option<(u64, u64)>,
}

/// Runs the experiment for every order and budget.
pub fn run_separation_experiment(config: &SeparationConfig) -> Result<SeparationReport> {
    if config.trials == 0 {
        return Err(Error::Precondition("at least one trial is needed".into()));
    }
    if let Some(&n) = config.orders.iter().find(|&&n| !is_prime(n)) {
        return Err(Error::NotPrime(n));
    }
    let mut rows = Vec::new();
    let mut orders = Vec::new();
    let mut audit = config.audit.then(Vec::new);

    for &n in &config.orders {
        let budgets = config.budgets.clone().unwrap_or_else(|| default_budgets(n));
        let group = GroupSpec::cyclic(n)?;
        let one = GroupElement::from_coords_unchecked(vec![1]);
        let plan = CollisionPlan::new(n, n as usize)?;
        let quantum_trials = config.quantum_trials.min(config.trials);
        let solver = if quantum_trials > 0 {
            Some(QuantumSolver::new(&CharacterBasis::product(&group), &Limits::default())?)
        } else {
            None
        };

        let outcomes: Vec<Result<TrialOutcome>> = par::map_collect(config.trials, |t| {
            let seed = trial_seed(config.seed, n, t);
            let template = BlackBox::random_diagonal(&group, seed);
            let s = template.audit().psi.apply_index(1) as u64;
            let mut cells = Vec::with_capacity(budgets.len());
            for &m in &budgets {
                let sol = plan.execute(&mut template.clone(), m as usize)?;
                cells.push((sol.psi_one.is_some(), sol.psi_one.map_or(true, |v| v == s)));
            }
            let full = plan.execute(&mut template.clone(), n as usize)?;
            let quantum = match &solver {
                Some(solver) if t < quantum_trials => {
                    let mut bb = template.clone();
                    let sol = solver.solve(&mut bb, &one)?;
                    Some((sol.value.coords()[0], sol.queries))
                }
                _ => None,
            };
            Ok(TrialOutcome {
                s,
                seed,
                cells,
                first_collision: full.psi_one.map(|_| full.queries),
                classical_answer: full.psi_one,
                quantum,
            })
        });
        let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

        let quantum_runs: Vec<_> = outcomes.iter().filter_map(|o| o.quantum.map(|q| (o.s, q))).collect();
        let quantum_queries = quantum_runs.iter().map(|&(_, (_, q))| q).max().unwrap_or(0);
        let quantum_correct_rate = if quantum_runs.is_empty() {
            0.0
        } else {
            quantum_runs.iter().filter(|&&(s, (v, _))| v == s).count() as f64 / quantum_runs.len() as f64
        };

        let mut wrong = outcomes
            .iter()
            .filter(|o| o.classical_answer.is_some_and(|v| v != o.s))
            .count();
        let threshold = lower_bound_threshold(n);
        let trials = config.trials;
        for (i, &m) in budgets.iter().enumerate() {
            let collisions = outcomes.iter().filter(|o| o.cells[i].0).count();
            wrong += outcomes.iter().filter(|o| !o.cells[i].1).count();
            let rate = collisions as f64 / trials as f64;
            let stderr = (rate * (1.0 - rate) / trials as f64).sqrt();
            let bound = collision_bound(n, m);
            rows.push(SeparationRow {
                n,
                m,
                trials,
                collisions,
                collision_rate: rate,
                stderr,
                paper_bound: bound,
                threshold,
                guess_success: guess_success(n, m),
                quantum_queries,
                quantum_correct_rate,
                seed: config.seed,
                within_bound: bound.map_or(true, |b| rate <= b + 3.0 * stderr),
            });
        }

        let mut firsts: Vec<u64> = outcomes.iter().map(|o| o.first_collision.unwrap_or(u64::MAX)).collect();
        firsts.sort_unstable();
        let median = firsts[(firsts.len() - 1) / 2];
        orders.push(OrderSummary {
            n,
            trials,
            median_first_collision: (median != u64::MAX).then_some(median),
            quantum_trials: quantum_runs.len(),
            quantum_queries,
            quantum_correct_rate,
            wrong_classical_answers: wrong,
        });

        if let Some(records) = audit.as_mut() {
            records.extend(outcomes.iter().enumerate().map(|(t, o)| TrialRecord {
                n,
                trial: t,
                seed: o.seed,
                s: o.s,
                first_collision: o.first_collision,
                classical_answer: o.classical_answer,
                quantum_answer: o.quantum.map(|q| q.0),
                quantum_queries: o.quantum.map(|q| q.1),
            }));
        }
    }

    Ok(SeparationReport {
        config: config.clone(),
        rows,
        orders,
        audit,
    })
}
