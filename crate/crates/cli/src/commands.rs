use std::fmt::Write as _;

use clap::ValueEnum;
use qftlab_core::experiment::{run_separation_experiment, SeparationConfig, SeparationReport};
use qftlab_core::hidden::{BlackBox, QuantumSolver};
use qftlab_core::quantum::{a_psi, b_psi, permutation_op, qft_matrix, translation_op, DenseMatrix};
use qftlab_core::suite::{verify_target, MapSelection, VerifyReport};
use qftlab_core::{Error, GroupElement, Limits, Target};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{pick, FileConfig, Format};
use crate::output::{self, short};
use crate::{DumpArgs, SeparationArgs, SolveArgs, VerifyArgs};

/// Targets up to this order have every map checked by default.
const VERIFY_ALL_MAPS_UP_TO: usize = 64;
/// Maps sampled by default on larger targets.
const VERIFY_DEFAULT_SAMPLE: usize = 8;

pub struct Context {
    pub file: FileConfig,
    pub env_seed: Option<u64>,
    pub limits: Limits,
}

impl Context {
    fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.file.seed).or(self.env_seed).unwrap_or(0)
    }

    fn format(&self, flag: Option<Format>) -> Format {
        pick(flag, self.file.format, || Format::Table)
    }

    fn target(&self, positional: Option<String>) -> Result<Target, Failure> {
        let text = positional
            .or_else(|| self.file.target.clone())
            .ok_or_else(|| Failure::Usage("no target given (e.g. Z4xZ2, GF(9), M2(Z3))".into()))?;
        text.parse().map_err(Failure::from)
    }
}

pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input; exit status 2.
    Usage(String),
    /// A check that should hold did not; exit status 1.
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Integrity(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn pass_fail(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn table_only(format: Format, command: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        Err(Failure::Usage(format!("{command} has no CSV output; use table or json")))
    } else {
        Ok(())
    }
}

pub fn verify(ctx: &Context, args: VerifyArgs) -> Result<Outcome, Failure> {
    let target = ctx.target(args.target)?;
    let format = ctx.format(args.format);
    table_only(format, "verify")?;
    let seed = ctx.seed(args.seed);
    let order = target.group().order();
    let selection = match args.maps.or(ctx.file.maps) {
        Some(count) => MapSelection::Sample { count, seed },
        None if order <= VERIFY_ALL_MAPS_UP_TO => MapSelection::All,
        None => MapSelection::Sample {
            count: VERIFY_DEFAULT_SAMPLE,
            seed,
        },
    };
    let report = verify_target(&target, selection, &ctx.limits)?;
    let passed = report.passed();
    let text = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["seed"] = json!(seed);
            value["max_residual"] = json!(report.max_residual());
            value["passed"] = json!(passed);
            output::json(&value)
        }
        _ => verify_table(&report, seed),
    };
    Ok(Outcome { text, passed })
}

fn verify_table(report: &VerifyReport, seed: u64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "target     {}", report.target);
    let _ = writeln!(out, "order      {}", report.order);
    let _ = writeln!(out, "maps       {} of {}", report.maps_checked, report.maps_total);
    let _ = writeln!(out, "seed       {seed}");
    let _ = writeln!(out, "tolerance  {}", short(report.tolerance));
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| {
            let value = match c.name.as_str() {
                "completeness" | "compatibility" => if c.passed { "yes" } else { "no" }.to_string(),
                _ => short(c.value),
            };
            vec![c.name.clone(), value, pass_fail(c.passed).into(), c.detail.clone()]
        })
        .collect();
    out.push_str(&output::table(&["check", "value", "result", "detail"], &rows));
    out.push('\n');
    let _ = writeln!(out, "max residual {}", short(report.max_residual()));
    let _ = writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" });
    out
}

pub fn solve(ctx: &Context, args: SolveArgs) -> Result<Outcome, Failure> {
    let target = ctx.target(args.target)?;
    let format = ctx.format(args.format);
    table_only(format, "solve")?;
    let seed = ctx.seed(args.seed);
    let g = target.group();
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = match (&args.s, args.random) {
        (Some(text), false) => target.parse_element(text)?,
        (None, true) => g.element_of(rng.gen_range(0..n))?,
        _ => return Err(Failure::Usage("give either --s or --random".into())),
    };
    let a = match &args.a {
        Some(text) => target.parse_element(text)?,
        None => g.element(&vec![1; g.rank()])?,
    };
    let (psi, phi) = target.structured_pair(&s)?;
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(&mut rng);
    let mut bb = BlackBox::new(psi, pi)?;

    let solver = QuantumSolver::new(&target.basis(), &ctx.limits)?;
    let solution = solver.solve(&mut bb, &a)?;
    // On matrix rings the measured value is the partner map φ(a) = a·S.
    let label = match target {
        Target::MatrixRing(_) => "phi(a)",
        _ => "psi(a)",
    };
    let expected = phi.apply(&a)?;
    let matches = solution.value == expected;
    let passed = solution.queries == 1 && (!args.audit || matches);

    let value_text = target.format_element(&solution.value);
    let text = match format {
        Format::Json => {
            let mut value = json!({
                "target": target.to_string(),
                "a": target.format_element(&a),
                "seed": seed,
                "value": value_text,
                "probability": solution.probability,
                "queries": solution.queries,
                "passed": passed,
            });
            if args.audit {
                value["audit"] = json!({
                    "s": target.format_element(&s),
                    "expected": target.format_element(&expected),
                    "match": matches,
                });
            }
            output::json(&value)
        }
        _ => {
            let mut out = format!("{label}={value_text}, queries={}\n", solution.queries);
            let _ = writeln!(out, "target       {target}");
            let _ = writeln!(out, "a            {}", target.format_element(&a));
            let _ = writeln!(out, "seed         {seed}");
            let _ = writeln!(out, "probability  {}", short(solution.probability));
            if args.audit {
                let _ = writeln!(
                    out,
                    "audit        s={}, expected {label}={}, {}",
                    target.format_element(&s),
                    target.format_element(&expected),
                    if matches { "match" } else { "MISMATCH" }
                );
            }
            out
        }
    };
    Ok(Outcome { text, passed })
}

pub fn separation(ctx: &Context, args: SeparationArgs) -> Result<Outcome, Failure> {
    let defaults = SeparationConfig::default();
    let file = &ctx.file;
    let config = SeparationConfig {
        orders: pick(args.orders, file.orders.clone(), || defaults.orders.clone()),
        trials: pick(args.trials, file.trials, || defaults.trials),
        budgets: args.budgets.or_else(|| file.budgets.clone()),
        seed: ctx.seed(args.seed),
        quantum_trials: pick(args.quantum_trials, file.quantum_trials, || defaults.quantum_trials),
        audit: args.audit,
    };
    let format = ctx.format(args.format);
    if config.audit && format != Format::Json {
        return Err(Failure::Usage("--audit needs --format json".into()));
    }
    if config.orders.is_empty() {
        return Err(Failure::Usage("--orders is empty".into()));
    }
    let report = run_separation_experiment(&config).map_err(|e| match e {
        Error::NotPrime(n) => Failure::Usage(format!("order {n} is not prime; the collision solver needs Z_p")),
        other => other.into(),
    })?;
    let passed = report.passed();
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["passed"] = json!(passed);
            output::json(&value)
        }
        Format::Table => separation_table(&report),
    };
    Ok(Outcome { text, passed })
}

fn separation_table(report: &SeparationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "seed {}, {} trials per cell; measured columns are Monte Carlo estimates, \
         bound/threshold/guess are closed-form",
        report.config.seed, report.config.trials
    );
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.m.to_string(),
                format!("{:.5}", r.collision_rate),
                format!("{:.5}", r.stderr),
                r.paper_bound.map_or_else(|| "inf".into(), |b| format!("{b:.5}")),
                r.threshold.to_string(),
                format!("{:.5}", r.guess_success),
                r.quantum_queries.to_string(),
                format!("{:.3}", r.quantum_correct_rate),
                pass_fail(r.within_bound).into(),
            ]
        })
        .collect();
    out.push_str(&output::table(
        &[
            "n",
            "m",
            "collision_rate",
            "stderr",
            "bound",
            "threshold",
            "guess",
            "q_queries",
            "q_correct",
            "within",
        ],
        &rows,
    ));
    out.push('\n');
    let rows: Vec<Vec<String>> = report
        .orders
        .iter()
        .map(|o| {
            vec![
                o.n.to_string(),
                o.median_first_collision.map_or_else(|| "none".into(), |m| m.to_string()),
                o.quantum_trials.to_string(),
                o.quantum_queries.to_string(),
                format!("{:.3}", o.quantum_correct_rate),
                o.wrong_classical_answers.to_string(),
            ]
        })
        .collect();
    out.push_str(&output::table(
        &[
            "n",
            "median_first_collision",
            "q_trials",
            "q_queries",
            "q_correct",
            "wrong_classical",
        ],
        &rows,
    ));
    out.push('\n');
    let _ = writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorName {
    /// `F_G`
    Qft,
    /// `F_G^†`
    QftAdjoint,
    /// `P_s|y⟩ = |y + s⟩`
    Translation,
    /// `A_ψ|x⟩|y⟩ = |x⟩|y + ψ(x)⟩`
    APsi,
    /// `B_φ|x⟩|y⟩ = |x + φ(y)⟩|y⟩`
    BPsi,
    /// `U_π` for a seeded uniform `π`
    Permutation,
}

pub fn dump_operator(ctx: &Context, args: DumpArgs) -> Result<Outcome, Failure> {
    let target = ctx.target(Some(args.target))?;
    let g = target.group();
    let n = g.order();
    let basis = target.basis();
    let s = || -> Result<GroupElement, Failure> {
        let text = args
            .s
            .as_deref()
            .ok_or_else(|| Failure::Usage("this operator needs --s".into()))?;
        Ok(target.parse_element(text)?)
    };
    let two_register = |dim: usize| -> Result<(), Failure> {
        if dim > ctx.limits.dense_cap {
            Err(Error::CapExceeded {
                order: dim,
                cap: ctx.limits.dense_cap,
            }
            .into())
        } else {
            Ok(())
        }
    };
    let matrix: DenseMatrix = match args.operator {
        OperatorName::Qft => qft_matrix(&basis, &ctx.limits)?,
        OperatorName::QftAdjoint => qft_matrix(&basis, &ctx.limits)?.adjoint(),
        OperatorName::Translation => translation_op(&g, &s()?)?.to_dense(),
        OperatorName::APsi => {
            two_register(n * n)?;
            a_psi(&target.structured_pair(&s()?)?.0).to_dense()
        }
        OperatorName::BPsi => {
            two_register(n * n)?;
            b_psi(&target.structured_pair(&s()?)?.1).to_dense()
        }
        OperatorName::Permutation => {
            let mut pi: Vec<usize> = (0..n).collect();
            pi.shuffle(&mut ChaCha8Rng::seed_from_u64(ctx.seed(args.seed)));
            permutation_op(&g, &pi)?.to_dense()
        }
    };
    let name = args
        .operator
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let mut value = json!({
        "operator": name,
        "target": target.to_string(),
        "dim": matrix.dim(),
        "matrix": matrix.to_json(),
    });
    if let Some(text) = &args.s {
        value["s"] = Value::String(text.clone());
    }
    if args.operator == OperatorName::Permutation {
        value["seed"] = json!(ctx.seed(args.seed));
    }
    Ok(Outcome {
        text: output::json(&value),
        passed: true,
    })
}
