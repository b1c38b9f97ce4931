use std::f64::consts::LN_2;
use std::io::{self, Write};
use std::path::Path;

use infocausal::analysis::{ic_verdict, IcVerdict, Verdict, VerdictForm};
use infocausal::bits::BitString;
use infocausal::boxes::{inner_product_isotropic_box, BiasVector};
use infocausal::dist::{
    ancilla_evolution_slack, conditional_entropy, entropy_inequality_suite,
    random_stochastic_matrix, shannon_entropy, JointDistribution, Variable, CONDITIONAL_POSITIVITY,
    ITERATED_CONDITIONAL_SUBADDITIVITY, STRONG_SUBADDITIVITY, SUBADDITIVITY,
};
use infocausal::games::{
    evaluate_inner_product, evaluate_rac, evaluate_rac_with, restrict_to_hamming_weight_one,
    GameReport, InnerProductGame, Limits, RacGame,
};
use infocausal::gram::{
    gram_construct, gram_to_box, quadratic_bound_check, BoundKind, BoundReport, BoundStatus,
};
use infocausal::strategies::{
    classical_oracle, classical_success_formula, pyramid_strategy, OracleSummary, Strategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{
    BoundsArgs, DemoArgs, EntropySuiteArgs, Failure, Format, InnerProductArgs, OracleArgs, RacArgs,
};

type Outcome = Result<(), Failure>;

/// Largest pyramid depth evaluated exactly in the demo.
const DEMO_EXACT_DEPTH: usize = 2;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed {}: {e}", path.display())))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistFile {
    Weights(Vec<f64>),
    Joint(JointDistribution),
}

/// Weights over Alice's `2^n` strings, first bit most significant.
fn load_x_dist(path: &Path, n: usize) -> Result<Vec<f64>, Failure> {
    let weights = match read_json::<DistFile>(path)? {
        DistFile::Weights(w) => w,
        DistFile::Joint(joint) => {
            if joint.variables().len() != n || joint.variables().iter().any(|v| v.cardinality != 2)
            {
                return Err(Failure::Usage(format!(
                    "{} must be a joint over {n} bits",
                    path.display()
                )));
            }
            joint.table().to_vec()
        }
    };
    if weights.len() != 1 << n {
        return Err(Failure::Usage(format!(
            "{} has {} weights, expected {}",
            path.display(),
            weights.len(),
            1usize << n
        )));
    }
    Ok(weights)
}

fn check_cap(n: usize, cap: usize) -> Outcome {
    if n > cap {
        return Err(Failure::Resource(format!(
            "n = {n} exceeds the enumeration cap {cap}"
        )));
    }
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Usage(e.to_string())),
        _ => Ok(()),
    }
}

fn print_csv(header: &[&str], rows: Vec<Vec<String>>) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout());
    let fail = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    w.flush().map_err(|e| Failure::Usage(e.to_string()))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Saturated => "saturated",
        Verdict::Violated => "violated",
    }
}

fn status_name(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Pass => "pass",
        BoundStatus::Saturated => "saturated",
        BoundStatus::Violated => "violated",
    }
}

fn print_bound_table(bounds: &[BoundReport]) {
    println!("{:<14}{:>12}{:>12}  status", "bound", "lhs", "rhs");
    for b in bounds {
        println!(
            "{:<14}{:>12.6}{:>12.6}  {}",
            b.kind,
            b.lhs,
            b.rhs,
            status_name(b.status)
        );
    }
}

#[derive(Serialize)]
struct RacOutput<'a> {
    strategy: String,
    report: &'a GameReport,
    verdict: &'a IcVerdict,
}

pub fn rac(a: &RacArgs) -> Outcome {
    let strategy = Strategy::parse(&a.strategy, a.n, a.m)?;
    check_cap(a.n, a.cap)?;
    let mut game = RacGame::new(a.n, a.m)?;
    if let Some(path) = &a.dist {
        game = game.with_input_dist(load_x_dist(path, a.n)?)?;
    }
    let limits = Limits {
        max_n: a.cap,
        ..Limits::default()
    };
    let report = evaluate_rac_with(&game, &strategy, &limits)?;
    let verdict = ic_verdict(&report, a.m)?;

    match a.output.format {
        Format::Json => print_json(&RacOutput {
            strategy: strategy.to_string(),
            report: &report,
            verdict: &verdict,
        })?,
        Format::Csv => print_csv(
            &["k", "E_k", "I_c"],
            report
                .bob_inputs
                .iter()
                .zip(report.bias_per_bob_input.values())
                .zip(&report.information_per_k)
                .map(|((k, e), i)| vec![k.to_string(), e.to_string(), i.to_string()])
                .collect(),
        )?,
        Format::Table => {
            println!("strategy  {strategy}");
            println!("n, m      {}, {}", a.n, a.m);
            println!("P         {:.6}", report.success_probability);
            println!("I         {:.6} bits", verdict.i_bits);
            println!();
            println!("{:>3}{:>12}{:>12}", "k", "E_k", "I_c");
            for ((k, e), i) in report
                .bob_inputs
                .iter()
                .zip(report.bias_per_bob_input.values())
                .zip(&report.information_per_k)
            {
                println!("{k:>3}{e:>12.6}{i:>12.6}");
            }
            println!();
            for t in &report.entropic_terms {
                println!("{:<42}{:>12.6}", t.label, t.value);
            }
            println!();
            match verdict.form {
                VerdictForm::Information => println!(
                    "verdict   {}  (I = {:.6}, H(alpha) = {:.6}, m = {})",
                    verdict_name(verdict.satisfied),
                    verdict.i_bits,
                    verdict.bound,
                    a.m
                ),
                VerdictForm::Entropic => println!(
                    "verdict   {}  (sum_k H(x_k|beta_k) = {:.6}, H(x) - H(alpha) = {:.6})",
                    verdict_name(verdict.satisfied),
                    verdict.chain_terms.first().map_or(f64::NAN, |t| t.value),
                    verdict.bound
                ),
            }
        }
    }
    if a.expect_holds && verdict.satisfied == Verdict::Violated {
        return Err(Failure::Violated);
    }
    Ok(())
}

#[derive(Serialize)]
struct InnerProductOutput<'a> {
    report: &'a GameReport,
    bounds: &'a [BoundReport],
}

pub fn inner_product(a: &InnerProductArgs) -> Outcome {
    check_cap(a.n, Limits::default().max_n)?;
    let mut game = InnerProductGame::new(a.n)?;
    if let Some(path) = &a.dist {
        game = game.with_x_dist(load_x_dist(path, a.n)?)?;
    }
    if a.weight_one {
        game = restrict_to_hamming_weight_one(&game);
    }
    let resource = match (a.bias, &a.biases) {
        (Some(e), _) => inner_product_isotropic_box(a.n, e)?,
        (None, Some(path)) => {
            let targets: BiasVector = read_json(path)?;
            gram_to_box(&gram_construct(&targets, a.n)?)?
        }
        (None, None) => return Err(Failure::Usage("give --bias or --biases".into())),
    };
    let report = evaluate_inner_product(&game, &resource)?;
    let biases = &report.bias_per_bob_input;
    let bounds = vec![
        quadratic_bound_check(biases, &BoundKind::InnerProduct)?,
        quadratic_bound_check(
            biases,
            &BoundKind::Generalized {
                x_dist: game.x_dist().to_vec(),
            },
        )?,
    ];

    match a.output.format {
        Format::Json => print_json(&InnerProductOutput {
            report: &report,
            bounds: &bounds,
        })?,
        Format::Csv => print_csv(
            &["y", "weight", "E_y"],
            report
                .bob_inputs
                .iter()
                .zip(&report.bob_input_weights)
                .zip(biases.values())
                .map(|((y, w), e)| vec![y.to_string(), w.to_string(), e.to_string()])
                .collect(),
        )?,
        Format::Table => {
            println!("n         {}", a.n);
            println!("P         {:.6}", report.success_probability);
            println!();
            println!(
                "{:>width$}{:>12}{:>12}",
                "y",
                "weight",
                "E_y",
                width = a.n.max(1) + 2
            );
            for ((y, w), e) in report
                .bob_inputs
                .iter()
                .zip(&report.bob_input_weights)
                .zip(biases.values())
            {
                let label = BitString::new(a.n, *y)?.to_string();
                println!("{label:>width$}{w:>12.6}{e:>12.6}", width = a.n.max(1) + 2);
            }
            println!();
            print_bound_table(&bounds);
        }
    }
    if a.expect_holds && bounds.iter().any(|b| b.status == BoundStatus::Violated) {
        return Err(Failure::Violated);
    }
    Ok(())
}

pub fn bounds(a: &BoundsArgs) -> Outcome {
    let biases: BiasVector = match (&a.biases, &a.strategy) {
        (Some(path), _) => read_json(path)?,
        (None, Some(spec)) => {
            let strategy = Strategy::parse(spec, a.n, a.m)?;
            check_cap(a.n, Limits::default().max_n)?;
            evaluate_rac(&RacGame::new(a.n, a.m)?, &strategy)?.bias_per_bob_input
        }
        (None, None) => return Err(Failure::Usage("give --biases or --strategy".into())),
    };
    let x_dist = match &a.dist {
        Some(path) => {
            check_cap(a.n, Limits::default().max_n)?;
            load_x_dist(path, a.n)?
        }
        None => vec![1.0],
    };
    let reports = vec![
        quadratic_bound_check(&biases, &BoundKind::IcEntropic { message_bits: a.m })?,
        quadratic_bound_check(&biases, &BoundKind::InnerProduct)?,
        quadratic_bound_check(&biases, &BoundKind::Generalized { x_dist })?,
    ];
    match a.output.format {
        Format::Json => print_json(&reports)?,
        Format::Csv => print_csv(
            &["kind", "lhs", "rhs", "status"],
            reports
                .iter()
                .map(|b| {
                    vec![
                        b.kind.clone(),
                        b.lhs.to_string(),
                        b.rhs.to_string(),
                        status_name(b.status).into(),
                    ]
                })
                .collect(),
        )?,
        Format::Table => print_bound_table(&reports),
    }
    if a.expect_holds && reports.iter().any(|b| b.status == BoundStatus::Violated) {
        return Err(Failure::Violated);
    }
    Ok(())
}

#[derive(Serialize)]
struct SuiteRow {
    name: &'static str,
    min_slack: f64,
    holds: bool,
}

#[derive(Serialize)]
struct SuiteOutput {
    seed: Option<u64>,
    trials: usize,
    rows: Vec<SuiteRow>,
    holds: bool,
}

const SUITE_TOL: f64 = 1e-9;

struct SuiteTally {
    names: Vec<&'static str>,
    mins: Vec<f64>,
}

impl SuiteTally {
    fn new() -> Self {
        Self {
            names: Vec::new(),
            mins: Vec::new(),
        }
    }

    fn record(&mut self, name: &'static str, slack: f64) {
        match self.names.iter().position(|n| *n == name) {
            Some(i) => self.mins[i] = self.mins[i].min(slack),
            None => {
                self.names.push(name);
                self.mins.push(slack);
            }
        }
    }

    /// Records every inequality for one joint. `x` needs at least one variable.
    fn check(&mut self, dist: &JointDistribution, x: &[&str], y: &[&str], z: &[&str]) -> Outcome {
        let suite = entropy_inequality_suite(dist, x, y, z)?;
        for name in [
            SUBADDITIVITY,
            STRONG_SUBADDITIVITY,
            ITERATED_CONDITIONAL_SUBADDITIVITY,
            CONDITIONAL_POSITIVITY,
        ] {
            let slack = suite.get(name).expect("suite reports every inequality");
            self.record(name, slack);
        }
        let xy: Vec<&str> = x.iter().chain(y).copied().collect();
        let chain = shannon_entropy(dist, &xy)?
            - shannon_entropy(dist, x)?
            - conditional_entropy(dist, y, x)?;
        self.record("chain_rule", -chain.abs());
        Ok(())
    }

    fn output(self, seed: Option<u64>, trials: usize) -> SuiteOutput {
        let rows: Vec<SuiteRow> = self
            .names
            .into_iter()
            .zip(self.mins)
            .map(|(name, min_slack)| SuiteRow {
                name,
                min_slack,
                holds: min_slack >= -SUITE_TOL,
            })
            .collect();
        let holds = rows.iter().all(|r| r.holds);
        SuiteOutput {
            seed,
            trials,
            rows,
            holds,
        }
    }
}

pub fn entropy_suite(a: &EntropySuiteArgs) -> Outcome {
    let mut tally = SuiteTally::new();
    let output = if let Some(path) = &a.dist {
        let dist: JointDistribution = read_json(path)?;
        let names: Vec<&str> = dist.names().collect();
        if names.len() < 3 {
            return Err(Failure::Usage(
                "the joint needs at least three variables".into(),
            ));
        }
        let split = names.len() - 2;
        tally.check(
            &dist,
            &names[..split],
            &names[split..split + 1],
            &names[split + 1..],
        )?;
        tally.output(None, 1)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        for _ in 0..a.trials {
            let count = rng.gen_range(4..=5);
            let vars: Vec<Variable> = (0..count)
                .map(|i| Variable::new(format!("v{i}"), rng.gen_range(2..=3)))
                .collect();
            let dist = JointDistribution::random(vars, &mut rng)?;
            let owned: Vec<String> = dist.names().map(str::to_string).collect();
            let names: Vec<&str> = owned.iter().map(String::as_str).collect();
            tally.check(&dist, &names[..2], &names[2..3], &names[3..])?;

            let target = rng.gen_range(0..names.len());
            let card = dist.variables()[target].cardinality;
            let matrix = random_stochastic_matrix(rng.gen_range(1..=4), card, &mut rng);
            let rest: Vec<&str> = names
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != target)
                .map(|(_, n)| *n)
                .collect();
            let slack = ancilla_evolution_slack(&dist, &rest, names[target], &matrix)?;
            tally.record("local_transformation", slack);
        }
        tally.output(Some(a.seed), a.trials)
    };

    match a.output.format {
        Format::Json => print_json(&output)?,
        Format::Csv => print_csv(
            &["inequality", "min_slack", "holds"],
            output
                .rows
                .iter()
                .map(|r| vec![r.name.into(), r.min_slack.to_string(), r.holds.to_string()])
                .collect(),
        )?,
        Format::Table => {
            match output.seed {
                Some(seed) => println!("{} random joints, seed {seed}", output.trials),
                None => println!("one joint from file"),
            }
            println!();
            println!("{:<38}{:>14}  holds", "inequality", "min slack");
            for r in &output.rows {
                println!("{:<38}{:>14.3e}  {}", r.name, r.min_slack, r.holds);
            }
        }
    }
    if a.expect_holds && !output.holds {
        return Err(Failure::Violated);
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleOutput {
    n: usize,
    m: usize,
    #[serde(flatten)]
    summary: OracleSummary,
    /// Majority-vote success for one-bit messages.
    closed_form: Option<f64>,
}

pub fn oracle(a: &OracleArgs) -> Outcome {
    let limits = Limits::default();
    check_cap(a.n, limits.max_n)?;
    let game = RacGame::new(a.n, a.m)?;
    let summary = classical_oracle(&game, a.cap, &limits)?;
    let output = OracleOutput {
        n: a.n,
        m: a.m,
        closed_form: (a.m == 1).then(|| classical_success_formula(a.n)),
        summary,
    };
    match a.output.format {
        Format::Json => print_json(&output)?,
        Format::Csv => print_csv(
            &[
                "n",
                "m",
                "strategies",
                "max_success",
                "max_information",
                "max_sum_squared_bias",
            ],
            vec![vec![
                output.n.to_string(),
                output.m.to_string(),
                output.summary.strategies.to_string(),
                output.summary.max_success.to_string(),
                output.summary.max_information.to_string(),
                output.summary.max_sum_squared_bias.to_string(),
            ]],
        )?,
        Format::Table => {
            println!("n, m                  {}, {}", output.n, output.m);
            println!("strategies            {}", output.summary.strategies);
            println!("max P                 {:.6}", output.summary.max_success);
            println!(
                "max I                 {:.6}",
                output.summary.max_information
            );
            println!(
                "max sum_k E_k^2       {:.6}",
                output.summary.max_sum_squared_bias
            );
            if let Some(p) = output.closed_form {
                println!("majority closed form  {p:.6}");
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DemoRow {
    depth: usize,
    n: f64,
    bias_per_k: f64,
    sum_squared_bias: f64,
    bound: f64,
    violates: bool,
    /// `Σ_k E_k²` from exact enumeration of the pyramid, shallow depths only.
    exact: Option<f64>,
}

#[derive(Serialize)]
struct DemoOutput {
    note: &'static str,
    bias: f64,
    rows: Vec<DemoRow>,
}

const DEMO_NOTE: &str = "numerical illustration: sum_k E_k^2 = (2E^2)^L for a depth-L pyramid \
                         against the bound 2 ln 2 for a one-bit message";

pub fn tsirelson_demo(a: &DemoArgs) -> Outcome {
    if !(0.0..=1.0).contains(&a.bias) {
        return Err(Failure::Usage(format!("bias {} outside [0, 1]", a.bias)));
    }
    if a.cap == 0 || a.cap > 60 {
        return Err(Failure::Usage(format!(
            "depth cap {} outside 1..=60",
            a.cap
        )));
    }
    let bound = 2.0 * LN_2;
    let mut rows = Vec::with_capacity(a.cap);
    for depth in 1..=a.cap {
        let sum = (2.0 * a.bias * a.bias).powi(depth as i32);
        let exact = if depth <= DEMO_EXACT_DEPTH {
            let n = 1 << depth;
            let report = evaluate_rac(&RacGame::new(n, 1)?, &pyramid_strategy(a.bias, depth)?)?;
            Some(report.bias_per_bob_input.sum_of_squares())
        } else {
            None
        };
        rows.push(DemoRow {
            depth,
            n: 2f64.powi(depth as i32),
            bias_per_k: a.bias.powi(depth as i32),
            sum_squared_bias: sum,
            bound,
            violates: sum > bound,
            exact,
        });
    }
    let output = DemoOutput {
        note: DEMO_NOTE,
        bias: a.bias,
        rows,
    };
    match a.output.format {
        Format::Json => print_json(&output)?,
        Format::Csv => print_csv(
            &["L", "n", "E^L", "sum_E_k^2", "2ln2", "violates", "exact"],
            output
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.depth.to_string(),
                        r.n.to_string(),
                        r.bias_per_k.to_string(),
                        r.sum_squared_bias.to_string(),
                        r.bound.to_string(),
                        r.violates.to_string(),
                        r.exact.map(|v| v.to_string()).unwrap_or_default(),
                    ]
                })
                .collect(),
        )?,
        Format::Table => {
            println!("{DEMO_NOTE}");
            println!("E = {:.6}", a.bias);
            println!();
            println!(
                "{:>3}{:>22}{:>12}{:>14}{:>12}  {:<9}{:>12}",
                "L", "n", "E^L", "sum E_k^2", "2 ln 2", "violates", "exact"
            );
            for r in &output.rows {
                let exact = r
                    .exact
                    .map(|v| format!("{v:.6}"))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:>3}{:>22}{:>12.6}{:>14.6}{:>12.6}  {:<9}{:>12}",
                    r.depth, r.n, r.bias_per_k, r.sum_squared_bias, r.bound, r.violates, exact
                );
            }
        }
    }
    Ok(())
}
