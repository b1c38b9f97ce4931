//! The random-access-coding game, the inner-product game, and their exact
//! evaluation.
//!
//! Evaluation enumerates Alice's inputs, Bob's index and every joint outcome
//! of the boxes a strategy consumes, weighting each branch by its exact
//! probability. Nothing is sampled.
//!
//! Bob's index `k` is 0-based in code and 1-based in reports: the entry
//! `bob_inputs[i] = i + 1` of a random-access-coding report is the `k` of
//! the game's definition.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{self, ChainTerm};
use crate::bits;
use crate::boxes::{inner_product_correlator, BiasVector, NoSignallingBox};
use crate::dist::{mutual_information, JointDistribution, Variable};
use crate::error::{Error, Result};
use crate::strategies::{Strategy, StrategyKind, Wiring};

/// Variable names used in report joints.
pub const ALPHA: &str = "alpha";
pub const BETA: &str = "beta";
pub const SHARED: &str = "B";

pub fn bit_name(k: usize) -> String {
    format!("x{}", k + 1)
}

/// Caps that keep exact enumeration tractable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of Alice's bits.
    pub max_n: usize,
    /// Largest `2^n · n · 4^boxes` enumeration.
    pub max_work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_n: 8,
            max_work: 1 << 28,
        }
    }
}

fn check_distribution(p: &[f64], len: usize, what: &str) -> Result<()> {
    if p.len() != len {
        return Err(Error::Shape(format!(
            "{what} has {} entries, expected {len}",
            p.len()
        )));
    }
    crate::check_weights(p).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::Normalization(format!("{what}: {msg}")),
        other => other,
    })
}

/// Alice holds `n` bits, sends `m` bits; Bob must output `x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RacGame {
    n: usize,
    m: usize,
    input_dist: Vec<f64>,
    k_dist: Vec<f64>,
}

impl RacGame {
    /// Uniform `x` and uniform `k`.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || n > bits::MAX_LEN {
            return Err(Error::InvalidArgument(format!("n = {n} out of range")));
        }
        if m > n {
            return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
        }
        let size = 1usize << n;
        Ok(Self {
            n,
            m,
            input_dist: vec![1.0 / size as f64; size],
            k_dist: vec![1.0 / n as f64; n],
        })
    }

    /// Distribution over packed strings `x` (first bit most significant).
    pub fn with_input_dist(mut self, p: Vec<f64>) -> Result<Self> {
        check_distribution(&p, 1 << self.n, "input distribution")?;
        self.input_dist = p;
        Ok(self)
    }

    /// Distribution over Bob's index, entry `i` for `k = i + 1`.
    pub fn with_k_dist(mut self, q: Vec<f64>) -> Result<Self> {
        check_distribution(&q, self.n, "index distribution")?;
        self.k_dist = q;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn input_dist(&self) -> &[f64] {
        &self.input_dist
    }

    pub fn k_dist(&self) -> &[f64] {
        &self.k_dist
    }

    /// Distribution of `x` as a joint over the bit variables `x1..xn`.
    pub fn input_joint(&self) -> JointDistribution {
        let vars = (0..self.n).map(|k| Variable::bit(bit_name(k))).collect();
        JointDistribution::new(vars, self.input_dist.clone())
            .expect("input distribution validated on construction")
    }
}

/// Alice gets `x`, Bob gets `y` (both `n`-bit strings); they win when
/// `a ⊕ b = x·y`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductGame {
    n: usize,
    x_dist: Vec<f64>,
    y_dist: Vec<f64>,
    /// Order in which Bob's inputs are reported.
    y_order: Vec<usize>,
}

impl InnerProductGame {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > bits::MAX_LEN {
            return Err(Error::InvalidArgument(format!("n = {n} out of range")));
        }
        let size = 1usize << n;
        Ok(Self {
            n,
            x_dist: vec![1.0 / size as f64; size],
            y_dist: vec![1.0 / size as f64; size],
            y_order: (0..size).collect(),
        })
    }

    pub fn with_x_dist(mut self, p: Vec<f64>) -> Result<Self> {
        check_distribution(&p, 1 << self.n, "x distribution")?;
        self.x_dist = p;
        Ok(self)
    }

    pub fn with_y_dist(mut self, q: Vec<f64>) -> Result<Self> {
        check_distribution(&q, 1 << self.n, "y distribution")?;
        self.y_dist = q;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_dist(&self) -> &[f64] {
        &self.x_dist
    }

    pub fn y_dist(&self) -> &[f64] {
        &self.y_dist
    }
}

/// Bob's input is uniform over the `n` strings of Hamming weight one, so
/// `x·y = x_k`: the non-local version of the random-access-coding game.
/// Reports list the unit strings in order of `k`.
pub fn restrict_to_hamming_weight_one(game: &InnerProductGame) -> InnerProductGame {
    let n = game.n;
    let mut y_dist = vec![0.0; 1 << n];
    let y_order: Vec<usize> = (0..n).map(|k| bits::unit_index(n, k)).collect();
    for &y in &y_order {
        y_dist[y] = 1.0 / n as f64;
    }
    InnerProductGame {
        n,
        x_dist: game.x_dist.clone(),
        y_dist,
        y_order,
    }
}

/// Which information-causality bound applies to a report's input distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// Uniform independent bits: `I <= m`.
    MessageLength,
    /// Independent but biased bits: `I <= H(α) <= m`.
    IndependentInputs,
    /// Correlated bits: `Σ_k H(x_k|β_k) >= H(x) - H(α)`.
    Generalized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameReport {
    pub n: usize,
    pub success_probability: f64,
    /// One entry per reported Bob input, aligned with `bob_inputs`.
    #[serde(rename = "bias_per_k")]
    pub bias_per_bob_input: BiasVector,
    /// 1-based `k` for random-access coding; packed strings `y` for the
    /// inner-product game.
    pub bob_inputs: Vec<usize>,
    pub bob_input_weights: Vec<f64>,
    /// `Σ_k I(x_k : β_k)`; absent for the inner-product game.
    #[serde(rename = "I_bits")]
    pub i_bits: Option<f64>,
    /// `I(x_k : β_k)` per `k`.
    pub information_per_k: Vec<f64>,
    pub entropic_terms: Vec<ChainTerm>,
    pub bound_form: Option<BoundForm>,
    /// Per `k`, the joint over `x1..xn, alpha, beta`.
    #[serde(skip)]
    pub joints: Vec<JointDistribution>,
    /// Joint over `x1..xn, alpha, B` when every system is classical, `B`
    /// being the shared randomness.
    #[serde(skip)]
    pub classical_joint: Option<JointDistribution>,
}

impl GameReport {
    /// Joint over `(x_k, β_k)` for 0-based `k`.
    pub fn pair_joint(&self, k: usize) -> Result<JointDistribution> {
        let joint = self
            .joints
            .get(k)
            .ok_or_else(|| Error::Report(format!("no joint for k = {}", k + 1)))?;
        joint.marginal(&[&bit_name(k), BETA])
    }

    /// Bias at Bob's input with the given label.
    pub fn bias_at(&self, label: usize) -> Option<f64> {
        self.bob_inputs
            .iter()
            .position(|&l| l == label)
            .map(|i| self.bias_per_bob_input.values()[i])
    }

    /// Per-`k` success probabilities `(1 + E_k) / 2`.
    pub fn success_per_bob_input(&self) -> Vec<f64> {
        self.bias_per_bob_input
            .values()
            .iter()
            .map(|e| 0.5 * (1.0 + e))
            .collect()
    }
}

/// Conditional tables of a strategy, independent of the input distribution.
struct Conditional {
    alpha_card: usize,
    /// `[k][(x * alpha_card + α) * 2 + β] = P(α, β | x, k)`.
    per_k: Vec<Vec<f64>>,
    /// `(shared cardinality, [(x * alpha_card + α) * shared + s] = P(α, s | x))`.
    classical: Option<(usize, Vec<f64>)>,
}

fn conditional(strategy: &Strategy, limits: &Limits) -> Result<Conditional> {
    let n = strategy.n();
    let alpha_card = 1usize << strategy.m();
    let size = 1usize << n;

    if let Some((message, guess)) = strategy.deterministic_tables() {
        let mut per_k = vec![vec![0.0; size * alpha_card * 2]; n];
        let mut shared = vec![0.0; size * alpha_card];
        for (x, &alpha) in message.iter().enumerate() {
            shared[x * alpha_card + alpha] = 1.0;
            for (k, table) in per_k.iter_mut().enumerate() {
                let beta = guess[alpha * n + k] as usize;
                table[(x * alpha_card + alpha) * 2 + beta] = 1.0;
            }
        }
        return Ok(Conditional {
            alpha_card,
            per_k,
            classical: Some((1, shared)),
        });
    }

    if let StrategyKind::Mixture { parts } = strategy.kind() {
        let mut per_k = vec![vec![0.0; size * alpha_card * 2]; n];
        let mut pieces = Vec::with_capacity(parts.len());
        for (part, w) in parts {
            let c = conditional(part, limits)?;
            for (acc, table) in per_k.iter_mut().zip(&c.per_k) {
                for (a, t) in acc.iter_mut().zip(table) {
                    *a += w * t;
                }
            }
            pieces.push((*w, c.classical));
        }
        let classical = if pieces.iter().all(|(_, c)| c.is_some()) {
            let total: usize = pieces.iter().map(|(_, c)| c.as_ref().unwrap().0).sum();
            let mut table = vec![0.0; size * alpha_card * total];
            let mut offset = 0;
            for (w, c) in &pieces {
                let (card, part) = c.as_ref().unwrap();
                for row in 0..size * alpha_card {
                    for s in 0..*card {
                        table[row * total + offset + s] = w * part[row * card + s];
                    }
                }
                offset += card;
            }
            Some((total, table))
        } else {
            None
        };
        return Ok(Conditional {
            alpha_card,
            per_k,
            classical,
        });
    }

    let wiring = strategy
        .wiring()?
        .ok_or_else(|| Error::Wiring(format!("strategy `{strategy}` has no evaluation route")))?;
    let boxes = wiring.boxes().len();
    if boxes > 16 {
        return Err(Error::Resource(format!(
            "{boxes} boxes are too many to enumerate"
        )));
    }
    let work = (size as u64)
        .saturating_mul(n as u64)
        .saturating_mul(1u64 << (2 * boxes));
    if work > limits.max_work {
        return Err(Error::Resource(format!(
            "enumeration of {work} branches exceeds the cap of {}",
            limits.max_work
        )));
    }

    // One task per x; each task sums its branches in a fixed order, so the
    // result does not depend on scheduling.
    let rows: Vec<Vec<Vec<f64>>> = (0..size)
        .into_par_iter()
        .map(|x| {
            (0..n)
                .map(|k| {
                    let mut out = vec![0.0; alpha_card * 2];
                    explore(wiring.as_ref(), x, k, 0, 0, 0, 1.0, &mut out);
                    out
                })
                .collect()
        })
        .collect();
    let mut per_k = vec![vec![0.0; size * alpha_card * 2]; n];
    for (x, row) in rows.into_iter().enumerate() {
        for (k, out) in row.into_iter().enumerate() {
            per_k[k][x * alpha_card * 2..(x + 1) * alpha_card * 2].copy_from_slice(&out);
        }
    }
    Ok(Conditional {
        alpha_card,
        per_k,
        classical: None,
    })
}

#[allow(clippy::too_many_arguments)]
fn explore(
    wiring: &dyn Wiring,
    x: usize,
    k: usize,
    j: usize,
    alice: u64,
    bob: u64,
    weight: f64,
    out: &mut [f64],
) {
    let boxes = wiring.boxes();
    if j == boxes.len() {
        let alpha = wiring.message(x, alice);
        let beta = wiring.guess(alpha, k, bob);
        out[alpha * 2 + beta as usize] += weight;
        return;
    }
    let slice = boxes[j].slice(wiring.alice_input(j, x, alice), wiring.bob_input(j, k, bob));
    for a in 0..2u64 {
        for b in 0..2u64 {
            let p = slice[a as usize][b as usize];
            if p == 0.0 {
                continue;
            }
            explore(
                wiring,
                x,
                k,
                j + 1,
                alice | (a << j),
                bob | (b << j),
                weight * p,
                out,
            );
        }
    }
}

pub fn evaluate_rac(game: &RacGame, strategy: &Strategy) -> Result<GameReport> {
    evaluate_rac_with(game, strategy, &Limits::default())
}

/// Exact report for one strategy in the random-access-coding game.
pub fn evaluate_rac_with(
    game: &RacGame,
    strategy: &Strategy,
    limits: &Limits,
) -> Result<GameReport> {
    let n = game.n;
    if strategy.n() != n || strategy.m() != game.m {
        return Err(Error::Wiring(format!(
            "strategy plays n = {}, m = {}; game has n = {n}, m = {}",
            strategy.n(),
            strategy.m(),
            game.m
        )));
    }
    if n > limits.max_n {
        return Err(Error::Resource(format!(
            "n = {n} exceeds the enumeration cap {}",
            limits.max_n
        )));
    }
    let cond = conditional(strategy, limits)?;
    let alpha_card = cond.alpha_card;
    let size = 1usize << n;
    let p = &game.input_dist;

    let mut bit_vars: Vec<Variable> = (0..n).map(|k| Variable::bit(bit_name(k))).collect();
    let mut joint_vars = bit_vars.clone();
    joint_vars.push(Variable::new(ALPHA, alpha_card));
    joint_vars.push(Variable::bit(BETA));

    let mut joints = Vec::with_capacity(n);
    let mut success_per_k = Vec::with_capacity(n);
    let mut information_per_k = Vec::with_capacity(n);
    for (k, table) in cond.per_k.iter().enumerate() {
        let mut joint = vec![0.0; table.len()];
        let mut success = 0.0;
        for (x, &px) in p.iter().enumerate() {
            let xk = bits::bit(x, n, k) as usize;
            for alpha in 0..alpha_card {
                let base = (x * alpha_card + alpha) * 2;
                joint[base] = px * table[base];
                joint[base + 1] = px * table[base + 1];
                success += joint[base + xk];
            }
        }
        let joint = JointDistribution::new(joint_vars.clone(), joint)?;
        information_per_k.push(mutual_information(&joint, &[&bit_name(k)], &[BETA])?);
        success_per_k.push(success);
        joints.push(joint);
    }

    let classical_joint = match cond.classical {
        Some((shared, table)) => {
            bit_vars.push(Variable::new(ALPHA, alpha_card));
            bit_vars.push(Variable::new(SHARED, shared));
            let weighted = table
                .iter()
                .enumerate()
                .map(|(i, v)| p[i / (alpha_card * shared)] * v)
                .collect();
            Some(JointDistribution::new(bit_vars, weighted)?)
        }
        None => None,
    };

    let success_probability = success_per_k
        .iter()
        .zip(&game.k_dist)
        .map(|(s, q)| s * q)
        .sum();
    let biases = success_per_k.iter().map(|s| 2.0 * s - 1.0).collect();
    let uniform = p.iter().all(|v| (v - 1.0 / size as f64).abs() <= 1e-12);
    let bound_form = if uniform {
        BoundForm::MessageLength
    } else if game.input_joint().is_product(1e-9) {
        BoundForm::IndependentInputs
    } else {
        BoundForm::Generalized
    };

    let mut report = GameReport {
        n,
        success_probability,
        bias_per_bob_input: BiasVector::new(biases)?,
        bob_inputs: (1..=n).collect(),
        bob_input_weights: game.k_dist.clone(),
        i_bits: Some(information_per_k.iter().sum()),
        information_per_k,
        entropic_terms: Vec::new(),
        bound_form: Some(bound_form),
        joints,
        classical_joint,
    };
    report.entropic_terms = analysis::chain_terms(&report)?;
    Ok(report)
}

/// Exact biases `E_y = Σ_x p(x) E_xy` of a box in the inner-product game.
pub fn evaluate_inner_product(
    game: &InnerProductGame,
    resource: &NoSignallingBox,
) -> Result<GameReport> {
    let size = 1usize << game.n;
    if resource.x_size() != size || resource.y_size() != size {
        return Err(Error::Wiring(format!(
            "box is {} x {}, the game needs {size} x {size} inputs",
            resource.x_size(),
            resource.y_size()
        )));
    }
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for &y in &game.y_order {
        let q = game.y_dist[y];
        if q <= 0.0 {
            continue;
        }
        let e: f64 = (0..size)
            .map(|x| game.x_dist[x] * inner_product_correlator(resource, x, y))
            .sum();
        labels.push(y);
        weights.push(q);
        biases.push(e);
    }
    let mean: f64 = biases.iter().zip(&weights).map(|(e, q)| e * q).sum();
    Ok(GameReport {
        n: game.n,
        success_probability: 0.5 * (1.0 + mean),
        bias_per_bob_input: BiasVector::new(biases)?,
        bob_inputs: labels,
        bob_input_weights: weights,
        i_bits: None,
        information_per_k: Vec::new(),
        entropic_terms: Vec::new(),
        bound_form: None,
        joints: Vec::new(),
        classical_joint: None,
    })
}
