//! Information-causality verdicts for game reports.
//!
//! The entropic chain for a strategy with message `α` and Bob's pre-message
//! system `B`:
//!
//! ```text
//! Σ_k H(x_k|β_k) >= Σ_k H(x_k|α,B)
//!                >= H(x|α,B)
//!                 = H(x,α,B) - H(α,B)
//!                >= H(x,α,B) - H(B) - H(α)
//!                 = H(x,α,B) - H(x,B) + H(x) - H(α)
//!                 = H(α|x,B) + H(x) - H(α)
//!                >= H(x) - H(α)
//! ```
//!
//! Every line is a Shannon entropy when `B` is classical shared randomness.
//! With boxes only the two ends are classical observables.

use serde::Serialize;

use crate::dist::{conditional_entropy, shannon_entropy, JointDistribution};
use crate::error::{Error, Result};
use crate::games::{bit_name, GameReport, ALPHA, BETA, SHARED};

/// Classification tolerance for verdicts.
pub const VERDICT_TOL: f64 = 1e-6;

/// Slack tolerance for individual chain steps.
pub const CHAIN_TOL: f64 = 1e-9;

pub const GUESS_UNCERTAINTY: &str = "sum_k H(x_k|beta_k)";
pub const MESSAGE_UNCERTAINTY: &str = "sum_k H(x_k|alpha,B)";
pub const JOINT_UNCERTAINTY: &str = "H(x|alpha,B)";
pub const JOINT_DIFFERENCE: &str = "H(x,alpha,B) - H(alpha,B)";
pub const SPLIT_CONDITION: &str = "H(x,alpha,B) - H(B) - H(alpha)";
pub const INDEPENDENT_SHARED: &str = "H(x,alpha,B) - H(x,B) + H(x) - H(alpha)";
pub const MESSAGE_CONDITIONAL: &str = "H(alpha|x,B) + H(x) - H(alpha)";
pub const ENDPOINT: &str = "H(x) - H(alpha)";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainTerm {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "=")]
    Equal,
}

/// One step `lhs (relation) rhs` with `slack = lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub from: String,
    pub to: String,
    pub relation: Relation,
    pub slack: f64,
}

impl ChainStep {
    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtLeast => self.slack >= -CHAIN_TOL,
            Relation::Equal => self.slack.abs() <= CHAIN_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Saturated,
    Violated,
}

/// `slack = bound side - value side` of an inequality that should be >= 0.
pub fn classify(slack: f64) -> Verdict {
    if slack.abs() < VERDICT_TOL {
        Verdict::Saturated
    } else if slack > 0.0 {
        Verdict::Holds
    } else {
        Verdict::Violated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictForm {
    /// `I <= H(α) <= m` for independent inputs.
    Information,
    /// `Σ_k H(x_k|β_k) >= H(x) - H(α)`.
    Entropic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IcVerdict {
    pub form: VerdictForm,
    #[serde(rename = "I_bits")]
    pub i_bits: f64,
    /// `H(α)` for the information form; `H(x) - H(α)` for the entropic form.
    pub bound: f64,
    pub message_bits: Option<usize>,
    pub satisfied: Verdict,
    pub chain_terms: Vec<ChainTerm>,
    pub chain_slacks: Vec<ChainStep>,
}

fn term(label: &str, value: f64) -> ChainTerm {
    ChainTerm {
        label: label.to_string(),
        value,
    }
}

fn x_names(n: usize) -> Vec<String> {
    (0..n).map(bit_name).collect()
}

fn first_joint(report: &GameReport) -> Result<&JointDistribution> {
    report
        .joints
        .first()
        .ok_or_else(|| Error::Report("report carries no per-k joints".into()))
}

fn guess_uncertainty(report: &GameReport) -> Result<f64> {
    if report.joints.len() != report.n {
        return Err(Error::Report(format!(
            "{} per-k joints for n = {}",
            report.joints.len(),
            report.n
        )));
    }
    let mut total = 0.0;
    for (k, joint) in report.joints.iter().enumerate() {
        total += conditional_entropy(joint, &[&bit_name(k)], &[BETA])?;
    }
    Ok(total)
}

/// Entropies of the input and the message.
fn input_and_message(report: &GameReport) -> Result<(f64, f64)> {
    let joint = first_joint(report)?;
    let names = x_names(report.n);
    let x: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok((
        shannon_entropy(joint, &x)?,
        shannon_entropy(joint, &[ALPHA])?,
    ))
}

/// Every line of the chain that is computable for the report: all of them
/// when a classical joint is present, otherwise the two ends.
pub fn chain_terms(report: &GameReport) -> Result<Vec<ChainTerm>> {
    let top = guess_uncertainty(report)?;
    let (h_x, h_alpha) = input_and_message(report)?;
    let Some(classical) = &report.classical_joint else {
        return Ok(vec![
            term(GUESS_UNCERTAINTY, top),
            term(ENDPOINT, h_x - h_alpha),
        ]);
    };

    let names = x_names(report.n);
    let x: Vec<&str> = names.iter().map(String::as_str).collect();
    let h = |vars: &[&str]| shannon_entropy(classical, vars);
    let with = |extra: &[&'static str]| -> Vec<&str> { x.iter().chain(extra).copied().collect() };

    let mut per_bit = 0.0;
    for name in &x {
        per_bit += conditional_entropy(classical, &[name], &[ALPHA, SHARED])?;
    }
    let h_xab = h(&with(&[ALPHA, SHARED]))?;
    let h_ab = h(&[ALPHA, SHARED])?;
    let h_b = h(&[SHARED])?;
    let h_xb = h(&with(&[SHARED]))?;
    let h_a_given_xb = conditional_entropy(classical, &[ALPHA], &with(&[SHARED]))?;

    Ok(vec![
        term(GUESS_UNCERTAINTY, top),
        term(MESSAGE_UNCERTAINTY, per_bit),
        term(
            JOINT_UNCERTAINTY,
            conditional_entropy(classical, &x, &[ALPHA, SHARED])?,
        ),
        term(JOINT_DIFFERENCE, h_xab - h_ab),
        term(SPLIT_CONDITION, h_xab - h_b - h_alpha),
        term(INDEPENDENT_SHARED, h_xab - h_xb + h_x - h_alpha),
        term(MESSAGE_CONDITIONAL, h_a_given_xb + h_x - h_alpha),
        term(ENDPOINT, h_x - h_alpha),
    ])
}

fn relation_into(label: &str) -> Relation {
    match label {
        JOINT_DIFFERENCE | INDEPENDENT_SHARED | MESSAGE_CONDITIONAL => Relation::Equal,
        _ => Relation::AtLeast,
    }
}

fn steps(terms: &[ChainTerm]) -> Vec<ChainStep> {
    terms
        .windows(2)
        .map(|w| ChainStep {
            from: w[0].label.clone(),
            to: w[1].label.clone(),
            relation: if terms.len() == 2 {
                Relation::AtLeast
            } else {
                relation_into(&w[1].label)
            },
            slack: w[0].value - w[1].value,
        })
        .collect()
}

fn endpoint_verdict(report: &GameReport, terms: Vec<ChainTerm>) -> Result<IcVerdict> {
    let first = terms.first().map(|t| t.value).unwrap_or(f64::NAN);
    let last = terms.last().map(|t| t.value).unwrap_or(f64::NAN);
    Ok(IcVerdict {
        form: VerdictForm::Entropic,
        i_bits: ic_quantity(report)?,
        bound: last,
        message_bits: None,
        satisfied: classify(first - last),
        chain_slacks: steps(&terms),
        chain_terms: terms,
    })
}

/// `Σ_k I(x_k : β_k)` recomputed from the per-k joints.
pub fn ic_quantity(report: &GameReport) -> Result<f64> {
    if report.joints.len() != report.n || report.n == 0 {
        return Err(Error::Report("report carries no per-k joints".into()));
    }
    let mut total = 0.0;
    for k in 0..report.n {
        let pair = report.pair_joint(k)?;
        total += crate::dist::mutual_information(&pair, &[&bit_name(k)], &[BETA])?;
    }
    Ok(total)
}

/// The full chain with a slack for every step. Needs every system to be
/// classical; see [`chain_endpoints`] otherwise.
pub fn entropic_chain(report: &GameReport) -> Result<IcVerdict> {
    if report.classical_joint.is_none() {
        return Err(Error::ChainNotApplicable);
    }
    endpoint_verdict(report, chain_terms(report)?)
}

/// `Σ_k H(x_k|β_k) >= H(x) - H(α)`, observable for any strategy.
pub fn chain_endpoints(report: &GameReport) -> Result<IcVerdict> {
    let top = guess_uncertainty(report)?;
    let (h_x, h_alpha) = input_and_message(report)?;
    endpoint_verdict(
        report,
        vec![term(GUESS_UNCERTAINTY, top), term(ENDPOINT, h_x - h_alpha)],
    )
}

/// `I <= H(α) <= m` when Alice's bits are independent; otherwise the
/// entropic endpoint inequality.
pub fn ic_verdict(report: &GameReport, message_bits: usize) -> Result<IcVerdict> {
    let joint = first_joint(report)?;
    let names = x_names(report.n);
    let x: Vec<&str> = names.iter().map(String::as_str).collect();
    if !joint.marginal(&x)?.is_product(1e-9) {
        let mut v = chain_endpoints(report)?;
        v.message_bits = Some(message_bits);
        return Ok(v);
    }
    let i = ic_quantity(report)?;
    let h_alpha = shannon_entropy(joint, &[ALPHA])?;
    let m = message_bits as f64;
    let satisfied = match (classify(h_alpha - i), classify(m - i)) {
        (Verdict::Violated, _) | (_, Verdict::Violated) => Verdict::Violated,
        (Verdict::Saturated, _) | (_, Verdict::Saturated) => Verdict::Saturated,
        _ => Verdict::Holds,
    };
    let terms = vec![term("I", i), term("H(alpha)", h_alpha), term("m", m)];
    Ok(IcVerdict {
        form: VerdictForm::Information,
        i_bits: i,
        bound: h_alpha,
        message_bits: Some(message_bits),
        satisfied,
        chain_slacks: vec![
            ChainStep {
                from: "H(alpha)".into(),
                to: "I".into(),
                relation: Relation::AtLeast,
                slack: h_alpha - i,
            },
            ChainStep {
                from: "m".into(),
                to: "H(alpha)".into(),
                relation: Relation::AtLeast,
                slack: m - h_alpha,
            },
        ],
        chain_terms: terms,
    })
}

/// `1 - I/n` bits per round, for uniform independent inputs.
pub fn supplementary_information(report: &GameReport) -> Result<f64> {
    let joint = first_joint(report)?;
    let names = x_names(report.n);
    let x: Vec<&str> = names.iter().map(String::as_str).collect();
    let p = joint.marginal(&x)?;
    let uniform = 1.0 / p.table().len() as f64;
    if p.table().iter().any(|v| (v - uniform).abs() > 1e-12) {
        return Err(Error::NotApplicable(
            "supplementary information assumes uniform inputs".into(),
        ));
    }
    Ok(1.0 - ic_quantity(report)? / report.n as f64)
}

/// The two sides of the quadratic relaxation of information causality:
/// `Σ_k E_k² / (2 ln 2) <= Σ_k (1 - h(P_k))`, and `I` for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticWitness {
    pub scaled_bias: f64,
    pub entropic: f64,
    pub information: f64,
}

pub fn quadratic_witness(report: &GameReport) -> Result<QuadraticWitness> {
    let information = ic_quantity(report)?;
    let mut entropic = 0.0;
    for p in report.success_per_bob_input() {
        entropic += 1.0 - crate::dist::binary_entropy(p.clamp(0.0, 1.0))?;
    }
    Ok(QuadraticWitness {
        scaled_bias: report.bias_per_bob_input.sum_of_squares() / (2.0 * std::f64::consts::LN_2),
        entropic,
        information,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{evaluate_rac, RacGame};
    use crate::strategies::*;

    #[test]
    fn classification() {
        assert_eq!(classify(0.5), Verdict::Holds);
        assert_eq!(classify(1e-8), Verdict::Saturated);
        assert_eq!(classify(-1e-8), Verdict::Saturated);
        assert_eq!(classify(-0.1), Verdict::Violated);
    }

    #[test]
    fn send_first_chain_is_tight() {
        let game = RacGame::new(2, 1).unwrap();
        let r = evaluate_rac(&game, &send_first_m_strategy(2, 1).unwrap()).unwrap();
        let v = entropic_chain(&r).unwrap();
        assert_eq!(v.chain_terms.len(), 8);
        assert!((v.chain_terms[0].value - 1.0).abs() < 1e-12);
        assert!((v.bound - 1.0).abs() < 1e-12);
        assert_eq!(v.satisfied, Verdict::Saturated);
        assert!(v.chain_slacks.iter().all(ChainStep::holds));
        assert_eq!(ic_verdict(&r, 1).unwrap().satisfied, Verdict::Saturated);
        assert!((supplementary_information(&r).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn boxes_only_expose_endpoints() {
        let game = RacGame::new(2, 1).unwrap();
        let r = evaluate_rac(&game, &chsh_strategy(0.5).unwrap()).unwrap();
        assert_eq!(entropic_chain(&r), Err(Error::ChainNotApplicable));
        let v = chain_endpoints(&r).unwrap();
        assert_eq!(v.chain_terms.len(), 2);
        assert_eq!(v.chain_slacks.len(), 1);
        assert_eq!(r.entropic_terms.len(), 2);
    }

    #[test]
    fn biased_inputs_need_uniformity_for_supplementary_information() {
        let game = RacGame::new(2, 1)
            .unwrap()
            .with_input_dist(vec![0.97, 0.01, 0.01, 0.01])
            .unwrap();
        let r = evaluate_rac(&game, &send_first_m_strategy(2, 1).unwrap()).unwrap();
        assert!(matches!(
            supplementary_information(&r),
            Err(Error::NotApplicable(_))
        ));
        let v = ic_verdict(&r, 1).unwrap();
        assert_eq!(v.form, VerdictForm::Entropic);
    }

    #[test]
    fn verdict_json_keeps_term_order() {
        let game = RacGame::new(2, 1).unwrap();
        let r = evaluate_rac(&game, &majority_vote_strategy(2).unwrap()).unwrap();
        let v = entropic_chain(&r).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        let labels: Vec<&str> = json["chain_terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t["label"].as_str().unwrap())
            .collect();
        assert_eq!(labels.first(), Some(&GUESS_UNCERTAINTY));
        assert_eq!(labels.last(), Some(&ENDPOINT));
        assert_eq!(json["chain_slacks"][2]["relation"], "=");
    }
}
