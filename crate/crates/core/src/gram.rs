//! Real vectors realizing prescribed inner-product-game biases, the boxes
//! they induce, and the quadratic bias bounds.
//!
//! For target biases `E_y` with `Σ E_y² <= 1`, take an orthonormal basis
//! `e_y` indexed by Bob's inputs and set
//!
//! ```text
//! u_x = Σ_y (-1)^{x·y} E_y e_y,    v_y = e_y.
//! ```
//!
//! Then `(-1)^{x·y} u_x·v_y = E_y` for every `x`, and `‖u_x‖² = Σ_y E_y² <= 1`,
//! so the correlators are quantum by Tsirelson's vector construction.

use serde::Serialize;

use crate::bits;
use crate::boxes::{BiasVector, NoSignallingBox, Realizability};
use crate::dist::binary_entropy;
use crate::error::{Error, Result};

/// Tolerance on `Σ E² <= 1` when accepting targets.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// `|lhs - rhs|` below which a bound counts as saturated.
pub const SATURATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GramSystem {
    n: usize,
    bob_inputs: Vec<usize>,
    u_vectors: Vec<Vec<f64>>,
    v_vectors: Vec<Vec<f64>>,
    target_biases: BiasVector,
}

impl GramSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Packed strings `y` labelling the basis vectors.
    pub fn bob_inputs(&self) -> &[usize] {
        &self.bob_inputs
    }

    pub fn u(&self, x: usize) -> &[f64] {
        &self.u_vectors[x]
    }

    pub fn v(&self, i: usize) -> &[f64] {
        &self.v_vectors[i]
    }

    pub fn target_biases(&self) -> &BiasVector {
        &self.target_biases
    }

    pub fn u_norm(&self, x: usize) -> f64 {
        dot(&self.u_vectors[x], &self.u_vectors[x]).sqrt()
    }

    /// `(-1)^{x·y} u_x·v_y` for the `i`-th Bob input.
    pub fn achieved_correlator(&self, x: usize, i: usize) -> f64 {
        let sign = if bits::dot(x, self.bob_inputs[i]) == 0 {
            1.0
        } else {
            -1.0
        };
        sign * dot(&self.u_vectors[x], &self.v_vectors[i])
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Targets of length `2^n` address every string `y`; targets of length `n`
/// address the unit strings, entry `k` for a one at position `k + 1`.
pub fn gram_construct(targets: &BiasVector, n: usize) -> Result<GramSystem> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidArgument(format!("n = {n} out of range")));
    }
    let labels = if targets.len() == 1 << n {
        (0..1 << n).collect()
    } else if targets.len() == n {
        (0..n).map(|k| bits::unit_index(n, k)).collect()
    } else {
        return Err(Error::Shape(format!(
            "{} targets; expected {n} or {}",
            targets.len(),
            1usize << n
        )));
    };
    gram_construct_for_inputs(targets, n, labels)
}

/// Gram vectors for targets attached to explicit Bob inputs `labels`.
pub fn gram_construct_for_inputs(
    targets: &BiasVector,
    n: usize,
    labels: Vec<usize>,
) -> Result<GramSystem> {
    if labels.len() != targets.len() {
        return Err(Error::Shape(format!(
            "{} labels for {} targets",
            labels.len(),
            targets.len()
        )));
    }
    for (i, &y) in labels.iter().enumerate() {
        if y >> n != 0 || labels[..i].contains(&y) {
            return Err(Error::InvalidArgument(format!(
                "Bob input {y} repeated or not an {n}-bit string"
            )));
        }
    }
    let total = targets.sum_of_squares();
    if total > 1.0 + FEASIBILITY_TOL {
        return Err(Error::Infeasible(format!("Σ E_y² = {total} exceeds 1")));
    }
    let dim = labels.len();
    let e = targets.values();
    let u_vectors = (0..1usize << n)
        .map(|x| {
            labels
                .iter()
                .zip(e)
                .map(|(&y, &ey)| if bits::dot(x, y) == 0 { ey } else { -ey })
                .collect()
        })
        .collect();
    let v_vectors = (0..dim)
        .map(|i| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        })
        .collect();
    Ok(GramSystem {
        n,
        bob_inputs: labels,
        u_vectors,
        v_vectors,
        target_biases: targets.clone(),
    })
}

/// Box over all `2^n` strings on both sides with uniform marginals and
/// `P(a,b|x,y) = (1 + (-1)^{a⊕b⊕x·y} E_xy) / 4`; `E_xy = 0` for strings
/// outside the system's Bob inputs.
pub fn gram_to_box(sys: &GramSystem) -> Result<NoSignallingBox> {
    let size = 1usize << sys.n;
    let mut corr = vec![0.0; size * size];
    for x in 0..size {
        for (i, &y) in sys.bob_inputs.iter().enumerate() {
            let e = sys.achieved_correlator(x, i);
            if e.abs() > 1.0 + FEASIBILITY_TOL {
                return Err(Error::Construction(format!(
                    "correlator {e} at x={x}, y={y}"
                )));
            }
            corr[x * size + y] = e.clamp(-1.0, 1.0);
        }
    }
    NoSignallingBox::from_correlators(
        size,
        size,
        bits::dot,
        |x, y| corr[x * size + y],
        Realizability::Quantum,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum BoundKind {
    /// `Σ_k E_k² <= 2 m ln 2`, implied by information causality.
    IcEntropic { message_bits: usize },
    /// `Σ_y E_y² <= 1`.
    InnerProduct,
    /// `Σ_y E_y² <= 2^n Σ_x p(x)²` for Alice's input distribution `p`.
    Generalized { x_dist: Vec<f64> },
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::IcEntropic { .. } => "ic_entropic",
            BoundKind::InnerProduct => "inner_product",
            BoundKind::Generalized { .. } => "generalized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Pass,
    Saturated,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: String,
    pub lhs: f64,
    pub rhs: f64,
    pub status: BoundStatus,
}

pub fn quadratic_bound_check(biases: &BiasVector, kind: &BoundKind) -> Result<BoundReport> {
    let lhs = biases.sum_of_squares();
    let rhs = match kind {
        BoundKind::IcEntropic { message_bits } => {
            2.0 * *message_bits as f64 * std::f64::consts::LN_2
        }
        BoundKind::InnerProduct => 1.0,
        BoundKind::Generalized { x_dist } => {
            crate::check_weights(x_dist)?;
            x_dist.len() as f64 * x_dist.iter().map(|p| p * p).sum::<f64>()
        }
    };
    let status = if (lhs - rhs).abs() < SATURATION_TOL {
        BoundStatus::Saturated
    } else if lhs < rhs {
        BoundStatus::Pass
    } else {
        BoundStatus::Violated
    };
    Ok(BoundReport {
        kind: kind.name().to_string(),
        lhs,
        rhs,
        status,
    })
}

/// `(1 - h(P)) - (2P - 1)² / (2 ln 2)`, non-negative on `[½, 1]`.
pub fn binary_entropy_bias_inequality(p: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "success probability {p} outside [1/2, 1]"
        )));
    }
    let e = 2.0 * p - 1.0;
    Ok(1.0 - binary_entropy(p)? - e * e / (2.0 * std::f64::consts::LN_2))
}

/// The three levels `½(1 + mean E) <= ½(1 + √mean E²) <= ½(1 + 1/√N)` of the
/// success bound for `N` equally likely Bob inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessChain {
    pub success: f64,
    pub root_mean_square: f64,
    pub bound: f64,
}

pub fn success_chain(biases: &BiasVector) -> SuccessChain {
    let count = biases.len() as f64;
    let mean = biases.values().iter().sum::<f64>() / count;
    let mean_square = biases.sum_of_squares() / count;
    SuccessChain {
        success: 0.5 * (1.0 + mean),
        root_mean_square: 0.5 * (1.0 + mean_square.sqrt()),
        bound: 0.5 * (1.0 + 1.0 / count.sqrt()),
    }
}
