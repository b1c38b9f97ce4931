//! Exact evaluation of the information-causality game and the inner-product
//! game for classical, quantum and super-quantum strategies.
//!
//! * [`dist`]: joint distributions over named variables, Shannon entropies
//!   and the classical entropy inequalities.
//! * [`boxes`]: no-signalling boxes with binary outputs.
//! * [`games`]: game definitions and the enumeration engine.
//! * [`strategies`]: the strategy catalogue and the deterministic-strategy oracle.
//! * [`gram`]: vector realizations of inner-product biases and quadratic bounds.
//! * [`analysis`]: information-causality verdicts and the entropic chain.

pub mod analysis;
pub mod bits;
pub mod boxes;
pub mod dist;
pub mod error;
pub mod games;
pub mod gram;
pub mod strategies;

pub use error::{Error, Result};

/// Tolerance on the total of a weight or probability vector.
pub const WEIGHT_TOL: f64 = 1e-9;

/// Checks that weights are non-negative and sum to one.
pub fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidArgument(
            "weights must be non-negative".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidArgument(format!("weights sum to {total}")));
    }
    Ok(())
}
