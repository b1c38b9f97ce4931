//! Finite joint distributions over named variables and the Shannon-entropy
//! quantities built on them.
//!
//! Tables are dense and row-major over the declared variable order (the last
//! variable varies fastest). Every entropy is in bits, with `0 log 0 = 0`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of a table's total mass from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Slack below which an entropy inequality counts as violated.
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub cardinality: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Self {
            name: name.into(),
            cardinality,
        }
    }

    pub fn bit(name: impl Into<String>) -> Self {
        Self::new(name, 2)
    }
}

#[derive(Deserialize)]
struct RawJoint {
    variables: Vec<Variable>,
    table: Vec<f64>,
}

impl TryFrom<RawJoint> for JointDistribution {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        JointDistribution::new(raw.variables, raw.table)
    }
}

/// Probability table over a tuple of named finite variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct JointDistribution {
    variables: Vec<Variable>,
    table: Vec<f64>,
}

impl JointDistribution {
    pub fn new(variables: Vec<Variable>, table: Vec<f64>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidArgument(
                "a distribution needs at least one variable".into(),
            ));
        }
        for (i, v) in variables.iter().enumerate() {
            if v.cardinality == 0 {
                return Err(Error::Shape(format!(
                    "variable `{}` has cardinality 0",
                    v.name
                )));
            }
            if variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{}` declared twice",
                    v.name
                )));
            }
        }
        let expected = variables
            .iter()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.cardinality))
            .ok_or_else(|| Error::Shape("table size overflows".into()))?;
        if table.len() != expected {
            return Err(Error::Shape(format!(
                "table has {} entries, variables require {expected}",
                table.len()
            )));
        }
        if let Some(p) = table.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::Normalization(format!("invalid entry {p}")));
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(format!("entries sum to {total}")));
        }
        Ok(Self { variables, table })
    }

    /// Builds a table by evaluating `f` on every outcome tuple.
    pub fn from_fn(variables: Vec<Variable>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let cards: Vec<usize> = variables.iter().map(|v| v.cardinality).collect();
        let size: usize = cards.iter().product();
        let mut digits = vec![0usize; cards.len()];
        let mut table = Vec::with_capacity(size);
        for _ in 0..size {
            table.push(f(&digits));
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if digits[i] < cards[i] {
                    break;
                }
                digits[i] = 0;
            }
        }
        Self::new(variables, table)
    }

    pub fn uniform(variables: Vec<Variable>) -> Result<Self> {
        let size: usize = variables.iter().map(|v| v.cardinality).product();
        Self::new(variables, vec![1.0 / size as f64; size])
    }

    /// Normalized i.i.d. uniform entries.
    pub fn random<R: Rng + ?Sized>(variables: Vec<Variable>, rng: &mut R) -> Result<Self> {
        let size: usize = variables.iter().map(|v| v.cardinality).product();
        let raw: Vec<f64> = (0..size).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        Self::new(variables, raw.into_iter().map(|p| p / total).collect())
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.name.as_str())
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            let p = self.position(name)?;
            if out.contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{name}` listed twice"
                )));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Marginal table over the variables at `keep`, row-major in that order.
    fn project(&self, keep: &[usize]) -> Vec<f64> {
        let cards: Vec<usize> = self.variables.iter().map(|v| v.cardinality).collect();
        let mut stride = vec![0usize; cards.len()];
        let mut size = 1;
        for &p in keep.iter().rev() {
            stride[p] = size;
            size *= cards[p];
        }
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; cards.len()];
        let mut target = 0usize;
        for &p in &self.table {
            out[target] += p;
            for i in (0..cards.len()).rev() {
                digits[i] += 1;
                target += stride[i];
                if digits[i] < cards[i] {
                    break;
                }
                target -= stride[i] * cards[i];
                digits[i] = 0;
            }
        }
        out
    }

    /// Marginal distribution over `names`, in the given order.
    pub fn marginal(&self, names: &[&str]) -> Result<JointDistribution> {
        if names.is_empty() {
            return Err(Error::InvalidArgument("empty variable set".into()));
        }
        let keep = self.positions(names)?;
        let variables = keep.iter().map(|&p| self.variables[p].clone()).collect();
        Ok(JointDistribution {
            variables,
            table: self.project(&keep),
        })
    }

    /// Joint of two independent distributions; `self`'s variables come first.
    pub fn product(&self, other: &JointDistribution) -> Result<JointDistribution> {
        let mut variables = self.variables.clone();
        variables.extend(other.variables.iter().cloned());
        let table = self
            .table
            .iter()
            .flat_map(|p| other.table.iter().map(move |q| p * q))
            .collect();
        JointDistribution::new(variables, table)
    }

    /// True if the joint equals the product of its single-variable marginals
    /// within `tol` in every entry.
    pub fn is_product(&self, tol: f64) -> bool {
        let marginals: Vec<Vec<f64>> = (0..self.variables.len())
            .map(|p| self.project(&[p]))
            .collect();
        let mut digits = vec![0usize; self.variables.len()];
        for &p in &self.table {
            let q: f64 = digits.iter().zip(&marginals).map(|(&d, m)| m[d]).product();
            if (p - q).abs() > tol {
                return false;
            }
            for i in (0..digits.len()).rev() {
                digits[i] += 1;
                if digits[i] < self.variables[i].cardinality {
                    break;
                }
                digits[i] = 0;
            }
        }
        true
    }
}

/// `-Σ p log2 p` over a probability vector, skipping zero entries.
pub fn entropy_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Shannon entropy of the marginal on `vars`.
pub fn shannon_entropy(dist: &JointDistribution, vars: &[&str]) -> Result<f64> {
    if vars.is_empty() {
        return Err(Error::InvalidArgument("empty variable set".into()));
    }
    let keep = dist.positions(vars)?;
    Ok(entropy_of(&dist.project(&keep)))
}

/// Entropy of a biased coin.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(entropy_of(&[p, 1.0 - p]))
}

fn disjoint(a: &[&str], b: &[&str]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("empty variable set".into()));
    }
    if let Some(v) = a.iter().find(|v| b.contains(v)) {
        return Err(Error::InvalidArgument(format!(
            "variable `{v}` appears in both sets"
        )));
    }
    Ok(())
}

fn union<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

/// `H(X|Y) = H(XY) - H(Y)`.
pub fn conditional_entropy(dist: &JointDistribution, x: &[&str], y: &[&str]) -> Result<f64> {
    disjoint(x, y)?;
    Ok(shannon_entropy(dist, &union(x, y))? - shannon_entropy(dist, y)?)
}

/// `I(X:Y) = H(X) + H(Y) - H(XY)`.
pub fn mutual_information(dist: &JointDistribution, x: &[&str], y: &[&str]) -> Result<f64> {
    disjoint(x, y)?;
    Ok(
        shannon_entropy(dist, x)? + shannon_entropy(dist, y)?
            - shannon_entropy(dist, &union(x, y))?,
    )
}

/// A named entropic quantity together with the variable sets it was computed on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub quantity: String,
    pub value: f64,
    pub operands: Vec<Vec<String>>,
}

impl EntropyReport {
    fn build(quantity: &str, value: f64, operands: &[&[&str]]) -> Self {
        Self {
            quantity: quantity.to_string(),
            value,
            operands: operands
                .iter()
                .map(|set| set.iter().map(|s| s.to_string()).collect())
                .collect(),
        }
    }

    pub fn entropy(dist: &JointDistribution, x: &[&str]) -> Result<Self> {
        Ok(Self::build("H", shannon_entropy(dist, x)?, &[x]))
    }

    pub fn conditional(dist: &JointDistribution, x: &[&str], y: &[&str]) -> Result<Self> {
        Ok(Self::build("H|", conditional_entropy(dist, x, y)?, &[x, y]))
    }

    pub fn mutual_information(dist: &JointDistribution, x: &[&str], y: &[&str]) -> Result<Self> {
        Ok(Self::build("I", mutual_information(dist, x, y)?, &[x, y]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalitySlack {
    pub name: String,
    pub slack: f64,
}

/// Slacks of the classical entropy inequalities on one partition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalitySuite {
    pub slacks: Vec<InequalitySlack>,
}

impl InequalitySuite {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.slacks.iter().find(|s| s.name == name).map(|s| s.slack)
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks
            .iter()
            .map(|s| s.slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.min_slack() >= -INEQUALITY_TOL
    }
}

pub const SUBADDITIVITY: &str = "subadditivity";
pub const STRONG_SUBADDITIVITY: &str = "strong_subadditivity";
pub const ITERATED_CONDITIONAL_SUBADDITIVITY: &str = "iterated_conditional_subadditivity";
pub const CONDITIONAL_POSITIVITY: &str = "conditional_positivity";

/// Evaluates subadditivity `H(X)+H(Y) >= H(XY)`, strong subadditivity
/// `H(XY)+H(YZ) >= H(XYZ)+H(Y)`, the iterated form
/// `Σ_i H(X_i|Y) >= H(X_1..X_n|Y)` with each variable of `x` as one system,
/// and positivity `H(X|Y) >= 0`.
pub fn entropy_inequality_suite(
    dist: &JointDistribution,
    x: &[&str],
    y: &[&str],
    z: &[&str],
) -> Result<InequalitySuite> {
    disjoint(x, y)?;
    disjoint(y, z)?;
    disjoint(x, z)?;
    let h = |vars: &[&str]| shannon_entropy(dist, vars);
    let xy = union(x, y);
    let yz = union(y, z);
    let xyz = union(&xy, z);

    let subadditivity = h(x)? + h(y)? - h(&xy)?;
    let strong = h(&xy)? + h(&yz)? - h(&xyz)? - h(y)?;
    let mut parts = 0.0;
    for xi in x {
        parts += conditional_entropy(dist, &[xi], y)?;
    }
    let joint_conditional = conditional_entropy(dist, x, y)?;

    let slack = |name: &str, slack: f64| InequalitySlack {
        name: name.to_string(),
        slack,
    };
    Ok(InequalitySuite {
        slacks: vec![
            slack(SUBADDITIVITY, subadditivity),
            slack(STRONG_SUBADDITIVITY, strong),
            slack(
                ITERATED_CONDITIONAL_SUBADDITIVITY,
                parts - joint_conditional,
            ),
            slack(CONDITIONAL_POSITIVITY, joint_conditional),
        ],
    })
}

/// Pushes `var` through a stochastic matrix with `matrix[out][in]` entries.
/// The output variable keeps its name and takes the row count as cardinality.
pub fn apply_channel(
    dist: &JointDistribution,
    var: &str,
    matrix: &[Vec<f64>],
) -> Result<JointDistribution> {
    let pos = dist.position(var)?;
    let c_in = dist.variables[pos].cardinality;
    let c_out = matrix.len();
    if c_out == 0 {
        return Err(Error::Matrix("matrix has no rows".into()));
    }
    if let Some(row) = matrix.iter().find(|row| row.len() != c_in) {
        return Err(Error::Matrix(format!(
            "row has {} columns, `{var}` has cardinality {c_in}",
            row.len()
        )));
    }
    for col in 0..c_in {
        if matrix.iter().any(|row| row[col].is_nan() || row[col] < 0.0) {
            return Err(Error::Matrix(format!("negative entry in column {col}")));
        }
        let total: f64 = matrix.iter().map(|row| row[col]).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Matrix(format!("column {col} sums to {total}")));
        }
    }

    let pre: usize = dist.variables[..pos]
        .iter()
        .map(|v| v.cardinality)
        .product();
    let post: usize = dist.variables[pos + 1..]
        .iter()
        .map(|v| v.cardinality)
        .product();
    let mut table = vec![0.0; pre * c_out * post];
    for i in 0..pre {
        for d in 0..c_in {
            for j in 0..post {
                let p = dist.table[(i * c_in + d) * post + j];
                if p == 0.0 {
                    continue;
                }
                for (o, row) in matrix.iter().enumerate() {
                    table[(i * c_out + o) * post + j] += p * row[d];
                }
            }
        }
    }
    let mut variables = dist.variables.clone();
    variables[pos].cardinality = c_out;
    JointDistribution::new(variables, table)
}

/// `ΔH(XY) - ΔH(Y)` when `y` alone is pushed through `matrix`. Non-negative
/// for every classical joint.
pub fn ancilla_evolution_slack(
    dist: &JointDistribution,
    x: &[&str],
    y: &str,
    matrix: &[Vec<f64>],
) -> Result<f64> {
    disjoint(x, &[y])?;
    let after = apply_channel(dist, y, matrix)?;
    let xy = union(x, &[y]);
    let delta_xy = shannon_entropy(&after, &xy)? - shannon_entropy(dist, &xy)?;
    let delta_y = shannon_entropy(&after, &[y])? - shannon_entropy(dist, &[y])?;
    Ok(delta_xy - delta_y)
}

/// Column-stochastic matrix with normalized i.i.d. uniform columns.
pub fn random_stochastic_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let columns: Vec<Vec<f64>> = (0..cols)
        .map(|_| {
            let raw: Vec<f64> = (0..rows).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    (0..rows)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(names: &[&str]) -> Vec<Variable> {
        names.iter().map(|n| Variable::bit(*n)).collect()
    }

    // Binary symmetric channel on a uniform bit, flip probability 1/4.
    fn bsc() -> JointDistribution {
        JointDistribution::new(
            bits(&["X", "Y"]),
            vec![3.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 3.0 / 8.0],
        )
        .unwrap()
    }

    #[test]
    fn entropy_examples() {
        let coin = JointDistribution::uniform(bits(&["X"])).unwrap();
        assert_eq!(shannon_entropy(&coin, &["X"]).unwrap(), 1.0);
        let point = JointDistribution::new(bits(&["X"]), vec![1.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&point, &["X"]).unwrap(), 0.0);
        let skew = JointDistribution::new(bits(&["X"]), vec![0.75, 0.25]).unwrap();
        assert!((shannon_entropy(&skew, &["X"]).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert_eq!(
            shannon_entropy(&skew, &["Z"]),
            Err(Error::UnknownVariable("Z".into()))
        );
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.75).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(matches!(binary_entropy(1.5), Err(Error::Domain(_))));
        assert!(matches!(binary_entropy(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn conditional_and_mutual_information() {
        let copy = JointDistribution::new(bits(&["X", "Y"]), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(conditional_entropy(&copy, &["X"], &["Y"]).unwrap(), 0.0);
        assert_eq!(mutual_information(&copy, &["X"], &["Y"]).unwrap(), 1.0);

        let indep = JointDistribution::uniform(bits(&["X", "Y"])).unwrap();
        assert_eq!(conditional_entropy(&indep, &["X"], &["Y"]).unwrap(), 1.0);
        assert_eq!(mutual_information(&indep, &["X"], &["Y"]).unwrap(), 0.0);

        let d = bsc();
        assert!(
            (conditional_entropy(&d, &["X"], &["Y"]).unwrap() - 0.811_278_124_459_132_8).abs()
                < 1e-12
        );
        assert!(
            (mutual_information(&d, &["X"], &["Y"]).unwrap() - 0.188_721_875_540_867_2).abs()
                < 1e-12
        );

        assert!(matches!(
            mutual_information(&d, &["X", "Y"], &["Y"]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_tables() {
        assert!(matches!(
            JointDistribution::new(bits(&["X"]), vec![0.5, 0.6]),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            JointDistribution::new(bits(&["X"]), vec![1.5, -0.5]),
            Err(Error::Normalization(_))
        ));
        assert!(matches!(
            JointDistribution::new(bits(&["X", "Y"]), vec![1.0, 0.0]),
            Err(Error::Shape(_))
        ));
        assert!(JointDistribution::new(bits(&["X", "X"]), vec![0.25; 4]).is_err());
    }

    #[test]
    fn marginal_orders_by_request() {
        let d = JointDistribution::new(
            vec![Variable::bit("A"), Variable::new("B", 3)],
            vec![0.1, 0.2, 0.3, 0.0, 0.25, 0.15],
        )
        .unwrap();
        let m = d.marginal(&["B", "A"]).unwrap();
        assert_eq!(m.variables()[0].name, "B");
        let expected = [0.1, 0.0, 0.2, 0.25, 0.3, 0.15];
        for (a, b) in m.table().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let b = d.marginal(&["B"]).unwrap();
        assert!((b.table()[1] - 0.45).abs() < 1e-15);
    }

    #[test]
    fn suite_on_independent_bits() {
        let d = JointDistribution::uniform(bits(&["X", "Y", "Z"])).unwrap();
        let s = entropy_inequality_suite(&d, &["X"], &["Y"], &["Z"]).unwrap();
        assert!(s.get(SUBADDITIVITY).unwrap().abs() < 1e-12);
        assert!(s.get(STRONG_SUBADDITIVITY).unwrap().abs() < 1e-12);
        assert!(s.get(ITERATED_CONDITIONAL_SUBADDITIVITY).unwrap().abs() < 1e-12);
        assert!((s.get(CONDITIONAL_POSITIVITY).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn suite_on_copies() {
        let mut table = vec![0.0; 8];
        table[0] = 0.5;
        table[7] = 0.5;
        let d = JointDistribution::new(bits(&["X", "Y", "Z"]), table).unwrap();
        let s = entropy_inequality_suite(&d, &["X"], &["Y"], &["Z"]).unwrap();
        assert!(s.get(STRONG_SUBADDITIVITY).unwrap().abs() < 1e-12);
        assert!(s.holds());
        assert!(entropy_inequality_suite(&d, &["X"], &[], &["Z"]).is_err());
        assert!(entropy_inequality_suite(&d, &["X"], &["X"], &["Z"]).is_err());
    }

    #[test]
    fn channel_identity_and_erasure() {
        let d = bsc();
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(apply_channel(&d, "Y", &id).unwrap(), d);

        let erase = vec![vec![1.0, 1.0]];
        let e = apply_channel(&d, "Y", &erase).unwrap();
        assert_eq!(e.variables()[1].cardinality, 1);
        assert_eq!(shannon_entropy(&e, &["Y"]).unwrap(), 0.0);
        let slack = ancilla_evolution_slack(&d, &["X"], "Y", &erase).unwrap();
        // Erasure destroys exactly the correlation: the slack is I(X:Y).
        assert!((slack - 0.188_721_875_540_867_2).abs() < 1e-12);

        let bad = vec![vec![0.5, 0.5], vec![0.6, 0.5]];
        assert!(matches!(
            apply_channel(&d, "Y", &bad),
            Err(Error::Matrix(_))
        ));
        let wrong_cols = vec![vec![1.0]];
        assert!(matches!(
            apply_channel(&d, "Y", &wrong_cols),
            Err(Error::Matrix(_))
        ));
    }

    #[test]
    fn erasing_a_point_mass_leaves_zero_slack() {
        // Y independent of X: erasing Y loses no correlation.
        let d = JointDistribution::uniform(bits(&["X", "Y"])).unwrap();
        let slack = ancilla_evolution_slack(&d, &["X"], "Y", &[vec![1.0, 1.0]]).unwrap();
        assert!(slack.abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_validates() {
        let d = bsc();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.starts_with(r#"{"variables":[{"name":"X","cardinality":2}"#));
        let back: JointDistribution = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        let bad = r#"{"variables":[{"name":"X","cardinality":2}],"table":[0.3,0.3]}"#;
        assert!(serde_json::from_str::<JointDistribution>(bad).is_err());
    }

    #[test]
    fn product_detection() {
        let indep = JointDistribution::uniform(bits(&["X", "Y"])).unwrap();
        assert!(indep.is_product(1e-12));
        assert!(!bsc().is_product(1e-9));
    }
}
