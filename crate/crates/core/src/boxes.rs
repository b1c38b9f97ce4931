//! Bipartite boxes with binary outputs: conditional distributions
//! `P(a, b | x, y)` shared between Alice (input `x`) and Bob (input `y`).

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

/// Tolerance on slice normalization and marginal invariance.
pub const NO_SIGNALLING_TOL: f64 = 1e-9;

/// Largest correlator reachable with quantum resources on a binary-input
/// box with uniform marginals.
pub const TSIRELSON_BIAS: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// What is known about the physical realizability of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realizability {
    /// Mixture of local deterministic boxes.
    Local,
    /// Certified quantum, through Tsirelson's vector construction.
    Quantum,
    /// Known to exceed the quantum set.
    SuperQuantum,
    /// Read from a table; nothing certified.
    Unknown,
}

/// `P(a, b | x, y)` with `a, b ∈ {0, 1}`.
///
/// Tables read from JSON or built with [`NoSignallingBox::from_table`] are
/// checked for normalization only; use [`check_no_signalling`] to test the
/// marginal condition. Every other constructor yields a no-signalling box.
#[derive(Debug, Clone, PartialEq)]
pub struct NoSignallingBox {
    x_size: usize,
    y_size: usize,
    /// Flattened `[x][y][a][b]`.
    table: Vec<[[f64; 2]; 2]>,
    realizability: Realizability,
}

#[derive(Serialize, Deserialize)]
struct BoxJson {
    x_size: usize,
    y_size: usize,
    table: Vec<Vec<[[f64; 2]; 2]>>,
}

impl Serialize for NoSignallingBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxJson {
            x_size: self.x_size,
            y_size: self.y_size,
            table: self.table.chunks(self.y_size).map(|c| c.to_vec()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NoSignallingBox {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BoxJson::deserialize(d)?;
        NoSignallingBox::from_table(raw.x_size, raw.y_size, raw.table)
            .map_err(serde::de::Error::custom)
    }
}

impl NoSignallingBox {
    pub fn from_table(
        x_size: usize,
        y_size: usize,
        table: Vec<Vec<[[f64; 2]; 2]>>,
    ) -> Result<Self> {
        if x_size == 0 || y_size == 0 {
            return Err(Error::Shape("input alphabets must be non-empty".into()));
        }
        if table.len() != x_size || table.iter().any(|row| row.len() != y_size) {
            return Err(Error::Shape(format!(
                "table must be {x_size} x {y_size} x 2 x 2"
            )));
        }
        let flat: Vec<[[f64; 2]; 2]> = table.into_iter().flatten().collect();
        Self::checked(x_size, y_size, flat, Realizability::Unknown)
    }

    fn checked(
        x_size: usize,
        y_size: usize,
        table: Vec<[[f64; 2]; 2]>,
        realizability: Realizability,
    ) -> Result<Self> {
        for (i, slice) in table.iter().enumerate() {
            let entries = slice.iter().flatten();
            if entries.clone().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(Error::Shape(format!(
                    "negative or non-finite entry at x={}, y={}",
                    i / y_size,
                    i % y_size
                )));
            }
            let total: f64 = entries.sum();
            if (total - 1.0).abs() > NO_SIGNALLING_TOL {
                return Err(Error::Shape(format!(
                    "slice x={}, y={} sums to {total}",
                    i / y_size,
                    i % y_size
                )));
            }
        }
        Ok(Self {
            x_size,
            y_size,
            table,
            realizability,
        })
    }

    /// Box with uniform marginals and correlator `corr(x, y)` against the
    /// target `a ⊕ b = target(x, y)`:
    /// `P(a,b|x,y) = (1 + (-1)^{a⊕b⊕target} corr) / 4`.
    pub fn from_correlators(
        x_size: usize,
        y_size: usize,
        target: impl Fn(usize, usize) -> u8,
        corr: impl Fn(usize, usize) -> f64,
        realizability: Realizability,
    ) -> Result<Self> {
        let mut table = Vec::with_capacity(x_size * y_size);
        for x in 0..x_size {
            for y in 0..y_size {
                let e = corr(x, y);
                if e.is_nan() || e.abs() > 1.0 {
                    return Err(Error::Construction(format!(
                        "correlator {e} at x={x}, y={y} outside [-1, 1]"
                    )));
                }
                let t = target(x, y);
                let mut slice = [[0.0; 2]; 2];
                for (a, row) in slice.iter_mut().enumerate() {
                    for (b, p) in row.iter_mut().enumerate() {
                        let sign = if (a as u8 ^ b as u8) == t { 1.0 } else { -1.0 };
                        *p = 0.25 * (1.0 + sign * e);
                    }
                }
                table.push(slice);
            }
        }
        Self::checked(x_size, y_size, table, realizability)
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn realizability(&self) -> Realizability {
        self.realizability
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize, a: u8, b: u8) -> f64 {
        self.table[x * self.y_size + y][a as usize][b as usize]
    }

    #[inline]
    pub fn slice(&self, x: usize, y: usize) -> &[[f64; 2]; 2] {
        &self.table[x * self.y_size + y]
    }

    /// Alice's marginal `P(a | x, y)`.
    pub fn alice_marginal(&self, x: usize, y: usize, a: u8) -> f64 {
        let s = self.slice(x, y)[a as usize];
        s[0] + s[1]
    }

    pub fn bob_marginal(&self, x: usize, y: usize, b: u8) -> f64 {
        let s = self.slice(x, y);
        s[0][b as usize] + s[1][b as usize]
    }
}

/// Binary-input box with uniform marginals and `P(a⊕b = x·y) = (1+E)/2`.
/// `E = 1` is the PR box, `E = 1/√2` the Tsirelson point.
pub fn isotropic_box(bias: f64) -> Result<NoSignallingBox> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(Error::Domain(format!("bias {bias} outside [0, 1]")));
    }
    NoSignallingBox::from_correlators(
        2,
        2,
        |x, y| (x & y) as u8,
        |_, _| bias,
        isotropic_class(bias),
    )
}

/// The isotropic family over `n`-bit string inputs, targeting `a⊕b = x·y`.
pub fn inner_product_isotropic_box(n: usize, bias: f64) -> Result<NoSignallingBox> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(Error::Domain(format!("bias {bias} outside [0, 1]")));
    }
    let size = 1usize << n;
    let class = if bias == 0.0 {
        Realizability::Local
    } else if n == 1 {
        isotropic_class(bias)
    } else {
        Realizability::Unknown
    };
    NoSignallingBox::from_correlators(size, size, bits::dot, |_, _| bias, class)
}

fn isotropic_class(bias: f64) -> Realizability {
    if bias <= 0.5 {
        // CHSH value 4E <= 2.
        Realizability::Local
    } else if bias <= TSIRELSON_BIAS {
        Realizability::Quantum
    } else {
        Realizability::SuperQuantum
    }
}

/// Deterministic product box `a = f(x)`, `b = g(y)`.
pub fn local_deterministic_box(
    x_size: usize,
    y_size: usize,
    f: impl Fn(usize) -> u8,
    g: impl Fn(usize) -> u8,
) -> Result<NoSignallingBox> {
    if x_size == 0 || y_size == 0 {
        return Err(Error::Shape("input alphabets must be non-empty".into()));
    }
    let mut table = Vec::with_capacity(x_size * y_size);
    for x in 0..x_size {
        let a = f(x);
        for y in 0..y_size {
            let b = g(y);
            if a > 1 || b > 1 {
                return Err(Error::Shape("outputs must be bits".into()));
            }
            let mut slice = [[0.0; 2]; 2];
            slice[a as usize][b as usize] = 1.0;
            table.push(slice);
        }
    }
    NoSignallingBox::checked(x_size, y_size, table, Realizability::Local)
}

/// Convex combination of boxes on the same alphabets.
pub fn mix(boxes: &[NoSignallingBox], weights: &[f64]) -> Result<NoSignallingBox> {
    let first = boxes
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to mix".into()))?;
    if boxes.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} boxes but {} weights",
            boxes.len(),
            weights.len()
        )));
    }
    crate::check_weights(weights)?;
    if boxes
        .iter()
        .any(|b| b.x_size != first.x_size || b.y_size != first.y_size)
    {
        return Err(Error::Shape("boxes have different input alphabets".into()));
    }
    let mut table = vec![[[0.0; 2]; 2]; first.table.len()];
    for (bx, &w) in boxes.iter().zip(weights) {
        for (acc, slice) in table.iter_mut().zip(&bx.table) {
            for a in 0..2 {
                for b in 0..2 {
                    acc[a][b] += w * slice[a][b];
                }
            }
        }
    }
    // Local and quantum sets are convex; anything else loses its label.
    let worst = boxes
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(b, _)| b.realizability)
        .max()
        .unwrap_or(Realizability::Local);
    let realizability = match worst {
        Realizability::Local | Realizability::Quantum => worst,
        _ => Realizability::Unknown,
    };
    NoSignallingBox::checked(first.x_size, first.y_size, table, realizability)
}

/// `Σ_{a,b} P(a,b|x,y) · (±1)`, positive where `wins(a, b)` holds; this is
/// `2 P(win | x, y) - 1`.
pub fn correlator(bx: &NoSignallingBox, x: usize, y: usize, wins: impl Fn(u8, u8) -> bool) -> f64 {
    let s = bx.slice(x, y);
    let mut e = 0.0;
    for a in 0..2u8 {
        for b in 0..2u8 {
            let p = s[a as usize][b as usize];
            e += if wins(a, b) { p } else { -p };
        }
    }
    e
}

/// Correlator for the inner-product target `a ⊕ b = x·y` on packed strings.
pub fn inner_product_correlator(bx: &NoSignallingBox, x: usize, y: usize) -> f64 {
    let t = bits::dot(x, y);
    correlator(bx, x, y, |a, b| a ^ b == t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoSignallingReport {
    /// `max |P_A(a|x,y) - P_A(a|x,y')|`.
    pub alice_deviation: f64,
    pub bob_deviation: f64,
    pub max_deviation: f64,
    pub passes: bool,
}

pub fn check_no_signalling(bx: &NoSignallingBox) -> NoSignallingReport {
    let mut alice: f64 = 0.0;
    for x in 0..bx.x_size {
        for a in 0..2 {
            let reference = bx.alice_marginal(x, 0, a);
            for y in 1..bx.y_size {
                alice = alice.max((bx.alice_marginal(x, y, a) - reference).abs());
            }
        }
    }
    let mut bob: f64 = 0.0;
    for y in 0..bx.y_size {
        for b in 0..2 {
            let reference = bx.bob_marginal(0, y, b);
            for x in 1..bx.x_size {
                bob = bob.max((bx.bob_marginal(x, y, b) - reference).abs());
            }
        }
    }
    let max_deviation = alice.max(bob);
    NoSignallingReport {
        alice_deviation: alice,
        bob_deviation: bob,
        max_deviation,
        passes: max_deviation < NO_SIGNALLING_TOL,
    }
}

/// Per-Bob-input biases `E_y`, entry `i` belonging to Bob's `i`-th input in
/// whatever ordering the producer documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct BiasVector(Vec<f64>);

/// Slack allowed on the `[-1, 1]` range for computed biases.
const BIAS_RANGE_TOL: f64 = 1e-9;

impl BiasVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(e) = values
            .iter()
            .find(|e| !(e.is_finite() && e.abs() <= 1.0 + BIAS_RANGE_TOL))
        {
            return Err(Error::Domain(format!("bias {e} outside [-1, 1]")));
        }
        Ok(Self(values))
    }

    pub fn uniform(len: usize, bias: f64) -> Result<Self> {
        Self::new(vec![bias; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|e| e * e).sum()
    }
}

impl TryFrom<Vec<f64>> for BiasVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BiasVector> for Vec<f64> {
    fn from(b: BiasVector) -> Self {
        b.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh_wins(x: usize, y: usize) -> impl Fn(u8, u8) -> bool {
        let t = (x & y) as u8;
        move |a, b| a ^ b == t
    }

    #[test]
    fn pr_box_always_wins() {
        let pr = isotropic_box(1.0).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(correlator(&pr, x, y, chsh_wins(x, y)), 1.0);
            }
        }
        let r = check_no_signalling(&pr);
        assert!(r.passes);
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(pr.realizability(), Realizability::SuperQuantum);
    }

    #[test]
    fn isotropic_family() {
        let flat = isotropic_box(0.0).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert_eq!(flat.prob(x, y, a, b), 0.25);
                    }
                }
                assert_eq!(correlator(&flat, x, y, chsh_wins(x, y)), 0.0);
            }
        }
        let t = isotropic_box(TSIRELSON_BIAS).unwrap();
        assert_eq!(t.realizability(), Realizability::Quantum);
        for x in 0..2 {
            for y in 0..2 {
                let win = (1.0 + correlator(&t, x, y, chsh_wins(x, y))) / 2.0;
                assert!((win - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
            }
        }
        let e = isotropic_box(0.3).unwrap();
        assert!((correlator(&e, 1, 1, chsh_wins(1, 1)) - 0.3).abs() < 1e-15);
        assert!(matches!(isotropic_box(1.2), Err(Error::Domain(_))));
        assert!(matches!(isotropic_box(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn signalling_table_is_flagged() {
        // a = y: Alice's output reveals Bob's input.
        let table = (0..2)
            .map(|_| {
                (0..2)
                    .map(|y| {
                        let mut s = [[0.0; 2]; 2];
                        s[y][0] = 1.0;
                        s
                    })
                    .collect()
            })
            .collect();
        let bx = NoSignallingBox::from_table(2, 2, table).unwrap();
        let r = check_no_signalling(&bx);
        assert!(!r.passes);
        assert_eq!(r.alice_deviation, 1.0);
        assert_eq!(r.bob_deviation, 0.0);
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(matches!(
            NoSignallingBox::from_table(2, 2, vec![vec![[[0.25; 2]; 2]; 2]]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            NoSignallingBox::from_table(1, 1, vec![vec![[[0.5; 2]; 2]]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn deterministic_boxes() {
        let zero = local_deterministic_box(2, 2, |_| 0, |_| 0).unwrap();
        assert_eq!(zero.prob(1, 1, 0, 0), 1.0);
        assert!(check_no_signalling(&zero).passes);

        // a = α·x, b = 0 wins the inner-product game exactly at y = α.
        let alpha = 0b101;
        let sat = local_deterministic_box(8, 8, |x| bits::dot(alpha, x), |_| 0).unwrap();
        assert_eq!(sat.realizability(), Realizability::Local);
        for x in 0..8 {
            assert_eq!(inner_product_correlator(&sat, x, alpha), 1.0);
        }

        let other = local_deterministic_box(2, 2, |x| x as u8, |y| 1 - y as u8).unwrap();
        let m = mix(&[zero, other], &[0.5, 0.5]).unwrap();
        assert!(check_no_signalling(&m).passes);
        assert_eq!(m.realizability(), Realizability::Local);
    }

    #[test]
    fn mixing_is_affine() {
        let pr = isotropic_box(1.0).unwrap();
        let same = mix(&[pr.clone(), pr.clone()], &[0.3, 0.7]).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert!((same.prob(x, y, a, b) - pr.prob(x, y, a, b)).abs() < 1e-15);
                    }
                }
            }
        }

        // Anti-PR: a ⊕ b = x·y ⊕ 1.
        let anti = NoSignallingBox::from_correlators(
            2,
            2,
            |x, y| (x & y) as u8,
            |_, _| -1.0,
            Realizability::Unknown,
        )
        .unwrap();
        let flat = mix(&[pr.clone(), anti], &[0.5, 0.5]).unwrap();
        let uniform = isotropic_box(0.0).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(flat.slice(x, y), uniform.slice(x, y));
            }
        }

        for w in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let m = mix(&[pr.clone(), uniform.clone()], &[w, 1.0 - w]).unwrap();
            for x in 0..2 {
                for y in 0..2 {
                    let c = correlator(&m, x, y, chsh_wins(x, y));
                    assert!((c - w).abs() < 1e-12);
                }
            }
        }
        assert!(mix(std::slice::from_ref(&pr), &[0.9]).is_err());
        assert!(mix(
            &[pr, inner_product_isotropic_box(2, 0.5).unwrap()],
            &[0.5, 0.5]
        )
        .is_err());
    }

    #[test]
    fn json_layout() {
        let pr = isotropic_box(1.0).unwrap();
        let s = serde_json::to_string(&pr).unwrap();
        assert!(s.starts_with(r#"{"x_size":2,"y_size":2,"table":[[[[0.5,0.0],[0.0,0.5]]"#));
        let back: NoSignallingBox = serde_json::from_str(&s).unwrap();
        assert_eq!(back.slice(1, 1), pr.slice(1, 1));
        assert_eq!(back.realizability(), Realizability::Unknown);
    }

    #[test]
    fn bias_vector_range() {
        assert!(BiasVector::new(vec![0.5, -1.0]).is_ok());
        assert!(BiasVector::new(vec![1.5]).is_err());
        assert!(serde_json::from_str::<BiasVector>("[0.2, 2.0]").is_err());
        let b: BiasVector = serde_json::from_str("[0.6, 0.8]").unwrap();
        assert!((b.sum_of_squares() - 1.0).abs() < 1e-15);
    }
}
