//! Playing recipes for the random-access-coding game, and the exhaustive
//! enumeration of deterministic classical strategies.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits;
use crate::boxes::{isotropic_box, NoSignallingBox};
use crate::error::{Error, Result};
use crate::games::{evaluate_rac_with, Limits, RacGame};

/// A complete recipe for Alice's message and Bob's guesses.
///
/// Bob's index `k` is 0-based here; see [`crate::games`] for the external
/// 1-based convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    n: usize,
    m: usize,
    kind: StrategyKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    /// `α = x1..xm`; Bob answers `α_k` for `k <= m`, else 0.
    SendFirst,
    /// `α = x_position`; Bob answers `α` whatever his index.
    SendBit { position: usize },
    /// `α` is the majority bit of `x`, ties broken by `x1`; Bob answers `α`.
    Majority,
    /// One isotropic box on `x1 ⊕ x2` and `k - 1`; `α = a ⊕ x1`, `β = b ⊕ α`.
    Chsh { bias: f64 },
    /// Binary tree of `2^depth - 1` isotropic boxes over `n = 2^depth` bits.
    Pyramid { bias: f64, depth: usize },
    /// A box for the non-local game played as `α = a`, `β = a ⊕ b`.
    Transferred { resource: NoSignallingBox },
    /// Shared randomness picks one part.
    Mixture { parts: Vec<(Strategy, f64)> },
    /// `α = message[x]`, `β_k = guess[α * n + k]`.
    ExplicitClassical { message: Vec<usize>, guess: Vec<u8> },
}

fn check_shape(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > bits::MAX_LEN {
        return Err(Error::InvalidArgument(format!("n = {n} is too large")));
    }
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "message length {m} exceeds n = {n}"
        )));
    }
    Ok(())
}

fn check_bias(bias: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&bias) {
        return Err(Error::Domain(format!("bias {bias} outside [0, 1]")));
    }
    Ok(())
}

/// Alice sends her first `m` bits.
pub fn send_first_m_strategy(n: usize, m: usize) -> Result<Strategy> {
    check_shape(n, m)?;
    if m == 0 {
        return Err(Error::InvalidArgument("send-first needs m >= 1".into()));
    }
    Ok(Strategy {
        n,
        m,
        kind: StrategyKind::SendFirst,
    })
}

/// Alice sends bit `position` (1-based) and Bob always outputs it.
pub fn send_bit_strategy(n: usize, position: usize) -> Result<Strategy> {
    check_shape(n, 1)?;
    if position == 0 || position > n {
        return Err(Error::InvalidArgument(format!(
            "bit position {position} outside 1..={n}"
        )));
    }
    Ok(Strategy {
        n,
        m: 1,
        kind: StrategyKind::SendBit { position },
    })
}

pub fn majority_vote_strategy(n: usize) -> Result<Strategy> {
    check_shape(n, 1)?;
    Ok(Strategy {
        n,
        m: 1,
        kind: StrategyKind::Majority,
    })
}

/// Alice sends a uniformly random bit and Bob outputs it.
pub fn random_message_strategy(n: usize) -> Result<Strategy> {
    check_shape(n, 1)?;
    let parts = (0..2)
        .map(|bit| explicit_classical(n, 1, vec![bit; 1 << n], echo_guess(n)).map(|s| (s, 0.5)))
        .collect::<Result<Vec<_>>>()?;
    mixture_strategy(parts)
}

pub fn chsh_strategy(bias: f64) -> Result<Strategy> {
    check_bias(bias)?;
    Ok(Strategy {
        n: 2,
        m: 1,
        kind: StrategyKind::Chsh { bias },
    })
}

pub fn pyramid_strategy(bias: f64, depth: usize) -> Result<Strategy> {
    check_bias(bias)?;
    if depth == 0 || depth > 5 {
        return Err(Error::InvalidArgument(format!(
            "pyramid depth {depth} outside 1..=5"
        )));
    }
    Ok(Strategy {
        n: 1 << depth,
        m: 1,
        kind: StrategyKind::Pyramid { bias, depth },
    })
}

/// Plays a non-local box in the original game: `α = a`, `β = a ⊕ b`.
///
/// The box needs `2^n` Alice inputs. Bob's inputs are either the indices
/// `0..n` or all `2^n` strings, in which case index `k` is fed as the unit
/// string with a one at position `k`.
pub fn transfer_nonlocal_to_rac(resource: NoSignallingBox, n: usize) -> Result<Strategy> {
    check_shape(n, 1)?;
    if resource.x_size() != 1 << n {
        return Err(Error::Wiring(format!(
            "box has {} Alice inputs, need {}",
            resource.x_size(),
            1usize << n
        )));
    }
    if resource.y_size() != n && resource.y_size() != 1 << n {
        return Err(Error::Wiring(format!(
            "box has {} Bob inputs, need {n} or {}",
            resource.y_size(),
            1usize << n
        )));
    }
    Ok(Strategy {
        n,
        m: 1,
        kind: StrategyKind::Transferred { resource },
    })
}

pub fn mixture_strategy(parts: Vec<(Strategy, f64)>) -> Result<Strategy> {
    let (first, _) = parts
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
    let (n, m) = (first.n, first.m);
    if parts.iter().any(|(s, _)| s.n != n || s.m != m) {
        return Err(Error::Shape("mixed strategies differ in (n, m)".into()));
    }
    let weights: Vec<f64> = parts.iter().map(|(_, w)| *w).collect();
    crate::check_weights(&weights)?;
    Ok(Strategy {
        n,
        m,
        kind: StrategyKind::Mixture { parts },
    })
}

pub fn explicit_classical(
    n: usize,
    m: usize,
    message: Vec<usize>,
    guess: Vec<u8>,
) -> Result<Strategy> {
    check_shape(n, m)?;
    if message.len() != 1 << n || message.iter().any(|&a| a >> m != 0) {
        return Err(Error::Shape(format!(
            "message table needs {} entries below {}",
            1usize << n,
            1usize << m
        )));
    }
    if guess.len() != n << m || guess.iter().any(|&b| b > 1) {
        return Err(Error::Shape(format!(
            "guess table needs {} bit entries",
            n << m
        )));
    }
    Ok(Strategy {
        n,
        m,
        kind: StrategyKind::ExplicitClassical { message, guess },
    })
}

impl Strategy {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    /// True when no box is involved, so every system is a classical variable.
    pub fn is_classical(&self) -> bool {
        match &self.kind {
            StrategyKind::Chsh { .. }
            | StrategyKind::Pyramid { .. }
            | StrategyKind::Transferred { .. } => false,
            StrategyKind::Mixture { parts } => parts.iter().all(|(s, _)| s.is_classical()),
            _ => true,
        }
    }

    /// Message and guess tables of a deterministic strategy.
    pub(crate) fn deterministic_tables(&self) -> Option<(Vec<usize>, Vec<u8>)> {
        let n = self.n;
        let size = 1usize << n;
        match &self.kind {
            StrategyKind::SendFirst => {
                let m = self.m;
                let message = (0..size).map(|x| x >> (n - m)).collect();
                let guess = (0..n << m)
                    .map(|i| {
                        let (alpha, k) = (i / n, i % n);
                        if k < m {
                            bits::bit(alpha, m, k)
                        } else {
                            0
                        }
                    })
                    .collect();
                Some((message, guess))
            }
            StrategyKind::SendBit { position } => {
                let message = (0..size)
                    .map(|x| bits::bit(x, n, position - 1) as usize)
                    .collect();
                Some((message, echo_guess(n)))
            }
            StrategyKind::Majority => {
                let message = (0..size)
                    .map(|x| {
                        let ones = x.count_ones() as usize;
                        match (2 * ones).cmp(&n) {
                            std::cmp::Ordering::Greater => 1,
                            std::cmp::Ordering::Less => 0,
                            std::cmp::Ordering::Equal => bits::bit(x, n, 0) as usize,
                        }
                    })
                    .collect();
                Some((message, echo_guess(n)))
            }
            StrategyKind::ExplicitClassical { message, guess } => {
                Some((message.clone(), guess.clone()))
            }
            _ => None,
        }
    }

    /// Box wiring for strategies that consume non-local resources.
    pub(crate) fn wiring(&self) -> Result<Option<Box<dyn Wiring>>> {
        Ok(match &self.kind {
            StrategyKind::Chsh { bias } => Some(Box::new(PyramidWiring::new(*bias, 1)?)),
            StrategyKind::Pyramid { bias, depth } => {
                Some(Box::new(PyramidWiring::new(*bias, *depth)?))
            }
            StrategyKind::Transferred { resource } => Some(Box::new(TransferredWiring {
                n: self.n,
                resource: [resource.clone()],
            })),
            _ => None,
        })
    }

    /// Parses the command-line mini-language: `send-first:M`, `send-bit:J`,
    /// `majority`, `random`, `chsh:E`, `pyramid:E:L` and
    /// `mix:SPEC,W;SPEC,W;...` (mixtures do not nest).
    pub fn parse(spec: &str, n: usize, m: usize) -> Result<Strategy> {
        let fail = |reason: &str| Error::Parse {
            input: spec.to_string(),
            reason: reason.to_string(),
        };
        let number = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| fail("expected a number"))
        };
        let integer = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| fail("expected an integer"))
        };
        let expect_shape = |s: Strategy| -> Result<Strategy> {
            if s.n != n || s.m != m {
                return Err(Error::InvalidArgument(format!(
                    "`{spec}` plays n = {}, m = {} but n = {n}, m = {m} was requested",
                    s.n, s.m
                )));
            }
            Ok(s)
        };

        let spec_trim = spec.trim();
        if let Some(body) = spec_trim.strip_prefix("mix:") {
            let mut parts = Vec::new();
            for item in body.split(';').filter(|s| !s.trim().is_empty()) {
                let (inner, weight) = item
                    .rsplit_once(',')
                    .ok_or_else(|| fail("mixture items are SPEC,WEIGHT"))?;
                if inner.trim().starts_with("mix:") {
                    return Err(fail("mixtures do not nest"));
                }
                parts.push((Strategy::parse(inner, n, m)?, number(weight)?));
            }
            return mixture_strategy(parts);
        }

        let fields: Vec<&str> = spec_trim.split(':').collect();
        let strategy = match fields.as_slice() {
            ["send-first", mm] => send_first_m_strategy(n, integer(mm)?)?,
            ["send-bit", j] => send_bit_strategy(n, integer(j)?)?,
            ["majority"] => majority_vote_strategy(n)?,
            ["random"] => random_message_strategy(n)?,
            ["chsh", e] => chsh_strategy(number(e)?)?,
            ["pyramid", e, l] => pyramid_strategy(number(e)?, integer(l)?)?,
            _ => return Err(fail("unknown strategy")),
        };
        expect_shape(strategy)
    }
}

fn echo_guess(n: usize) -> Vec<u8> {
    (0..2 * n).map(|i| (i / n) as u8).collect()
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StrategyKind::SendFirst => write!(f, "send-first:{}", self.m),
            StrategyKind::SendBit { position } => write!(f, "send-bit:{position}"),
            StrategyKind::Majority => write!(f, "majority"),
            StrategyKind::Chsh { bias } => write!(f, "chsh:{bias}"),
            StrategyKind::Pyramid { bias, depth } => write!(f, "pyramid:{bias}:{depth}"),
            StrategyKind::Transferred { .. } => write!(f, "transferred"),
            StrategyKind::Mixture { parts } => {
                write!(f, "mix:")?;
                for (i, (s, w)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{s},{w}")?;
                }
                Ok(())
            }
            StrategyKind::ExplicitClassical { message, guess } => {
                write!(f, "explicit:{message:?}:{guess:?}")
            }
        }
    }
}

/// Sequential use of independent boxes. Outputs of box `j` are packed into
/// bit `j` of the `u64` arguments. Alice's and Bob's box inputs may depend
/// on their own earlier outputs.
pub(crate) trait Wiring: Sync {
    fn boxes(&self) -> &[NoSignallingBox];
    fn alice_input(&self, j: usize, x: usize, alice_outputs: u64) -> usize;
    fn bob_input(&self, j: usize, k: usize, bob_outputs: u64) -> usize;
    fn message(&self, x: usize, alice_outputs: u64) -> usize;
    fn guess(&self, message: usize, k: usize, bob_outputs: u64) -> u8;
}

/// Boxes are stored bottom-up: the `2^(depth-1)` leaf boxes first, the root
/// last. Box `i` at level `l` (1-based) combines the level `l-1` values
/// `2i` and `2i+1`, where level 0 holds Alice's bits.
struct PyramidWiring {
    n: usize,
    depth: usize,
    boxes: Vec<NoSignallingBox>,
    offsets: Vec<usize>,
    nodes: Vec<(usize, usize)>,
}

impl PyramidWiring {
    fn new(bias: f64, depth: usize) -> Result<Self> {
        let resource = isotropic_box(bias)?;
        let n = 1usize << depth;
        let mut offsets = vec![0; depth + 1];
        let mut nodes = Vec::with_capacity(n - 1);
        for (level, offset) in offsets.iter_mut().enumerate().skip(1) {
            *offset = nodes.len();
            for i in 0..n >> level {
                nodes.push((level, i));
            }
        }
        Ok(Self {
            n,
            depth,
            boxes: vec![resource; n - 1],
            offsets,
            nodes,
        })
    }

    fn value(&self, level: usize, i: usize, x: usize, a: u64) -> u8 {
        if level == 0 {
            return bits::bit(x, self.n, i);
        }
        let j = self.offsets[level] + i;
        ((a >> j) & 1) as u8 ^ self.value(level - 1, 2 * i, x, a)
    }
}

impl Wiring for PyramidWiring {
    fn boxes(&self) -> &[NoSignallingBox] {
        &self.boxes
    }

    fn alice_input(&self, j: usize, x: usize, a: u64) -> usize {
        let (level, i) = self.nodes[j];
        (self.value(level - 1, 2 * i, x, a) ^ self.value(level - 1, 2 * i + 1, x, a)) as usize
    }

    fn bob_input(&self, j: usize, k: usize, _b: u64) -> usize {
        let (level, i) = self.nodes[j];
        if i == k >> level {
            (k >> (level - 1)) & 1
        } else {
            0
        }
    }

    fn message(&self, x: usize, a: u64) -> usize {
        self.value(self.depth, 0, x, a) as usize
    }

    fn guess(&self, message: usize, k: usize, b: u64) -> u8 {
        let mut guess = message as u8;
        for level in 1..=self.depth {
            let j = self.offsets[level] + (k >> level);
            guess ^= ((b >> j) & 1) as u8;
        }
        guess
    }
}

struct TransferredWiring {
    n: usize,
    resource: [NoSignallingBox; 1],
}

impl Wiring for TransferredWiring {
    fn boxes(&self) -> &[NoSignallingBox] {
        &self.resource
    }

    fn alice_input(&self, _j: usize, x: usize, _a: u64) -> usize {
        x
    }

    fn bob_input(&self, _j: usize, k: usize, _b: u64) -> usize {
        if self.resource[0].y_size() == self.n {
            k
        } else {
            bits::unit_index(self.n, k)
        }
    }

    fn message(&self, _x: usize, a: u64) -> usize {
        (a & 1) as usize
    }

    fn guess(&self, message: usize, _k: usize, b: u64) -> u8 {
        message as u8 ^ (b & 1) as u8
    }
}

/// `½ (1 + C(n-1, ⌊(n-1)/2⌋) / 2^(n-1))`, the best classical success with a
/// one-bit message.
pub fn classical_success_formula(n: usize) -> f64 {
    assert!(n >= 1, "n must be at least 1");
    let r = n - 1;
    let advantage = if r <= 120 {
        num_integer::binomial(r as u128, (r / 2) as u128) as f64 / 2f64.powi(r as i32)
    } else {
        let ln_c: f64 = (1..=r / 2)
            .map(|i| ((r - r / 2 + i) as f64).ln() - (i as f64).ln())
            .sum();
        (ln_c - r as f64 * std::f64::consts::LN_2).exp()
    };
    0.5 * (1.0 + advantage)
}

/// Large-`n` form `½ (1 + √(2 / (π n)))`.
pub fn asymptotic_classical_success(n: usize) -> f64 {
    0.5 * (1.0 + (2.0 / (std::f64::consts::PI * n as f64)).sqrt())
}

/// `½ (1 + 1/√n)`.
pub fn quantum_success_formula(n: usize) -> f64 {
    0.5 * (1.0 + 1.0 / (n as f64).sqrt())
}

/// Every deterministic pair (message table, guess table) for `(n, m)`.
#[derive(Debug, Clone)]
pub struct ClassicalStrategies {
    n: usize,
    m: usize,
    next: u64,
    count: u64,
}

/// Default cap on the number of enumerated deterministic strategies.
pub const DEFAULT_STRATEGY_CAP: u64 = 1 << 24;

pub fn classical_strategy_count(n: usize, m: usize) -> Option<u64> {
    let message_bits = (1usize << n).checked_mul(m)?;
    let guess_bits = n.checked_mul(1usize << m)?;
    let total = message_bits.checked_add(guess_bits)?;
    if total >= 64 {
        None
    } else {
        Some(1u64 << total)
    }
}

pub fn enumerate_classical_strategies(n: usize, m: usize, cap: u64) -> Result<ClassicalStrategies> {
    check_shape(n, m)?;
    if n > 8 {
        return Err(Error::Resource(format!(
            "n = {n} has too many strategies to enumerate"
        )));
    }
    let count = classical_strategy_count(n, m)
        .filter(|&c| c <= cap)
        .ok_or_else(|| {
            Error::Resource(format!(
                "2^({}·{m} + {n}·{}) strategies exceed the cap of {cap}",
                1usize << n,
                1usize << m
            ))
        })?;
    Ok(ClassicalStrategies {
        n,
        m,
        next: 0,
        count,
    })
}

impl ClassicalStrategies {
    pub fn total(&self) -> u64 {
        self.count
    }

    /// The strategy with the given enumeration index: the low `n·2^m` bits
    /// are the guess table, the remaining bits the message table.
    pub fn strategy_at(&self, index: u64) -> Strategy {
        let (n, m) = (self.n, self.m);
        let guess_bits = n << m;
        let guess = (0..guess_bits).map(|i| ((index >> i) & 1) as u8).collect();
        let rest = index >> guess_bits;
        let mask = (1u64 << m) - 1;
        let message = (0..1usize << n)
            .map(|x| ((rest >> (x * m)) & mask) as usize)
            .collect();
        Strategy {
            n,
            m,
            kind: StrategyKind::ExplicitClassical { message, guess },
        }
    }
}

impl Iterator for ClassicalStrategies {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        if self.next >= self.count {
            return None;
        }
        let s = self.strategy_at(self.next);
        self.next += 1;
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub strategies: u64,
    pub max_success: f64,
    pub max_information: f64,
    pub max_sum_squared_bias: f64,
}

/// Exhaustive search over deterministic classical strategies.
pub fn classical_oracle(game: &RacGame, cap: u64, limits: &Limits) -> Result<OracleSummary> {
    let all = enumerate_classical_strategies(game.n(), game.m(), cap)?;
    let count = all.total();
    let best = (0..count)
        .into_par_iter()
        .map(|i| {
            let r = evaluate_rac_with(game, &all.strategy_at(i), limits)?;
            Ok((
                r.success_probability,
                r.i_bits.unwrap_or(f64::NAN),
                r.bias_per_bob_input.sum_of_squares(),
            ))
        })
        .try_reduce(
            || (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |a, b| Ok((a.0.max(b.0), a.1.max(b.1), a.2.max(b.2))),
        )?;
    Ok(OracleSummary {
        strategies: count,
        max_success: best.0,
        max_information: best.1,
        max_sum_squared_bias: best.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_breaks_ties_with_first_bit() {
        let (message, guess) = majority_vote_strategy(2)
            .unwrap()
            .deterministic_tables()
            .unwrap();
        assert_eq!(message, vec![0, 0, 1, 1]);
        assert_eq!(guess, vec![0, 0, 1, 1]);
        let (message, _) = majority_vote_strategy(3)
            .unwrap()
            .deterministic_tables()
            .unwrap();
        assert_eq!(message, vec![0, 0, 0, 1, 0, 1, 1, 1]);
    }

    #[test]
    fn send_first_tables() {
        let (message, guess) = send_first_m_strategy(3, 2)
            .unwrap()
            .deterministic_tables()
            .unwrap();
        assert_eq!(message, vec![0, 0, 1, 1, 2, 2, 3, 3]);
        // α = 2 = "10": β1 = 1, β2 = 0, β3 = 0.
        assert_eq!(&guess[6..9], &[1, 0, 0]);
        assert!(send_first_m_strategy(2, 3).is_err());
    }

    #[test]
    fn pyramid_wiring_layout() {
        let w = PyramidWiring::new(1.0, 2).unwrap();
        assert_eq!(w.boxes().len(), 3);
        assert_eq!(w.nodes, vec![(1, 0), (1, 1), (2, 0)]);
        // k = 2 (third bit, "10"): right leaf box with input 0, root with input 1.
        assert_eq!(w.bob_input(0, 2, 0), 0);
        assert_eq!(w.bob_input(1, 2, 0), 0);
        assert_eq!(w.bob_input(2, 2, 0), 1);
        // k = 3 uses the right leaf with input 1.
        assert_eq!(w.bob_input(1, 3, 0), 1);
        // With all outputs zero each leaf forwards its left bit, so the root
        // sees x1 ⊕ x3.
        let x = 0b1000;
        assert_eq!(w.alice_input(0, x, 0), 1);
        assert_eq!(w.alice_input(2, x, 0), 1);
        assert_eq!(w.message(x, 0), 1);
    }

    #[test]
    fn spec_strings() {
        let s = Strategy::parse("mix:send-bit:1,0.5;send-bit:2,0.5", 2, 1).unwrap();
        assert!(s.is_classical());
        assert_eq!(s.to_string(), "mix:send-bit:1,0.5;send-bit:2,0.5");
        assert!(Strategy::parse("pyramid:1:2", 4, 1).is_ok());
        assert!(matches!(
            Strategy::parse("pyramid:1:2", 8, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(!Strategy::parse("chsh:0.7", 2, 1).unwrap().is_classical());
        assert!(matches!(
            Strategy::parse("bogus", 2, 1),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Strategy::parse("chsh:x", 2, 1),
            Err(Error::Parse { .. })
        ));
        assert!(Strategy::parse("mix:majority,0.5;send-bit:2,0.4", 2, 1).is_err());
        assert!(Strategy::parse("send-first:2", 4, 2).is_ok());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(classical_success_formula(1), 1.0);
        assert_eq!(classical_success_formula(2), 0.75);
        assert_eq!(classical_success_formula(3), 0.75);
        assert_eq!(classical_success_formula(5), 0.6875);
        assert_eq!(classical_success_formula(8), 0.63671875);
        let exact = classical_success_formula(101) - 0.5;
        let approx = asymptotic_classical_success(101) - 0.5;
        assert!(((exact - approx) / exact).abs() < 0.01);
        // Both branches of the binomial agree.
        let big = classical_success_formula(200) - 0.5;
        assert!(((big - (asymptotic_classical_success(200) - 0.5)) / big).abs() < 0.01);
    }

    #[test]
    fn enumeration_size_and_cap() {
        let all = enumerate_classical_strategies(2, 1, DEFAULT_STRATEGY_CAP).unwrap();
        assert_eq!(all.total(), 256);
        assert_eq!(all.total() as usize, all.clone().count());
        assert_eq!(
            enumerate_classical_strategies(3, 1, DEFAULT_STRATEGY_CAP)
                .unwrap()
                .total(),
            1 << 14
        );
        assert!(matches!(
            enumerate_classical_strategies(3, 1, 1000),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            enumerate_classical_strategies(4, 2, DEFAULT_STRATEGY_CAP),
            Err(Error::Resource(_))
        ));
    }
}
