//! Weight sequences `{q_k}` and their cumulative sums `Q_n = sum_{k<n} q_k`.
//!
//! Cumulative sums up to [`DIRECT_LIMIT`] terms are compensated running sums
//! in ascending order, identical to what [`WeightSequence::prefix`] produces.
//! Past that point `Q_n` continues from the exact anchor `Q_a` with the
//! Euler-Maclaurin formula (trapezoid correction, integral by Gauss-Legendre
//! in `log x`). The Cesaro kinds instead use the Gamma-ratio expansion of
//! `A_n^alpha`, calibrated at the anchor.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Result, VlabError};
use crate::numeric::{gauss_legendre, CompensatedSum};

/// Number of terms summed directly before switching to asymptotics.
pub const DIRECT_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// `q_k = 1`.
    Fejer,
    /// Nörlund Cesaro weights `q_k = A_k^{alpha-1}`, `0 < alpha < 1`.
    Cesaro { alpha: f64 },
    /// The same weights used forward, as a T-mean (`U_n^alpha`).
    InverseCesaro { alpha: f64 },
    /// `q_0 = 1`, `q_k = k^{alpha-1}` (`V_n^alpha`).
    Power { alpha: f64 },
    /// `q_0 = 0`, `q_k = 1/k`, so `Q_n = l_n` (`R_n`).
    Riesz,
    /// Same weights as [`WeightKind::Riesz`], used reversed (`L_n`).
    NorlundLog,
    /// `q_0 = 0`, `q_k = log^{(beta)}(k^alpha)` clamped at 0 (`B_n^{alpha,beta}`).
    IterLog { alpha: f64, beta: u32 },
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::Fejer => write!(f, "fejer"),
            WeightKind::Cesaro { alpha } => write!(f, "cesaro({alpha})"),
            WeightKind::InverseCesaro { alpha } => write!(f, "inverse_cesaro({alpha})"),
            WeightKind::Power { alpha } => write!(f, "power({alpha})"),
            WeightKind::Riesz => write!(f, "riesz"),
            WeightKind::NorlundLog => write!(f, "norlund_log"),
            WeightKind::IterLog { alpha, beta } => write!(f, "iterlog({alpha},{beta})"),
        }
    }
}

impl FromStr for WeightKind {
    type Err = VlabError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| VlabError::InvalidWeights(format!("unbalanced parentheses in {s:?}")))?;
                (
                    &s[..open],
                    close[open + 1..].split(',').map(str::trim).collect::<Vec<_>>(),
                )
            }
            None => (s, Vec::new()),
        };
        let real = |i: usize| -> Result<f64> {
            args.get(i)
                .ok_or_else(|| VlabError::InvalidWeights(format!("{name} needs parameter #{}", i + 1)))?
                .parse::<f64>()
                .map_err(|e| VlabError::InvalidWeights(format!("{name}: {e}")))
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(VlabError::InvalidWeights(format!(
                    "{name} takes {n} parameter(s), got {}",
                    args.len()
                )))
            }
        };
        let kind = match name.trim() {
            "fejer" => {
                arity(0)?;
                WeightKind::Fejer
            }
            "riesz" => {
                arity(0)?;
                WeightKind::Riesz
            }
            "norlund_log" => {
                arity(0)?;
                WeightKind::NorlundLog
            }
            "cesaro" => {
                arity(1)?;
                WeightKind::Cesaro { alpha: real(0)? }
            }
            "inverse_cesaro" => {
                arity(1)?;
                WeightKind::InverseCesaro { alpha: real(0)? }
            }
            "power" => {
                arity(1)?;
                WeightKind::Power { alpha: real(0)? }
            }
            "iterlog" => {
                arity(2)?;
                let beta = args[1]
                    .parse::<u32>()
                    .map_err(|e| VlabError::InvalidWeights(format!("iterlog beta: {e}")))?;
                WeightKind::IterLog { alpha: real(0)?, beta }
            }
            other => return Err(VlabError::InvalidWeights(format!("unknown weight kind {other:?}"))),
        };
        Ok(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    NonIncreasing,
    NonDecreasing,
    Neither,
}

/// `q_0..q_{n-1}` with `Q_0..Q_n`.
#[derive(Clone, Debug)]
pub struct WeightPrefix {
    pub q: Vec<f64>,
    pub cum: Vec<f64>,
}

impl WeightPrefix {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
struct Anchor {
    // q_a and Q_a at a = DIRECT_LIMIT.
    q: f64,
    cum: f64,
}

/// A validated weight sequence.
#[derive(Debug)]
pub struct WeightSequence {
    kind: WeightKind,
    anchor: OnceLock<Anchor>,
}

impl Clone for WeightSequence {
    fn clone(&self) -> Self {
        WeightSequence {
            kind: self.kind,
            anchor: self.anchor.clone(),
        }
    }
}

impl PartialEq for WeightSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

fn open_unit(name: &str, alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(VlabError::InvalidWeights(format!(
            "{name} needs 0 < alpha < 1, got {alpha}"
        )))
    }
}

/// `log^{(beta)}(x^alpha)`, or 0 where an inner logarithm is undefined or
/// the result is negative.
fn iterated_log(x: f64, alpha: f64, beta: u32) -> f64 {
    if x <= 1.0 {
        return 0.0;
    }
    let mut v = alpha * x.ln();
    for _ in 1..beta {
        if v <= 0.0 {
            return 0.0;
        }
        v = v.ln();
    }
    v.max(0.0)
}

impl WeightSequence {
    pub fn new(kind: WeightKind) -> Result<Self> {
        match kind {
            WeightKind::Cesaro { alpha } => open_unit("cesaro", alpha)?,
            WeightKind::InverseCesaro { alpha } => open_unit("inverse_cesaro", alpha)?,
            WeightKind::Power { alpha } => open_unit("power", alpha)?,
            WeightKind::IterLog { alpha, beta } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return Err(VlabError::InvalidWeights(format!(
                        "iterlog needs alpha > 0, got {alpha}"
                    )));
                }
                if beta < 1 {
                    return Err(VlabError::InvalidWeights("iterlog needs beta >= 1".into()));
                }
            }
            WeightKind::Fejer | WeightKind::Riesz | WeightKind::NorlundLog => {}
        }
        Ok(WeightSequence {
            kind,
            anchor: OnceLock::new(),
        })
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(spec.parse()?)
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Declared monotonicity, valid from [`Self::monotone_from`] on.
    pub fn monotonicity(&self) -> Monotonicity {
        match self.kind {
            WeightKind::IterLog { .. } => Monotonicity::NonDecreasing,
            _ => Monotonicity::NonIncreasing,
        }
    }

    /// First index of the monotone range. The logarithmic weights set
    /// `q_0 = 0` below `q_1 = 1`; `q_0` never multiplies a non-zero partial
    /// sum, so only `k >= 1` matters for the means.
    pub fn monotone_from(&self) -> u64 {
        match self.kind {
            WeightKind::Riesz | WeightKind::NorlundLog => 1,
            _ => 0,
        }
    }

    /// Every kind here has `Q_n -> infinity`.
    pub fn is_regular(&self) -> bool {
        true
    }

    fn cesaro_alpha(&self) -> Option<f64> {
        match self.kind {
            WeightKind::Cesaro { alpha } | WeightKind::InverseCesaro { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// `q_0..q_{n-1}`.
    pub fn terms(&self, n: usize) -> Vec<f64> {
        if let Some(alpha) = self.cesaro_alpha() {
            // A_k^{a-1} = prod_{j<=k} (1 + (a-1)/j), summed in log space: a plain
            // running product drifts by ~1e-11 relative over 10^7 terms.
            let mut out = Vec::with_capacity(n);
            let mut log = CompensatedSum::new();
            for k in 0..n {
                if k > 0 {
                    log.add(((alpha - 1.0) / k as f64).ln_1p());
                }
                out.push(log.value().exp());
            }
            return out;
        }
        (0..n as u64).map(|k| self.term(k)).collect()
    }

    /// `q_k`.
    pub fn term(&self, k: u64) -> f64 {
        match self.kind {
            WeightKind::Fejer => 1.0,
            WeightKind::Cesaro { .. } | WeightKind::InverseCesaro { .. } => {
                if k <= DIRECT_LIMIT {
                    *self.terms(k as usize + 1).last().unwrap()
                } else {
                    self.term_real(k as f64)
                }
            }
            WeightKind::Power { alpha } => {
                if k == 0 {
                    1.0
                } else {
                    (k as f64).powf(alpha - 1.0)
                }
            }
            WeightKind::Riesz | WeightKind::NorlundLog => {
                if k == 0 {
                    0.0
                } else {
                    1.0 / k as f64
                }
            }
            WeightKind::IterLog { alpha, beta } => {
                if k == 0 {
                    0.0
                } else {
                    iterated_log(k as f64, alpha, beta)
                }
            }
        }
    }

    /// Continuous extension of `q` for large real arguments.
    pub fn term_real(&self, x: f64) -> f64 {
        match self.kind {
            WeightKind::Fejer => 1.0,
            WeightKind::Cesaro { alpha } | WeightKind::InverseCesaro { alpha } => {
                let a = DIRECT_LIMIT as f64;
                if x <= a {
                    return self.term(x as u64);
                }
                // A_x^b ~ x^b (1 + b (b + 1) / (2x)) / Gamma(b + 1), b = alpha - 1.
                let b = alpha - 1.0;
                let shape = |t: f64| t.powf(b) * (1.0 + b * (b + 1.0) / (2.0 * t));
                self.anchor().q * shape(x) / shape(a)
            }
            WeightKind::Power { alpha } => x.powf(alpha - 1.0),
            WeightKind::Riesz | WeightKind::NorlundLog => 1.0 / x,
            WeightKind::IterLog { alpha, beta } => iterated_log(x, alpha, beta),
        }
    }

    fn anchor(&self) -> Anchor {
        *self.anchor.get_or_init(|| {
            let prefix = self.prefix(DIRECT_LIMIT as usize + 1);
            Anchor {
                q: prefix.q[DIRECT_LIMIT as usize],
                cum: prefix.cum[DIRECT_LIMIT as usize],
            }
        })
    }

    /// `q_0..q_{n-1}` and `Q_0..Q_n`.
    pub fn prefix(&self, n: usize) -> WeightPrefix {
        let q = self.terms(n);
        let mut cum = Vec::with_capacity(n + 1);
        let mut acc = CompensatedSum::new();
        cum.push(0.0);
        for &v in &q {
            acc.add(v);
            cum.push(acc.value());
        }
        WeightPrefix { q, cum }
    }

    /// `Q_n`.
    pub fn cumulative(&self, n: u64) -> f64 {
        if let WeightKind::Fejer = self.kind {
            return n as f64;
        }
        if n <= DIRECT_LIMIT {
            let mut acc = CompensatedSum::new();
            for v in self.terms(n as usize) {
                acc.add(v);
            }
            return acc.value();
        }
        self.cumulative_real(n as f64)
    }

    /// `Q_x` for real `x > DIRECT_LIMIT` (indices beyond `u64` included).
    pub fn cumulative_real(&self, x: f64) -> f64 {
        if let WeightKind::Fejer = self.kind {
            return x;
        }
        let a = DIRECT_LIMIT as f64;
        if x <= a {
            return self.cumulative(x as u64);
        }
        let anchor = self.anchor();
        if let Some(alpha) = self.cesaro_alpha() {
            // Q_n = A_{n-1}^alpha.
            let shape = |t: f64| t.powf(alpha) * (1.0 + alpha * (alpha + 1.0) / (2.0 * t));
            return anchor.cum * shape(x - 1.0) / shape(a - 1.0);
        }
        // sum_{k=a}^{b} q_k with b = x - 1.
        let b = x - 1.0;
        let (la, lb) = (a.ln(), b.ln());
        let panels = (((lb - la) / 0.125).ceil() as usize).max(1);
        let integral = gauss_legendre(|u| u.exp() * self.term_real(u.exp()), la, lb, panels);
        anchor.cum + integral + 0.5 * (anchor.q + self.term_real(b))
    }

    /// `q_{M+1} / Q_{M+2}` for `M` given as a real number (possibly huge).
    pub fn ratio_after(&self, m: f64) -> f64 {
        if m + 2.0 <= DIRECT_LIMIT as f64 {
            let mm = m as u64;
            return self.term(mm + 1) / self.cumulative(mm + 2);
        }
        self.term_real(m + 1.0) / self.cumulative_real(m + 2.0)
    }

    /// Checks `q_k >= 0` and the declared monotonicity for `k < count`.
    pub fn verify_declared(&self, count: usize) -> bool {
        let q = self.terms(count);
        if q.iter().any(|&v| v.is_nan() || v < 0.0) {
            return false;
        }
        let from = self.monotone_from() as usize;
        let pairs = q[from.min(q.len())..].windows(2);
        match self.monotonicity() {
            Monotonicity::NonIncreasing => pairs.into_iter().all(|w| w[1] <= w[0]),
            Monotonicity::NonDecreasing => pairs.into_iter().all(|w| w[1] >= w[0]),
            Monotonicity::Neither => true,
        }
    }
}

/// `A_n^alpha` by the recurrence `A_n = A_{n-1} (n + alpha) / n`, `A_0 = 1`.
pub fn cesaro_number(n: u64, alpha: f64) -> f64 {
    (1..=n).fold(1.0, |a, k| a * (k as f64 + alpha) / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<WeightKind> {
        vec![
            WeightKind::Fejer,
            WeightKind::Cesaro { alpha: 0.5 },
            WeightKind::InverseCesaro { alpha: 0.3 },
            WeightKind::Power { alpha: 0.5 },
            WeightKind::Riesz,
            WeightKind::NorlundLog,
            WeightKind::IterLog { alpha: 1.0, beta: 1 },
            WeightKind::IterLog { alpha: 2.0, beta: 2 },
        ]
    }

    #[test]
    fn names_round_trip() {
        for kind in all_kinds() {
            let text = kind.to_string();
            assert_eq!(text.parse::<WeightKind>().unwrap(), kind, "{text}");
        }
        assert_eq!(
            "iterlog(1, 1)".parse::<WeightKind>().unwrap(),
            WeightKind::IterLog { alpha: 1.0, beta: 1 }
        );
        assert!("gauss".parse::<WeightKind>().is_err());
        assert!("power".parse::<WeightKind>().is_err());
        assert!("fejer(1)".parse::<WeightKind>().is_err());
        assert!("power(0.5".parse::<WeightKind>().is_err());
    }

    #[test]
    fn parameter_ranges() {
        assert!(WeightSequence::new(WeightKind::Power { alpha: 1.0 }).is_err());
        assert!(WeightSequence::new(WeightKind::Cesaro { alpha: 0.0 }).is_err());
        assert!(WeightSequence::new(WeightKind::IterLog { alpha: -1.0, beta: 1 }).is_err());
        assert!(WeightSequence::new(WeightKind::IterLog { alpha: 1.0, beta: 0 }).is_err());
        assert!(WeightSequence::new(WeightKind::IterLog { alpha: 3.0, beta: 2 }).is_ok());
    }

    #[test]
    fn riesz_cumulative_is_harmonic() {
        let w = WeightSequence::new(WeightKind::Riesz).unwrap();
        assert_eq!(w.term(0), 0.0);
        for n in 1..50u64 {
            let l: f64 = (1..n).map(|k| 1.0 / k as f64).sum();
            assert!((w.cumulative(n) - l).abs() < 1e-14);
        }
    }

    #[test]
    fn power_weights() {
        let w = WeightSequence::new(WeightKind::Power { alpha: 0.5 }).unwrap();
        assert_eq!(w.term(0), 1.0);
        assert_eq!(w.term(1), 1.0);
        assert!((w.term(4) - 0.5).abs() < 1e-15);
        assert_eq!(w.monotonicity(), Monotonicity::NonIncreasing);
    }

    #[test]
    fn fejer_cumulative() {
        let w = WeightSequence::new(WeightKind::Fejer).unwrap();
        for n in [0u64, 1, 7, 1000] {
            assert_eq!(w.cumulative(n), n as f64);
        }
    }

    #[test]
    fn iterlog_clamps_small_indices() {
        let w = WeightSequence::new(WeightKind::IterLog { alpha: 1.0, beta: 2 }).unwrap();
        // log log k < 0 for k < e^1.
        assert_eq!(w.term(1), 0.0);
        assert_eq!(w.term(2), 0.0);
        assert!(w.term(3) > 0.0);
        let w = WeightSequence::new(WeightKind::IterLog { alpha: 1.0, beta: 1 }).unwrap();
        assert_eq!(w.term(1), 0.0);
        assert!((w.term(2) - 2f64.ln()).abs() < 1e-16);
    }

    #[test]
    fn cesaro_numbers_satisfy_summation_identity() {
        // sum_{k=0}^{n} A_k^{a-1} = A_n^a, both sides from the recurrence.
        for &alpha in &[0.25, 0.5, 0.9] {
            let w = WeightSequence::new(WeightKind::Cesaro { alpha }).unwrap();
            let prefix = w.prefix(400);
            for n in 0..399u64 {
                let lhs = prefix.cum[n as usize + 1];
                let rhs = cesaro_number(n, alpha);
                assert!((lhs - rhs).abs() <= 1e-12 * rhs, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn declared_monotonicity_holds() {
        for kind in all_kinds() {
            let w = WeightSequence::new(kind).unwrap();
            assert!(w.verify_declared(10_000), "{kind}");
            let p = w.prefix(10_000);
            assert!(p.cum.windows(2).all(|c| c[1] >= c[0]));
        }
    }

    #[test]
    fn prefix_and_cumulative_agree() {
        for kind in all_kinds() {
            let w = WeightSequence::new(kind).unwrap();
            let p = w.prefix(300);
            for n in [0u64, 1, 2, 17, 300] {
                assert_eq!(p.cum[n as usize], w.cumulative(n), "{kind} n={n}");
            }
        }
    }

    #[test]
    fn cesaro_normalizer_reference_values() {
        // A_{n-1}^alpha at n = 2^23 from the Gamma-function ratio in 30-digit arithmetic.
        let n = 1u64 << 23;
        for (alpha, expect) in [(0.3, 133.072_001_028_403_83), (0.5, 3_268.135_112_349_528)] {
            let w = WeightSequence::new(WeightKind::Cesaro { alpha }).unwrap();
            let got = w.cumulative(n);
            assert!((got - expect).abs() <= 1e-12 * expect, "{alpha}: {got}");
            let direct: f64 = {
                let mut acc = CompensatedSum::new();
                w.terms(n as usize).into_iter().for_each(|v| acc.add(v));
                acc.value()
            };
            assert!((direct - expect).abs() <= 1e-12 * expect, "{alpha}: {direct}");
        }
    }

    #[test]
    fn asymptotic_tail_matches_direct_sum() {
        let n: u64 = 1 << 23;
        for kind in all_kinds() {
            let w = WeightSequence::new(kind).unwrap();
            let mut direct = CompensatedSum::new();
            for v in w.terms(n as usize) {
                direct.add(v);
            }
            let direct = direct.value();
            let fast = w.cumulative(n);
            assert!((fast - direct).abs() <= 1e-11 * direct, "{kind}: {fast} vs {direct}");
            let q_direct = *w.terms(n as usize).last().unwrap();
            let q_fast = w.term_real((n - 1) as f64);
            assert!((q_fast - q_direct).abs() <= 1e-11 * q_direct.max(1e-300), "{kind}");
        }
    }
}
