//! The truncated bounded Vilenkin group `G_m` at depth `N`.
//!
//! A point is a digit vector `(x_0, .., x_{N-1})` with `x_k < m_k`. Dense data
//! is laid out little-endian: the flat index of a point is `sum x_k M_k`, so
//! `x_0` varies fastest. The generalized powers `M_k` are kept as big integers
//! so that very deep bases can be used symbolically; anything that allocates
//! `M_N` values goes through [`Basis::dense_len`], which enforces the dense cap.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, VlabError};

/// Default limit on `M_N` for operations that materialize dense data.
pub const DEFAULT_DENSE_CAP: usize = 1 << 24;

/// Environment variable overriding [`DEFAULT_DENSE_CAP`].
pub const DENSE_CAP_ENV: &str = "VLAB_DENSE_CAP";

/// Dense cap taken from `VLAB_DENSE_CAP` when set and parseable.
pub fn dense_cap_from_env() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_DENSE_CAP)
}

#[derive(Debug)]
struct Inner {
    radices: Vec<u32>,
    powers: Vec<BigUint>,
    lambda: u32,
    dense_cap: usize,
    // M_0..M_N as machine integers, present only when M_N fits under the cap.
    dense_powers: Option<Vec<usize>>,
}

/// Radix sequence `m_0..m_{N-1}` with its generalized number system.
///
/// Cheap to clone; all clones share the same storage.
#[derive(Clone, Debug)]
pub struct Basis(Arc<Inner>);

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.radices == other.0.radices
    }
}

impl Eq for Basis {}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.radices.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl Basis {
    /// Builds a depth-`depth` basis. The radix list is read as a pattern and
    /// repeated periodically when it is shorter than `depth`.
    pub fn new(pattern: &[u32], depth: usize) -> Result<Self> {
        Self::with_dense_cap(pattern, depth, dense_cap_from_env())
    }

    /// Basis whose depth is the length of `radices`.
    pub fn from_radices(radices: &[u32]) -> Result<Self> {
        Self::new(radices, radices.len())
    }

    pub fn with_dense_cap(pattern: &[u32], depth: usize, dense_cap: usize) -> Result<Self> {
        if depth < 1 {
            return Err(VlabError::InvalidDepth(depth));
        }
        if pattern.is_empty() {
            return Err(VlabError::EmptyRadices);
        }
        if let Some((index, &value)) = pattern.iter().enumerate().find(|(_, &m)| m < 2) {
            return Err(VlabError::InvalidRadix { index, value });
        }
        let radices: Vec<u32> = pattern.iter().copied().cycle().take(depth).collect();
        let mut powers = Vec::with_capacity(depth + 1);
        powers.push(BigUint::one());
        for &m in &radices {
            let next = powers.last().unwrap() * m;
            powers.push(next);
        }
        let lambda = *radices.iter().max().unwrap();
        let dense_powers = match powers[depth].to_usize() {
            Some(total) if total <= dense_cap => Some(powers.iter().map(|p| p.to_usize().unwrap()).collect()),
            _ => None,
        };
        Ok(Basis(Arc::new(Inner {
            radices,
            powers,
            lambda,
            dense_cap,
            dense_powers,
        })))
    }

    /// The first `depth` coordinates of this basis, same dense cap.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.depth() {
            return Err(VlabError::Precondition(format!(
                "cannot truncate depth {} basis to depth {depth}",
                self.depth()
            )));
        }
        Self::with_dense_cap(&self.0.radices[..depth], depth, self.0.dense_cap)
    }

    pub fn depth(&self) -> usize {
        self.0.radices.len()
    }

    pub fn radices(&self) -> &[u32] {
        &self.0.radices
    }

    pub fn radix(&self, k: usize) -> u32 {
        self.0.radices[k]
    }

    /// `M_0..M_N`.
    pub fn powers(&self) -> &[BigUint] {
        &self.0.powers
    }

    pub fn power(&self, k: usize) -> &BigUint {
        &self.0.powers[k]
    }

    /// `lambda = max m_k`.
    pub fn lambda(&self) -> u32 {
        self.0.lambda
    }

    /// Total point count `M_N`.
    pub fn size(&self) -> &BigUint {
        &self.0.powers[self.depth()]
    }

    pub fn dense_cap(&self) -> usize {
        self.0.dense_cap
    }

    pub fn is_dense(&self) -> bool {
        self.0.dense_powers.is_some()
    }

    /// `M_N` as a machine integer, or an error when it exceeds the dense cap.
    pub fn dense_len(&self) -> Result<usize> {
        self.dense_powers().map(|p| p[self.depth()])
    }

    /// `M_0..M_N` as machine integers (dense bases only).
    pub fn dense_powers(&self) -> Result<&[usize]> {
        self.0
            .dense_powers
            .as_deref()
            .ok_or_else(|| VlabError::DenseCapExceeded {
                size: self.size().to_string(),
                cap: self.0.dense_cap,
            })
    }

    /// Least common multiple of the radices; every character value is an
    /// `L`-th root of unity.
    pub fn radix_lcm(&self) -> u64 {
        self.0.radices.iter().fold(1u64, |acc, &m| acc.lcm(&u64::from(m)))
    }

    pub fn zero(&self) -> Point {
        Point {
            digits: vec![0; self.depth()],
        }
    }

    /// Validates a digit vector against the radices.
    pub fn point(&self, digits: Vec<u32>) -> Result<Point> {
        if digits.len() != self.depth() {
            return Err(VlabError::PointLength {
                got: digits.len(),
                expected: self.depth(),
            });
        }
        for (position, (&digit, &radix)) in digits.iter().zip(self.radices()).enumerate() {
            if digit >= radix {
                return Err(VlabError::DigitOutOfRange { position, digit, radix });
            }
        }
        Ok(Point { digits })
    }

    pub fn index_to_digits(&self, t: usize) -> Result<Point> {
        let total = self.dense_len()?;
        if t >= total {
            return Err(VlabError::IndexOutOfRange {
                index: t.to_string(),
                bound: total.to_string(),
            });
        }
        let mut rest = t;
        let digits = self
            .radices()
            .iter()
            .map(|&m| {
                let d = rest % m as usize;
                rest /= m as usize;
                d as u32
            })
            .collect();
        Ok(Point { digits })
    }

    pub fn digits_to_index(&self, p: &Point) -> Result<usize> {
        let powers = self.dense_powers()?;
        self.check_point(p)?;
        Ok(p.digits.iter().zip(powers).map(|(&d, &mk)| d as usize * mk).sum())
    }

    /// Mixed-radix digits of an arbitrary-size index `t < M_N`.
    pub fn index_to_digits_big(&self, t: &BigUint) -> Result<Point> {
        if t >= self.size() {
            return Err(VlabError::IndexOutOfRange {
                index: t.to_string(),
                bound: self.size().to_string(),
            });
        }
        Ok(Point {
            digits: self.digits_of_big(t),
        })
    }

    pub fn digits_to_index_big(&self, p: &Point) -> Result<BigUint> {
        self.check_point(p)?;
        Ok(p.digits
            .iter()
            .zip(self.powers())
            .fold(BigUint::zero(), |acc, (&d, mk)| acc + mk * d))
    }

    /// Digits of `n` (any size); entries beyond `N` are dropped, so callers
    /// must range-check first.
    pub(crate) fn digits_of_big(&self, n: &BigUint) -> Vec<u32> {
        let mut rest = n.clone();
        self.radices()
            .iter()
            .map(|&m| {
                let (q, r) = rest.div_rem(&BigUint::from(m));
                rest = q;
                r.to_u32().unwrap()
            })
            .collect()
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if p.digits.len() != self.depth() {
            return Err(VlabError::PointLength {
                got: p.digits.len(),
                expected: self.depth(),
            });
        }
        for (position, (&digit, &radix)) in p.digits.iter().zip(self.radices()).enumerate() {
            if digit >= radix {
                return Err(VlabError::DigitOutOfRange { position, digit, radix });
            }
        }
        Ok(())
    }

    /// Coordinatewise addition modulo `m_k`.
    pub fn add(&self, x: &Point, y: &Point) -> Result<Point> {
        self.check_point(x)?;
        self.check_point(y)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(self.radices())
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(Point { digits })
    }

    /// Coordinatewise subtraction modulo `m_k`.
    pub fn sub(&self, x: &Point, y: &Point) -> Result<Point> {
        self.check_point(x)?;
        self.check_point(y)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(self.radices())
            .map(|((&a, &b), &m)| (a + m - b) % m)
            .collect();
        Ok(Point { digits })
    }

    /// Flat-index form of `x - y` for dense bases. Indices are not range-checked.
    pub fn sub_index(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        let mut scale = 1;
        let (mut x, mut y) = (x, y);
        for &m in self.radices() {
            let m = m as usize;
            let d = (x % m + m - y % m) % m;
            out += d * scale;
            scale *= m;
            x /= m;
            y /= m;
        }
        out
    }

    /// Flat-index form of `x + y` for dense bases. Indices are not range-checked.
    pub fn add_index(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        let mut scale = 1;
        let (mut x, mut y) = (x, y);
        for &m in self.radices() {
            let m = m as usize;
            out += ((x % m + y % m) % m) * scale;
            scale *= m;
            x /= m;
            y /= m;
        }
        out
    }

    /// The cylinder `{y : y_0 = a_0, .., y_{n-1} = a_{n-1}}`.
    pub fn cylinder(&self, level: usize, anchor: &[u32]) -> Result<Cylinder> {
        if level > self.depth() {
            return Err(VlabError::Precondition(format!(
                "cylinder level {level} exceeds depth {}",
                self.depth()
            )));
        }
        if anchor.len() != level {
            return Err(VlabError::PointLength {
                got: anchor.len(),
                expected: level,
            });
        }
        for (position, (&digit, &radix)) in anchor.iter().zip(self.radices()).enumerate() {
            if digit >= radix {
                return Err(VlabError::DigitOutOfRange { position, digit, radix });
            }
        }
        Ok(Cylinder {
            anchor: anchor.to_vec(),
            size: self.power(level).clone(),
        })
    }

    /// `I_n(x)`.
    pub fn cylinder_of(&self, x: &Point, level: usize) -> Result<Cylinder> {
        self.check_point(x)?;
        self.cylinder(level, &x.digits[..level.min(x.digits.len())])
    }

    /// `I_n = I_n(0)`.
    pub fn origin_cylinder(&self, level: usize) -> Result<Cylinder> {
        self.cylinder(level, &vec![0; level])
    }

    /// Every level-`n` cylinder, in little-endian anchor order.
    pub fn cylinders(&self, level: usize) -> Result<Vec<Cylinder>> {
        if level > self.depth() {
            return Err(VlabError::Precondition(format!(
                "cylinder level {level} exceeds depth {}",
                self.depth()
            )));
        }
        let count = self
            .power(level)
            .to_usize()
            .filter(|&c| c <= self.dense_cap())
            .ok_or_else(|| VlabError::DenseCapExceeded {
                size: self.power(level).to_string(),
                cap: self.dense_cap(),
            })?;
        let sub = self.truncate(level.max(1))?;
        Ok((0..count)
            .map(|t| {
                let digits = if level == 0 {
                    Vec::new()
                } else {
                    sub.index_to_digits(t).unwrap().digits
                };
                Cylinder {
                    anchor: digits,
                    size: self.power(level).clone(),
                }
            })
            .collect())
    }
}

/// A point of the truncated group, as its digit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    digits: Vec<u32>,
}

impl Point {
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u32 {
        self.digits[k]
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Index of the first non-zero digit; `None` for the neutral element.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }
}

/// `I_n(x)`: points sharing the first `n` digits of an anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    anchor: Vec<u32>,
    size: BigUint,
}

impl Cylinder {
    pub fn level(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[u32] {
        &self.anchor
    }

    /// Haar measure `1 / M_n`, exact.
    pub fn measure(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.size.clone()))
    }

    /// `M_n = 1 / measure`.
    pub fn inverse_measure(&self) -> &BigUint {
        &self.size
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.digits.len() >= self.anchor.len() && x.digits[..self.anchor.len()] == self.anchor[..]
    }

    /// Membership test on flat indices of a dense basis.
    pub fn contains_index(&self, basis: &Basis, t: usize) -> bool {
        let mut rest = t;
        for (&a, &m) in self.anchor.iter().zip(basis.radices()) {
            if (rest % m as usize) as u32 != a {
                return false;
            }
            rest /= m as usize;
        }
        true
    }
}
