//! Vilenkin characters, the fast Vilenkin-Fourier transform and Dirichlet
//! kernels.
//!
//! Characters are evaluated through their phase: with `L = lcm(m_k)` every
//! `psi_n(x)` is the `L`-th root of unity of index
//! `sum_k n_k x_k (L / m_k) mod L`. One root table per basis then gives every
//! character value from a single lookup, with no accumulated rounding.
//!
//! The fast transform is the group DFT factored per coordinate: stage `k`
//! applies a size-`m_k` DFT along stride `M_k`. Stages with `m_k = 2` use the
//! real butterfly `(a + b, a - b)`.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Result, VlabError};
use crate::group::{Basis, Point};
use crate::numeric::{pairwise_sum, pairwise_sum_complex};

pub type C64 = Complex64;

/// `exp(2 pi i j / m)`, exact on the quarter turns.
pub fn unit_root(j: u64, m: u64) -> C64 {
    let j = j % m;
    if (4 * j).is_multiple_of(m) {
        return match 4 * j / m {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let (s, c) = (std::f64::consts::TAU * j as f64 / m as f64).sin_cos();
    C64::new(c, s)
}

/// Root-of-unity table and per-digit phase weights for one basis.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    basis: Basis,
    lcm: u64,
    digit_weight: Vec<u64>,
    roots: Vec<C64>,
}

impl CharacterTable {
    pub fn new(basis: &Basis) -> Self {
        let lcm = basis.radix_lcm();
        let digit_weight = basis.radices().iter().map(|&m| lcm / u64::from(m)).collect();
        let roots = (0..lcm).map(|j| unit_root(j, lcm)).collect();
        CharacterTable {
            basis: basis.clone(),
            lcm,
            digit_weight,
            roots,
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    pub fn root(&self, phase: u32) -> C64 {
        self.roots[phase as usize]
    }

    /// Phase index of `psi_n(x)` from the digit vectors of `n` and `x`.
    pub fn phase(&self, n_digits: &[u32], x_digits: &[u32]) -> u32 {
        let mut acc: u64 = 0;
        for ((&nk, &xk), &w) in n_digits.iter().zip(x_digits).zip(&self.digit_weight) {
            acc = (acc + u64::from(nk) * u64::from(xk) % self.lcm * w) % self.lcm;
        }
        acc as u32
    }

    /// Fills `out[t]` with the phase of `psi_n` at every dense point `t`.
    /// Linear in `M_N`: the level-`k+1` block is built from the level-`k`
    /// block by adding the phase of digit `k`.
    pub fn phase_row(&self, n_digits: &[u32], out: &mut [u32]) -> Result<()> {
        let powers = self.basis.dense_powers()?;
        if out.len() != powers[self.basis.depth()] {
            return Err(VlabError::BasisMismatch);
        }
        out[0] = 0;
        let lcm = self.lcm;
        for (k, &m) in self.basis.radices().iter().enumerate() {
            let mk = powers[k];
            let step = u64::from(n_digits[k]) * self.digit_weight[k] % lcm;
            for d in 1..m as usize {
                let add = (d as u64 * step % lcm) as u32;
                let (head, tail) = out.split_at_mut(d * mk);
                for (dst, &src) in tail[..mk].iter_mut().zip(&head[..mk]) {
                    let v = src + add;
                    *dst = if u64::from(v) >= lcm { v - lcm as u32 } else { v };
                }
            }
        }
        Ok(())
    }

    /// `psi_n` at every dense point.
    pub fn row(&self, n: usize) -> Result<Vec<C64>> {
        let total = self.basis.dense_len()?;
        let digits = self.basis.index_to_digits(n)?;
        let mut phases = vec![0u32; total];
        self.phase_row(digits.digits(), &mut phases)?;
        Ok(phases.iter().map(|&p| self.roots[p as usize]).collect())
    }
}

/// Generalized Rademacher function `r_k(x) = exp(2 pi i x_k / m_k)`.
pub fn rademacher(basis: &Basis, k: usize, x: &Point) -> Result<C64> {
    if k >= basis.depth() {
        return Err(VlabError::IndexOutOfRange {
            index: k.to_string(),
            bound: basis.depth().to_string(),
        });
    }
    basis.check_point(x)?;
    Ok(unit_root(u64::from(x.digit(k)), u64::from(basis.radix(k))))
}

/// Vilenkin character `psi_n(x) = prod_k r_k(x)^{n_k}`.
pub fn character(basis: &Basis, n: usize, x: &Point) -> Result<C64> {
    character_big(basis, &BigUint::from(n), x)
}

pub fn character_big(basis: &Basis, n: &BigUint, x: &Point) -> Result<C64> {
    let nd = basis.index_to_digits_big(n)?;
    basis.check_point(x)?;
    let table_lcm = basis.radix_lcm();
    let mut acc: u128 = 0;
    for ((&nk, &xk), &m) in nd.digits().iter().zip(x.digits()).zip(basis.radices()) {
        let w = u128::from(table_lcm / u64::from(m));
        acc = (acc + u128::from(nk) * u128::from(xk) * w) % u128::from(table_lcm);
    }
    Ok(unit_root(acc as u64, table_lcm))
}

/// A function constant on level-`N` cylinders, stored in point order.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    basis: Basis,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(basis: &Basis, values: Vec<C64>) -> Result<Self> {
        if values.len() != basis.dense_len()? {
            return Err(VlabError::BasisMismatch);
        }
        Ok(GridFunction {
            basis: basis.clone(),
            values,
        })
    }

    pub fn from_real(basis: &Basis, values: &[f64]) -> Result<Self> {
        Self::new(basis, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn constant(basis: &Basis, c: C64) -> Result<Self> {
        Ok(GridFunction {
            basis: basis.clone(),
            values: vec![c; basis.dense_len()?],
        })
    }

    pub fn zeros(basis: &Basis) -> Result<Self> {
        Self::constant(basis, C64::zero())
    }

    pub fn from_fn<F: FnMut(usize) -> C64>(basis: &Basis, f: F) -> Result<Self> {
        let n = basis.dense_len()?;
        Ok(GridFunction {
            basis: basis.clone(),
            values: (0..n).map(f).collect(),
        })
    }

    /// `psi_n` as a grid function.
    pub fn character(basis: &Basis, n: usize) -> Result<Self> {
        let values = CharacterTable::new(basis).row(n)?;
        Ok(GridFunction {
            basis: basis.clone(),
            values,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Haar integral `(1 / M_N) sum f(t)`.
    pub fn integral(&self) -> C64 {
        let n = self.values.len();
        pairwise_sum_complex(0, n, &|i| self.values[i]) / n as f64
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_same_basis(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn scaled(&self, s: C64) -> GridFunction {
        GridFunction {
            basis: self.basis.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &GridFunction, b: C64) -> Result<GridFunction> {
        self.check_same_basis(other)?;
        Ok(GridFunction {
            basis: self.basis.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Group convolution `(1 / M_N) sum_t f(t) g(x - t)`, computed spectrally.
    pub fn convolve(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_basis(other)?;
        let a = vft_forward(self)?;
        let b = vft_forward(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).collect();
        vft_inverse(&SpectralFunction::new(&self.basis, coeffs)?)
    }

    pub(crate) fn check_same_basis(&self, other: &GridFunction) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(VlabError::BasisMismatch)
        }
    }
}

/// The `M_N` Vilenkin-Fourier coefficients of a grid function.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFunction {
    basis: Basis,
    coeffs: Vec<C64>,
}

impl SpectralFunction {
    pub fn new(basis: &Basis, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != basis.dense_len()? {
            return Err(VlabError::BasisMismatch);
        }
        Ok(SpectralFunction {
            basis: basis.clone(),
            coeffs,
        })
    }

    /// Unit coefficient at `n`.
    pub fn delta(basis: &Basis, n: usize) -> Result<Self> {
        let mut coeffs = vec![C64::zero(); basis.dense_len()?];
        if n >= coeffs.len() {
            return Err(VlabError::IndexOutOfRange {
                index: n.to_string(),
                bound: coeffs.len().to_string(),
            });
        }
        coeffs[n] = C64::new(1.0, 0.0);
        Ok(SpectralFunction {
            basis: basis.clone(),
            coeffs,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// `sum |c_n|^2`.
    pub fn energy(&self) -> f64 {
        pairwise_sum(0, self.coeffs.len(), &|i| self.coeffs[i].norm_sqr())
    }

    /// Zeroes every coefficient with index `>= n`.
    pub fn truncated(&self, n: usize) -> SpectralFunction {
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(n) {
            *c = C64::zero();
        }
        SpectralFunction {
            basis: self.basis.clone(),
            coeffs,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

fn transform_in_place(basis: &Basis, data: &mut [C64], dir: Direction, butterflies: bool) -> Result<()> {
    let powers = basis.dense_powers()?;
    let len = data.len();
    let mut scratch = Vec::new();
    for (k, &m) in basis.radices().iter().enumerate() {
        let stride = powers[k];
        let span = powers[k + 1];
        let m = m as usize;
        if m == 2 && butterflies {
            for base in (0..len).step_by(span) {
                let (lo, hi) = data[base..base + span].split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x + y;
                    *b = x - y;
                }
            }
            continue;
        }
        let roots: Vec<C64> = (0..m as u64)
            .map(|j| {
                let r = unit_root(j, m as u64);
                if dir == Direction::Forward {
                    r.conj()
                } else {
                    r
                }
            })
            .collect();
        scratch.resize(m, C64::zero());
        for base in (0..len).step_by(span) {
            for o in 0..stride {
                let start = base + o;
                for (x, s) in scratch.iter_mut().enumerate() {
                    *s = data[start + x * stride];
                }
                for n in 0..m {
                    let mut acc = C64::zero();
                    for (x, s) in scratch.iter().enumerate() {
                        acc += s * roots[(n * x) % m];
                    }
                    data[start + n * stride] = acc;
                }
            }
        }
    }
    Ok(())
}

/// Fast forward transform: `c[n] = (1 / M_N) sum_x f(x) conj(psi_n(x))`.
pub fn vft_forward(f: &GridFunction) -> Result<SpectralFunction> {
    let mut coeffs = f.values.clone();
    transform_in_place(&f.basis, &mut coeffs, Direction::Forward, true)?;
    let scale = 1.0 / coeffs.len() as f64;
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(SpectralFunction {
        basis: f.basis.clone(),
        coeffs,
    })
}

/// Fast synthesis `sum_n c[n] psi_n`.
pub fn vft_inverse(c: &SpectralFunction) -> Result<GridFunction> {
    let mut values = c.coeffs.clone();
    transform_in_place(&c.basis, &mut values, Direction::Inverse, true)?;
    Ok(GridFunction {
        basis: c.basis.clone(),
        values,
    })
}

/// Forward transform with the generic DFT on every stage, `m_k = 2` included.
pub fn vft_forward_generic(f: &GridFunction) -> Result<SpectralFunction> {
    let mut coeffs = f.values.clone();
    transform_in_place(&f.basis, &mut coeffs, Direction::Forward, false)?;
    let scale = 1.0 / coeffs.len() as f64;
    for c in &mut coeffs {
        *c *= scale;
    }
    Ok(SpectralFunction {
        basis: f.basis.clone(),
        coeffs,
    })
}

/// Direct `O(M_N^2)` evaluation of the forward transform.
pub fn vft_naive(f: &GridFunction) -> Result<SpectralFunction> {
    let basis = &f.basis;
    let total = basis.dense_len()?;
    let table = CharacterTable::new(basis);
    let mut phases = vec![0u32; total];
    let mut coeffs = Vec::with_capacity(total);
    for n in 0..total {
        let nd = basis.index_to_digits(n)?;
        table.phase_row(nd.digits(), &mut phases)?;
        let sum = pairwise_sum_complex(0, total, &|x| f.values[x] * table.root(phases[x]).conj());
        coeffs.push(sum / total as f64);
    }
    Ok(SpectralFunction {
        basis: basis.clone(),
        coeffs,
    })
}

/// `D_n = sum_{k < n} psi_k` at every dense point.
pub fn dirichlet_dense(basis: &Basis, n: usize) -> Result<GridFunction> {
    let total = basis.dense_len()?;
    if n > total {
        return Err(VlabError::IndexOutOfRange {
            index: n.to_string(),
            bound: (total + 1).to_string(),
        });
    }
    let mut coeffs = vec![C64::zero(); total];
    for c in &mut coeffs[..n] {
        *c = C64::new(1.0, 0.0);
    }
    vft_inverse(&SpectralFunction {
        basis: basis.clone(),
        coeffs,
    })
}

/// `D_n(x)` for `n <= M_N` of any size, in `O(N lambda)`.
///
/// With `n = sum n_k M_k`,
/// `D_n = sum_k psi_{n^{(k+1)}} (sum_{u < n_k} r_k^u) D_{M_k}` where
/// `n^{(k+1)}` keeps the digits above `k`, and `D_{M_k} = M_k 1_{I_k}`.
pub fn dirichlet_eval(basis: &Basis, n: &BigUint, x: &Point) -> Result<C64> {
    basis.check_point(x)?;
    let size = basis.size();
    if n > size {
        return Err(VlabError::IndexOutOfRange {
            index: n.to_string(),
            bound: (size + 1u32).to_string(),
        });
    }
    if n == size {
        let v = if x.is_zero() { size.to_f64().unwrap() } else { 0.0 };
        return Ok(C64::new(v, 0.0));
    }
    let digits = basis.digits_of_big(n);
    // D_{M_k}(x) != 0 exactly for k <= first non-zero digit of x.
    let reach = x.first_nonzero().unwrap_or(basis.depth());
    let mut prefix = C64::new(1.0, 0.0);
    let mut value = C64::zero();
    for k in (0..basis.depth()).rev() {
        let nk = digits[k];
        if nk == 0 {
            continue;
        }
        let m = u64::from(basis.radix(k));
        let xk = u64::from(x.digit(k));
        if k <= reach {
            let geometric = if xk == 0 {
                C64::new(f64::from(nk), 0.0)
            } else {
                (0..u64::from(nk)).fold(C64::zero(), |acc, u| acc + unit_root(u * xk, m))
            };
            value += prefix * geometric * basis.power(k).to_f64().unwrap();
        }
        prefix *= unit_root(u64::from(nk) * xk, m);
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_function(basis: &Basis, seed: u64) -> GridFunction {
        let mut rng = SplitMix64::new(seed);
        GridFunction::from_fn(basis, |_| C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))).unwrap()
    }

    // Textbook product form, independent of the phase tables.
    fn character_by_product(basis: &Basis, n: usize, t: usize) -> C64 {
        let nd = basis.index_to_digits(n).unwrap();
        let x = basis.index_to_digits(t).unwrap();
        (0..basis.depth()).fold(C64::new(1.0, 0.0), |acc, k| {
            let r = C64::from_polar(
                1.0,
                std::f64::consts::TAU * f64::from(x.digit(k)) / f64::from(basis.radix(k)),
            );
            acc * r.powu(nd.digit(k))
        })
    }

    #[test]
    fn rademacher_examples() {
        let b = Basis::from_radices(&[2, 3]).unwrap();
        let x = b.point(vec![1, 1]).unwrap();
        assert_eq!(rademacher(&b, 0, &x).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(rademacher(&b, 0, &b.zero()).unwrap(), C64::new(1.0, 0.0));
        let r = rademacher(&b, 1, &x).unwrap();
        assert!((r - C64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
        assert!(rademacher(&b, 2, &x).is_err());
    }

    #[test]
    fn character_examples() {
        let w = Basis::new(&[2], 3).unwrap();
        let x = w.point(vec![1, 0, 1]).unwrap();
        assert_eq!(character(&w, 3, &x).unwrap(), C64::new(-1.0, 0.0));
        assert_eq!(character(&w, 0, &x).unwrap(), C64::new(1.0, 0.0));
        assert!(character(&w, 8, &x).is_err());
    }

    #[test]
    fn characters_match_product_form() {
        let b = Basis::from_radices(&[2, 3, 2, 4]).unwrap();
        let table = CharacterTable::new(&b);
        for n in 0..48 {
            let row = table.row(n).unwrap();
            for t in 0..48 {
                let expect = character_by_product(&b, n, t);
                assert!((row[t] - expect).norm() < 1e-12);
                let x = b.index_to_digits(t).unwrap();
                assert!((character(&b, n, &x).unwrap() - expect).norm() < 1e-12);
                assert!((row[t].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn characters_are_orthonormal() {
        let b = Basis::from_radices(&[2, 3, 2]).unwrap();
        let rows: Vec<Vec<C64>> = (0..12).map(|n| CharacterTable::new(&b).row(n).unwrap()).collect();
        for n in 0..12 {
            for j in 0..12 {
                let ip: C64 = (0..12).map(|t| rows[n][t] * rows[j][t].conj()).sum::<C64>() / 12.0;
                let expect = if n == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-12, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn character_matrix_is_unitary_up_to_weight() {
        let b = Basis::from_radices(&[3, 2, 5, 2, 4]).unwrap();
        let total = b.dense_len().unwrap();
        assert!(total <= 1000);
        let table = CharacterTable::new(&b);
        let rows: Vec<Vec<C64>> = (0..total).map(|n| table.row(n).unwrap()).collect();
        for n in (0..total).step_by(7) {
            for j in 0..total {
                let ip = pairwise_sum_complex(0, total, &|t| rows[n][t] * rows[j][t].conj()) / total as f64;
                let expect = if n == j { 1.0 } else { 0.0 };
                assert!((ip - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn forward_of_constant_and_character() {
        let b = Basis::from_radices(&[2, 3, 2]).unwrap();
        let c = C64::new(0.3, -1.7);
        let spec = vft_forward(&GridFunction::constant(&b, c).unwrap()).unwrap();
        assert!((spec.coeffs()[0] - c).norm() < 1e-15);
        assert!(spec.coeffs()[1..].iter().all(|v| v.norm() < 1e-15));
        let spec = vft_forward(&GridFunction::character(&b, 5).unwrap()).unwrap();
        for (n, v) in spec.coeffs().iter().enumerate() {
            let expect = if n == 5 { 1.0 } else { 0.0 };
            assert!((v - C64::new(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn fast_matches_naive() {
        let b = Basis::from_radices(&[2, 3, 2, 4, 2, 3]).unwrap();
        let f = random_function(&b, 11);
        let fast = vft_forward(&f).unwrap();
        let total = b.dense_len().unwrap();
        // Direct double loop on the product-form characters.
        for n in 0..total {
            let direct: C64 = (0..total)
                .map(|t| f.values()[t] * character_by_product(&b, n, t).conj())
                .sum::<C64>()
                / total as f64;
            assert!((fast.coeffs()[n] - direct).norm() <= 1e-9);
        }
        let naive = vft_naive(&f).unwrap();
        for (a, c) in fast.coeffs().iter().zip(naive.coeffs()) {
            assert!((a - c).norm() <= 1e-9);
        }
    }

    #[test]
    fn walsh_butterflies_match_generic_stage() {
        let b = Basis::new(&[2], 10).unwrap();
        let f = random_function(&b, 5);
        let fast = vft_forward(&f).unwrap();
        let generic = vft_forward_generic(&f).unwrap();
        for (a, c) in fast.coeffs().iter().zip(generic.coeffs()) {
            assert!((a - c).norm() <= 1e-12);
        }
    }

    #[test]
    fn inverse_examples() {
        let b = Basis::from_radices(&[3, 2, 2]).unwrap();
        let one = vft_inverse(&SpectralFunction::delta(&b, 0).unwrap()).unwrap();
        assert!(one.values().iter().all(|v| (v - C64::new(1.0, 0.0)).norm() < 1e-15));
        for n in 0..12 {
            let f = vft_inverse(&SpectralFunction::delta(&b, n).unwrap()).unwrap();
            let psi = GridFunction::character(&b, n).unwrap();
            assert!(f.max_abs_diff(&psi).unwrap() < 1e-14);
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let b = Basis::from_radices(&[2, 3, 2, 4, 2, 3]).unwrap();
        let mut worst: f64 = 0.0;
        for seed in 0..100 {
            let f = random_function(&b, seed);
            let spec = vft_forward(&f).unwrap();
            let back = vft_inverse(&spec).unwrap();
            worst = worst.max(back.max_abs_diff(&f).unwrap());
            let lhs = spec.energy();
            let rhs = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
            assert!((lhs - rhs).abs() <= 1e-10 * rhs);
        }
        assert!(worst <= 1e-10, "round trip error {worst}");
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let a = Basis::from_radices(&[2, 3]).unwrap();
        let b = Basis::from_radices(&[3, 2]).unwrap();
        assert!(GridFunction::new(&a, vec![C64::zero(); 5]).is_err());
        let f = GridFunction::zeros(&a).unwrap();
        let g = GridFunction::zeros(&b).unwrap();
        assert_eq!(f.convolve(&g), Err(VlabError::BasisMismatch));
    }

    #[test]
    fn dirichlet_at_generalized_powers() {
        let b = Basis::from_radices(&[2, 3, 2, 4]).unwrap();
        for j in 0..=b.depth() {
            let mj = b.dense_powers().unwrap()[j];
            let d = dirichlet_dense(&b, mj).unwrap();
            let ij = b.origin_cylinder(j).unwrap();
            for (t, v) in d.values().iter().enumerate() {
                let expect = if ij.contains_index(&b, t) { mj as f64 } else { 0.0 };
                assert!((v - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        let zero = dirichlet_dense(&b, 0).unwrap();
        assert!(zero.values().iter().all(|v| v.norm() == 0.0));
        let one = dirichlet_dense(&b, 1).unwrap();
        assert!(one.values().iter().all(|v| (v - C64::new(1.0, 0.0)).norm() < 1e-14));
        assert!(dirichlet_dense(&b, 49).is_err());
    }

    #[test]
    fn dirichlet_increments_are_characters() {
        let b = Basis::from_radices(&[3, 2, 2, 3]).unwrap();
        for n in 0..36 {
            let step = dirichlet_dense(&b, n + 1)
                .unwrap()
                .combine(
                    C64::new(1.0, 0.0),
                    &dirichlet_dense(&b, n).unwrap(),
                    C64::new(-1.0, 0.0),
                )
                .unwrap();
            assert!(step.max_abs_diff(&GridFunction::character(&b, n).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_eval_matches_dense_exhaustively() {
        let b = Basis::from_radices(&[2, 3, 4]).unwrap();
        let total = b.dense_len().unwrap();
        assert_eq!(total, 24);
        let table = CharacterTable::new(&b);
        let mut running = vec![C64::zero(); total];
        for n in 0..=total {
            for t in 0..total {
                let x = b.index_to_digits(t).unwrap();
                let v = dirichlet_eval(&b, &BigUint::from(n), &x).unwrap();
                assert!((v - running[t]).norm() < 1e-12, "n={n} t={t}");
            }
            if n < total {
                let row = table.row(n).unwrap();
                for (acc, v) in running.iter_mut().zip(row) {
                    *acc += v;
                }
            }
        }
        assert!(dirichlet_eval(&b, &BigUint::from(25u32), &b.zero()).is_err());
    }

    #[test]
    fn dirichlet_eval_on_deep_basis() {
        let b = Basis::new(&[2, 3], 90).unwrap();
        let n = b.power(40) * 5u32 + 17u32;
        assert_eq!(dirichlet_eval(&b, &n, &b.zero()).unwrap().re, n.to_f64().unwrap());
        // D_{M_j} vanishes once a digit below j is non-zero.
        let mut digits = vec![0u32; 90];
        digits[20] = 1;
        let x = b.point(digits).unwrap();
        let v = dirichlet_eval(&b, b.power(30), &x).unwrap();
        assert_eq!(v, C64::zero());
        let v = dirichlet_eval(&b, b.power(20), &x).unwrap();
        assert_eq!(v.re, b.power(20).to_f64().unwrap());
    }
}
