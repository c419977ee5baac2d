//! T-means, Nörlund means, their kernels and the identities tying them to
//! Fejér means.
//!
//! `T_n f = (1/Q_n) sum_{k<n} q_k S_k f` and
//! `t_n f = (1/Q_n) sum_{k=1}^{n} q_{n-k} S_k f`, with `S_0 f = 0`.
//! Indices past `M_N` are allowed for the means: there `S_k f = f`, so the
//! tail collapses to a multiple of `f`.

use crate::error::{Result, VlabError};
use crate::group::Basis;
use crate::spectral::{vft_forward, vft_inverse, GridFunction, SpectralFunction, C64};

use super::sweep::PartialSumSweep;
use super::weights::{Monotonicity, WeightSequence};

/// `sum_{k=0}^{last} coef(k) S_k` as split real and imaginary parts.
fn accumulate<F: Fn(usize) -> f64>(mut sweep: PartialSumSweep, last: usize, coef: F) -> Result<(Vec<f64>, Vec<f64>)> {
    let len = sweep.len();
    let mut re = vec![0.0; len];
    let mut im = vec![0.0; len];
    for k in 0..=last {
        let c = coef(k);
        if c != 0.0 {
            for ((a, b), (&sr, &si)) in re.iter_mut().zip(im.iter_mut()).zip(sweep.re().iter().zip(sweep.im())) {
                *a += c * sr;
                *b += c * si;
            }
        }
        if k < last {
            sweep.advance()?;
        }
    }
    Ok((re, im))
}

fn assemble(
    basis: &Basis,
    re: &[f64],
    im: &[f64],
    tail: Option<(f64, &GridFunction)>,
    scale: f64,
) -> Result<GridFunction> {
    let mut values: Vec<C64> = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
    if let Some((c, f)) = tail {
        for (v, &fx) in values.iter_mut().zip(f.values()) {
            *v += fx * c;
        }
    }
    for v in &mut values {
        *v *= scale;
    }
    GridFunction::new(basis, values)
}

fn normalizer(w: &WeightSequence, n: u64) -> Result<f64> {
    let q = if n == 0 { 0.0 } else { w.cumulative(n) };
    if q > 0.0 {
        Ok(q)
    } else {
        Err(VlabError::ZeroNormalizer { n })
    }
}

fn kernel_range(basis: &Basis, n: u64) -> Result<usize> {
    let total = basis.dense_len()?;
    if n == 0 || n > total as u64 {
        return Err(VlabError::IndexOutOfRange {
            index: n.to_string(),
            bound: (total + 1).to_string(),
        });
    }
    Ok(n as usize)
}

/// `S_n f` for `n <= M_N`.
pub fn partial_sum(f: &GridFunction, n: usize) -> Result<GridFunction> {
    let spec = vft_forward(f)?;
    if n > spec.coeffs().len() {
        return Err(VlabError::IndexOutOfRange {
            index: n.to_string(),
            bound: (spec.coeffs().len() + 1).to_string(),
        });
    }
    vft_inverse(&spec.truncated(n))
}

/// `T_n f`.
pub fn t_mean(f: &GridFunction, w: &WeightSequence, n: u64) -> Result<GridFunction> {
    let q_n = normalizer(w, n)?;
    let spec = vft_forward(f)?;
    t_mean_spectral(f, &spec, w, n, q_n)
}

fn t_mean_spectral(
    f: &GridFunction,
    spec: &SpectralFunction,
    w: &WeightSequence,
    n: u64,
    q_n: f64,
) -> Result<GridFunction> {
    let total = f.len() as u64;
    let kmax = n.min(total) as usize;
    let prefix = w.prefix(kmax);
    let (re, im) = accumulate(PartialSumSweep::new(spec)?, kmax - 1, |k| prefix.q[k])?;
    let tail = (n > total).then(|| (q_n - prefix.cum[kmax], f));
    assemble(f.basis(), &re, &im, tail, 1.0 / q_n)
}

/// Nörlund mean `t_n f`.
pub fn norlund_mean(f: &GridFunction, w: &WeightSequence, n: u64) -> Result<GridFunction> {
    let q_n = normalizer(w, n)?;
    let spec = vft_forward(f)?;
    let total = f.len() as u64;
    if n <= total {
        let prefix = w.prefix(n as usize);
        let n = n as usize;
        let (re, im) = accumulate(PartialSumSweep::new(&spec)?, n, |k| {
            if k == 0 {
                0.0
            } else {
                prefix.q[n - k]
            }
        })?;
        return assemble(f.basis(), &re, &im, None, 1.0 / q_n);
    }
    // S_k = f for k >= M_N contributes Q_{n-M+1} f.
    let last = total as usize - 1;
    let (re, im) = accumulate(PartialSumSweep::new(&spec)?, last, |k| {
        if k == 0 {
            0.0
        } else {
            w.term(n - k as u64)
        }
    })?;
    let tail = w.cumulative(n - total + 1);
    assemble(f.basis(), &re, &im, Some((tail, f)), 1.0 / q_n)
}

/// Fejér mean `sigma_n f = (1/n) sum_{k=1}^{n} S_k f`.
pub fn fejer_mean(f: &GridFunction, n: u64) -> Result<GridFunction> {
    norlund_mean(f, &WeightSequence::new(super::WeightKind::Fejer)?, n)
}

/// `F_n = (1/Q_n) sum_{k<n} q_k D_k`, so that `T_n f = f * F_n`.
pub fn t_kernel(basis: &Basis, w: &WeightSequence, n: u64) -> Result<GridFunction> {
    let n = kernel_range(basis, n)?;
    let q_n = normalizer(w, n as u64)?;
    let prefix = w.prefix(n);
    let (re, im) = accumulate(PartialSumSweep::dirichlet(basis)?, n - 1, |k| prefix.q[k])?;
    assemble(basis, &re, &im, None, 1.0 / q_n)
}

/// Fejér kernel `K_j = (1/j) sum_{k=1}^{j} D_k`.
pub fn fejer_kernel(basis: &Basis, j: u64) -> Result<GridFunction> {
    let j = kernel_range(basis, j)?;
    let (re, im) = accumulate(
        PartialSumSweep::dirichlet(basis)?,
        j,
        |k| if k == 0 { 0.0 } else { 1.0 },
    )?;
    assemble(basis, &re, &im, None, 1.0 / j as f64)
}

/// Both sides of the Abel summation
/// `sum_{j=1}^{n-2} (q_j - q_{j+1}) j + q_{n-1} (n-1) = sum_{k=1}^{n-1} q_k`.
///
/// The right side equals `Q_n - q_0`; it is `Q_n` itself only when `q_0 = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbelIdentity {
    pub n: u64,
    pub abel_sum: f64,
    pub mass: f64,
    pub normalizer: f64,
    pub q0: f64,
}

impl AbelIdentity {
    pub fn relative_gap(&self) -> f64 {
        (self.abel_sum - self.mass).abs() / self.mass.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn abel_identity(w: &WeightSequence, n: u64) -> Result<AbelIdentity> {
    if n < 2 {
        return Err(VlabError::Precondition(format!("Abel identity needs n >= 2, got {n}")));
    }
    let prefix = w.prefix(n as usize);
    let q = &prefix.q;
    let last = n as usize - 1;
    let mut abel = crate::numeric::CompensatedSum::new();
    for j in 1..last {
        abel.add((q[j] - q[j + 1]) * j as f64);
    }
    abel.add(q[last] * last as f64);
    let mut mass = crate::numeric::CompensatedSum::new();
    for &v in &q[1..] {
        mass.add(v);
    }
    Ok(AbelIdentity {
        n,
        abel_sum: abel.value(),
        mass: mass.value(),
        normalizer: prefix.cum[n as usize],
        q0: q[0],
    })
}

/// `max |F_n - (1/Q_n)(sum_{j=1}^{n-2} (q_j - q_{j+1}) j K_j + q_{n-1} (n-1) K_{n-1})|`.
///
/// The right side is built from the running sums `j K_j = sum_{k=1}^{j} D_k`,
/// independently of the left.
pub fn abel_kernel_gap(basis: &Basis, w: &WeightSequence, n: u64) -> Result<f64> {
    let n = kernel_range(basis, n)?;
    if n < 2 {
        return Err(VlabError::Precondition("kernel identity needs n >= 2".into()));
    }
    let q_n = normalizer(w, n as u64)?;
    let prefix = w.prefix(n);
    let q = &prefix.q;
    let lhs = t_kernel(basis, w, n as u64)?;
    let mut sweep = PartialSumSweep::dirichlet(basis)?;
    let len = sweep.len();
    let (mut br, mut bi) = (vec![0.0; len], vec![0.0; len]);
    let (mut rr, mut ri) = (vec![0.0; len], vec![0.0; len]);
    for j in 1..n {
        sweep.advance()?;
        for x in 0..len {
            br[x] += sweep.re()[x];
            bi[x] += sweep.im()[x];
        }
        let c = if j < n - 1 { q[j] - q[j + 1] } else { q[n - 1] };
        for x in 0..len {
            rr[x] += c * br[x];
            ri[x] += c * bi[x];
        }
    }
    let rhs = assemble(basis, &rr, &ri, None, 1.0 / q_n)?;
    lhs.max_abs_diff(&rhs)
}

/// Constant `c_n` in `|T_n f| <= c_n sigma^* f`.
///
/// Non-increasing weights give `c_n = 1`. Non-decreasing weights give
/// `c_n = (2 q_{n-1} (n-1) - Q_n + q_0) / Q_n`, which is
/// [`abel_growth_coefficient`] plus `q_0 / Q_n`.
pub fn domination_bound(w: &WeightSequence, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(VlabError::Precondition(format!(
            "domination bound needs n >= 2, got {n}"
        )));
    }
    match w.monotonicity() {
        Monotonicity::NonIncreasing => Ok(1.0),
        Monotonicity::NonDecreasing => {
            let q_n = normalizer(w, n)?;
            Ok((2.0 * w.term(n - 1) * (n - 1) as f64 - q_n + w.term(0)) / q_n)
        }
        Monotonicity::Neither => Err(VlabError::Precondition(format!("{} is not monotone", w.kind()))),
    }
}

/// `c_n` for every `n` in `0..=prefix.len()` (entries with `Q_n = 0` are 0).
pub fn domination_bounds(w: &WeightSequence, n_max: usize) -> Result<Vec<f64>> {
    let prefix = w.prefix(n_max);
    match w.monotonicity() {
        Monotonicity::NonIncreasing => Ok(vec![1.0; n_max + 1]),
        Monotonicity::NonDecreasing => Ok((0..=n_max)
            .map(|n| {
                let q_n = prefix.cum[n];
                if n < 1 || q_n <= 0.0 {
                    0.0
                } else {
                    (2.0 * prefix.q[n - 1] * (n - 1) as f64 - q_n + prefix.q[0]) / q_n
                }
            })
            .collect()),
        Monotonicity::Neither => Err(VlabError::Precondition(format!("{} is not monotone", w.kind()))),
    }
}

/// `(2 q_{n-1} (n-1) - Q_n) / Q_n`. Bounds `|T_n f| / sigma^* f` only when
/// `q_0 = 0`.
pub fn abel_growth_coefficient(w: &WeightSequence, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(VlabError::Precondition(format!("needs n >= 2, got {n}")));
    }
    let q_n = normalizer(w, n)?;
    Ok((2.0 * w.term(n - 1) * (n - 1) as f64 - q_n) / q_n)
}

/// Growth diagnostics of a weight sequence over `1..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// `sup_n n q_{n-1} / Q_n`.
    pub growth_sup: f64,
    pub growth_argmax: u64,
    /// `inf_n n q_{n+1} / Q_{n+2}`.
    pub lower_inf: f64,
    pub lower_argmin: u64,
    pub normalizer: f64,
    pub regular: bool,
}

pub fn condition_checks(w: &WeightSequence, n_max: u64) -> Result<ConditionReport> {
    if n_max < 1 {
        return Err(VlabError::Precondition("n_max must be positive".into()));
    }
    let p = w.prefix(n_max as usize + 2);
    let mut report = ConditionReport {
        growth_sup: f64::NEG_INFINITY,
        growth_argmax: 0,
        lower_inf: f64::INFINITY,
        lower_argmin: 0,
        normalizer: p.cum[n_max as usize],
        regular: w.is_regular(),
    };
    for n in 1..=n_max as usize {
        if p.cum[n] > 0.0 {
            let g = n as f64 * p.q[n - 1] / p.cum[n];
            if g > report.growth_sup {
                report.growth_sup = g;
                report.growth_argmax = n as u64;
            }
        }
        if p.cum[n + 2] > 0.0 {
            let l = n as f64 * p.q[n + 1] / p.cum[n + 2];
            if l < report.lower_inf {
                report.lower_inf = l;
                report.lower_argmin = n as u64;
            }
        }
    }
    Ok(report)
}
