//! The divergence martingale for `p < 1/2`.
//!
//! For an increasing sequence `alpha_0 < alpha_1 < ...` the function `f` has
//! Fourier coefficients `M_{alpha_k}^{1/p-1} / alpha_k` on each block
//! `[M_{alpha_k}, M_{alpha_k+1})` and zero elsewhere. Equivalently
//! `f = sum_k (lambda/alpha_k) a_k` with the p-atoms
//! `a_k = (M_{alpha_k}^{1/p-1} / lambda)(D_{M_{alpha_k+1}} - D_{M_{alpha_k}})`,
//! so `||f||_{H_p} <= lambda (sum_k alpha_k^{-p})^{1/p}` stays bounded while
//! `|T_{M_{alpha_k}+2} f| >= M_{alpha_k}^{1/p-2} / (16 alpha_k)` everywhere.
//!
//! `1/p` is an integer `r >= 3`, so every growth condition on the sequence is
//! an inequality between big integers. The lower bound is split as
//! `T_{M+2} f = I + II` with
//! `I = (1/Q_{M+2}) sum_{j<=M} q_j S_j f` and
//! `II = (q_{M+1}/Q_{M+2}) (c_k psi_M + S_{M_{alpha_{k-1}+1}} f)`;
//! `II` has a closed form through Dirichlet kernels at powers and `|I|` is
//! bounded by `4 lambda M_{alpha_{k-1}}^r / alpha_{k-1}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, VlabError};
use crate::group::{dense_cap_from_env, Basis, Point};
use crate::operators::{AtomTerm, AtomicDecomposition};
use crate::rng::{random_point, SplitMix64};
use crate::spectral::{dirichlet_eval, unit_root, vft_forward, GridFunction, C64};
use crate::summability::{Monotonicity, PartialSumSweep, WeightKind, WeightSequence};

/// Default number of analytic-tier sample points.
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Block sequence and its exact data.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleSpec {
    inv_p: u32,
    pattern: Vec<u32>,
    alphas: Vec<usize>,
    basis: Basis,
}

fn big_ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(x: &BigUint) -> Result<f64> {
    x.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| VlabError::Precondition(format!("{} bits exceed double range", x.bits())))
}

fn check_pattern(pattern: &[u32]) -> Result<()> {
    if pattern.is_empty() {
        return Err(VlabError::EmptyRadices);
    }
    for (index, &value) in pattern.iter().enumerate() {
        if value < 2 {
            return Err(VlabError::InvalidRadix { index, value });
        }
    }
    Ok(())
}

/// Greedy search: each `alpha_k` is the least integer above `alpha_{k-1}`
/// with
/// `lambda sum_{eta<k} M_{alpha_eta}^r / alpha_eta < M_{alpha_k}^r / alpha_k` and
/// `32 lambda M_{alpha_{k-1}}^r / alpha_{k-1} < M_{alpha_k}^{r-2} / alpha_k`.
pub fn find_alphas(inv_p: u32, pattern: &[u32], count: usize, alpha0: usize) -> Result<CounterexampleSpec> {
    if inv_p < 3 {
        return Err(VlabError::InvalidCounterexample(format!(
            "1/p = {inv_p} must be an integer >= 3"
        )));
    }
    if count < 2 {
        return Err(VlabError::InvalidCounterexample("need at least two blocks".into()));
    }
    if alpha0 < 1 {
        return Err(VlabError::InvalidCounterexample("alpha_0 must be positive".into()));
    }
    check_pattern(pattern)?;
    let lambda = BigUint::from(*pattern.iter().max().unwrap());
    let mut powers = vec![BigUint::one()];
    let mut power = |n: usize| -> BigUint {
        while powers.len() <= n {
            let k = powers.len() - 1;
            let next = &powers[k] * pattern[k % pattern.len()];
            powers.push(next);
        }
        powers[n].clone()
    };
    let r = inv_p;
    let mut alphas = vec![alpha0];
    let mut sum3 = big_ratio(power(alpha0).pow(r), BigUint::from(alpha0));
    while alphas.len() < count {
        let prev = *alphas.last().unwrap();
        let left4 = BigUint::from(32u32) * &lambda * power(prev).pow(r);
        let lam_sum = BigRational::from_integer(BigInt::from(lambda.clone())) * &sum3;
        let mut a = prev + 1;
        loop {
            let m = power(a);
            let cond4 = &left4 * a < m.pow(r - 2) * prev;
            let cond3 = lam_sum.clone() * BigRational::from_integer(BigInt::from(a))
                < BigRational::from_integer(BigInt::from(m.pow(r)));
            if cond3 && cond4 {
                break;
            }
            a += 1;
        }
        sum3 += big_ratio(power(a).pow(r), BigUint::from(a));
        alphas.push(a);
    }
    CounterexampleSpec::new(inv_p, pattern, alphas)
}

/// Tail estimate for `sum_k alpha_k^{-p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub partial_sum: f64,
    pub last_increment: f64,
    /// Last increment below `1e-3`.
    pub proxy_passes: bool,
    /// Guaranteed ratio `alpha_k / alpha_{k-1}` of any admissible continuation.
    pub growth_factor: f64,
    /// Bound on the sum of all further terms, when `growth_factor > 1`.
    pub tail_bound: Option<f64>,
}

impl SeriesReport {
    pub fn total_bound(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.partial_sum + t)
    }
}

/// Lower bound for the blow-up at one block, with the evidence behind it.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainRow {
    pub kind: WeightKind,
    pub k: usize,
    pub alpha: usize,
    pub m_alpha: BigUint,
    /// `M^{r-2} / (16 alpha_k)`, or `/ 8` on the non-decreasing path.
    pub threshold: f64,
    pub term_i_bound: f64,
    /// `min_x (|II(x)| - term_i_bound - threshold)` over the evaluated points.
    pub min_sample_margin: f64,
    pub samples: usize,
    /// Share of evaluated points where `|II| - term_i_bound >= threshold`.
    pub fraction_above: f64,
    /// `M q_{M+1} / Q_{M+2}`.
    pub cond1_c: f64,
    pub cond1_holds: bool,
    pub dense: Option<DenseTier>,
    pub hp_bound: f64,
    pub divergence_ratio: f64,
    pub cond3: bool,
    pub cond4: bool,
}

impl ChainRow {
    pub fn tier(&self) -> &'static str {
        if self.dense.is_some() {
            "dense"
        } else {
            "analytic"
        }
    }

    /// Chain and conditions hold (weights failing the growth condition are
    /// reported but never counted as verified).
    pub fn verified(&self) -> bool {
        self.cond1_holds
            && self.cond3
            && self.cond4
            && self.min_sample_margin >= 0.0
            && self.dense.as_ref().is_none_or(|d| d.passes(self.threshold))
    }

    pub fn status(&self) -> &'static str {
        if !self.cond1_holds {
            "cond1_fails"
        } else if self.verified() {
            "pass"
        } else {
            "fail"
        }
    }

    /// `divergence_ratio / hp_bound`.
    pub fn ratio(&self) -> f64 {
        self.divergence_ratio / self.hp_bound
    }
}

/// Full-grid evaluation of `T_{M+2} f` at level `alpha_k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTier {
    pub points: usize,
    pub min_abs_t: f64,
    /// `max |II_closed - II_dense| / max |II_closed|`.
    pub ii_rel_err: f64,
    /// `max_{j <= M} max_x |S_j f|`.
    pub max_sj: f64,
    pub sj_bound: f64,
    /// Largest deviation of the transform of `f` from the block law.
    pub coeff_err: f64,
}

impl DenseTier {
    pub fn passes(&self, threshold: f64) -> bool {
        self.min_abs_t >= threshold
            && self.ii_rel_err <= 1e-8
            && self.max_sj <= self.sj_bound + 1e-9
            && self.coeff_err <= 1e-9
    }
}

/// Whether `q_{n+1}/Q_{n+2} >= c/n` holds for some `c > 0`. The logarithmic
/// weights give `n q_{n+1}/Q_{n+2} ~ 1/log n`.
pub fn lower_growth_holds(w: &WeightSequence) -> bool {
    !matches!(w.kind(), WeightKind::Riesz | WeightKind::NorlundLog)
}

impl CounterexampleSpec {
    pub fn new(inv_p: u32, pattern: &[u32], alphas: Vec<usize>) -> Result<Self> {
        if inv_p < 3 {
            return Err(VlabError::InvalidCounterexample(format!(
                "1/p = {inv_p} must be an integer >= 3"
            )));
        }
        check_pattern(pattern)?;
        if alphas.is_empty() || alphas[0] == 0 || alphas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VlabError::InvalidCounterexample(format!(
                "alphas {alphas:?} must be positive and increasing"
            )));
        }
        let depth = alphas.last().unwrap() + 1;
        let basis = Basis::new(pattern, depth)?;
        Ok(CounterexampleSpec {
            inv_p,
            pattern: pattern.to_vec(),
            alphas,
            basis,
        })
    }

    /// Uses `cap` instead of the environment default for the dense tiers.
    pub fn with_dense_cap(mut self, cap: usize) -> Result<Self> {
        self.basis = Basis::with_dense_cap(&self.pattern, self.basis.depth(), cap)?;
        Ok(self)
    }

    pub fn inv_p(&self) -> u32 {
        self.inv_p
    }

    pub fn p(&self) -> f64 {
        1.0 / f64::from(self.inv_p)
    }

    pub fn pattern(&self) -> &[u32] {
        &self.pattern
    }

    pub fn lambda(&self) -> u32 {
        self.basis.lambda()
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Symbolic basis of depth `alpha_last + 1`.
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < self.alphas.len() {
            Ok(())
        } else {
            Err(VlabError::IndexOutOfRange {
                index: k.to_string(),
                bound: self.alphas.len().to_string(),
            })
        }
    }

    /// `M_{alpha_k}`.
    pub fn m_alpha(&self, k: usize) -> &BigUint {
        self.basis.power(self.alphas[k])
    }

    /// `[M_{alpha_k}, M_{alpha_k+1})`.
    pub fn block(&self, k: usize) -> (BigUint, BigUint) {
        let a = self.alphas[k];
        (self.basis.power(a).clone(), self.basis.power(a + 1).clone())
    }

    /// `M_{alpha_k}^{r-1} / alpha_k`, exact.
    pub fn coefficient(&self, k: usize) -> BigRational {
        big_ratio(self.m_alpha(k).pow(self.inv_p - 1), BigUint::from(self.alphas[k]))
    }

    pub fn coefficient_f64(&self, k: usize) -> Result<f64> {
        Ok(to_f64(&self.m_alpha(k).pow(self.inv_p - 1))? / self.alphas[k] as f64)
    }

    /// `f^(j)`.
    pub fn fourier_coefficient(&self, j: &BigUint) -> Result<f64> {
        for k in 0..self.len() {
            let (lo, hi) = self.block(k);
            if &lo <= j && j < &hi {
                return self.coefficient_f64(k);
            }
        }
        Ok(0.0)
    }

    /// Exact check of the sum condition for every `k`.
    pub fn condition3(&self) -> Vec<bool> {
        let lambda = BigRational::from_integer(BigInt::from(self.lambda()));
        let r = self.inv_p;
        let mut sum = BigRational::zero();
        let mut out = Vec::with_capacity(self.len());
        for (k, &a) in self.alphas.iter().enumerate() {
            let own = big_ratio(self.m_alpha(k).pow(r), BigUint::from(a));
            out.push(&lambda * &sum < own);
            sum += own;
        }
        out
    }

    /// Exact check of the gap condition for every `k` (vacuous at `k = 0`).
    pub fn condition4(&self) -> Vec<bool> {
        let r = self.inv_p;
        let lambda = BigUint::from(self.lambda());
        let mut out = vec![true];
        for k in 1..self.len() {
            let (prev, a) = (self.alphas[k - 1], self.alphas[k]);
            let left = BigUint::from(32u32) * &lambda * self.m_alpha(k - 1).pow(r) * a;
            let right = self.m_alpha(k).pow(r - 2) * prev;
            out.push(left < right);
        }
        out
    }

    /// Partial sums of `sum alpha_k^{-p}` and a certified tail.
    ///
    /// The gap condition with `alpha <= M_alpha` gives
    /// `M_{alpha_k}^{r-2} > 32 lambda M_{alpha_{k-1}}^{r-1}`, hence
    /// `alpha_k > rho alpha_{k-1}` for `rho = (r-1) ln m_min / ((r-2) ln lambda)`,
    /// and the tail is at most `alpha_K^{-p} / (rho^p - 1)`.
    pub fn series_report(&self) -> SeriesReport {
        let p = self.p();
        let terms: Vec<f64> = self.alphas.iter().map(|&a| (a as f64).powf(-p)).collect();
        let partial_sum = terms.iter().sum();
        let last_increment = *terms.last().unwrap();
        let r = f64::from(self.inv_p);
        let m_min = f64::from(*self.pattern.iter().min().unwrap());
        let rho = (r - 1.0) * m_min.ln() / ((r - 2.0) * f64::from(self.lambda()).ln());
        let tail_bound = (rho > 1.0).then(|| last_increment / (rho.powf(p) - 1.0));
        SeriesReport {
            partial_sum,
            last_increment,
            proxy_passes: last_increment < 1e-3,
            growth_factor: rho,
            tail_bound,
        }
    }

    /// `lambda (sum_{eta<=k} alpha_eta^{-p})^{1/p}`, the atomic bound of the
    /// truncation after block `k`.
    pub fn hp_bound(&self, k: usize) -> f64 {
        let p = self.p();
        let s: f64 = self.alphas[..=k].iter().map(|&a| (a as f64).powf(-p)).sum();
        f64::from(self.lambda()) * s.powf(1.0 / p)
    }

    /// `lambda (sum_eta alpha_eta^{-p})^{1/p}` over the whole admissible
    /// continuation, when the tail is certified.
    pub fn hp_bound_limit(&self) -> Option<f64> {
        let total = self.series_report().total_bound()?;
        Some(f64::from(self.lambda()) * total.powf(f64::from(self.inv_p)))
    }

    /// `4 lambda M_{alpha_{k-1}}^r / alpha_{k-1}`, bounding `|S_j f|` for
    /// `j <= M_{alpha_k}`. At `k = 0` those partial sums vanish.
    pub fn sj_bound(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        if k == 0 {
            return Ok(0.0);
        }
        let m = to_f64(&self.m_alpha(k - 1).pow(self.inv_p))?;
        Ok(4.0 * f64::from(self.lambda()) * m / self.alphas[k - 1] as f64)
    }

    /// Bound on `|I|`; the same as [`Self::sj_bound`] since `I` averages
    /// those partial sums with total weight `Q_{M+1}/Q_{M+2} <= 1`.
    pub fn term_i_bound(&self, k: usize) -> Result<f64> {
        self.sj_bound(k)
    }

    /// `M_{alpha_k}^{r-2} / (16 alpha_k)`.
    pub fn divergence_ratio(&self, k: usize) -> Result<f64> {
        self.check_k(k)?;
        Ok(to_f64(&self.m_alpha(k).pow(self.inv_p - 2))? / (16.0 * self.alphas[k] as f64))
    }

    /// Lower bound claimed for `|T_{M+2} f|`: the divergence ratio, doubled on
    /// the non-decreasing path.
    pub fn threshold(&self, k: usize, w: &WeightSequence) -> Result<f64> {
        let base = self.divergence_ratio(k)?;
        Ok(match w.monotonicity() {
            Monotonicity::NonDecreasing => 2.0 * base,
            _ => base,
        })
    }

    /// `q_{M+1} / Q_{M+2}` at `M = M_{alpha_k}`.
    pub fn weight_ratio(&self, k: usize, w: &WeightSequence) -> Result<f64> {
        let ratio = w.ratio_after(to_f64(self.m_alpha(k))?);
        if ratio.is_finite() && ratio > 0.0 {
            Ok(ratio)
        } else {
            Err(VlabError::ZeroNormalizer {
                n: self.m_alpha(k).to_u64().map_or(u64::MAX, |m| m.saturating_add(2)),
            })
        }
    }

    /// `S_{M_{alpha_{k-1}+1}} f (x) = sum_{eta<k} c_eta (D_{M_{alpha_eta+1}} - D_{M_{alpha_eta}})(x)`.
    pub fn partial_sum_below(&self, k: usize, x: &Point) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for eta in 0..k {
            let (lo, hi) = self.block(eta);
            let diff = dirichlet_eval(&self.basis, &hi, x)? - dirichlet_eval(&self.basis, &lo, x)?;
            acc += diff * self.coefficient_f64(eta)?;
        }
        Ok(acc)
    }

    /// `II = (q_{M+1}/Q_{M+2}) (c_k psi_M(x) + S_{M_{alpha_{k-1}+1}} f(x))`
    /// with `psi_M = r_{alpha_k}`.
    pub fn term_ii(&self, k: usize, w: &WeightSequence, x: &Point) -> Result<C64> {
        self.check_k(k)?;
        self.term_ii_scaled(k, self.weight_ratio(k, w)?, x)
    }

    fn term_ii_scaled(&self, k: usize, ratio: f64, x: &Point) -> Result<C64> {
        self.basis.check_point(x)?;
        let a = self.alphas[k];
        let psi = unit_root(u64::from(x.digit(a)), u64::from(self.basis.radix(a)));
        let inner = psi * self.coefficient_f64(k)? + self.partial_sum_below(k, x)?;
        Ok(inner * ratio)
    }

    /// Point of the symbolic basis with the given leading digits.
    pub fn point_from_digits(&self, leading: &[u32]) -> Result<Point> {
        let mut digits = leading.to_vec();
        digits.resize(self.basis.depth(), 0);
        self.basis.point(digits)
    }

    fn dense_basis(&self, level: usize) -> Result<Basis> {
        Basis::with_dense_cap(&self.pattern, level, self.basis.dense_cap())
    }

    /// `f` restricted to blocks `0..=k_max`, on the level-`alpha_{k_max}+1`
    /// grid, from `D_{M_n} = M_n 1_{I_n}`.
    pub fn build_dense(&self, k_max: usize) -> Result<GridFunction> {
        self.check_k(k_max)?;
        let basis = self.dense_basis(self.alphas[k_max] + 1)?;
        let powers = basis.dense_powers()?.to_vec();
        let coeffs = (0..=k_max)
            .map(|k| self.coefficient_f64(k))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::from_fn(&basis, |t| {
            let mut v = 0.0;
            for (k, c) in coeffs.iter().enumerate() {
                let a = self.alphas[k];
                let (lo, hi) = (powers[a], powers[a + 1]);
                if t % hi == 0 {
                    v += c * hi as f64;
                }
                if t % lo == 0 {
                    v -= c * lo as f64;
                }
            }
            C64::new(v, 0.0)
        })
    }

    /// `f = sum_{k<=k_max} (lambda/alpha_k) a_k` on the same grid as
    /// [`Self::build_dense`].
    pub fn atoms(&self, k_max: usize) -> Result<AtomicDecomposition> {
        self.check_k(k_max)?;
        let basis = self.dense_basis(self.alphas[k_max] + 1)?;
        let powers = basis.dense_powers()?.to_vec();
        let lambda = f64::from(self.lambda());
        let mut terms = Vec::new();
        for k in 0..=k_max {
            let a = self.alphas[k];
            let (lo, hi) = (powers[a], powers[a + 1]);
            let scale = to_f64(&self.m_alpha(k).pow(self.inv_p - 1))? / lambda;
            let atom = GridFunction::from_fn(&basis, |t| {
                let hi_part = if t % hi == 0 { hi as f64 } else { 0.0 };
                let lo_part = if t % lo == 0 { lo as f64 } else { 0.0 };
                C64::new(scale * (hi_part - lo_part), 0.0)
            })?;
            terms.push(AtomTerm {
                coefficient: lambda / a as f64,
                atom,
                support: basis.origin_cylinder(a)?,
            });
        }
        AtomicDecomposition::new(self.p(), terms)
    }

    /// Dense tier for block `k`: `T_{M+2} f` on every point of level
    /// `alpha_k + 1`, its split into `I + II`, and `max_{j<=M} |S_j f|`.
    pub fn dense_tier(&self, k: usize, w: &WeightSequence) -> Result<DenseTier> {
        self.check_k(k)?;
        let f = self.build_dense(k)?;
        let basis = f.basis().clone();
        let spec = vft_forward(&f)?;
        let powers = basis.dense_powers()?.to_vec();
        let mut coeff_err: f64 = 0.0;
        for (j, c) in spec.coeffs().iter().enumerate() {
            let expect = self.fourier_coefficient(&BigUint::from(j))?;
            coeff_err = coeff_err.max((c - expect).norm() / expect.abs().max(1.0));
        }
        let m = powers[self.alphas[k]];
        let n = m + 2;
        let prefix = w.prefix(n);
        let q_n = prefix.cum[n];
        if q_n <= 0.0 {
            return Err(VlabError::ZeroNormalizer { n: n as u64 });
        }
        let len = basis.dense_len()?;
        let mut sweep = PartialSumSweep::new(&spec)?;
        let (mut ir, mut ii) = (vec![0.0; len], vec![0.0; len]);
        let mut max_sj: f64 = 0.0;
        for j in 0..=m {
            let (sr, si) = (sweep.re(), sweep.im());
            let c = prefix.q[j];
            for x in 0..len {
                ir[x] += c * sr[x];
                ii[x] += c * si[x];
                max_sj = max_sj.max(sr[x].hypot(si[x]));
            }
            sweep.advance()?;
        }
        // Now at S_{M+1}.
        let c = prefix.q[m + 1];
        let ratio = c / q_n;
        let closed_ratio = self.weight_ratio(k, w)?;
        let mut min_abs_t = f64::INFINITY;
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for x in 0..len {
            let i_part = C64::new(ir[x], ii[x]) / q_n;
            let ii_dense = C64::new(sweep.re()[x], sweep.im()[x]) * ratio;
            min_abs_t = min_abs_t.min((i_part + ii_dense).norm());
            let digits = basis.index_to_digits(x)?;
            let point = self.point_from_digits(digits.digits())?;
            let closed = self.term_ii_scaled(k, closed_ratio, &point)?;
            err = err.max((closed - ii_dense).norm());
            scale = scale.max(closed.norm());
        }
        Ok(DenseTier {
            points: len,
            min_abs_t,
            ii_rel_err: err / scale.max(f64::MIN_POSITIVE),
            max_sj,
            sj_bound: self.sj_bound(k)?,
            coeff_err,
        })
    }

    /// Sample points for block `k`: the origin, then uniformly random digits
    /// from a stream seeded by `(seed, k)`.
    pub fn sample_points(&self, k: usize, samples: usize, seed: u64) -> Vec<Point> {
        let mut rng = SplitMix64::new(seed).fork(k as u64);
        let mut out = Vec::with_capacity(samples);
        if samples > 0 {
            out.push(self.basis.zero());
        }
        while out.len() < samples {
            out.push(random_point(&self.basis, &mut rng));
        }
        out
    }

    /// Evaluates the lower-bound chain for block `k` at `samples` points
    /// (all points of level `alpha_k + 1` as well when `dense` is set and
    /// the grid fits under the dense cap).
    pub fn lower_bound_chain(
        &self,
        k: usize,
        w: &WeightSequence,
        samples: usize,
        seed: u64,
        dense: bool,
    ) -> Result<ChainRow> {
        self.check_k(k)?;
        let threshold = self.threshold(k, w)?;
        let term_i_bound = self.term_i_bound(k)?;
        let mut min_margin = f64::INFINITY;
        let mut above = 0usize;
        let points = self.sample_points(k, samples, seed);
        let ratio = self.weight_ratio(k, w)?;
        for x in &points {
            let margin = self.term_ii_scaled(k, ratio, x)?.norm() - term_i_bound - threshold;
            min_margin = min_margin.min(margin);
            if margin >= 0.0 {
                above += 1;
            }
        }
        let m = to_f64(self.m_alpha(k))?;
        let dense_fits = self
            .basis
            .power(self.alphas[k] + 1)
            .to_usize()
            .is_some_and(|size| size <= self.basis.dense_cap());
        let dense = if dense && dense_fits {
            Some(self.dense_tier(k, w)?)
        } else {
            None
        };
        Ok(ChainRow {
            kind: w.kind(),
            k,
            alpha: self.alphas[k],
            m_alpha: self.m_alpha(k).clone(),
            threshold,
            term_i_bound,
            min_sample_margin: min_margin,
            samples: points.len(),
            fraction_above: above as f64 / points.len().max(1) as f64,
            cond1_c: m * ratio,
            cond1_holds: lower_growth_holds(w),
            dense,
            hp_bound: self.hp_bound(k),
            divergence_ratio: self.divergence_ratio(k)?,
            cond3: self.condition3()[k],
            cond4: self.condition4()[k],
        })
    }
}

/// The default instance: `p = 1/3`, dyadic radices, `alpha_0 = 1`.
pub fn default_spec(count: usize) -> Result<CounterexampleSpec> {
    find_alphas(3, &[2], count, 1)?.with_dense_cap(dense_cap_from_env())
}
