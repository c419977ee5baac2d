//! Maximal operators `T^* f = sup_n |T_n f|` and `sigma^* f = sup_n |sigma_n f|`.
//!
//! Both are exact on level-`N` data. For `n >= M_N` every partial sum equals
//! `f`, so `T_n f = t T_{M_N} f + (1 - t) f` with `t = Q_{M_N} / Q_n`
//! decreasing to 0 (all weights here are regular), and likewise for the
//! Fejér means. The supremum over the tail is therefore `max(|T_{M_N} f|, |f|)`
//! and the first term is already among the computed `n`.

use crate::error::Result;
use crate::group::Basis;
use crate::spectral::{vft_forward, GridFunction, SpectralFunction};
use crate::summability::{domination_bounds, Monotonicity, PartialSumSweep, WeightKind, WeightSequence};

/// Where the supremum at a point is reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Argmax {
    Index(u64),
    /// Approached as `n -> infinity`, where the means tend to `f`.
    Limit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximalResult {
    basis: Basis,
    values: Vec<f64>,
    argmax: Vec<Argmax>,
    n_range: u64,
}

impl MaximalResult {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn argmax(&self) -> &[Argmax] {
        &self.argmax
    }

    /// Means computed directly for `1 <= n <= n_range`; the rest in closed form.
    pub fn n_range(&self) -> u64 {
        self.n_range
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_grid(&self) -> Result<GridFunction> {
        GridFunction::from_real(&self.basis, &self.values)
    }
}

/// Running `sum q_k S_k` with the pointwise maximum of `scale[n] |.|^2`.
struct Track {
    q: Vec<f64>,
    scale: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
    best: Vec<f64>,
    arg: Vec<f64>,
}

impl Track {
    fn new(q: Vec<f64>, scale: Vec<f64>, len: usize) -> Self {
        Track {
            q,
            scale,
            re: vec![0.0; len],
            im: vec![0.0; len],
            best: vec![f64::NEG_INFINITY; len],
            arg: vec![0.0; len],
        }
    }

    /// Adds `q_k S_k`, then scores `T_{k+1}`.
    fn step(&mut self, k: usize, sr: &[f64], si: &[f64]) {
        let len = self.re.len();
        let (sr, si) = (&sr[..len], &si[..len]);
        let c = self.q[k];
        let s = self.scale[k + 1];
        let n = (k + 1) as f64;
        if s > 0.0 {
            score(
                &mut self.re,
                &mut self.im,
                &mut self.best,
                &mut self.arg,
                sr,
                si,
                c,
                s,
                n,
            );
        } else if c != 0.0 {
            for x in 0..len {
                self.re[x] += c * sr[x];
                self.im[x] += c * si[x];
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn score_scalar(
    re: &mut [f64],
    im: &mut [f64],
    best: &mut [f64],
    arg: &mut [f64],
    sr: &[f64],
    si: &[f64],
    c: f64,
    s: f64,
    n: f64,
) {
    for x in 0..re.len() {
        let a = re[x] + c * sr[x];
        let b = im[x] + c * si[x];
        re[x] = a;
        im[x] = b;
        let v = (a * a + b * b) * s;
        if v > best[x] {
            best[x] = v;
            arg[x] = n;
        }
    }
}

#[cfg(not(target_arch = "x86_64"))]
use score_scalar as score;

/// Two lanes at a time with SSE2, which every x86_64 target has.
#[cfg(target_arch = "x86_64")]
#[allow(clippy::too_many_arguments)]
fn score(
    re: &mut [f64],
    im: &mut [f64],
    best: &mut [f64],
    arg: &mut [f64],
    sr: &[f64],
    si: &[f64],
    c: f64,
    s: f64,
    n: f64,
) {
    use std::arch::x86_64::*;
    let len = re.len();
    assert!(im.len() == len && best.len() == len && arg.len() == len && sr.len() == len && si.len() == len);
    let even = len - len % 2;
    // SAFETY: SSE2 is part of the x86_64 baseline, and every access below is
    // at an index `x + 1 < even <= len` of a slice of length `len`.
    unsafe {
        let (vc, vs, vn) = (_mm_set1_pd(c), _mm_set1_pd(s), _mm_set1_pd(n));
        let mut x = 0;
        while x < even {
            let a = _mm_add_pd(
                _mm_loadu_pd(re.as_ptr().add(x)),
                _mm_mul_pd(vc, _mm_loadu_pd(sr.as_ptr().add(x))),
            );
            let b = _mm_add_pd(
                _mm_loadu_pd(im.as_ptr().add(x)),
                _mm_mul_pd(vc, _mm_loadu_pd(si.as_ptr().add(x))),
            );
            _mm_storeu_pd(re.as_mut_ptr().add(x), a);
            _mm_storeu_pd(im.as_mut_ptr().add(x), b);
            let v = _mm_mul_pd(_mm_add_pd(_mm_mul_pd(a, a), _mm_mul_pd(b, b)), vs);
            let old = _mm_loadu_pd(best.as_ptr().add(x));
            let better = _mm_cmpgt_pd(v, old);
            _mm_storeu_pd(best.as_mut_ptr().add(x), _mm_max_pd(old, v));
            let prev = _mm_loadu_pd(arg.as_ptr().add(x));
            let merged = _mm_or_pd(_mm_and_pd(better, vn), _mm_andnot_pd(better, prev));
            _mm_storeu_pd(arg.as_mut_ptr().add(x), merged);
            x += 2;
        }
    }
    score_scalar(
        &mut re[even..],
        &mut im[even..],
        &mut best[even..],
        &mut arg[even..],
        &sr[even..],
        &si[even..],
        c,
        s,
        n,
    );
}

/// Steps every track through `S_0 .. S_{M-1}`; the Fejér track, whose index
/// is shifted by one, also sees `S_M`.
fn run_tracks(spec: &SpectralFunction, tracks: &mut [Track], mut fejer: Option<&mut Track>) -> Result<()> {
    let mut sweep = PartialSumSweep::new(spec)?;
    let len = sweep.len();
    for k in 0..=len {
        if k < len {
            for t in tracks.iter_mut() {
                t.step(k, sweep.re(), sweep.im());
            }
        }
        if let Some(t) = fejer.as_deref_mut() {
            t.step(k, sweep.re(), sweep.im());
        }
        if k < len && (fejer.is_some() || k + 1 < len) {
            sweep.advance()?;
        }
    }
    Ok(())
}

/// Track for `sup_n |T_n f|`: scale `1/Q_n^2`, or `1/(Q_n c_n)^2` with bounds.
/// Indices with `Q_n = 0` are skipped; if that is all of them, the tail
/// `|f|` is the whole answer.
fn weight_track(w: &WeightSequence, len: usize, bounds: Option<&[f64]>) -> Result<Track> {
    let prefix = w.prefix(len);
    let scale: Vec<f64> = (0..=len)
        .map(|n| {
            let q = prefix.cum[n];
            let c = bounds.map_or(1.0, |b| b[n]);
            if q > 0.0 && c > 0.0 {
                1.0 / (q * c * q * c)
            } else {
                0.0
            }
        })
        .collect();
    Ok(Track::new(prefix.q, scale, len))
}

fn close_tail(f: &GridFunction, track: &Track, n_range: u64) -> MaximalResult {
    let mut values = Vec::with_capacity(f.len());
    let mut argmax = Vec::with_capacity(f.len());
    for ((&best, &arg), fx) in track.best.iter().zip(&track.arg).zip(f.values()) {
        let tail = fx.norm_sqr();
        if tail > best {
            values.push(tail.sqrt());
            argmax.push(Argmax::Limit);
        } else {
            values.push(best.sqrt());
            argmax.push(Argmax::Index(arg as u64));
        }
    }
    MaximalResult {
        basis: f.basis().clone(),
        values,
        argmax,
        n_range,
    }
}

/// `T^* f` over all `n >= 1`.
pub fn maximal_t(f: &GridFunction, w: &WeightSequence) -> Result<MaximalResult> {
    Ok(maximal_t_family(f, std::slice::from_ref(w))?.remove(0))
}

/// `T^* f` for several weights from one sweep of the partial sums.
pub fn maximal_t_family(f: &GridFunction, ws: &[WeightSequence]) -> Result<Vec<MaximalResult>> {
    let spec = vft_forward(f)?;
    let len = f.len();
    let mut tracks = ws
        .iter()
        .map(|w| weight_track(w, len, None))
        .collect::<Result<Vec<_>>>()?;
    run_tracks(&spec, &mut tracks, None)?;
    Ok(tracks.iter().map(|t| close_tail(f, t, len as u64)).collect())
}

/// `sigma^* f` over all `n >= 1`.
pub fn fejer_maximal(f: &GridFunction) -> Result<MaximalResult> {
    let spec = vft_forward(f)?;
    let mut track = fejer_track(f.len());
    run_tracks(&spec, &mut [], Some(&mut track))?;
    Ok(close_fejer(f, track))
}

// q = 0 at k = 0 and 1 afterwards turns the T-track into sum_{k=1}^{n} S_k,
// scored at n with 1/n^2 by shifting the index.
fn fejer_track(len: usize) -> Track {
    let mut q = vec![1.0; len + 1];
    q[0] = 0.0;
    let scale: Vec<f64> = (0..=len + 1)
        .map(|n| if n < 2 { 0.0 } else { 1.0 / ((n - 1) * (n - 1)) as f64 })
        .collect();
    Track::new(q, scale, len)
}

fn close_fejer(f: &GridFunction, mut track: Track) -> MaximalResult {
    for a in &mut track.arg {
        *a -= 1.0;
    }
    close_tail(f, &track, f.len() as u64)
}

/// Pointwise check of `|T_n f| <= c_n sigma^* f` for `1 <= n <= M_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DominationCheck {
    pub kind: WeightKind,
    /// `max_n c_n` (1 for non-increasing weights).
    pub c_max: f64,
    /// `min_x (sigma^* f(x) - max_n |T_n f(x)| / c_n)`.
    pub scaled_margin: f64,
    /// `min_x (c_max sigma^* f(x) - T^* f(x))`.
    pub margin: f64,
    pub worst_point: usize,
    pub worst_n: u64,
}

impl DominationCheck {
    /// Every `|T_n f| <= c_n sigma^* f + tol` holds whenever the scaled margin
    /// is at least `-tol / c_max`.
    pub fn holds(&self, tol: f64) -> bool {
        self.scaled_margin >= -tol / self.c_max.max(1.0)
    }
}

#[derive(Clone, Debug)]
pub struct DominationReport {
    pub sigma_star: MaximalResult,
    pub t_star: Vec<MaximalResult>,
    pub checks: Vec<DominationCheck>,
}

/// `sigma^* f`, `T^* f` for each weight and the domination checks, sharing a
/// single pass over the partial sums.
pub fn domination_report(f: &GridFunction, ws: &[WeightSequence]) -> Result<DominationReport> {
    let spec = vft_forward(f)?;
    let len = f.len();
    let mut fejer = fejer_track(len);
    let mut tracks = Vec::new();
    let mut scaled_slot = Vec::new();
    let mut c_max = Vec::new();
    for w in ws {
        tracks.push(weight_track(w, len, None)?);
        match w.monotonicity() {
            Monotonicity::NonIncreasing => {
                scaled_slot.push(None);
                c_max.push(1.0);
            }
            _ => {
                // c_n is only defined from n = 2; T_1 f = (q_0/Q_1) S_0 f = 0.
                let mut masked = domination_bounds(w, len)?;
                let head = masked.len().min(2);
                masked[..head].fill(0.0);
                c_max.push(masked.iter().copied().fold(f64::NEG_INFINITY, f64::max));
                scaled_slot.push(Some(tracks.len()));
                tracks.push(weight_track(w, len, Some(&masked))?);
            }
        }
    }
    run_tracks(&spec, &mut tracks, Some(&mut fejer))?;
    let sigma_star = close_fejer(f, fejer);
    let mut t_star = Vec::new();
    let mut checks = Vec::new();
    let mut next = 0;
    for (i, w) in ws.iter().enumerate() {
        let plain = &tracks[next];
        let result = close_tail(f, plain, len as u64);
        let scaled = scaled_slot[i].map_or(plain, |s| &tracks[s]);
        next = scaled_slot[i].map_or(next + 1, |s| s + 1);
        let mut check = DominationCheck {
            kind: w.kind(),
            c_max: c_max[i],
            scaled_margin: f64::INFINITY,
            margin: f64::INFINITY,
            worst_point: 0,
            worst_n: 0,
        };
        for x in 0..len {
            let s = sigma_star.values[x];
            let m = s - scaled.best[x].max(0.0).sqrt();
            if m < check.scaled_margin {
                check.scaled_margin = m;
                check.worst_point = x;
                check.worst_n = scaled.arg[x] as u64;
            }
            check.margin = check.margin.min(c_max[i] * s - result.values[x]);
        }
        t_star.push(result);
        checks.push(check);
    }
    Ok(DominationReport {
        sigma_star,
        t_star,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_function, SplitMix64};
    use crate::spectral::C64;
    use crate::summability::{fejer_mean, t_mean, WeightSequence};

    fn kinds() -> Vec<WeightSequence> {
        [
            "fejer",
            "cesaro(0.5)",
            "inverse_cesaro(0.5)",
            "power(0.5)",
            "riesz",
            "norlund_log",
            "iterlog(1,1)",
        ]
        .iter()
        .map(|s| WeightSequence::parse(s).unwrap())
        .collect()
    }

    // Brute force over n <= M_N plus a long stretch past it.
    fn oracle(f: &GridFunction, w: &WeightSequence, extra: u64) -> Vec<f64> {
        let mut best = vec![0.0f64; f.len()];
        for n in 1..=f.len() as u64 + extra {
            if let Ok(t) = t_mean(f, w, n) {
                for (b, v) in best.iter_mut().zip(t.values()) {
                    *b = b.max(v.norm());
                }
            }
        }
        best
    }

    #[test]
    fn vector_scoring_matches_scalar() {
        let mut rng = SplitMix64::new(12);
        for len in [1usize, 2, 7, 64] {
            let mut draw = |n: usize| (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect::<Vec<f64>>();
            let (sr, si, re0, im0) = (draw(len), draw(len), draw(len), draw(len));
            let best0: Vec<f64> = draw(len).iter().map(|v| v.abs()).collect();
            let arg0 = vec![3.0; len];
            let (mut a, mut b) = (
                (re0.clone(), im0.clone(), best0.clone(), arg0.clone()),
                (re0, im0, best0, arg0),
            );
            score(&mut a.0, &mut a.1, &mut a.2, &mut a.3, &sr, &si, 0.75, 1.3, 9.0);
            score_scalar(&mut b.0, &mut b.1, &mut b.2, &mut b.3, &sr, &si, 0.75, 1.3, 9.0);
            assert_eq!(a, b);
            assert!(a.3.contains(&9.0));
        }
    }

    #[test]
    fn empty_normalizers_leave_only_the_tail() {
        let basis = Basis::from_radices(&[2]).unwrap();
        let f = random_function(&basis, &mut SplitMix64::new(8)).unwrap();
        let got = maximal_t(&f, &WeightSequence::parse("iterlog(1,1)").unwrap()).unwrap();
        for (v, fx) in got.values().iter().zip(f.values()) {
            assert_eq!(*v, fx.norm());
        }
        assert!(got.argmax().iter().all(|a| *a == Argmax::Limit));
    }

    #[test]
    fn matches_brute_force_and_dominates_the_tail() {
        let basis = Basis::from_radices(&[2, 3, 2]).unwrap();
        let f = random_function(&basis, &mut SplitMix64::new(4)).unwrap();
        for w in kinds() {
            let got = maximal_t(&f, &w).unwrap();
            let brute = oracle(&f, &w, 400);
            for x in 0..12 {
                // The brute force stops at a finite n, so it can only be lower.
                assert!(got.values()[x] >= brute[x] - 1e-12, "{}", w.kind());
                let direct = (1..=12)
                    .filter_map(|n| t_mean(&f, &w, n).ok())
                    .map(|t| t.values()[x].norm())
                    .fold(0.0, f64::max);
                let expect = direct.max(f.values()[x].norm());
                assert!((got.values()[x] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_character_gives_one() {
        let basis = Basis::new(&[2, 3], 3).unwrap();
        let f = GridFunction::character(&basis, 0).unwrap();
        for w in kinds() {
            let got = maximal_t(&f, &w).unwrap();
            assert!(got.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn fejer_maximal_matches_means() {
        let basis = Basis::from_radices(&[3, 2, 2]).unwrap();
        let f = random_function(&basis, &mut SplitMix64::new(7)).unwrap();
        let got = fejer_maximal(&f).unwrap();
        let fejer = WeightSequence::parse("fejer").unwrap();
        let via_t = maximal_t(&f, &fejer).unwrap();
        for x in 0..12 {
            let mut expect = f.values()[x].norm();
            for n in 1..=12 {
                expect = expect.max(fejer_mean(&f, n).unwrap().values()[x].norm());
            }
            assert!((got.values()[x] - expect).abs() < 1e-12);
            // T-means with q = 1 are sigma_{n-1} scaled by (n-1)/n.
            assert!(via_t.values()[x] <= got.values()[x] + 1e-9);
        }
        if let Argmax::Index(n) = got.argmax()[0] {
            assert!((1..=12).contains(&n));
        }
    }

    #[test]
    fn domination_on_random_functions() {
        let basis = Basis::new(&[2], 7).unwrap();
        let ws = kinds();
        let mut rng = SplitMix64::new(12);
        for _ in 0..5 {
            let f = random_function(&basis, &mut rng).unwrap();
            let report = domination_report(&f, &ws).unwrap();
            for (check, w) in report.checks.iter().zip(&ws) {
                assert!(check.holds(1e-9), "{}: {:?}", w.kind(), check);
                assert!(check.margin >= -1e-9);
            }
            let plain = maximal_t_family(&f, &ws).unwrap();
            assert_eq!(plain, report.t_star);
        }
    }

    #[test]
    fn subadditive() {
        let basis = Basis::from_radices(&[2, 3, 2, 2]).unwrap();
        let mut rng = SplitMix64::new(99);
        for w in kinds() {
            let f = random_function(&basis, &mut rng).unwrap();
            let g = random_function(&basis, &mut rng).unwrap();
            let sum = f.combine(C64::new(1.0, 0.0), &g, C64::new(1.0, 0.0)).unwrap();
            let (a, b, c) = (
                maximal_t(&f, &w).unwrap(),
                maximal_t(&g, &w).unwrap(),
                maximal_t(&sum, &w).unwrap(),
            );
            for x in 0..24 {
                assert!(c.values()[x] <= a.values()[x] + b.values()[x] + 1e-9);
            }
        }
    }
}
