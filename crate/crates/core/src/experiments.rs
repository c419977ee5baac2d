//! The four CLI experiments. Each returns the CSV bytes together with any
//! property violations; the binary only handles I/O and exit codes.
//!
//! Reals are written in scientific notation with 17 significant digits and
//! big integers in plain decimal. Randomness comes from [`SplitMix64`]
//! streams forked from the configured seed, so identical configurations give
//! byte-identical output.

use std::time::Instant;

use crate::config::ExperimentConfig;
use crate::counterexample::{find_alphas, DEFAULT_SAMPLES};
use crate::error::{Result, VlabError};
use crate::group::Basis;
use crate::operators::{domination_report, hp_norm, weak_lp};
use crate::rng::{random_function, SplitMix64};
use crate::spectral::{vft_forward, vft_inverse, vft_naive, GridFunction, SpectralFunction, C64};
use crate::summability::{t_mean, PartialSumSweep, WeightSequence};

/// CSV output of one command plus the checks it found violated.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub csv: Vec<u8>,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `{:.16e}`: 17 significant digits, enough to round-trip any double.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(io_error)?;
        Ok(Table { writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        self.writer.write_record(fields).map_err(io_error)
    }

    fn finish(self) -> Result<Vec<u8>> {
        self.writer
            .into_inner()
            .map_err(|e| VlabError::Precondition(e.to_string()))
    }
}

fn io_error(e: csv::Error) -> VlabError {
    VlabError::Precondition(format!("csv: {e}"))
}

fn elapsed_ms(start: Instant, timing: bool) -> f64 {
    if timing {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    }
}

/// Fast transform against the `O(M^2)` definition, plus Parseval.
pub fn cmd_transform(cfg: &ExperimentConfig) -> Result<Outcome> {
    let bases: Vec<Basis> = match (cfg.transform.as_ref().and_then(|t| t.bases.clone()), &cfg.basis) {
        (Some(list), _) => list.iter().map(|m| Basis::from_radices(m)).collect::<Result<_>>()?,
        (None, Some(b)) => vec![b.build()?],
        (None, None) => vec![Basis::from_radices(&[2, 3, 2, 4, 2, 3])?, Basis::new(&[2], 12)?],
    };
    let timing = cfg.timing();
    let root = SplitMix64::new(cfg.seed());
    let mut table = Table::new(&["basis", "M_N", "max_abs_err", "parseval_rel_err", "fast_ms", "naive_ms"])?;
    let mut out = Outcome::default();
    for (i, basis) in bases.iter().enumerate() {
        let f = random_function(basis, &mut root.fork(i as u64))?;
        let start = Instant::now();
        let fast = vft_forward(&f)?;
        let fast_ms = elapsed_ms(start, timing);
        let start = Instant::now();
        let naive = vft_naive(&f)?;
        let naive_ms = elapsed_ms(start, timing);
        let err = fast
            .coeffs()
            .iter()
            .zip(naive.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let mass = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64;
        let parseval = (fast.energy() - mass).abs() / mass;
        let round_trip = vft_inverse(&fast)?.max_abs_diff(&f)?;
        if err > 1e-9 {
            out.violations.push(format!("{basis}: fast/naive mismatch {err:e}"));
        }
        if parseval > 1e-12 {
            out.violations.push(format!("{basis}: Parseval error {parseval:e}"));
        }
        if round_trip > 1e-10 {
            out.violations.push(format!("{basis}: round trip error {round_trip:e}"));
        }
        table.row(&[
            basis.to_string(),
            basis.size().to_string(),
            real(err),
            real(parseval),
            real(fast_ms),
            real(naive_ms),
        ])?;
    }
    out.csv = table.finish()?;
    Ok(out)
}

/// Ratio `||T^* f||_{weak-L_p} / ||f||_{H_p}` and the pointwise domination
/// margin over a batch of random functions.
pub fn cmd_maximal(cfg: &ExperimentConfig) -> Result<Outcome> {
    let basis = cfg.basis_or(&[2], 10)?;
    let ws = cfg.weights_or(&["fejer", "riesz", "power(0.5)", "inverse_cesaro(0.5)", "iterlog(1,1)"])?;
    let section = cfg.maximal.clone().unwrap_or_default();
    let functions = section.functions.unwrap_or(10);
    let p = section.p.unwrap_or(0.5);
    if functions == 0 {
        return Err(VlabError::Config("[maximal] functions must be positive".into()));
    }
    let root = SplitMix64::new(cfg.seed());
    let mut ratio = vec![0.0f64; ws.len()];
    let mut margin = vec![f64::INFINITY; ws.len()];
    let mut holds = vec![true; ws.len()];
    let mut c_max = vec![1.0; ws.len()];
    for i in 0..functions {
        let f = random_function(&basis, &mut root.fork(i as u64))?;
        let report = domination_report(&f, &ws)?;
        let hp = hp_norm(&f, p)?;
        for (j, (t_star, check)) in report.t_star.iter().zip(&report.checks).enumerate() {
            ratio[j] = ratio[j].max(weak_lp(&t_star.to_grid()?, p)? / hp);
            margin[j] = margin[j].min(check.margin);
            holds[j] &= check.holds(1e-9);
            c_max[j] = check.c_max;
        }
    }
    let mut table = Table::new(&[
        "kind",
        "n_range",
        "functions",
        "c",
        "sup_ratio_weakLp_over_Hp",
        "domination_margin",
    ])?;
    let mut out = Outcome::default();
    for (j, w) in ws.iter().enumerate() {
        if !holds[j] || margin[j] < -1e-9 {
            out.violations
                .push(format!("{}: domination margin {:e}", w.kind(), margin[j]));
        }
        table.row(&[
            w.kind().to_string(),
            basis.size().to_string(),
            functions.to_string(),
            real(c_max[j]),
            real(ratio[j]),
            real(margin[j]),
        ])?;
    }
    out.csv = table.finish()?;
    Ok(out)
}

/// Block sequence, growth conditions and the lower-bound chain per block.
pub fn cmd_counterexample(cfg: &ExperimentConfig) -> Result<Outcome> {
    let section = cfg.counterexample.clone().unwrap_or_default();
    let pattern = section.m.clone().unwrap_or_else(|| vec![2]);
    let spec = find_alphas(
        section.inv_p.unwrap_or(3),
        &pattern,
        section.count.unwrap_or(3),
        section.alpha0.unwrap_or(1),
    )?;
    let ws = cfg.weights_or(&["fejer", "iterlog(1,1)"])?;
    let samples = section.samples.unwrap_or(DEFAULT_SAMPLES);
    let dense_k_max = section.dense_k_max.unwrap_or(1);
    let mut table = Table::new(&[
        "kind",
        "k",
        "alpha_k",
        "M_alpha_k",
        "threshold",
        "term_i_bound",
        "min_sample_margin",
        "fraction_above",
        "samples",
        "tier",
        "dense_min_abs_t",
        "cond1_c",
        "hp_bound",
        "divergence_ratio",
        "ratio",
        "cond3",
        "cond4",
        "status",
    ])?;
    let mut out = Outcome::default();
    let pass = |b: bool| if b { "pass" } else { "fail" }.to_string();
    for w in &ws {
        let mut last_ratio = f64::NEG_INFINITY;
        for k in 0..spec.len() {
            let row = spec.lower_bound_chain(k, w, samples, cfg.seed(), k <= dense_k_max)?;
            if row.status() == "fail" {
                out.violations
                    .push(format!("{} k={k}: lower-bound chain failed", w.kind()));
            }
            if row.cond1_holds && row.ratio() <= last_ratio {
                out.violations.push(format!("{} k={k}: ratio not increasing", w.kind()));
            }
            last_ratio = row.ratio();
            table.row(&[
                w.kind().to_string(),
                k.to_string(),
                row.alpha.to_string(),
                row.m_alpha.to_string(),
                real(row.threshold),
                real(row.term_i_bound),
                real(row.min_sample_margin),
                real(row.fraction_above),
                row.samples.to_string(),
                row.tier().to_string(),
                row.dense.as_ref().map_or(String::new(), |d| real(d.min_abs_t)),
                real(row.cond1_c),
                real(row.hp_bound),
                real(row.divergence_ratio),
                real(row.ratio()),
                pass(row.cond3),
                pass(row.cond4),
                row.status().to_string(),
            ])?;
        }
    }
    let series = spec.series_report();
    out.notes.push(format!("alphas = {:?}", spec.alphas()));
    out.notes.push(format!(
        "sum alpha_k^-p: partial {:.6}, last term {:.3e} (below 1e-3: {}), certified tail {}",
        series.partial_sum,
        series.last_increment,
        series.proxy_passes,
        series
            .tail_bound
            .map_or("unavailable".to_string(), |t| format!("{t:.6}")),
    ));
    if let Some(limit) = spec.hp_bound_limit() {
        out.notes
            .push(format!("atomic H_p bound of the full martingale <= {limit:.6}"));
    }
    out.csv = table.finish()?;
    Ok(out)
}

/// One row of the convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergeRow {
    pub n: u64,
    pub measured: f64,
    pub bound: f64,
}

/// Log-spaced integers from `lo` to `hi`, without repeats.
pub fn log_grid(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    if points < 2 || hi <= lo {
        return vec![lo];
    }
    let ratio = (hi as f64 / lo as f64).ln();
    let mut out: Vec<u64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                (lo as f64 * (ratio * i as f64 / (points - 1) as f64).exp()).round() as u64
            }
        })
        .collect();
    out.dedup();
    out
}

/// `||T_n f - f||_inf` against `(Q_{M_j}/Q_n) max_{k<M_j} ||S_k f - f||_inf`
/// for `f` with spectrum below `M_j` and every `n >= M_j` in `grid`.
pub fn converge_rows(f: &GridFunction, j: usize, w: &WeightSequence, grid: &[u64]) -> Result<Vec<ConvergeRow>> {
    let basis = f.basis();
    let mj = basis.dense_powers()?[j];
    let spec = vft_forward(f)?;
    let mut sweep = PartialSumSweep::new(&spec)?;
    let mut worst: f64 = 0.0;
    for _ in 0..mj {
        let gap = sweep
            .re()
            .iter()
            .zip(sweep.im())
            .zip(f.values())
            .map(|((&r, &i), v)| (C64::new(r, i) - v).norm())
            .fold(0.0, f64::max);
        worst = worst.max(gap);
        sweep.advance()?;
    }
    let q_j = w.cumulative(mj as u64);
    let mut rows = Vec::new();
    for &n in grid {
        if n < mj as u64 {
            return Err(VlabError::Precondition(format!("grid point {n} below M_j = {mj}")));
        }
        let t = t_mean(f, w, n)?;
        rows.push(ConvergeRow {
            n,
            measured: t.max_abs_diff(f)?,
            bound: q_j / w.cumulative(n) * worst,
        });
    }
    Ok(rows)
}

/// Uniform convergence of `T_n f` for functions with spectrum below `M_j`.
pub fn cmd_converge(cfg: &ExperimentConfig) -> Result<Outcome> {
    let basis = cfg.basis_or(&[2], 6)?;
    let section = cfg.converge.clone().unwrap_or_default();
    let j = section.j.unwrap_or(3);
    if j >= basis.depth() {
        return Err(VlabError::Config(format!(
            "converge needs j < N, got j = {j}, N = {}",
            basis.depth()
        )));
    }
    let ws = cfg.weights_or(&["fejer", "riesz", "iterlog(1,1)"])?;
    let mj = basis.dense_powers()?[j] as u64;
    let n_max = section.n_max.unwrap_or(1 << 20);
    if n_max < mj {
        return Err(VlabError::Config(format!("n_max = {n_max} is below M_j = {mj}")));
    }
    let grid = log_grid(mj, n_max, section.points.unwrap_or(16));
    let mut rng = SplitMix64::new(cfg.seed());
    let mut coeffs = vec![C64::new(0.0, 0.0); basis.dense_len()?];
    for c in coeffs.iter_mut().take(mj as usize) {
        *c = C64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
    let f = vft_inverse(&SpectralFunction::new(&basis, coeffs)?)?;
    let mut table = Table::new(&["kind", "n", "measured_err", "bound"])?;
    let mut out = Outcome::default();
    for w in &ws {
        for row in converge_rows(&f, j, w, &grid)? {
            if row.measured > row.bound + 1e-9 {
                out.violations.push(format!(
                    "{} n={}: {:e} above bound {:e}",
                    w.kind(),
                    row.n,
                    row.measured,
                    row.bound
                ));
            }
            table.row(&[
                w.kind().to_string(),
                row.n.to_string(),
                real(row.measured),
                real(row.bound),
            ])?;
        }
    }
    out.csv = table.finish()?;
    Ok(out)
}
