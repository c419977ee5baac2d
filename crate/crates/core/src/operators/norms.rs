//! `L_p` and weak-`L_p` quasi-norms with respect to the normalized counting
//! measure on the level-`N` grid.

use crate::error::{Result, VlabError};
use crate::numeric::pairwise_sum;
use crate::spectral::GridFunction;

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(VlabError::InvalidExponent(p))
    }
}

/// `((1/M) sum |v|^p)^{1/p}` of a list of magnitudes.
pub fn lp_norm_abs(values: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    if values.is_empty() {
        return Ok(0.0);
    }
    let mean = pairwise_sum(0, values.len(), &|i| values[i].abs().powf(p)) / values.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// `sup_y y mu(|v| > y)^{1/p}`, attained as `y` approaches each distinct
/// value from below: `max_i v_(i) (i/M)^{1/p}` over the descending order.
pub fn weak_lp_abs(values: &[f64], p: f64) -> Result<f64> {
    check_exponent(p)?;
    let total = values.len() as f64;
    let mut sorted: Vec<(f64, usize)> = values.iter().map(|v| v.abs()).zip(0..).collect();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best: f64 = 0.0;
    for (i, &(v, _)) in sorted.iter().enumerate() {
        // Within a run of equal values the last position gives the jump.
        let last_of_run = sorted.get(i + 1).is_none_or(|next| next.0 != v);
        if last_of_run {
            best = best.max(v * ((i + 1) as f64 / total).powf(1.0 / p));
        }
    }
    Ok(best)
}

pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    lp_norm_abs(&f.abs(), p)
}

pub fn weak_lp(f: &GridFunction, p: f64) -> Result<f64> {
    weak_lp_abs(&f.abs(), p)
}
