//! Fixed-order reductions. Every long sum in the crate goes through these so
//! results are reproducible bit for bit.

use num_complex::Complex64;

const LEAF: usize = 32;

/// Pairwise sum of `term(i)` for `i` in `lo..hi`, ascending inside leaves.
pub fn pairwise_sum<F: Fn(usize) -> f64>(lo: usize, hi: usize, term: &F) -> f64 {
    if hi - lo <= LEAF {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += term(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term)
    }
}

pub fn pairwise_sum_complex<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, term: &F) -> Complex64 {
    if hi - lo <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += term(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum_complex(lo, mid, term) + pairwise_sum_complex(mid, hi, term)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Nodes and weights of the 8-point Gauss-Legendre rule on [-1, 1].
const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Composite 8-point Gauss-Legendre quadrature of `g` over `[a, b]` with
/// `panels` equal panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, panels: usize) -> f64 {
    let width = (b - a) / panels as f64;
    let mut total = CompensatedSum::new();
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let half = 0.5 * width;
        let mut panel = 0.0;
        for &(node, weight) in &GL8 {
            panel += weight * (g(mid - half * node) + g(mid + half * node));
        }
        total.add(panel * half);
    }
    total.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let s = pairwise_sum(0, 10_001, &|i| i as f64);
        assert_eq!(s, 50_005_000.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1e16);
        for _ in 0..1000 {
            acc.add(1.0);
        }
        acc.add(-1e16);
        assert_eq!(acc.value(), 1000.0);
    }

    #[test]
    fn gauss_legendre_integrates_exp() {
        let v = gauss_legendre(f64::exp, 0.0, 3.0, 12);
        assert!((v - (3f64.exp() - 1.0)).abs() < 1e-13);
    }
}
