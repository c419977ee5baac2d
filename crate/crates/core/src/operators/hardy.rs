//! Martingales generated by a grid function, the `H_p` proxy `||f^*||_p`,
//! p-atoms and atomic bounds.

use num_traits::ToPrimitive;

use crate::error::{Result, VlabError};
use crate::group::{Basis, Cylinder};
use crate::spectral::{vft_forward, vft_inverse, GridFunction, C64};

use super::norms::lp_norm_abs;

/// `f^{(0)}, ..., f^{(N)}` with `f^{(n)} = S_{M_n} f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Martingale {
    levels: Vec<GridFunction>,
}

impl Martingale {
    /// Levels by spectral truncation of `f`.
    pub fn from_function(f: &GridFunction) -> Result<Self> {
        let spec = vft_forward(f)?;
        let powers = f.basis().dense_powers()?;
        let levels = powers
            .iter()
            .map(|&m| vft_inverse(&spec.truncated(m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Martingale { levels })
    }

    pub fn basis(&self) -> &Basis {
        self.levels[0].basis()
    }

    /// `N`.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[GridFunction] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&GridFunction> {
        self.levels.get(n)
    }

    /// `f^* = max_n |f^{(n)}|`.
    pub fn maximal_function(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.levels[0].len()];
        for level in &self.levels {
            for (o, v) in out.iter_mut().zip(level.values()) {
                *o = o.max(v.norm());
            }
        }
        out
    }

    /// `max_n max |E_n f^{(n+1)} - f^{(n)}|`, with `E_n` the average over
    /// level-`n` cylinders.
    pub fn compatibility_gap(&self) -> Result<f64> {
        let mut gap: f64 = 0.0;
        for n in 0..self.depth() {
            let avg = conditional_expectation(&self.levels[n + 1], n)?;
            gap = gap.max(avg.max_abs_diff(&self.levels[n])?);
        }
        Ok(gap)
    }

    /// `||f^*||_p`.
    pub fn hp_norm(&self, p: f64) -> Result<f64> {
        lp_norm_abs(&self.maximal_function(), p)
    }
}

/// Average of `f` over every level-`n` cylinder, spread back over the cylinder.
pub fn conditional_expectation(f: &GridFunction, n: usize) -> Result<GridFunction> {
    let basis = f.basis();
    if n > basis.depth() {
        return Err(VlabError::Precondition(format!(
            "level {n} exceeds depth {}",
            basis.depth()
        )));
    }
    let mn = basis.dense_powers()?[n];
    // Little-endian order: the level-n cylinder of t is t mod M_n.
    let mut sums = vec![C64::new(0.0, 0.0); mn];
    for (t, v) in f.values().iter().enumerate() {
        sums[t % mn] += v;
    }
    let count = (f.len() / mn) as f64;
    GridFunction::from_fn(basis, |t| sums[t % mn] / count)
}

/// `||f^*||_p` of the martingale generated by `f`.
pub fn hp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    Martingale::from_function(f)?.hp_norm(p)
}

/// Outcome of the three p-atom conditions on a cylinder `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomCheck {
    /// `|(1/M_N) sum_{x in I} a(x)|`.
    pub mean: f64,
    pub sup: f64,
    /// `mu(I)^{-1/p}`.
    pub sup_bound: f64,
    pub off_support: f64,
    pub mean_ok: bool,
    pub sup_ok: bool,
    pub support_ok: bool,
}

impl AtomCheck {
    pub fn is_valid(&self) -> bool {
        self.mean_ok && self.sup_ok && self.support_ok
    }

    pub fn reasons(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.mean_ok {
            out.push("nonzero_mean");
        }
        if !self.sup_ok {
            out.push("sup_too_large");
        }
        if !self.support_ok {
            out.push("outside_support");
        }
        out
    }
}

/// Checks that `a` is a p-atom supported on `cyl`. Mean and support use a
/// tolerance of `1e-10` relative to `max(1, ||a||_inf mu(I))` and
/// `max(1, ||a||_inf)`, the sup bound a relative `1e-10`.
pub fn validate_atom(a: &GridFunction, cyl: &Cylinder, p: f64) -> Result<AtomCheck> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(VlabError::InvalidExponent(p));
    }
    let basis = a.basis();
    if cyl.level() > basis.depth() || cyl.anchor().iter().zip(basis.radices()).any(|(&d, &m)| d >= m) {
        return Err(VlabError::BasisMismatch);
    }
    let total = a.len() as f64;
    let mut inside = C64::new(0.0, 0.0);
    let mut sup: f64 = 0.0;
    let mut off: f64 = 0.0;
    for (t, v) in a.values().iter().enumerate() {
        if cyl.contains_index(basis, t) {
            inside += v;
        } else {
            off = off.max(v.norm());
        }
        sup = sup.max(v.norm());
    }
    let mu_inv = cyl.inverse_measure().to_f64().unwrap_or(f64::INFINITY);
    let mean = inside.norm() / total;
    let sup_bound = mu_inv.powf(1.0 / p);
    Ok(AtomCheck {
        mean,
        sup,
        sup_bound,
        off_support: off,
        mean_ok: mean <= 1e-10 * (sup / mu_inv).max(1.0),
        sup_ok: sup <= sup_bound * (1.0 + 1e-10),
        support_ok: off <= 1e-10 * sup.max(1.0),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomTerm {
    pub coefficient: f64,
    pub atom: GridFunction,
    pub support: Cylinder,
}

/// `f = sum_k mu_k a_k` with p-atoms `a_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicDecomposition {
    p: f64,
    terms: Vec<AtomTerm>,
}

impl AtomicDecomposition {
    pub fn new(p: f64, terms: Vec<AtomTerm>) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(VlabError::InvalidExponent(p));
        }
        Ok(AtomicDecomposition { p, terms })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn terms(&self) -> &[AtomTerm] {
        &self.terms
    }

    pub fn assemble(&self) -> Result<GridFunction> {
        let first = self
            .terms
            .first()
            .ok_or_else(|| VlabError::InvalidAtom("empty decomposition".into()))?;
        let mut out = GridFunction::zeros(first.atom.basis())?;
        for term in &self.terms {
            out = out.combine(C64::new(1.0, 0.0), &term.atom, C64::new(term.coefficient, 0.0))?;
        }
        Ok(out)
    }
}

/// `(sum |mu_k|^p)^{1/p}` after validating every atom.
pub fn hp_atomic_bound(dec: &AtomicDecomposition) -> Result<f64> {
    for (k, term) in dec.terms.iter().enumerate() {
        let check = validate_atom(&term.atom, &term.support, dec.p)?;
        if !check.is_valid() {
            return Err(VlabError::InvalidAtom(format!(
                "term {k}: {}",
                check.reasons().join(",")
            )));
        }
    }
    let sum: f64 = dec.terms.iter().map(|t| t.coefficient.abs().powf(dec.p)).sum();
    Ok(sum.powf(1.0 / dec.p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_function, SplitMix64};
    use crate::spectral::{dirichlet_dense, GridFunction};

    #[test]
    fn constant_martingale() {
        let basis = Basis::from_radices(&[2, 3]).unwrap();
        let f = GridFunction::constant(&basis, C64::new(-2.0, 0.0)).unwrap();
        let m = Martingale::from_function(&f).unwrap();
        assert_eq!(m.depth(), 2);
        for level in m.levels() {
            assert!(level.max_abs_diff(&f).unwrap() < 1e-15);
        }
        assert!(m.maximal_function().iter().all(|&v| (v - 2.0).abs() < 1e-15));
    }

    #[test]
    fn truncation_equals_cylinder_averages() {
        let basis = Basis::from_radices(&[2, 3, 2, 4]).unwrap();
        let f = random_function(&basis, &mut SplitMix64::new(21)).unwrap();
        let m = Martingale::from_function(&f).unwrap();
        for n in 0..=4 {
            let avg = conditional_expectation(&f, n).unwrap();
            assert!(avg.max_abs_diff(m.level(n).unwrap()).unwrap() <= 1e-10);
        }
        assert!(m.compatibility_gap().unwrap() <= 1e-12);
    }

    #[test]
    fn character_enters_after_its_level() {
        let basis = Basis::new(&[2], 3).unwrap();
        let f = GridFunction::character(&basis, 2).unwrap();
        let m = Martingale::from_function(&f).unwrap();
        for n in 0..=1 {
            assert!(m.level(n).unwrap().sup_norm() < 1e-15);
        }
        for n in 2..=3 {
            assert!(m.level(n).unwrap().max_abs_diff(&f).unwrap() < 1e-15);
        }
        assert!(m.maximal_function().iter().all(|&v| (v - 1.0).abs() < 1e-15));
    }

    fn walsh_atom() -> (GridFunction, Cylinder) {
        // On I_1 = {x_0 = 0}: value 4 sign(x_1), mean zero, sup = mu(I_1)^{-2}.
        let basis = Basis::new(&[2], 3).unwrap();
        let a = GridFunction::from_fn(&basis, |t| {
            let v = if t % 2 == 1 {
                0.0
            } else if (t / 2) % 2 == 0 {
                4.0
            } else {
                -4.0
            };
            C64::new(v, 0.0)
        })
        .unwrap();
        (a, basis.cylinder(1, &[0]).unwrap())
    }

    #[test]
    fn hand_checked_atom() {
        let (a, cyl) = walsh_atom();
        let check = validate_atom(&a, &cyl, 0.5).unwrap();
        assert!(check.is_valid(), "{check:?}");
        // p = 1 allows only sup <= 2.
        let check = validate_atom(&a, &cyl, 1.0).unwrap();
        assert_eq!(check.reasons(), vec!["sup_too_large"]);
        // The same function does not live on the other half.
        let other = a.basis().cylinder(1, &[1]).unwrap();
        assert!(!validate_atom(&a, &other, 0.5).unwrap().support_ok);
    }

    #[test]
    fn constant_is_not_an_atom() {
        let basis = Basis::new(&[2], 3).unwrap();
        let one = GridFunction::constant(&basis, C64::new(1.0, 0.0)).unwrap();
        let check = validate_atom(&one, &basis.cylinder(0, &[]).unwrap(), 1.0).unwrap();
        assert_eq!(check.reasons(), vec!["nonzero_mean"]);
    }

    #[test]
    fn dirichlet_difference_atoms() {
        // M_n^{1/p - 1} (D_{M_{n+1}} - D_{M_n}) / lambda lives on I_n.
        let basis = Basis::new(&[2, 3], 5).unwrap();
        let p = 1.0 / 3.0;
        let powers = basis.dense_powers().unwrap().to_vec();
        for n in 0..5 {
            let d = dirichlet_dense(&basis, powers[n + 1])
                .unwrap()
                .combine(
                    C64::new(1.0, 0.0),
                    &dirichlet_dense(&basis, powers[n]).unwrap(),
                    C64::new(-1.0, 0.0),
                )
                .unwrap();
            let a = d.scaled(C64::new((powers[n] as f64).powf(1.0 / p - 1.0) / 3.0, 0.0));
            let cyl = basis.origin_cylinder(n).unwrap();
            assert!(validate_atom(&a, &cyl, p).unwrap().is_valid(), "n={n}");
        }
    }

    #[test]
    fn atomic_bounds() {
        let (a, cyl) = walsh_atom();
        let term = |c: f64| AtomTerm {
            coefficient: c,
            atom: a.clone(),
            support: cyl.clone(),
        };
        let single = AtomicDecomposition::new(0.5, vec![term(1.0)]).unwrap();
        assert_eq!(hp_atomic_bound(&single).unwrap(), 1.0);
        let double = AtomicDecomposition::new(0.5, vec![term(1.0), term(1.0)]).unwrap();
        assert!((hp_atomic_bound(&double).unwrap() - 4.0).abs() < 1e-14);
        assert!(
            double
                .assemble()
                .unwrap()
                .max_abs_diff(&a.scaled(C64::new(2.0, 0.0)))
                .unwrap()
                < 1e-15
        );
        let bad = AtomicDecomposition::new(1.0, vec![term(1.0)]).unwrap();
        assert!(matches!(hp_atomic_bound(&bad), Err(VlabError::InvalidAtom(_))));
    }
}
