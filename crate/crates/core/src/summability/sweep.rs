//! Incremental walk through the partial sums `S_0 f, S_1 f, ...`.
//!
//! `S_{n+1} = S_n + c_n psi_n`, with `psi_n` rebuilt from its phase row only
//! when `c_n != 0`. Values are kept as separate real and imaginary arrays so
//! the per-point loops of the callers vectorize.

use num_traits::Zero;

use crate::error::Result;
use crate::spectral::{CharacterTable, SpectralFunction, C64};

pub struct PartialSumSweep {
    table: CharacterTable,
    coeffs: Vec<C64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    phases: Vec<u32>,
    digits: Vec<u32>,
    radices: Vec<u32>,
    re: Vec<f64>,
    im: Vec<f64>,
    index: usize,
}

impl PartialSumSweep {
    /// Starts at `S_0 = 0`.
    pub fn new(spec: &SpectralFunction) -> Result<Self> {
        let basis = spec.basis();
        let len = basis.dense_len()?;
        let table = CharacterTable::new(basis);
        let (cos, sin) = (0..table.lcm() as u32)
            .map(|p| (table.root(p).re, table.root(p).im))
            .unzip();
        Ok(PartialSumSweep {
            coeffs: spec.coeffs().to_vec(),
            cos,
            sin,
            phases: vec![0; len],
            digits: vec![0; basis.depth()],
            radices: basis.radices().to_vec(),
            re: vec![0.0; len],
            im: vec![0.0; len],
            index: 0,
            table,
        })
    }

    /// Sweep over the Dirichlet kernels `D_0, D_1, ...`.
    pub fn dirichlet(basis: &crate::group::Basis) -> Result<Self> {
        let ones = vec![C64::new(1.0, 0.0); basis.dense_len()?];
        Self::new(&SpectralFunction::new(basis, ones)?)
    }

    /// `n` such that the current state is `S_n`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    /// Moves from `S_n` to `S_{n+1}`; false once `S_{M_N}` is reached.
    pub fn advance(&mut self) -> Result<bool> {
        if self.index >= self.re.len() {
            return Ok(false);
        }
        let c = self.coeffs[self.index];
        if !c.is_zero() {
            self.table.phase_row(&self.digits, &mut self.phases)?;
            let (cr, ci) = (c.re, c.im);
            for ((r, i), &p) in self.re.iter_mut().zip(self.im.iter_mut()).zip(&self.phases) {
                let (pc, ps) = (self.cos[p as usize], self.sin[p as usize]);
                *r += cr * pc - ci * ps;
                *i += cr * ps + ci * pc;
            }
        }
        self.index += 1;
        for (d, &m) in self.digits.iter_mut().zip(&self.radices) {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
        Ok(true)
    }

    /// Current state as complex values.
    pub fn values(&self) -> Vec<C64> {
        self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect()
    }
}
