//! The free parameter `p` and the constants derived from it.

use crate::{Error, Result};

/// All model constants for one choice of the probability `p`.
///
/// The three contractions carry resistance weights `r1 = r3 = p/(1+p)`,
/// `r2 = q/(1+p)` and measure weights `m1 = m3 = q/(1+q)`, `m2 = p/(1+q)`,
/// so both weight triples sum to one. `c0` is the eigenvalue renormalization
/// factor and `ds` the spectral dimension; `ds = 1` exactly when `p = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalParams {
    pub p: f64,
    pub q: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    /// Renormalization factor `(2 + pq) / (pq)`; equals `R'(0)`.
    pub c0: f64,
    /// Spectral dimension `log 9 / log(1 + 2/(pq))`.
    pub ds: f64,
}

impl FractalParams {
    /// Builds the parameter set, rejecting `p` outside the open interval (0, 1).
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 0.0 || p >= 1.0 {
            return Err(Error::InvalidParameter(p));
        }
        let q = 1.0 - p;
        let pq = p * q;
        Ok(Self {
            p,
            q,
            r1: p / (1.0 + p),
            r2: q / (1.0 + p),
            r3: p / (1.0 + p),
            m1: q / (1.0 + q),
            m2: p / (1.0 + q),
            m3: q / (1.0 + q),
            c0: (2.0 + pq) / pq,
            ds: 9f64.ln() / (1.0 + 2.0 / pq).ln(),
        })
    }

    pub fn pq(&self) -> f64 {
        self.p * self.q
    }

    /// Resistance weight of contraction `j` (1-based letter).
    pub fn r(&self, letter: u8) -> f64 {
        match letter {
            1 => self.r1,
            2 => self.r2,
            3 => self.r3,
            _ => panic!("letter must be 1, 2 or 3, got {letter}"),
        }
    }

    /// Measure weight of contraction `j` (1-based letter).
    pub fn m(&self, letter: u8) -> f64 {
        match letter {
            1 => self.m1,
            2 => self.m2,
            3 => self.m3,
            _ => panic!("letter must be 1, 2 or 3, got {letter}"),
        }
    }
}
