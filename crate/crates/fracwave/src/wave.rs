//! Truncated-series wave fields seeded by the approximate impulse.
//!
//! With zero initial velocity the solution at level n is the cosine series
//! `u_n(x, t) = sum_k alpha_k f_{n,k}(x) cos(t sqrt(lambda_{n,k}))` over the
//! truncated basis. Raw level-n eigenvalues shrink like `c0^{-n}`, so times
//! are optionally rescaled by `pi / sqrt(lambda_{n,1})`, which normalizes the
//! fundamental mode to unit speed and makes snapshots comparable across
//! levels.

use crate::{
    delta::DeltaWeights, eigenfunctions::Eigenfunction, params::FractalParams, Error, Result,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeNormalization {
    /// Times are used as given.
    Raw,
    /// Times are multiplied by `pi / sqrt(lambda_{n,1})`.
    Fundamental,
}

/// What to solve: levels, sample times and the time scale convention.
#[derive(Debug, Clone)]
pub struct WaveConfig {
    pub params: FractalParams,
    /// Truncation level; the series keeps `3^n0 + 1` modes.
    pub n0: usize,
    /// Resolution level of the grid the snapshots live on.
    pub n: usize,
    pub times: Vec<f64>,
    pub normalization: TimeNormalization,
}

impl WaveConfig {
    pub fn validate(&self) -> Result<()> {
        assert!(self.n >= self.n0, "resolution below truncation level");
        for &t in &self.times {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidTime(t));
            }
        }
        Ok(())
    }
}

/// One vertex-valued snapshot at an absolute (already rescaled) time.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// The time actually fed to the cosine series.
    pub time: f64,
    pub values: Vec<f64>,
}

/// A solved wave: one snapshot per configured time.
#[derive(Debug, Clone)]
pub struct WaveField {
    pub config: WaveConfig,
    pub snapshots: Vec<Snapshot>,
}

impl WaveField {
    /// Largest absolute value over all snapshots.
    pub fn peak(&self) -> f64 {
        self.snapshots
            .iter()
            .flat_map(|s| s.values.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn check_basis(weights_len: usize, n: usize, basis: &[Eigenfunction]) -> Result<()> {
    if basis.len() != weights_len {
        return Err(Error::BasisMismatch(format!(
            "{} weights against {} basis members",
            weights_len,
            basis.len()
        )));
    }
    for (k, f) in basis.iter().enumerate() {
        if f.level != n {
            return Err(Error::BasisMismatch(format!(
                "basis member {k} lives on level {}, expected {n}",
                f.level
            )));
        }
        if f.k_index != k {
            return Err(Error::BasisMismatch(format!(
                "basis member {k} carries rank {}",
                f.k_index
            )));
        }
    }
    Ok(())
}

/// The series evaluated at one absolute time.
pub fn series_snapshot(alpha: &[f64], basis: &[Eigenfunction], time: f64) -> Vec<f64> {
    let n = basis[0].values.len();
    let mut out = vec![0.0; n];
    for (a, f) in alpha.iter().zip(basis) {
        let osc = a * (time * f.eigenvalue.sqrt()).cos();
        for (o, v) in out.iter_mut().zip(&f.values) {
            *o += osc * v;
        }
    }
    out
}

/// Time scale factor for a config against its basis.
fn time_scale(config: &WaveConfig, basis: &[Eigenfunction]) -> f64 {
    match config.normalization {
        TimeNormalization::Raw => 1.0,
        TimeNormalization::Fundamental => std::f64::consts::PI / basis[1].eigenvalue.sqrt(),
    }
}

/// Solves the zero-velocity problem whose initial value is the truncated
/// impulse carried by `weights` and `basis`.
pub fn solve_wave(
    config: &WaveConfig,
    weights: &DeltaWeights,
    basis: &[Eigenfunction],
) -> Result<WaveField> {
    config.validate()?;
    if weights.level != config.n0 {
        return Err(Error::BasisMismatch(format!(
            "weights at level {} against truncation level {}",
            weights.level, config.n0
        )));
    }
    check_basis(weights.alpha.len(), config.n, basis)?;
    let scale = time_scale(config, basis);
    let snapshots = config
        .times
        .iter()
        .map(|&t| Snapshot {
            time: scale * t,
            values: series_snapshot(&weights.alpha, basis, scale * t),
        })
        .collect();
    Ok(WaveField {
        config: config.clone(),
        snapshots,
    })
}

/// General two-term series for initial value `sum phi_k f_k` and initial
/// velocity `sum psi_k f_k`; the zero mode carries no velocity term.
pub fn solve_wave_general(
    config: &WaveConfig,
    phi_coeffs: &[f64],
    psi_coeffs: &[f64],
    basis: &[Eigenfunction],
) -> Result<WaveField> {
    config.validate()?;
    check_basis(phi_coeffs.len(), config.n, basis)?;
    if psi_coeffs.len() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "{} velocity coefficients against {} basis members",
            psi_coeffs.len(),
            basis.len()
        )));
    }
    let k_min = basis
        .iter()
        .position(|f| f.eigenvalue > 0.0)
        .unwrap_or(basis.len());
    let scale = time_scale(config, basis);
    let snapshots = config
        .times
        .iter()
        .map(|&t| {
            let time = scale * t;
            let mut values = series_snapshot(phi_coeffs, basis, time);
            for (k, f) in basis.iter().enumerate().skip(k_min) {
                let root = f.eigenvalue.sqrt();
                let osc = psi_coeffs[k] / root * (time * root).sin();
                for (o, v) in values.iter_mut().zip(&f.values) {
                    *o += osc * v;
                }
            }
            Snapshot { time, values }
        })
        .collect();
    Ok(WaveField {
        config: config.clone(),
        snapshots,
    })
}

/// `sum_k alpha_k |f_{n,k}|`: a uniform amplitude bound for every snapshot
/// by the triangle inequality.
pub fn wave_mass_bound(weights: &DeltaWeights, basis: &[Eigenfunction]) -> Result<f64> {
    if weights.alpha.len() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "{} weights against {} basis members",
            weights.alpha.len(),
            basis.len()
        )));
    }
    Ok(weights
        .alpha
        .iter()
        .zip(basis)
        .map(|(a, f)| a * f.sup_norm)
        .sum())
}

/// The sharp variant of [`wave_mass_bound`]: the largest vertex value of the
/// profile `sum_k alpha_k |f_{n,k}(x)|`.
///
/// Every tracked eigenfunction takes the value one at the left endpoint and
/// the weights sum to one, so this is at least one; it stays only slightly
/// above one because the profile peaks at the impulse site, while summing
/// the individual sup norms (whose peaks sit at different vertices) can be
/// substantially larger.
pub fn wave_profile_bound(weights: &DeltaWeights, basis: &[Eigenfunction]) -> Result<f64> {
    if weights.alpha.len() != basis.len() {
        return Err(Error::BasisMismatch(format!(
            "{} weights against {} basis members",
            weights.alpha.len(),
            basis.len()
        )));
    }
    let n = basis[0].values.len();
    let mut acc = vec![0.0f64; n];
    for (a, f) in weights.alpha.iter().zip(basis) {
        for (s, v) in acc.iter_mut().zip(&f.values) {
            *s += a * v.abs();
        }
    }
    Ok(acc.iter().fold(0.0f64, |m, v| m.max(*v)))
}

/// Sup differences between the level-n and level-(n+1) waves on the shared
/// vertices, one entry per requested time.
///
/// Each level is evaluated at its own rescaled time `t * pi / sqrt(lambda_1)`
/// so that the comparison tracks the renormalized dynamics rather than the
/// shrinking raw frequencies. Because extension never changes coarse values,
/// the finer basis restricted to the shared vertices equals the coarser one
/// and the gap isolates the frequency mismatch.
pub fn convergence_gap(
    params: &FractalParams,
    n0: usize,
    n: usize,
    t_values: &[f64],
) -> Result<Vec<f64>> {
    if params.p >= 0.5 {
        return Err(Error::BoundRequiresSmallP(params.p));
    }
    let tree = crate::decimation::EigenvalueTree::build(params, n0)?;
    let weights = DeltaWeights::at_level(&tree, n0)?;
    let coarse = crate::eigenfunctions::build_basis(params, n0, n)?;
    let fine = crate::eigenfunctions::build_basis(params, n0, n + 1)?;
    let scale_coarse = std::f64::consts::PI / coarse[1].eigenvalue.sqrt();
    let scale_fine = std::f64::consts::PI / fine[1].eigenvalue.sqrt();
    let gaps = t_values
        .iter()
        .map(|&t| {
            let u_coarse = series_snapshot(&weights.alpha, &coarse, scale_coarse * t);
            let u_fine = series_snapshot(&weights.alpha, &fine, scale_fine * t);
            u_coarse
                .iter()
                .enumerate()
                .fold(0.0f64, |m, (j, v)| m.max((v - u_fine[3 * j]).abs()))
        })
        .collect();
    Ok(gaps)
}

/// Least-squares slope of `ln gap` against the level over `n_range`, at one
/// normalized time. The decay rate of the level gaps should match `-ln c0`.
pub fn gap_log_slope(
    params: &FractalParams,
    n0: usize,
    n_range: std::ops::RangeInclusive<usize>,
    t: f64,
) -> Result<f64> {
    let mut pts = Vec::new();
    for n in n_range {
        let gap = convergence_gap(params, n0, n, &[t])?[0];
        pts.push((n as f64, gap.ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}
