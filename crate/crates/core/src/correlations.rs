//! Continuum correlation functions `ρ_n(x_1, …, x_n) = Pf[K(x_i, x_j)]` and the
//! comparison with rescaled θ = 1/2 lattice correlations as `ξ → 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{KernelEvaluator, KernelParams};
use crate::measures::{stratum_sums, validate_lattice_set, DEFAULT_LATTICE_NMAX};
use crate::partitions::HalfInteger;
use crate::pfaffian::{assemble_with, pfaffian};

/// Lattice entries whose truncation bound exceeds this fraction of the value
/// are flagged inconclusive.
pub const INCONCLUSIVE_FRACTION: f64 = 0.1;
/// Distance from a tie at which rounding of `u/(1-ξ)` goes down.
const TIE_TOL: f64 = 1e-9;

/// `ρ_n(points)` for the kernel with parameter `z`.
pub fn continuum_correlation(points: &[f64], z: Complex64) -> Result<f64> {
    let ev = KernelEvaluator::new(&KernelParams::new(z)?)?;
    continuum_correlation_with(points, &ev)
}

/// [`continuum_correlation`] with a prepared evaluator.
pub fn continuum_correlation_with(points: &[f64], ev: &KernelEvaluator) -> Result<f64> {
    pfaffian(&assemble_with(points, ev)?)
}

/// The point of `ℤ_{≥0} + 1/2` nearest to `u/(1-ξ)`; ties go to the smaller one.
pub fn lattice_point_for(u: f64, xi: f64) -> Result<HalfInteger> {
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::Parameter(format!("u must be positive, got {u}")));
    }
    if !(0.0..1.0).contains(&xi) {
        return Err(Error::Parameter(format!("xi must lie in [0,1), got {xi}")));
    }
    let d = u / (1.0 - xi) - 0.5;
    let f = d.floor();
    let k = if d - f > 0.5 + TIE_TOL * d.abs().max(1.0) { f + 1.0 } else { f };
    Ok(HalfInteger::from_floor(k.max(0.0) as i64))
}

/// One rung of the `ξ` ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderEntry {
    pub xi: f64,
    pub lattice_points: Vec<HalfInteger>,
    /// Truncated lattice correlation before rescaling.
    pub lattice_value: f64,
    pub truncation_bound: f64,
    /// `(1-ξ)^{-n}` times the lattice value.
    pub rescaled: f64,
    /// `(1-ξ)^{-n}` times the truncation bound.
    pub rescaled_bound: f64,
    /// `|rescaled - continuum|`.
    pub deviation: f64,
    /// `deviation / |continuum|`; absent when the continuum value is 0.
    pub relative_deviation: Option<f64>,
    pub inconclusive: bool,
}

/// Lattice-to-continuum comparison at fixed points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub u_points: Vec<f64>,
    #[serde(serialize_with = "crate::ser::complex")]
    pub z: Complex64,
    pub n_max: usize,
    pub continuum: f64,
    pub ladder: Vec<LadderEntry>,
    /// Deviations strictly decrease along the ladder.
    pub decreasing: bool,
    /// Some rung has a truncation bound above [`INCONCLUSIVE_FRACTION`] of its value.
    pub inconclusive: bool,
}

/// Compares `(1-ξ)^{-n} ρ_{n,1/2,ξ}` at the lattice points nearest `u/(1-ξ)`
/// with the continuum `ρ_n(u)` for every `ξ` of the ladder.
///
/// All diagrams up to `n_max` boxes are enumerated once and reused across the ladder.
pub fn verify_limit(u: &[f64], z: Complex64, ladder: &[f64], n_max: usize) -> Result<LimitReport> {
    if ladder.is_empty() {
        return Err(Error::Parameter("the xi ladder must be nonempty".into()));
    }
    let continuum = continuum_correlation(u, z)?;
    let sets = ladder
        .iter()
        .map(|&xi| {
            let pts = u.iter().map(|&ui| lattice_point_for(ui, xi)).collect::<Result<Vec<_>>>()?;
            validate_lattice_set(&pts).map_err(|_| {
                Error::Parameter(format!("points {u:?} share a lattice site at xi = {xi}"))
            })?;
            Ok(pts)
        })
        .collect::<Result<Vec<_>>>()?;
    let strata = stratum_sums(&sets, z, 0.5, n_max)?;
    let n = u.len() as i32;
    let mut entries = Vec::with_capacity(ladder.len());
    for (k, (&xi, pts)) in ladder.iter().zip(sets).enumerate() {
        let r = strata.report(k, xi)?;
        let scale = (1.0 - xi).powi(-n);
        let rescaled = scale * r.value;
        let deviation = (rescaled - continuum).abs();
        entries.push(LadderEntry {
            xi,
            lattice_points: pts,
            lattice_value: r.value,
            truncation_bound: r.truncation_bound,
            rescaled,
            rescaled_bound: scale * r.truncation_bound,
            deviation,
            relative_deviation: (continuum != 0.0).then(|| deviation / continuum.abs()),
            inconclusive: r.truncation_bound > INCONCLUSIVE_FRACTION * r.value.abs(),
        });
    }
    Ok(LimitReport {
        u_points: u.to_vec(),
        z,
        n_max,
        continuum,
        decreasing: entries.windows(2).all(|w| w[1].deviation < w[0].deviation),
        inconclusive: entries.iter().any(|e| e.inconclusive),
        ladder: entries,
    })
}

/// [`verify_limit`] with the default truncation.
pub fn verify_limit_default(u: &[f64], z: Complex64, ladder: &[f64]) -> Result<LimitReport> {
    verify_limit(u, z, ladder, DEFAULT_LATTICE_NMAX)
}
