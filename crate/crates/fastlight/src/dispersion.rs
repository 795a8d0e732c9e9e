//! Complex wave number of a weak probe in a Raman gain medium.
//!
//! A probe detuned by `delta` (linewidths) from two-photon resonance
//! acquires, per unit length, the phase and gain encoded in
//!
//! ```text
//! kappa(delta) = M1 / (delta + delta_cap + i) + M2 / (delta - delta_cap + i)
//! ```
//!
//! with the single-line case being the `delta_cap = 0`, `M2 = 0` special
//! case. The imaginary part is negative everywhere (the field grows as
//! `exp(-Im kappa * z)`); between two gain lines the real part falls with
//! `delta`, so the group index `1 + d(Re kappa)/d(delta)` drops below one
//! and, for strong enough gain, through zero: the anomalous dispersion that
//! makes a pulse peak leave the cloud before its vacuum twin arrives.
//!
//! All closed forms here are exact in the linear (weak-probe) regime after
//! adiabatic elimination; the [`steady_state`](crate::steady_state) module
//! keeps the pre-elimination equations around to check that claim.

use num_complex::Complex64;

use crate::csv;
use crate::grid::linspace;
use crate::scheme::{Scheme, SchemeParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Group-index magnitudes below this count as a divergence: the group
/// velocity is reported as `f64::INFINITY` rather than a meaninglessly huge
/// finite number.
pub const GROUP_INDEX_SINGULAR_TOL: f64 = 1e-12;

/// Wave number for one gain line of aggregate strength `gain`.
pub fn kappa_single_pump(delta: f64, gain: f64) -> Complex64 {
    gain / (delta + I)
}

/// Wave number for a gain doublet: lines of strength `m1`, `m2` centered at
/// `-delta_cap` and `+delta_cap`.
pub fn kappa_doublet(delta: f64, m1: f64, m2: f64, delta_cap: f64) -> Complex64 {
    m1 / (delta + delta_cap + I) + m2 / (delta - delta_cap + I)
}

/// Wave number of the amplified superposition in the two-probe double
/// doublet. Identical to [`kappa_doublet`]: the coupled mode sees the same
/// doublet a single probe would, which is the whole point of the scheme.
pub fn kappa_double_doublet(delta: f64, params: &SchemeParams) -> Complex64 {
    debug_assert_eq!(params.scheme, Scheme::TwoProbeDoubleDoublet);
    kappa_doublet(delta, params.gain_m1, params.gain_m2, params.delta_cap)
}

/// Scheme-dispatched wave number.
pub fn kappa(delta: f64, params: &SchemeParams) -> Complex64 {
    match params.scheme {
        Scheme::SingleProbeSinglePump | Scheme::TwoProbeSinglePumpPair => {
            kappa_single_pump(delta, params.gain_m1)
        }
        Scheme::SingleProbeDoublet => {
            kappa_doublet(delta, params.gain_m1, params.gain_m2, params.delta_cap)
        }
        Scheme::TwoProbeDoubleDoublet => kappa_double_doublet(delta, params),
    }
}

/// Closed-form d kappa / d delta.
pub fn kappa_derivative(delta: f64, params: &SchemeParams) -> Complex64 {
    match params.scheme {
        Scheme::SingleProbeSinglePump | Scheme::TwoProbeSinglePumpPair => {
            let d = delta + I;
            -params.gain_m1 / (d * d)
        }
        Scheme::SingleProbeDoublet | Scheme::TwoProbeDoubleDoublet => {
            let a = delta + params.delta_cap + I;
            let b = delta - params.delta_cap + I;
            -params.gain_m1 / (a * a) - params.gain_m2 / (b * b)
        }
    }
}

/// Group index `1 + d(Re kappa)/d(delta)` from the closed-form derivative.
pub fn group_index_at(delta: f64, params: &SchemeParams) -> f64 {
    1.0 + kappa_derivative(delta, params).re
}

fn velocity_from_index(group_index: f64) -> f64 {
    if group_index.abs() < GROUP_INDEX_SINGULAR_TOL {
        f64::INFINITY
    } else {
        1.0 / group_index
    }
}

/// Group velocity in units of the vacuum speed, from the closed-form
/// derivative. A vanishing group index yields `f64::INFINITY`: the boundary
/// between superluminal and negative-velocity propagation, where the pulse
/// peak crosses the cloud in no time at all.
pub fn group_velocity_at(delta: f64, params: &SchemeParams) -> f64 {
    velocity_from_index(group_index_at(delta, params))
}

/// Group velocity by centered finite difference on an arbitrary dispersion
/// relation. Cross-check for [`group_velocity_at`] and escape hatch for
/// kappas with no closed-form derivative.
pub fn group_velocity_numeric<F>(delta: f64, kappa_fn: F) -> f64
where
    F: Fn(f64) -> Complex64,
{
    let h = 1e-6;
    let excess = (kappa_fn(delta + h).re - kappa_fn(delta - h).re) / (2.0 * h);
    velocity_from_index(1.0 + excess)
}

/// Amplitude gain of the carrier over a cloud of the given length:
/// `|exp(i kappa0 L)| = exp(-Im kappa0 * L)`.
pub fn transmission(kappa0: Complex64, length: f64) -> f64 {
    (-kappa0.im * length).exp()
}

/// `kappa(0)` and its first two detuning derivatives for an equal-strength
/// doublet, the input to the analytic envelope approximations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoefficients {
    pub kappa0: Complex64,
    pub kappa1: Complex64,
    pub kappa2: Complex64,
}

/// Closed-form Taylor data at line center for a doublet of equal strength
/// `m`. With `s = delta_cap^2 + 1`:
///
/// ```text
/// kappa(0)   = -2 i m / s                      (pure gain)
/// kappa'(0)  = -2 m (delta_cap^2 - 1) / s^2    (real: group-index excess)
/// kappa''(0) = -4 i m (3 delta_cap^2 - 1) / s^3
/// ```
///
/// The slope changes sign at `delta_cap = 1`, which is where the medium
/// crosses from subluminal to superluminal at line center.
pub fn taylor_coefficients(m: f64, delta_cap: f64) -> TaylorCoefficients {
    let d2 = delta_cap * delta_cap;
    let s = d2 + 1.0;
    TaylorCoefficients {
        kappa0: Complex64::new(0.0, -2.0 * m / s),
        kappa1: Complex64::new(-2.0 * m * (d2 - 1.0) / (s * s), 0.0),
        kappa2: Complex64::new(0.0, -4.0 * m * (3.0 * d2 - 1.0) / (s * s * s)),
    }
}

/// Propagation regime by group index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `n_g >= 1`: the peak moves no faster than in vacuum.
    Subluminal,
    /// `0 <= n_g < 1`: faster than vacuum but still forward.
    Superluminal,
    /// `n_g < 0`: the peak inside the medium moves backward.
    NegativeVelocity,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Subluminal => "Subluminal",
            Regime::Superluminal => "Superluminal",
            Regime::NegativeVelocity => "NegativeVelocity",
        };
        f.write_str(s)
    }
}

pub fn classify_regime(group_index: f64) -> Regime {
    if group_index < 0.0 {
        Regime::NegativeVelocity
    } else if group_index < 1.0 {
        Regime::Superluminal
    } else {
        Regime::Subluminal
    }
}

/// One sample of a detuning sweep.
#[derive(Debug, Clone, Copy)]
pub struct DispersionPoint {
    pub delta: f64,
    pub kappa: Complex64,
    /// `d(Re kappa)/d(delta)`, the medium's addition to the group index.
    pub group_index_excess: f64,
    pub group_velocity: f64,
    pub regime: Regime,
}

/// Default detuning window: five linewidths either side of line center.
pub fn default_sweep_grid() -> Vec<f64> {
    linspace(-5.0, 5.0, 2001)
}

pub fn sweep(params: &SchemeParams, deltas: &[f64]) -> Vec<DispersionPoint> {
    deltas
        .iter()
        .map(|&delta| {
            let excess = kappa_derivative(delta, params).re;
            DispersionPoint {
                delta,
                kappa: kappa(delta, params),
                group_index_excess: excess,
                group_velocity: velocity_from_index(1.0 + excess),
                regime: classify_regime(1.0 + excess),
            }
        })
        .collect()
}

/// Sweep as CSV: `delta, re_kappa, im_kappa, group_index, group_velocity,
/// gain`, where gain is the amplitude transmission at that detuning over the
/// cloud length.
pub fn write_sweep_csv<W: std::io::Write>(
    w: &mut W,
    params: &SchemeParams,
    points: &[DispersionPoint],
) -> std::io::Result<()> {
    csv::write_table(
        w,
        &[
            "delta",
            "re_kappa",
            "im_kappa",
            "group_index",
            "group_velocity",
            "gain",
        ],
        points.iter().map(|p| {
            vec![
                p.delta,
                p.kappa.re,
                p.kappa.im,
                1.0 + p.group_index_excess,
                p.group_velocity,
                transmission(p.kappa, params.cloud_length),
            ]
        }),
    )
}
