//! Pump/probe configurations and their validated parameters.
//!
//! Four driving schemes are supported. A single probe may face one pump
//! (plain Raman gain line) or a bichromatic pump (gain doublet). A pair of
//! probes separated by twice the pump splitting may face a shared pump pair
//! (each probe works with one pump component) or a double doublet (two pumps
//! per probe), which couples the probes coherently.
//!
//! Microscopic quantities never appear here. A gain line is described only
//! by its aggregate strength M = g^2 n |Omega|^2 / Delta0^2 in Raman
//! linewidth units, the same combination that sets both the height of the
//! gain peak and the steepness of the anomalous dispersion between peaks.

use num_complex::Complex64;
use thiserror::Error;

/// Raman linewidth, the frequency unit. Kept symbolic so formulas read
/// like their dimensional counterparts.
pub const LINEWIDTH: f64 = 1.0;

/// Vacuum light speed, the velocity unit.
pub const LIGHT_SPEED: f64 = 1.0;

/// Driving-field arrangement seen by the probe field(s).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// One probe, one monochromatic pump: a single Raman gain line.
    SingleProbeSinglePump,
    /// One probe, bichromatic pump: a gain doublet split by `2 * delta_cap`.
    SingleProbeDoublet,
    /// Two probes sharing one pump pair; each probe sees one gain line and
    /// the pair is described by the aggregate strength alone.
    TwoProbeSinglePumpPair,
    /// Two probes, each driven by both members of a pump doublet. The probes
    /// mix: only one superposition of them is amplified.
    TwoProbeDoubleDoublet,
}

impl Scheme {
    pub fn is_two_probe(self) -> bool {
        matches!(
            self,
            Scheme::TwoProbeSinglePumpPair | Scheme::TwoProbeDoubleDoublet
        )
    }

    /// Spelling used in configuration files.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::SingleProbeSinglePump => "single_probe_single_pump",
            Scheme::SingleProbeDoublet => "single_probe_doublet",
            Scheme::TwoProbeSinglePumpPair => "two_probe_single_pump_pair",
            Scheme::TwoProbeDoubleDoublet => "two_probe_double_doublet",
        }
    }

    pub fn from_name(name: &str) -> Option<Scheme> {
        match name {
            "single_probe_single_pump" => Some(Scheme::SingleProbeSinglePump),
            "single_probe_doublet" => Some(Scheme::SingleProbeDoublet),
            "two_probe_single_pump_pair" => Some(Scheme::TwoProbeSinglePumpPair),
            "two_probe_double_doublet" => Some(Scheme::TwoProbeDoubleDoublet),
            _ => None,
        }
    }
}

/// Everything the propagation modules need to know about the medium.
///
/// `gain_m1`/`gain_m2` are the aggregate strengths of the two gain lines
/// (for single-line schemes only `gain_m1` is read). `delta_cap` is half the
/// splitting between the lines. The Rabi ratios fix, for two-probe schemes,
/// which superposition of the probes is amplified; they are the pump
/// amplitudes of probe 1 and probe 2 normalized to unit total power.
/// `cloud_length` is the medium length in units of light speed over
/// linewidth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeParams {
    pub scheme: Scheme,
    pub gain_m1: f64,
    pub gain_m2: f64,
    /// Half the gain-line splitting, in linewidths. Non-negative.
    pub delta_cap: f64,
    /// Pump amplitude ratio for probe 1 (two-probe schemes only).
    pub rabi_ratio_11: Option<Complex64>,
    /// Pump amplitude ratio for probe 2 (two-probe schemes only).
    pub rabi_ratio_21: Option<Complex64>,
    /// Length of the atomic cloud. Positive.
    pub cloud_length: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("cloud_length must be positive, got {0}")]
    NonPositiveLength(f64),
    #[error("gain strengths must be non-negative, got {0}")]
    NegativeGain(f64),
    #[error("delta_cap must be non-negative, got {0}")]
    NegativeSplitting(f64),
    #[error("rabi ratio vector has norm {norm}, too far from 1 to renormalize")]
    UnnormalizedRabiVector { norm: f64 },
    #[error("field {0} only applies to two-probe schemes")]
    RejectedExtraneousField(&'static str),
    #[error("two-probe schemes need both rabi_ratio_11 and rabi_ratio_21")]
    MissingRabiVector,
    #[error("field {0} must be finite")]
    NonFinite(&'static str),
}

/// Norm deviations up to this are treated as representation round-off and
/// silently rescaled; anything larger is a caller error.
const NORM_RESCALE_TOL: f64 = 1e-9;

/// Norm deviations below this mean the vector is already unit and rescaling
/// would only churn bits; keeps validation idempotent.
const NORM_EXACT_TOL: f64 = 4.0 * f64::EPSILON;

impl SchemeParams {
    pub fn single_pump(gain: f64, cloud_length: f64) -> Result<SchemeParams, ParamError> {
        SchemeParams {
            scheme: Scheme::SingleProbeSinglePump,
            gain_m1: gain,
            gain_m2: 0.0,
            delta_cap: 0.0,
            rabi_ratio_11: None,
            rabi_ratio_21: None,
            cloud_length,
        }
        .validate()
    }

    pub fn doublet(
        gain_m1: f64,
        gain_m2: f64,
        delta_cap: f64,
        cloud_length: f64,
    ) -> Result<SchemeParams, ParamError> {
        SchemeParams {
            scheme: Scheme::SingleProbeDoublet,
            gain_m1,
            gain_m2,
            delta_cap,
            rabi_ratio_11: None,
            rabi_ratio_21: None,
            cloud_length,
        }
        .validate()
    }

    pub fn probe_pair(
        gain: f64,
        ratio_11: Complex64,
        ratio_21: Complex64,
        cloud_length: f64,
    ) -> Result<SchemeParams, ParamError> {
        SchemeParams {
            scheme: Scheme::TwoProbeSinglePumpPair,
            gain_m1: gain,
            gain_m2: 0.0,
            delta_cap: 0.0,
            rabi_ratio_11: Some(ratio_11),
            rabi_ratio_21: Some(ratio_21),
            cloud_length,
        }
        .validate()
    }

    pub fn double_doublet(
        gain_m1: f64,
        gain_m2: f64,
        delta_cap: f64,
        ratio_11: Complex64,
        ratio_21: Complex64,
        cloud_length: f64,
    ) -> Result<SchemeParams, ParamError> {
        SchemeParams {
            scheme: Scheme::TwoProbeDoubleDoublet,
            gain_m1,
            gain_m2,
            delta_cap,
            rabi_ratio_11: Some(ratio_11),
            rabi_ratio_21: Some(ratio_21),
            cloud_length,
        }
        .validate()
    }

    /// Checks ranges, rejects fields that do not belong to the scheme, and
    /// renormalizes the Rabi ratio vector when it is off unit norm by no
    /// more than round-off. Idempotent: validating the result again returns
    /// it bit for bit.
    pub fn validate(mut self) -> Result<SchemeParams, ParamError> {
        if !self.cloud_length.is_finite() {
            return Err(ParamError::NonFinite("cloud_length"));
        }
        if self.cloud_length <= 0.0 {
            return Err(ParamError::NonPositiveLength(self.cloud_length));
        }
        for gain in [self.gain_m1, self.gain_m2] {
            if !gain.is_finite() {
                return Err(ParamError::NonFinite("gain"));
            }
            if gain < 0.0 {
                return Err(ParamError::NegativeGain(gain));
            }
        }
        if !self.delta_cap.is_finite() {
            return Err(ParamError::NonFinite("delta_cap"));
        }
        if self.delta_cap < 0.0 {
            return Err(ParamError::NegativeSplitting(self.delta_cap));
        }

        if !self.scheme.is_two_probe() {
            if self.rabi_ratio_11.is_some() {
                return Err(ParamError::RejectedExtraneousField("rabi_ratio_11"));
            }
            if self.rabi_ratio_21.is_some() {
                return Err(ParamError::RejectedExtraneousField("rabi_ratio_21"));
            }
            return Ok(self);
        }

        let (r11, r21) = match (self.rabi_ratio_11, self.rabi_ratio_21) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(ParamError::MissingRabiVector),
        };
        if !(r11.re.is_finite() && r11.im.is_finite()) {
            return Err(ParamError::NonFinite("rabi_ratio_11"));
        }
        if !(r21.re.is_finite() && r21.im.is_finite()) {
            return Err(ParamError::NonFinite("rabi_ratio_21"));
        }
        let norm = (r11.norm_sqr() + r21.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORM_RESCALE_TOL {
            return Err(ParamError::UnnormalizedRabiVector { norm });
        }
        if (norm - 1.0).abs() > NORM_EXACT_TOL {
            self.rabi_ratio_11 = Some(r11 / norm);
            self.rabi_ratio_21 = Some(r21 / norm);
        }
        Ok(self)
    }

    /// Rabi ratio pair; panics if called on a single-probe scheme, which has
    /// no business asking.
    pub fn ratios(&self) -> (Complex64, Complex64) {
        match (self.rabi_ratio_11, self.rabi_ratio_21) {
            (Some(a), Some(b)) => (a, b),
            _ => panic!("ratios() on a single-probe scheme"),
        }
    }
}
