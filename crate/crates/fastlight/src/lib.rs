//! Pulse propagation through Raman gain media, in the regime where anomalous
//! dispersion between gain lines pushes the group velocity past the vacuum
//! speed of light or into negative values.
//!
//! The medium is a cloud of three-level atoms driven by one or two strong
//! pump fields. A weak probe (or a pair of probes sharing the same Raman
//! transition) sees a gain doublet; halfway between the two gain lines the
//! refractive index falls steeply with frequency, and a pulse tuned there
//! exits the cloud earlier than a vacuum-propagated reference. Everything
//! here works in dimensionless units: the Raman linewidth is the unit of
//! frequency, its inverse the unit of time, and the vacuum light speed is 1,
//! so lengths are measured in (light speed) x (Raman lifetime).
//!
//! Modules, roughly in dependency order:
//!
//! - [`scheme`]: pump/probe configurations and their validated parameters.
//! - [`config`]: flat key = value files that mirror those parameters.
//! - [`dispersion`]: complex wave-number kappa(delta), group velocity,
//!   transmitted intensity, and regime classification.
//! - [`modes`]: coupled/uncoupled superpositions for two-probe schemes.
//! - [`steady_state`]: microscopic steady states kept before adiabatic
//!   elimination; the convergence oracle for the closed-form kappa.
//! - [`wavepacket`]: monochromatic piecewise solutions, Gaussian packet
//!   synthesis by quadrature, analytic envelope approximations, peak finding.
//! - [`quadrature`]: composite Gauss-Legendre integration with a built-in
//!   refinement loop.
//! - [`grid`], [`csv`]: shared sampling and output plumbing.

pub mod config;
pub mod csv;
pub mod dispersion;
pub mod grid;
pub mod modes;
pub mod quadrature;
pub mod scheme;
pub mod steady_state;
pub mod wavepacket;

pub use scheme::{Scheme, SchemeParams};

// Complex64 appears throughout the public API; re-export the crate so
// downstream code names the same version.
pub use num_complex;
