//! Coupled and uncoupled probe superpositions for two-probe schemes.
//!
//! When both probes share the pump doublet, the medium does not amplify
//! probe 1 or probe 2 individually. It amplifies exactly one superposition,
//! fixed by the pump amplitude ratios `(r11, r21)`; the orthogonal
//! combination propagates as if the cloud were vacuum. The pair behaves
//! like a two-component field whose internal direction decides whether it
//! feels the gain doublet at all.
//!
//! `to_modes`/`from_modes` implement that unitary change of basis, and
//! `coupling_matrix` gives the rank-1 matrix that generates it: one
//! eigenvalue is the doublet wave number, the other is exactly zero.

use num_complex::Complex64;

use crate::dispersion::kappa_double_doublet;
use crate::scheme::SchemeParams;

fn debug_check_unit(r11: Complex64, r21: Complex64) {
    debug_assert!(
        ((r11.norm_sqr() + r21.norm_sqr()).sqrt() - 1.0).abs() < 1e-9,
        "rabi ratio vector must be unit; run SchemeParams::validate first"
    );
}

/// Probe fields to (coupled, uncoupled) amplitudes:
/// `psi = conj(r11) e1 + conj(r21) e2`, `phi = r21 e1 - r11 e2`.
pub fn to_modes(
    e1: Complex64,
    e2: Complex64,
    r11: Complex64,
    r21: Complex64,
) -> (Complex64, Complex64) {
    debug_check_unit(r11, r21);
    let psi = r11.conj() * e1 + r21.conj() * e2;
    let phi = r21 * e1 - r11 * e2;
    (psi, phi)
}

/// Exact inverse of [`to_modes`]:
/// `e1 = r11 psi + conj(r21) phi`, `e2 = r21 psi - conj(r11) phi`.
pub fn from_modes(
    psi: Complex64,
    phi: Complex64,
    r11: Complex64,
    r21: Complex64,
) -> (Complex64, Complex64) {
    debug_check_unit(r11, r21);
    let e1 = r11 * psi + r21.conj() * phi;
    let e2 = r21 * psi - r11.conj() * phi;
    (e1, e2)
}

/// Coupling matrix of the double-doublet scheme at detuning `delta`:
/// the scalar doublet wave number times the projector onto `(r11, r21)`.
/// Rank 1 by construction.
pub fn coupling_matrix(delta: f64, params: &SchemeParams) -> [[Complex64; 2]; 2] {
    let f = kappa_double_doublet(delta, params);
    let (r11, r21) = params.ratios();
    let v = [r11, r21];
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, row) in k.iter_mut().enumerate() {
        for (l, elem) in row.iter_mut().enumerate() {
            *elem = f * v[j] * v[l].conj();
        }
    }
    k
}

/// Eigenvalues of [`coupling_matrix`], in closed form: the projector has
/// eigenvalues one and zero, so the matrix has the doublet wave number and
/// an exact zero. No generic eigensolver involved; the quadratic-formula
/// route exists as [`generic_eigenvalues`] for cross-checking.
pub fn coupling_eigenvalues(delta: f64, params: &SchemeParams) -> [Complex64; 2] {
    [
        kappa_double_doublet(delta, params),
        Complex64::new(0.0, 0.0),
    ]
}

/// Quadratic-formula eigenvalues of an arbitrary complex 2x2 matrix,
/// larger magnitude first. Cross-check utility for tests; the library
/// itself always uses the closed form above.
pub fn generic_eigenvalues(m: &[[Complex64; 2]; 2]) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let a = (tr + disc) / 2.0;
    let b = (tr - disc) / 2.0;
    if a.norm() >= b.norm() {
        [a, b]
    } else {
        [b, a]
    }
}
