//! Composite 16-point Gauss-Legendre quadrature.
//!
//! Spectral synthesis integrates smooth but increasingly oscillatory
//! integrands (phase grows with |z - t|), so the workhorse is a fixed
//! high-order panel rule whose panel count doubles until the result stops
//! moving. Node layout is fully deterministic: panels left to right, nodes
//! ascending inside each panel, so repeated runs sum in the same order and
//! reproduce bit-identical results.

/// Abscissas of the 16-point Gauss-Legendre rule on [-1, 1], positive half;
/// the rule is symmetric. Exact for polynomials through degree 31.
// Tabulated at full published precision; the extra digit beyond f64's
// shortest round-trip is intentional.
#[allow(clippy::excessive_precision)]
const NODES_HALF: [f64; 8] = [
    0.09501250983763744,
    0.28160355077925891,
    0.45801677765722739,
    0.61787624440264375,
    0.75540440835500303,
    0.86563120238783174,
    0.94457502307323258,
    0.98940093499164993,
];

#[allow(clippy::excessive_precision)]
const WEIGHTS_HALF: [f64; 8] = [
    0.18945061045506850,
    0.18260341504492359,
    0.16915651939500254,
    0.14959598881657673,
    0.12462897125553387,
    0.09515851168249278,
    0.06225352393864789,
    0.02715245941175409,
];

pub const NODES_PER_PANEL: usize = 16;

/// The 16 reference nodes and weights in ascending node order.
fn reference_rule() -> [(f64, f64); NODES_PER_PANEL] {
    let mut rule = [(0.0, 0.0); NODES_PER_PANEL];
    for i in 0..8 {
        rule[i] = (-NODES_HALF[7 - i], WEIGHTS_HALF[7 - i]);
        rule[8 + i] = (NODES_HALF[i], WEIGHTS_HALF[i]);
    }
    rule
}

/// (node, weight) pairs of the composite rule on [a, b] with the given
/// panel count, in deterministic summation order.
pub fn composite_gauss16(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    assert!(panels >= 1, "need at least one panel");
    assert!(a < b, "empty or reversed interval");
    let rule = reference_rule();
    let width = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * NODES_PER_PANEL);
    for p in 0..panels {
        let left = a + p as f64 * width;
        let mid = left + 0.5 * width;
        let half = 0.5 * width;
        for (x, w) in rule {
            out.push((mid + half * x, half * w));
        }
    }
    out
}

/// Convenience single-value integral, mostly for tests and diagnostics.
pub fn integrate<F>(f: F, a: f64, b: f64, panels: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    composite_gauss16(a, b, panels)
        .into_iter()
        .map(|(x, w)| w * f(x))
        .sum()
}
