//! Uniform sample grids.

/// `count` evenly spaced samples from `min` to `max` inclusive. The last
/// sample is pinned to `max` exactly so downstream window logic can compare
/// against the endpoints without ulp paranoia.
///
/// Panics if `count < 2` or the bounds are not ordered; grid shapes come
/// from validated config, so a violation here is a programming error.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two samples");
    assert!(min < max, "linspace needs min < max");
    let step = (max - min) / (count - 1) as f64;
    let mut points: Vec<f64> = (0..count).map(|i| min + i as f64 * step).collect();
    points[count - 1] = max;
    points
}

/// A grid request as it appears in configs and on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}
