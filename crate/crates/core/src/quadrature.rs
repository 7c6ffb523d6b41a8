//! Composite Simpson quadrature split at the potential breakpoints.

use crate::model::PiecewiseWavefunction;

/// Simpson panels per segment.
pub const PANELS_PER_SEGMENT: usize = 4096;

/// Composite Simpson on `[lo, hi]` with `panels` (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (hi - lo) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let x = lo + i as f64 * h;
        if i % 2 == 1 {
            odd += f(x);
        } else {
            even += f(x);
        }
    }
    h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even)
}

/// Nodes and weights of the split rule on `[-a, -b, 0, b, a]`.
///
/// Seam nodes appear twice, once per adjacent segment, so one-sided
/// values can be used on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Segment owning each node.
    pub segment: Vec<usize>,
}

impl SplitRule {
    pub fn new(a: f64, b: f64, panels: usize) -> Self {
        let n = panels.max(2).next_multiple_of(2);
        let breaks = [-a, -b, 0.0, b, a];
        let mut rule = SplitRule {
            nodes: Vec::with_capacity(4 * (n + 1)),
            weights: Vec::with_capacity(4 * (n + 1)),
            segment: Vec::with_capacity(4 * (n + 1)),
        };
        for s in 0..4 {
            let (lo, hi) = (breaks[s], breaks[s + 1]);
            let h = (hi - lo) / n as f64;
            for i in 0..=n {
                let w = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                rule.nodes.push(if i == n { hi } else { lo + i as f64 * h });
                rule.weights.push(w * h / 3.0);
                rule.segment.push(s);
            }
        }
        rule
    }

    pub fn for_wavefunction(psi: &PiecewiseWavefunction) -> Self {
        Self::new(psi.half_width(), psi.block_half_width(), PANELS_PER_SEGMENT)
    }

    /// `(psi, psi')` at every node, taken from the owning segment.
    pub fn sample(&self, psi: &PiecewiseWavefunction) -> (Vec<f64>, Vec<f64>) {
        let segs = psi.segments();
        self.nodes.iter().zip(&self.segment).map(|(&x, &s)| (segs[s].value(x), segs[s].derivative(x))).unzip()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.weights.iter().zip(u.iter().zip(v)).map(|(w, (x, y))| w * x * y).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, -1.0, 2.0, 2);
        assert!((v - (15.0 / 4.0 - 3.0 + 3.0)).abs() < 1e-14);
    }

    #[test]
    fn simpson_sine() {
        let v = simpson(f64::sin, 0.0, PI, 4096);
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn split_rule_integrates_over_box() {
        let rule = SplitRule::new(6.0, 2.0, 64);
        let ones = vec![1.0; rule.nodes.len()];
        assert!((rule.integrate(&ones) - 12.0).abs() < 1e-12);
        let xs: Vec<f64> = rule.nodes.iter().map(|x| x * x).collect();
        assert!((rule.integrate(&xs) - 144.0).abs() < 1e-10);
        assert_eq!(rule.nodes.len(), 4 * 65);
    }
}
