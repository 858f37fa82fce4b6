//! One-parameter families of Bell-diagonal states and tools for locating
//! sudden changes and crossings along them.

use crate::error::{CorrError, Result};
use crate::state::CorrelationVector;

/// `c₃` of the axially symmetric family `(x, -x, c₃)`.
pub const U1_C3: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `(x, x, x)`, physical for `x ∈ [-1, 1/3]`.
    Su2,
    /// `(x, -x, 0.9)`, physical for `|x| ≤ 0.95`.
    U1,
    /// `start + x (end - start)` for `x ∈ [0, 1]`.
    Line {
        start: CorrelationVector,
        end: CorrelationVector,
    },
}

impl Family {
    pub fn state(&self, x: f64) -> CorrelationVector {
        match *self {
            Family::Su2 => CorrelationVector::new(x, x, x),
            Family::U1 => CorrelationVector::new(x, -x, U1_C3),
            Family::Line { start, end } => {
                let a = start.components();
                let b = end.components();
                CorrelationVector::from_array([0, 1, 2].map(|k| a[k] + x * (b[k] - a[k])))
            }
        }
    }

    /// Admissible parameter range.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Family::Su2 => (-1.0, 1.0 / 3.0),
            Family::U1 => (-0.95, 0.95),
            Family::Line { .. } => (0.0, 1.0),
        }
    }

    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        let (dlo, dhi) = self.domain();
        let slack = 1e-12;
        if !(lo.is_finite() && hi.is_finite()) || lo > hi || lo < dlo - slack || hi > dhi + slack {
            return Err(CorrError::InvalidParameter(format!(
                "range [{lo}, {hi}] outside family domain [{dlo}, {dhi}]"
            )));
        }
        Ok(())
    }
}

/// `steps` points from `lo` to `hi` inclusive (one point when `steps == 1`).
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let h = (hi - lo) / (steps - 1) as f64;
            (0..steps)
                .map(|k| {
                    if k == steps - 1 {
                        hi
                    } else {
                        lo + k as f64 * h
                    }
                })
                .collect()
        }
    }
}

/// A slope discontinuity found from discrete second differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub x: f64,
    /// Estimated jump in the first derivative.
    pub slope_change: f64,
}

/// Flags grid points where `|y[k+1] - 2y[k] + y[k-1]| / h` exceeds
/// `min_slope_change`. Consecutive flagged points are merged into one kink
/// located at the largest second difference. Assumes a uniform grid.
pub fn detect_kinks(xs: &[f64], ys: &[f64], min_slope_change: f64) -> Vec<Kink> {
    assert_eq!(
        xs.len(),
        ys.len(),
        "abscissae and ordinates differ in length"
    );
    if xs.len() < 3 {
        return Vec::new();
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    // (kink, largest |second difference| seen in its cluster, last index)
    let mut found: Vec<(Kink, f64, usize)> = Vec::new();
    for k in 1..xs.len() - 1 {
        let d2 = (ys[k + 1] - 2.0 * ys[k] + ys[k - 1]) / h;
        if d2.abs() <= min_slope_change {
            continue;
        }
        match found.last_mut() {
            Some((kink, peak, last)) if *last + 1 == k => {
                if d2.abs() > *peak {
                    *peak = d2.abs();
                    kink.x = xs[k];
                }
                kink.slope_change += d2;
                *last = k;
            }
            _ => found.push((
                Kink {
                    x: xs[k],
                    slope_change: d2,
                },
                d2.abs(),
                k,
            )),
        }
    }
    found.into_iter().map(|(kink, _, _)| kink).collect()
}

/// Bisection for a sign change of `f` on `[lo, hi]`, to width `tol`.
pub fn bisect<F, E>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> std::result::Result<f64, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<CorrError>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(CorrError::InvalidParameter(format!("no sign change on [{lo}, {hi}]")).into());
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Indices `k` where `values[k]` and `values[k + 1]` have strictly opposite
/// signs.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] * w[1] < 0.0)
        .map(|(k, _)| k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometric::t_g_closed;

    #[test]
    fn family_states() {
        assert_eq!(
            Family::Su2.state(-0.2),
            CorrelationVector::new(-0.2, -0.2, -0.2)
        );
        assert_eq!(
            Family::U1.state(0.3),
            CorrelationVector::new(0.3, -0.3, 0.9)
        );
        let line = Family::Line {
            start: CorrelationVector::new(0.0, 0.0, 0.0),
            end: CorrelationVector::new(1.0, -1.0, 1.0),
        };
        assert_eq!(line.state(0.5), CorrelationVector::new(0.5, -0.5, 0.5));
    }

    #[test]
    fn family_domains_are_physical() {
        for fam in [Family::Su2, Family::U1] {
            let (lo, hi) = fam.domain();
            for x in linspace(lo, hi, 500) {
                assert!(fam.state(x).is_physical(), "{fam:?} {x}");
            }
            assert!(!fam.state(lo - 1e-3).is_physical());
            assert!(!fam.state(hi + 1e-3).is_physical());
        }
        assert!(Family::Su2.check_range(-1.0, 0.5).is_err());
        assert!(Family::U1.check_range(-0.95, 0.95).is_ok());
        assert!(Family::U1.check_range(0.5, 0.1).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let xs = linspace(-1.0, 1.0 / 3.0, 200);
        assert_eq!(xs.len(), 200);
        assert_eq!(xs[0], -1.0);
        assert_eq!(xs[199], 1.0 / 3.0);
        assert_eq!(linspace(0.0, 0.0, 1), vec![0.0]);
    }

    #[test]
    fn kinks_of_piecewise_linear() {
        let xs = linspace(-1.0, 1.0, 2001);
        let ys: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
        let k = detect_kinks(&xs, &ys, 0.05);
        assert_eq!(k.len(), 1);
        assert!(k[0].x.abs() < 1e-3);
        assert!((k[0].slope_change - 2.0).abs() < 1e-6);
        // Kink between grid points still yields a single event.
        let ys: Vec<f64> = xs.iter().map(|x| (x - 0.3005).abs()).collect();
        let k = detect_kinks(&xs, &ys, 0.05);
        assert_eq!(k.len(), 1);
        assert!((k[0].x - 0.3005).abs() <= 1e-3);
    }

    #[test]
    fn total_geometric_kinks_on_su2() {
        let xs = linspace(-1.0, 1.0 / 3.0, 1334);
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| t_g_closed(&Family::Su2.state(x)).unwrap())
            .collect();
        let k = detect_kinks(&xs, &ys, 0.05);
        assert_eq!(k.len(), 1);
        assert!(k[0].x.abs() <= 1e-3);
    }

    #[test]
    fn bisection() {
        let r = bisect(|x| Ok::<_, CorrError>(x * x - 2.0), 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        assert!(bisect(|x| Ok::<_, CorrError>(x * x + 1.0), -1.0, 1.0, 1e-6).is_err());
        assert_eq!(sign_changes(&[1.0, 0.5, -0.2, -0.1, 0.3]), vec![1, 3]);
    }
}
