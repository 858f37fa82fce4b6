//! Anisotropy sweeps and detection of the two transitions of the ring.

use qcorr_core::families::{bisect, linspace};
use qcorr_core::{analyze, CorrelationReport, CorrelationVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{Result, XxzError};
use crate::ground::{bell_coordinates, ground_space, GroundStateObservables};
use crate::solver::SolverOptions;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub observables: GroundStateObservables,
    pub c: CorrelationVector,
    pub report: CorrelationReport,
}

pub fn evaluate(spec: &ChainSpec, options: &SolverOptions) -> Result<SweepPoint> {
    let observables = ground_space(spec, options)?;
    let c = bell_coordinates(&observables)?;
    let report = analyze(&c)?;
    Ok(SweepPoint {
        observables,
        c,
        report,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub outcome: Result<SweepPoint>,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub sites: usize,
    pub options: SolverOptions,
    pub rows: Vec<SweepRow>,
}

impl Sweep {
    pub fn failures(&self) -> impl Iterator<Item = (f64, &XxzError)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (r.delta, e)))
    }

    pub fn ok_points(&self) -> Vec<(f64, &SweepPoint)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().ok().map(|p| (r.delta, p)))
            .collect()
    }
}

/// Evaluates `steps` equally spaced anisotropies from `delta_min` to
/// `delta_max` inclusive. Rows are independent; a failing row keeps its
/// error and the sweep continues.
pub fn sweep_delta(
    sites: usize,
    delta_min: f64,
    delta_max: f64,
    steps: usize,
    options: &SolverOptions,
) -> Result<Sweep> {
    ChainSpec::new(sites, delta_min)?;
    ChainSpec::new(sites, delta_max)?;
    if steps < 2 || delta_min >= delta_max {
        return Err(XxzError::InvalidSpec(format!(
            "sweep needs delta_min < delta_max and at least 2 steps, got [{delta_min}, {delta_max}] with {steps}"
        )));
    }
    let rows = linspace(delta_min, delta_max, steps)
        .into_par_iter()
        .map(|delta| SweepRow {
            delta,
            outcome: ChainSpec::new(sites, delta).and_then(|spec| evaluate(&spec, options)),
        })
        .collect();
    Ok(Sweep {
        sites,
        options: *options,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// Discontinuity of the Bell coordinates from a level crossing.
    FirstOrder,
    /// Sign change of `|G_xx| - |G_zz|`, where `C_G = max(|G_xx|, |G_zz|)`
    /// switches branch.
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub kind: TransitionKind,
    /// Refined location.
    pub delta: f64,
    /// Grid interval that bracketed it.
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionOptions {
    /// Adjacent-row change in `c₁` or `c₃` above which a jump is flagged.
    pub jump_threshold: f64,
    /// Rows on either side of a jump whose sign changes of
    /// `|G_xx| - |G_zz|` are attributed to the jump itself.
    pub kink_window: usize,
    /// Width to which flagged locations are refined.
    pub tolerance: f64,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        Self {
            jump_threshold: 0.1,
            kink_window: 1,
            tolerance: 1e-6,
        }
    }
}

pub const MIN_ROWS: usize = 5;

fn branch_gap(p: &SweepPoint) -> f64 {
    p.observables.gxx.abs() - p.observables.gzz.abs()
}

fn coordinate_distance(a: &CorrelationVector, b: &CorrelationVector) -> f64 {
    (a.c1 - b.c1).abs().max((a.c3 - b.c3).abs())
}

/// Flags first-order jumps and `|G_xx| = |G_zz|` crossings, refining each
/// with fresh ground-space evaluations. Failed rows are skipped.
pub fn detect_transitions(sweep: &Sweep, options: &TransitionOptions) -> Result<Vec<Transition>> {
    let points = sweep.ok_points();
    if points.len() < MIN_ROWS {
        return Err(XxzError::InvalidSpec(format!(
            "transition detection needs at least {MIN_ROWS} rows, got {}",
            points.len()
        )));
    }
    let spec_at = |delta: f64| ChainSpec::new(sweep.sites, delta);
    let c_at = |delta: f64| -> Result<CorrelationVector> {
        bell_coordinates(&ground_space(&spec_at(delta)?, &sweep.options)?)
    };

    // Merge consecutive jump intervals into spans of point indices.
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for k in 0..points.len() - 1 {
        if coordinate_distance(&points[k].1.c, &points[k + 1].1.c) > options.jump_threshold {
            match spans.last_mut() {
                Some((_, end)) if *end == k => *end = k + 1,
                _ => spans.push((k, k + 1)),
            }
        }
    }

    let mut found = Vec::new();
    for &(i, j) in &spans {
        let (lo, hi) = (points[i].0, points[j].0);
        let (c_lo, c_hi) = (points[i].1.c, points[j].1.c);
        // Positive while the state resembles the left branch.
        let side = |delta: f64| -> Result<f64> {
            let c = c_at(delta)?;
            Ok(coordinate_distance(&c, &c_hi) - coordinate_distance(&c, &c_lo))
        };
        let delta = bisect(side, lo, hi, options.tolerance)?;
        found.push(Transition {
            kind: TransitionKind::FirstOrder,
            delta,
            bracket: (lo, hi),
        });
    }

    let near_jump = |k: usize| {
        spans
            .iter()
            .any(|&(i, j)| k + options.kink_window >= i && k <= j + options.kink_window)
    };
    // Grid points where the gap vanishes exactly (Δ = -1 on a grid that
    // contains it) are stepped over, bracketing with their nonzero
    // neighbours.
    let mut previous: Option<usize> = None;
    for k in 0..points.len() {
        let g = branch_gap(points[k].1);
        if g == 0.0 {
            continue;
        }
        let Some(p) = previous.replace(k) else {
            continue;
        };
        if branch_gap(points[p].1) * g > 0.0 || (p..=k).any(near_jump) {
            continue;
        }
        let (lo, hi) = (points[p].0, points[k].0);
        let gap = |delta: f64| -> Result<f64> {
            let obs = ground_space(&spec_at(delta)?, &sweep.options)?;
            Ok(obs.gxx.abs() - obs.gzz.abs())
        };
        let delta = bisect(gap, lo, hi, options.tolerance)?;
        found.push(Transition {
            kind: TransitionKind::Crossing,
            delta,
            bracket: (lo, hi),
        });
    }
    found.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    Ok(found)
}
