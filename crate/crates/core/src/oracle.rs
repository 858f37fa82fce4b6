//! Brute-force oracles for the geometric discord.
//!
//! Two independent routes are provided. The simplex route minimizes
//! `2(γ₋ + γ₊)` over a grid of `u = n²`; the spectral route never touches
//! `γ±` and minimizes the numerical trace norm of `ρ - M_n(ρ)` over a
//! latitude/longitude grid of directions. Both refine their best grid
//! points with three rounds of 11×11 local patches, each a factor ten
//! narrower than the previous one.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::entropic::{c_e_closed, q_e_closed, t_e_closed};
use crate::error::{CorrError, Result};
use crate::geometric::{gamma_pair, q_g_closed, t_g_closed};
use crate::operator::{apply_measurement, trace_norm};
use crate::sampling::PhysicalSampler;
use crate::state::{bell_density, check_simplex, Axis, CorrelationVector, MeasurementDirection};

pub const SIMPLEX_ORACLE_TOL: f64 = 1e-6;
pub const SPECTRAL_ORACLE_TOL: f64 = 1e-5;
pub const VERTEX_TOL: f64 = 1e-9;
/// Minimum margin for a counterexample to count.
pub const WITNESS_MARGIN: f64 = 1e-6;

const REFINE_ROUNDS: usize = 3;
const PATCH_POINTS: usize = 11;
const SHRINK: f64 = 10.0;
const SPHERE_CANDIDATES: usize = 3;

/// Grid on the probability simplex with `resolution` points per edge.
#[derive(Debug, Clone)]
pub struct SimplexGrid {
    resolution: usize,
    points: Vec<[f64; 3]>,
}

impl SimplexGrid {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(CorrError::InvalidParameter(format!(
                "simplex resolution must be at least 2, got {resolution}"
            )));
        }
        let steps = resolution - 1;
        let denom = steps as f64;
        let mut points = Vec::with_capacity(resolution * (resolution + 1) / 2);
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let k = steps - i - j;
                points.push([i as f64 / denom, j as f64 / denom, k as f64 / denom]);
            }
        }
        Ok(Self { resolution, points })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.resolution - 1) as f64
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleVerdict {
    pub closed_form_value: f64,
    pub oracle_value: f64,
    pub gap: f64,
    pub witness_u: [f64; 3],
    pub tolerance: f64,
    pub passed: bool,
}

impl OracleVerdict {
    fn new(closed_form_value: f64, oracle_value: f64, witness_u: [f64; 3], tolerance: f64) -> Self {
        let gap = oracle_value - closed_form_value;
        Self {
            closed_form_value,
            oracle_value,
            gap,
            witness_u,
            tolerance,
            passed: gap.abs() <= tolerance,
        }
    }
}

/// `f(u) = γ₋(u) + γ₊(u)`; the discord for the measurement `u` is `2f`.
pub fn f_objective(c: &CorrelationVector, u: [f64; 3]) -> Result<f64> {
    let (minus, plus) = gamma_pair(c, u)?;
    Ok(minus + plus)
}

fn simplex_point(u1: f64, u2: f64) -> Option<[f64; 3]> {
    let u3 = 1.0 - u1 - u2;
    (u1 >= 0.0 && u2 >= 0.0 && u3 >= -1e-15).then(|| [u1, u2, u3.max(0.0)])
}

/// Minimizes `f` over the grid, then zooms in around the best point.
fn minimize_on_simplex(c: &CorrelationVector, resolution: usize) -> Result<(f64, [f64; 3])> {
    let grid = SimplexGrid::new(resolution)?;
    let mut best = (f64::INFINITY, [1.0, 0.0, 0.0]);
    for &u in grid.points() {
        let v = f_objective(c, u)?;
        if v < best.0 {
            best = (v, u);
        }
    }
    let mut span = grid.step();
    let half = (PATCH_POINTS / 2) as f64;
    for _ in 0..REFINE_ROUNDS {
        let center = best.1;
        let h = span / half;
        for a in 0..PATCH_POINTS {
            for b in 0..PATCH_POINTS {
                let u1 = center[0] + (a as f64 - half) * h;
                let u2 = center[1] + (b as f64 - half) * h;
                if let Some(u) = simplex_point(u1, u2) {
                    let v = f_objective(c, u)?;
                    if v < best.0 {
                        best = (v, u);
                    }
                }
            }
        }
        span /= SHRINK;
    }
    Ok(best)
}

/// Simplex-grid oracle for `Q_G = 2 min f`, compared with the closed form.
pub fn brute_force_qg(c: &CorrelationVector, resolution: usize) -> Result<OracleVerdict> {
    c.require_physical()?;
    if resolution < 50 {
        return Err(CorrError::InvalidParameter(format!(
            "oracle resolution must be at least 50, got {resolution}"
        )));
    }
    let (closed, _) = q_g_closed(c)?;
    let (fmin, witness) = minimize_on_simplex(c, resolution)?;
    Ok(OracleVerdict::new(
        closed,
        2.0 * fmin,
        witness,
        SIMPLEX_ORACLE_TOL,
    ))
}

/// Latitude/longitude grid over the upper hemisphere: `polar_steps`
/// intervals in `θ ∈ [0, π/2]` and `azimuth_steps` points in `φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereGrid {
    pub polar_steps: usize,
    pub azimuth_steps: usize,
}

impl SphereGrid {
    /// Square cells of `90° / polar_steps`.
    pub fn with_polar_steps(polar_steps: usize) -> Self {
        Self {
            polar_steps: polar_steps.max(1),
            azimuth_steps: 4 * polar_steps.max(1),
        }
    }

    pub fn one_degree() -> Self {
        Self::with_polar_steps(90)
    }

    fn d_theta(&self) -> f64 {
        FRAC_PI_2 / self.polar_steps as f64
    }

    fn d_phi(&self) -> f64 {
        2.0 * PI / self.azimuth_steps as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereMinimum {
    pub value: f64,
    /// Canonicalized to the upper hemisphere.
    pub direction: MeasurementDirection,
}

fn canonical(n: MeasurementDirection) -> MeasurementDirection {
    let v = n.components();
    let first_nonzero = v
        .iter()
        .rev()
        .find(|x| x.abs() > 1e-15)
        .copied()
        .unwrap_or(1.0);
    if first_nonzero < 0.0 {
        MeasurementDirection::normalized(v.map(|x| -x)).unwrap_or(n)
    } else {
        n
    }
}

/// Deterministic grid-plus-refinement minimization of `objective` over
/// measurement directions. Since `n` and `-n` give the same measurement only
/// the upper hemisphere is scanned.
pub fn minimize_on_sphere<F>(grid: SphereGrid, mut objective: F) -> Result<SphereMinimum>
where
    F: FnMut(&MeasurementDirection) -> Result<f64>,
{
    let mut coarse: Vec<(f64, f64, f64)> = Vec::new();
    for it in 0..=grid.polar_steps {
        let theta = it as f64 * grid.d_theta();
        let azimuths = if it == 0 { 1 } else { grid.azimuth_steps };
        for ip in 0..azimuths {
            let phi = ip as f64 * grid.d_phi();
            let v = objective(&MeasurementDirection::from_angles(theta, phi))?;
            coarse.push((v, theta, phi));
        }
    }
    // Stable sort: ties keep grid order.
    coarse.sort_by(|a, b| a.0.total_cmp(&b.0));

    let half = (PATCH_POINTS / 2) as f64;
    let mut best = coarse[0];
    for &start in coarse.iter().take(SPHERE_CANDIDATES) {
        let mut local = start;
        let (mut span_t, mut span_p) = (grid.d_theta(), grid.d_phi());
        for _ in 0..REFINE_ROUNDS {
            let (_, t0, p0) = local;
            for a in 0..PATCH_POINTS {
                for b in 0..PATCH_POINTS {
                    let theta = t0 + (a as f64 - half) * span_t / half;
                    let phi = p0 + (b as f64 - half) * span_p / half;
                    let v = objective(&MeasurementDirection::from_angles(theta, phi))?;
                    if v < local.0 {
                        local = (v, theta, phi);
                    }
                }
            }
            span_t /= SHRINK;
            span_p /= SHRINK;
        }
        if local.0 < best.0 {
            best = local;
        }
    }
    Ok(SphereMinimum {
        value: best.0,
        direction: canonical(MeasurementDirection::from_angles(best.1, best.2)),
    })
}

/// Spectral oracle: minimizes `tr|ρ - M_n(ρ)|` computed by the Jacobi
/// eigensolver alone. `sphere_resolution` is the number of polar steps.
pub fn brute_force_qg_spectral(
    c: &CorrelationVector,
    sphere_resolution: usize,
) -> Result<OracleVerdict> {
    c.require_physical()?;
    let (closed, _) = q_g_closed(c)?;
    let rho = bell_density(*c);
    let best = minimize_on_sphere(SphereGrid::with_polar_steps(sphere_resolution), |n| {
        trace_norm(&(rho - apply_measurement(&rho, n)))
    })?;
    Ok(OracleVerdict::new(
        closed,
        best.value,
        best.direction.squared(),
        SPECTRAL_ORACLE_TOL,
    ))
}

/// Outcome of evaluating the stationarity condition of the constrained
/// minimization of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stationarity {
    /// Left-hand sides for `m = j+1` and `m = j+2`. Both vanish at an
    /// interior stationary point.
    Residuals([f64; 2]),
    /// Some `u_i ≤ 1e-6`; the point lies on the boundary.
    NotInterior,
    /// `γ₋`, `γ₊` or `β·u` vanishes, so the condition cannot hold with
    /// `α_m ≠ α_j`.
    ConditionViolated,
}

/// `(α_m - α_j)[(1 - α_n/√(β·u))/γ₋ + (1 + α_n/√(β·u))/γ₊]` for
/// `m ∈ {j+1, j+2}` and `n` the remaining index. This equals
/// `-32 (∂_m f - ∂_j f)`.
pub fn stationarity_residual(c: &CorrelationVector, u: [f64; 3], j: Axis) -> Result<Stationarity> {
    c.require_physical()?;
    check_simplex(&u)?;
    if u.iter().any(|&x| x <= 1e-6) {
        return Ok(Stationarity::NotInterior);
    }
    let alpha = c.components().map(|x| x * x);
    let beta = [
        alpha[1] * alpha[2],
        alpha[0] * alpha[2],
        alpha[0] * alpha[1],
    ];
    let beta_u: f64 = beta.iter().zip(&u).map(|(a, b)| a * b).sum();
    let (minus, plus) = gamma_pair(c, u)?;
    let jj = j.index();
    let mut out = [0.0; 2];
    for (slot, k) in out.iter_mut().zip([1usize, 2]) {
        let m = (jj + k) % 3;
        let n = 3 - jj - m;
        let prefactor = alpha[m] - alpha[jj];
        if prefactor == 0.0 {
            continue;
        }
        if minus <= 1e-10 || plus <= 1e-10 || beta_u <= 1e-10 {
            return Ok(Stationarity::ConditionViolated);
        }
        let ratio = alpha[n] / beta_u.sqrt();
        *slot = prefactor * ((1.0 - ratio) / minus + (1.0 + ratio) / plus);
    }
    Ok(Stationarity::Residuals(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexMinimality {
    pub grid_min: f64,
    pub vertex_min: f64,
    pub grid_argmin: [f64; 3],
    pub holds: bool,
}

/// Compares the minimum of `f` over the whole simplex grid with its minimum
/// over the three vertices.
pub fn vertex_minimality(c: &CorrelationVector, resolution: usize) -> Result<VertexMinimality> {
    c.require_physical()?;
    let grid = SimplexGrid::new(resolution)?;
    let mut grid_min = f64::INFINITY;
    let mut grid_argmin = [1.0, 0.0, 0.0];
    for &u in grid.points() {
        let v = f_objective(c, u)?;
        if v < grid_min {
            grid_min = v;
            grid_argmin = u;
        }
    }
    let vertex_min = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .into_iter()
        .map(|u| f_objective(c, u))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(VertexMinimality {
        grid_min,
        vertex_min,
        grid_argmin,
        holds: grid_min >= vertex_min - VERTEX_TOL,
    })
}

pub fn vertex_minimality_check(c: &CorrelationVector, resolution: usize) -> Result<bool> {
    vertex_minimality(c, resolution).map(|v| v.holds)
}

/// Relations that fail to hold in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NonHierarchy {
    /// A state with `T_G < T_E`.
    TgLtTe,
    /// A state with `Q_E > C_E`.
    QeGtCe,
}

impl NonHierarchy {
    /// Signed margin; positive means `c` witnesses the relation.
    pub fn margin(self, c: &CorrelationVector) -> Result<f64> {
        Ok(match self {
            NonHierarchy::TgLtTe => t_e_closed(c)? - t_g_closed(c)?,
            NonHierarchy::QeGtCe => q_e_closed(c)? - c_e_closed(c)?,
        })
    }
}

/// Samples up to `budget` physical states and returns the first whose
/// margin exceeds [`WITNESS_MARGIN`], or `None` when the budget runs out.
pub fn counterexample_search(
    relation: NonHierarchy,
    seed: u64,
    budget: usize,
) -> Result<Option<CorrelationVector>> {
    let mut sampler = PhysicalSampler::new(seed);
    for _ in 0..budget {
        let c = sampler.next_state();
        if relation.margin(&c)? > WITNESS_MARGIN {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const GENERIC: CorrelationVector = CorrelationVector::new(0.5, -0.4, 0.3);
    const ORIGIN: CorrelationVector = CorrelationVector::new(0.0, 0.0, 0.0);

    #[test]
    fn grid_contains_vertices() {
        let g = SimplexGrid::new(60).unwrap();
        assert_eq!(g.points().len(), 60 * 61 / 2);
        for v in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            assert!(g.points().contains(&v));
        }
        for u in g.points() {
            assert!((u.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        assert!(SimplexGrid::new(1).is_err());
    }

    #[test]
    fn objective_examples() {
        assert_abs_diff_eq!(
            f_objective(&GENERIC, [1.0, 0.0, 0.0]).unwrap(),
            0.2,
            epsilon = 1e-15
        );
        assert_eq!(f_objective(&ORIGIN, [0.2, 0.3, 0.5]).unwrap(), 0.0);
        for x in [-0.9, -0.4, 0.1, 0.3] {
            let c = CorrelationVector::new(x, x, x);
            let third = 1.0 / 3.0;
            assert_abs_diff_eq!(
                f_objective(&c, [third, third, third]).unwrap(),
                0.5 * f64::abs(x),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn simplex_oracle_examples() {
        let v = brute_force_qg(&GENERIC, 100).unwrap();
        assert!(v.passed);
        assert_abs_diff_eq!(v.oracle_value, 0.4, epsilon = 1e-6);
        // f is flat along part of the u₂ = 0 edge, so only the value is unique.
        assert_abs_diff_eq!(
            f_objective(&GENERIC, v.witness_u).unwrap(),
            0.2,
            epsilon = 1e-6
        );
        let v = brute_force_qg(&ORIGIN, 100).unwrap();
        assert_eq!(v.oracle_value, 0.0);
        assert!(v.passed);
        let v = brute_force_qg(&CorrelationVector::new(0.9, -0.9, 0.8), 100).unwrap();
        assert!(v.passed);
        assert_abs_diff_eq!(v.oracle_value, 0.9, epsilon = 1e-6);
        assert!(brute_force_qg(&GENERIC, 49).is_err());
    }

    #[test]
    fn spectral_oracle_examples() {
        let v = brute_force_qg_spectral(&GENERIC, 9).unwrap();
        assert!(v.passed, "{v:?}");
        assert_abs_diff_eq!(
            f_objective(&GENERIC, v.witness_u).unwrap(),
            0.2,
            epsilon = 1e-5
        );
        let v = brute_force_qg_spectral(&CorrelationVector::new(0.7, 0.0, 0.0), 9).unwrap();
        assert!(v.oracle_value.abs() < 1e-12);
        assert!(v.witness_u[0] > 1.0 - 1e-6);
        let v = brute_force_qg_spectral(&CorrelationVector::new(1.0, -1.0, 1.0), 9).unwrap();
        assert!(v.passed);
        assert_abs_diff_eq!(v.oracle_value, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn residual_is_scaled_gradient_difference() {
        let c = CorrelationVector::new(0.6, -0.35, 0.2);
        let u = [0.3, 0.45, 0.25];
        let h = 1e-6;
        let partial = |l: usize| {
            let mut up = u;
            let mut dn = u;
            up[l] += h;
            dn[l] -= h;
            // f extends off the simplex through the same formula.
            let eval = |v: [f64; 3]| {
                let alpha = c.components().map(|x| x * x);
                let beta = [
                    alpha[1] * alpha[2],
                    alpha[0] * alpha[2],
                    alpha[0] * alpha[1],
                ];
                let csq: f64 = alpha.iter().sum();
                let au: f64 = (0..3).map(|i| alpha[i] * v[i]).sum();
                let bu: f64 = (0..3).map(|i| beta[i] * v[i]).sum();
                0.25 * ((csq - au + 2.0 * bu.sqrt()).sqrt() + (csq - au - 2.0 * bu.sqrt()).sqrt())
            };
            (eval(up) - eval(dn)) / (2.0 * h)
        };
        for j in Axis::ALL {
            let Stationarity::Residuals(r) = stationarity_residual(&c, u, j).unwrap() else {
                panic!("expected residuals");
            };
            for (k, got) in [1usize, 2].into_iter().zip(r) {
                let m = (j.index() + k) % 3;
                let expected = -32.0 * (partial(m) - partial(j.index()));
                assert!(
                    (got - expected).abs() < 1e-6 * expected.abs().max(1.0),
                    "{got} {expected}"
                );
            }
        }
    }

    #[test]
    fn stationarity_examples() {
        let third = 1.0 / 3.0;
        let werner = CorrelationVector::new(-0.4, -0.4, -0.4);
        assert_eq!(
            stationarity_residual(&werner, [0.2, 0.5, 0.3], Axis::X).unwrap(),
            Stationarity::Residuals([0.0, 0.0])
        );
        match stationarity_residual(&GENERIC, [third; 3], Axis::X).unwrap() {
            Stationarity::Residuals(r) => assert!(r.iter().all(|x| x.abs() > 1e-3), "{r:?}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            stationarity_residual(&GENERIC, [1.0, 0.0, 0.0], Axis::X).unwrap(),
            Stationarity::NotInterior
        );
        assert_eq!(
            stationarity_residual(&CorrelationVector::new(0.5, 0.0, 0.0), [third; 3], Axis::X)
                .unwrap(),
            Stationarity::ConditionViolated
        );
    }

    #[test]
    fn vertex_minimality_examples() {
        assert!(vertex_minimality_check(&ORIGIN, 60).unwrap());
        assert!(vertex_minimality_check(&GENERIC, 60).unwrap());
        // Equal magnitudes: f is flat on the whole simplex.
        let w = vertex_minimality(&CorrelationVector::new(0.3, 0.3, 0.3), 60).unwrap();
        assert!(w.holds);
        assert!((w.grid_min - w.vertex_min).abs() < 1e-9);
        let grid = SimplexGrid::new(60).unwrap();
        for &u in grid.points() {
            let v = f_objective(&CorrelationVector::new(0.3, 0.3, 0.3), u).unwrap();
            assert!((v - w.vertex_min).abs() < 1e-9);
        }
    }

    #[test]
    fn counterexamples() {
        let w = counterexample_search(NonHierarchy::TgLtTe, 0, 10_000)
            .unwrap()
            .unwrap();
        assert!(NonHierarchy::TgLtTe.margin(&w).unwrap() > WITNESS_MARGIN);
        let w = counterexample_search(NonHierarchy::QeGtCe, 0, 10_000)
            .unwrap()
            .unwrap();
        assert!(NonHierarchy::QeGtCe.margin(&w).unwrap() > WITNESS_MARGIN);
        assert!(
            NonHierarchy::TgLtTe
                .margin(&CorrelationVector::new(1.0, -1.0, 1.0))
                .unwrap()
                > 0.49
        );
        let werner = CorrelationVector::new(-0.8, -0.8, -0.8);
        assert!(NonHierarchy::QeGtCe.margin(&werner).unwrap() > 0.09);
        // A budget of one may legitimately come back empty.
        assert!(counterexample_search(NonHierarchy::TgLtTe, 1, 1).is_ok());
    }

    #[test]
    fn sphere_refinement_finds_off_grid_minimum() {
        // Minimizer at θ = 0.37, φ = 1.1, between the 10° grid points.
        let m = MeasurementDirection::from_angles(0.37, 1.1).components();
        let best = minimize_on_sphere(SphereGrid::with_polar_steps(9), |n| {
            let d: f64 = n.components().iter().zip(&m).map(|(a, b)| a * b).sum();
            Ok(-d * d)
        })
        .unwrap();
        assert_abs_diff_eq!(best.value, -1.0, epsilon = 1e-6);
        let overlap: f64 = best
            .direction
            .components()
            .iter()
            .zip(&m)
            .map(|(a, b)| a * b)
            .sum();
        assert!(overlap.abs().acos() < 1e-3, "{overlap}");
    }
}
