//! Trace-distance geometric correlations of Bell-diagonal states.
//!
//! The closed forms depend only on the sorted magnitudes `(c₊, c₀, c₋)`:
//! `Q_G = c₀`, `C_G = c₊`, `T_G = ½[c₊ + max(c₊, c₀ + c₋)]`. The optimal
//! measurement is along the axis carrying `c₊`, and the resulting
//! classical-quantum state is again Bell-diagonal. Every closed form has a
//! matrix-level counterpart here so the two can be compared.

use serde::Serialize;

use crate::entropic::{entropic_triple, EntropicTriple};
use crate::error::{CorrError, Result};
use crate::operator::{apply_measurement, product_of_marginals, trace_norm, HermitianOperator4};
use crate::state::{
    bell_density, check_simplex, order_magnitudes, Axis, CorrelationVector, MeasurementDirection,
    OrderedMagnitudes,
};

/// Agreement required between the closed-form and matrix routes.
pub const DUAL_PATH_TOL: f64 = 1e-10;
/// Largest value `T_G` attains on the tetrahedron (at the Bell vertices).
pub const T_G_MAX: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricTriple {
    pub q_g: f64,
    pub c_g: f64,
    pub t_g: f64,
    pub optimal_axis: Axis,
}

/// All six measures of one state together with its spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub c: CorrelationVector,
    pub spectrum: [f64; 4],
    pub entropic: EntropicTriple,
    pub geometric: GeometricTriple,
}

/// `(γ₋, γ₊)`, the positive halves of the spectrum `{±γ₊, ±γ₋}` of
/// `ρ - M(ρ)` for the measurement with `u = (n₁², n₂², n₃²)`.
pub fn gamma_pair(c: &CorrelationVector, u: [f64; 3]) -> Result<(f64, f64)> {
    check_simplex(&u)?;
    let u = u.map(|x| x.max(0.0));
    let alpha = c.components().map(|x| x * x);
    let beta = [
        alpha[1] * alpha[2],
        alpha[0] * alpha[2],
        alpha[0] * alpha[1],
    ];
    let c_sq: f64 = alpha.iter().sum();
    let alpha_u: f64 = alpha.iter().zip(&u).map(|(a, b)| a * b).sum();
    let beta_u: f64 = beta.iter().zip(&u).map(|(a, b)| a * b).sum();
    let cross = 2.0 * beta_u.max(0.0).sqrt();
    let base = c_sq - alpha_u;
    let r_plus = (base + cross).max(0.0);
    // r₋ r₊ = base² - 4β·u = Σ_{i<j} (u_k - u_i u_j)(α_i - α_j)². Dividing
    // avoids the cancellation in base - cross, which is exact zero for
    // equal magnitudes.
    let product: f64 = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .iter()
        .map(|&(i, j, k)| (u[k] - u[i] * u[j]) * (alpha[i] - alpha[j]).powi(2))
        .sum();
    let r_minus = if r_plus > 0.0 {
        product.max(0.0) / r_plus
    } else {
        0.0
    };
    Ok((0.25 * r_minus.sqrt(), 0.25 * r_plus.sqrt()))
}

/// `tr|ρ - M_n(ρ)|`, evaluated both from `γ±` and from the eigenvalues of
/// the explicit matrix. The two must agree within [`DUAL_PATH_TOL`].
pub fn q_g_direct_at(c: &CorrelationVector, n: &MeasurementDirection) -> Result<f64> {
    c.require_physical()?;
    let (minus, plus) = gamma_pair(c, n.squared())?;
    let closed = 2.0 * (minus + plus);
    let rho = bell_density(*c);
    let direct = trace_norm(&(rho - apply_measurement(&rho, n)))?;
    if (closed - direct).abs() > DUAL_PATH_TOL {
        return Err(CorrError::DualPathMismatch {
            quantity: "Q_G(n)",
            closed,
            direct,
        });
    }
    Ok(closed)
}

/// `Q_G = c₀`, reached by measuring along the axis of `c₊`.
pub fn q_g_closed(c: &CorrelationVector) -> Result<(f64, Axis)> {
    c.require_physical()?;
    let mags = order_magnitudes(c);
    Ok((mags.c_mid, mags.axis))
}

/// `M(ρ) = ¼(I⊗I + c_j σ_j⊗σ_j)` for the optimal axis `j`.
pub fn optimal_classical_state(c: &CorrelationVector) -> Result<HermitianOperator4> {
    let (_, axis) = q_g_closed(c)?;
    Ok(bell_density(c.restricted_to(axis)))
}

/// `C_G = c₊`.
pub fn c_g_closed(c: &CorrelationVector) -> Result<f64> {
    c.require_physical()?;
    Ok(order_magnitudes(c).c_plus)
}

/// `tr|M(ρ) - M(π_ρ)|` with the optimal measurement applied to the explicit
/// density matrix and to its product of marginals.
pub fn c_g_direct(c: &CorrelationVector) -> Result<f64> {
    let (_, axis) = q_g_closed(c)?;
    let n = MeasurementDirection::along(axis);
    let rho = bell_density(*c);
    let measured = apply_measurement(&rho, &n);
    let measured_product = apply_measurement(&product_of_marginals(&rho), &n);
    trace_norm(&(measured - measured_product))
}

pub(crate) fn t_g_from_magnitudes(m: &OrderedMagnitudes) -> f64 {
    0.5 * (m.c_plus + m.c_plus.max(m.c_mid + m.c_minus))
}

/// `T_G = ½[c₊ + max(c₊, c₀ + c₋)]`.
pub fn t_g_closed(c: &CorrelationVector) -> Result<f64> {
    c.require_physical()?;
    Ok(t_g_from_magnitudes(&order_magnitudes(c)))
}

/// `T_G = Σ_ij |λ_ij - ¼|`.
pub fn t_g_direct(c: &CorrelationVector) -> Result<f64> {
    c.require_physical()?;
    Ok(c.spectrum().iter().map(|l| (l - 0.25).abs()).sum())
}

pub fn geometric_triple(c: &CorrelationVector) -> Result<GeometricTriple> {
    c.require_physical()?;
    let mags = order_magnitudes(c);
    Ok(GeometricTriple {
        q_g: mags.c_mid,
        c_g: mags.c_plus,
        t_g: t_g_from_magnitudes(&mags),
        optimal_axis: mags.axis,
    })
}

/// Closed-form report for a physical state, checked against the
/// superadditivity and hierarchy relations before it is returned.
pub fn analyze(c: &CorrelationVector) -> Result<CorrelationReport> {
    c.require_physical()?;
    let report = CorrelationReport {
        c: *c,
        spectrum: c.spectrum(),
        entropic: entropic_triple(c)?,
        geometric: geometric_triple(c)?,
    };
    report.check_invariants()?;
    Ok(report)
}

/// [`analyze`] plus the matrix-level cross-checks of `Q_G`, `C_G`, `T_G`
/// and `T_E`.
pub fn analyze_verified(c: &CorrelationVector) -> Result<CorrelationReport> {
    let report = analyze(c)?;
    let g = &report.geometric;
    let n = MeasurementDirection::along(g.optimal_axis);
    let rho = bell_density(*c);
    let pairs = [
        ("Q_G", g.q_g, q_g_direct_at(c, &n)?),
        ("C_G", g.c_g, c_g_direct(c)?),
        ("T_G", g.t_g, t_g_direct(c)?),
        (
            "T_E",
            report.entropic.t_e,
            crate::entropic::mutual_information(&rho)?,
        ),
    ];
    for (quantity, closed, direct) in pairs {
        let tol = if quantity == "T_E" {
            1e-8
        } else {
            DUAL_PATH_TOL
        };
        if (closed - direct).abs() > tol {
            return Err(CorrError::DualPathMismatch {
                quantity,
                closed,
                direct,
            });
        }
    }
    Ok(report)
}

impl CorrelationReport {
    /// Superadditivity, the entropic and geometric hierarchies, entropic
    /// additivity and the range caps.
    pub fn check_invariants(&self) -> Result<()> {
        let EntropicTriple { q_e, c_e, t_e } = self.entropic;
        let GeometricTriple { q_g, c_g, t_g, .. } = self.geometric;
        let checks = [
            ("T_E = C_E + Q_E", (t_e - c_e - q_e).abs() <= 1e-10),
            ("T_G <= C_G + Q_G", t_g <= c_g + q_g + 1e-10),
            ("C_G + Q_G <= 2 T_G", c_g + q_g <= 2.0 * t_g + 1e-10),
            ("Q_G >= Q_E", q_g >= q_e - 1e-8),
            ("C_G >= C_E", c_g >= c_e - 1e-8),
            ("T_E >= C_E, Q_E", t_e >= c_e - 1e-10 && t_e >= q_e - 1e-10),
            ("T_G >= C_G, Q_G", t_g >= c_g.max(q_g) - 1e-10),
            ("C_G >= Q_G", c_g >= q_g - 1e-10),
            ("T_G <= 1.5", t_g <= T_G_MAX + 1e-12),
            ("T_E <= 2", t_e <= 2.0 + 1e-12),
        ];
        match checks.iter().find(|(_, ok)| !ok) {
            None => Ok(()),
            Some((name, _)) => Err(CorrError::InvariantViolated(format!(
                "report for {} violates {name}",
                self.c
            ))),
        }
    }
}
