//! Entropic (mutual-information) correlations, in bits.

use serde::Serialize;

use crate::error::{CorrError, Result};
use crate::operator::{apply_measurement, hermitian2_eigenvalues, HermitianOperator4, Matrix2};
use crate::oracle::{minimize_on_sphere, SphereGrid};
use crate::state::{bell_density, order_magnitudes, CorrelationVector};

/// Eigenvalues in `[-1e-12, 0)` are treated as exact zeros.
pub const EIGENVALUE_CLIP: f64 = 1e-12;

/// `(Q_E, C_E, T_E)` with `T_E = Q_E + C_E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropicTriple {
    pub q_e: f64,
    pub c_e: f64,
    pub t_e: f64,
}

/// `x log₂ x` with `0 log 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits of a spectrum, after clipping roundoff negatives.
pub fn entropy_bits(spectrum: &[f64]) -> f64 {
    -spectrum
        .iter()
        .map(|&v| {
            if (-EIGENVALUE_CLIP..0.0).contains(&v) {
                0.0
            } else {
                v
            }
        })
        .map(xlog2x)
        .sum::<f64>()
}

fn entropy2(m: &Matrix2) -> f64 {
    entropy_bits(&hermitian2_eigenvalues(m))
}

/// `S(ρ_a) + S(ρ_b) - S(ρ)` in bits.
pub fn mutual_information(rho: &HermitianOperator4) -> Result<f64> {
    let joint = entropy_bits(&rho.eigenvalues()?);
    Ok(entropy2(&rho.partial_trace_b()) + entropy2(&rho.partial_trace_a()) - joint)
}

/// `log₂[(1-x)^{(1-x)/2} (1+x)^{(1+x)/2}]`, the classical correlation as a
/// function of the largest correlation magnitude.
fn binary_classical(x: f64) -> f64 {
    0.5 * (xlog2x(1.0 - x) + xlog2x(1.0 + x))
}

pub fn c_e_closed(c: &CorrelationVector) -> Result<f64> {
    c.require_physical()?;
    Ok(binary_classical(order_magnitudes(c).c_plus.min(1.0)))
}

/// `T_E = 2 + Σ λ_ij log₂ λ_ij`.
pub fn t_e_closed(c: &CorrelationVector) -> Result<f64> {
    c.require_physical()?;
    Ok(2.0 - entropy_bits(&c.spectrum()))
}

pub fn q_e_closed(c: &CorrelationVector) -> Result<f64> {
    Ok(t_e_closed(c)? - c_e_closed(c)?)
}

pub fn entropic_triple(c: &CorrelationVector) -> Result<EntropicTriple> {
    let t_e = t_e_closed(c)?;
    let c_e = c_e_closed(c)?;
    Ok(EntropicTriple {
        q_e: t_e - c_e,
        c_e,
        t_e,
    })
}

/// Entropic discord by direct search: `min_n |I(ρ) - I(M_n(ρ))|` over a
/// 1° hemisphere grid followed by local refinement.
pub fn q_e_direct(c: &CorrelationVector) -> Result<f64> {
    q_e_direct_with(c, SphereGrid::one_degree())
}

pub fn q_e_direct_with(c: &CorrelationVector, grid: SphereGrid) -> Result<f64> {
    c.require_physical()?;
    let rho = bell_density(*c);
    let total = mutual_information(&rho)?;
    let best = minimize_on_sphere(grid, |n| {
        let measured = apply_measurement(&rho, n);
        Ok((total - mutual_information(&measured)?).abs())
    })?;
    Ok(best.value)
}

/// `C_E` expressed through `C_G ∈ [0, 1]`.
pub fn c_e_from_c_g(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(CorrError::OutOfDomain {
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(binary_classical(x))
}

/// `dC_E/dC_G = log₂ √((1+x)/(1-x))` on the open interval `(0, 1)`.
pub fn dce_dcg(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(CorrError::OutOfDomain {
            value: x,
            domain: "(0, 1)",
        });
    }
    Ok(0.5 * ((1.0 + x) / (1.0 - x)).log2())
}
