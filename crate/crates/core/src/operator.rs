//! Dense 4×4 Hermitian operators on two qubits.
//!
//! Basis order is |00⟩, |01⟩, |10⟩, |11⟩ with the first tensor factor being
//! subsystem `a`, the party that gets measured.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{CorrError, Result};
use crate::state::MeasurementDirection;

pub type Matrix4 = [[Complex64; 4]; 4];
pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Maximum asymmetry `|A_ij - conj(A_ji)|` accepted by [`HermitianOperator4::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// (relative to `max(1, ‖A‖_F)`).
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Eigenvalues smaller than this in magnitude count as zero in the trace norm.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

pub(crate) const PAULI: [Matrix2; 3] = [
    [[ZERO, ONE], [ONE, ZERO]],
    [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
];
pub(crate) const IDENTITY2: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];

/// A 4×4 complex Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOperator4 {
    m: Matrix4,
}

/// Spectral decomposition: ascending eigenvalues and the matching
/// eigenvectors stored as columns.
#[derive(Debug, Clone, Copy)]
pub struct Eigen4 {
    pub values: [f64; 4],
    pub vectors: Matrix4,
}

impl Eigen4 {
    /// Rebuilds `V Λ V†`.
    pub fn reconstruct(&self) -> HermitianOperator4 {
        let mut m = [[ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..4)
                    .map(|k| self.vectors[i][k] * self.values[k] * self.vectors[j][k].conj())
                    .sum();
            }
        }
        HermitianOperator4 { m }.symmetrized()
    }
}

impl HermitianOperator4 {
    /// Validates Hermiticity within [`HERMITIAN_TOL`]; the stored matrix is
    /// the exact Hermitian part of `m`.
    pub fn new(m: Matrix4) -> Result<Self> {
        let asymmetry = max_asymmetry(&m);
        if !(asymmetry <= HERMITIAN_TOL) {
            return Err(CorrError::NotHermitian { asymmetry });
        }
        Ok(Self { m }.symmetrized())
    }

    pub fn zero() -> Self {
        Self { m: [[ZERO; 4]; 4] }
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for (k, v) in d.into_iter().enumerate() {
            m[k][k] = Complex64::new(v, 0.0);
        }
        Self { m }
    }

    /// The maximally mixed state `I/4`.
    pub fn maximally_mixed() -> Self {
        Self::from_real_diagonal([0.25; 4])
    }

    /// `a ⊗ b` for Hermitian 2×2 factors.
    pub(crate) fn kron(a: &Matrix2, b: &Matrix2) -> Self {
        Self { m: kron(a, b) }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> &Matrix4 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|k| self.m[k][k].re).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                max = max.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        max
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Trace one within `1e-12` and spectrum bounded below by `-1e-10`.
    pub fn is_density_operator(&self) -> bool {
        (self.trace() - 1.0).abs() <= 1e-12
            && self
                .eigenvalues()
                .map(|ev| ev[0] >= -1e-10)
                .unwrap_or(false)
    }

    pub fn eigen(&self) -> Result<Eigen4> {
        jacobi(self)
    }

    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        self.eigen().map(|e| e.values)
    }

    /// Schatten 1-norm: the sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .iter()
            .filter(|v| v.abs() >= ZERO_EIGENVALUE_TOL)
            .map(|v| v.abs())
            .sum())
    }

    /// `tr_b`: the reduced operator of subsystem `a`.
    pub fn partial_trace_b(&self) -> Matrix2 {
        let mut r = [[ZERO; 2]; 2];
        for (a, row) in r.iter_mut().enumerate() {
            for (a2, entry) in row.iter_mut().enumerate() {
                *entry = (0..2).map(|b| self.m[2 * a + b][2 * a2 + b]).sum();
            }
        }
        r
    }

    /// `tr_a`: the reduced operator of subsystem `b`.
    pub fn partial_trace_a(&self) -> Matrix2 {
        let mut r = [[ZERO; 2]; 2];
        for (b, row) in r.iter_mut().enumerate() {
            for (b2, entry) in row.iter_mut().enumerate() {
                *entry = (0..2).map(|a| self.m[2 * a + b][2 * a + b2]).sum();
            }
        }
        r
    }

    fn symmetrized(mut self) -> Self {
        for i in 0..4 {
            self.m[i][i] = Complex64::new(self.m[i][i].re, 0.0);
            for j in (i + 1)..4 {
                let avg = 0.5 * (self.m[i][j] + self.m[j][i].conj());
                self.m[i][j] = avg;
                self.m[j][i] = avg.conj();
            }
        }
        self
    }
}

impl Add for HermitianOperator4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.m[i][j] += rhs.m[i][j];
            }
        }
        self
    }
}

impl Sub for HermitianOperator4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.m[i][j] -= rhs.m[i][j];
            }
        }
        self
    }
}

impl Mul<f64> for HermitianOperator4 {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for z in self.m.iter_mut().flatten() {
            *z *= rhs;
        }
        self
    }
}

/// Ascending real spectrum of a Hermitian 4×4 matrix (cyclic Jacobi).
pub fn hermitian_eigenvalues(a: &HermitianOperator4) -> Result<[f64; 4]> {
    a.eigenvalues()
}

/// `tr|A|` for Hermitian `A`.
pub fn trace_norm(a: &HermitianOperator4) -> Result<f64> {
    a.trace_norm()
}

/// Non-selective projective measurement of subsystem `a` along `n`:
/// `Σ_k (Π_k ⊗ I) ρ (Π_k ⊗ I)` with `Π_± = (I ± n·σ)/2`.
pub fn apply_measurement(rho: &HermitianOperator4, n: &MeasurementDirection) -> HermitianOperator4 {
    let [n1, n2, n3] = n.components();
    let mut out = [[ZERO; 4]; 4];
    for sign in [1.0, -1.0] {
        let mut proj = [[ZERO; 2]; 2];
        for (r, row) in proj.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                let ndotsigma = PAULI[0][r][c] * n1 + PAULI[1][r][c] * n2 + PAULI[2][r][c] * n3;
                *entry = 0.5 * (IDENTITY2[r][c] + ndotsigma * sign);
            }
        }
        let p = kron(&proj, &IDENTITY2);
        let term = matmul(&matmul(&p, &rho.m), &p);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += term[i][j];
            }
        }
    }
    HermitianOperator4 { m: out }.symmetrized()
}

/// `tr_b(ρ) ⊗ tr_a(ρ)`.
pub fn product_of_marginals(rho: &HermitianOperator4) -> HermitianOperator4 {
    HermitianOperator4::kron(&rho.partial_trace_b(), &rho.partial_trace_a()).symmetrized()
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn hermitian2_eigenvalues(m: &Matrix2) -> [f64; 2] {
    let mean = 0.5 * (m[0][0].re + m[1][1].re);
    let half_diff = 0.5 * (m[0][0].re - m[1][1].re);
    let radius = half_diff.hypot(m[0][1].norm());
    [mean - radius, mean + radius]
}

fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i / 2][j / 2] * b[i % 2][j % 2];
        }
    }
    m
}

fn matmul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut m = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

fn max_asymmetry(m: &Matrix4) -> f64 {
    let mut max = 0.0f64;
    for i in 0..4 {
        for j in i..4 {
            max = max.max((m[i][j] - m[j][i].conj()).norm());
        }
    }
    max
}

fn off_diagonal_norm(m: &Matrix4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += m[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of `a_pq`
/// and then applies a real Givens rotation that annihilates it.
fn jacobi(op: &HermitianOperator4) -> Result<Eigen4> {
    let mut a = op.m;
    let mut v = [[ZERO; 4]; 4];
    for (k, row) in v.iter_mut().enumerate() {
        row[k] = ONE;
    }
    let tol = JACOBI_TOL * op.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < tol {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotation restricted to the (p, q) plane.
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = -s * phase.conj();
                let g_qq = c * phase.conj();

                for row in a.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * g_pp + xq * g_qp;
                    row[q] = xp * g_pq + xq * g_qq;
                }
                for k in 0..4 {
                    let (xp, xq) = (a[p][k], a[q][k]);
                    a[p][k] = g_pp.conj() * xp + g_qp.conj() * xq;
                    a[q][k] = g_pq.conj() * xp + g_qq.conj() * xq;
                }
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                a[p][p] = Complex64::new(a[p][p].re, 0.0);
                a[q][q] = Complex64::new(a[q][q].re, 0.0);

                for row in v.iter_mut() {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = xp * g_pp + xq * g_qp;
                    row[q] = xp * g_pq + xq * g_qq;
                }
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm >= tol {
            return Err(CorrError::NoConvergence {
                sweeps: JACOBI_MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    let mut values = [0.0; 4];
    let mut vectors = [[ZERO; 4]; 4];
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a[src][src].re;
        for row in 0..4 {
            vectors[row][dst] = v[row][src];
        }
    }
    Ok(Eigen4 { values, vectors })
}
