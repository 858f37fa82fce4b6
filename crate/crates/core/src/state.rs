//! Bell-diagonal states parameterized by their correlation vector.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CorrError, Result};
use crate::operator::{HermitianOperator4, IDENTITY2, PAULI};

/// Slack on `λ_ij ≥ 0` absorbing roundoff on the faces of the tetrahedron.
pub const PHYSICALITY_TOL: f64 = 1e-12;
pub const UNIT_NORM_TOL: f64 = 1e-12;
pub const SIMPLEX_TOL: f64 = 1e-10;

const LAMBDA_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// One of the three Pauli axes. `number()` is the 1-based index used in
/// reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i % 3]
    }

    /// Zero-based offset.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }

    /// The axis `k` steps further along, cyclically.
    pub fn shifted(self, k: usize) -> Axis {
        Self::from_index(self.index() + k)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// `c = (⟨σ₁⊗σ₁⟩, ⟨σ₂⊗σ₂⟩, ⟨σ₃⊗σ₃⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationVector {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl CorrelationVector {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    pub const fn from_array(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    pub fn components(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn get(&self, axis: Axis) -> f64 {
        self.components()[axis.index()]
    }

    /// Eigenvalues `(λ₀₀, λ₀₁, λ₁₀, λ₁₁)` of the Bell-diagonal density operator.
    pub fn spectrum(&self) -> [f64; 4] {
        spectrum_bell(self)
    }

    pub fn is_physical(&self) -> bool {
        is_physical(self)
    }

    /// Errors with the most negative eigenvalue when the state is unphysical.
    pub fn require_physical(&self) -> Result<()> {
        let spectrum = self.spectrum();
        let (k, &value) = spectrum
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("four eigenvalues");
        if value >= -PHYSICALITY_TOL {
            Ok(())
        } else {
            Err(CorrError::Unphysical {
                label: LAMBDA_LABELS[k],
                value,
                spectrum,
            })
        }
    }

    /// Keeps only the component along `axis`.
    pub fn restricted_to(&self, axis: Axis) -> Self {
        let mut c = [0.0; 3];
        c[axis.index()] = self.get(axis);
        Self::from_array(c)
    }
}

impl fmt::Display for CorrelationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

/// Parses `c1,c2,c3` (whitespace around components allowed, optional
/// surrounding parentheses).
impl FromStr for CorrelationVector {
    type Err = CorrError;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(trimmed);
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CorrError::InvalidParameter(format!(
                "expected three comma-separated components, got {:?}",
                s
            )));
        }
        let mut c = [0.0; 3];
        for (slot, part) in c.iter_mut().zip(&parts) {
            let v: f64 = part
                .parse()
                .map_err(|_| CorrError::InvalidParameter(format!("not a number: {part:?}")))?;
            if !v.is_finite() {
                return Err(CorrError::InvalidParameter(format!(
                    "non-finite component {part:?}"
                )));
            }
            *slot = v;
        }
        Ok(Self::from_array(c))
    }
}

/// `(c₊, c₀, c₋)`: the magnitudes `|c_i|` sorted in descending order, with
/// the axis carrying `c₊` (smallest index on ties).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderedMagnitudes {
    pub c_plus: f64,
    pub c_mid: f64,
    pub c_minus: f64,
    pub axis: Axis,
}

/// Unit vector `n` defining the projectors `Π± = (I ± n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementDirection {
    n: [f64; 3],
}

impl MeasurementDirection {
    /// Accepts `n` only if `|‖n‖ - 1| ≤ 1e-12`.
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_NORM_TOL || !norm.is_finite() {
            return Err(CorrError::NotUnitVector { norm });
        }
        Ok(Self { n })
    }

    /// Scales any nonzero finite vector to unit length.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(CorrError::NotUnitVector { norm });
        }
        Ok(Self {
            n: v.map(|x| x / norm),
        })
    }

    pub fn along(axis: Axis) -> Self {
        let mut n = [0.0; 3];
        n[axis.index()] = 1.0;
        Self { n }
    }

    /// Polar angle `theta` from the z axis, azimuth `phi` from x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            n: [st * cp, st * sp, ct],
        }
    }

    /// The upper-octant direction with `n_i = √u_i`.
    pub fn from_simplex(u: [f64; 3]) -> Result<Self> {
        check_simplex(&u)?;
        Self::normalized(u.map(|x| x.max(0.0).sqrt()))
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    /// `u = (n₁², n₂², n₃²)`, a point on the probability simplex.
    pub fn squared(&self) -> [f64; 3] {
        self.n.map(|x| x * x)
    }
}

/// `Σ u_i = 1` and `u_i ≥ 0`, both within `1e-10`.
pub fn check_simplex(u: &[f64; 3]) -> Result<()> {
    let sum: f64 = u.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL || u.iter().any(|&x| x < -SIMPLEX_TOL || !x.is_finite()) {
        return Err(CorrError::OffSimplex { u: *u });
    }
    Ok(())
}

/// `ρ = ¼[I⊗I + Σ c_i σ_i⊗σ_i]`. Unphysical inputs are accepted.
pub fn bell_density(c: CorrelationVector) -> HermitianOperator4 {
    let mut rho = HermitianOperator4::kron(&IDENTITY2, &IDENTITY2);
    for (k, ck) in c.components().into_iter().enumerate() {
        if ck != 0.0 {
            rho = rho + HermitianOperator4::kron(&PAULI[k], &PAULI[k]) * ck;
        }
    }
    rho * 0.25
}

/// `λ_ij = ¼[1 + (-1)^i c₁ - (-1)^{i+j} c₂ + (-1)^j c₃]` ordered
/// `(λ₀₀, λ₀₁, λ₁₀, λ₁₁)`.
pub fn spectrum_bell(c: &CorrelationVector) -> [f64; 4] {
    let CorrelationVector { c1, c2, c3 } = *c;
    [
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 - c1 - c2 - c3),
    ]
}

pub fn is_physical(c: &CorrelationVector) -> bool {
    c.components().iter().all(|x| x.is_finite())
        && spectrum_bell(c).iter().all(|&l| l >= -PHYSICALITY_TOL)
}

pub fn order_magnitudes(c: &CorrelationVector) -> OrderedMagnitudes {
    let mags = c.components().map(f64::abs);
    // Stable sort keeps the smallest index first among equal magnitudes.
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]));
    OrderedMagnitudes {
        c_plus: mags[idx[0]],
        c_mid: mags[idx[1]],
        c_minus: mags[idx[2]],
        axis: Axis::from_index(idx[0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_part(m: &HermitianOperator4) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m.entry(i, j).re;
            }
        }
        out
    }

    #[test]
    fn identity_at_origin() {
        let rho = bell_density(CorrelationVector::new(0.0, 0.0, 0.0));
        assert!(rho.max_abs_diff(&HermitianOperator4::maximally_mixed()) == 0.0);
    }

    #[test]
    fn bell_vertex_is_pure() {
        let c = CorrelationVector::new(1.0, -1.0, 1.0);
        assert_eq!(spectrum_bell(&c), [1.0, 0.0, 0.0, 0.0]);
        let rho = bell_density(c);
        let ev = rho.eigenvalues().unwrap();
        assert!((ev[3] - 1.0).abs() < 1e-14 && ev[..3].iter().all(|x| x.abs() < 1e-14));
        // Projector onto Φ⁺ = (|00⟩ + |11⟩)/√2.
        let m = real_part(&rho);
        assert!((m[0][0] - 0.5).abs() < 1e-15 && (m[0][3] - 0.5).abs() < 1e-15);
        assert!((m[3][3] - 0.5).abs() < 1e-15 && m[1][1].abs() < 1e-15);
    }

    #[test]
    fn generic_state_entries_and_spectrum() {
        let c = CorrelationVector::new(0.5, -0.4, 0.3);
        let m = real_part(&bell_density(c));
        let diag = [m[0][0], m[1][1], m[2][2], m[3][3]];
        for (got, want) in diag.iter().zip([0.325, 0.175, 0.175, 0.325]) {
            assert!((got - want).abs() < 1e-15);
        }
        // σxσx + σyσy couple |00⟩↔|11⟩ with (c1 - c2)/4 and |01⟩↔|10⟩ with (c1 + c2)/4.
        assert!((m[0][3] - 0.225).abs() < 1e-15);
        assert!((m[1][2] - 0.025).abs() < 1e-15);
        let lam = spectrum_bell(&c);
        for (got, want) in lam.iter().zip([0.55, 0.20, 0.10, 0.15]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn physicality_examples() {
        assert!(is_physical(&CorrelationVector::new(0.0, 0.0, 0.0)));
        assert!(is_physical(&CorrelationVector::new(0.5, -0.4, 0.3)));
        let bad = CorrelationVector::new(0.5, 0.4, 0.3);
        assert!(!is_physical(&bad));
        match bad.require_physical() {
            Err(CorrError::Unphysical { label, value, .. }) => {
                assert_eq!(label, "11");
                assert!((value + 0.05).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tetrahedron_vertices_are_physical() {
        for v in [
            [1.0, -1.0, 1.0],
            [-1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0],
            [-1.0, -1.0, -1.0],
        ] {
            assert!(is_physical(&CorrelationVector::from_array(v)));
        }
        assert!(!is_physical(&CorrelationVector::new(1.0, 1.0, 1.0)));
    }

    #[test]
    fn ordering_and_ties() {
        let o = order_magnitudes(&CorrelationVector::new(0.5, -0.4, 0.3));
        assert_eq!(
            (o.c_plus, o.c_mid, o.c_minus, o.axis),
            (0.5, 0.4, 0.3, Axis::X)
        );
        let o = order_magnitudes(&CorrelationVector::new(-0.8, -0.8, -0.8));
        assert_eq!(
            (o.c_plus, o.c_mid, o.c_minus, o.axis),
            (0.8, 0.8, 0.8, Axis::X)
        );
        let o = order_magnitudes(&CorrelationVector::new(0.0, 0.9, -0.9));
        assert_eq!(
            (o.c_plus, o.c_mid, o.c_minus, o.axis),
            (0.9, 0.9, 0.0, Axis::Y)
        );
        assert_eq!(o.axis.number(), 2);
    }

    #[test]
    fn direction_validation() {
        assert!(MeasurementDirection::new([1.0, 0.0, 0.0]).is_ok());
        assert!(matches!(
            MeasurementDirection::new([1.0, 1.0, 0.0]),
            Err(CorrError::NotUnitVector { .. })
        ));
        assert!(MeasurementDirection::normalized([0.0; 3]).is_err());
        let n = MeasurementDirection::from_angles(0.7, 2.1);
        let u = n.squared();
        assert!((u.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parse_vector() {
        let c: CorrelationVector = "0.5, -0.4,0.3".parse().unwrap();
        assert_eq!(c, CorrelationVector::new(0.5, -0.4, 0.3));
        let c: CorrelationVector = "(1,-1,1)".parse().unwrap();
        assert_eq!(c, CorrelationVector::new(1.0, -1.0, 1.0));
        assert!("1,2".parse::<CorrelationVector>().is_err());
        assert!("a,b,c".parse::<CorrelationVector>().is_err());
        assert!("nan,0,0".parse::<CorrelationVector>().is_err());
    }
}
