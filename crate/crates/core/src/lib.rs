//! Quantum, classical and total correlations of two-qubit Bell-diagonal
//! states, in an entropic (relative entropy) and a geometric (trace norm)
//! flavour.
//!
//! Every closed form has a second, independent route through explicit 4×4
//! density operators or a brute-force minimization, see [`oracle`] and
//! [`audit`].

pub mod audit;
pub mod entropic;
pub mod error;
pub mod families;
pub mod geometric;
pub mod operator;
pub mod oracle;
pub mod sampling;
pub mod state;

pub use entropic::{entropic_triple, EntropicTriple};
pub use error::{CorrError, Result};
pub use geometric::{
    analyze, analyze_verified, geometric_triple, CorrelationReport, GeometricTriple,
};
pub use operator::HermitianOperator4;
pub use sampling::PhysicalSampler;
pub use state::{bell_density, Axis, CorrelationVector, MeasurementDirection};
