//! Exact diagonalization of the periodic spin-½ XXZ ring and the Bell-diagonal
//! description of its nearest-neighbour ground-state correlations.

pub mod chain;
pub mod error;
pub mod ground;
pub mod solver;
pub mod sweep;

pub use chain::{build_sector_hamiltonian, ChainSpec, SectorBasis, SectorHamiltonian};
pub use error::{Result, XxzError};
pub use ground::{bell_coordinates, ground_space, hellmann_feynman_check, GroundStateObservables};
pub use solver::SolverOptions;
pub use sweep::{
    detect_transitions, sweep_delta, Sweep, Transition, TransitionKind, TransitionOptions,
};
