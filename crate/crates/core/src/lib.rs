//! Two-kaon (two-qubit) dynamics built from the eight-vertex braid matrices
//! b±(φ): Yang-Baxterization, the unitary spectral family R̃(θ, φ), the
//! Hamiltonians H±(t), Bell-state and CP/strangeness algebra, entanglement
//! measures and K/K̄ oscillation phenomenology.
//!
//! Every 4×4 operator acts on the ordered basis (KK, KK̄, K̄K, K̄K̄).

pub mod braid;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod phenomenology;
pub mod states;

pub use braid::{BraidSpec, RhoReport, Sign, SpectralPoint};
pub use dynamics::HamiltonianFamily;
pub use error::{Error, Result};
pub use linalg::{Check, ComplexMatrix, ComplexVector, LinalgError};
pub use num_complex::Complex64;
pub use phenomenology::{Flavor, FlavorAmplitudes, KaonParams, OscillationRow};
pub use states::{BellQuartet, EigenRow, SingleKaonOp, TwoKaonState};
