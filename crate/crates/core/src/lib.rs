//! Quantum states and spin-rotation entanglement of a levitated
//! symmetric-top nanodiamond hosting a single NV⁻ center in a static
//! magnetic field.
//!
//! The crate builds truncated bases in the body-fixed and space-fixed
//! frames, assembles the spin-rotor Hamiltonian (all operators are H/ħ in
//! rad/s), diagonalizes it exactly, and evaluates entanglement measures
//! (entropy, negativity, fidelity) of ground, excited, and thermal states.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

pub mod angular;
pub mod basis;
pub mod error;
pub mod hamiltonian;
pub mod params;
pub mod spectra;
pub mod states;

pub use basis::{BasisSet, Frame, Ket};
pub use error::{Error, Result};
pub use hamiltonian::{FieldHamiltonian, HermitianOperator};
pub use params::SystemParams;
pub use spectra::{LevelTable, Spectrum};
pub use states::DensityMatrix;

/// Scalar type the whole crate is generic over.
///
/// `f64` is what the CLI and the acceptance suite use; `f32` works for
/// quick scans where truncation error dominates rounding anyway.
pub trait Real: RealField + FromPrimitive + ToPrimitive + Copy + Send + Sync {}
impl Real for f32 {}
impl Real for f64 {}

/// Dense complex matrix over the crate scalar.
pub type CMatrix<T> = nalgebra::DMatrix<num_complex::Complex<T>>;
/// Dense complex column vector over the crate scalar.
pub type CVector<T> = nalgebra::DVector<num_complex::Complex<T>>;

/// Numerical tolerances in this crate are stated for `f64`; for other
/// scalars the same tolerance is applied at the equivalent number of ulps.
pub(crate) fn scaled_tol<T: Real>(tol_f64: f64) -> T {
    T::default_epsilon() * T::from_f64(tol_f64 / f64::EPSILON).unwrap()
}

/// Double-precision aliases for the main types.
pub type HermitianOperator64 = HermitianOperator<f64>;
pub type FieldHamiltonian64 = FieldHamiltonian<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type LevelTable64 = LevelTable<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type CVector64 = CVector<f64>;
