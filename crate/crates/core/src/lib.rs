//! Two ways to produce the output distribution of the ideal HHL
//! linear-systems algorithm for `A x = b`, with `A` Hermitian of size `2^n`:
//!
//! - [`emulator`] writes the post-algorithm (b, ancilla) state down directly
//!   from the eigendecomposition of `A`. Its cost depends on `N` only.
//! - [`statevec`] replays the full circuit (state preparation, phase
//!   estimation, controlled eigenvalue inversion, uncomputation) gate by gate
//!   on a `2^(1+m+n)` state vector, so its cost grows exponentially with the
//!   clock width `m` as well.
//!
//! Both feed seeded shot sampling ([`histogram`]) and the estimators in
//! [`analysis`]. All numerics are generic over [`Real`] (`f32`, `f64`); the
//! `*64` aliases below fix the double-precision instantiation used by the
//! tooling.
//!
//! ```
//! use hhl_core::{builtin, prepare_emulated_state, SpectralData64, System64};
//!
//! let sys: System64 = builtin("exp1").unwrap();
//! let spec = SpectralData64::analyze(&sys, None).unwrap();
//! let state = prepare_emulated_state(&sys, &spec, false).unwrap();
//! let x = state.postselect_ancilla().unwrap();
//! assert!((x[1] - 0.9).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod eigen;
pub mod emulator;
pub mod error;
pub mod histogram;
pub mod instance;
pub mod linsys;
pub mod matrix;
pub mod random;
pub mod ratio;
pub mod scalar;
pub mod statevec;

pub use analysis::{aggregate_estimates, estimate_x, histogram_mae, l1_error, success_rate, SolutionEstimate};
pub use eigen::{hermitian_eigen, HermitianEigen};
pub use emulator::{classical_solution, prepare_emulated_state, solution_distribution, EmulatedState};
pub use error::{HhlError, Result};
pub use histogram::{outcome_label, ShotHistogram};
pub use instance::{builtin, format_instance, parse_instance, BUILTIN_NAMES};
pub use linsys::{
    clock_register_plan, condition_number, eigendecompose, expansion_coefficients, rotation_constant,
    validate_system, ClockPlan, HermitianSystem, SpectralData,
};
pub use matrix::CMatrix;
pub use scalar::{Real, C};
pub use statevec::{measure_all, measure_all_on_stream, run_hhl_circuit, GateOp, RegisterLayout, StateVector};

pub type System64 = HermitianSystem<f64>;
pub type SpectralData64 = SpectralData<f64>;
pub type EmulatedState64 = EmulatedState<f64>;
pub type StateVector64 = StateVector<f64>;
pub type CMatrix64 = CMatrix<f64>;
pub type SolutionEstimate64 = SolutionEstimate<f64>;
pub type C64 = C<f64>;

pub type System32 = HermitianSystem<f32>;
pub type SpectralData32 = SpectralData<f32>;
pub type EmulatedState32 = EmulatedState<f32>;
pub type StateVector32 = StateVector<f32>;
