//! Optimal average fidelities for nonlinear single-qubit transformations.
//!
//! The library evaluates how well piecewise rotations, partial
//! orthogonal-complement maps and partial polar-shift maps of the Bloch
//! sphere can be approximated, either by measure-and-prepare strategies
//! or by a unitary acting on the qubit plus an ancilla. The averaged
//! fidelity of the ancilla scheme is an affine functional of three Gram
//! parameters of the channel, which makes the optimum computable in
//! closed form once the functional's coefficients are extracted.

pub mod bloch;
pub mod channels;
pub mod error;
pub mod integrate;
pub mod optimize;
pub mod scenarios;

pub use bloch::{
    density_of, fidelity, orthogonal_state, rotate_phase, state_from_angles, BlochAngles, DensityMatrix, PureState,
    C64,
};
pub use channels::{
    buzek_unot, dilate, dilate_with_overlap, gram_of, prep_rho1, prep_rho2, prep_rho3, prep_sigma1, prep_sigma2,
    quantum_output, AncillaVectors, GramParams,
};
pub use error::{Error, Result};
pub use integrate::{
    averaged_quantum_fidelity, extract_functional, general_coefficients, measurement_fidelity, orthog_coefficients,
    sphere_average, FidelityFunctional, MapPiece, MeasScheme, MeasurementEvaluator, QuadratureSpec, TargetMap,
};
pub use optimize::{brute_force, find_crossover, maximize, optimal_chi, Optimum, Regime};
pub use scenarios::{
    build_map, crossover_report, run, sweep, Crossover, CurvePoint, Family, ScenarioRequest, Scheme, SweepParameter,
};
