//! Rotation vectors, Poisson-bracket invariants and the Hamiltonian dynamics behind them.
//!
//! Coordinates on `T^{2n}` and `T*Tⁿ` are ordered `(p₁..pₙ, q₁..qₙ)`; the
//! symplectic form is a constant antisymmetric matrix `Ω` with
//! `ω(u, w) = uᵀΩw`. Vector fields follow `i_{sgrad α} ω = α` and
//! `sgrad F = sgrad(−dF)`.

pub mod dynamics;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod measures;
pub mod optimize;
pub mod pbracket;
pub mod profile;
pub mod region;
pub mod suspension;
pub mod trig;

pub use dynamics::{
    flow, integrate, integrate_from, sgrad, sgrad_form, time_one_map, IntegrationOptions, Method,
    OrbitCursor, Trajectory, VectorFieldSpec,
};
pub use error::{Error, Result};
pub use fields::{Bump, HamiltonianSpec};
pub use geometry::{
    eval_form, flux_of_translation, pair, wrap, ClosedOneForm, CohomologyClass, PhasePoint,
    PhaseSpace, RotationVector, SpaceKind, SymplecticStructure,
};
pub use measures::{
    average, empirical_measure, extremal_orbit_search, invariance_defect, rotation_pairing,
    rotation_vector, seed_grid, ConvergenceReport, EmpiricalMeasure, Observable, SearchOptions,
    SearchOutcome, SeedLayout,
};
pub use optimize::{nelder_mead, NelderMeadOptions};
pub use pbracket::{
    averaged_bracket, bracket, chord_search, pb_upper_bound, sup_norm, Chord, ChordOptions,
    ChordOutcome, FFamily, PbOptions, PbProblem, PbResult, SupNorm,
};
pub use profile::{make_pinned_profile, make_pinned_profile_with, PinnedProfile, ProfileBasis};
pub use region::RegionSpec;
pub use suspension::{
    rotation_pairing_time_one, shift_equivariance_check, stab, step7_correspondence_check,
    suspension_flow, time_one_extremal_search, ExtendedPoint, SuspendedHamiltonian,
    TimeOnePairing,
};
pub use trig::{TrigSeries, TrigTerm};
