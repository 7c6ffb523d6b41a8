//! Exact bound-state spectrum of an anti-symmetric square well and barrier
//! confined between two rigid walls.
//!
//! The potential is `-v0` on `[-b, 0]`, `+v0` on `(0, b]`, zero elsewhere
//! inside `(-a, a)` and infinite at `|x| >= a`. Units are fixed to
//! `2m = 1`, `hbar = 1`, so the Schrödinger equation reads
//! `-psi'' + V psi = E psi`.
//!
//! Besides the generic transcendental quantization condition the crate
//! handles the two seam cases that generic solvers miss: a zero-energy
//! eigenstate (linear outside the block) and a barrier-top eigenstate
//! (linear inside the barrier). An independent finite-difference oracle
//! cross-checks every analytic spectrum.

pub mod characteristic;
pub mod error;
pub mod exec;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod reference;
pub mod rootfind;
pub mod spectrum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{
    potential_at, wavenumbers, Eigenstate, EnergyBranch, PiecewiseWavefunction, PotentialGeometry,
    PotentialValue, Segment, SegmentBasis, SpectrumResult, StateKind, WaveParams, Wavenumber,
};
pub use spectrum::{
    solve_spectrum, DiagnosticsReport, SpecialCondition, SpecialRoot, SpectrumRequest, StateSelection,
};
