//! Rotational special Weingarten surfaces of minimal type in `S²×ℝ` and
//! `H²×ℝ`: profile-curve integration, structural classification, and export.
//!
//! The surfaces satisfy `H = f(H²−K_e)` for an elliptic `f` with `f(0) = 0`.
//! Every complete rotational example is a horizontal slice, the vertical
//! cylinder `{φ = π/2}` (sphere only), a catenoidal surface (hyperbolic
//! base), or an unduloidal surface (spherical base); this crate constructs
//! them by shooting the profile ODE from a symmetry point and verifies the
//! structure it finds.

pub mod ambient;
pub mod classify;
pub mod config;
pub mod elliptic;
pub mod mesh;
mod ode;
pub mod profile;
pub mod report;

pub use ambient::{
    curvatures, normal_vector, profile_k1, solve_phi_pp, weingarten_residual, Ambient,
    CurvatureSample, ProfileState,
};
pub use elliptic::{EllipticFunction, EllipticityReport, GLimits};
pub use profile::{
    gate_check, integrate_profile, integrate_profile_with, reflect_profile, solve_initial_phi_pp,
    BackwardMode, Event, EventKind, GateCheck, Profile, ShootingSpec, Termination,
};
