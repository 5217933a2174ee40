//! Product-space geometry for rotational surfaces in `S²×ℝ` and `H²×ℝ`.
//!
//! The base space is selected by `ε`: `+1` for the round sphere, `−1` for the
//! hyperbolic plane (hyperboloid model). `S_ε`, `C_ε`, `η_ε` are the
//! circular/hyperbolic sine, cosine and cotangent; a profile curve
//! `s ↦ (φ(s), t(s))` is parameterized by arc length, and the Weingarten
//! relation couples `φ''` to `(φ, t')` through the strictly monotone `ḡ`.

use crate::elliptic::EllipticFunction;
use serde::{Deserialize, Serialize};

/// Distance from a domain endpoint below which `eta` refuses to evaluate.
///
/// Profiles provably never reach the rotation axis, so getting this close is
/// an integration fault, not a value to clamp.
pub const POLE_MARGIN: f64 = 1e-9;

/// Base-space selector: sphere (`ε = +1`) or hyperbolic plane (`ε = −1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    Sphere,
    Hyperbolic,
}

impl Ambient {
    pub fn from_epsilon(epsilon: i32) -> Option<Ambient> {
        match epsilon {
            1 => Some(Ambient::Sphere),
            -1 => Some(Ambient::Hyperbolic),
            _ => None,
        }
    }

    pub fn epsilon(self) -> i32 {
        match self {
            Ambient::Sphere => 1,
            Ambient::Hyperbolic => -1,
        }
    }

    /// Open domain of the radial coordinate: `(0, π)` or `(0, +∞)`.
    pub fn phi_domain(self) -> (f64, f64) {
        match self {
            Ambient::Sphere => (0.0, std::f64::consts::PI),
            Ambient::Hyperbolic => (0.0, f64::INFINITY),
        }
    }

    pub fn contains_phi(self, phi: f64) -> bool {
        let (lo, hi) = self.phi_domain();
        phi > lo && phi < hi
    }

    /// `S_ε`: `sin` on the sphere, `sinh` on the hyperbolic plane.
    pub fn s(self, x: f64) -> f64 {
        match self {
            Ambient::Sphere => x.sin(),
            Ambient::Hyperbolic => x.sinh(),
        }
    }

    /// `C_ε`: `cos` on the sphere, `cosh` on the hyperbolic plane.
    pub fn c(self, x: f64) -> f64 {
        match self {
            Ambient::Sphere => x.cos(),
            Ambient::Hyperbolic => x.cosh(),
        }
    }

    /// `η_ε = C_ε/S_ε`: `cot` or `coth`. Panics within [`POLE_MARGIN`] of a
    /// zero of `S_ε` (the domain endpoints).
    pub fn eta(self, x: f64) -> f64 {
        let (lo, hi) = self.phi_domain();
        assert!(
            x - lo > POLE_MARGIN && hi - x > POLE_MARGIN,
            "eta pole: phi = {x} is within {POLE_MARGIN} of the domain boundary"
        );
        self.c(x) / self.s(x)
    }
}

/// One arc-length sample of a profile curve; `phi_p` and `t_p` are the
/// derivatives of `phi` and `t`, constrained to the unit circle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProfileState {
    pub s: f64,
    pub phi: f64,
    pub phi_p: f64,
    pub t: f64,
    pub t_p: f64,
}

impl ProfileState {
    /// Deviation from unit speed, `|φ'² + t'² − 1|`.
    pub fn speed_defect(&self) -> f64 {
        (self.phi_p * self.phi_p + self.t_p * self.t_p - 1.0).abs()
    }
}

/// Principal curvatures with the derived means.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub k1: f64,
    pub k2: f64,
    pub h: f64,
    pub ke: f64,
}

/// Curvatures of the rotational surface at a profile state, given the
/// second derivative `φ''` there: `k₁ = −φ''/t'` and `k₂ = t'·η_ε(φ)`.
pub fn curvatures(
    ambient: Ambient,
    st: &ProfileState,
    phi_pp: f64,
) -> CurvatureSample {
    assert!(st.t_p != 0.0, "curvatures need t' != 0; classify slices first");
    let k1 = -phi_pp / st.t_p;
    let k2 = st.t_p * ambient.eta(st.phi);
    CurvatureSample {
        k1,
        k2,
        h: 0.5 * (k1 + k2),
        ke: k1 * k2,
    }
}

/// Unit normal of the rotational surface at `(s, θ)` in ambient chart
/// coordinates: `(t'C_ε(φ)cosθ, t'C_ε(φ)sinθ, −t'S_ε(φ), −φ')`.
pub fn normal_vector(ambient: Ambient, st: &ProfileState, theta: f64) -> [f64; 4] {
    let c = ambient.c(st.phi);
    let s = ambient.s(st.phi);
    [
        st.t_p * c * theta.cos(),
        st.t_p * c * theta.sin(),
        -st.t_p * s,
        -st.phi_p,
    ]
}

/// Residual of the Weingarten relation at `(φ, t', φ'')`.
///
/// Evaluated through the substitution `u = (y²η + z)/(2y)`, which turns the
/// relation into `y·η_ε(φ) − ḡ(u)`; algebraically identical to the direct
/// form but without the cancellation that amplifies error as `t' → 0`.
pub fn weingarten_residual(
    family: &EllipticFunction,
    ambient: Ambient,
    phi: f64,
    t_p: f64,
    phi_pp: f64,
) -> f64 {
    assert!(t_p != 0.0, "weingarten residual needs t' != 0");
    let eta = ambient.eta(phi);
    let u = (t_p * t_p * eta + phi_pp) / (2.0 * t_p);
    t_p * eta - family.g_bar(u)
}

/// Solves the Weingarten relation for `φ''` at `(φ, t')`.
///
/// The residual is strictly monotone in `φ''`, so the root is unique:
/// `φ'' = 2y·ḡ⁻¹(y·η_ε(φ)) − y²·η_ε(φ)` with `y = t'`. Returns `None`
/// exactly when `y·η_ε(φ)` falls outside the range of `ḡ` — the mechanism
/// behind the existence gates.
pub fn solve_phi_pp(
    family: &EllipticFunction,
    ambient: Ambient,
    phi: f64,
    t_p: f64,
) -> Option<f64> {
    assert!(t_p != 0.0, "solve_phi_pp needs t' != 0");
    let eta = ambient.eta(phi);
    let u = family.invert_g_bar(t_p * eta)?;
    Some(t_p * (2.0 * u - t_p * eta))
}

/// The profile curvature `k₁ = −φ''/t'` solved directly from `(φ, t')`:
/// `k₁ = w − 2ḡ⁻¹(w)` with `w = t'·η_ε(φ)`.
///
/// Unlike [`solve_phi_pp`] this form is regular as `t' → 0` (both sides
/// vanish), which is what the integrator needs on catenoidal tails.
pub fn profile_k1(
    family: &EllipticFunction,
    ambient: Ambient,
    phi: f64,
    t_p: f64,
) -> Option<f64> {
    let w = t_p * ambient.eta(phi);
    let u = family.invert_g_bar(w)?;
    Some(w - 2.0 * u)
}
