//! Shooting the profile-curve ODE from a symmetry point.
//!
//! Initial data sits at a critical point of `φ`: `φ(0) = φ₀`, `φ'(0) = 0`,
//! `t(0) = 0`, `t'(0) = σ ∈ {+1, −1}`. Whether any profile exists there is
//! decided by the existence gate `η_ε(φ₀) < −ℓ₋∞` (for `σ = +1`, resp.
//! `< ℓ₊∞` for `σ = −1`); when it holds, the trajectory is integrated
//! forward and the backward half is produced by the exact mirror symmetry
//! `φ(−s) = φ(s)`, `t(−s) = −t(s)`.
//!
//! The integrated state is `(φ, τ, t)` where `τ` is the tangent angle,
//! `φ' = cos τ` and `t' = sin τ`. This keeps the pair `(φ', t')` on the unit
//! circle exactly, avoids the near-singular division of the first-order
//! system, and keeps `t'` accurate to machine precision on catenoidal tails
//! where `|φ'| → 1` (recovering `t'` from `√(1−φ'²)` loses it below ~1e-8).
//! The angle equation is `τ' = k₁ = w − 2ḡ⁻¹(w)` with `w = t'·η_ε(φ)`.

use crate::ambient::{solve_phi_pp, weingarten_residual, Ambient, ProfileState};
use crate::elliptic::EllipticFunction;
use crate::ode::{self, DenseStep, StopReason};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;
/// Step-size cap; keeps the sample grid dense enough for the classifier's
/// cubic interpolation to stay below the 1e-7 tolerances.
pub const H_MAX: f64 = 0.05;

/// Everything needed to shoot one profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShootingSpec {
    pub family: EllipticFunction,
    pub ambient: Ambient,
    pub phi0: f64,
    pub sigma: i32,
    pub s_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl ShootingSpec {
    /// Spec with the default tolerances.
    pub fn new(family: EllipticFunction, ambient: Ambient, phi0: f64, sigma: i32, s_max: f64) -> Self {
        ShootingSpec {
            family,
            ambient,
            phi0,
            sigma,
            s_max,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.sigma != 1 && self.sigma != -1 {
            return Err(SpecError(format!("sigma must be +1 or -1, got {}", self.sigma)));
        }
        if !self.ambient.contains_phi(self.phi0) {
            return Err(SpecError(format!(
                "phi0 = {} outside the open domain {:?}",
                self.phi0,
                self.ambient.phi_domain()
            )));
        }
        // seeds on the sphere sit at minima, which lie on or below the equator
        if self.ambient == Ambient::Sphere && self.phi0 > FRAC_PI_2 {
            return Err(SpecError(format!(
                "phi0 = {} must lie in (0, pi/2] for the sphere (pi/2 seeds the cylinder)",
                self.phi0
            )));
        }
        if !(self.s_max > 0.0 && self.s_max.is_finite()) {
            return Err(SpecError(format!("s_max must be positive and finite, got {}", self.s_max)));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(SpecError("tolerances must be positive".into()));
        }
        if !self.family.is_admissible() {
            return Err(SpecError(format!("family {} is not elliptic", self.family)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("invalid shooting spec: {0}")]
pub struct SpecError(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    PhiCritical,
    EquatorCrossing,
}

/// A root-polished zero crossing of `φ'` (or of `φ − π/2` on the sphere).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Event {
    pub s: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    GateFailure { s: f64 },
    StepLimit,
}

/// Existence-gate evaluation: `lhs = η_ε(φ₀)` against the applicable limit
/// of `g`. The profile exists iff `lhs < rhs` (strictly).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GateCheck {
    pub sigma: i32,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl GateCheck {
    pub fn inequality(&self) -> &'static str {
        if self.sigma == 1 {
            "eta_eps(phi0) < -ell_minus_inf"
        } else {
            "eta_eps(phi0) < ell_plus_inf"
        }
    }
}

impl std::fmt::Display for GateCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "existence gate {} {}: lhs = {}, rhs = {}",
            self.inequality(),
            if self.holds { "holds" } else { "fails" },
            self.lhs,
            self.rhs
        )
    }
}

/// Evaluates the existence gate for a spec without integrating.
pub fn gate_check(spec: &ShootingSpec) -> GateCheck {
    let lhs = spec.ambient.eta(spec.phi0);
    let lim = spec.family.limits();
    let rhs = if spec.sigma == 1 { -lim.ell_minus } else { lim.ell_plus };
    GateCheck {
        sigma: spec.sigma,
        lhs,
        rhs,
        holds: lhs < rhs,
    }
}

/// Initial curvature data `φ''(0)`, or the failed gate.
///
/// When the gate holds the solve cannot fail, and the value is strictly
/// positive away from the cylinder seed (`φ₀ = π/2` on the sphere, where it
/// is zero).
pub fn solve_initial_phi_pp(spec: &ShootingSpec) -> Result<f64, GateCheck> {
    let gate = gate_check(spec);
    if !gate.holds {
        return Err(gate);
    }
    let z = solve_phi_pp(&spec.family, spec.ambient, spec.phi0, spec.sigma as f64)
        .expect("gate held, so the initial solve must succeed");
    Ok(z)
}

/// How the `s < 0` half of the window is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackwardMode {
    /// Mirror the forward half through the symmetry at `s = 0` (exact).
    Mirror,
    /// Integrate it independently; used by the symmetry self-test.
    Reintegrate,
}

/// An integrated trajectory over `[−L, L]`, `L ≤ s_max`.
#[derive(Debug, Clone)]
pub struct Profile {
    spec: ShootingSpec,
    samples: Vec<ProfileState>,
    events: Vec<Event>,
    termination: Termination,
}

/// Shoots the profile with the backward half mirrored.
pub fn integrate_profile(spec: &ShootingSpec) -> Result<Profile, GateCheck> {
    integrate_profile_with(spec, BackwardMode::Mirror)
}

/// Shoots the profile with an explicit backward-half mode.
pub fn integrate_profile_with(spec: &ShootingSpec, mode: BackwardMode) -> Result<Profile, GateCheck> {
    spec.validate().expect("invalid shooting spec");
    solve_initial_phi_pp(spec)?;

    let tau0 = spec.sigma as f64 * FRAC_PI_2;
    let y0 = [spec.phi0, tau0, 0.0];

    let (fwd_samples, fwd_events, fwd_stop) = integrate_half(spec, y0, spec.s_max);
    let mut termination = match fwd_stop {
        StopReason::Reached => Termination::Completed,
        StopReason::RhsFailure { s } => Termination::GateFailure { s },
        StopReason::StepLimit => Termination::StepLimit,
    };

    // the attained window is symmetric; truncate to the shorter half if the
    // backward integration stops earlier than the forward one did
    let (mut samples, mut events);
    match mode {
        BackwardMode::Mirror => {
            samples = Vec::with_capacity(2 * fwd_samples.len() - 1);
            events = Vec::new();
            for st in fwd_samples.iter().skip(1).rev() {
                samples.push(ProfileState {
                    s: -st.s,
                    phi: st.phi,
                    phi_p: -st.phi_p,
                    t: -st.t,
                    t_p: st.t_p,
                });
            }
            samples.extend_from_slice(&fwd_samples);
            for ev in fwd_events.iter().rev() {
                events.push(Event { s: -ev.s, kind: ev.kind });
            }
            events.push(Event { s: 0.0, kind: EventKind::PhiCritical });
            events.extend_from_slice(&fwd_events);
        }
        BackwardMode::Reintegrate => {
            let (bwd_samples, bwd_events, bwd_stop) = integrate_half(spec, y0, -spec.s_max);
            if let StopReason::RhsFailure { s } = bwd_stop {
                termination = Termination::GateFailure { s };
            }
            samples = Vec::with_capacity(fwd_samples.len() + bwd_samples.len());
            for st in bwd_samples.iter().skip(1).rev() {
                samples.push(*st);
            }
            samples.extend_from_slice(&fwd_samples);
            events = Vec::new();
            events.extend(bwd_events.iter().rev().cloned());
            events.push(Event { s: 0.0, kind: EventKind::PhiCritical });
            events.extend_from_slice(&fwd_events);
        }
    }

    let profile = Profile {
        spec: spec.clone(),
        samples,
        events,
        termination,
    };
    profile.assert_integrated_invariants();
    Ok(profile)
}

/// One half-window integration; returns samples from `s = 0` outward.
fn integrate_half(
    spec: &ShootingSpec,
    y0: [f64; 3],
    s_target: f64,
) -> (Vec<ProfileState>, Vec<Event>, StopReason) {
    let family = spec.family;
    let ambient = spec.ambient;
    let rhs = move |_s: f64, y: &[f64; 3]| -> Option<[f64; 3]> {
        let (sin_tau, cos_tau) = y[1].sin_cos();
        let w = sin_tau * ambient.eta(y[0]);
        let u = family.invert_g_bar(w)?;
        Some([cos_tau, w - 2.0 * u, sin_tau])
    };

    let opts = ode::Options {
        rel_tol: spec.rel_tol,
        abs_tol: spec.abs_tol,
        h_max: H_MAX,
        max_steps: spec.max_steps,
    };

    let mut samples = vec![state_from(0.0, &y0)];
    let mut events: Vec<Event> = Vec::new();
    let mut y_prev = y0;
    let on_sphere = ambient == Ambient::Sphere;

    let (_, _, stop) = ode::dopri5(
        rhs,
        y0,
        0.0,
        s_target,
        &opts,
        |step, s_new, y_new| {
            locate_events(step, &y_prev, y_new, on_sphere, &mut events);
            samples.push(state_from(s_new, y_new));
            y_prev = *y_new;
        },
    );
    (samples, events, stop)
}

fn state_from(s: f64, y: &[f64; 3]) -> ProfileState {
    let (sin_tau, cos_tau) = y[1].sin_cos();
    ProfileState {
        s,
        phi: y[0],
        phi_p: cos_tau,
        t: y[2],
        t_p: sin_tau,
    }
}

/// Scans one accepted step for sign changes of `φ'` and (sphere only)
/// `φ − π/2`, bisecting the dense interpolant to locate each root.
fn locate_events(
    step: &DenseStep<3>,
    y_left: &[f64; 3],
    y_right: &[f64; 3],
    on_sphere: bool,
    events: &mut Vec<Event>,
) {
    let phi_p = |y: &[f64; 3]| y[1].cos();
    let eq = |y: &[f64; 3]| y[0] - FRAC_PI_2;

    if phi_p(y_left) * phi_p(y_right) < 0.0 {
        let s = bisect_event(step, &phi_p);
        events.push(Event { s, kind: EventKind::PhiCritical });
    }
    if on_sphere && eq(y_left) * eq(y_right) < 0.0 {
        let s = bisect_event(step, &eq);
        events.push(Event { s, kind: EventKind::EquatorCrossing });
    }
}

fn bisect_event(step: &DenseStep<3>, e: &impl Fn(&[f64; 3]) -> f64) -> f64 {
    let mut a = step.s0;
    let mut b = step.s_end();
    let mut ea = e(&step.eval(a));
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let em = e(&step.eval(m));
        if ea * em <= 0.0 {
            b = m;
        } else {
            a = m;
            ea = em;
        }
        if (b - a).abs() <= 1e-13 * a.abs().max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

impl Profile {
    /// Builds a profile from raw parts without invariant checks; intended
    /// for synthetic trajectories (slices, diagnostics) in tests and tools.
    pub fn from_parts(
        spec: ShootingSpec,
        samples: Vec<ProfileState>,
        events: Vec<Event>,
        termination: Termination,
    ) -> Self {
        Profile { spec, samples, events, termination }
    }

    pub fn spec(&self) -> &ShootingSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[ProfileState] {
        &self.samples
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn s_start(&self) -> f64 {
        self.samples.first().expect("profile has samples").s
    }

    pub fn s_end(&self) -> f64 {
        self.samples.last().expect("profile has samples").s
    }

    /// Samples with `s ≥ 0`.
    pub fn forward_samples(&self) -> &[ProfileState] {
        let start = self.samples.partition_point(|st| st.s < 0.0);
        &self.samples[start..]
    }

    fn bracket(&self, s: f64) -> (&ProfileState, &ProfileState) {
        assert!(
            s >= self.s_start() - 1e-12 && s <= self.s_end() + 1e-12,
            "s = {s} outside the attained window [{}, {}]",
            self.s_start(),
            self.s_end()
        );
        let idx = self.samples.partition_point(|st| st.s < s).clamp(1, self.samples.len() - 1);
        (&self.samples[idx - 1], &self.samples[idx])
    }

    /// `φ(s)` by cubic Hermite interpolation on the sample grid.
    pub fn phi_at(&self, s: f64) -> f64 {
        let (a, b) = self.bracket(s);
        hermite(s, a.s, b.s, a.phi, a.phi_p, b.phi, b.phi_p)
    }

    /// `t(s)` by cubic Hermite interpolation on the sample grid.
    pub fn t_at(&self, s: f64) -> f64 {
        let (a, b) = self.bracket(s);
        hermite(s, a.s, b.s, a.t, a.t_p, b.t, b.t_p)
    }

    /// `φ'(s)` as the derivative of the interpolated `φ`.
    pub fn phi_p_at(&self, s: f64) -> f64 {
        let (a, b) = self.bracket(s);
        hermite_deriv(s, a.s, b.s, a.phi, a.phi_p, b.phi, b.phi_p)
    }

    /// `t'(s)` as the derivative of the interpolated `t`.
    pub fn t_p_at(&self, s: f64) -> f64 {
        let (a, b) = self.bracket(s);
        hermite_deriv(s, a.s, b.s, a.t, a.t_p, b.t, b.t_p)
    }

    /// Largest unit-speed defect over the samples.
    pub fn max_speed_defect(&self) -> f64 {
        self.samples.iter().map(|st| st.speed_defect()).fold(0.0, f64::max)
    }

    /// Largest Weingarten residual over the samples, with `φ''` re-solved
    /// from each `(φ, t')`.
    pub fn max_residual(&self) -> f64 {
        self.samples
            .iter()
            .filter(|st| st.t_p != 0.0)
            .map(|st| {
                let z = solve_phi_pp(&self.spec.family, self.spec.ambient, st.phi, st.t_p)
                    .expect("profile state left the solvable region");
                weingarten_residual(&self.spec.family, self.spec.ambient, st.phi, st.t_p, z).abs()
            })
            .fold(0.0, f64::max)
    }

    fn assert_integrated_invariants(&self) {
        assert!(self.samples.len() >= 2, "integration produced no steps");
        let speed = self.max_speed_defect();
        assert!(speed <= 1e-9, "unit-speed defect {speed} exceeds 1e-9");
        let sig = self.spec.sigma as f64;
        for pair in self.samples.windows(2) {
            assert!(pair[0].s < pair[1].s, "samples not strictly ordered in s");
            assert!(
                sig * (pair[1].t - pair[0].t) > 0.0,
                "t is not strictly monotone with sign sigma near s = {}",
                pair[0].s
            );
            assert!(
                self.spec.ambient.contains_phi(pair[1].phi),
                "phi left the open domain at s = {}",
                pair[1].s
            );
        }
    }
}

/// Cubic Hermite interpolation of `(v, v')` data on `[s0, s1]`.
#[allow(clippy::too_many_arguments)]
fn hermite(s: f64, s0: f64, s1: f64, v0: f64, d0: f64, v1: f64, d1: f64) -> f64 {
    let h = s1 - s0;
    let x = (s - s0) / h;
    let x2 = x * x;
    let x3 = x2 * x;
    (2.0 * x3 - 3.0 * x2 + 1.0) * v0
        + (x3 - 2.0 * x2 + x) * h * d0
        + (-2.0 * x3 + 3.0 * x2) * v1
        + (x3 - x2) * h * d1
}

#[allow(clippy::too_many_arguments)]
fn hermite_deriv(s: f64, s0: f64, s1: f64, v0: f64, d0: f64, v1: f64, d1: f64) -> f64 {
    let h = s1 - s0;
    let x = (s - s0) / h;
    let x2 = x * x;
    ((6.0 * x2 - 6.0 * x) * v0
        + (3.0 * x2 - 4.0 * x + 1.0) * h * d0
        + (-6.0 * x2 + 6.0 * x) * v1
        + (3.0 * x2 - 2.0 * x) * h * d1)
        / h
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReflectError {
    #[error("reflection is only defined on the sphere")]
    NotSphere,
    #[error("anchor s0 = {0} outside the attained window")]
    AnchorOutOfRange(f64),
}

/// The mirrored solution `ψ(s) = π − φ(2s₀−s)`, `v(s) = t(2s₀−s)`: another
/// profile satisfying the same relation, with the shooting orientation
/// flipped. Reflecting twice about the same anchor restores the original.
pub fn reflect_profile(p: &Profile, s0: f64) -> Result<Profile, ReflectError> {
    use std::f64::consts::PI;
    if p.spec.ambient != Ambient::Sphere {
        return Err(ReflectError::NotSphere);
    }
    if s0 < p.s_start() || s0 > p.s_end() {
        return Err(ReflectError::AnchorOutOfRange(s0));
    }
    let samples = p
        .samples
        .iter()
        .rev()
        .map(|st| ProfileState {
            s: 2.0 * s0 - st.s,
            phi: PI - st.phi,
            phi_p: st.phi_p,
            t: st.t,
            t_p: -st.t_p,
        })
        .collect();
    let mut events: Vec<Event> = p
        .events
        .iter()
        .rev()
        .map(|ev| Event { s: 2.0 * s0 - ev.s, kind: ev.kind })
        .collect();
    events.sort_by(|a, b| a.s.total_cmp(&b.s));
    let mut spec = p.spec.clone();
    spec.sigma = -spec.sigma;
    Ok(Profile {
        spec,
        samples,
        events,
        termination: p.termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn spec(family: EllipticFunction, ambient: Ambient, phi0: f64, sigma: i32, s_max: f64) -> ShootingSpec {
        ShootingSpec::new(family, ambient, phi0, sigma, s_max)
    }

    #[test]
    fn gate_values() {
        // f ≡ 0 on H²: gate vacuous, φ''(0) = coth(φ₀)
        let sp = spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, 1, 20.0);
        let z = solve_initial_phi_pp(&sp).unwrap();
        assert_relative_eq!(z, 1.0f64.cosh() / 1.0f64.sinh(), epsilon = 1e-12);

        // sqrtshift a=1 on H²: coth(1) ≈ 1.313 ≥ 1 = −ℓ₋∞, gate fails
        let sp = spec(EllipticFunction::SqrtShift { a: 1.0 }, Ambient::Hyperbolic, 1.0, 1, 20.0);
        let gate = solve_initial_phi_pp(&sp).unwrap_err();
        assert!(!gate.holds);
        assert_relative_eq!(gate.lhs, 1.3130352854993312, epsilon = 1e-12);
        assert_eq!(gate.rhs, 1.0);

        // sqrtshift a=1 on S² at φ₀ = π/3: cot(π/3) ≈ 0.577 < 1, gate holds
        let sp = spec(
            EllipticFunction::SqrtShift { a: 1.0 },
            Ambient::Sphere,
            std::f64::consts::FRAC_PI_3,
            1,
            20.0,
        );
        let z = solve_initial_phi_pp(&sp).unwrap();
        assert!(z > 0.0);
    }

    #[test]
    fn gate_sigma_negative_uses_ell_plus() {
        // sqrtshift a=−1 has ℓ₊∞ = 1: σ = −1 profiles fail once coth ≥ 1
        let sp = spec(EllipticFunction::SqrtShift { a: -1.0 }, Ambient::Hyperbolic, 1.0, -1, 20.0);
        let gate = gate_check(&sp);
        assert_eq!(gate.rhs, 1.0);
        assert!(!gate.holds);
        // while σ = +1 sails through (−ℓ₋∞ = ∞)
        let sp = spec(EllipticFunction::SqrtShift { a: -1.0 }, Ambient::Hyperbolic, 1.0, 1, 20.0);
        assert!(gate_check(&sp).holds);
    }

    #[test]
    fn cylinder_is_an_equilibrium() {
        let sp = spec(EllipticFunction::Zero, Ambient::Sphere, FRAC_PI_2, 1, 20.0);
        let p = integrate_profile(&sp).unwrap();
        assert_eq!(p.termination(), Termination::Completed);
        for st in p.samples() {
            assert!((st.phi - FRAC_PI_2).abs() < 1e-12);
            assert_relative_eq!(st.t, st.s, epsilon = 1e-10, max_relative = 1e-10);
        }
        // only the seed critical point, no further events
        assert!(p.events().iter().all(|e| e.s == 0.0));
    }

    #[test]
    fn minimal_catenoid_conserves_first_integral() {
        let sp = spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, 1, 20.0);
        let p = integrate_profile(&sp).unwrap();
        assert_eq!(p.termination(), Termination::Completed);
        let j0 = 1.0f64.sinh();
        let worst = p
            .samples()
            .iter()
            .map(|st| (st.t_p * st.phi.sinh() - j0).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-7, "conservation defect {worst}");
        // tangent turns fully vertical by s = 20
        assert!(p.samples().last().unwrap().phi_p >= 0.999);
        // convexity: φ' increasing on the forward half (strictly until
        // cos τ saturates to 1.0 in f64)
        for pair in p.forward_samples().windows(2) {
            assert!(pair[1].phi_p >= pair[0].phi_p);
            if pair[1].phi_p < 1.0 - 1e-12 {
                assert!(pair[1].phi_p > pair[0].phi_p);
            }
        }
    }

    #[test]
    fn minimal_unduloid_oscillates_symmetrically() {
        let sp = spec(EllipticFunction::Zero, Ambient::Sphere, FRAC_PI_4, 1, 25.0);
        let p = integrate_profile(&sp).unwrap();
        assert_eq!(p.termination(), Termination::Completed);
        // first integral: t' sin φ = sin φ₀ ⇒ at critical points sin φ = sin φ₀
        let crit: Vec<f64> = p
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::PhiCritical && e.s > 0.0)
            .map(|e| e.s)
            .collect();
        assert!(crit.len() >= 3);
        let phi_max = p.phi_at(crit[0]);
        assert_relative_eq!(phi_max, 3.0 * FRAC_PI_4, epsilon = 1e-7);
        // equator crossings interleave the critical points
        assert!(p
            .events()
            .iter()
            .any(|e| e.kind == EventKind::EquatorCrossing && e.s > 0.0 && e.s < crit[0]));
        // confinement to (0, π) and escape from the hemisphere
        for st in p.samples() {
            assert!(st.phi > 0.0 && st.phi < PI);
        }
        assert!(phi_max > FRAC_PI_2);
        assert!(p.samples().iter().map(|st| st.phi).fold(f64::INFINITY, f64::min) < FRAC_PI_2);
    }

    #[test]
    fn mirror_half_matches_reintegration() {
        for (family, ambient, phi0) in [
            (EllipticFunction::Zero, Ambient::Hyperbolic, 1.0),
            (EllipticFunction::SqrtShift { a: 1.0 }, Ambient::Sphere, 0.9),
            (EllipticFunction::Rational { c: 1.0 }, Ambient::Hyperbolic, 0.7),
        ] {
            let sp = spec(family, ambient, phi0, 1, 10.0);
            let mirrored = integrate_profile(&sp).unwrap();
            let reintegrated = integrate_profile_with(&sp, BackwardMode::Reintegrate).unwrap();
            let mut worst: f64 = 0.0;
            for st in reintegrated.samples().iter().filter(|st| st.s < 0.0) {
                worst = worst.max((mirrored.phi_at(st.s) - st.phi).abs());
                worst = worst.max((mirrored.t_at(st.s) - st.t).abs());
            }
            assert!(worst <= 1e-7, "{family} symmetry defect {worst}");
        }
    }

    #[test]
    fn residual_stays_small_along_profiles() {
        for (family, ambient, phi0) in [
            (EllipticFunction::Zero, Ambient::Hyperbolic, 1.0),
            (EllipticFunction::SqrtShift { a: 1.0 }, Ambient::Sphere, 0.9),
            (EllipticFunction::Rational { c: -0.5 }, Ambient::Sphere, 1.1),
        ] {
            let p = integrate_profile(&spec(family, ambient, phi0, 1, 15.0)).unwrap();
            assert!(p.max_residual() <= 1e-8, "{family}: residual {}", p.max_residual());
            assert!(p.max_speed_defect() <= 1e-9);
        }
    }

    #[test]
    fn sigma_negative_profiles_descend() {
        let sp = spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, -1, 12.0);
        let p = integrate_profile(&sp).unwrap();
        for pair in p.samples().windows(2) {
            assert!(pair[1].t < pair[0].t);
        }
        // same φ trajectory as the ascending one, mirrored in t
        let up = integrate_profile(&spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, 1, 12.0)).unwrap();
        for s in [0.5, 3.0, 7.5] {
            assert_relative_eq!(p.phi_at(s), up.phi_at(s), epsilon = 1e-9);
            assert_relative_eq!(p.t_at(s), -up.t_at(s), epsilon = 1e-9);
        }
    }

    #[test]
    fn interpolation_matches_samples_between_nodes() {
        let sp = spec(EllipticFunction::Zero, Ambient::Sphere, FRAC_PI_4, 1, 10.0);
        let p = integrate_profile(&sp).unwrap();
        // against the closed first integral: t' sin φ = sin φ₀
        for s in [0.123, 1.618, 4.9, -3.3] {
            let phi = p.phi_at(s);
            let tp = p.t_p_at(s);
            assert_relative_eq!(tp * phi.sin(), FRAC_PI_4.sin(), epsilon = 1e-6);
        }
    }

    #[test]
    fn reflection_is_an_involution() {
        let sp = spec(EllipticFunction::SqrtShift { a: 1.0 }, Ambient::Sphere, 0.9, 1, 12.0);
        let p = integrate_profile(&sp).unwrap();
        let r = reflect_profile(&p, 0.0).unwrap();
        let rr = reflect_profile(&r, 0.0).unwrap();
        for (a, b) in p.samples().iter().zip(rr.samples()) {
            assert!((a.phi - b.phi).abs() <= 1e-12);
            assert!((a.t - b.t).abs() <= 1e-12);
            assert!((a.s - b.s).abs() <= 1e-12);
        }
        // the reflected profile satisfies the same relation
        assert!(r.max_residual() <= 1e-8);
        // cylinder is fixed by reflection
        let cyl = integrate_profile(&spec(EllipticFunction::Zero, Ambient::Sphere, FRAC_PI_2, 1, 5.0)).unwrap();
        let rc = reflect_profile(&cyl, 0.0).unwrap();
        for st in rc.samples() {
            assert!((st.phi - FRAC_PI_2).abs() < 1e-12);
        }
        // hyperbolic profiles cannot be reflected
        let h = integrate_profile(&spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, 1, 5.0)).unwrap();
        assert!(matches!(reflect_profile(&h, 0.0), Err(ReflectError::NotSphere)));
    }

    #[test]
    fn events_are_root_polished() {
        let sp = spec(EllipticFunction::Zero, Ambient::Sphere, FRAC_PI_4, 1, 20.0);
        let p = integrate_profile(&sp).unwrap();
        // for f ≡ 0 the period is exactly 2π, so consecutive critical points
        // are exactly π apart; their polished locations must reproduce that
        let crit: Vec<f64> = p
            .events()
            .iter()
            .filter(|e| e.kind == EventKind::PhiCritical)
            .map(|e| e.s)
            .collect();
        assert!(crit.len() >= 5);
        for pair in crit.windows(2) {
            assert!(
                (pair[1] - pair[0] - std::f64::consts::PI).abs() < 1e-8,
                "critical spacing {} vs pi",
                pair[1] - pair[0]
            );
        }
        for ev in p.events().iter().filter(|e| e.kind == EventKind::EquatorCrossing) {
            assert!((p.phi_at(ev.s) - FRAC_PI_2).abs() < 1e-9);
        }
    }

    #[test]
    fn spec_validation_rejects_bad_input() {
        assert!(spec(EllipticFunction::Zero, Ambient::Sphere, 2.0, 1, 10.0).validate().is_err());
        assert!(spec(EllipticFunction::Zero, Ambient::Sphere, 0.5, 2, 10.0).validate().is_err());
        assert!(spec(EllipticFunction::Zero, Ambient::Hyperbolic, -0.1, 1, 10.0).validate().is_err());
        assert!(spec(EllipticFunction::Rational { c: 2.0 }, Ambient::Hyperbolic, 1.0, 1, 10.0)
            .validate()
            .is_err());
        assert!(spec(EllipticFunction::Zero, Ambient::Hyperbolic, 1.0, 1, 10.0).validate().is_ok());
    }
}
