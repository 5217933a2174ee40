//! Adaptive Dormand–Prince 5(4) integration with dense output.
//!
//! The right-hand side is fallible: returning `None` from a stage means the
//! state has left the region where the model is solvable. The driver reacts
//! by shrinking the step; if the step collapses, integration stops with
//! [`StopReason::RhsFailure`] at the last accepted point.

/// Dense representation of one accepted step, valid for `θ ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub s0: f64,
    pub h: f64,
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluates the fourth-order interpolant at `s` inside the step.
    pub fn eval(&self, s: f64) -> [f64; N] {
        let theta = (s - self.s0) / self.h;
        let th1 = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            let [r1, r2, r3, r4, r5] = [
                self.rcont[0][i],
                self.rcont[1][i],
                self.rcont[2][i],
                self.rcont[3][i],
                self.rcont[4][i],
            ];
            out[i] = r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
        }
        out
    }

    pub fn s_end(&self) -> f64 {
        self.s0 + self.h
    }
}

/// Why the driver returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    /// Reached the requested end of the interval.
    Reached,
    /// The right-hand side became unsolvable near `s`.
    RhsFailure { s: f64 },
    /// `max_steps` accepted steps without reaching the end.
    StepLimit,
}

pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

// Dormand-Prince RK5(4)7M coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// error weights b − b̂ (the 5th-order weights are row 7 of A, FSAL)
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense-output weights
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrates `y' = rhs(s, y)` from `(s0, y0)` to `s_end` (either direction).
///
/// `on_step` is called once per accepted step with the dense interpolant and
/// the endpoint state. Returns the final state, its abscissa, and the reason
/// integration ended.
pub fn dopri5<const N: usize>(
    rhs: impl Fn(f64, &[f64; N]) -> Option<[f64; N]>,
    y0: [f64; N],
    s0: f64,
    s_end: f64,
    opts: &Options,
    mut on_step: impl FnMut(&DenseStep<N>, f64, &[f64; N]),
) -> (f64, [f64; N], StopReason) {
    let dir = (s_end - s0).signum();
    if dir == 0.0 || s0 == s_end {
        return (s0, y0, StopReason::Reached);
    }

    let mut s = s0;
    let mut y = y0;
    let mut k1 = match rhs(s, &y) {
        Some(k) => k,
        None => return (s, y, StopReason::RhsFailure { s }),
    };

    let mut h = dir * (1e-3f64).min(opts.h_max).min((s_end - s0).abs());
    let h_floor = 1e-12;
    let mut accepted = 0usize;

    while accepted < opts.max_steps {
        if (s_end - s) * dir <= 0.0 {
            return (s, y, StopReason::Reached);
        }
        // land exactly on s_end
        if (s + h - s_end) * dir > 0.0 {
            h = s_end - s;
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut stage_failed = false;
        for stage in 1..6 {
            let mut ys = y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc += A[stage][j] * kj[i];
                }
                ys[i] += h * acc;
            }
            match rhs(s + C[stage] * h, &ys) {
                Some(ks) => k[stage] = ks,
                None => {
                    stage_failed = true;
                    break;
                }
            }
        }
        if stage_failed {
            h *= 0.5;
            if h.abs() < h_floor {
                return (s, y, StopReason::RhsFailure { s });
            }
            continue;
        }

        // 5th-order solution (row 7 of A), then the FSAL stage at its endpoint
        let mut y_new = y;
        for i in 0..N {
            let mut acc = 0.0;
            for j in 0..6 {
                acc += A[6][j] * k[j][i];
            }
            y_new[i] += h * acc;
        }
        k[6] = match rhs(s + h, &y_new) {
            Some(ks) => ks,
            None => {
                h *= 0.5;
                if h.abs() < h_floor {
                    return (s, y, StopReason::RhsFailure { s });
                }
                continue;
            }
        };
        let mut err_vec = [0.0; N];
        for i in 0..N {
            let mut err = 0.0;
            for (j, kj) in k.iter().enumerate() {
                err += E[j] * kj[i];
            }
            err_vec[i] = err;
        }

        let mut err_norm_sq = 0.0;
        for i in 0..N {
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            let e = h * err_vec[i] / sc;
            err_norm_sq += e * e;
        }
        let err_norm = (err_norm_sq / N as f64).sqrt();

        if err_norm <= 1.0 {
            // accepted: build the dense interpolant before moving on
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k[6][i] - bspl;
                let mut dsum = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    dsum += D[j] * kj[i];
                }
                rcont[4][i] = h * dsum;
            }
            let step = DenseStep { s0: s, h, rcont };
            s += h;
            y = y_new;
            k1 = k[6];
            accepted += 1;
            on_step(&step, s, &y);

            let factor = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * factor).clamp(-opts.h_max, opts.h_max);
        } else {
            let factor = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            h *= factor;
            if h.abs() < h_floor {
                return (s, y, StopReason::RhsFailure { s });
            }
        }
    }
    (s, y, StopReason::StepLimit)
}
