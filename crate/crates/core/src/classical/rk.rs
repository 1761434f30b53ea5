//! Explicit Runge–Kutta steppers on a fixed-size state.

/// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
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
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub type State = [f64; 4];

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..4 {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// One Dormand–Prince step. Returns the fifth-order solution and the scaled
/// error norm (≤ 1 means accepted), or the first error raised by `f`.
pub fn dopri_step<F, E>(f: &F, t: f64, y: &State, h: f64, tol: f64) -> Result<(State, f64), E>
where
    F: Fn(f64, &State) -> Result<State, E>,
{
    let mut k: [State; 7] = [[0.0; 4]; 7];
    k[0] = f(t, y)?;
    for s in 1..7 {
        let terms: Vec<(f64, &State)> = (0..s).map(|j| (A[s][j], &k[j])).collect();
        let ys = axpy(y, h, &terms);
        k[s] = f(t + C[s] * h, &ys)?;
    }
    let terms5: Vec<(f64, &State)> = (0..7).map(|j| (B5[j], &k[j])).collect();
    let y5 = axpy(y, h, &terms5);
    let mut err = 0.0f64;
    for i in 0..4 {
        let mut e = 0.0;
        for j in 0..7 {
            e += (B5[j] - B4[j]) * k[j][i];
        }
        let scale = tol * (1.0 + y[i].abs().max(y5[i].abs()));
        err = err.max((h * e).abs() / scale);
    }
    Ok((y5, err))
}

/// Classic fixed-step RK4.
pub fn rk4_step<F, E>(f: &F, t: f64, y: &State, h: f64) -> Result<State, E>
where
    F: Fn(f64, &State) -> Result<State, E>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &[(1.0, &k1)]))?;
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &[(1.0, &k2)]))?;
    let k4 = f(t + h, &axpy(y, h, &[(1.0, &k3)]))?;
    Ok(axpy(
        y,
        h / 6.0,
        &[(1.0, &k1), (2.0, &k2), (2.0, &k3), (1.0, &k4)],
    ))
}

/// PI step-size controller (Gustafsson) for a method with error order 5.
#[derive(Clone, Copy, Debug)]
pub struct PiController {
    prev_err: f64,
}

impl Default for PiController {
    fn default() -> Self {
        PiController { prev_err: 1e-4 }
    }
}

impl PiController {
    const ALPHA: f64 = 0.7 / 5.0;
    const BETA: f64 = 0.4 / 5.0;
    const SAFETY: f64 = 0.9;

    /// Factor for the next step after an accepted step.
    pub fn accept(&mut self, err: f64) -> f64 {
        let err = err.max(1e-10);
        let fac = Self::SAFETY * err.powf(-Self::ALPHA) * self.prev_err.powf(Self::BETA);
        self.prev_err = err;
        fac.clamp(0.2, 5.0)
    }

    pub fn reject(&self, err: f64) -> f64 {
        (Self::SAFETY * err.powf(-1.0 / 5.0)).clamp(0.1, 0.9)
    }
}
