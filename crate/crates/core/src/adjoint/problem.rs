use super::tableau::ButcherTableau;

/// Right-hand side `f(t, u)` and its transposed Jacobian action.
pub trait OdeSystem: Send + Sync {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, u: &[f64], out: &mut [f64]);
    /// `out = f_u(t, u)^T v`.
    fn rhs_jac_t(&self, t: f64, u: &[f64], v: &[f64], out: &mut [f64]);
}

/// Scalar `u' = a u`.
#[derive(Debug, Clone, Copy)]
pub struct LinearScalar {
    pub a: f64,
}

impl OdeSystem for LinearScalar {
    fn dim(&self) -> usize {
        1
    }
    fn rhs(&self, _t: f64, u: &[f64], out: &mut [f64]) {
        out[0] = self.a * u[0];
    }
    fn rhs_jac_t(&self, _t: f64, _u: &[f64], v: &[f64], out: &mut [f64]) {
        out[0] = self.a * v[0];
    }
}

/// `u' = A u` in two dimensions.
#[derive(Debug, Clone, Copy)]
pub struct Linear2d {
    pub a: [[f64; 2]; 2],
}

impl OdeSystem for Linear2d {
    fn dim(&self) -> usize {
        2
    }
    fn rhs(&self, _t: f64, u: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.a[i][0] * u[0] + self.a[i][1] * u[1];
        }
    }
    fn rhs_jac_t(&self, _t: f64, _u: &[f64], v: &[f64], out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.a[0][j] * v[0] + self.a[1][j] * v[1];
        }
    }
}

/// Reaction–diffusion on a periodic line of `cells` cells, state laid out as
/// `[u_0, v_0, u_1, v_1, ...]`:
///
/// u' = du Δu − u v² + F (1 − u),  v' = dv Δv + u v² − (F + k) v
#[derive(Debug, Clone, Copy)]
pub struct GrayScott1d {
    pub cells: usize,
    pub du: f64,
    pub dv: f64,
    pub feed: f64,
    pub kill: f64,
    pub dx: f64,
}

impl GrayScott1d {
    fn lap(&self, x: &[f64], i: usize, c: usize) -> f64 {
        let n = self.cells;
        let l = (i + n - 1) % n;
        let r = (i + 1) % n;
        (x[2 * l + c] - 2.0 * x[2 * i + c] + x[2 * r + c]) / (self.dx * self.dx)
    }
}

impl OdeSystem for GrayScott1d {
    fn dim(&self) -> usize {
        2 * self.cells
    }

    fn rhs(&self, _t: f64, x: &[f64], out: &mut [f64]) {
        for i in 0..self.cells {
            let (u, v) = (x[2 * i], x[2 * i + 1]);
            let uvv = u * v * v;
            out[2 * i] = self.du * self.lap(x, i, 0) - uvv + self.feed * (1.0 - u);
            out[2 * i + 1] = self.dv * self.lap(x, i, 1) + uvv - (self.feed + self.kill) * v;
        }
    }

    fn rhs_jac_t(&self, _t: f64, x: &[f64], w: &[f64], out: &mut [f64]) {
        // the periodic Laplacian is symmetric, so its transpose is itself
        for i in 0..self.cells {
            let (u, v) = (x[2 * i], x[2 * i + 1]);
            let (wu, wv) = (w[2 * i], w[2 * i + 1]);
            let vv = v * v;
            let uv2 = 2.0 * u * v;
            out[2 * i] = self.du * self.lap(w, i, 0) + (-vv - self.feed) * wu + vv * wv;
            out[2 * i + 1] = self.dv * self.lap(w, i, 1) - uv2 * wu + (uv2 - self.feed - self.kill) * wv;
        }
    }
}

/// Scalar function of the final state.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `w · u_N`.
    Linear(Vec<f64>),
    /// `½ |u_N − target|²`.
    Misfit(Vec<f64>),
}

impl Objective {
    pub fn value(&self, u: &[f64]) -> f64 {
        match self {
            Objective::Linear(w) => w.iter().zip(u).map(|(a, b)| a * b).sum(),
            Objective::Misfit(t) => 0.5 * u.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        }
    }

    pub fn gradient(&self, u: &[f64]) -> Vec<f64> {
        match self {
            Objective::Linear(w) => w.clone(),
            Objective::Misfit(t) => u.iter().zip(t).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A fixed-step integration with an objective on the final state.
pub struct OdeProblem {
    pub name: String,
    pub system: Box<dyn OdeSystem>,
    pub tableau: ButcherTableau,
    pub u0: Vec<f64>,
    pub t0: f64,
    pub h: f64,
    pub steps: usize,
    pub objective: Objective,
}

pub const PROBLEM_NAMES: [&str; 3] = ["linear-scalar", "linear-2d", "gray-scott"];

impl OdeProblem {
    /// `u' = a u`, `u0 = 1`, objective `u_N`.
    pub fn linear_scalar(a: f64, h: f64, steps: usize, tableau: ButcherTableau) -> Self {
        Self {
            name: "linear-scalar".into(),
            system: Box::new(LinearScalar { a }),
            tableau,
            u0: vec![1.0],
            t0: 0.0,
            h,
            steps,
            objective: Objective::Linear(vec![1.0]),
        }
    }

    pub fn linear_2d(steps: usize, tableau: ButcherTableau) -> Self {
        Self {
            name: "linear-2d".into(),
            system: Box::new(Linear2d { a: [[-0.5, 1.0], [-1.0, -0.2]] }),
            tableau,
            u0: vec![1.0, 0.5],
            t0: 0.0,
            h: 0.1,
            steps,
            objective: Objective::Misfit(vec![0.2, -0.1]),
        }
    }

    /// 16 cells, 32 unknowns, with a localized perturbation of the steady state.
    pub fn gray_scott(steps: usize, tableau: ButcherTableau) -> Self {
        let cells = 16;
        let sys = GrayScott1d { cells, du: 2e-3, dv: 1e-3, feed: 0.04, kill: 0.06, dx: 1.0 / cells as f64 };
        let mut u0 = Vec::with_capacity(2 * cells);
        for i in 0..cells {
            let x = (i as f64 + 0.5) / cells as f64;
            let bump = (-((x - 0.5) / 0.15).powi(2)).exp();
            u0.push(1.0 - 0.5 * bump);
            u0.push(0.25 * bump + 0.02 * (2.0 * std::f64::consts::PI * x).sin().abs());
        }
        let target = (0..2 * cells).map(|i| if i % 2 == 0 { 0.8 } else { 0.1 }).collect();
        Self {
            name: "gray-scott".into(),
            system: Box::new(sys),
            tableau,
            u0,
            t0: 0.0,
            h: 0.5,
            steps,
            objective: Objective::Misfit(target),
        }
    }

    pub fn by_name(name: &str, steps: usize, tableau: ButcherTableau) -> Option<Self> {
        match name {
            "linear-scalar" => Some(Self::linear_scalar(-0.8, 0.1, steps, tableau)),
            "linear-2d" => Some(Self::linear_2d(steps, tableau)),
            "gray-scott" => Some(Self::gray_scott(steps, tableau)),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    pub fn time(&self, step: usize) -> f64 {
        self.t0 + step as f64 * self.h
    }
}
