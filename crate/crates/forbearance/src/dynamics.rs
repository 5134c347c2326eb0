//! The planar affine growth system and its stability analysis.
//!
//! The system couples a factor-endowment stock `x` to the growth flow `y`:
//!
//! ```text
//! x' = -a x + b y
//! y' = A sigma^(1 - phi) - y
//! ```
//!
//! i.e. `v' = M v + f` with `M = [[-a, b], [0, -1]]` and
//! `f = [0, A sigma^(1 - phi)]`. Eigenvalues come from the quadratic formula
//! on the characteristic polynomial, classification from their sign and
//! realness pattern, and trajectories from classical fixed-step RK4.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::econ::{growth_rate, GrowthParams};
use crate::{ensure_finite, invalid, Error, Result};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Parameters of the growth system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsParams {
    /// Decay rate `a` on the endowment stock.
    pub decay: f64,
    /// Coupling `b` of growth into the endowment stock.
    pub coupling: f64,
    /// Growth inputs supplying the forcing term.
    pub growth: GrowthParams,
}

impl DynamicsParams {
    pub fn new(decay: f64, coupling: f64, growth: GrowthParams) -> Result<Self> {
        ensure_finite("decay", decay)?;
        ensure_finite("coupling", coupling)?;
        Ok(Self { decay, coupling, growth })
    }
}

/// A planar affine system `v' = matrix * v + forcing`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSystem2x2 {
    pub matrix: [[f64; 2]; 2],
    pub forcing: [f64; 2],
}

impl LinearSystem2x2 {
    /// Right-hand side at `state`.
    pub fn rhs(&self, state: [f64; 2]) -> [f64; 2] {
        [
            self.matrix[0][0] * state[0] + self.matrix[0][1] * state[1] + self.forcing[0],
            self.matrix[1][0] * state[0] + self.matrix[1][1] * state[1] + self.forcing[1],
        ]
    }
}

/// Qualitative type of the equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityClass {
    StableNode,
    UnstableNode,
    SaddlePath,
    StableSpiral,
    UnstableSpiral,
    Center,
    Degenerate,
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            StabilityClass::StableNode => "StableNode",
            StabilityClass::UnstableNode => "UnstableNode",
            StabilityClass::SaddlePath => "SaddlePath",
            StabilityClass::StableSpiral => "StableSpiral",
            StabilityClass::UnstableSpiral => "UnstableSpiral",
            StabilityClass::Center => "Center",
            StabilityClass::Degenerate => "Degenerate",
        };
        f.write_str(name)
    }
}

/// Eigenvalues, classification and (when the matrix is nonsingular) the
/// equilibrium of a system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub eigenvalues: (Complex64, Complex64),
    pub class: StabilityClass,
    pub equilibrium: Option<[f64; 2]>,
}

/// A time-ordered solution path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 2]>,
}

impl Trajectory {
    pub fn last_state(&self) -> [f64; 2] {
        *self.states.last().expect("trajectory holds at least the start state")
    }
}

/// Rectangular evaluation grid for the vector field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        ensure_finite("x_range.lo", x_range.0)?;
        ensure_finite("x_range.hi", x_range.1)?;
        ensure_finite("y_range.lo", y_range.0)?;
        ensure_finite("y_range.hi", y_range.1)?;
        if nx < 2 || ny < 2 {
            return Err(invalid(format!("grid counts must be >= 2, got {nx} x {ny}")));
        }
        if x_range.0 >= x_range.1 || y_range.0 >= y_range.1 {
            return Err(invalid("grid ranges must be non-degenerate closed intervals"));
        }
        Ok(Self { x_range, y_range, nx, ny })
    }
}

/// One sampled arrow of the vector field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arrow {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

/// Vector field sampled on a grid, row-major from the low corner
/// (x fastest).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VectorFieldGrid {
    pub spec: GridSpec,
    pub arrows: Vec<Arrow>,
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Builds the growth system: matrix `[[-a, b], [0, -1]]`, forcing
/// `[0, A sigma^(1 - phi)]`.
pub fn build_system(p: &DynamicsParams) -> LinearSystem2x2 {
    LinearSystem2x2 {
        matrix: [[-p.decay, p.coupling], [0.0, -1.0]],
        forcing: [0.0, growth_rate(&p.growth)],
    }
}

/// Eigenvalues of a real 2x2 matrix via the quadratic formula on
/// `lambda^2 - tr * lambda + det`, sorted by real part, then imaginary part.
pub fn eigenvalues_2x2(m: &[[f64; 2]; 2]) -> (Complex64, Complex64) {
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = trace * trace - 4.0 * det;
    let (a, b) = if disc >= 0.0 {
        let root = disc.sqrt();
        (
            Complex64::new((trace - root) / 2.0, 0.0),
            Complex64::new((trace + root) / 2.0, 0.0),
        )
    } else {
        let root = (-disc).sqrt();
        (
            Complex64::new(trace / 2.0, -root / 2.0),
            Complex64::new(trace / 2.0, root / 2.0),
        )
    };
    if (a.re, a.im) <= (b.re, b.im) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Classifies an equilibrium from its eigenvalue pair.
///
/// Real distinct: both negative is a stable node, both positive an unstable
/// node, opposite signs a saddle path. Complex: the sign of the real part
/// separates stable/unstable spirals, zero real part is a center. Any zero
/// or repeated real eigenvalue is reported as degenerate.
pub fn classify_stability(eigs: (Complex64, Complex64)) -> StabilityClass {
    let (l1, l2) = eigs;
    if l1.im != 0.0 || l2.im != 0.0 {
        if l1.re < 0.0 {
            StabilityClass::StableSpiral
        } else if l1.re > 0.0 {
            StabilityClass::UnstableSpiral
        } else {
            StabilityClass::Center
        }
    } else if l1.re == 0.0 || l2.re == 0.0 || l1.re == l2.re {
        StabilityClass::Degenerate
    } else if l1.re < 0.0 && l2.re < 0.0 {
        StabilityClass::StableNode
    } else if l1.re > 0.0 && l2.re > 0.0 {
        StabilityClass::UnstableNode
    } else {
        StabilityClass::SaddlePath
    }
}

/// Steady state solving `matrix * v + forcing = 0` by Cramer's rule.
pub fn equilibrium_point(sys: &LinearSystem2x2) -> Result<[f64; 2]> {
    let m = &sys.matrix;
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 {
        return Err(Error::Singular(
            "coefficient matrix has zero determinant; no unique equilibrium".to_string(),
        ));
    }
    let rhs = [-sys.forcing[0], -sys.forcing[1]];
    Ok([
        (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
        (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det,
    ])
}

/// Combined eigenvalue, classification and equilibrium report.
pub fn analyze(sys: &LinearSystem2x2) -> StabilityReport {
    let eigenvalues = eigenvalues_2x2(&sys.matrix);
    StabilityReport {
        eigenvalues,
        class: classify_stability(eigenvalues),
        equilibrium: equilibrium_point(sys).ok(),
    }
}

fn rk4_step(sys: &LinearSystem2x2, state: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = sys.rhs(state);
    let k2 = sys.rhs([state[0] + 0.5 * h * k1[0], state[1] + 0.5 * h * k1[1]]);
    let k3 = sys.rhs([state[0] + 0.5 * h * k2[0], state[1] + 0.5 * h * k2[1]]);
    let k4 = sys.rhs([state[0] + h * k3[0], state[1] + h * k3[1]]);
    [
        state[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        state[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Integrates the system from `start` to `t_end` with classical fixed-step
/// RK4. The final step shrinks so the path lands exactly on `t_end`.
///
/// Aborts with the divergence time if the state leaves the finite range.
pub fn integrate_trajectory(
    sys: &LinearSystem2x2,
    start: [f64; 2],
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    ensure_finite("t_end", t_end)?;
    ensure_finite("dt", dt)?;
    ensure_finite("start.x", start[0])?;
    ensure_finite("start.y", start[1])?;
    if dt <= 0.0 || t_end < dt {
        return Err(invalid(format!("need dt > 0 and t_end >= dt, got dt {dt}, t_end {t_end}")));
    }

    let mut times = vec![0.0];
    let mut states = vec![start];
    let mut t = 0.0;
    let mut state = start;
    // Relative slack so t_end/dt just below an integer does not add a
    // vanishing extra step.
    let eps = 1e-9 * dt;
    while t < t_end - eps {
        let h = dt.min(t_end - t);
        state = rk4_step(sys, state, h);
        t += h;
        if !(state[0].is_finite() && state[1].is_finite()) {
            return Err(Error::Diverged { t });
        }
        times.push(t);
        states.push(state);
    }
    Ok(Trajectory { times, states })
}

/// Samples the right-hand side on every node of `grid`.
pub fn vector_field(sys: &LinearSystem2x2, grid: &GridSpec) -> VectorFieldGrid {
    let mut arrows = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        let fy = iy as f64 / (grid.ny - 1) as f64;
        let y = grid.y_range.0 + fy * (grid.y_range.1 - grid.y_range.0);
        for ix in 0..grid.nx {
            let fx = ix as f64 / (grid.nx - 1) as f64;
            let x = grid.x_range.0 + fx * (grid.x_range.1 - grid.x_range.0);
            let v = sys.rhs([x, y]);
            arrows.push(Arrow { x, y, dx: v[0], dy: v[1] });
        }
    }
    VectorFieldGrid { spec: *grid, arrows }
}

/// Default 20x20 grid spanning `[0, 2x*] x [0, 2y*]` around the equilibrium,
/// falling back to `[-1, 1]^2` when the system is singular or the
/// equilibrium degenerates onto an axis.
pub fn default_grid(sys: &LinearSystem2x2) -> GridSpec {
    if let Ok(eq) = equilibrium_point(sys) {
        if eq[0].abs() > 1e-12 && eq[1].abs() > 1e-12 {
            let x_hi = 2.0 * eq[0];
            let y_hi = 2.0 * eq[1];
            let x_range = (x_hi.min(0.0), x_hi.max(0.0));
            let y_range = (y_hi.min(0.0), y_hi.max(0.0));
            if let Ok(grid) = GridSpec::new(x_range, y_range, 20, 20) {
                return grid;
            }
        }
    }
    GridSpec::new((-1.0, 1.0), (-1.0, 1.0), 20, 20).expect("static grid is valid")
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
