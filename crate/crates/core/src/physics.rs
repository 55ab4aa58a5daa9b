//! Closed-form model ingredients: simplex geometry, mobility, the split
//! obstacle potential, nutrient coupling, sources and the discrete energy.

use serde::{Deserialize, Serialize};

use crate::fem::P1Space;

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Mobility floor.
pub const DELTA_C: f64 = 1e-6;

/// Tolerance beyond which a nodal triple counts as outside the simplex.
pub const SIMPLEX_TOL: f64 = 1e-8;

/// Bare mobilities `m_1 = 1 - s + d`, `m_2 = m_3 = s + d`.
pub fn bare_mobilities(phi: Vec3, delta_c: f64) -> Vec3 {
    let s = phi.map(|v| v.clamp(0.0, 1.0));
    [1.0 - s[0] + delta_c, s[1] + delta_c, s[2] + delta_c]
}

/// `C_ij = m_i (delta_ij - m_j / sum_k m_k)`.
pub fn mobility(phi: Vec3, delta_c: f64) -> Mat3 {
    let m = bare_mobilities(phi, delta_c);
    let total = m[0] + m[1] + m[2];
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { 1.0 } else { 0.0 };
            c[i][j] = m[i] * (d - m[j] / total);
        }
    }
    c
}

/// Orthogonal projection onto the tangent space `{x : 1.x = 0}`.
pub fn project_tg(f: Vec3) -> Vec3 {
    let mean = (f[0] + f[1] + f[2]) / 3.0;
    f.map(|v| v - mean)
}

/// The splitting `W = I - 11^T = W+ + W-` with `W- = -(2/3) 11^T`.
#[derive(Debug, Clone, Copy)]
pub struct PsiSplit;

impl PsiSplit {
    pub const W: Mat3 = [[0.0, -1.0, -1.0], [-1.0, 0.0, -1.0], [-1.0, -1.0, 0.0]];
    pub const W_MINUS: Mat3 = [[-2.0 / 3.0; 3]; 3];
    pub const W_PLUS: Mat3 = [
        [2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0],
        [-1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0],
        [-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0],
    ];

    pub fn apply(m: &Mat3, x: Vec3) -> Vec3 {
        [0, 1, 2].map(|i| m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2])
    }

    /// Concave part of the potential, `-1/2 x.Wx`.
    pub fn concave_energy(x: Vec3) -> f64 {
        -0.5 * dot3(x, Self::apply(&Self::W, x))
    }
}

/// `N_phi(sigma) = (0, -chi_phi sigma, 0)`.
pub fn nutrient_coupling(sigma: f64, chi_phi: f64) -> Vec3 {
    [0.0, -chi_phi * sigma, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SourceVariant {
    A,
    B,
    C,
}

/// A source variant together with its rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sources {
    pub variant: SourceVariant,
    /// Proliferation rate.
    pub p: f64,
    /// Apoptosis rate.
    pub a: f64,
    /// Necrotic decay rate.
    pub d_n: f64,
    pub epsilon: f64,
}

impl Sources {
    pub fn none() -> Self {
        Sources { variant: SourceVariant::A, p: 0.0, a: 0.0, d_n: 0.0, epsilon: 1.0 }
    }

    pub fn eval(&self, phi: Vec3, sigma: f64) -> Vec3 {
        let growth = self.p * sigma - self.a;
        match self.variant {
            SourceVariant::A => [0.0, phi[1] * growth, self.a * phi[1] - self.d_n * phi[2]],
            SourceVariant::B => [
                -phi[1] * self.p * sigma,
                phi[1] * growth,
                self.a * phi[1] - self.d_n * phi[2],
            ],
            SourceVariant::C => [
                0.0,
                phi[1] * (1.0 - phi[1]) * growth / self.epsilon,
                phi[2] * (1.0 - phi[2]) * (self.a - self.d_n) / self.epsilon,
            ],
        }
    }

    /// The source actually used by the scheme: unchanged for `K > 0`, and
    /// with the volume change `(1.U) phi` removed for `K = 0`.
    pub fn eval_hat(&self, phi: Vec3, sigma: f64, k: f64) -> Vec3 {
        let u = self.eval(phi, sigma);
        if k > 0.0 {
            u
        } else {
            let total = u[0] + u[1] + u[2];
            [0, 1, 2].map(|i| u[i] - total * phi[i])
        }
    }
}

pub fn source(sources: &Sources, phi: Vec3, sigma: f64) -> Vec3 {
    sources.eval(phi, sigma)
}

pub fn source_hat(sources: &Sources, phi: Vec3, sigma: f64, k: f64) -> Vec3 {
    sources.eval_hat(phi, sigma, k)
}

/// Coefficients entering the discrete free energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub beta: f64,
    pub epsilon: f64,
    pub chi_phi: f64,
    pub chi_sigma: f64,
}

/// `E = sum_T be/2 |grad phi|^2 |T| + sum_v m_v [b/e (-1/2 phi.W phi)
/// + chi_s/2 sigma^2 - chi_phi sigma phi_2]`, or `+inf` when some nodal
/// triple leaves the simplex by more than [`SIMPLEX_TOL`].
pub fn discrete_energy(space: &P1Space, phi: &[Vec3], sigma: &[f64], params: &EnergyParams) -> f64 {
    if phi.iter().any(|x| !in_simplex(*x, SIMPLEX_TOL)) {
        return f64::INFINITY;
    }
    let EnergyParams { beta, epsilon, chi_phi, chi_sigma } = *params;
    let mut gradient = 0.0;
    for (t, tri) in space.triangles().iter().enumerate() {
        let g = space.grads(t);
        for i in 0..3 {
            let mut d = [0.0; 2];
            for k in 0..3 {
                d[0] += phi[tri[k]][i] * g[k][0];
                d[1] += phi[tri[k]][i] * g[k][1];
            }
            gradient += (d[0] * d[0] + d[1] * d[1]) * space.area(t);
        }
    }
    let mut bulk = 0.0;
    for (v, &m) in space.mass().iter().enumerate() {
        let s = sigma[v];
        bulk += m
            * (beta / epsilon * PsiSplit::concave_energy(phi[v]) + 0.5 * chi_sigma * s * s
                - chi_phi * s * phi[v][1]);
    }
    0.5 * beta * epsilon * gradient + bulk
}

pub fn in_simplex(x: Vec3, tol: f64) -> bool {
    x.iter().all(|&v| v >= -tol) && (x[0] + x[1] + x[2] - 1.0).abs() <= tol
}

pub(crate) fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
