//! Dense reference solver for the discrete phase-field inequality on tiny
//! meshes.
//!
//! With `x = (phi, mu)` the step is the mixed complementarity problem
//!
//! ```text
//! (m_j/tau) phi_j + sum_k B_jk mu_k = f_j
//! r_j = be sum_k A_jk phi_k + c_j (1.phi_j) - m_j mu_j - g_j
//! phi >= 0, r >= 0, phi . r = 0
//! ```
//!
//! assembled here from the public operators. Candidate active sets are either
//! enumerated exhaustively or found by a primal-dual active set iteration; a
//! candidate counts only when it satisfies every complementarity condition.

use tumour_core::fem::{self, P1Space};
use tumour_core::physics::{nutrient_coupling, PsiSplit, Vec3};
use tumour_core::{FlowState, PhaseState, SimConfig};

pub struct Discrete {
    pub n: usize,
    pub tau: f64,
    pub mass: Vec<f64>,
    /// `beta eps A` as a dense matrix.
    pub a: Vec<Vec<f64>>,
    /// Dense blocks of the mobility operator.
    pub b: Vec<Vec<[[f64; 3]; 3]>>,
    pub c: Vec<f64>,
    pub f: Vec<Vec3>,
    pub g: Vec<Vec3>,
}

pub fn assemble(space: &P1Space, prev: &PhaseState, flow: &FlowState, cfg: &SimConfig) -> Discrete {
    let n = space.num_vertices();
    let lap = fem::stiffness(space);
    let mob = fem::mobility_stiffness(space, &prev.phi, cfg.delta_c);
    let conv = fem::convection_rhs(space, &prev.phi, &prev.mu, &flow.p, &flow.sigma, cfg.k, cfg.chi_phi);
    let sources = cfg.sources();
    let be = cfg.beta * cfg.epsilon;
    let boe = cfg.beta / cfg.epsilon;
    let mass = space.mass().to_vec();
    let mut f = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for j in 0..n {
        let m = mass[j];
        let old = prev.phi[j];
        let u = sources.eval_hat(old, flow.sigma[j], cfg.k);
        let total: f64 = u.iter().sum();
        f.push([0, 1, 2].map(|i| m / cfg.tau * old[i] + m * (u[i] - total * old[i]) + conv[j][i]));
        let wp = PsiSplit::apply(&PsiSplit::W_PLUS, old);
        let nn = nutrient_coupling(flow.sigma[j], cfg.chi_phi);
        g.push([0, 1, 2].map(|i| m * (boe * wp[i] - nn[i])));
    }
    Discrete {
        n,
        tau: cfg.tau,
        a: (0..n).map(|i| (0..n).map(|k| be * lap.get(i, k)).collect()).collect(),
        b: (0..n).map(|i| (0..n).map(|k| mob.block(i, k)).collect()).collect(),
        c: mass.iter().map(|m| 2.0 / 3.0 * boe * m).collect(),
        mass,
        f,
        g,
    }
}

impl Discrete {
    fn phi_index(&self, j: usize, i: usize) -> usize {
        3 * j + i
    }

    fn mu_index(&self, j: usize, i: usize) -> usize {
        3 * self.n + 3 * j + i
    }

    /// Solves the linear system in which the components flagged in
    /// `active[j]` vanish and the inequality is an equality elsewhere.
    pub fn solve_face(&self, active: &[u8]) -> Option<(Vec<Vec3>, Vec<Vec3>)> {
        let size = 6 * self.n;
        let mut m = vec![vec![0.0; size + 1]; size];
        for j in 0..self.n {
            for i in 0..3 {
                let row = &mut m[self.phi_index(j, i)];
                row[3 * j + i] = self.mass[j] / self.tau;
                for k in 0..self.n {
                    for l in 0..3 {
                        row[3 * self.n + 3 * k + l] += self.b[j][k][i][l];
                    }
                }
                row[size] = self.f[j][i];

                let row = &mut m[self.mu_index(j, i)];
                if active[j] & (1 << i) != 0 {
                    row[3 * j + i] = 1.0;
                } else {
                    for k in 0..self.n {
                        row[3 * k + i] += self.a[j][k];
                    }
                    for l in 0..3 {
                        row[3 * j + l] += self.c[j];
                    }
                    row[3 * self.n + 3 * j + i] = -self.mass[j];
                    row[size] = self.g[j][i];
                }
            }
        }
        let x = dense_solve(m)?;
        let phi = (0..self.n).map(|j| [0, 1, 2].map(|i| x[3 * j + i])).collect();
        let mu = (0..self.n).map(|j| [0, 1, 2].map(|i| x[3 * self.n + 3 * j + i])).collect();
        Some((phi, mu))
    }

    /// Inequality residual `r`.
    pub fn residual(&self, phi: &[Vec3], mu: &[Vec3]) -> Vec<Vec3> {
        (0..self.n)
            .map(|j| {
                let s: f64 = phi[j].iter().sum();
                [0, 1, 2].map(|i| {
                    let lp: f64 = (0..self.n).map(|k| self.a[j][k] * phi[k][i]).sum();
                    lp + self.c[j] * s - self.mass[j] * mu[j][i] - self.g[j][i]
                })
            })
            .collect()
    }

    /// Largest violation of the equation, of feasibility and of
    /// complementarity, all in units of `phi`.
    pub fn kkt_error(&self, phi: &[Vec3], mu: &[Vec3]) -> f64 {
        let r = self.residual(phi, mu);
        let mut worst: f64 = 0.0;
        for j in 0..self.n {
            let m = self.mass[j];
            for i in 0..3 {
                let mut lhs = m / self.tau * phi[j][i];
                for k in 0..self.n {
                    for l in 0..3 {
                        lhs += self.b[j][k][i][l] * mu[k][l];
                    }
                }
                worst = worst.max((lhs - self.f[j][i]).abs() * self.tau / m);
                worst = worst.max(phi[j][i].min(r[j][i] / m).abs());
            }
        }
        worst
    }

    /// Tries every assignment of a simplex face to every vertex and keeps the
    /// candidate with the smallest KKT error.
    pub fn enumerate(&self) -> Option<(Vec<Vec3>, Vec<Vec3>, f64)> {
        let faces = 7usize;
        let total = faces.pow(self.n as u32);
        let mut best: Option<(Vec<Vec3>, Vec<Vec3>, f64)> = None;
        let mut active = vec![0u8; self.n];
        for code in 0..total {
            let mut c = code;
            for a in active.iter_mut() {
                *a = (c % faces) as u8;
                c /= faces;
            }
            if let Some((phi, mu)) = self.solve_face(&active) {
                let e = self.kkt_error(&phi, &mu);
                if best.as_ref().map_or(true, |b| e < b.2) {
                    best = Some((phi, mu, e));
                }
            }
        }
        best
    }

    /// Primal-dual active set iteration started from the zero components of
    /// `start`.
    pub fn active_set(&self, start: &[Vec3], kappa: f64) -> Option<(Vec<Vec3>, Vec<Vec3>, f64)> {
        let mut active: Vec<u8> = start
            .iter()
            .map(|x| (0..3).filter(|&i| x[i] <= 0.0).fold(0u8, |s, i| s | 1 << i).min(6))
            .collect();
        for _ in 0..200 {
            let (phi, mu) = self.solve_face(&active)?;
            let r = self.residual(&phi, &mu);
            let next: Vec<u8> = (0..self.n)
                .map(|j| {
                    let mut mask = (0..3)
                        .filter(|&i| r[j][i] / self.mass[j] - kappa * phi[j][i] > 0.0)
                        .fold(0u8, |s, i| s | 1 << i);
                    if mask == 7 {
                        let keep = (0..3).max_by(|&a, &b| phi[j][a].total_cmp(&phi[j][b])).unwrap();
                        mask &= !(1 << keep);
                    }
                    mask
                })
                .collect();
            if next == active {
                let e = self.kkt_error(&phi, &mu);
                return Some((phi, mu, e));
            }
            active = next;
        }
        None
    }
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn dense_solve(mut m: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = m.len();
    let scale = m.iter().flat_map(|r| r[..n].iter()).fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let p = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[p][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, p);
        for r in col + 1..n {
            let l = m[r][col] / m[col][col];
            if l != 0.0 {
                for k in col..=n {
                    m[r][k] -= l * m[col][k];
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = m[r][n];
        for k in r + 1..n {
            s -= m[r][k] * x[k];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}
