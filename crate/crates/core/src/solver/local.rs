//! The coupled nodal problem solved at one vertex during a sweep.
//!
//! Unknowns are `x = (phi, mu)` in R^6. For an active set `S` the system is
//!
//! ```text
//! (m/tau) phi + M mu = f
//! phi_i = 0                                   for i in S
//! a phi_i + c (1.phi) - m mu_i = g_i          for i not in S
//! ```
//!
//! and a candidate is admissible when `phi_i >= 0` off `S` and the
//! multiplier `r_i = c (1.phi) - m mu_i - g_i` is nonnegative on `S`.

use crate::physics::{Mat3, Vec3};

/// Number of faces of the 2-simplex; mask 7 (all components zero) is excluded.
pub(crate) const FACES: u8 = 7;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NodalProblem {
    /// Lumped mass of the vertex.
    pub m: f64,
    pub m_over_tau: f64,
    /// Diagonal block of the mobility operator.
    pub mjj: Mat3,
    /// `beta eps A_jj`.
    pub a: f64,
    /// `(2/3) (beta/eps) m`.
    pub c: f64,
    pub f: Vec3,
    pub g: Vec3,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NodalSolution {
    pub phi: Vec3,
    pub mu: Vec3,
    pub active: u8,
}

/// Inverse of the system matrix of one face, reused across sweeps while the
/// active set of a vertex does not change.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FaceInverse {
    pub active: u8,
    pub inv: [[f64; 6]; 6],
}

impl NodalProblem {
    fn matrix(&self, active: u8) -> [[f64; 6]; 6] {
        let mut a = [[0.0; 6]; 6];
        for i in 0..3 {
            a[i][i] = self.m_over_tau;
            for j in 0..3 {
                a[i][3 + j] = self.mjj[i][j];
            }
        }
        for i in 0..3 {
            let row = &mut a[3 + i];
            if active & (1 << i) != 0 {
                row[i] = 1.0;
            } else {
                for j in 0..3 {
                    row[j] = self.c;
                }
                row[i] += self.a;
                row[3 + i] = -self.m;
            }
        }
        a
    }

    fn rhs(&self, active: u8) -> [f64; 6] {
        let mut b = [0.0; 6];
        for i in 0..3 {
            b[i] = self.f[i];
            b[3 + i] = if active & (1 << i) != 0 { 0.0 } else { self.g[i] };
        }
        b
    }

    fn unpack(active: u8, x: [f64; 6]) -> (Vec3, Vec3) {
        let mut phi = [x[0], x[1], x[2]];
        for (i, v) in phi.iter_mut().enumerate() {
            if active & (1 << i) != 0 {
                *v = 0.0;
            }
        }
        (phi, [x[3], x[4], x[5]])
    }

    /// Solves for one active set; `None` when the system is singular.
    fn solve_face(&self, active: u8) -> Option<(Vec3, Vec3)> {
        let a = self.matrix(active);
        let b = self.rhs(active);
        let mut aug = [[0.0; 7]; 6];
        for i in 0..6 {
            aug[i][..6].copy_from_slice(&a[i]);
            aug[i][6] = b[i];
        }
        gauss6(aug).map(|x| Self::unpack(active, x))
    }

    fn inverse(&self, active: u8) -> Option<FaceInverse> {
        let a = self.matrix(active);
        let mut inv = [[0.0; 6]; 6];
        for k in 0..6 {
            let mut aug = [[0.0; 7]; 6];
            for i in 0..6 {
                aug[i][..6].copy_from_slice(&a[i]);
            }
            aug[k][6] = 1.0;
            let col = gauss6(aug)?;
            for i in 0..6 {
                inv[i][k] = col[i];
            }
        }
        Some(FaceInverse { active, inv })
    }

    /// Largest violated sign condition of a candidate, scaled to `phi` units
    /// for the primal part and to potential units for the multipliers.
    fn violation(&self, active: u8, phi: Vec3, mu: Vec3) -> f64 {
        let s = phi[0] + phi[1] + phi[2];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            if active & (1 << i) != 0 {
                let r = (self.c * s - self.m * mu[i] - self.g[i]) / self.m;
                worst = worst.max(-r);
            } else {
                worst = worst.max(-phi[i]);
            }
        }
        worst
    }

    /// Enumerates the faces, starting from `hint`, and returns the first
    /// admissible candidate, or the least violating one.
    pub fn solve(&self, hint: u8, tol: f64) -> NodalSolution {
        let mut best: Option<(f64, NodalSolution)> = None;
        let order = std::iter::once(hint).chain((0..FACES).filter(|&s| s != hint));
        for active in order {
            let Some((phi, mu)) = self.solve_face(active) else { continue };
            let v = self.violation(active, phi, mu);
            let candidate = NodalSolution { phi, mu, active };
            if v <= tol {
                return clamp(candidate);
            }
            if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                best = Some((v, candidate));
            }
        }
        clamp(best.expect("at least one face is nonsingular").1)
    }

    /// As [`solve`](Self::solve), but first tries the face stored in `cache`
    /// and refreshes the cache when another face is accepted.
    pub fn solve_cached(&self, cache: &mut Option<FaceInverse>, hint: u8, tol: f64) -> NodalSolution {
        if let Some(c) = cache.as_ref().filter(|c| c.active == hint) {
            let b = self.rhs(hint);
            let mut x = [0.0; 6];
            for (xi, row) in x.iter_mut().zip(&c.inv) {
                *xi = row.iter().zip(&b).map(|(a, b)| a * b).sum();
            }
            let (phi, mu) = Self::unpack(hint, x);
            if self.violation(hint, phi, mu) <= tol {
                return clamp(NodalSolution { phi, mu, active: hint });
            }
        }
        let s = self.solve(hint, tol);
        if cache.map_or(true, |c| c.active != s.active) {
            *cache = self.inverse(s.active);
        }
        s
    }
}

fn clamp(mut s: NodalSolution) -> NodalSolution {
    for v in &mut s.phi {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    s
}

/// Gaussian elimination with row equilibration and partial pivoting on an
/// augmented 6x7 system.
pub(crate) fn gauss6(mut a: [[f64; 7]; 6]) -> Option<[f64; 6]> {
    for row in a.iter_mut() {
        let scale = row[..6].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return None;
        }
        for v in row.iter_mut() {
            *v /= scale;
        }
    }
    for k in 0..6 {
        let p = (k..6).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-14 {
            return None;
        }
        a.swap(k, p);
        for i in k + 1..6 {
            let l = a[i][k] / a[k][k];
            if l != 0.0 {
                for j in k..7 {
                    a[i][j] -= l * a[k][j];
                }
            }
        }
    }
    let mut x = [0.0; 6];
    for k in (0..6).rev() {
        let mut s = a[k][6];
        for j in k + 1..6 {
            s -= a[k][j] * x[j];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}
