//! P1 assembly on an [`AdaptiveMesh`]: lumped mass, stiffness, the
//! mobility-weighted block stiffness, explicit transport loads and
//! Dirichlet elimination.

mod sparse;

use std::sync::Arc;

pub use sparse::{solve_cg, BlockCsr, CgInfo, CsrMatrix, Pattern};

use crate::mesh::{AdaptiveMesh, BoundaryFlag};
use crate::physics::{self, Vec3};

/// Geometric data of the P1 space on one mesh.
#[derive(Debug, Clone)]
pub struct P1Space {
    triangles: Vec<[usize; 3]>,
    areas: Vec<f64>,
    grads: Vec<[[f64; 2]; 3]>,
    mass: Vec<f64>,
    boundary: Vec<BoundaryFlag>,
    pattern: Arc<Pattern>,
    /// Value positions of the 3x3 element couplings in the pattern.
    elem_pos: Vec<[[usize; 3]; 3]>,
}

impl P1Space {
    pub fn new(mesh: &AdaptiveMesh) -> Self {
        Self::from_parts(mesh.vertices(), mesh.triangles(), mesh.boundary_flags())
    }

    pub fn from_parts(vertices: &[[f64; 2]], triangles: &[[usize; 3]], boundary: &[BoundaryFlag]) -> Self {
        let n = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut grads = Vec::with_capacity(triangles.len());
        let mut mass = vec![0.0; n];
        let mut adj = vec![Vec::new(); n];
        for tri in triangles {
            let [p0, p1, p2] = tri.map(|v| vertices[v]);
            let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
            let area = 0.5 * det;
            areas.push(area);
            grads.push([
                [(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det],
                [(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det],
                [(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det],
            ]);
            for &v in tri {
                mass[v] += area / 3.0;
                adj[v].extend(tri.iter().copied().filter(|&w| w != v));
            }
        }
        let pattern = Arc::new(Pattern::from_adjacency(adj));
        let elem_pos = triangles
            .iter()
            .map(|tri| tri.map(|a| tri.map(|b| pattern.find(a, b).expect("element coupling in pattern"))))
            .collect();
        P1Space {
            triangles: triangles.to_vec(),
            areas,
            grads,
            mass,
            boundary: boundary.to_vec(),
            pattern,
            elem_pos,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.mass.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    /// Constant gradients of the three barycentric coordinates on `t`.
    pub fn grads(&self, t: usize) -> &[[f64; 2]; 3] {
        &self.grads[t]
    }

    /// Lumped mass weights `sum_{T ni v} |T|/3`.
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn boundary_flags(&self) -> &[BoundaryFlag] {
        &self.boundary
    }

    pub fn pattern(&self) -> &Arc<Pattern> {
        &self.pattern
    }

    /// Gradient of a nodal field on triangle `t`.
    pub fn gradient(&self, t: usize, f: &[f64]) -> [f64; 2] {
        let g = &self.grads[t];
        let tri = &self.triangles[t];
        let mut d = [0.0; 2];
        for k in 0..3 {
            d[0] += f[tri[k]] * g[k][0];
            d[1] += f[tri[k]] * g[k][1];
        }
        d
    }

    /// Gradients of the three components of a nodal triple field on `t`.
    pub fn gradient3(&self, t: usize, f: &[Vec3]) -> [[f64; 2]; 3] {
        let g = &self.grads[t];
        let tri = &self.triangles[t];
        let mut d = [[0.0; 2]; 3];
        for k in 0..3 {
            let fk = f[tri[k]];
            for i in 0..3 {
                d[i][0] += fk[i] * g[k][0];
                d[i][1] += fk[i] * g[k][1];
            }
        }
        d
    }
}

pub fn lumped_mass(mesh: &AdaptiveMesh) -> Vec<f64> {
    P1Space::new(mesh).mass
}

/// `a_ij = (grad chi_i, grad chi_j)`.
pub fn stiffness(space: &P1Space) -> CsrMatrix {
    let mut a = CsrMatrix::zeros(space.pattern.clone());
    for (t, pos) in space.elem_pos.iter().enumerate() {
        let g = &space.grads[t];
        let area = space.areas[t];
        for r in 0..3 {
            for c in 0..3 {
                a.val[pos[r][c]] += area * (g[r][0] * g[c][0] + g[r][1] * g[c][1]);
            }
        }
    }
    a
}

/// Block operator of `(C(phi_prev) grad mu, grad eta)` with `C` evaluated at
/// the element mean of `phi_prev`.
pub fn mobility_stiffness(space: &P1Space, phi_prev: &[Vec3], delta_c: f64) -> BlockCsr {
    let mut m = BlockCsr::zeros(space.pattern.clone());
    for (t, pos) in space.elem_pos.iter().enumerate() {
        let tri = space.triangles[t];
        let mut mean = [0.0; 3];
        for &v in &tri {
            for i in 0..3 {
                mean[i] += phi_prev[v][i] / 3.0;
            }
        }
        let c = physics::mobility(mean, delta_c);
        let g = &space.grads[t];
        let area = space.areas[t];
        for r in 0..3 {
            for s in 0..3 {
                let k = area * (g[r][0] * g[s][0] + g[r][1] * g[s][1]);
                let block = &mut m.val[pos[r][s]];
                for i in 0..3 {
                    for j in 0..3 {
                        block[i][j] += k * c[i][j];
                    }
                }
            }
        }
    }
    m
}

/// `w = mu - N_phi(sigma)` at every vertex.
pub fn effective_potential(mu: &[Vec3], sigma: &[f64], chi_phi: f64) -> Vec<Vec3> {
    mu.iter()
        .zip(sigma)
        .map(|(m, &s)| {
            let n = physics::nutrient_coupling(s, chi_phi);
            [m[0] - n[0], m[1] - n[1], m[2] - n[2]]
        })
        .collect()
}

/// Calls `f(t, vertex slot, g)` with `g = grad p - sum_l grad phi_l w_l(v)`
/// at every vertex of every triangle.
fn for_each_velocity(space: &P1Space, phi: &[Vec3], w: &[Vec3], p: &[f64], mut f: impl FnMut(usize, usize, [f64; 2])) {
    for t in 0..space.triangles.len() {
        let gp = space.gradient(t, p);
        let gphi = space.gradient3(t, phi);
        for (slot, &v) in space.triangles[t].iter().enumerate() {
            let wv = w[v];
            let mut g = gp;
            for l in 0..3 {
                g[0] -= gphi[l][0] * wv[l];
                g[1] -= gphi[l][1] * wv[l];
            }
            f(t, slot, g);
        }
    }
}

/// Explicit Darcy transport load of the phase equation,
/// `K ((grad phi)(grad p - (grad phi)^T (mu - N_phi(sigma))), eta)_h`.
pub fn convection_rhs(
    space: &P1Space,
    phi: &[Vec3],
    mu: &[Vec3],
    p: &[f64],
    sigma: &[f64],
    k: f64,
    chi_phi: f64,
) -> Vec<Vec3> {
    let mut load = vec![[0.0; 3]; space.num_vertices()];
    if k == 0.0 {
        return load;
    }
    let w = effective_potential(mu, sigma, chi_phi);
    let mut gphi = [[0.0; 2]; 3];
    let mut current = usize::MAX;
    for_each_velocity(space, phi, &w, p, |t, slot, g| {
        if t != current {
            gphi = space.gradient3(t, phi);
            current = t;
        }
        let v = space.triangles[t][slot];
        let q = k * space.areas[t] / 3.0;
        for i in 0..3 {
            load[v][i] += q * (gphi[i][0] * g[0] + gphi[i][1] * g[1]);
        }
    });
    load
}

/// Explicit transport load of the nutrient equation,
/// `K (grad s . (grad p - (grad phi)^T w), chi)_h` for a prescribed `w`.
pub fn scalar_convection_rhs(space: &P1Space, s: &[f64], phi: &[Vec3], w: &[Vec3], p: &[f64], k: f64) -> Vec<f64> {
    let mut load = vec![0.0; space.num_vertices()];
    if k == 0.0 {
        return load;
    }
    let mut gs = [0.0; 2];
    let mut current = usize::MAX;
    for_each_velocity(space, phi, w, p, |t, slot, g| {
        if t != current {
            gs = space.gradient(t, s);
            current = t;
        }
        let v = space.triangles[t][slot];
        load[v] += k * space.areas[t] / 3.0 * (gs[0] * g[0] + gs[1] * g[1]);
    });
    load
}

/// `((grad phi)^T w, grad chi)_h` for every test function `chi`.
pub fn gradient_load(space: &P1Space, phi: &[Vec3], w: &[Vec3]) -> Vec<f64> {
    let mut load = vec![0.0; space.num_vertices()];
    for t in 0..space.triangles.len() {
        let tri = space.triangles[t];
        let gphi = space.gradient3(t, phi);
        let mut mean = [0.0; 3];
        for &v in &tri {
            for i in 0..3 {
                mean[i] += w[v][i] / 3.0;
            }
        }
        let mut g = [0.0; 2];
        for i in 0..3 {
            g[0] += gphi[i][0] * mean[i];
            g[1] += gphi[i][1] * mean[i];
        }
        let grads = &space.grads[t];
        for (k, &v) in tri.iter().enumerate() {
            load[v] += space.areas[t] * (g[0] * grads[k][0] + g[1] * grads[k][1]);
        }
    }
    load
}

/// Imposes `u = value` on every outer-Dirichlet vertex: the row becomes the
/// identity and the column is moved to the load, keeping symmetry.
pub fn apply_dirichlet(a: &mut CsrMatrix, rhs: &mut [f64], flags: &[BoundaryFlag], value: f64) {
    let fixed: Vec<bool> = flags.iter().map(|f| f.is_dirichlet()).collect();
    let pattern = a.pattern.clone();
    for i in 0..a.n() {
        if fixed[i] {
            for k in pattern.row(i) {
                a.val[k] = if pattern.col[k] == i { 1.0 } else { 0.0 };
            }
            rhs[i] = value;
        } else {
            for k in pattern.row(i) {
                let j = pattern.col[k];
                if fixed[j] {
                    rhs[i] -= a.val[k] * value;
                    a.val[k] = 0.0;
                }
            }
        }
    }
}
