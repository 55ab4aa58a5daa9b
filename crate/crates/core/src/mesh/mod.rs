//! Conforming triangulations with newest-vertex bisection.
//!
//! An [`AdaptiveMesh`] exposes a compact view (vertex coordinates, positively
//! oriented triangles, per-vertex boundary flags) and keeps the bisection
//! hierarchy needed to refine and coarsen it. Every triangle stores its
//! refinement edge as its first two vertices; the third vertex is the newest
//! vertex. Bisecting `(a, b, c)` at the midpoint `m` of `ab` produces the
//! children `(c, a, m)` and `(b, c, m)`.

mod adapt;
mod build;

use std::collections::HashMap;

pub use adapt::TransferMap;
pub use build::{build_disc_mesh, build_square_mesh};

/// Boundary classification of a vertex or an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryFlag {
    Interior,
    /// Carries the Dirichlet data of the nutrient and the pressure.
    OuterDirichlet,
    /// Mirror axis of a quarter domain; natural conditions for every field.
    SymmetryAxis,
}

impl BoundaryFlag {
    pub fn is_dirichlet(self) -> bool {
        self == BoundaryFlag::OuterDirichlet
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Leaf {
    /// Vertex store ids; `v[0]v[1]` is the refinement edge.
    pub v: [u32; 3],
    /// Markers of the edges `v0v1`, `v1v2`, `v2v0`.
    pub marks: [BoundaryFlag; 3],
    pub generation: u16,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct VertexStore {
    pub coords: Vec<[f64; 2]>,
    /// Endpoints of the edge a non-macro vertex bisects.
    pub parents: Vec<Option<[u32; 2]>>,
    pub alive: Vec<bool>,
    pub free: Vec<u32>,
}

impl VertexStore {
    pub fn push(&mut self, x: [f64; 2], parents: Option<[u32; 2]>) -> u32 {
        if let Some(id) = self.free.pop() {
            let i = id as usize;
            self.coords[i] = x;
            self.parents[i] = parents;
            self.alive[i] = true;
            id
        } else {
            self.coords.push(x);
            self.parents.push(parents);
            self.alive.push(true);
            (self.coords.len() - 1) as u32
        }
    }

    pub fn remove(&mut self, id: u32) {
        self.alive[id as usize] = false;
        self.parents[id as usize] = None;
        self.free.push(id);
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }
}

pub(crate) fn edge_key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A conforming 2D triangulation together with its bisection hierarchy.
#[derive(Debug, Clone)]
pub struct AdaptiveMesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    generation: Vec<u16>,
    boundary: Vec<BoundaryFlag>,
    pub(crate) store: VertexStore,
    pub(crate) leaves: Vec<Leaf>,
    pub(crate) midpoints: HashMap<(u32, u32), u32>,
    /// Compact vertex index -> store id.
    pub(crate) vertex_ids: Vec<u32>,
}

impl AdaptiveMesh {
    pub(crate) fn from_hierarchy(
        store: VertexStore,
        leaves: Vec<Leaf>,
        midpoints: HashMap<(u32, u32), u32>,
    ) -> Self {
        let mut used = vec![false; store.len()];
        for leaf in &leaves {
            for &v in &leaf.v {
                used[v as usize] = true;
            }
        }
        let mut compact = vec![usize::MAX; store.len()];
        let mut vertex_ids = Vec::new();
        for (id, &u) in used.iter().enumerate() {
            if u {
                compact[id] = vertex_ids.len();
                vertex_ids.push(id as u32);
            }
        }
        let vertices = vertex_ids
            .iter()
            .map(|&id| store.coords[id as usize])
            .collect();
        let triangles = leaves
            .iter()
            .map(|l| l.v.map(|v| compact[v as usize]))
            .collect();
        let generation = leaves.iter().map(|l| l.generation).collect();

        let mut boundary = vec![BoundaryFlag::Interior; vertex_ids.len()];
        for leaf in &leaves {
            for e in 0..3 {
                let mark = leaf.marks[e];
                if mark == BoundaryFlag::Interior {
                    continue;
                }
                for v in [leaf.v[e], leaf.v[(e + 1) % 3]] {
                    let slot = &mut boundary[compact[v as usize]];
                    *slot = match (*slot, mark) {
                        (BoundaryFlag::OuterDirichlet, _) | (_, BoundaryFlag::OuterDirichlet) => {
                            BoundaryFlag::OuterDirichlet
                        }
                        _ => BoundaryFlag::SymmetryAxis,
                    };
                }
            }
        }

        AdaptiveMesh {
            vertices,
            triangles,
            generation,
            boundary,
            store,
            leaves,
            midpoints,
            vertex_ids,
        }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_flags(&self) -> &[BoundaryFlag] {
        &self.boundary
    }

    /// Number of bisections separating each triangle from its macro element.
    pub fn generations(&self) -> &[u16] {
        &self.generation
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// The refinement edge of triangle `t` as compact vertex indices.
    pub fn refinement_edge(&self, t: usize) -> [usize; 2] {
        [self.triangles[t][0], self.triangles[t][1]]
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn diameter(&self, t: usize) -> f64 {
        let p = self.triangles[t].map(|v| self.vertices[v]);
        triangle_diameter(&p)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.signed_area(t)).sum()
    }

    /// Parent triangle of `t` (as compact vertex indices, refinement edge
    /// first) when `t` is not a macro element.
    pub fn parent(&self, t: usize) -> Option<[usize; 3]> {
        let leaf = &self.leaves[t];
        let parent = adapt::parent_of(&self.store, leaf)?;
        let mut out = [0; 3];
        for (slot, id) in out.iter_mut().zip(parent) {
            *slot = self.vertex_ids.binary_search(&id).ok()?;
        }
        Some(out)
    }

    /// Per-edge conformity check: every edge is shared by exactly two
    /// triangles with opposite orientation or lies on the boundary, and no
    /// vertex sits in the interior of an edge.
    pub fn check_conforming(&self) -> Result<(), String> {
        let mut edges: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = if a < b { (a, b) } else { (b, a) };
                edges.entry(key).or_default().push((t, a < b));
            }
        }
        let mut is_boundary_vertex = vec![false; self.num_vertices()];
        for (&(a, b), owners) in &edges {
            match owners.len() {
                1 => {
                    is_boundary_vertex[a] = true;
                    is_boundary_vertex[b] = true;
                }
                2 if owners[0].1 != owners[1].1 => {}
                2 => return Err(format!("edge ({a},{b}) has inconsistent orientation")),
                n => return Err(format!("edge ({a},{b}) shared by {n} triangles")),
            }
        }
        for (v, &flag) in self.boundary.iter().enumerate() {
            if (flag != BoundaryFlag::Interior) != is_boundary_vertex[v] {
                return Err(format!("vertex {v} boundary flag {flag:?} disagrees with topology"));
            }
        }
        for key in self.midpoints.keys() {
            let (a, b) = *key;
            let ca = self.vertex_ids.binary_search(&a);
            let cb = self.vertex_ids.binary_search(&b);
            if let (Ok(ca), Ok(cb)) = (ca, cb) {
                let k = if ca < cb { (ca, cb) } else { (cb, ca) };
                if edges.contains_key(&k) {
                    return Err(format!("hanging vertex on edge ({ca},{cb})"));
                }
            }
        }
        for t in 0..self.num_triangles() {
            if self.signed_area(t) <= 0.0 {
                return Err(format!("triangle {t} is not positively oriented"));
            }
        }
        Ok(())
    }
}

pub(crate) fn triangle_diameter(p: &[[f64; 2]; 3]) -> f64 {
    let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    d(p[0], p[1]).max(d(p[1], p[2])).max(d(p[2], p[0]))
}
