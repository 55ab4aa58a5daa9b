use std::collections::HashMap;

use super::{edge_key, triangle_diameter, AdaptiveMesh, BoundaryFlag, Leaf, VertexStore};
use crate::error::{Error, Result};

/// Interpolation weights from an old mesh onto the vertices of a new one.
///
/// Entry `k` lists three old vertex indices and their barycentric weights at
/// new vertex `k`. Vertices shared by both meshes carry the weight 1 on
/// themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMap {
    old_len: usize,
    entries: Vec<([usize; 3], [f64; 3])>,
}

impl TransferMap {
    pub fn identity(n: usize) -> Self {
        TransferMap {
            old_len: n,
            entries: (0..n).map(|i| ([i, i, i], [1.0, 0.0, 0.0])).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.old_len == self.entries.len()
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(i, (v, w))| v[0] == i && w[0] == 1.0)
    }

    pub fn old_len(&self) -> usize {
        self.old_len
    }

    pub fn new_len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[([usize; 3], [f64; 3])] {
        &self.entries
    }

    /// Barycentric interpolation of an old nodal field.
    ///
    /// # Panics
    /// If `field` is not defined on every old vertex.
    pub fn transfer(&self, field: &[f64]) -> Vec<f64> {
        assert_eq!(field.len(), self.old_len, "field does not live on the old mesh");
        self.entries
            .iter()
            .map(|(v, w)| {
                if w[0] == 1.0 {
                    field[v[0]]
                } else {
                    w[0] * field[v[0]] + w[1] * field[v[1]] + w[2] * field[v[2]]
                }
            })
            .collect()
    }

    /// Componentwise [`transfer`](Self::transfer) of a field of triples.
    pub fn transfer_vec3(&self, field: &[[f64; 3]]) -> Vec<[f64; 3]> {
        assert_eq!(field.len(), self.old_len, "field does not live on the old mesh");
        self.entries
            .iter()
            .map(|(v, w)| {
                if w[0] == 1.0 {
                    field[v[0]]
                } else {
                    [0, 1, 2].map(|c| w[0] * field[v[0]][c] + w[1] * field[v[1]][c] + w[2] * field[v[2]][c])
                }
            })
            .collect()
    }
}

/// Reconstructs the parent of a non-macro leaf from its newest vertex.
pub(crate) fn parent_of(store: &VertexStore, leaf: &Leaf) -> Option<[u32; 3]> {
    let [p, q, m] = leaf.v;
    let [x, y] = store.parents[m as usize]?;
    if q == x || q == y {
        let other = if q == x { y } else { x };
        Some([q, other, p])
    } else {
        let other = if p == x { y } else { x };
        Some([other, p, q])
    }
}

fn barycentric(p: &[[f64; 2]; 3], x: [f64; 2]) -> [f64; 3] {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    let l1 = ((x[0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (x[1] - p[0][1])) / det;
    let l2 = ((p[1][0] - p[0][0]) * (x[1] - p[0][1]) - (x[0] - p[0][0]) * (p[1][1] - p[0][1])) / det;
    let mut w = [1.0 - l1 - l2, l1, l2].map(|l: f64| l.max(0.0));
    let s: f64 = w.iter().sum();
    for l in &mut w {
        *l /= s;
    }
    w
}

impl AdaptiveMesh {
    /// Refines every triangle touching a flagged vertex until its diameter is
    /// at most `h_f * sqrt(2)`, closes the refinement conformingly, then merges
    /// sibling triangles away from flagged vertices while the merged
    /// triangle stays below `h_c * sqrt(2)`.
    ///
    /// Midpoints created between two flagged vertices count as flagged, so a
    /// flagged region is refined throughout and not only along its vertices.
    pub fn adapt(&self, indicator: &[bool], h_f: f64, h_c: f64) -> Result<(AdaptiveMesh, TransferMap)> {
        if indicator.len() != self.num_vertices() {
            return Err(Error::InvalidArgument(format!(
                "indicator has {} entries for {} vertices",
                indicator.len(),
                self.num_vertices()
            )));
        }
        if !(h_f > 0.0) || !(h_c >= h_f) {
            return Err(Error::InvalidArgument(format!("need 0 < h_f <= h_c, got {h_f}, {h_c}")));
        }
        let fine = h_f * 2f64.sqrt() * (1.0 + 1e-9);
        let coarse = h_c * 2f64.sqrt() * (1.0 + 1e-9);

        let mut store = self.store.clone();
        let mut midpoints = self.midpoints.clone();
        let mut flagged = vec![false; store.len()];
        for (c, &f) in indicator.iter().enumerate() {
            flagged[self.vertex_ids[c] as usize] = f;
        }
        let is_flagged = |flagged: &[bool], v: u32| flagged.get(v as usize).copied().unwrap_or(false);

        // Leaves paired with the old triangle they descend from.
        let mut leaves: Vec<(Leaf, u32)> =
            self.leaves.iter().enumerate().map(|(t, l)| (*l, t as u32)).collect();
        // Old triangle used to interpolate each vertex created here.
        let mut created: HashMap<u32, u32> = HashMap::new();
        let mut changed = false;

        loop {
            let mut next = Vec::with_capacity(leaves.len());
            let mut any = false;
            for &(leaf, origin) in &leaves {
                let [a, b, c] = leaf.v;
                let hanging = [(a, b), (b, c), (c, a)]
                    .iter()
                    .any(|&(x, y)| midpoints.contains_key(&edge_key(x, y)));
                let needs_fine = leaf.v.iter().any(|&v| is_flagged(&flagged, v))
                    && triangle_diameter(&leaf.v.map(|v| store.coords[v as usize])) > fine;
                if !(hanging || needs_fine) {
                    next.push((leaf, origin));
                    continue;
                }
                any = true;
                let m = *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
                    let (pa, pb) = (store.coords[a as usize], store.coords[b as usize]);
                    let id = store.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])], Some([a, b]));
                    created.insert(id, origin);
                    id
                });
                // A midpoint between two flagged vertices inherits the flag.
                if is_flagged(&flagged, a) && is_flagged(&flagged, b) {
                    if flagged.len() <= m as usize {
                        flagged.resize(m as usize + 1, false);
                    }
                    flagged[m as usize] = true;
                }
                let [mab, mbc, mca] = leaf.marks;
                let generation = leaf.generation + 1;
                next.push((Leaf { v: [c, a, m], marks: [mca, mab, BoundaryFlag::Interior], generation }, origin));
                next.push((Leaf { v: [b, c, m], marks: [mbc, BoundaryFlag::Interior, mab], generation }, origin));
            }
            leaves = next;
            if !any {
                break;
            }
            changed = true;
        }

        loop {
            let merged = coarsen_round(&mut store, &mut leaves, &mut midpoints, &flagged, &created, coarse);
            if !merged {
                break;
            }
            changed = true;
        }

        if !changed {
            return Ok((self.clone(), TransferMap::identity(self.num_vertices())));
        }

        let (leaves, _origins): (Vec<Leaf>, Vec<u32>) = leaves.into_iter().unzip();
        let mesh = AdaptiveMesh::from_hierarchy(store, leaves, midpoints);
        let entries = mesh
            .vertex_ids
            .iter()
            .map(|&id| {
                if let Some(&origin) = created.get(&id) {
                    let tri = self.triangles[origin as usize];
                    let p = tri.map(|v| self.vertices[v]);
                    (tri, barycentric(&p, mesh.store.coords[id as usize]))
                } else {
                    let old = self
                        .vertex_ids
                        .binary_search(&id)
                        .expect("surviving vertex belongs to the old mesh");
                    ([old, old, old], [1.0, 0.0, 0.0])
                }
            })
            .collect();
        let map = TransferMap { old_len: self.num_vertices(), entries };
        Ok((mesh, map))
    }
}

/// Merges every bisection whose children all lie away from flagged vertices.
/// Vertices created by the current refinement pass are kept. Returns whether
/// anything was merged.
fn coarsen_round(
    store: &mut VertexStore,
    leaves: &mut Vec<(Leaf, u32)>,
    midpoints: &mut HashMap<(u32, u32), u32>,
    flagged: &[bool],
    created: &HashMap<u32, u32>,
    coarse: f64,
) -> bool {
    let is_flagged = |v: u32| flagged.get(v as usize).copied().unwrap_or(false);
    let n = store.len();
    // Per vertex: number of leaves containing it, and whether it is always the newest vertex.
    let mut count = vec![0u8; n];
    let mut newest_only = vec![true; n];
    let mut clean = vec![true; n];
    let mut boundary = vec![false; n];
    for (leaf, _) in leaves.iter() {
        let touches = leaf.v.iter().any(|&v| is_flagged(v));
        for (k, &v) in leaf.v.iter().enumerate() {
            let i = v as usize;
            count[i] = count[i].saturating_add(1);
            if k != 2 {
                newest_only[i] = false;
            }
        }
        let m = leaf.v[2] as usize;
        if touches {
            clean[m] = false;
        }
        if leaf.marks[1] != BoundaryFlag::Interior || leaf.marks[2] != BoundaryFlag::Interior {
            boundary[m] = true;
        }
    }

    let mut candidate = vec![false; n];
    let mut any = false;
    for m in 0..n {
        if store.parents[m].is_none() || !store.alive[m] || !newest_only[m] || !clean[m] {
            continue;
        }
        let expected = if boundary[m] { 2 } else { 4 };
        if count[m] != expected || created.contains_key(&(m as u32)) {
            continue;
        }
        candidate[m] = true;
        any = true;
    }
    if !any {
        return false;
    }

    // Group the children of each candidate by parent.
    let mut groups: HashMap<[u32; 3], [Option<(Leaf, u32)>; 2]> = HashMap::new();
    let mut rest = Vec::with_capacity(leaves.len());
    for &(leaf, origin) in leaves.iter() {
        let m = leaf.v[2] as usize;
        if !candidate[m] {
            rest.push((leaf, origin));
            continue;
        }
        let parent = parent_of(store, &leaf).expect("candidate has parents");
        let is_child0 = parent[0] == leaf.v[1];
        let slot = groups.entry(parent).or_insert([None, None]);
        slot[if is_child0 { 0 } else { 1 }] = Some((leaf, origin));
    }

    // Reject candidates whose merged parents would be too large.
    let mut reject = vec![false; n];
    for (parent, _) in &groups {
        let p = parent.map(|v| store.coords[v as usize]);
        if triangle_diameter(&p) > coarse {
            let m = midpoints[&edge_key(parent[0], parent[1])];
            reject[m as usize] = true;
        }
    }

    let mut merged_any = false;
    for (parent, children) in groups {
        let [Some((c0, origin)), Some((c1, _))] = children else {
            unreachable!("bisection siblings are both leaves")
        };
        let m = c0.v[2];
        if reject[m as usize] {
            rest.push((c0, origin));
            rest.push((c1, origin));
            continue;
        }
        merged_any = true;
        rest.push((
            Leaf {
                v: parent,
                marks: [c0.marks[1], c1.marks[0], c0.marks[0]],
                generation: c0.generation - 1,
            },
            origin,
        ));
    }
    for m in 0..n {
        if candidate[m] && !reject[m] {
            let [a, b] = store.parents[m].unwrap();
            midpoints.remove(&edge_key(a, b));
            store.remove(m as u32);
        }
    }
    // Deterministic leaf order independent of hash iteration.
    rest.sort_by_key(|(l, _)| {
        let mut k = l.v;
        k.sort_unstable();
        k
    });
    *leaves = rest;
    merged_any
}
