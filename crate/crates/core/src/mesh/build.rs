use std::collections::HashMap;
use std::f64::consts::PI;

use super::{AdaptiveMesh, BoundaryFlag, Leaf, VertexStore};
use crate::error::{Error, Result};

/// Uniform triangulation of `(-w, w)^2`, or of `(0, w)^2` when `quarter` is
/// set, with two right isosceles triangles per lattice cell.
///
/// The lattice spacing is `w / ceil(w / h) <= h`. Cell diagonals alternate
/// with the parity of the cell index counted from the origin, so the mesh is
/// mirror symmetric about both axes and every diagonal is the refinement
/// edge of both triangles sharing it.
pub fn build_square_mesh(half_width: f64, h: f64, quarter: bool) -> Result<AdaptiveMesh> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidArgument(format!("half width must be positive, got {half_width}")));
    }
    if !(h > 0.0) || h > half_width * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "mesh size must lie in (0, half_width], got {h}"
        )));
    }
    let n = (half_width / h - 1e-9).ceil().max(1.0) as i64;
    let spacing = half_width / n as f64;
    let (lo, hi) = if quarter { (0, n) } else { (-n, n) };
    let side = (hi - lo + 1) as usize;

    let mut store = VertexStore::default();
    for j in lo..=hi {
        for i in lo..=hi {
            store.push([i as f64 * spacing, j as f64 * spacing], None);
        }
    }
    let id = |i: i64, j: i64| ((j - lo) as usize * side + (i - lo) as usize) as u32;

    let line_mark = |fixed: i64| {
        if quarter && fixed == 0 {
            BoundaryFlag::SymmetryAxis
        } else {
            BoundaryFlag::OuterDirichlet
        }
    };
    // Marker of the lattice edge between (i0,j0) and (i1,j1).
    let mark = |(i0, j0): (i64, i64), (i1, j1): (i64, i64)| {
        if i0 == i1 && (i0 == lo || i0 == hi) {
            line_mark(i0)
        } else if j0 == j1 && (j0 == lo || j0 == hi) {
            line_mark(j0)
        } else {
            BoundaryFlag::Interior
        }
    };

    let mut leaves = Vec::with_capacity(2 * (side - 1) * (side - 1));
    for j in lo..hi {
        for i in lo..hi {
            let p00 = (i, j);
            let p10 = (i + 1, j);
            let p01 = (i, j + 1);
            let p11 = (i + 1, j + 1);
            let tris = if (i + j).rem_euclid(2) == 0 {
                [[p11, p00, p10], [p00, p11, p01]]
            } else {
                [[p01, p10, p11], [p10, p01, p00]]
            };
            for t in tris {
                leaves.push(Leaf {
                    v: t.map(|(a, b)| id(a, b)),
                    marks: [mark(t[0], t[1]), mark(t[1], t[2]), mark(t[2], t[0])],
                    generation: 0,
                });
            }
        }
    }
    Ok(AdaptiveMesh::from_hierarchy(store, leaves, HashMap::new()))
}

/// Triangulation of the regular polygon inscribed in the circle of the given
/// radius, built from concentric rings of spacing about `h`.
///
/// Ring `k` carries `ceil(2 pi r_k / h)` equally spaced vertices on the circle
/// of radius `r_k`; consecutive rings are stitched in angular order. The
/// refinement edge of every macro triangle is its longest edge.
pub fn build_disc_mesh(radius: f64, h: f64) -> Result<AdaptiveMesh> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    if !(h > 0.0) || h > 2.0 * radius {
        return Err(Error::InvalidArgument(format!("mesh size must lie in (0, 2 radius], got {h}")));
    }
    let rings = (radius / h - 1e-9).ceil().max(1.0) as usize;
    let mut store = VertexStore::default();
    store.push([0.0, 0.0], None);

    // (first store id, count) per ring
    let mut ring_ids = Vec::with_capacity(rings);
    for k in 1..=rings {
        let r = radius * k as f64 / rings as f64;
        let count = ((2.0 * PI * r / h) - 1e-9).ceil().max(3.0) as usize;
        let first = store.len() as u32;
        for i in 0..count {
            let theta = 2.0 * PI * i as f64 / count as f64;
            store.push([r * theta.cos(), r * theta.sin()], None);
        }
        ring_ids.push((first, count));
    }

    let outer = *ring_ids.last().unwrap();
    let on_outer = |v: u32| v >= outer.0;
    let mut raw: Vec<[u32; 3]> = Vec::new();
    let (first, count) = ring_ids[0];
    for i in 0..count as u32 {
        raw.push([0, first + i, first + (i + 1) % count as u32]);
    }
    for w in ring_ids.windows(2) {
        let ((fa, na), (fb, nb)) = (w[0], w[1]);
        let (mut i, mut j) = (0usize, 0usize);
        while i < na || j < nb {
            let next_inner = (i + 1) as f64 / na as f64;
            let next_outer = (j + 1) as f64 / nb as f64;
            let a = fa + (i % na) as u32;
            let b = fb + (j % nb) as u32;
            if j < nb && (i >= na || next_outer <= next_inner) {
                raw.push([a, b, fb + ((j + 1) % nb) as u32]);
                j += 1;
            } else {
                raw.push([a, b, fa + ((i + 1) % na) as u32]);
                i += 1;
            }
        }
    }

    let mut leaves = Vec::with_capacity(raw.len());
    for mut t in raw {
        let p = t.map(|v| store.coords[v as usize]);
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        if area2 < 0.0 {
            t.swap(1, 2);
        }
        let p = t.map(|v| store.coords[v as usize]);
        let len2 = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
        let lengths = [len2(p[0], p[1]), len2(p[1], p[2]), len2(p[2], p[0])];
        let longest = (0..3).fold(0, |best, e| if lengths[e] > lengths[best] { e } else { best });
        t.rotate_left(longest);
        let marks = [0, 1, 2].map(|e| {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            let consecutive = || {
                let (ia, ib) = (a - outer.0, b - outer.0);
                let n = outer.1 as u32;
                (ia + 1) % n == ib || (ib + 1) % n == ia
            };
            if on_outer(a) && on_outer(b) && consecutive() {
                BoundaryFlag::OuterDirichlet
            } else {
                BoundaryFlag::Interior
            }
        });
        leaves.push(Leaf { v: t, marks, generation: 0 });
    }
    Ok(AdaptiveMesh::from_hierarchy(store, leaves, HashMap::new()))
}
