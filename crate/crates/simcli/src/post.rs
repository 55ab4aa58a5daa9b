//! Post-processing: the plotted scalar, interface radii along rays and
//! their Fourier amplitudes.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;

use tumour_core::{AdaptiveMesh, PhaseState};

/// Number of Fourier modes reported per radius.
pub const MODES: usize = 8;

pub const DEFAULT_RAYS: usize = 256;

const ON_SEGMENT_TOL: f64 = 1e-12;

/// `(0, 1, 2) . phi` at every vertex.
pub fn scalar_view(phase: &PhaseState) -> Vec<f64> {
    phase.phi.iter().map(|x| x[1] + 2.0 * x[2]).collect()
}

/// Radius samples of one interface along all rays.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSamples {
    /// One entry per ray, `None` when the ray has no crossing.
    pub samples: Vec<Option<f64>>,
}

impl RadiusSamples {
    pub fn present(&self) -> usize {
        self.samples.iter().filter(|s| s.is_some()).count()
    }

    /// Set when more than half of the rays have no crossing.
    pub fn absent(&self) -> bool {
        2 * self.present() < self.samples.len()
    }

    /// Mean over the rays with a crossing, `None` when [`absent`](Self::absent).
    pub fn mean(&self) -> Option<f64> {
        if self.absent() {
            return None;
        }
        let (sum, n) = self.samples.iter().flatten().fold((0.0, 0usize), |(s, n), r| (s + r, n + 1));
        Some(sum / n as f64)
    }

    /// Amplitudes `|c_m|` of modes `1..=8`, so that `R + d cos(m theta)`
    /// gives `d` at mode `m`. Computed over the rays with a crossing.
    pub fn amplitudes(&self) -> Option<[f64; MODES]> {
        if self.absent() {
            return None;
        }
        let n = self.samples.len() as f64;
        let count = self.present() as f64;
        let mut amp = [0.0; MODES];
        for (m, a) in amp.iter_mut().enumerate() {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, r) in self.samples.iter().enumerate() {
                if let Some(r) = r {
                    let theta = (m + 1) as f64 * 2.0 * PI * k as f64 / n;
                    re += r * theta.cos();
                    im -= r * theta.sin();
                }
            }
            *a = 2.0 * re.hypot(im) / count;
        }
        Some(amp)
    }
}

/// Inner (necrotic) and outer (tumour) interface along rays from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Radii {
    pub inner: RadiusSamples,
    pub outer: RadiusSamples,
}

/// Samples the P1 fields along `n_rays` rays at angles `2 pi k / n_rays`.
///
/// The outer radius is the first crossing of `phi_1 = 1/2` and the inner
/// radius the last crossing of `phi_3 = 1/2`. On a quarter mesh the rays are
/// reflected into the first quadrant.
pub fn extract_radii(mesh: &AdaptiveMesh, phase: &PhaseState, n_rays: usize) -> Radii {
    assert!(n_rays >= 16, "need at least 16 rays, got {n_rays}");
    let x = mesh.vertices();
    let quarter = x.iter().all(|p| p[0] >= -1e-14 && p[1] >= -1e-14);
    let mut edges = BTreeSet::new();
    for tri in mesh.triangles() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let dirs: Vec<[f64; 2]> = (0..n_rays)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n_rays as f64;
            if quarter {
                [t.cos().abs(), t.sin().abs()]
            } else {
                [t.cos(), t.sin()]
            }
        })
        .collect();

    let mut by_angle: Vec<(f64, usize)> =
        dirs.iter().enumerate().map(|(k, d)| (d[1].atan2(d[0]).rem_euclid(2.0 * PI), k)).collect();
    by_angle.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut profiles: Vec<Vec<(f64, f64, f64)>> = vec![Vec::new(); n_rays];
    let mut candidates = Vec::new();
    for &(a, b) in &edges {
        let (pa, pb) = (x[a], x[b]);
        rays_between(&by_angle, pa, pb, &mut candidates);
        let e = [pb[0] - pa[0], pb[1] - pa[1]];
        for &k in &candidates {
            let d = dirs[k];
            let denom = e[0] * d[1] - e[1] * d[0];
            if denom == 0.0 {
                continue;
            }
            let s = (pa[1] * d[0] - pa[0] * d[1]) / denom;
            if !(-ON_SEGMENT_TOL..=1.0 + ON_SEGMENT_TOL).contains(&s) {
                continue;
            }
            let s = s.clamp(0.0, 1.0);
            let p = [pa[0] + s * e[0], pa[1] + s * e[1]];
            let t = p[0] * d[0] + p[1] * d[1];
            if t < -ON_SEGMENT_TOL {
                continue;
            }
            let lerp = |i: usize| (1.0 - s) * phase.phi[a][i] + s * phase.phi[b][i];
            profiles[k].push((t.max(0.0), lerp(0), lerp(2)));
        }
    }

    let mut inner = Vec::with_capacity(n_rays);
    let mut outer = Vec::with_capacity(n_rays);
    for mut prof in profiles {
        prof.sort_by(|p, q| p.0.total_cmp(&q.0));
        prof.dedup_by(|p, q| (p.0 - q.0).abs() <= ON_SEGMENT_TOL);
        let host: Vec<(f64, f64)> = prof.iter().map(|p| (p.0, p.1)).collect();
        let necrotic: Vec<(f64, f64)> = prof.iter().map(|p| (p.0, p.2)).collect();
        outer.push(crossings(&host).next());
        inner.push(crossings(&necrotic).last());
    }
    Radii { inner: RadiusSamples { samples: inner }, outer: RadiusSamples { samples: outer } }
}

/// Rays whose angle lies in the angular span of the segment `pa pb`, with
/// a little slack; the exact intersection test is left to the caller.
fn rays_between(by_angle: &[(f64, usize)], pa: [f64; 2], pb: [f64; 2], out: &mut Vec<usize>) {
    const SLACK: f64 = 1e-9;
    let angle = |p: [f64; 2]| (p[0].hypot(p[1]) > 1e-14).then(|| p[1].atan2(p[0]).rem_euclid(2.0 * PI));
    out.clear();
    let (ta, tb) = match (angle(pa), angle(pb)) {
        (Some(ta), Some(tb)) => (ta, tb),
        (Some(t), None) | (None, Some(t)) => (t, t),
        (None, None) => return,
    };
    let (lo, hi) = (ta.min(tb), ta.max(tb));
    let mut push_range = |from: f64, to: f64| {
        let start = by_angle.partition_point(|r| r.0 < from);
        out.extend(by_angle[start..].iter().take_while(|r| r.0 <= to).map(|r| r.1));
    };
    if hi - lo <= PI {
        push_range(lo - SLACK, hi + SLACK);
        if lo < SLACK {
            push_range(2.0 * PI - SLACK, 2.0 * PI);
        }
        if hi > 2.0 * PI - SLACK {
            push_range(0.0, SLACK);
        }
    } else {
        push_range(hi - SLACK, 2.0 * PI);
        push_range(0.0, lo + SLACK);
    }
    out.sort_unstable();
    out.dedup();
}

/// Positions where a piecewise linear profile passes through 1/2.
fn crossings(prof: &[(f64, f64)]) -> impl Iterator<Item = f64> + '_ {
    prof.windows(2).filter_map(|w| {
        let ((t0, f0), (t1, f1)) = (w[0], w[1]);
        let (g0, g1) = (f0 - 0.5, f1 - 0.5);
        if g0 == 0.0 && g1 != 0.0 {
            Some(t0)
        } else if g0 * g1 < 0.0 {
            Some(t0 + (t1 - t0) * g0 / (g0 - g1))
        } else {
            None
        }
    })
}

/// Largest difference between a quarter-domain field, mirrored into all
/// four quadrants, and a full-domain field, over the vertices the two meshes
/// share. Returns the difference and the number of shared vertices.
pub fn mirror_difference(quarter: &AdaptiveMesh, q: &[f64], full: &AdaptiveMesh, f: &[f64]) -> (f64, usize) {
    let key = |x: [f64; 2]| ((x[0] * 1e9).round() as i64, (x[1] * 1e9).round() as i64);
    let lookup: HashMap<(i64, i64), f64> = quarter.vertices().iter().map(|&x| key(x)).zip(q.iter().copied()).collect();
    let mut worst: f64 = 0.0;
    let mut shared = 0;
    for (x, &v) in full.vertices().iter().zip(f) {
        if let Some(w) = lookup.get(&key([x[0].abs(), x[1].abs()])) {
            worst = worst.max((v - w).abs());
            shared += 1;
        }
    }
    (worst, shared)
}
