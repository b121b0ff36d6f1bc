//! Mesh quality improvement: Delaunay-style edge flips and guarded
//! Laplacian smoothing. Boundary connectivity is never touched; boundary
//! nodes move only along their own exact curve.

use std::collections::{HashMap, HashSet};

use crate::geometry::MeridianProfile;

use super::{signed_area, triangle_angles, Anchor, WorkMesh};

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Repeated Lawson passes: flip every interior edge whose opposite vertex
/// lies strictly inside the circumcircle, as long as the flipped pair stays
/// positively oriented. Stops early once a pass performs no flips.
pub(super) fn lawson_flips(work: &mut WorkMesh, max_passes: usize) {
    let boundary: HashSet<(usize, usize)> = work
        .boundary_edges
        .iter()
        .map(|e| ordered(e.a, e.b))
        .collect();

    for _ in 0..max_passes {
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in work.triangles.iter().enumerate() {
            for k in 0..3 {
                by_edge
                    .entry(ordered(tri[k], tri[(k + 1) % 3]))
                    .or_default()
                    .push(t);
            }
        }
        let mut keys: Vec<_> = by_edge.keys().copied().collect();
        keys.sort_unstable();

        let mut flips = 0usize;
        for key in keys {
            if boundary.contains(&key) {
                continue;
            }
            let tris = &by_edge[&key];
            if tris.len() != 2 {
                continue;
            }
            let (t1, t2) = (tris[0], tris[1]);
            // Triangles may have been rewritten by an earlier flip in this
            // pass; re-derive and skip stale entries.
            let Some((a, b, c)) = split_on(work.triangles[t1], key) else {
                continue;
            };
            let Some((b2, a2, d)) = split_on(work.triangles[t2], key) else {
                continue;
            };
            if (a, b) != (a2, b2) {
                continue; // inconsistent orientation; leave to validation
            }
            let (pa, pb, pc, pd) = (
                work.nodes[a],
                work.nodes[b],
                work.nodes[c],
                work.nodes[d],
            );
            let scale = dist(pa, pb)
                .max(dist(pc, pd))
                .max(dist(pa, pc))
                .max(dist(pb, pd));
            if in_circle(pa, pb, pc, pd) <= 1e-12 * scale.powi(4) {
                continue;
            }
            let area_tol = 1e-12 * scale * scale;
            if signed_area(pa, pd, pc) <= area_tol || signed_area(pd, pb, pc) <= area_tol {
                continue; // quad not strictly convex
            }
            work.triangles[t1] = [a, d, c];
            work.triangles[t2] = [d, b, c];
            flips += 1;
        }
        if flips == 0 {
            break;
        }
    }
}

/// If `tri` contains the undirected edge `key`, returns (x, y, opp) where
/// (x, y) is that edge in the triangle's own direction.
fn split_on(tri: [usize; 3], key: (usize, usize)) -> Option<(usize, usize, usize)> {
    for k in 0..3 {
        let x = tri[k];
        let y = tri[(k + 1) % 3];
        if ordered(x, y) == key {
            return Some((x, y, tri[(k + 2) % 3]));
        }
    }
    None
}

/// Strictly positive when d lies inside the circumcircle of the positively
/// oriented triangle (a, b, c).
fn in_circle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let m = [a, b, c].map(|p| {
        let x = p[0] - d[0];
        let y = p[1] - d[1];
        [x, y, x * x + y * y]
    });
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Guarded Laplacian smoothing. Interior nodes move toward the centroid of
/// their neighbors; boundary nodes slide along their own curve to the
/// parameter midpoint of their two boundary neighbors (junctions stay
/// fixed). A move is kept only if every incident triangle stays positive
/// and the local minimum angle does not get worse (or stays comfortable).
pub(super) fn smooth(profile: &MeridianProfile, work: &mut WorkMesh, passes: usize) {
    for _ in 0..passes {
        let n = work.nodes.len();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (t, tri) in work.triangles.iter().enumerate() {
            for k in 0..3 {
                incident[tri[k]].push(t);
                neighbors[tri[k]].push(tri[(k + 1) % 3]);
                neighbors[tri[k]].push(tri[(k + 2) % 3]);
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let mut next_on: HashMap<usize, usize> = HashMap::new();
        let mut prev_on: HashMap<usize, usize> = HashMap::new();
        for e in &work.boundary_edges {
            next_on.insert(e.a, e.b);
            prev_on.insert(e.b, e.a);
        }

        for i in 0..n {
            let proposal = match work.anchors[i] {
                Anchor::Fixed => continue,
                Anchor::Interior => {
                    if neighbors[i].is_empty() {
                        continue;
                    }
                    let mut c = [0.0, 0.0];
                    for &j in &neighbors[i] {
                        c[0] += work.nodes[j][0];
                        c[1] += work.nodes[j][1];
                    }
                    let inv = 1.0 / neighbors[i].len() as f64;
                    (None, [c[0] * inv, c[1] * inv])
                }
                Anchor::OnCurve { piece, t: _ } => {
                    let (Some(&prev), Some(&next)) = (prev_on.get(&i), next_on.get(&i)) else {
                        continue;
                    };
                    let param = |node: usize, junction_value: f64| match work.anchors[node] {
                        Anchor::OnCurve { piece: p2, t } if p2 == piece => t,
                        _ => junction_value,
                    };
                    let tm = 0.5 * (param(prev, 0.0) + param(next, 1.0));
                    (
                        Some((piece, tm)),
                        profile.pieces()[piece].curve.point(tm),
                    )
                }
            };
            let (new_anchor, candidate) = proposal;

            let quality = |pos: [f64; 2]| -> (f64, f64) {
                let mut min_angle = f64::INFINITY;
                let mut min_area = f64::INFINITY;
                for &t in &incident[i] {
                    let ps = work.triangles[t].map(|j| if j == i { pos } else { work.nodes[j] });
                    min_area = min_area.min(signed_area(ps[0], ps[1], ps[2]));
                    let angs = triangle_angles(ps[0], ps[1], ps[2]);
                    min_angle = min_angle.min(angs[0]).min(angs[1]).min(angs[2]);
                }
                (min_angle, min_area)
            };
            let (old_angle, _) = quality(work.nodes[i]);
            let (new_angle, new_area) = quality(candidate);
            if new_area > 1e-14 && (new_angle >= old_angle - 1e-9 || new_angle >= 22.0) {
                work.nodes[i] = candidate;
                if let Some((piece, t)) = new_anchor {
                    work.anchors[i] = Anchor::OnCurve { piece, t };
                }
            }
        }
    }
}
