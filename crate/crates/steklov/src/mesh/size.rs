//! Background size field and exact-on-curve boundary sampling.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryPiece, Curve, Group, MeridianProfile};

use super::{Anchor, BoundaryEdge, Feature, MeshParams};

/// Growth rate of the size field away from graded features. A slope of 0.3
/// bounds the ideal size ratio of adjacent elements by roughly 1.3, leaving
/// headroom under the guaranteed 1.5 for placement scatter.
const SLOPE: f64 = 0.3;

/// Geometric primitive a grading entry attaches to.
enum Source {
    Point([f64; 2]),
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        theta_lo: f64,
        sweep: f64,
    },
}

impl Source {
    fn from_curve(curve: &Curve) -> Source {
        match *curve {
            Curve::Segment { a, b } => Source::Segment { a, b },
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => Source::Arc {
                center,
                radius,
                theta_lo: theta0.min(theta1),
                sweep: (theta1 - theta0).abs(),
            },
        }
    }

    fn distance(&self, p: [f64; 2]) -> f64 {
        match *self {
            Source::Point(q) => dist(p, q),
            Source::Segment { a, b } => {
                let ab = [b[0] - a[0], b[1] - a[1]];
                let len_sq = ab[0] * ab[0] + ab[1] * ab[1];
                let t = if len_sq > 0.0 {
                    (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / len_sq).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                dist(p, [a[0] + t * ab[0], a[1] + t * ab[1]])
            }
            Source::Arc {
                center,
                radius,
                theta_lo,
                sweep,
            } => {
                let phi = (p[1] - center[1]).atan2(p[0] - center[0]);
                if (phi - theta_lo).rem_euclid(TAU) <= sweep {
                    (dist(p, center) - radius).abs()
                } else {
                    let th1 = theta_lo + sweep;
                    let e0 = [
                        center[0] + radius * theta_lo.cos(),
                        center[1] + radius * theta_lo.sin(),
                    ];
                    let e1 = [center[0] + radius * th1.cos(), center[1] + radius * th1.sin()];
                    dist(p, e0).min(dist(p, e1))
                }
            }
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Target edge length as a function of position: the global `h` capped by
/// `target + SLOPE * distance` for every graded feature present in the
/// profile. Grading entries naming features the profile lacks contribute no
/// sources and have no effect.
pub(super) struct SizeField {
    h: f64,
    sources: Vec<(f64, Source)>,
}

impl SizeField {
    pub(super) fn build(profile: &MeridianProfile, params: &MeshParams) -> SizeField {
        let mut sources = Vec::new();
        for (&feature, &target) in &params.grading {
            match feature {
                Feature::TubeWall | Feature::InnerSphere => {
                    let groups: &[Group] = match feature {
                        Feature::TubeWall => {
                            &[Group::TubeWall, Group::OuterFillet, Group::InnerFillet]
                        }
                        _ => &[Group::InnerSphere],
                    };
                    for piece in profile.pieces() {
                        if groups.contains(&piece.group) {
                            sources.push((target, Source::from_curve(&piece.curve)));
                        }
                    }
                }
                Feature::Corners => {
                    for p in steklov_corners(profile) {
                        sources.push((target, Source::Point(p)));
                    }
                }
            }
        }
        SizeField {
            h: params.h,
            sources,
        }
    }

    pub(super) fn eval(&self, p: [f64; 2]) -> f64 {
        let mut s = self.h;
        for (target, source) in &self.sources {
            s = s.min(target + SLOPE * source.distance(p));
        }
        s
    }

    /// Smallest value the field can attain anywhere.
    pub(super) fn min_size(&self) -> f64 {
        self.sources
            .iter()
            .map(|(t, _)| *t)
            .fold(self.h, f64::min)
    }
}

/// Junctions where two steklov pieces meet with a tangent break. Junctions
/// involving the axis (sphere poles) and tangent-continuous fillet joints do
/// not count.
fn steklov_corners(profile: &MeridianProfile) -> Vec<[f64; 2]> {
    let pieces = profile.pieces();
    let np = pieces.len();
    let mut corners = Vec::new();
    for i in 0..np {
        let prev = &pieces[(i + np - 1) % np];
        let cur = &pieces[i];
        if prev.tag != crate::geometry::Tag::Steklov || cur.tag != crate::geometry::Tag::Steklov {
            continue;
        }
        let t0 = prev.curve.tangent(1.0);
        let t1 = cur.curve.tangent(0.0);
        let cos = (t0[0] * t1[0] + t0[1] * t1[1]).clamp(-1.0, 1.0);
        if cos.acos() > 1e-3 {
            corners.push(junction_coordinate(pieces, i));
        }
    }
    corners
}

/// Coordinates of the junction at the start of piece `i`. Segment endpoints
/// are preferred because they hold exact values (axis points carry r = 0
/// exactly, wall points carry r = delta exactly), while arc endpoints are
/// reconstructed through trigonometry and pick up one-ulp noise.
pub(super) fn junction_coordinate(pieces: &[BoundaryPiece], i: usize) -> [f64; 2] {
    let cur = &pieces[i];
    let prev = &pieces[(i + pieces.len() - 1) % pieces.len()];
    if matches!(cur.curve, Curve::Segment { .. }) {
        cur.curve.start()
    } else if matches!(prev.curve, Curve::Segment { .. }) {
        prev.curve.end()
    } else {
        cur.curve.start()
    }
}

/// Boundary discretization: nodes exactly on their curves, edges directed
/// with the region on the left, every edge no longer than the local size.
pub(super) struct SampledBoundary {
    pub nodes: Vec<[f64; 2]>,
    pub anchors: Vec<Anchor>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

pub(super) fn sample_boundary(
    profile: &MeridianProfile,
    field: &SizeField,
) -> Result<SampledBoundary> {
    let pieces = profile.pieces();
    let np = pieces.len();
    let mut nodes: Vec<[f64; 2]> = (0..np).map(|i| junction_coordinate(pieces, i)).collect();
    let mut anchors: Vec<Anchor> = vec![Anchor::Fixed; np];
    let mut boundary_edges = Vec::new();

    for (i, piece) in pieces.iter().enumerate() {
        let speed = piece.curve.length();
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::Meshing(format!("boundary piece {i} has zero length")));
        }
        let (ts, cum) = cumulative_density(&piece.curve, field, speed);
        let total = *cum.last().unwrap();
        // ceil keeps each edge's size-weighted length at most 1, so edges
        // never exceed the local target
        let n_edges = (total - 1e-9).ceil().max(1.0) as usize;

        let mut chain = vec![i];
        for k in 1..n_edges {
            let target = total * k as f64 / n_edges as f64;
            let t = invert_cumulative(&ts, &cum, target);
            nodes.push(piece.curve.point(t));
            anchors.push(Anchor::OnCurve { piece: i, t });
            chain.push(nodes.len() - 1);
        }
        chain.push((i + 1) % np);
        for w in chain.windows(2) {
            boundary_edges.push(BoundaryEdge {
                a: w[0],
                b: w[1],
                tag: piece.tag,
                group: Some(piece.group),
            });
        }
    }
    Ok(SampledBoundary {
        nodes,
        anchors,
        boundary_edges,
    })
}

/// Cumulative integral of speed / size along the piece on a uniform grid,
/// refined until the total stabilizes.
fn cumulative_density(curve: &Curve, field: &SizeField, speed: f64) -> (Vec<f64>, Vec<f64>) {
    let density = |t: f64| speed / field.eval(curve.point(t));
    let mut n = 64usize;
    let mut values: Vec<f64> = (0..=n).map(|j| density(j as f64 / n as f64)).collect();
    let mut total = trapezoid(&values);
    while n < (1 << 17) {
        let mut refined = Vec::with_capacity(2 * n + 1);
        for j in 0..n {
            refined.push(values[j]);
            refined.push(density((j as f64 + 0.5) / n as f64));
        }
        refined.push(values[n]);
        let new_total = trapezoid(&refined);
        let done = (new_total - total).abs() <= 1e-9 * new_total.abs() + 1e-12;
        n *= 2;
        values = refined;
        total = new_total;
        if done {
            break;
        }
    }
    let ts: Vec<f64> = (0..=n).map(|j| j as f64 / n as f64).collect();
    let mut cum = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    cum.push(0.0);
    for j in 1..=n {
        acc += 0.5 * (values[j - 1] + values[j]) / n as f64;
        cum.push(acc);
    }
    (ts, cum)
}

fn trapezoid(values: &[f64]) -> f64 {
    let n = values.len() - 1;
    let inner: f64 = values[1..n].iter().sum();
    (0.5 * values[0] + inner + 0.5 * values[n]) / n as f64
}

fn invert_cumulative(ts: &[f64], cum: &[f64], target: f64) -> f64 {
    let idx = cum
        .partition_point(|&c| c < target)
        .clamp(1, cum.len() - 1);
    let (c0, c1) = (cum[idx - 1], cum[idx]);
    let frac = if c1 > c0 {
        ((target - c0) / (c1 - c0)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ts[idx - 1] + frac * (ts[idx] - ts[idx - 1])
}
