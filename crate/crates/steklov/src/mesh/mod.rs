//! Graded triangular meshing of meridian profiles and the SMESH text format.
//!
//! The mesher is an advancing front over a background size field: boundary
//! curves are sampled exactly on the geometry at the local target length,
//! the front then grows triangles inward, and the result is cleaned up with
//! Delaunay-style edge flips and guarded Laplacian smoothing (boundary nodes
//! slide along their exact curves). Grading entries shrink the target length
//! near named features (tube wall, corners, inner sphere) with a Lipschitz
//! growth bound, so neighboring element sizes stay within a fixed ratio.

mod front;
mod improve;
mod io;
mod size;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Group, MeridianProfile, Tag};

pub use io::{mesh_from_str, mesh_to_string, read_mesh, write_mesh};

/// Features a grading entry can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Feature {
    TubeWall,
    Corners,
    InnerSphere,
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Feature::TubeWall => "tube_wall",
            Feature::Corners => "corners",
            Feature::InnerSphere => "inner_sphere",
        })
    }
}

impl FromStr for Feature {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tube_wall" => Ok(Feature::TubeWall),
            "corners" => Ok(Feature::Corners),
            "inner_sphere" => Ok(Feature::InnerSphere),
            other => Err(format!("unknown grading feature `{other}`")),
        }
    }
}

/// Mesh generation parameters: global target edge length, per-feature local
/// targets, and a triangle quality bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshParams {
    /// Global target edge length.
    pub h: f64,
    /// Local target length near named features; sizes grow away from a
    /// feature at slope 0.4 until they reach `h`.
    pub grading: BTreeMap<Feature, f64>,
    /// Largest allowed ratio of longest to shortest triangle edge.
    pub max_aspect: f64,
}

impl MeshParams {
    pub fn uniform(h: f64) -> Self {
        MeshParams {
            h,
            grading: BTreeMap::new(),
            max_aspect: 6.0,
        }
    }

    pub fn with_grading(mut self, feature: Feature, local_h: f64) -> Self {
        self.grading.insert(feature, local_h);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::invalid("h", format!("target length must be positive, got {}", self.h)));
        }
        for (feature, &len) in &self.grading {
            if !(len.is_finite() && len > 0.0 && len <= self.h) {
                return Err(Error::invalid(
                    "grading",
                    format!("local length for {feature} must lie in (0, h], got {len}"),
                ));
            }
        }
        if !(self.max_aspect.is_finite() && self.max_aspect >= 2.0) {
            return Err(Error::invalid(
                "max_aspect",
                format!("aspect bound must be at least 2, got {}", self.max_aspect),
            ));
        }
        Ok(())
    }
}

/// One edge of the mesh boundary, directed with the region on its left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    pub tag: Tag,
    /// Surface group from the generating profile; absent on meshes read from
    /// files (the exchange format carries only tags).
    pub group: Option<Group>,
}

/// Conforming triangulation of a meridian region.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    /// Node coordinates (r, z).
    pub nodes: Vec<[f64; 2]>,
    /// Positively oriented triangles as node index triples.
    pub triangles: Vec<[usize; 3]>,
    /// Tagged boundary edges covering the topological boundary.
    pub boundary_edges: Vec<BoundaryEdge>,
}

impl Mesh2D {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.nodes[a], self.nodes[b], self.nodes[c])
    }
}

pub(crate) fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Angles of a triangle in degrees.
pub(crate) fn triangle_angles(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> [f64; 3] {
    let la = dist(b, c);
    let lb = dist(a, c);
    let lc = dist(a, b);
    let angle = |opp: f64, s1: f64, s2: f64| {
        let cos = ((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2)).clamp(-1.0, 1.0);
        cos.acos().to_degrees()
    };
    [angle(la, lb, lc), angle(lb, la, lc), angle(lc, la, lb)]
}

/// How a node is tied to the geometry: junctions are pinned, sampled
/// boundary nodes slide along their curve, everything else is free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Anchor {
    Fixed,
    OnCurve { piece: usize, t: f64 },
    Interior,
}

/// Mesh under construction, carrying per-node geometry anchors.
pub(crate) struct WorkMesh {
    pub nodes: Vec<[f64; 2]>,
    pub anchors: Vec<Anchor>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
}

impl WorkMesh {
    fn into_mesh(self) -> Mesh2D {
        Mesh2D {
            nodes: self.nodes,
            triangles: self.triangles,
            boundary_edges: self.boundary_edges,
        }
    }
}

/// Generates a graded triangulation of the profile's meridian region.
pub fn generate_mesh(profile: &MeridianProfile, params: &MeshParams) -> Result<Mesh2D> {
    params.validate()?;
    profile.validate()?;
    let field = size::SizeField::build(profile, params);
    let boundary = size::sample_boundary(profile, &field)?;
    let mut work = front::advance_front(profile, &field, boundary, params)?;
    improve::lawson_flips(&mut work, 30);
    improve::smooth(profile, &mut work, 1);
    improve::lawson_flips(&mut work, 15);
    improve::smooth(profile, &mut work, 1);
    improve::lawson_flips(&mut work, 15);
    let mesh = work.into_mesh();

    let diag = validate_mesh(&mesh);
    if !diag.pass {
        return Err(Error::Meshing(format!(
            "generated mesh failed validation: {}",
            diag.failures.join("; ")
        )));
    }
    if diag.min_angle_deg < 20.0 {
        return Err(Error::Meshing(format!(
            "quality target unreachable: minimum angle {:.2} degrees below 20 \
             (h may be too coarse for the smallest feature; add grading)",
            diag.min_angle_deg
        )));
    }
    Ok(mesh)
}

/// Validation report. `pass` is false when any structural invariant fails;
/// the failure strings say which and where.
#[derive(Debug, Clone)]
pub struct MeshDiagnostics {
    pub node_count: usize,
    pub triangle_count: usize,
    pub boundary_edge_count: usize,
    /// V - E + F over the triangulation (1 for a disk).
    pub euler_characteristic: i64,
    pub min_angle_deg: f64,
    pub min_area: f64,
    pub total_area: f64,
    pub min_edge: f64,
    pub max_edge: f64,
    pub boundary_closed: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Structural and quality diagnostics; never errors, failures are reported
/// in the returned struct.
pub fn validate_mesh(mesh: &Mesh2D) -> MeshDiagnostics {
    let mut failures = Vec::new();
    let nv = mesh.nodes.len();

    for (i, p) in mesh.nodes.iter().enumerate() {
        if !(p[0].is_finite() && p[1].is_finite()) {
            failures.push(format!("node {i} has non-finite coordinates"));
        } else if p[0] < 0.0 {
            failures.push(format!("node {i} has negative radius {}", p[0]));
        }
    }

    let mut min_angle = f64::INFINITY;
    let mut min_area = f64::INFINITY;
    let mut total_area = 0.0;
    let mut min_edge = f64::INFINITY;
    let mut max_edge: f64 = 0.0;
    let mut edge_use: HashMap<(usize, usize), u32> = HashMap::new();
    let mut directed: HashSet<(usize, usize)> = HashSet::new();

    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = *tri;
        if a >= nv || b >= nv || c >= nv {
            failures.push(format!("triangle {t} references a missing node"));
            continue;
        }
        if a == b || b == c || a == c {
            failures.push(format!("triangle {t} repeats a node"));
            continue;
        }
        let area = signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
        if area <= 1e-14 {
            failures.push(format!("negative or degenerate area at triangle {t}"));
        } else {
            min_area = min_area.min(area);
            total_area += area;
            let angs = triangle_angles(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]);
            for ang in angs {
                min_angle = min_angle.min(ang);
            }
        }
        for (u, v) in [(a, b), (b, c), (c, a)] {
            directed.insert((u, v));
            let key = if u < v { (u, v) } else { (v, u) };
            *edge_use.entry(key).or_insert(0) += 1;
            let len = dist(mesh.nodes[u], mesh.nodes[v]);
            min_edge = min_edge.min(len);
            max_edge = max_edge.max(len);
        }
    }
    for (&(u, v), &count) in &edge_use {
        if count > 2 {
            failures.push(format!("edge ({u}, {v}) shared by {count} triangles"));
        }
    }

    // boundary edges must exactly cover the edges used once, oriented with
    // the adjacent triangle on the left
    let topological: HashSet<(usize, usize)> = edge_use
        .iter()
        .filter(|&(_, &c)| c == 1)
        .map(|(&e, _)| e)
        .collect();
    let mut listed: HashSet<(usize, usize)> = HashSet::new();
    let mut incidence: HashMap<usize, u32> = HashMap::new();
    for (i, e) in mesh.boundary_edges.iter().enumerate() {
        if e.a >= nv || e.b >= nv {
            failures.push(format!("boundary edge {i} references a missing node"));
            continue;
        }
        let key = if e.a < e.b { (e.a, e.b) } else { (e.b, e.a) };
        if !listed.insert(key) {
            failures.push(format!("boundary edge {i} duplicates ({}, {})", e.a, e.b));
        }
        if !topological.contains(&key) {
            failures.push(format!(
                "boundary edge {i} = ({}, {}) is not a boundary edge of the triangulation",
                e.a, e.b
            ));
        } else if !directed.contains(&(e.a, e.b)) {
            failures.push(format!(
                "boundary edge {i} = ({}, {}) is oriented with the region on its right",
                e.a, e.b
            ));
        }
        if e.tag == Tag::Axis {
            for node in [e.a, e.b] {
                if mesh.nodes.get(node).map(|p| p[0] != 0.0).unwrap_or(false) {
                    failures.push(format!(
                        "axis-tagged edge {i} touches node {node} with r = {} != 0",
                        mesh.nodes[node][0]
                    ));
                }
            }
        }
        *incidence.entry(e.a).or_insert(0) += 1;
        *incidence.entry(e.b).or_insert(0) += 1;
    }
    for &edge in &topological {
        if !listed.contains(&edge) {
            failures.push(format!(
                "triangulation boundary edge ({}, {}) missing from boundary_edges",
                edge.0, edge.1
            ));
        }
    }
    let mut boundary_closed = !mesh.boundary_edges.is_empty();
    for (&node, &count) in &incidence {
        if count != 2 {
            boundary_closed = false;
            failures.push(format!(
                "open boundary chain: node {node} has {count} incident boundary edges"
            ));
        }
    }

    let euler = nv as i64 - edge_use.len() as i64 + mesh.triangles.len() as i64;
    let pass = failures.is_empty();
    MeshDiagnostics {
        node_count: nv,
        triangle_count: mesh.triangles.len(),
        boundary_edge_count: mesh.boundary_edges.len(),
        euler_characteristic: euler,
        min_angle_deg: if min_angle.is_finite() { min_angle } else { 0.0 },
        min_area: if min_area.is_finite() { min_area } else { 0.0 },
        total_area,
        min_edge: if min_edge.is_finite() { min_edge } else { 0.0 },
        max_edge,
        boundary_closed,
        pass,
        failures,
    }
}
