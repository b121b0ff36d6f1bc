//! Axisymmetric P1 finite elements for the three-dimensional Steklov
//! problem, one azimuthal Fourier mode at a time.
//!
//! A rotationally symmetric eigenfunction factors as
//! `u(r, theta, z) = w(r, z) * {cos, sin}(m theta)`, which reduces the 3-D
//! weak problem to a family of 2-D problems on the meridian region:
//!
//! ```text
//! a_m(w, v) = INT ( grad w . grad v + m^2 / r^2 w v ) r dr dz
//!   b(w, v) = INT_steklov w v r ds
//! ```
//!
//! with the eigenvalue problem `a_m(w, v) = sigma b(w, v)`. The constant
//! angular factor (2 pi for m = 0, pi otherwise) cancels between the two
//! forms and is dropped from both. On the axis r = 0, mode 0 needs no
//! condition (natural) while modes m >= 1 require w = 0 (essential), the
//! standard regularity condition for Fourier finite elements.
//!
//! Each mode is condensed onto its Steklov boundary nodes by a Schur
//! complement, giving a discrete Dirichlet-to-Neumann matrix whose
//! generalized eigenpairs against the boundary mass are the discrete Steklov
//! pairs. Mode m = 0 contributes each eigenvalue once; modes m >= 1 twice
//! (the cos and sin branches coincide). Modes are independent, so the sweep
//! runs on the thread pool when the `parallel` feature is active.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exact::sphere_area;
use crate::geometry::{Group, Tag};
use crate::linalg::{
    eig_sym_generalized, schur_complement, DenseSym, SparseCholesky, SparseSym, SparseSymBuilder,
};
use crate::mesh::Mesh2D;
use crate::par;
use crate::spectrum::{Label, Spectrum, SpectrumEntry};

/// Degree-2 interior rule on the reference triangle (barycentric points,
/// weights summing to one).
const TRI3: [([f64; 3], f64); 3] = [
    ([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0 / 3.0),
    ([1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0], 1.0 / 3.0),
];

/// Degree-4 interior rule, used on elements with an edge on the axis where
/// the 1/r factor of the mode term varies most strongly.
const TRI6: [([f64; 3], f64); 6] = [
    (
        [0.108_103_018_168_070, 0.445_948_490_915_965, 0.445_948_490_915_965],
        0.223_381_589_678_011,
    ),
    (
        [0.445_948_490_915_965, 0.108_103_018_168_070, 0.445_948_490_915_965],
        0.223_381_589_678_011,
    ),
    (
        [0.445_948_490_915_965, 0.445_948_490_915_965, 0.108_103_018_168_070],
        0.223_381_589_678_011,
    ),
    (
        [0.816_847_572_980_459, 0.091_576_213_509_771, 0.091_576_213_509_771],
        0.109_951_743_655_322,
    ),
    (
        [0.091_576_213_509_771, 0.816_847_572_980_459, 0.091_576_213_509_771],
        0.109_951_743_655_322,
    ),
    (
        [0.091_576_213_509_771, 0.091_576_213_509_771, 0.816_847_572_980_459],
        0.109_951_743_655_322,
    ),
];

/// Two-point Gauss rule on [0, 1]: (position, weight).
const EDGE2: [(f64, f64); 2] = [
    (0.211_324_865_405_187_1, 0.5),
    (0.788_675_134_594_812_9, 0.5),
];

/// One Fourier mode of the discretized problem: the r-weighted stiffness
/// over active nodes and the boundary mass over Steklov boundary nodes.
#[derive(Debug, Clone)]
pub struct ModeSystem {
    /// Azimuthal mode index.
    pub m: u32,
    /// Form `a_m` over active nodes, in ascending mesh-node order.
    pub stiffness: SparseSym,
    /// Form `b` over the Steklov boundary nodes, same order as
    /// [`Self::boundary_index_set`].
    pub boundary_mass: DenseSym,
    /// Mesh node ids of the Steklov boundary nodes, ascending. Axis nodes on
    /// the Steklov boundary (the poles) are excluded for m >= 1.
    pub boundary_index_set: Vec<usize>,
    /// Mesh node ids removed by the essential axis condition (empty for
    /// m = 0), ascending.
    pub constrained_nodes: Vec<usize>,
    /// Mesh node id of each active (unconstrained) node, ascending; row i of
    /// `stiffness` belongs to mesh node `mesh_of_active[i]`.
    mesh_of_active: Vec<usize>,
    /// Positions of the boundary nodes within the active numbering.
    boundary_active: Vec<usize>,
}

impl ModeSystem {
    /// Number of unconstrained nodes.
    pub fn active_count(&self) -> usize {
        self.mesh_of_active.len()
    }

    /// Mesh node ids of the active nodes, ascending.
    pub fn active_nodes(&self) -> &[usize] {
        &self.mesh_of_active
    }
}

/// One discrete Steklov eigenpair of a single Fourier mode.
#[derive(Debug, Clone)]
pub struct EigenPair {
    /// Steklov eigenvalue.
    pub sigma: f64,
    /// Boundary trace coefficients, ordered like the mode's
    /// `boundary_index_set` and normalized to `b(u, u) = 1`.
    pub trace: Vec<f64>,
    /// Azimuthal mode the pair belongs to.
    pub mode: u32,
    /// 1 for m = 0, else 2: the cos and sin branches coincide.
    pub multiplicity_weight: u32,
}

/// Merged multi-mode spectrum plus an optional truncation diagnostic.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub spectrum: Spectrum,
    /// Set when the last reported cluster comes within 5% of some mode's
    /// highest retained eigenvalue, meaning deeper per-mode retention could
    /// shift it.
    pub truncation_warning: Option<String>,
}

fn on_axis(node: [f64; 2]) -> bool {
    // Mesh generation places axis nodes at exactly r = 0 (junctions use
    // segment endpoints and smoothing slides along the exact curve), and
    // validation enforces it for axis-tagged edges.
    node[0] == 0.0
}

/// Assembles the stiffness and boundary-mass forms of Fourier mode `m`.
///
/// Axis nodes are active for m = 0 and eliminated (essential zero) for
/// m >= 1. Interior quadrature is the degree-2 three-point rule, upgraded to
/// a degree-4 six-point rule on elements with an axis edge; boundary mass
/// uses two-point Gauss per Steklov edge. All rules keep r > 0, so the mode
/// term never divides by zero.
pub fn assemble_mode(mesh: &Mesh2D, m: u32) -> Result<ModeSystem> {
    let steklov_edges: Vec<_> = mesh
        .boundary_edges
        .iter()
        .filter(|e| e.tag == Tag::Steklov)
        .collect();
    if steklov_edges.is_empty() {
        return Err(Error::InvalidMesh(
            "no steklov boundary edges; the eigenproblem is empty".into(),
        ));
    }

    let n = mesh.nodes.len();
    let constrained_nodes: Vec<usize> = if m == 0 {
        Vec::new()
    } else {
        (0..n).filter(|&i| on_axis(mesh.nodes[i])).collect()
    };
    let mut active_of_mesh: Vec<Option<usize>> = vec![None; n];
    let mut mesh_of_active = Vec::with_capacity(n - constrained_nodes.len());
    {
        let mut constrained = vec![false; n];
        for &i in &constrained_nodes {
            constrained[i] = true;
        }
        for i in 0..n {
            if !constrained[i] {
                active_of_mesh[i] = Some(mesh_of_active.len());
                mesh_of_active.push(i);
            }
        }
    }

    let mut builder = SparseSymBuilder::new(mesh_of_active.len());
    let m_sq = f64::from(m) * f64::from(m);
    for (t, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        let p = [mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]];
        let axis_nodes = p.iter().filter(|q| on_axis(**q)).count();
        if m >= 1 && axis_nodes == 3 {
            return Err(Error::InvalidMesh(format!(
                "triangle {t} lies entirely on the axis; mode {m} cannot constrain it"
            )));
        }
        let two_area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
            - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        let area = 0.5 * two_area;
        // constant P1 gradients: grad lambda_i = perp(p_j - p_k) / (2 area)
        let grads = [
            [(p[1][1] - p[2][1]) / two_area, (p[2][0] - p[1][0]) / two_area],
            [(p[2][1] - p[0][1]) / two_area, (p[0][0] - p[2][0]) / two_area],
            [(p[0][1] - p[1][1]) / two_area, (p[1][0] - p[0][0]) / two_area],
        ];
        let rule: &[([f64; 3], f64)] = if axis_nodes >= 2 { &TRI6 } else { &TRI3 };

        let global = [a, b, c].map(|i| active_of_mesh[i]);
        for &(lambda, weight) in rule {
            let r_q = lambda[0] * p[0][0] + lambda[1] * p[1][0] + lambda[2] * p[2][0];
            let w = weight * area;
            for li in 0..3 {
                let Some(gi) = global[li] else { continue };
                for lj in 0..=li {
                    let Some(gj) = global[lj] else { continue };
                    let grad = grads[li][0] * grads[lj][0] + grads[li][1] * grads[lj][1];
                    let mut v = grad * r_q * w;
                    if m >= 1 {
                        v += m_sq * lambda[li] * lambda[lj] / r_q * w;
                    }
                    builder.add(gi, gj, v);
                }
            }
        }
    }
    let stiffness = builder.build()?;

    let boundary_set: BTreeSet<usize> = steklov_edges
        .iter()
        .flat_map(|e| [e.a, e.b])
        .filter(|&i| active_of_mesh[i].is_some())
        .collect();
    let boundary_index_set: Vec<usize> = boundary_set.into_iter().collect();
    let mut boundary_pos = vec![usize::MAX; n];
    for (k, &i) in boundary_index_set.iter().enumerate() {
        boundary_pos[i] = k;
    }

    let mut boundary_mass = DenseSym::zeros(boundary_index_set.len());
    for e in &steklov_edges {
        let pa = mesh.nodes[e.a];
        let pb = mesh.nodes[e.b];
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        let local = [
            active_of_mesh[e.a].map(|_| boundary_pos[e.a]),
            active_of_mesh[e.b].map(|_| boundary_pos[e.b]),
        ];
        for &(t, w) in &EDGE2 {
            let shape = [1.0 - t, t];
            let r_q = shape[0] * pa[0] + shape[1] * pb[0];
            let scale = w * len * r_q;
            for li in 0..2 {
                let Some(gi) = local[li] else { continue };
                for lj in 0..=li {
                    let Some(gj) = local[lj] else { continue };
                    boundary_mass.add(gi, gj, shape[li] * shape[lj] * scale);
                }
            }
        }
    }

    let boundary_active: Vec<usize> = boundary_index_set
        .iter()
        .map(|&i| active_of_mesh[i].expect("boundary nodes are active"))
        .collect();

    Ok(ModeSystem {
        m,
        stiffness,
        boundary_mass,
        boundary_index_set,
        constrained_nodes,
        mesh_of_active,
        boundary_active,
    })
}

/// Condenses one mode onto its boundary and returns the lowest `count`
/// discrete Steklov pairs (fewer if the boundary is smaller). Traces come
/// back mass-normalized; eigenvalues below -1e-8 are a discretization
/// failure and reported as an error.
pub fn dtn_spectrum(system: &ModeSystem, count: usize) -> Result<Vec<EigenPair>> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    let mut mask = vec![false; system.stiffness.n()];
    for &i in &system.boundary_active {
        mask[i] = true;
    }
    let schur = schur_complement(&system.stiffness, &mask)?;
    debug_assert_eq!(schur.boundary, system.boundary_active);
    let eig = eig_sym_generalized(&schur.matrix, &system.boundary_mass)?;

    let weight = if system.m == 0 { 1 } else { 2 };
    let take = count.min(eig.values.len());
    let mut pairs = Vec::with_capacity(take);
    for k in 0..take {
        let sigma = eig.values[k];
        if sigma < -1e-8 {
            return Err(Error::Numerical(format!(
                "discretization failure: mode {} eigenvalue {k} is {sigma:.3e}",
                system.m
            )));
        }
        pairs.push(EigenPair {
            sigma,
            trace: eig.vectors[k].clone(),
            mode: system.m,
            multiplicity_weight: weight,
        });
    }
    Ok(pairs)
}

/// Solves modes 0..=m_max (in parallel when enabled) and merges their
/// eigenvalues, weighted by the cos/sin degeneracy, into the lowest `count`
/// multiplicity clusters. Requires `m_max >= count` so no mode that could
/// contribute to the lowest `count` distinct values is skipped (per-mode
/// minima increase with m, which is also checked here).
pub fn full_spectrum(mesh: &Mesh2D, m_max: u32, count: usize) -> Result<SpectrumResult> {
    let per_mode = merge_preflight(m_max, count)?;
    let modes = par::try_map_indices(m_max as usize + 1, |m| {
        let system = assemble_mode(mesh, m as u32)?;
        dtn_spectrum(&system, per_mode)
    })?;
    merge_modes(modes, count)
}

/// Always-sequential twin of [`full_spectrum`]; same arithmetic, kept so
/// benchmarks can compare execution modes.
pub fn full_spectrum_seq(mesh: &Mesh2D, m_max: u32, count: usize) -> Result<SpectrumResult> {
    let per_mode = merge_preflight(m_max, count)?;
    let modes = par::try_map_indices_seq(m_max as usize + 1, |m| {
        let system = assemble_mode(mesh, m as u32)?;
        dtn_spectrum(&system, per_mode)
    })?;
    merge_modes(modes, count)
}

fn merge_preflight(m_max: u32, count: usize) -> Result<usize> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    if (m_max as usize) < count {
        return Err(Error::invalid(
            "modes",
            format!("m_max = {m_max} is below count = {count}; low modes would be missed"),
        ));
    }
    // one extra value per mode so the truncation warning can see whether the
    // last reported cluster sits near the per-mode retention horizon
    Ok(count + 1)
}

fn merge_modes(modes: Vec<Vec<EigenPair>>, count: usize) -> Result<SpectrumResult> {
    let mut previous_min = f64::NEG_INFINITY;
    for (m, pairs) in modes.iter().enumerate() {
        if let Some(first) = pairs.first() {
            if first.sigma < previous_min - 1e-9 {
                return Err(Error::Numerical(format!(
                    "mode {m} minimum {:.6e} drops below mode {}'s {:.6e}",
                    first.sigma,
                    m - 1,
                    previous_min
                )));
            }
            previous_min = first.sigma;
        }
    }

    let mut values: Vec<(f64, u32, u32)> = modes
        .iter()
        .flatten()
        .map(|p| (p.sigma, p.mode, p.multiplicity_weight))
        .collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut i = 0;
    while i < values.len() && entries.len() < count {
        let first = values[i].0;
        let tol = 0.02 * (1.0 + first);
        let mut j = i;
        let mut weighted = 0.0;
        let mut weight_sum = 0u32;
        let mut cluster_modes: Vec<u32> = Vec::new();
        while j < values.len() && values[j].0 - first <= tol {
            weighted += values[j].0 * f64::from(values[j].2);
            weight_sum += values[j].2;
            cluster_modes.push(values[j].1);
            j += 1;
        }
        cluster_modes.sort_unstable();
        cluster_modes.dedup();
        entries.push(SpectrumEntry {
            value: weighted / f64::from(weight_sum),
            multiplicity: weight_sum,
            label: Label::Fourier {
                modes: cluster_modes,
            },
        });
        i = j;
    }

    let truncation_warning = entries.last().and_then(|last| {
        modes
            .iter()
            .filter_map(|pairs| pairs.last())
            .find(|top| last.value > 0.95 * top.sigma)
            .map(|top| {
                format!(
                    "cluster at {:.6} is within 5% of mode {}'s retention horizon {:.6}; \
                     increase count for a safe margin",
                    last.value, top.mode, top.sigma
                )
            })
    });

    Ok(SpectrumResult {
        spectrum: Spectrum::new(entries)?,
        truncation_warning,
    })
}

/// The r-weighted squared trace mass of `pair` over one named boundary
/// group. Group labels exist only on freshly generated meshes; the masses
/// over all groups of the Steklov boundary sum to one by normalization.
pub fn boundary_trace_mass(pair: &EigenPair, mesh: &Mesh2D, group: Group) -> Result<f64> {
    let boundary = steklov_boundary_nodes(mesh, pair.mode);
    if boundary.len() != pair.trace.len() {
        return Err(Error::DimensionMismatch(format!(
            "trace has {} coefficients but the mesh has {} steklov boundary nodes for mode {}",
            pair.trace.len(),
            boundary.len(),
            pair.mode
        )));
    }
    let mut pos = std::collections::HashMap::new();
    for (k, &i) in boundary.iter().enumerate() {
        pos.insert(i, k);
    }

    let mut mass = 0.0;
    let mut seen = false;
    for e in &mesh.boundary_edges {
        if e.group != Some(group) {
            continue;
        }
        seen = true;
        let pa = mesh.nodes[e.a];
        let pb = mesh.nodes[e.b];
        let len = ((pb[0] - pa[0]).powi(2) + (pb[1] - pa[1]).powi(2)).sqrt();
        // constrained pole nodes carry a zero coefficient
        let ua = pos.get(&e.a).map_or(0.0, |&k| pair.trace[k]);
        let ub = pos.get(&e.b).map_or(0.0, |&k| pair.trace[k]);
        for &(t, w) in &EDGE2 {
            let r_q = (1.0 - t) * pa[0] + t * pb[0];
            let u_q = (1.0 - t) * ua + t * ub;
            mass += u_q * u_q * r_q * w * len;
        }
    }
    if !seen {
        return Err(Error::UnknownGroup(group.to_string()));
    }
    Ok(mass)
}

fn steklov_boundary_nodes(mesh: &Mesh2D, m: u32) -> Vec<usize> {
    let set: BTreeSet<usize> = mesh
        .boundary_edges
        .iter()
        .filter(|e| e.tag == Tag::Steklov)
        .flat_map(|e| [e.a, e.b])
        .filter(|&i| m == 0 || !on_axis(mesh.nodes[i]))
        .collect();
    set.into_iter().collect()
}

/// Harmonically extends boundary trace coefficients to all active nodes of
/// the mode: solves `A_ii x_i = -A_ib x_b` and splices the trace back in.
/// The result is indexed like the mode's active numbering.
pub fn extend_interior(system: &ModeSystem, trace: &[f64]) -> Result<Vec<f64>> {
    let n = system.stiffness.n();
    if trace.len() != system.boundary_active.len() {
        return Err(Error::DimensionMismatch(format!(
            "trace has {} coefficients, the mode has {} boundary nodes",
            trace.len(),
            system.boundary_active.len()
        )));
    }
    let mut boundary_pos = vec![usize::MAX; n];
    for (k, &i) in system.boundary_active.iter().enumerate() {
        boundary_pos[i] = k;
    }
    let interior: Vec<usize> = (0..n).filter(|&i| boundary_pos[i] == usize::MAX).collect();
    let mut interior_pos = vec![usize::MAX; n];
    for (k, &i) in interior.iter().enumerate() {
        interior_pos[i] = k;
    }

    let mut builder = SparseSymBuilder::new(interior.len());
    let mut rhs = vec![0.0; interior.len()];
    for (i, j, v) in system.stiffness.iter_lower() {
        match (boundary_pos[i] == usize::MAX, boundary_pos[j] == usize::MAX) {
            (true, true) => builder.add(interior_pos[i], interior_pos[j], v),
            (true, false) => rhs[interior_pos[i]] -= v * trace[boundary_pos[j]],
            (false, true) => rhs[interior_pos[j]] -= v * trace[boundary_pos[i]],
            (false, false) => {}
        }
    }
    let x_i = if interior.is_empty() {
        Vec::new()
    } else {
        SparseCholesky::factor(&builder.build()?)?.solve(&rhs)
    };

    let mut full = vec![0.0; n];
    for (k, &i) in system.boundary_active.iter().enumerate() {
        full[i] = trace[k];
    }
    for (k, &i) in interior.iter().enumerate() {
        full[i] = x_i[k];
    }
    Ok(full)
}

/// Exact product-metric Dirichlet energy of the logarithmic cutoff that is
/// one on the tube wall and fades over `[delta^2, delta]`, for a tube of
/// length `l` around a curve in an n-manifold:
///
/// ```text
/// n = 3: 2 pi l / (-log delta)
/// n > 3: |S^(n-2)| l (delta^(n-3) - delta^(2(n-3))) / ((n-3) (log delta)^2)
/// ```
///
/// Both decrease to zero as delta -> 0, which is what makes the tube
/// construction spectrally cheap.
pub fn cutoff_energy(n: u32, delta: f64, l: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::invalid("dim", format!("n = {n} is below 3")));
    }
    if !(delta > 0.0 && delta < 1.0) || !delta.is_finite() {
        return Err(Error::invalid(
            "delta",
            format!("delta = {delta} is outside (0, 1)"),
        ));
    }
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::invalid("l", format!("l = {l} must be positive")));
    }
    let log_delta = delta.ln();
    if n == 3 {
        Ok(2.0 * std::f64::consts::PI * l / (-log_delta))
    } else {
        let p = i32::try_from(n - 3).expect("dimension fits in i32");
        let area = sphere_area(n - 2)?;
        Ok(area * l * (delta.powi(p) - delta.powi(2 * p)) / (f64::from(n - 3) * log_delta.powi(2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_profile, ProfileKind, ProfileParams};
    use crate::mesh::{generate_mesh, Feature, MeshParams};
    use approx::assert_relative_eq;
    use once_cell::sync::Lazy;

    fn ball_mesh(h: f64) -> Mesh2D {
        let profile = make_profile(ProfileKind::Ball, ProfileParams::default()).unwrap();
        generate_mesh(&profile, &MeshParams::uniform(h)).unwrap()
    }

    fn annulus_mesh(eps: f64, h: f64) -> Mesh2D {
        let profile = make_profile(ProfileKind::Annulus, ProfileParams::annulus(eps)).unwrap();
        generate_mesh(&profile, &MeshParams::uniform(h)).unwrap()
    }

    fn tube_mesh(eps: f64, delta: f64, h: f64) -> Mesh2D {
        let profile = make_profile(
            ProfileKind::AnnulusWithTube,
            ProfileParams::tube(eps, delta, 0.0),
        )
        .unwrap();
        let params = MeshParams::uniform(h).with_grading(Feature::TubeWall, delta / 3.0);
        generate_mesh(&profile, &params).unwrap()
    }

    static BALL_H02: Lazy<Mesh2D> = Lazy::new(|| ball_mesh(0.02));

    #[test]
    fn constant_function_checks_on_the_ball() {
        let mesh = ball_mesh(0.05);
        let system = assemble_mode(&mesh, 0).unwrap();
        assert!(system.constrained_nodes.is_empty());

        // stiffness annihilates constants (natural axis condition, no mass)
        let ones = vec![1.0; system.stiffness.n()];
        let residual = system.stiffness.matvec(&ones);
        let norm: f64 = residual.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(norm < 1e-12, "constant residual {norm}");

        // total boundary mass = INT r ds = 2 over the unit semicircle; the
        // polygonal boundary biases this low by O(h^2) (chord shortening
        // ~ h^2/24 plus the radius deficit ~ h^2/8 at interior Gauss points)
        let nb = system.boundary_mass.n();
        let total: f64 = (0..nb)
            .flat_map(|i| (0..nb).map(move |j| (i, j)))
            .map(|(i, j)| system.boundary_mass.get(i, j))
            .sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-3);
    }

    #[test]
    fn mode_one_constrains_every_axis_node() {
        let mesh = ball_mesh(0.05);
        let system = assemble_mode(&mesh, 1).unwrap();
        assert!(!system.constrained_nodes.is_empty());
        for &i in &system.constrained_nodes {
            assert_eq!(mesh.nodes[i][0], 0.0);
        }
        for &i in system.active_nodes() {
            assert!(mesh.nodes[i][0] > 0.0);
        }
        // the poles are on the steklov arc but constrained, hence excluded
        for &i in &system.boundary_index_set {
            assert!(mesh.nodes[i][0] > 0.0);
        }
        // SPD stiffness: the interior factorization must go through
        assert!(SparseCholesky::factor(&system.stiffness).is_ok());
    }

    #[test]
    fn tube_mesh_keeps_south_axis_constraints_only() {
        let mesh = tube_mesh(0.2, 0.02, 0.1);
        let system = assemble_mode(&mesh, 1).unwrap();
        // the construction excises the north axis; the south axis remains
        assert!(!system.constrained_nodes.is_empty());
        for &i in &system.constrained_nodes {
            assert_eq!(mesh.nodes[i][0], 0.0);
            assert!(mesh.nodes[i][1] < 0.0);
        }
    }

    #[test]
    fn ball_modes_match_the_exact_spectrum() {
        let system0 = assemble_mode(&BALL_H02, 0).unwrap();
        let pairs0 = dtn_spectrum(&system0, 3).unwrap();
        assert!(pairs0[0].sigma.abs() < 1e-6, "sigma0 = {}", pairs0[0].sigma);
        assert_relative_eq!(pairs0[1].sigma, 1.0, max_relative = 1e-2);
        assert_relative_eq!(pairs0[2].sigma, 2.0, max_relative = 1e-2);

        let system1 = assemble_mode(&BALL_H02, 1).unwrap();
        let pairs1 = dtn_spectrum(&system1, 2).unwrap();
        assert_relative_eq!(pairs1[0].sigma, 1.0, max_relative = 1e-2);
        assert_relative_eq!(pairs1[1].sigma, 2.0, max_relative = 1e-2);
        assert_eq!(pairs1[0].multiplicity_weight, 2);
    }

    #[test]
    fn annulus_mode_zero_matches_exact_roots() {
        let mesh = annulus_mesh(0.5, 0.02);
        let system = assemble_mode(&mesh, 0).unwrap();
        let pairs = dtn_spectrum(&system, 4).unwrap();
        let exact_values = [0.0, 0.7184910359318372, 1.7936673920714563, 2.9056855081822985];
        assert!(pairs[0].sigma.abs() < 1e-6);
        for k in 1..4 {
            assert_relative_eq!(pairs[k].sigma, exact_values[k], max_relative = 1e-2);
        }
    }

    #[test]
    fn ball_spectrum_merges_with_harmonic_multiplicities() {
        let result = full_spectrum(&BALL_H02, 4, 3).unwrap();
        assert!(result.truncation_warning.is_none());
        let entries = result.spectrum.entries();
        assert_eq!(entries.len(), 3);
        assert!(entries[0].value.abs() < 1e-6);
        assert_eq!(entries[0].multiplicity, 1);
        assert_relative_eq!(entries[1].value, 1.0, max_relative = 1e-2);
        assert_eq!(entries[1].multiplicity, 3);
        assert_relative_eq!(entries[2].value, 2.0, max_relative = 1e-2);
        assert_eq!(entries[2].multiplicity, 5);
        assert_eq!(entries[1].label, Label::Fourier { modes: vec![0, 1] });
        assert_eq!(entries[2].label, Label::Fourier { modes: vec![0, 1, 2] });
    }

    #[test]
    fn annulus_first_cluster_is_triple() {
        let mesh = annulus_mesh(0.5, 0.02);
        let result = full_spectrum(&mesh, 2, 2).unwrap();
        let entries = result.spectrum.entries();
        assert!(entries[0].value.abs() < 1e-6);
        assert_relative_eq!(entries[1].value, 0.7184910359318372, max_relative = 1e-2);
        assert_eq!(entries[1].multiplicity, 3);
    }

    #[test]
    fn sequential_and_parallel_spectra_agree_bitwise() {
        let mesh = ball_mesh(0.1);
        let a = full_spectrum(&mesh, 2, 2).unwrap();
        let b = full_spectrum_seq(&mesh, 2, 2).unwrap();
        assert_eq!(a.spectrum, b.spectrum);
    }

    #[test]
    fn convergence_order_on_the_ball_is_near_two() {
        let coarse = ball_mesh(0.04);
        let sys_c = assemble_mode(&coarse, 0).unwrap();
        let err_c = (dtn_spectrum(&sys_c, 2).unwrap()[1].sigma - 1.0).abs();
        let sys_f = assemble_mode(&BALL_H02, 0).unwrap();
        let err_f = (dtn_spectrum(&sys_f, 2).unwrap()[1].sigma - 1.0).abs();
        let order = (err_c / err_f).log2();
        assert!(order >= 1.8, "observed order {order:.2} ({err_c:.2e} -> {err_f:.2e})");
    }

    #[test]
    fn mode_minima_increase_with_m() {
        let mesh = ball_mesh(0.05);
        let mut last = f64::NEG_INFINITY;
        for m in 0..4 {
            let system = assemble_mode(&mesh, m).unwrap();
            let sigma = dtn_spectrum(&system, 1).unwrap()[0].sigma;
            assert!(sigma >= last - 1e-9, "mode {m}: {sigma} after {last}");
            last = sigma;
        }
    }

    #[test]
    fn rayleigh_quotient_is_consistent() {
        let mesh = ball_mesh(0.05);
        let system = assemble_mode(&mesh, 1).unwrap();
        let pairs = dtn_spectrum(&system, 2).unwrap();
        for pair in &pairs {
            let full = extend_interior(&system, &pair.trace).unwrap();
            let su = system.stiffness.matvec(&full);
            let energy: f64 = full.iter().zip(&su).map(|(x, y)| x * y).sum();
            // trace is mass-normalized, so the quotient is the energy itself
            assert!(
                (energy - pair.sigma).abs() <= 1e-8 * (1.0 + pair.sigma),
                "mode 1 rayleigh gap {}",
                (energy - pair.sigma).abs()
            );
        }
    }

    #[test]
    fn trace_masses_sum_to_one_on_the_tube() {
        let mesh = tube_mesh(0.2, 0.02, 0.1);
        let system = assemble_mode(&mesh, 0).unwrap();
        let pair = &dtn_spectrum(&system, 2).unwrap()[1];
        let groups = [Group::OuterSphere, Group::InnerSphere, Group::TubeWall];
        let total: f64 = groups
            .iter()
            .map(|&g| boundary_trace_mass(pair, &mesh, g).unwrap())
            .sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn constant_mode_mass_follows_area_fractions() {
        let mesh = annulus_mesh(0.5, 0.05);
        let system = assemble_mode(&mesh, 0).unwrap();
        let pair = &dtn_spectrum(&system, 1).unwrap()[0];
        let outer = boundary_trace_mass(pair, &mesh, Group::OuterSphere).unwrap();
        let inner = boundary_trace_mass(pair, &mesh, Group::InnerSphere).unwrap();
        // sigma0's trace is constant, so masses split like INT r ds, i.e.
        // 2 : 2 eps^2 over the two semicircles
        assert_relative_eq!(outer / (outer + inner), 1.0 / 1.25, max_relative = 1e-3);
        assert_relative_eq!(inner / (outer + inner), 0.25 / 1.25, max_relative = 1e-3);
    }

    #[test]
    fn unknown_group_is_reported() {
        let mesh = ball_mesh(0.1);
        let system = assemble_mode(&mesh, 0).unwrap();
        let pair = &dtn_spectrum(&system, 1).unwrap()[0];
        let err = boundary_trace_mass(pair, &mesh, Group::TubeWall).unwrap_err();
        assert!(matches!(err, Error::UnknownGroup(_)));
    }

    #[test]
    fn cutoff_energy_examples_and_decay() {
        assert_relative_eq!(
            cutoff_energy(3, 0.01, 0.9).unwrap(),
            1.2279387184576573,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            cutoff_energy(4, 0.01, 1.0).unwrap(),
            0.005866157104956625,
            max_relative = 1e-12
        );
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let delta = 10f64.powi(-k);
            let e = cutoff_energy(3, delta, 0.9).unwrap();
            assert!(e < last && e > 0.0);
            last = e;
        }
        assert!(cutoff_energy(3, 1.0, 1.0).is_err());
        assert!(cutoff_energy(2, 0.1, 1.0).is_err());
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let mesh = ball_mesh(0.1);
        // spectrum truncation guard
        assert!(full_spectrum(&mesh, 1, 3).is_err());
        // a mesh without steklov edges is refused
        let mut stripped = mesh.clone();
        stripped.boundary_edges.retain(|e| e.tag == Tag::Axis);
        assert!(matches!(
            assemble_mode(&stripped, 0),
            Err(Error::InvalidMesh(_))
        ));
    }
}
