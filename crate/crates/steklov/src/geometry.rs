//! Meridian (half-plane) descriptions of axisymmetric domains in R^3.
//!
//! A domain of revolution is generated by rotating a planar region in the
//! (r, z) half-plane about the z axis. The region's boundary is an ordered
//! loop of line segments and circular arcs, traversed counterclockwise with
//! the region on the left. Pieces carry a [`Tag`] separating the physical
//! (Steklov) boundary from the rotation axis, plus a [`Group`] naming which
//! surface they generate (outer sphere, inner sphere, tube wall, fillets).
//!
//! Three families are provided: the unit ball, the annulus B1 minus B_eps,
//! and the annulus with a thin tube of radius delta excised around the
//! positive z axis, optionally with tangent circular fillets replacing the
//! two wall corners. Surface areas and volumes of revolution are evaluated
//! in closed form piece by piece.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Boundary condition class of a piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tag {
    /// Physical boundary carrying the Steklov condition.
    Steklov,
    /// Rotation axis r = 0; no boundary condition (natural for mode 0,
    /// essential for modes m >= 1).
    Axis,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::Steklov => "steklov",
            Tag::Axis => "axis",
        })
    }
}

impl FromStr for Tag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "steklov" => Ok(Tag::Steklov),
            "axis" => Ok(Tag::Axis),
            other => Err(format!("unknown tag `{other}` (expected steklov or axis)")),
        }
    }
}

/// Which surface of revolution a boundary piece generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    OuterSphere,
    InnerSphere,
    TubeWall,
    OuterFillet,
    InnerFillet,
    Axis,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::OuterSphere => "outer_sphere",
            Group::InnerSphere => "inner_sphere",
            Group::TubeWall => "tube_wall",
            Group::OuterFillet => "outer_fillet",
            Group::InnerFillet => "inner_fillet",
            Group::Axis => "axis",
        })
    }
}

impl FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "outer_sphere" => Ok(Group::OuterSphere),
            "inner_sphere" => Ok(Group::InnerSphere),
            "tube_wall" => Ok(Group::TubeWall),
            "outer_fillet" => Ok(Group::OuterFillet),
            "inner_fillet" => Ok(Group::InnerFillet),
            "axis" => Ok(Group::Axis),
            other => Err(format!("unknown group `{other}`")),
        }
    }
}

/// A planar curve piece in the (r, z) half-plane, parametrized over [0, 1]
/// at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    /// Circular arc: point(theta) = center + radius (cos theta, sin theta),
    /// theta sweeping from theta0 to theta1 (counterclockwise when
    /// theta1 > theta0).
    Arc {
        center: [f64; 2],
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
}

impl Curve {
    pub fn point(&self, t: f64) -> [f64; 2] {
        match *self {
            Curve::Segment { a, b } => [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])],
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let th = theta0 + t * (theta1 - theta0);
                [
                    center[0] + radius * th.cos(),
                    center[1] + radius * th.sin(),
                ]
            }
        }
    }

    pub fn start(&self) -> [f64; 2] {
        match *self {
            Curve::Segment { a, .. } => a,
            _ => self.point(0.0),
        }
    }

    pub fn end(&self) -> [f64; 2] {
        match *self {
            Curve::Segment { b, .. } => b,
            _ => self.point(1.0),
        }
    }

    /// Unit tangent in the traversal direction at parameter t.
    pub(crate) fn tangent(&self, t: f64) -> [f64; 2] {
        match *self {
            Curve::Segment { a, b } => {
                let len = self.length();
                [(b[0] - a[0]) / len, (b[1] - a[1]) / len]
            }
            Curve::Arc { theta0, theta1, .. } => {
                let th = theta0 + t * (theta1 - theta0);
                let sign = if theta1 >= theta0 { 1.0 } else { -1.0 };
                [-sign * th.sin(), sign * th.cos()]
            }
        }
    }

    /// Arc length; also the constant parametric speed since t runs over [0,1].
    pub fn length(&self) -> f64 {
        match *self {
            Curve::Segment { a, b } => ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt(),
            Curve::Arc {
                radius,
                theta0,
                theta1,
                ..
            } => radius * (theta1 - theta0).abs(),
        }
    }

    /// Lateral area of the surface of revolution: 2 pi * integral of r ds.
    fn revolution_area(&self) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        match *self {
            Curve::Segment { a, b } => two_pi * self.length() * (a[0] + b[0]) / 2.0,
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let sweep = theta1 - theta0;
                two_pi
                    * radius
                    * (center[0] * sweep + radius * (theta1.sin() - theta0.sin())).abs()
            }
        }
    }

    /// Signed contribution to the revolution volume via Green's theorem,
    /// V = 2 pi * closed integral of (r^2 / 2) dz with the loop
    /// counterclockwise.
    fn volume_term(&self) -> f64 {
        let pi = std::f64::consts::PI;
        match *self {
            Curve::Segment { a, b } => {
                let (r0, r1) = (a[0], b[0]);
                pi * (b[1] - a[1]) * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0
            }
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                // integrand (rc + R cos)^2 / 2 * R cos dtheta
                let rc = center[0];
                let rr = radius;
                let anti = |th: f64| {
                    let s = th.sin();
                    rc * rc * s
                        + 2.0 * rc * rr * (th / 2.0 + (2.0 * th).sin() / 4.0)
                        + rr * rr * (s - s.powi(3) / 3.0)
                };
                pi * rr * (anti(theta1) - anti(theta0))
            }
        }
    }

    /// Signed contribution to the plane area of the meridian region,
    /// A = closed integral of r dz, loop counterclockwise.
    fn plane_area_term(&self) -> f64 {
        match *self {
            Curve::Segment { a, b } => (b[1] - a[1]) * (a[0] + b[0]) / 2.0,
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let rc = center[0];
                let rr = radius;
                let anti =
                    |th: f64| rc * th.sin() + rr * (th / 2.0 + (2.0 * th).sin() / 4.0);
                rr * (anti(theta1) - anti(theta0))
            }
        }
    }
}

/// One boundary piece: curve, boundary-condition tag, surface group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPiece {
    pub curve: Curve,
    pub tag: Tag,
    pub group: Group,
}

/// Domain family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Ball,
    Annulus,
    AnnulusWithTube,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileKind::Ball => "ball",
            ProfileKind::Annulus => "annulus",
            ProfileKind::AnnulusWithTube => "annulus_with_tube",
        })
    }
}

impl FromStr for ProfileKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ball" => Ok(ProfileKind::Ball),
            "annulus" => Ok(ProfileKind::Annulus),
            "annulus_with_tube" => Ok(ProfileKind::AnnulusWithTube),
            other => Err(format!(
                "unknown profile kind `{other}` (expected ball, annulus, or annulus_with_tube)"
            )),
        }
    }
}

/// Generator parameters. `tube_span` records the excised segment's rho-range
/// (eps/2, 1), fixed by the construction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProfileParams {
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub smoothing_radius: f64,
    pub tube_span: Option<(f64, f64)>,
}

impl ProfileParams {
    pub fn annulus(eps: f64) -> Self {
        ProfileParams {
            eps: Some(eps),
            ..Default::default()
        }
    }

    pub fn tube(eps: f64, delta: f64, smoothing_radius: f64) -> Self {
        ProfileParams {
            eps: Some(eps),
            delta: Some(delta),
            smoothing_radius,
            tube_span: Some((eps / 2.0, 1.0)),
        }
    }
}

/// Fillet bookkeeping for point classification: the tangent circle's center,
/// radius, and the angular wedge (seen from the center) that the removed
/// corner pocket occupies.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Fillet {
    center: [f64; 2],
    radius: f64,
    /// Pocket points sit at angles in (wedge_lo, wedge_hi) from the center,
    /// outside the circle. Angles normalized to (-pi, pi].
    wedge_lo: f64,
    wedge_hi: f64,
}

/// Closed boundary loop of an axisymmetric domain's meridian region.
#[derive(Debug, Clone, PartialEq)]
pub struct MeridianProfile {
    kind: ProfileKind,
    params: ProfileParams,
    pieces: Vec<BoundaryPiece>,
    fillets: Vec<Fillet>,
}

/// Exact measures of the solid of revolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileMeasures {
    /// 3-volume of the solid.
    pub volume: f64,
    /// Lateral area of each steklov surface group.
    pub boundary_area_by_group: BTreeMap<Group, f64>,
    /// Sum over all steklov groups.
    pub total_steklov_area: f64,
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
const PI: f64 = std::f64::consts::PI;

/// Builds the meridian profile for one of the three domain families.
pub fn make_profile(kind: ProfileKind, params: ProfileParams) -> Result<MeridianProfile> {
    match kind {
        ProfileKind::Ball => make_ball(),
        ProfileKind::Annulus => make_annulus(params),
        ProfileKind::AnnulusWithTube => make_tube(params),
    }
}

fn seg(a: [f64; 2], b: [f64; 2], tag: Tag, group: Group) -> BoundaryPiece {
    BoundaryPiece {
        curve: Curve::Segment { a, b },
        tag,
        group,
    }
}

fn arc(center: [f64; 2], radius: f64, theta0: f64, theta1: f64, group: Group) -> BoundaryPiece {
    BoundaryPiece {
        curve: Curve::Arc {
            center,
            radius,
            theta0,
            theta1,
        },
        tag: Tag::Steklov,
        group,
    }
}

fn make_ball() -> Result<MeridianProfile> {
    let pieces = vec![
        arc([0.0, 0.0], 1.0, -HALF_PI, HALF_PI, Group::OuterSphere),
        seg([0.0, 1.0], [0.0, -1.0], Tag::Axis, Group::Axis),
    ];
    Ok(MeridianProfile {
        kind: ProfileKind::Ball,
        params: ProfileParams::default(),
        pieces,
        fillets: Vec::new(),
    })
}

fn require_eps(params: &ProfileParams) -> Result<f64> {
    let eps = params
        .eps
        .ok_or_else(|| Error::invalid("eps", "this profile kind requires eps"))?;
    if !(eps.is_finite() && 0.0 < eps && eps < 1.0) {
        return Err(Error::invalid(
            "eps",
            format!("inner radius must lie strictly between 0 and 1, got {eps}"),
        ));
    }
    Ok(eps)
}

fn make_annulus(params: ProfileParams) -> Result<MeridianProfile> {
    let eps = require_eps(&params)?;
    if params.delta.is_some() {
        return Err(Error::invalid("delta", "annulus takes no tube radius"));
    }
    let pieces = vec![
        arc([0.0, 0.0], 1.0, -HALF_PI, HALF_PI, Group::OuterSphere),
        seg([0.0, 1.0], [0.0, eps], Tag::Axis, Group::Axis),
        arc([0.0, 0.0], eps, HALF_PI, -HALF_PI, Group::InnerSphere),
        seg([0.0, -eps], [0.0, -1.0], Tag::Axis, Group::Axis),
    ];
    Ok(MeridianProfile {
        kind: ProfileKind::Annulus,
        params: ProfileParams::annulus(eps),
        pieces,
        fillets: Vec::new(),
    })
}

fn make_tube(params: ProfileParams) -> Result<MeridianProfile> {
    let eps = require_eps(&params)?;
    let delta = params
        .delta
        .ok_or_else(|| Error::invalid("delta", "annulus_with_tube requires delta"))?;
    if !(delta.is_finite() && 0.0 < delta && delta < eps / 2.0) {
        return Err(Error::invalid(
            "delta",
            format!("tube radius must satisfy 0 < delta < eps/2 = {}, got {delta}", eps / 2.0),
        ));
    }
    let rho = params.smoothing_radius;
    if !(rho.is_finite() && (0.0..=delta / 2.0).contains(&rho)) {
        return Err(Error::invalid(
            "smoothing",
            format!("fillet radius must lie in [0, delta/2] = [0, {}], got {rho}", delta / 2.0),
        ));
    }

    // Wall endpoints from circle-line intersections at r = delta.
    let z_top = (1.0 - delta * delta).sqrt();
    let z_bot = (eps * eps - delta * delta).sqrt();
    let theta_out = delta.asin(); // polar angle of the outer cap edge
    let theta_in = (delta / eps).asin();

    let mut pieces = Vec::new();
    let mut fillets = Vec::new();

    if rho == 0.0 {
        pieces.push(arc(
            [0.0, 0.0],
            1.0,
            -HALF_PI,
            HALF_PI - theta_out,
            Group::OuterSphere,
        ));
        pieces.push(seg([delta, z_top], [delta, z_bot], Tag::Steklov, Group::TubeWall));
        pieces.push(arc(
            [0.0, 0.0],
            eps,
            HALF_PI - theta_in,
            -HALF_PI,
            Group::InnerSphere,
        ));
    } else {
        // Outer fillet: circle of radius rho tangent to the wall line
        // r = delta and internally tangent to the unit sphere.
        let cr = delta + rho;
        let oz_sq = (1.0 - rho) * (1.0 - rho) - cr * cr;
        if oz_sq <= 0.0 {
            return Err(Error::invalid(
                "smoothing",
                "fillet radius too large for tangency with the outer sphere".to_string(),
            ));
        }
        let o1 = [cr, oz_sq.sqrt()];
        let alpha1 = o1[1].atan2(o1[0]); // direction of the sphere tangency from o1

        // Inner fillet: tangent to the wall and externally tangent to the
        // inner sphere.
        let iz_sq = (eps + rho) * (eps + rho) - cr * cr;
        if iz_sq <= 0.0 {
            return Err(Error::invalid(
                "smoothing",
                "fillet radius too large for tangency with the inner sphere".to_string(),
            ));
        }
        let o2 = [cr, iz_sq.sqrt()];
        let alpha2 = o2[1].atan2(o2[0]);

        if o1[1] <= o2[1] {
            return Err(Error::invalid(
                "smoothing",
                "fillet radius too large: the two fillets overlap on the wall".to_string(),
            ));
        }

        pieces.push(arc([0.0, 0.0], 1.0, -HALF_PI, alpha1, Group::OuterSphere));
        pieces.push(arc(o1, rho, alpha1, PI, Group::OuterFillet));
        pieces.push(seg([delta, o1[1]], [delta, o2[1]], Tag::Steklov, Group::TubeWall));
        pieces.push(arc(o2, rho, PI, PI + alpha2, Group::InnerFillet));
        pieces.push(arc([0.0, 0.0], eps, alpha2, -HALF_PI, Group::InnerSphere));

        fillets.push(Fillet {
            center: o1,
            radius: rho,
            wedge_lo: alpha1,
            wedge_hi: PI,
        });
        // Inner pocket angles wrap past pi; store them in (-pi, pi].
        fillets.push(Fillet {
            center: o2,
            radius: rho,
            wedge_lo: -PI,
            wedge_hi: alpha2 - PI,
        });
    }
    pieces.push(seg([0.0, -eps], [0.0, -1.0], Tag::Axis, Group::Axis));

    Ok(MeridianProfile {
        kind: ProfileKind::AnnulusWithTube,
        params: ProfileParams {
            eps: Some(eps),
            delta: Some(delta),
            smoothing_radius: rho,
            tube_span: Some((eps / 2.0, 1.0)),
        },
        pieces,
        fillets,
    })
}

impl MeridianProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> &ProfileParams {
        &self.params
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    /// Plane area of the meridian region (not the revolved volume).
    pub fn plane_area(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.curve.plane_area_term())
            .sum()
    }

    /// Corner points of the boundary loop (piece endpoints).
    pub fn corners(&self) -> Vec<[f64; 2]> {
        self.pieces.iter().map(|p| p.curve.start()).collect()
    }

    /// True iff (r, z) lies strictly inside the open meridian region.
    pub fn contains(&self, r: f64, z: f64) -> bool {
        if r <= 0.0 {
            return false;
        }
        let rho_sq = r * r + z * z;
        let inside_base = match self.kind {
            ProfileKind::Ball => rho_sq < 1.0,
            ProfileKind::Annulus | ProfileKind::AnnulusWithTube => {
                let eps = self.params.eps.unwrap_or(0.0);
                let mut ok = rho_sq < 1.0 && rho_sq > eps * eps;
                if self.kind == ProfileKind::AnnulusWithTube {
                    let delta = self.params.delta.unwrap_or(0.0);
                    if r <= delta && z > 0.0 {
                        ok = false;
                    }
                }
                ok
            }
        };
        if !inside_base {
            return false;
        }
        // Fillets cut additional corner pockets out of the base region.
        for f in &self.fillets {
            let dr = r - f.center[0];
            let dz = z - f.center[1];
            if dr * dr + dz * dz > f.radius * f.radius {
                let ang = dz.atan2(dr);
                if ang > f.wedge_lo && ang < f.wedge_hi {
                    return false;
                }
            }
        }
        true
    }

    /// Structural validation: closed loop, axis pieces on r = 0, pieces in
    /// the half-plane, counterclockwise orientation, positive area.
    pub fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::invalid("profile", "no boundary pieces"));
        }
        let tol = 1e-12;
        for (i, p) in self.pieces.iter().enumerate() {
            let next = &self.pieces[(i + 1) % self.pieces.len()];
            let e = p.curve.end();
            let s = next.curve.start();
            if (e[0] - s[0]).abs() > tol || (e[1] - s[1]).abs() > tol {
                return Err(Error::invalid(
                    "profile",
                    format!("loop not closed between pieces {i} and {}", (i + 1) % self.pieces.len()),
                ));
            }
            if p.tag == Tag::Axis {
                if p.curve.start()[0].abs() > 0.0 || p.curve.end()[0].abs() > 0.0 {
                    return Err(Error::invalid(
                        "profile",
                        format!("axis piece {i} does not lie on r = 0"),
                    ));
                }
            }
            // sample for half-plane containment
            for j in 0..=8 {
                let pt = p.curve.point(f64::from(j) / 8.0);
                if pt[0] < -tol {
                    return Err(Error::invalid(
                        "profile",
                        format!("piece {i} leaves the half-plane r >= 0"),
                    ));
                }
            }
        }
        if self.plane_area() <= 0.0 {
            return Err(Error::invalid(
                "profile",
                "loop is not counterclockwise or encloses no area",
            ));
        }
        Ok(())
    }
}

/// Exact areas and volume of the solid of revolution.
pub fn profile_measures(profile: &MeridianProfile) -> ProfileMeasures {
    let mut by_group = BTreeMap::new();
    let mut volume = 0.0;
    for p in &profile.pieces {
        volume += p.curve.volume_term();
        if p.tag == Tag::Steklov {
            *by_group.entry(p.group).or_insert(0.0) += p.curve.revolution_area();
        }
    }
    let total: f64 = by_group.values().sum();
    ProfileMeasures {
        volume,
        boundary_area_by_group: by_group,
        total_steklov_area: total,
    }
}

/// True iff the point lies in the open meridian region.
pub fn point_in_profile(profile: &MeridianProfile, point: [f64; 2]) -> bool {
    profile.contains(point[0], point[1])
}

// ---------------------------------------------------------------------------
// Plain-text serialization (PROFILE v1)
// ---------------------------------------------------------------------------

/// Serializes a profile to the PROFILE v1 text format: a header, the
/// generator kind and parameters, then one line per piece carrying the piece
/// type, endpoints, center/radius/angles for arcs, tag, and group.
pub fn profile_to_text(profile: &MeridianProfile) -> String {
    let mut out = String::new();
    out.push_str("PROFILE v1\n");
    out.push_str(&format!("kind {}\n", profile.kind));
    if let Some(eps) = profile.params.eps {
        out.push_str(&format!("param eps {eps}\n"));
    }
    if let Some(delta) = profile.params.delta {
        out.push_str(&format!("param delta {delta}\n"));
    }
    if profile.params.smoothing_radius != 0.0 || profile.params.delta.is_some() {
        out.push_str(&format!("param smoothing {}\n", profile.params.smoothing_radius));
    }
    if let Some((lo, hi)) = profile.params.tube_span {
        out.push_str(&format!("param tube_span {lo} {hi}\n"));
    }
    for p in &profile.pieces {
        match p.curve {
            Curve::Segment { a, b } => {
                out.push_str(&format!(
                    "segment {} {} {} {} {} {}\n",
                    a[0], a[1], b[0], b[1], p.tag, p.group
                ));
            }
            Curve::Arc {
                center,
                radius,
                theta0,
                theta1,
            } => {
                let s = p.curve.start();
                let e = p.curve.end();
                out.push_str(&format!(
                    "arc {} {} {} {} {} {} {} {} {} {} {}\n",
                    s[0], s[1], e[0], e[1], center[0], center[1], radius, theta0, theta1, p.tag, p.group
                ));
            }
        }
    }
    out
}

/// Parses the PROFILE v1 format. The generator parameters are authoritative:
/// the profile is rebuilt from them and verified against the listed pieces,
/// so a file whose pieces disagree with its parameters is rejected.
pub fn profile_from_text(text: &str) -> Result<MeridianProfile> {
    let mut kind: Option<ProfileKind> = None;
    let mut params = ProfileParams::default();
    let mut listed: Vec<(usize, Vec<String>)> = Vec::new();

    let mut first_content = true;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if first_content {
            if content != "PROFILE v1" {
                return Err(Error::Parse {
                    line,
                    reason: format!("expected header `PROFILE v1`, found `{content}`"),
                });
            }
            first_content = false;
            continue;
        }
        let fields: Vec<String> = content.split_whitespace().map(str::to_owned).collect();
        match fields[0].as_str() {
            "kind" => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        reason: "kind line takes exactly one value".into(),
                    });
                }
                kind = Some(fields[1].parse().map_err(|e| Error::Parse { line, reason: e })?);
            }
            "param" => {
                let parse_f = |s: &str| -> Result<f64> {
                    s.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        reason: format!("invalid number `{s}`"),
                    })
                };
                match (fields.len(), fields.get(1).map(String::as_str)) {
                    (3, Some("eps")) => params.eps = Some(parse_f(&fields[2])?),
                    (3, Some("delta")) => params.delta = Some(parse_f(&fields[2])?),
                    (3, Some("smoothing")) => params.smoothing_radius = parse_f(&fields[2])?,
                    (4, Some("tube_span")) => {
                        params.tube_span = Some((parse_f(&fields[2])?, parse_f(&fields[3])?));
                    }
                    _ => {
                        return Err(Error::Parse {
                            line,
                            reason: format!("unrecognized param line `{content}`"),
                        })
                    }
                }
            }
            "segment" | "arc" => listed.push((line, fields)),
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!("unrecognized line kind `{other}`"),
                })
            }
        }
    }

    let kind = kind.ok_or(Error::Parse {
        line: 0,
        reason: "missing kind line".into(),
    })?;
    let rebuilt = make_profile(kind, params)?;

    if listed.len() != rebuilt.pieces.len() {
        return Err(Error::Parse {
            line: 0,
            reason: format!(
                "file lists {} pieces but the generator parameters produce {}",
                listed.len(),
                rebuilt.pieces.len()
            ),
        });
    }
    for ((line, fields), expect) in listed.iter().zip(rebuilt.pieces.iter()) {
        verify_piece(*line, fields, expect)?;
    }
    Ok(rebuilt)
}

fn verify_piece(line: usize, fields: &[String], expect: &BoundaryPiece) -> Result<()> {
    let parse_f = |s: &str| -> Result<f64> {
        s.parse::<f64>().map_err(|_| Error::Parse {
            line,
            reason: format!("invalid number `{s}`"),
        })
    };
    let mismatch = |what: &str| Error::Parse {
        line,
        reason: format!("piece {what} disagrees with the generator parameters"),
    };
    let tol = 1e-9;
    let close = |x: f64, y: f64| (x - y).abs() <= tol;
    match (fields[0].as_str(), expect.curve) {
        ("segment", Curve::Segment { a, b }) => {
            if fields.len() != 7 {
                return Err(Error::Parse {
                    line,
                    reason: "segment line takes 6 values".into(),
                });
            }
            let vals: Vec<f64> = fields[1..5]
                .iter()
                .map(|s| parse_f(s))
                .collect::<Result<_>>()?;
            if !(close(vals[0], a[0]) && close(vals[1], a[1]) && close(vals[2], b[0]) && close(vals[3], b[1])) {
                return Err(mismatch("endpoints"));
            }
            check_tag_group(line, &fields[5], &fields[6], expect)?;
        }
        ("arc", Curve::Arc { center, radius, theta0, theta1 }) => {
            if fields.len() != 12 {
                return Err(Error::Parse {
                    line,
                    reason: "arc line takes 11 values".into(),
                });
            }
            let vals: Vec<f64> = fields[1..10]
                .iter()
                .map(|s| parse_f(s))
                .collect::<Result<_>>()?;
            let s = expect.curve.start();
            let e = expect.curve.end();
            let ok = close(vals[0], s[0])
                && close(vals[1], s[1])
                && close(vals[2], e[0])
                && close(vals[3], e[1])
                && close(vals[4], center[0])
                && close(vals[5], center[1])
                && close(vals[6], radius)
                && close(vals[7], theta0)
                && close(vals[8], theta1);
            if !ok {
                return Err(mismatch("geometry"));
            }
            check_tag_group(line, &fields[10], &fields[11], expect)?;
        }
        (found, _) => {
            return Err(Error::Parse {
                line,
                reason: format!("piece type `{found}` does not match the generator parameters"),
            })
        }
    }
    Ok(())
}

fn check_tag_group(line: usize, tag: &str, group: &str, expect: &BoundaryPiece) -> Result<()> {
    let tag: Tag = tag.parse().map_err(|e| Error::Parse { line, reason: e })?;
    let group: Group = group.parse().map_err(|e| Error::Parse { line, reason: e })?;
    if tag != expect.tag || group != expect.group {
        return Err(Error::Parse {
            line,
            reason: "piece tag or group disagrees with the generator parameters".into(),
        });
    }
    Ok(())
}
