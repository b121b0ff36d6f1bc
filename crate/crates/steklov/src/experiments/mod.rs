//! Experiment drivers: each reproduces one family of spectral claims at desk
//! scale and emits a structured [`ExperimentReport`].
//!
//! Rows hold the raw numbers; verdicts judge each claim against its
//! threshold. Reference values are never hard-coded: every target is
//! recomputed from the closed-form module at run time. Given identical
//! parameters the drivers are deterministic — grid points run in parallel
//! when the `parallel` feature is on, but each point's arithmetic is
//! sequential and order-preserving, so report files bit-reproduce across
//! runs and across both build modes.

pub mod report;

pub use report::{format_significant, Cell, ExperimentReport, Verdict, CLAIM_LABELS, REPORT_SCHEMA};

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::{
    annulus_boundary_volume, annulus_mode_roots, annulus_spectrum, asymptotic_remainder,
    asymptotic_sigma, euclidean_bound, normalized, sphere_area,
};
use crate::fem::{assemble_mode, boundary_trace_mass, dtn_spectrum, EigenPair};
use crate::geometry::{make_profile, profile_measures, Group, ProfileKind, ProfileParams};
use crate::mesh::{generate_mesh, Feature, MeshParams};
use crate::par;

/// Checks the small-eps error order of the closed-form low-root asymptotic.
///
/// For each (n, k) the absolute error between the exact quadratic root and
/// its leading asymptotic is fitted to a log-log slope over `eps_set`; the
/// slope must reach 2k + n - 1 minus a 0.3 fitting allowance. Errors are
/// evaluated in compensated arithmetic because at the larger exponents they
/// sink below one ulp of the eigenvalue itself.
pub fn run_asymptotic_validation(
    n_set: &[u32],
    k_set: &[u32],
    eps_set: &[f64],
) -> Result<ExperimentReport> {
    let start = Instant::now();
    require_nonempty("dim", n_set)?;
    require_nonempty("k", k_set)?;
    if eps_set.len() < 2 {
        return Err(Error::invalid(
            "eps",
            "need at least two eps values to fit a slope",
        ));
    }
    let mut report = ExperimentReport::new(
        "asymptotic",
        &["n", "k", "eps", "exact", "asymptotic", "abs_error"],
    );
    for &n in n_set {
        for &k in k_set {
            let mut ln_eps = Vec::with_capacity(eps_set.len());
            let mut ln_err = Vec::with_capacity(eps_set.len());
            for &eps in eps_set {
                let exact_low = annulus_mode_roots(n, k, eps)?.0;
                let asym = asymptotic_sigma(n, k, eps)?;
                let err = asymptotic_remainder(n, k, eps)?;
                report.push_row(vec![
                    n.into(),
                    k.into(),
                    eps.into(),
                    exact_low.into(),
                    asym.into(),
                    err.into(),
                ]);
                ln_eps.push(eps.ln());
                ln_err.push(err.ln());
            }
            let slope = least_squares_slope(&ln_eps, &ln_err);
            let threshold = f64::from(2 * k + n - 1) - 0.3;
            report.push_verdict(
                "asymptotic-order",
                slope >= threshold,
                slope - threshold,
                format!(
                    "n={n} k={k}: fitted error slope {} vs threshold {}",
                    format_significant(slope, 6),
                    format_significant(threshold, 6)
                ),
            );
        }
    }
    report.meta("eps_grid", join_floats(eps_set));
    report.runtime = start.elapsed();
    Ok(report)
}

/// Compares normalized annulus eigenvalues against the ball's on a
/// (n, k, eps) grid.
///
/// The claim is asymptotic in eps, with an explicit leading-order threshold
/// only for k = 1; grid points with k = 1 and eps > 0.1 are therefore
/// recorded as informational out-of-regime rows (`in_regime` = 0) and do not
/// count toward the verdict.
pub fn run_normalized_comparison(
    n_set: &[u32],
    k_set: &[u32],
    eps_set: &[f64],
) -> Result<ExperimentReport> {
    let start = Instant::now();
    require_nonempty("dim", n_set)?;
    require_nonempty("k", k_set)?;
    require_nonempty("eps", eps_set)?;
    let mut report = ExperimentReport::new(
        "comparison",
        &[
            "n",
            "k",
            "eps",
            "in_regime",
            "annulus_sigma",
            "annulus_normalized",
            "ball_sigma",
            "ball_normalized",
            "margin",
        ],
    );
    let mut all = true;
    let mut worst = f64::MAX;
    let mut worst_at = String::new();
    let mut in_regime_points = 0usize;
    for &n in n_set {
        for &k in k_set {
            if k == 0 {
                return Err(Error::invalid("k", "distinct index must be at least 1"));
            }
            let ball_norm = normalized(f64::from(k), sphere_area(n - 1)?, n)?.value;
            for &eps in eps_set {
                let spectrum = annulus_spectrum(n, eps, k as usize + 1)?;
                let sigma_ann = spectrum.entries()[k as usize].value;
                let norm_ann =
                    normalized(sigma_ann, annulus_boundary_volume(n, eps)?, n)?.value;
                let margin = norm_ann - ball_norm;
                let in_regime = k >= 2 || eps <= 0.1;
                if in_regime {
                    in_regime_points += 1;
                    if margin <= 0.0 {
                        all = false;
                    }
                    if margin < worst {
                        worst = margin;
                        worst_at = format!("n={n} k={k} eps={eps}");
                    }
                }
                report.push_row(vec![
                    n.into(),
                    k.into(),
                    eps.into(),
                    i64::from(in_regime).into(),
                    sigma_ann.into(),
                    norm_ann.into(),
                    f64::from(k).into(),
                    ball_norm.into(),
                    margin.into(),
                ]);
            }
        }
    }
    let (pass, margin, detail) = if in_regime_points == 0 {
        (
            false,
            0.0,
            "no in-regime grid points (k = 1 requires eps <= 0.1)".to_string(),
        )
    } else {
        (
            all,
            worst,
            format!(
                "worst in-regime margin {} at {worst_at} over {in_regime_points} points",
                format_significant(worst, 6)
            ),
        )
    };
    report.push_verdict("normalized-comparison", pass, margin, detail);
    report.runtime = start.elapsed();
    Ok(report)
}

/// One solved member of the tube family: the annulus with a thin coaxial
/// tube of radius `delta` drilled through the north polar axis.
#[derive(Debug, Clone)]
pub struct TubePoint {
    pub delta: f64,
    /// First nonzero eigenvalue across azimuthal modes.
    pub sigma1: f64,
    /// Azimuthal mode attaining it.
    pub mode: u32,
    /// Total generalized boundary area (closed form, not quadrature).
    pub boundary_area: f64,
    /// Area of the tube wall alone.
    pub wall_area: f64,
    /// sigma1 scaled by the square root of the boundary area.
    pub normalized: f64,
    /// Share of the first eigenfunction's boundary trace on the tube wall.
    pub wall_mass: f64,
    pub nodes: usize,
}

/// Azimuthal modes searched for the first nonzero eigenvalue. Per-mode
/// minima increase with the mode index and the target sits near the annulus
/// k = 1 value, so modes beyond 2 cannot carry it.
const TUBE_MODES: u32 = 2;
/// Tube-wall mesh grading relative to the neck radius.
const WALL_GRADING_DIVISOR: f64 = 3.0;
/// Smallest neck radius the adaptive exceedance search may visit.
const DELTA_BUDGET: f64 = 1e-3;

/// Solves one tube domain: meshes it with the wall graded to `delta / 3`,
/// finds the first nonzero eigenvalue over azimuthal modes 0..=2, and
/// returns it with closed-form boundary measures and the eigenfunction's
/// wall trace mass.
pub fn tube_point(eps: f64, delta: f64, params: &MeshParams) -> Result<TubePoint> {
    let profile = make_profile(
        ProfileKind::AnnulusWithTube,
        ProfileParams::tube(eps, delta, 0.0),
    )?;
    let measures = profile_measures(&profile);
    let mut local = params.clone();
    local
        .grading
        .insert(Feature::TubeWall, delta / WALL_GRADING_DIVISOR);
    let mesh = generate_mesh(&profile, &local)?;

    let mut best: Option<EigenPair> = None;
    for m in 0..=TUBE_MODES {
        let system = assemble_mode(&mesh, m)?;
        // mode zero leads with the discrete constant (sigma ~ 0); skip it
        let take = if m == 0 { 2 } else { 1 };
        for pair in dtn_spectrum(&system, take)? {
            if pair.sigma <= 1e-6 {
                continue;
            }
            if best.as_ref().map_or(true, |b| pair.sigma < b.sigma) {
                best = Some(pair);
            }
        }
    }
    let best = best.ok_or_else(|| {
        Error::Numerical("no nonzero eigenvalue found on the tube domain".into())
    })?;
    let wall_mass = boundary_trace_mass(&best, &mesh, Group::TubeWall)?;
    let boundary_area = measures.total_steklov_area;
    let wall_area = measures
        .boundary_area_by_group
        .get(&Group::TubeWall)
        .copied()
        .unwrap_or(0.0);
    let norm = normalized(best.sigma, boundary_area, 3)?.value;
    Ok(TubePoint {
        delta,
        sigma1: best.sigma,
        mode: best.mode,
        boundary_area,
        wall_area,
        normalized: norm,
        wall_mass,
        nodes: mesh.node_count(),
    })
}

/// Solves the tube family over a strictly decreasing neck-radius grid,
/// in parallel across grid points.
pub fn tube_sweep(eps: f64, deltas: &[f64], params: &MeshParams) -> Result<Vec<TubePoint>> {
    require_nonempty("delta", deltas)?;
    for w in deltas.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::invalid(
                "delta",
                format!("grid must be strictly decreasing, got {} then {}", w[0], w[1]),
            ));
        }
    }
    let first = deltas[0];
    if !(first < eps / 2.0) {
        return Err(Error::invalid(
            "delta",
            format!("neck radius {first} must stay below eps/2 = {}", eps / 2.0),
        ));
    }
    if *deltas.last().expect("nonempty") <= 0.0 {
        return Err(Error::invalid("delta", "neck radii must be positive"));
    }
    par::try_map_indices(deltas.len(), |i| tube_point(eps, deltas[i], params))
}

/// Fits sigma(delta) ~ sigma_inf - c * delta^p by least squares, the rate p
/// itself fitted by a golden-section scan over [0.05, 4]. The continuum rate
/// is not known a priori, so nothing is assumed beyond a single power law.
/// Returns (sigma_inf, c, p); needs at least three points.
pub fn fit_power_limit(deltas: &[f64], sigmas: &[f64]) -> Result<(f64, f64, f64)> {
    if deltas.len() != sigmas.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} deltas vs {} sigmas",
            deltas.len(),
            sigmas.len()
        )));
    }
    if deltas.len() < 3 {
        return Err(Error::invalid(
            "delta",
            "need at least three points to fit a two-parameter limit",
        ));
    }
    let rss = |p: f64| -> f64 {
        let (s_inf, c) = limit_for_rate(deltas, sigmas, p);
        deltas
            .iter()
            .zip(sigmas)
            .map(|(&d, &s)| {
                let r = s_inf - c * d.powf(p) - s;
                r * r
            })
            .sum()
    };
    let (p, _) = golden_section_max(0.05, 4.0, 1e-6, |p| -rss(p));
    let (s_inf, c) = limit_for_rate(deltas, sigmas, p);
    Ok((s_inf, c, p))
}

/// Least squares for sigma = a - c * delta^p at fixed p.
fn limit_for_rate(deltas: &[f64], sigmas: &[f64], p: f64) -> (f64, f64) {
    let n = deltas.len() as f64;
    let xs: Vec<f64> = deltas.iter().map(|d| d.powf(p)).collect();
    let sx: f64 = xs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sy: f64 = sigmas.iter().sum();
    let sxy: f64 = xs.iter().zip(sigmas).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    (intercept, -slope)
}

/// Golden-section search for a maximizer of `f` on [a, b], shrinking the
/// bracket to `width`. Returns the final bracket midpoint and its value.
pub fn golden_section_max<F: Fn(f64) -> f64>(a: f64, b: f64, width: f64, f: F) -> (f64, f64) {
    assert!(b > a && width > 0.0, "bracket must be ordered and width positive");
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > width {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Tracks the first eigenvalue of the tube family as the neck shrinks.
///
/// Verdicts: (a) sigma1 strictly increases as delta decreases, (b) the
/// fitted limit lands within 1% of the exact annulus value, and (c) some
/// computed neck has a normalized eigenvalue above the ball's. For (c) the
/// grid is extended by halving delta (down to 1e-3, wall grading following)
/// when the given grid has not yet exceeded; if the budget runs out, the
/// asymptotic fallback passes instead when the trend is monotone and the
/// fitted normalized limit clears the ball value by at least 0.005.
pub fn run_tube_limit(eps: f64, delta_set: &[f64], params: &MeshParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    let target = annulus_spectrum(3, eps, 2)?.entries()[1].value;
    let ball_norm = sphere_area(2)?.sqrt();
    let annulus_norm = normalized(target, annulus_boundary_volume(3, eps)?, 3)?.value;
    let points = tube_sweep(eps, delta_set, params)?;

    let mut report = ExperimentReport::new(
        "tube-limit",
        &[
            "delta",
            "sigma1",
            "mode",
            "normalized",
            "boundary_area",
            "wall_area",
            "nodes",
            "phase",
        ],
    );
    for q in &points {
        push_tube_row(&mut report, q, "grid");
    }

    let mono = points.windows(2).all(|w| w[1].sigma1 > w[0].sigma1);
    let min_step = points
        .windows(2)
        .map(|w| w[1].sigma1 - w[0].sigma1)
        .fold(f64::MAX, f64::min);
    report.push_verdict(
        "tube-limit-monotonicity",
        mono,
        if points.len() > 1 { min_step } else { 0.0 },
        format!(
            "sigma1 over decreasing delta: {}",
            join_floats(&points.iter().map(|q| q.sigma1).collect::<Vec<_>>())
        ),
    );

    let deltas: Vec<f64> = points.iter().map(|q| q.delta).collect();
    let sigmas: Vec<f64> = points.iter().map(|q| q.sigma1).collect();
    let (s_inf, c, p) = fit_power_limit(&deltas, &sigmas)?;
    let rel = (s_inf - target).abs() / target;
    report.push_verdict(
        "tube-limit-extrapolation",
        rel <= 0.01,
        0.01 - rel,
        format!(
            "fitted limit {} vs exact annulus {} (relative error {}, rate p = {})",
            format_significant(s_inf, 12),
            format_significant(target, 12),
            format_significant(rel, 4),
            format_significant(p, 4)
        ),
    );

    let mut exceed = f64::MIN;
    let mut exceed_at = 0.0;
    let note = |q: &TubePoint, exceed: &mut f64, exceed_at: &mut f64| {
        if q.normalized - ball_norm > *exceed {
            *exceed = q.normalized - ball_norm;
            *exceed_at = q.delta;
        }
    };
    for q in &points {
        note(q, &mut exceed, &mut exceed_at);
    }
    // extend only while the limit itself clears the ball value: otherwise no
    // neck radius can, and the halving would burn the budget for nothing
    if exceed <= 0.0 && annulus_norm > ball_norm {
        let mut delta = points.last().expect("nonempty sweep").delta / 2.0;
        while exceed <= 0.0 && delta >= DELTA_BUDGET {
            let q = tube_point(eps, delta, params)?;
            push_tube_row(&mut report, &q, "adaptive");
            note(&q, &mut exceed, &mut exceed_at);
            delta /= 2.0;
        }
    }
    if exceed > 0.0 {
        report.push_verdict(
            "weinstock-exceedance",
            true,
            exceed,
            format!(
                "normalized sigma1 beats the ball value {} by {} at delta = {}",
                format_significant(ball_norm, 12),
                format_significant(exceed, 6),
                format_significant(exceed_at, 6)
            ),
        );
    } else {
        let norm_limit = normalized(s_inf, annulus_boundary_volume(3, eps)?, 3)?.value;
        let fallback = mono && norm_limit > ball_norm + 0.005;
        report.push_verdict(
            "weinstock-exceedance",
            fallback,
            norm_limit - (ball_norm + 0.005),
            format!(
                "no computed neck above the ball value {} within the delta budget {DELTA_BUDGET}; \
                 asymptotic fallback: monotone trend = {mono}, fitted normalized limit {} \
                 (exact annulus target {})",
                format_significant(ball_norm, 12),
                format_significant(norm_limit, 12),
                format_significant(annulus_norm, 12)
            ),
        );
    }

    report.meta("n", "3");
    report.meta("eps", format_significant(eps, 12));
    report.meta("h", format_significant(params.h, 12));
    report.meta("exact_target", format_significant(target, 12));
    report.meta("fit_limit", format_significant(s_inf, 12));
    report.meta("fit_coefficient", format_significant(c, 12));
    report.meta("fit_rate", format_significant(p, 12));
    report.meta("ball_normalized", format_significant(ball_norm, 12));
    report.meta("annulus_normalized", format_significant(annulus_norm, 12));
    report.runtime = start.elapsed();
    Ok(report)
}

fn push_tube_row(report: &mut ExperimentReport, q: &TubePoint, phase: &str) {
    report.push_row(vec![
        q.delta.into(),
        q.sigma1.into(),
        q.mode.into(),
        q.normalized.into(),
        q.boundary_area.into(),
        q.wall_area.into(),
        q.nodes.into(),
        phase.into(),
    ]);
}

/// Tracks where the first eigenfunction lives as the neck shrinks: its
/// boundary trace mass on the tube wall must decrease strictly and at least
/// halve from the first neck radius to the last.
pub fn run_neck_concentration(
    eps: f64,
    delta_set: &[f64],
    params: &MeshParams,
) -> Result<ExperimentReport> {
    let start = Instant::now();
    if delta_set.len() < 2 {
        return Err(Error::invalid(
            "delta",
            "need at least two neck radii to test the decay",
        ));
    }
    let points = tube_sweep(eps, delta_set, params)?;
    let mut report = ExperimentReport::new(
        "neck",
        &[
            "delta",
            "wall_mass",
            "wall_area_fraction",
            "sigma1",
            "mode",
            "nodes",
        ],
    );
    for q in &points {
        report.push_row(vec![
            q.delta.into(),
            q.wall_mass.into(),
            (q.wall_area / q.boundary_area).into(),
            q.sigma1.into(),
            q.mode.into(),
            q.nodes.into(),
        ]);
    }
    let in_range = points.iter().all(|q| q.wall_mass > 0.0 && q.wall_mass < 1.0);
    let decreasing = points.windows(2).all(|w| w[1].wall_mass < w[0].wall_mass);
    let first = points.first().expect("nonempty sweep").wall_mass;
    let last = points.last().expect("nonempty sweep").wall_mass;
    let halved = last < first / 2.0;
    report.push_verdict(
        "neck-nonconcentration",
        in_range && decreasing && halved,
        first / 2.0 - last,
        format!(
            "wall trace mass fell {} -> {} (halving target {}); strictly decreasing = {decreasing}",
            format_significant(first, 6),
            format_significant(last, 6),
            format_significant(first / 2.0, 6)
        ),
    );
    report.meta("n", "3");
    report.meta("eps", format_significant(eps, 12));
    report.meta("h", format_significant(params.h, 12));
    report.runtime = start.elapsed();
    Ok(report)
}

/// Maximizes the normalized first eigenvalue of the annulus family over the
/// inner radius by golden-section search on [0.01, 0.95] (bracket width
/// 1e-4), checking that the maximum is interior and beats the ball.
pub fn run_annulus_optimizer(n: u32) -> Result<ExperimentReport> {
    let start = Instant::now();
    const LO: f64 = 0.01;
    const HI: f64 = 0.95;
    const WIDTH: f64 = 1e-4;
    // validate (n, bracket) once so the search closure below cannot fail
    let end_lo = annulus_normalized_first(n, LO)?;
    let end_hi = annulus_normalized_first(n, HI)?;
    let objective = |eps: f64| {
        annulus_normalized_first(n, eps).expect("bracket interior was validated")
    };

    let mut report = ExperimentReport::new("optimize", &["eps", "sigma1", "normalized"]);
    for i in 1..=95u32 {
        let eps = f64::from(i) / 100.0;
        let spectrum = annulus_spectrum(n, eps, 2)?;
        let sigma1 = spectrum.entries()[1].value;
        let norm = normalized(sigma1, annulus_boundary_volume(n, eps)?, n)?.value;
        report.push_row(vec![eps.into(), sigma1.into(), norm.into()]);
    }

    let (eps_star, value) = golden_section_max(LO, HI, WIDTH, objective);
    let ball_norm = normalized(1.0, sphere_area(n - 1)?, n)?.value;
    let interior = value > end_lo && value > end_hi;
    report.push_verdict(
        "annulus-optimizer",
        interior && value > ball_norm,
        value - ball_norm,
        format!(
            "maximum {} at eps = {} (ball {}, endpoints {} and {})",
            format_significant(value, 12),
            format_significant(eps_star, 6),
            format_significant(ball_norm, 12),
            format_significant(end_lo, 6),
            format_significant(end_hi, 6)
        ),
    );
    report.meta("n", n.to_string());
    report.meta("eps_star", format_significant(eps_star, 12));
    report.meta("max_normalized", format_significant(value, 12));
    report.meta("ball_normalized", format_significant(ball_norm, 12));
    report.meta("bracket", format!("[{LO}, {HI}] to width {WIDTH}"));
    report.runtime = start.elapsed();
    Ok(report)
}

/// The normalized first nonzero eigenvalue of the annulus with inner radius
/// `eps` in dimension `n`.
pub fn annulus_normalized_first(n: u32, eps: f64) -> Result<f64> {
    let sigma1 = annulus_spectrum(n, eps, 2)?.entries()[1].value;
    Ok(normalized(sigma1, annulus_boundary_volume(n, eps)?, n)?.value)
}

/// Audits normalized first eigenvalues against the explicit Euclidean upper
/// bound: a built-in exact sample grid (balls and annuli for n = 3..6) plus
/// every first-eigenvalue value found in the given reports.
///
/// Ingestion convention: a report contributes the float columns named
/// `normalized` or ending in `_normalized`, row by row; the dimension comes
/// from an `n` column or, failing that, an `n` metadata key. Rows with a `k`
/// column only contribute for k = 1 (the bound speaks about the first
/// eigenvalue only).
pub fn run_bound_audit(reports: &[ExperimentReport]) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut report = ExperimentReport::new(
        "audit",
        &["source", "n", "value", "bound", "margin"],
    );
    let mut worst = f64::MAX;
    let mut worst_at = String::new();
    let mut all = true;
    let mut rows: Vec<(String, u32, f64)> = Vec::new();

    for n in 3..=6u32 {
        rows.push((
            format!("ball n={n}"),
            n,
            normalized(1.0, sphere_area(n - 1)?, n)?.value,
        ));
        for i in 1..=18u32 {
            let eps = f64::from(i) * 0.05;
            rows.push((
                format!("annulus n={n} eps={eps}"),
                n,
                annulus_normalized_first(n, eps)?,
            ));
        }
    }

    for source in reports {
        let n_col = source.column("n");
        let k_col = source.column("k");
        let value_cols: Vec<usize> = source
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| *c == "normalized" || c.ends_with("_normalized"))
            .map(|(i, _)| i)
            .collect();
        if value_cols.is_empty() {
            continue;
        }
        let meta_n: Option<u32> = source.metadata.get("n").and_then(|s| s.parse().ok());
        for (r, row) in source.rows.iter().enumerate() {
            if let Some(kc) = k_col {
                if row[kc].as_f64() != Some(1.0) {
                    continue;
                }
            }
            let n = match n_col
                .and_then(|c| row[c].as_f64())
                .map(|v| v as u32)
                .or(meta_n)
            {
                Some(n) => n,
                None => continue,
            };
            for &vc in &value_cols {
                if let Some(value) = row[vc].as_f64() {
                    rows.push((
                        format!("{}:{}:{r}", source.name, source.columns[vc]),
                        n,
                        value,
                    ));
                }
            }
        }
    }

    for (source, n, value) in rows {
        let bound = euclidean_bound(n)?;
        let margin = bound - value;
        if margin <= 0.0 {
            all = false;
        }
        if margin < worst {
            worst = margin;
            worst_at = source.clone();
        }
        report.push_row(vec![
            source.into(),
            n.into(),
            value.into(),
            bound.into(),
            margin.into(),
        ]);
    }
    report.push_verdict(
        "bound-audit",
        all,
        worst,
        format!("worst margin {} at {worst_at}", format_significant(worst, 6)),
    );
    report.runtime = start.elapsed();
    Ok(report)
}

fn require_nonempty<T>(name: &'static str, values: &[T]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid(name, "grid must not be empty"));
    }
    Ok(())
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format_significant(*v, 12))
        .collect::<Vec<_>>()
        .join(",")
}
