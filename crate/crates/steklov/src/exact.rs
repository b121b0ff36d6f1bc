//! Closed-form Steklov spectra of the unit ball and the spherical-shell
//! annulus B1 minus B_eps in dimension n >= 3.
//!
//! Separation of variables on the annulus reduces each angular degree k to a
//! quadratic pencil A s^2 + B s + C = 0 whose two roots are Steklov
//! eigenvalues of multiplicity equal to the degree-k spherical harmonic
//! space. The module also provides the small-eps asymptotic expansion of the
//! low root, boundary-volume normalization, and the explicit upper-bound
//! constant for Euclidean domains that every computed normalized eigenvalue
//! is audited against.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::spectrum::{Branch, Label, Spectrum, SpectrumEntry};

/// One angular separation block of the annulus problem: the quadratic
/// coefficients for degree k together with both roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusMode {
    pub n: u32,
    pub k: u32,
    pub eps: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub sigma_low: f64,
    pub sigma_high: f64,
}

impl AnnulusMode {
    pub fn new(n: u32, k: u32, eps: f64) -> Result<Self> {
        let (a, b, c) = annulus_coeffs(n, k, eps)?;
        let (sigma_low, sigma_high) = roots_from_coeffs(a, b, c)?;
        Ok(AnnulusMode {
            n,
            k,
            eps,
            a,
            b,
            c,
            sigma_low,
            sigma_high,
        })
    }

    /// Largest quadratic residual |A s^2 + B s + C| over the two stored
    /// roots, for validating the cancellation-safe root formulas.
    pub fn residual(&self) -> f64 {
        let eval = |s: f64| (self.a * s * s + self.b * s + self.c).abs();
        eval(self.sigma_low).max(eval(self.sigma_high))
    }
}

fn check_dim(n: u32, min: u32) -> Result<()> {
    if n < min {
        return Err(Error::invalid(
            "dim",
            format!("dimension must be at least {min}, got {n}"),
        ));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && 0.0 < eps && eps < 1.0) {
        return Err(Error::invalid(
            "eps",
            format!("inner radius must lie strictly between 0 and 1, got {eps}"),
        ));
    }
    Ok(())
}

/// Quadratic coefficients (A, B, C) of the degree-k annulus block.
///
/// With p = 2k + n - 2:
///   A = eps (1 - eps^p),
///   B = -(k eps + k eps^p + (k + n - 2) eps^(p+1) + (k + n - 2)),
///   C = k (k + n - 2) (1 - eps^p).
pub fn annulus_coeffs(n: u32, k: u32, eps: f64) -> Result<(f64, f64, f64)> {
    check_dim(n, 3)?;
    check_eps(eps)?;
    let kf = f64::from(k);
    let q = f64::from(k + n - 2);
    let ep = eps.powi((2 * k + n - 2) as i32);
    let a = eps * (1.0 - ep);
    let b = -(kf * eps + kf * ep + q * ep * eps + q);
    let c = kf * q * (1.0 - ep);
    Ok((a, b, c))
}

/// Both roots of A s^2 + B s + C = 0, low root first.
///
/// The low root is computed as 2C / (-B + sqrt(disc)) so that no subtraction
/// of nearly equal quantities occurs at small eps, where -B = O(1) while the
/// naive (-B - sqrt(disc)) / 2A cancels catastrophically.
pub fn annulus_mode_roots(n: u32, k: u32, eps: f64) -> Result<(f64, f64)> {
    let (a, b, c) = annulus_coeffs(n, k, eps)?;
    roots_from_coeffs(a, b, c)
}

fn roots_from_coeffs(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::Numerical(format!(
            "negative discriminant {disc} for quadratic coefficients ({a}, {b}, {c})"
        )));
    }
    let root = disc.sqrt();
    // b < 0 for all valid blocks, so -b + root adds two positives.
    let high = (-b + root) / (2.0 * a);
    let low = if c == 0.0 { 0.0 } else { 2.0 * c / (-b + root) };
    Ok((low, high))
}

/// Dimension of the space of degree-k spherical harmonics on S^(n-1):
/// binom(n+k-1, k) - binom(n+k-3, k-2), the second term absent for k < 2.
pub fn harmonic_multiplicity(n: u32, k: u32) -> Result<u32> {
    check_dim(n, 2)?;
    let total = binomial(u64::from(n + k) - 1, u64::from(k))?;
    let lower = if k < 2 {
        0
    } else {
        binomial(u64::from(n + k) - 3, u64::from(k) - 2)?
    };
    let m = total - lower;
    u32::try_from(m).map_err(|_| {
        Error::invalid("k", format!("multiplicity {m} overflows for n={n}, k={k}"))
    })
}

fn binomial(a: u64, b: u64) -> Result<u128> {
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 1..=b {
        // The running product is always an exact binomial, so the divide is exact.
        acc = acc
            .checked_mul(u128::from(a - b + i))
            .ok_or_else(|| Error::invalid("k", "binomial coefficient overflow".to_string()))?
            / u128::from(i);
    }
    Ok(acc)
}

/// Full ball spectrum: sigma_k = k with harmonic multiplicity, k = 0..=count.
pub fn ball_spectrum(n: u32, count: usize) -> Result<Spectrum> {
    check_dim(n, 2)?;
    check_count(count)?;
    let mut entries = Vec::with_capacity(count + 1);
    for k in 0..=count as u32 {
        entries.push(SpectrumEntry {
            value: f64::from(k),
            multiplicity: harmonic_multiplicity(n, k)?,
            label: Label::Harmonic { k },
        });
    }
    Spectrum::new(entries)
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::invalid("count", "count must be at least 1"));
    }
    Ok(())
}

/// Merged annulus spectrum with at least `count` nonzero entries.
///
/// Blocks are scanned in increasing k, each contributing both roots with the
/// degree's harmonic multiplicity. The scan stops at the first k whose low
/// root exceeds the running count-th smallest nonzero value by more than 1;
/// low roots increase in k, so no later block can reach that range.
pub fn annulus_spectrum(n: u32, eps: f64, count: usize) -> Result<Spectrum> {
    check_count(count)?;
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut nonzero: Vec<f64> = Vec::new();
    let mut k = 0u32;
    loop {
        if nonzero.len() >= count {
            let mut sorted = nonzero.clone();
            sorted.sort_by(|x, y| x.total_cmp(y));
            let kth = sorted[count - 1];
            let (low, _) = annulus_mode_roots(n, k, eps)?;
            if low > kth + 1.0 {
                break;
            }
        }
        let mode = AnnulusMode::new(n, k, eps)?;
        let mult = harmonic_multiplicity(n, k)?;
        entries.push(SpectrumEntry {
            value: mode.sigma_low,
            multiplicity: mult,
            label: Label::Angular {
                k,
                branch: Branch::Low,
            },
        });
        entries.push(SpectrumEntry {
            value: mode.sigma_high,
            multiplicity: mult,
            label: Label::Angular {
                k,
                branch: Branch::High,
            },
        });
        if mode.sigma_low > 0.0 {
            nonzero.push(mode.sigma_low);
        }
        nonzero.push(mode.sigma_high);
        k = k
            .checked_add(1)
            .ok_or_else(|| Error::Numerical("annulus k-scan exhausted u32".into()))?;
    }
    entries.sort_by(|x, y| x.value.total_cmp(&y.value));
    Spectrum::new(entries)
}

/// Leading asymptotic of the low root:
/// sigma_k ~ k - [k (2k + n - 2) / (k + n - 2)] eps^(2k + n - 2).
pub fn asymptotic_sigma(n: u32, k: u32, eps: f64) -> Result<f64> {
    check_dim(n, 3)?;
    check_k_positive(k)?;
    check_eps(eps)?;
    let kf = f64::from(k);
    let p = f64::from(2 * k + n - 2);
    let q = f64::from(k + n - 2);
    Ok(kf - kf * p / q * eps.powi((2 * k + n - 2) as i32))
}

fn check_k_positive(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("k", "angular index must be at least 1"));
    }
    Ok(())
}

/// Remainder |sigma_low - asymptotic_sigma|, evaluated in compensated
/// double-double arithmetic.
///
/// At small eps the remainder is O(eps^(2k+n-1)), which for the larger
/// exponents in the validation grid drops below one ulp of sigma itself;
/// forming the difference in plain f64 would return pure roundoff. The
/// compensated path reproduces the plain-f64 difference wherever that
/// difference is well resolved.
pub fn asymptotic_remainder(n: u32, k: u32, eps: f64) -> Result<f64> {
    check_dim(n, 3)?;
    check_k_positive(k)?;
    check_eps(eps)?;
    let e = Dd::from_f64(eps);
    let kf = Dd::from_u32(k);
    let q = Dd::from_u32(k + n - 2);
    let p = 2 * k + n - 2;
    let ep = e.powi(p);
    let one = Dd::from_f64(1.0);

    let a = e * (one - ep);
    let b = -(kf * e + kf * ep + q * ep * e + q);
    let c = kf * q * (one - ep);

    let disc = b * b - Dd::from_f64(4.0) * a * c;
    let root = disc.sqrt();
    let low = Dd::from_f64(2.0) * c / (-b + root);

    let asym = kf - kf * Dd::from_u32(p) / q * ep;
    Ok((low - asym).abs().to_f64())
}

/// d-volume of the unit d-sphere S^d (so sphere_area(2) is the ordinary
/// surface area 4 pi of the sphere in R^3).
pub fn sphere_area(d: u32) -> Result<f64> {
    if d < 1 {
        return Err(Error::invalid("dim", "sphere dimension must be at least 1"));
    }
    Ok(sphere_area_unchecked(d))
}

fn sphere_area_unchecked(d: u32) -> f64 {
    // |S^d| = 2 pi^((d+1)/2) / Gamma((d+1)/2); S^0 is two points.
    if d == 0 {
        return 2.0;
    }
    let half_dim = f64::from(d + 1) / 2.0;
    2.0 * std::f64::consts::PI.powf(half_dim) / gamma_half_integer(d + 1)
}

/// Gamma(twice/2) for positive integer `twice`, by the recurrence from
/// Gamma(1/2) = sqrt(pi) or Gamma(1) = 1.
fn gamma_half_integer(twice: u32) -> f64 {
    let (mut g, mut x) = if twice % 2 == 0 {
        (1.0, 1.0)
    } else {
        (std::f64::consts::PI.sqrt(), 0.5)
    };
    while 2.0 * x + 0.5 < f64::from(twice) {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in R^n.
pub fn ball_volume(n: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("dim", "ball dimension must be at least 1"));
    }
    Ok(sphere_area_unchecked(n - 1) / f64::from(n))
}

/// Boundary (n-1)-volume of the annulus B1 minus B_eps:
/// |S^(n-1)| (1 + eps^(n-1)).
pub fn annulus_boundary_volume(n: u32, eps: f64) -> Result<f64> {
    check_dim(n, 2)?;
    check_eps(eps)?;
    Ok(sphere_area_unchecked(n - 1) * (1.0 + eps.powi((n - 1) as i32)))
}

/// An eigenvalue scaled by its domain's boundary volume,
/// value = sigma |bdry|^(1/(n-1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedValue {
    pub sigma: f64,
    pub boundary_volume: f64,
    pub n: u32,
    pub value: f64,
}

pub fn normalized(sigma: f64, boundary_volume: f64, n: u32) -> Result<NormalizedValue> {
    check_dim(n, 2)?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::invalid(
            "sigma",
            format!("eigenvalue must be finite and nonnegative, got {sigma}"),
        ));
    }
    if !(boundary_volume.is_finite() && boundary_volume > 0.0) {
        return Err(Error::invalid(
            "boundary_volume",
            format!("boundary volume must be positive, got {boundary_volume}"),
        ));
    }
    let value = sigma * boundary_volume.powf(1.0 / f64::from(n - 1));
    Ok(NormalizedValue {
        sigma,
        boundary_volume,
        n,
        value,
    })
}

/// Explicit upper bound for the normalized first Steklov eigenvalue of any
/// bounded Euclidean domain in R^n:
/// n^(1/(n-1)) |S^n|^(2/n) / |B^n|^((n-2)/(n(n-1))).
pub fn euclidean_bound(n: u32) -> Result<f64> {
    check_dim(n, 2)?;
    let nf = f64::from(n);
    let sn = sphere_area_unchecked(n);
    let bn = ball_volume(n)?;
    Ok(nf.powf(1.0 / (nf - 1.0)) * sn.powf(2.0 / nf) / bn.powf((nf - 2.0) / (nf * (nf - 1.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // Root values frozen from an independent high-precision evaluation of
    // the quadratic blocks (see the residual test for the in-crate check).
    const N3_E05_LOW: [(u32, f64); 5] = [
        (1, 0.718_491_035_931_837_2),
        (2, 1.793_667_392_071_456_3),
        (3, 2.905_685_508_182_298_5),
        (4, 3.965_281_585_261_084),
        (5, 4.988_530_100_296_1),
    ];

    #[test]
    fn coeff_examples() {
        let (a, b, c) = annulus_coeffs(3, 1, 0.1).unwrap();
        assert_abs_diff_eq!(a, 0.0999, epsilon = 1e-15);
        assert_abs_diff_eq!(b, -2.1012, epsilon = 1e-15);
        assert_abs_diff_eq!(c, 1.998, epsilon = 1e-15);

        let (a, b, c) = annulus_coeffs(3, 0, 0.5).unwrap();
        assert_eq!(a, 0.25);
        assert_eq!(b, -1.25);
        assert_eq!(c, 0.0);

        let (a, b, c) = annulus_coeffs(3, 1, 0.5).unwrap();
        assert_abs_diff_eq!(a, 0.4375, epsilon = 1e-15);
        assert_abs_diff_eq!(b, -2.75, epsilon = 1e-15);
        assert_abs_diff_eq!(c, 1.75, epsilon = 1e-15);
    }

    #[test]
    fn k0_block_is_exactly_degenerate() {
        // C = 0 forces roots {0, -B/A}; for eps = 0.5, n = 3 that is {0, 5}.
        let (low, high) = annulus_mode_roots(3, 0, 0.5).unwrap();
        assert_eq!(low, 0.0);
        assert_abs_diff_eq!(high, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn low_roots_match_frozen_values() {
        for &(k, expected) in &N3_E05_LOW {
            let (low, _) = annulus_mode_roots(3, k, 0.5).unwrap();
            assert_relative_eq!(low, expected, max_relative = 1e-12);
        }
        let (low, high) = annulus_mode_roots(3, 1, 0.1).unwrap();
        assert_relative_eq!(low, 0.998_264_594_962_607_1, max_relative = 1e-12);
        assert_relative_eq!(high, 20.034_768_438_070_426, max_relative = 1e-12);
        let (low, _) = annulus_mode_roots(3, 2, 0.5).unwrap();
        assert_relative_eq!(low, 1.793_667_392_071_456_3, max_relative = 1e-12);
        let (_, high) = annulus_mode_roots(3, 2, 0.5).unwrap();
        assert_relative_eq!(high, 6.690_203_575_670_479, max_relative = 1e-12);
    }

    #[test]
    fn residuals_stay_tiny_across_grid() {
        for n in 3..=6 {
            for k in 0..=8 {
                for &eps in &[0.02, 0.05, 0.1, 0.2, 0.5, 0.9, 0.99] {
                    let mode = AnnulusMode::new(n, k, eps).unwrap();
                    let scale = mode.a.abs().max(mode.b.abs()).max(mode.c.abs());
                    assert!(
                        mode.residual() <= 1e-10 * scale,
                        "residual {} too large at n={n} k={k} eps={eps}",
                        mode.residual()
                    );
                    assert!(mode.sigma_low >= 0.0);
                    assert!(mode.sigma_low < mode.sigma_high);
                    assert!(mode.a > 0.0);
                    assert!(mode.c >= 0.0);
                    assert_eq!(mode.c == 0.0, k == 0);
                }
            }
        }
    }

    #[test]
    fn low_roots_increase_in_k() {
        for n in 3..=6 {
            for &eps in &[0.05, 0.2, 0.5, 0.9] {
                let mut prev = -1.0;
                for k in 0..=12 {
                    let (low, _) = annulus_mode_roots(n, k, eps).unwrap();
                    assert!(low > prev, "low root not increasing at n={n} eps={eps} k={k}");
                    prev = low;
                }
            }
        }
    }

    #[test]
    fn ball_spectrum_examples() {
        let s = ball_spectrum(3, 3).unwrap();
        let got: Vec<(f64, u32)> = s
            .entries()
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect();
        assert_eq!(got, vec![(0.0, 1), (1.0, 3), (2.0, 5), (3.0, 7)]);

        let s = ball_spectrum(2, 2).unwrap();
        let got: Vec<(f64, u32)> = s
            .entries()
            .iter()
            .map(|e| (e.value, e.multiplicity))
            .collect();
        assert_eq!(got, vec![(0.0, 1), (1.0, 2), (2.0, 2)]);

        let s = ball_spectrum(5, 1).unwrap();
        assert_eq!(s.entries()[1].multiplicity, 5);
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(harmonic_multiplicity(3, 0).unwrap(), 1);
        assert_eq!(harmonic_multiplicity(3, 2).unwrap(), 5);
        assert_eq!(harmonic_multiplicity(4, 2).unwrap(), 9);
        assert_eq!(harmonic_multiplicity(6, 3).unwrap(), 50);
        // n = 3 follows the 2k + 1 rule
        for k in 0..20 {
            assert_eq!(harmonic_multiplicity(3, k).unwrap(), 2 * k + 1);
        }
    }

    #[test]
    fn annulus_spectrum_merges_blocks() {
        let s = annulus_spectrum(3, 0.5, 5).unwrap();
        let e = s.entries();
        assert_eq!(e[0].value, 0.0);
        assert_eq!(e[0].multiplicity, 1);
        // first five nonzero distinct values are the k = 1..5 low roots
        for (i, &(k, val)) in N3_E05_LOW.iter().enumerate() {
            assert_relative_eq!(e[i + 1].value, val, max_relative = 1e-12);
            assert_eq!(e[i + 1].multiplicity, 2 * k + 1);
            assert_eq!(
                e[i + 1].label,
                Label::Angular {
                    k,
                    branch: Branch::Low
                }
            );
        }
        // the k = 0 high root 5 sits right after, with multiplicity 1
        assert_abs_diff_eq!(e[6].value, 5.0, epsilon = 1e-12);
        assert_eq!(e[6].multiplicity, 1);
        assert!(s.nonzero_len(1e-9) >= 5);
    }

    #[test]
    fn annulus_spectrum_matches_asymptotics_near_zero() {
        // eps = 0.01, n = 3: first nonzero ~ 1 - 1.5e-6, agreement O(eps^4)
        let s = annulus_spectrum(3, 0.01, 1).unwrap();
        let first = s.first_nonzero(1e-9).unwrap().value;
        assert_abs_diff_eq!(first, 1.0 - 1.5e-6, epsilon = 1e-7);
        let asym = asymptotic_sigma(3, 1, 0.01).unwrap();
        assert!((first - asym).abs() < 3.0 * 0.01f64.powi(4));

        // n = 4, eps = 0.1: first nonzero ~ 1 - (4/3) 1e-4, agreement O(eps^5)
        let s = annulus_spectrum(4, 0.1, 1).unwrap();
        let first = s.first_nonzero(1e-9).unwrap().value;
        assert!((first - (1.0 - 4.0 / 3.0 * 1e-4)).abs() < 3.0 * 0.1f64.powi(5));
    }

    #[test]
    fn annulus_multiplicities_match_ball() {
        // the i-th distinct nonzero annulus eigenvalue is the k = i low root
        // and carries the ball's degree-i multiplicity
        for n in [3, 4, 5] {
            for &eps in &[0.1, 0.5] {
                let s = annulus_spectrum(n, eps, 4).unwrap();
                let nonzero: Vec<_> = s.entries().iter().filter(|e| e.value > 0.0).collect();
                for (i, entry) in nonzero.iter().take(4).enumerate() {
                    let k = (i + 1) as u32;
                    assert_eq!(
                        entry.label,
                        Label::Angular {
                            k,
                            branch: Branch::Low
                        },
                        "n={n} eps={eps} position {i}"
                    );
                    assert_eq!(entry.multiplicity, harmonic_multiplicity(n, k).unwrap());
                }
                // sortedness is enforced by the Spectrum constructor
            }
        }
    }

    #[test]
    fn asymptotic_examples() {
        assert_abs_diff_eq!(asymptotic_sigma(3, 1, 0.1).unwrap(), 0.9985, epsilon = 1e-15);
        assert_abs_diff_eq!(
            asymptotic_sigma(3, 2, 0.1).unwrap(),
            2.0 - (10.0 / 3.0) * 1e-5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(asymptotic_sigma(5, 3, 1e-6).unwrap(), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn remainder_agrees_with_plain_difference_when_resolved() {
        // at eps = 0.1, n = 3, k = 1 the remainder is ~1e-5: both routes agree
        let (low, _) = annulus_mode_roots(3, 1, 0.1).unwrap();
        let plain = (low - asymptotic_sigma(3, 1, 0.1).unwrap()).abs();
        let comp = asymptotic_remainder(3, 1, 0.1).unwrap();
        assert_relative_eq!(plain, comp, max_relative = 1e-9);
    }

    #[test]
    fn remainder_resolves_below_one_ulp() {
        // at n = 5, k = 3, eps = 0.02 the true remainder is smaller than an
        // ulp of sigma ~ 3; the compensated path must still see the
        // eps^(2k+n-1) scaling instead of roundoff noise
        let r1 = asymptotic_remainder(5, 3, 0.02).unwrap();
        let r2 = asymptotic_remainder(5, 3, 0.04).unwrap();
        assert!(r1 < 1e-15, "remainder {r1} should be below one ulp of 3");
        assert!(r1 > 0.0);
        // remainder order 2k + n - 1 = 10 for this block
        let order = (r2 / r1).log2();
        assert!(
            (order - 10.0).abs() < 0.35,
            "doubling eps should scale by ~2^10, got 2^{order:.2}"
        );
    }

    #[test]
    fn remainder_slope_meets_asymptotic_order() {
        // log-log slope over eps in {0.02, 0.04, 0.08} vs 2k + n - 1
        for n in [3, 4, 5] {
            for k in [1, 2, 3] {
                let eps = [0.02, 0.04, 0.08];
                let pts: Vec<(f64, f64)> = eps
                    .iter()
                    .map(|&e| {
                        let r = asymptotic_remainder(n, k, e).unwrap();
                        (e.ln(), r.ln())
                    })
                    .collect();
                let slope = least_squares_slope(&pts);
                let target = f64::from(2 * k + n - 1) - 0.3;
                assert!(
                    slope >= target,
                    "slope {slope:.3} below {target} at n={n} k={k}"
                );
            }
        }
    }

    fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn sphere_areas_match_recursion() {
        // independent route: |S^d| = 2 pi |S^(d-2)| / (d - 1)
        assert_relative_eq!(sphere_area(1).unwrap(), 2.0 * std::f64::consts::PI);
        assert_relative_eq!(sphere_area(2).unwrap(), 4.0 * std::f64::consts::PI);
        let mut by_recursion = vec![0.0; 13];
        by_recursion[1] = 2.0 * std::f64::consts::PI;
        by_recursion[2] = 4.0 * std::f64::consts::PI;
        for d in 3..=12 {
            by_recursion[d] =
                2.0 * std::f64::consts::PI * by_recursion[d - 2] / (d as f64 - 1.0);
            assert_relative_eq!(
                sphere_area(d as u32).unwrap(),
                by_recursion[d],
                max_relative = 1e-14
            );
        }
        assert_relative_eq!(
            sphere_area(3).unwrap(),
            2.0 * std::f64::consts::PI.powi(2),
            max_relative = 1e-15
        );
    }

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(ball_volume(1).unwrap(), 2.0);
        assert_relative_eq!(ball_volume(2).unwrap(), std::f64::consts::PI);
        assert_relative_eq!(
            ball_volume(3).unwrap(),
            4.0 * std::f64::consts::PI / 3.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            ball_volume(4).unwrap(),
            std::f64::consts::PI.powi(2) / 2.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn bound_examples() {
        assert_relative_eq!(
            euclidean_bound(2).unwrap(),
            8.0 * std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            euclidean_bound(3).unwrap(),
            9.963_968_667_152_777,
            max_relative = 1e-12
        );
        let ball_value = (4.0 * std::f64::consts::PI).sqrt();
        assert!(euclidean_bound(3).unwrap() > ball_value);
    }

    #[test]
    fn normalization_examples() {
        let v = normalized(1.0, 4.0 * std::f64::consts::PI, 3).unwrap();
        assert_relative_eq!(v.value, 3.544_907_701_811_031_8, max_relative = 1e-12);
        let v = normalized(0.99825, 4.0 * std::f64::consts::PI * 1.01, 3).unwrap();
        assert_abs_diff_eq!(v.value, 3.55635, epsilon = 1e-4);
        assert!(v.value > 3.54491);
        assert_eq!(normalized(0.0, 7.0, 4).unwrap().value, 0.0);
    }

    #[test]
    fn normalized_comparison_margin_is_frozen() {
        // the acceptance grid's anchor point: n=3, k=1, eps=0.1
        let (low, _) = annulus_mode_roots(3, 1, 0.1).unwrap();
        let area = annulus_boundary_volume(3, 0.1).unwrap();
        let ann = normalized(low, area, 3).unwrap().value;
        let ball = normalized(1.0, sphere_area(2).unwrap(), 3).unwrap().value;
        assert_relative_eq!(ann, 3.556_405_615_735_237, max_relative = 1e-12);
        assert_abs_diff_eq!(ann - ball, 0.011_497_913_924_205_072, epsilon = 1e-12);
    }

    #[test]
    fn input_validation() {
        assert!(annulus_coeffs(2, 1, 0.5).is_err());
        assert!(annulus_coeffs(3, 1, 0.0).is_err());
        assert!(annulus_coeffs(3, 1, 1.0).is_err());
        assert!(annulus_coeffs(3, 1, 1.5).is_err());
        assert!(annulus_coeffs(3, 1, f64::NAN).is_err());
        assert!(sphere_area(0).is_err());
        assert!(ball_volume(0).is_err());
        assert!(ball_spectrum(3, 0).is_err());
        assert!(annulus_spectrum(3, 0.5, 0).is_err());
        assert!(asymptotic_sigma(3, 0, 0.1).is_err());
        assert!(normalized(-1.0, 1.0, 3).is_err());
        assert!(normalized(1.0, 0.0, 3).is_err());
        assert!(euclidean_bound(1).is_err());
    }
}
