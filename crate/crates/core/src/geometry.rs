//! Closed-form volume and concentration formulas for the unit ball and the
//! centered unit hypercube `[-1, 1]^d`.
//!
//! Volumes are exact recursions; concentration statements come back as
//! [`BoundResult`]s so trivial regimes (a bound that says "probability at
//! most 1.2") stay visible instead of being clamped away.

use crate::bound::BoundResult;
use crate::error::{Error, Result};

use std::f64::consts::PI;

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidArgument(format!("dimension must be >= {min}, got {d}")));
    }
    Ok(())
}

/// Volume of the unit ball in `R^d` by the two-step recursion
/// `V(d) = (2 pi / d) V(d-2)` with `V(1) = 2`, `V(2) = pi`.
///
/// Underflows to subnormals past `d ~ 500`; use [`ball_log_volume`] beyond
/// a few hundred dimensions.
pub fn ball_volume(d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    let mut v = if d % 2 == 1 { 2.0 } else { PI };
    let mut k = 2 - d % 2;
    while k < d {
        k += 2;
        v *= 2.0 * PI / k as f64;
    }
    Ok(v)
}

/// Natural log of the unit-ball volume; stable for any practical `d`.
pub fn ball_log_volume(d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    let mut lv = if d % 2 == 1 { 2.0_f64.ln() } else { PI.ln() };
    let mut k = 2 - d % 2;
    while k < d {
        k += 2;
        lv += (2.0 * PI / k as f64).ln();
    }
    Ok(lv)
}

/// Same volume through `pi^(d/2) / Gamma(d/2 + 1)`; an independent route
/// used to cross-check the recursion.
pub fn ball_volume_gamma(d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    let half = d as f64 / 2.0;
    Ok((half * PI.ln() - ln_gamma(half + 1.0)).exp())
}

/// `ln Gamma(x)` for `x > 0`, Lanczos approximation (g = 7, 9 terms),
/// good to roughly 14 significant digits on this domain.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0);
    // Shift small arguments up with Gamma(x) = Gamma(x+1)/x.
    if x < 0.5 {
        return ln_gamma(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut a = 0.999_999_999_999_809_9;
    for (i, c) in COEFFS.iter().enumerate() {
        a += c / (z + i as f64 + 1.0);
    }
    let t = z + 7.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Fraction of the unit ball outside radius `1 - epsilon`: `1 - (1-eps)^d`.
pub fn shell_fraction(epsilon: f64, d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    Ok(1.0 - (1.0 - epsilon).powi(d as i32))
}

/// Lower bound `1 - exp(-eps d)` on the cube mass within distance `eps`
/// of the boundary (per-coordinate margin on `[-1, 1]^d`).
pub fn surface_concentration_bound(epsilon: f64, d: usize) -> Result<BoundResult> {
    check_dim(d, 1)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let value = 1.0 - (-epsilon * d as f64).exp();
    Ok(BoundResult::new("surface_concentration")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .value(value)
        .valid(value > 0.0)
        .note("lower bound on cube mass within epsilon of the boundary"))
}

/// Volume fraction of one corner box of side `2 epsilon`: `(2 eps)^d`.
pub fn corner_volume(epsilon: f64, d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1/2], got {epsilon}"
        )));
    }
    Ok((2.0 * epsilon).powi(d as i32))
}

fn waist_tail(epsilon: f64, d: usize) -> Result<f64> {
    check_dim(d, 3)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be finite and > 0, got {epsilon}"
        )));
    }
    let s = epsilon * ((d - 1) as f64).sqrt();
    Ok((2.0 / s) * (-s * s / 2.0).exp())
}

/// Upper bound on the ball fraction with first coordinate beyond
/// `epsilon / sqrt(d-1)`:  `(2 / (eps sqrt(d-1))) exp(-eps^2 (d-1) / 2)`.
pub fn ball_slice_fraction(epsilon: f64, d: usize) -> Result<BoundResult> {
    let value = waist_tail(epsilon, d)?;
    Ok(BoundResult::new("ball_slice_fraction")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .value(value)
        .valid(value < 1.0)
        .note("upper bound on mass outside the slab |x1| <= eps/sqrt(d-1)"))
}

/// Lower bound `1 - (2/(eps sqrt(d-1))) exp(-eps^2 (d-1)/2)` on the ball
/// mass inside the equatorial slab; `valid` is false once the tail term
/// outgrows 1 and the statement becomes vacuous.
pub fn waist_concentration_bound(epsilon: f64, d: usize) -> Result<BoundResult> {
    let tail = waist_tail(epsilon, d)?;
    let value = 1.0 - tail;
    Ok(BoundResult::new("waist_concentration")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .value(value)
        .valid(value > 0.0)
        .note("lower bound on mass of the slab |x1| <= eps/sqrt(d-1)"))
}

/// Root of `(2/a) exp(-a^2/2) = 1` on the bracket `(1, sqrt(5)-1)`:
/// the slab half-width (in units of `1/sqrt(d-1)`) where the waist bound
/// stops being informative. Bisection to `tolerance`.
pub fn waist_threshold_a0(tolerance: f64) -> Result<f64> {
    if !(tolerance >= 1e-14) || !tolerance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be >= 1e-14, got {tolerance}"
        )));
    }
    let f = |a: f64| (2.0 / a) * (-a * a / 2.0).exp() - 1.0;
    let (mut lo, mut hi) = (1.0_f64, 5.0_f64.sqrt() - 1.0);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes_match_known_values() {
        assert_eq!(ball_volume(1).unwrap(), 2.0);
        assert_eq!(ball_volume(2).unwrap(), PI);
        // V(3) = 4 pi / 3, V(4) = pi^2 / 2
        assert!((ball_volume(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((ball_volume(4).unwrap() - 4.934802200544679).abs() < 1e-15);
        assert!(ball_volume(0).is_err());
    }

    #[test]
    fn recursion_agrees_with_gamma_route() {
        for d in 1..=170 {
            let rec = ball_volume(d).unwrap();
            let gam = ball_volume_gamma(d).unwrap();
            let rel = (rec - gam).abs() / gam;
            assert!(rel < 1e-12, "d={d} rel={rel}");
        }
        // Past overflow of the direct Gamma form, compare in log space.
        for d in [300usize, 1000, 5000] {
            let lg = (d as f64 / 2.0) * PI.ln() - ln_gamma(d as f64 / 2.0 + 1.0);
            let rel = (ball_log_volume(d).unwrap() - lg).abs() / lg.abs();
            assert!(rel < 1e-12, "d={d} rel={rel}");
        }
    }

    #[test]
    fn volume_peaks_at_five_then_vanishes() {
        let peak = ball_volume(5).unwrap();
        for d in 1..=20 {
            if d != 5 {
                assert!(ball_volume(d).unwrap() < peak, "d={d}");
            }
        }
        let mut prev = ball_log_volume(6).unwrap();
        for d in 7..=2000 {
            let cur = ball_log_volume(d).unwrap();
            assert!(cur < prev, "log volume must keep falling, d={d}");
            prev = cur;
        }
        assert!(ball_volume(300).unwrap() < 1e-100);
    }

    #[test]
    fn ln_gamma_sanity() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24.0_f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-13);
        // Recurrence Gamma(x+1) = x Gamma(x)
        for x in [0.7, 1.3, 4.9, 33.3, 170.0] {
            let gap = ln_gamma(x + 1.0) - ln_gamma(x) - (x as f64).ln();
            assert!(gap.abs() < 1e-12, "x={x} gap={gap}");
        }
    }

    #[test]
    fn shell_fraction_values() {
        assert!((shell_fraction(0.01, 100).unwrap() - 0.6339676587267705).abs() < 1e-15);
        assert_eq!(shell_fraction(1.0, 7).unwrap(), 1.0);
        assert!(shell_fraction(0.0, 5).is_err());
        assert!(shell_fraction(1.5, 5).is_err());
    }

    #[test]
    fn shell_fraction_monotone_in_d() {
        let mut prev = 0.0;
        for d in [1usize, 2, 5, 10, 100, 1000, 100_000] {
            let f = shell_fraction(0.01, d).unwrap();
            assert!(f > prev, "d={d}");
            prev = f;
        }
        assert!(prev > 1.0 - 1e-9); // essentially all mass is in the shell
    }

    #[test]
    fn surface_bound_values() {
        let b = surface_concentration_bound(0.01, 100).unwrap();
        assert!((b.value - 0.6321205588285577).abs() < 1e-15);
        assert!(b.valid);
        assert!(surface_concentration_bound(0.0, 10).is_err());
    }

    /// The cube shell estimate never exceeds the exact shell mass
    /// `1 - (1-eps)^d` of the same per-coordinate margin.
    #[test]
    fn surface_bound_dominated_by_exact_mass() {
        let mut rng = crate::seed::RandomSeed(2024).rng();
        for _ in 0..2000 {
            let eps = 1e-6 + rng.next_f64() * (1.0 - 2e-6);
            let d = 1 + rng.next_below(3000) as usize;
            let exact = shell_fraction(eps, d).unwrap();
            let bound = surface_concentration_bound(eps, d).unwrap().value;
            assert!(
                bound <= exact + 1e-12,
                "eps={eps} d={d} bound={bound} exact={exact}"
            );
        }
    }

    #[test]
    fn corner_volume_values() {
        assert_eq!(corner_volume(0.25, 2).unwrap(), 0.25);
        assert_eq!(corner_volume(0.25, 20).unwrap(), 9.5367431640625e-7);
        assert_eq!(corner_volume(0.5, 3).unwrap(), 1.0);
        assert!(corner_volume(0.6, 3).is_err());
        assert!(corner_volume(0.0, 3).is_err());
    }

    #[test]
    fn waist_bound_values() {
        // eps chosen so eps^2 (d-1) = 4: value is 1 - e^-2
        let d = 101;
        let eps = 2.0 / 10.0;
        let b = waist_concentration_bound(eps, d).unwrap();
        assert!((b.value - 0.8646647167633873).abs() < 1e-15);
        assert!(b.valid);

        // eps sqrt(d-1) = 1 leaves 1 - 2 exp(-1/2) < 0: vacuous but reported
        let tight = waist_concentration_bound(0.1, 101).unwrap();
        assert!((tight.value - (-0.21306131942526685)).abs() < 1e-15);
        assert!(!tight.valid);

        assert!(waist_concentration_bound(0.1, 2).is_err());
        assert!(waist_concentration_bound(-1.0, 10).is_err());
    }

    #[test]
    fn slice_fraction_values() {
        let b = ball_slice_fraction(1.0, 5).unwrap();
        assert!((b.value - 0.1353352832366127).abs() < 1e-15);
        assert!(b.valid);
        // Complement relation with the waist bound at equal arguments.
        let w = waist_concentration_bound(0.37, 42).unwrap();
        let s = ball_slice_fraction(0.37, 42).unwrap();
        assert!((w.value + s.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn waist_threshold_root() {
        let a0 = waist_threshold_a0(1e-12).unwrap();
        assert!((a0 - 1.0964341627279966).abs() < 1e-10);
        // Residual of (2/a) exp(-a^2/2) at the root stays tiny.
        let res = (2.0 / a0) * (-a0 * a0 / 2.0).exp() - 1.0;
        assert!(res.abs() < 1e-10, "residual {res}");
        // The waist bound flips from vacuous to informative across a0.
        let d = 401;
        let scale = (400.0_f64).sqrt();
        let below = waist_concentration_bound((a0 - 0.01) / scale, d).unwrap();
        let above = waist_concentration_bound((a0 + 0.01) / scale, d).unwrap();
        assert!(!below.valid && above.valid);
        assert!(waist_threshold_a0(1e-15).is_err());
    }
}
