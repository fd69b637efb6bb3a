//! Tail and concentration estimates, each returned as an unclamped
//! [`BoundResult`].
//!
//! Heavy exponents are evaluated in log space, so a reported `3.4e-21` is a
//! genuine number rather than an underflow artifact. `valid` goes false when
//! a probability bound reaches 1 or a stated precondition fails; the raw
//! value is still reported.

use crate::bound::BoundResult;
use crate::error::{Error, Result};

/// Moment generating function families understood by [`generic_chernoff`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MgfKind {
    /// Indicator with success probability `p`. Uses the classical bound
    /// `E e^(tY) <= exp(p(e^t - 1))` (from `1 + x <= e^x`), so the
    /// optimized result coincides with the closed multiplicative form in
    /// [`bernoulli_chernoff`].
    Bernoulli { p: f64 },
    /// `N(0,1)`: `ln M(t) = t^2 / 2`, all `t`.
    StdNormal,
    /// Square of a standard normal: `M(t) = (1-2t)^(-1/2)`, `t < 1/2`.
    ChiSquare1,
}

/// A sum of `count` i.i.d. terms of the given kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfSpec {
    pub kind: MgfKind,
    pub count: usize,
}

impl MgfSpec {
    pub fn new(kind: MgfKind, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("count must be >= 1".into()));
        }
        if let MgfKind::Bernoulli { p } = kind {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "bernoulli p must lie in (0, 1], got {p}"
                )));
            }
        }
        Ok(MgfSpec { kind, count })
    }

    /// `ln M(t)` for one term; `None` where the MGF diverges.
    pub fn log_mgf(&self, t: f64) -> Option<f64> {
        match self.kind {
            MgfKind::Bernoulli { p } => Some(p * (t.exp() - 1.0)),
            MgfKind::StdNormal => Some(t * t / 2.0),
            MgfKind::ChiSquare1 => {
                if t < 0.5 {
                    Some(-0.5 * (1.0 - 2.0 * t).ln())
                } else {
                    None
                }
            }
        }
    }

    /// Search ceiling that keeps the window inside the MGF domain.
    pub fn default_t_max(&self) -> f64 {
        match self.kind {
            MgfKind::ChiSquare1 => 0.499,
            _ => 50.0,
        }
    }
}

/// Numeric Chernoff bound `inf_t exp(-t a) M(t)^count` over `t in (0, t_max)`.
///
/// Golden-section search on `ln t` to relative width `1e-9`; the returned
/// value is the lowest objective seen at any probed point, so it never
/// exceeds the bound at a probed `t`. Divergence of the MGF inside the
/// window is a domain error naming the offending `t`.
pub fn generic_chernoff(mgf: &MgfSpec, a: f64, t_max: f64) -> Result<BoundResult> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    if !(t_max > 1e-10) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "t_max must be finite and > 1e-10, got {t_max}"
        )));
    }
    if mgf.log_mgf(t_max).is_none() {
        return Err(Error::Domain(format!(
            "moment generating function diverges at t = {t_max}, inside the search window"
        )));
    }
    let count = mgf.count as f64;
    let objective = |u: f64| -> Result<f64> {
        let t = u.exp();
        match mgf.log_mgf(t) {
            Some(lm) => Ok(-t * a + count * lm),
            None => Err(Error::Domain(format!(
                "moment generating function diverges at t = {t}"
            ))),
        }
    };

    let mut lo = (1e-12_f64).ln();
    let mut hi = t_max.ln();
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut best_u = hi;
    let mut best_v = f64::INFINITY;
    let mut track = |u: f64, v: f64| {
        if v < best_v {
            best_v = v;
            best_u = u;
        }
    };
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    track(c, fc);
    track(d, fd);
    for _ in 0..300 {
        if hi - lo < 1e-9 {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = objective(c)?;
            track(c, fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = objective(d)?;
            track(d, fd);
        }
    }
    let value = best_v.exp();
    let mut result = BoundResult::new("generic_chernoff")
        .input("a", a)
        .input("count", count)
        .input("t_max", t_max)
        .input("t_star", best_u.exp())
        .value(value)
        .valid(value < 1.0)
        .note(match mgf.kind {
            MgfKind::Bernoulli { .. } => "bernoulli-sum tail via exp(p(e^t-1)) term bound",
            MgfKind::StdNormal => "gaussian-sum tail",
            MgfKind::ChiSquare1 => "squared-gaussian-sum tail",
        });
    if let MgfKind::Bernoulli { p } = mgf.kind {
        result = result.input("p", p);
    }
    Ok(result)
}

/// `2 exp(-min(a^2/d, a) / 4)` for sums of `d` terms with factorial moment
/// growth (the annulus-style master bound).
pub fn bernstein_bound(a: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    let exponent = (a * a / d as f64).min(a) / 4.0;
    let value = 2.0 * (-exponent).exp();
    Ok(BoundResult::new("bernstein")
        .input("a", a)
        .input("d", d as f64)
        .value(value)
        .valid(value < 1.0)
        .note("2 exp(-min(a^2/d, a)/4)"))
}

/// Multiplicative Chernoff bound `(e^delta / (1+delta)^(1+delta))^(n p)` on
/// a Bernoulli sum exceeding `(1+delta) n p`, evaluated in log space.
pub fn bernoulli_chernoff(n: usize, p: f64, delta: f64) -> Result<BoundResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (0, 1], got {p}")));
    }
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "delta must be finite and > 0, got {delta}"
        )));
    }
    let np = n as f64 * p;
    let log_value = np * (delta - (1.0 + delta) * (1.0 + delta).ln());
    let value = log_value.exp();
    Ok(BoundResult::new("bernoulli_chernoff")
        .input("n", n as f64)
        .input("p", p)
        .input("delta", delta)
        .input("threshold", (1.0 + delta) * np)
        .value(value)
        .valid(value < 1.0)
        .note("P[sum >= (1+delta) n p]"))
}

/// Markov: `P[Y >= a] <= E(Y)/a` for nonnegative `Y`.
pub fn markov_bound(mean: f64, a: f64) -> Result<BoundResult> {
    if !(mean >= 0.0) || !mean.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "mean must be finite and >= 0, got {mean}"
        )));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    let value = mean / a;
    Ok(BoundResult::new("markov")
        .input("mean", mean)
        .input("a", a)
        .value(value)
        .valid(value < 1.0)
        .note("P[Y >= a] for nonnegative Y"))
}

/// Chebyshev: `P[|Y - E(Y)| >= a] <= Var(Y)/a^2`.
pub fn chebyshev_bound(variance: f64, a: f64) -> Result<BoundResult> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "variance must be finite and >= 0, got {variance}"
        )));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    let value = variance / (a * a);
    Ok(BoundResult::new("chebyshev")
        .input("variance", variance)
        .input("a", a)
        .value(value)
        .valid(value < 1.0)
        .note("P[|Y - E(Y)| >= a]"))
}

/// Moment bound `(a/d)^d e^(d-a)` on a squared-Gaussian-norm sum exceeding
/// `a`; trivial (value 1) unless `a > d`.
pub fn naive_exponential_bound(a: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    let df = d as f64;
    let (value, valid, note) = if a > df {
        let v = (df * (a / df).ln() + df - a).exp();
        (v, v < 1.0, "P[|X|^2 >= a], X standard gaussian in R^d")
    } else {
        (1.0, false, "trivial for a <= d")
    };
    Ok(BoundResult::new("naive_exponential")
        .input("a", a)
        .input("d", d as f64)
        .value(value)
        .valid(valid)
        .note(note))
}

/// Optimized-MGF version of the same tail: `(a/d)^(d/2) e^((d-a)/2)` with
/// optimizer `t* = (1 - d/a)/2`; the square root of the naive bound.
pub fn chi_square_chernoff(a: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("a must be finite and > 0, got {a}")));
    }
    let df = d as f64;
    let (value, t_star, note) = if a > df {
        let v = (0.5 * df * (a / df).ln() + 0.5 * (df - a)).exp();
        (v, (1.0 - df / a) / 2.0, "P[|X|^2 >= a], X standard gaussian in R^d")
    } else {
        (1.0, 0.0, "trivial for a <= d")
    };
    Ok(BoundResult::new("chi_square_chernoff")
        .input("a", a)
        .input("d", df)
        .input("t_star", t_star)
        .value(value)
        .valid(value < 1.0)
        .note(note))
}

/// Even moments of `N(0,1)`: `E(X^(2k)) = (2k-1)!!`, exact double-factorial
/// product. Overflows `f64` past `k = 150`, which is rejected.
pub fn gaussian_even_moment(k: u32) -> Result<f64> {
    if k > 150 {
        return Err(Error::InvalidArgument(format!(
            "k must be <= 150 to stay within f64 range, got {k}"
        )));
    }
    let mut prod = 1.0_f64;
    for i in 1..=u64::from(k) {
        prod *= (2 * i - 1) as f64;
    }
    Ok(prod)
}

/// Tail of the Gaussian norm around `sqrt(d)`:
/// `P[|  |x| - sqrt(d) | >= eps] <= 2 exp(-eps^2 / 16)` for `0 <= eps <= sqrt(d)`.
pub fn gaussian_annulus_bound(epsilon: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    let value = 2.0 * (-epsilon * epsilon / 16.0).exp();
    let in_range = epsilon <= (d as f64).sqrt();
    let note = if in_range {
        "P[| |x| - sqrt(d) | >= eps]"
    } else {
        "stated only for eps <= sqrt(d); value reported anyway"
    };
    Ok(BoundResult::new("gaussian_annulus")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .value(value)
        .valid(in_range && value < 1.0)
        .note(note))
}

/// Norm threshold for `n` ball points: with probability at least `1 - 1/n`
/// every point has norm at least `1 - eps` for `eps = 2 ln(n) / d`.
pub fn ball_surface_threshold(n: usize, d: usize) -> Result<BoundResult> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be >= 3, got {d}")));
    }
    let epsilon = 2.0 * (n as f64).ln() / d as f64;
    let value = 1.0 - 1.0 / n as f64;
    let informative = epsilon < 1.0;
    Ok(BoundResult::new("ball_surface_threshold")
        .input("n", n as f64)
        .input("d", d as f64)
        .input("epsilon", epsilon)
        .value(value)
        .valid(informative)
        .note(if informative {
            "P[all n ball points have norm >= 1 - eps]"
        } else {
            "eps >= 1 makes the norm event vacuous"
        }))
}

/// Angle threshold for `n` ball points: with probability at least `1 - 1/n`
/// every pair satisfies `|<x_i, x_j>| <= sqrt(6 ln n) / sqrt(d-1)`.
pub fn ball_angle_threshold(n: usize, d: usize) -> Result<BoundResult> {
    if n < 2 {
        return Err(Error::InvalidArgument("n must be >= 2".into()));
    }
    if d < 3 {
        return Err(Error::InvalidArgument(format!("d must be >= 3, got {d}")));
    }
    let epsilon = (6.0 * (n as f64).ln()).sqrt() / ((d - 1) as f64).sqrt();
    let value = 1.0 - 1.0 / n as f64;
    let informative = epsilon < 1.0;
    Ok(BoundResult::new("ball_angle_threshold")
        .input("n", n as f64)
        .input("d", d as f64)
        .input("epsilon", epsilon)
        .value(value)
        .valid(informative)
        .note(if informative {
            "P[all pairs of n ball points have |dot| <= eps]"
        } else {
            "eps >= 1 exceeds any possible dot of unit-ball points"
        }))
}

/// Near-orthogonality of independent Gaussians:
/// `P[|cos angle| >= eps] <= (2/eps + 7) / sqrt(d)`.
pub fn gaussian_orthogonality_bound(epsilon: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let value = (2.0 / epsilon + 7.0) / (d as f64).sqrt();
    Ok(BoundResult::new("gaussian_orthogonality")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .value(value)
        .valid(value < 1.0)
        .note("P[|normalized dot| >= eps] for independent gaussians"))
}

/// The complementary statement: the cosine does not collapse to zero,
/// `P[|cos angle| <= eps/(2 sqrt(d))] <= eps + 2 exp(-d/16)`.
pub fn gaussian_anticoncentration_bound(epsilon: f64, d: usize) -> Result<BoundResult> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be >= 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    let value = epsilon + 2.0 * (-(d as f64) / 16.0).exp();
    let threshold = epsilon / (2.0 * (d as f64).sqrt());
    Ok(BoundResult::new("gaussian_anticoncentration")
        .input("epsilon", epsilon)
        .input("d", d as f64)
        .input("threshold", threshold)
        .value(value)
        .valid(value < 1.0)
        .note("P[|normalized dot| <= eps/(2 sqrt(d))]"))
}
