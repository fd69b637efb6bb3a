//! Name registry for the `bounds` subcommand.
//!
//! Each entry maps a short name plus `key=value` parameters onto one
//! library call. Formulas that return a bare number (volumes, moments,
//! the waist root) are wrapped into the same JSON document shape the
//! probabilistic bounds use, with `valid` reflecting any domain caveat.

use highdim::bound::BoundResult;
use highdim::error::{Error, Result};
use highdim::geometry;
use highdim::projection;
use highdim::tailbounds::{self, MgfKind, MgfSpec};
use std::collections::BTreeMap;

/// `name  key=..., key=...` lines for `bounds --list`.
pub fn registry_lines() -> Vec<String> {
    REGISTRY
        .iter()
        .map(|(name, keys, what)| format!("{name:<18} {:<40} {what}", keys.join(" ")))
        .collect()
}

type Entry = (&'static str, &'static [&'static str], &'static str);

const REGISTRY: &[Entry] = &[
    ("shell", &["epsilon=", "d="], "mass of the outer epsilon shell of the unit ball"),
    ("surface", &["epsilon=", "d="], "upper bound exp(-epsilon d) on inner-ball mass"),
    ("corner", &["epsilon=", "d="], "volume (2 epsilon)^d of one cube corner cell"),
    ("waist", &["epsilon=", "d="], "lower bound on mass of the slab |x_1| <= epsilon/sqrt(d-1)"),
    ("slice", &["epsilon=", "d="], "upper bound on mass outside that slab"),
    ("waist_a0", &["[tolerance=]"], "root a0 of (2/a) exp(-a^2/2) = 1"),
    ("volume", &["d="], "volume of the unit ball"),
    ("chernoff_gaussian", &["a=", "count=", "[t_max=]"], "numeric Chernoff for a sum of standard normals"),
    ("chernoff_bernoulli", &["a=", "count=", "p=", "[t_max=]"], "numeric Chernoff for a Bernoulli sum"),
    ("chernoff_chi1", &["a=", "count=", "[t_max=]"], "numeric Chernoff for a chi-square sum"),
    ("bernoulli", &["n=", "p=", "delta="], "closed-form multiplicative Chernoff for Bernoulli sums"),
    ("bernstein", &["a=", "d="], "2 exp(-min(a^2/d, a)/4)"),
    ("markov", &["mean=", "a="], "mean / a"),
    ("chebyshev", &["variance=", "a="], "variance / a^2"),
    ("naive", &["a=", "d="], "(a/d)^d e^(d-a) for the squared-norm tail"),
    ("chi_square", &["a=", "d="], "optimized MGF bound (a/d)^(d/2) e^((d-a)/2)"),
    ("even_moment", &["k="], "E X^(2k) = (2k-1)!! for standard normal X"),
    ("annulus", &["epsilon=", "d="], "2 exp(-epsilon^2/16) tail for | |x| - sqrt(d) |"),
    ("ball_surface", &["n=", "d="], "norm threshold holding for n ball points w.p. 1 - 1/n"),
    ("ball_angle", &["n=", "d="], "pairwise-angle threshold for n ball points w.p. 1 - 1/n"),
    ("orthogonality", &["epsilon=", "d="], "(2/epsilon + 7)/sqrt(d) tail for |cos angle|"),
    ("anticoncentration", &["epsilon=", "d="], "epsilon + 2 exp(-d/16) near-zero mass of |cos angle|"),
    ("rp", &["epsilon=", "k="], "2 exp(-k epsilon^2 / 16) single-vector projection tail"),
    ("jl_guarantee", &["n=", "epsilon="], "success probability 1 - 1/n at k = ceil(48 ln n / epsilon^2)"),
    ("jl_dimension", &["n=", "epsilon="], "the dimension rule k = ceil(48 ln n / epsilon^2)"),
];

/// Parsed `key=value` arguments that complain about leftovers, so a typo
/// like `eps=10` fails loudly instead of silently using a default.
struct Params {
    values: BTreeMap<String, f64>,
}

impl Params {
    fn parse(args: &[String]) -> Result<Params> {
        let mut values = BTreeMap::new();
        for arg in args {
            let (key, val) = arg.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("expected key=value, got {arg:?}"))
            })?;
            let v: f64 = val
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("{key}: bad number {val:?}")))?;
            if values.insert(key.trim().to_string(), v).is_some() {
                return Err(Error::InvalidArgument(format!("{key} given twice")));
            }
        }
        Ok(Params { values })
    }

    fn f(&mut self, key: &str) -> Result<f64> {
        self.values
            .remove(key)
            .ok_or_else(|| Error::InvalidArgument(format!("missing parameter {key}=")))
    }

    fn f_or(&mut self, key: &str, default: f64) -> f64 {
        self.values.remove(key).unwrap_or(default)
    }

    fn int(&mut self, key: &str) -> Result<usize> {
        let v = self.f(key)?;
        as_count(key, v)
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.values.keys().next() {
            return Err(Error::InvalidArgument(format!("unknown parameter {key:?}")));
        }
        Ok(())
    }
}

fn as_count(key: &str, v: f64) -> Result<usize> {
    if !v.is_finite() || v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::InvalidArgument(format!(
            "{key} must be a nonnegative integer, got {v}"
        )));
    }
    Ok(v as usize)
}

pub fn evaluate(name: &str, args: &[String]) -> Result<BoundResult> {
    let mut p = Params::parse(args)?;
    let result = match name {
        "shell" => {
            let (eps, d) = (p.f("epsilon")?, p.int("d")?);
            let v = geometry::shell_fraction(eps, d)?;
            BoundResult::new("shell_fraction")
                .input("epsilon", eps)
                .input("d", d as f64)
                .value(v)
                .valid(true)
                .note("exact mass 1 - (1 - epsilon)^d of the outer shell")
        }
        "surface" => {
            let (eps, d) = (p.f("epsilon")?, p.int("d")?);
            geometry::surface_concentration_bound(eps, d)?
        }
        "corner" => {
            let (eps, d) = (p.f("epsilon")?, p.int("d")?);
            let v = geometry::corner_volume(eps, d)?;
            BoundResult::new("corner_volume")
                .input("epsilon", eps)
                .input("d", d as f64)
                .value(v)
                .valid(true)
                .note("volume (2 epsilon)^d of one corner cell of [-1, 1]^d")
        }
        "waist" => {
            let (eps, d) = (p.f("epsilon")?, p.int("d")?);
            geometry::waist_concentration_bound(eps, d)?
        }
        "slice" => {
            let (eps, d) = (p.f("epsilon")?, p.int("d")?);
            geometry::ball_slice_fraction(eps, d)?
        }
        "waist_a0" => {
            let tol = p.f_or("tolerance", 1e-12);
            let v = geometry::waist_threshold_a0(tol)?;
            BoundResult::new("waist_threshold_a0")
                .input("tolerance", tol)
                .value(v)
                .valid(true)
                .note("root of (2/a) exp(-a^2/2) = 1 inside (1, sqrt(5) - 1)")
        }
        "volume" => {
            let d = p.int("d")?;
            let v = geometry::ball_volume(d)?;
            let lv = geometry::ball_log_volume(d)?;
            BoundResult::new("ball_volume")
                .input("d", d as f64)
                .input("log_volume", lv)
                .value(v)
                .valid(v > 0.0)
                .note("unit-ball volume; log_volume stays finite after underflow")
        }
        "chernoff_gaussian" => {
            let (a, count) = (p.f("a")?, p.int("count")?);
            let spec = MgfSpec::new(MgfKind::StdNormal, count)?;
            let t_max = p.f_or("t_max", spec.default_t_max());
            tailbounds::generic_chernoff(&spec, a, t_max)?
        }
        "chernoff_bernoulli" => {
            let (a, count, prob) = (p.f("a")?, p.int("count")?, p.f("p")?);
            let spec = MgfSpec::new(MgfKind::Bernoulli { p: prob }, count)?;
            let t_max = p.f_or("t_max", spec.default_t_max());
            tailbounds::generic_chernoff(&spec, a, t_max)?
        }
        "chernoff_chi1" => {
            let (a, count) = (p.f("a")?, p.int("count")?);
            let spec = MgfSpec::new(MgfKind::ChiSquare1, count)?;
            let t_max = p.f_or("t_max", spec.default_t_max());
            tailbounds::generic_chernoff(&spec, a, t_max)?
        }
        "bernoulli" => {
            let (n, prob, delta) = (p.int("n")?, p.f("p")?, p.f("delta")?);
            tailbounds::bernoulli_chernoff(n, prob, delta)?
        }
        "bernstein" => {
            let (a, d) = (p.f("a")?, p.int("d")?);
            tailbounds::bernstein_bound(a, d)?
        }
        "markov" => tailbounds::markov_bound(p.f("mean")?, p.f("a")?)?,
        "chebyshev" => tailbounds::chebyshev_bound(p.f("variance")?, p.f("a")?)?,
        "naive" => {
            let (a, d) = (p.f("a")?, p.int("d")?);
            tailbounds::naive_exponential_bound(a, d)?
        }
        "chi_square" => {
            let (a, d) = (p.f("a")?, p.int("d")?);
            tailbounds::chi_square_chernoff(a, d)?
        }
        "even_moment" => {
            let k = p.int("k")?;
            let k = u32::try_from(k)
                .map_err(|_| Error::InvalidArgument(format!("k = {k} is out of range")))?;
            let v = tailbounds::gaussian_even_moment(k)?;
            BoundResult::new("gaussian_even_moment")
                .input("k", f64::from(k))
                .value(v)
                .valid(true)
                .note("E X^(2k) = (2k - 1)!! for X standard normal")
        }
        "annulus" => tailbounds::gaussian_annulus_bound(p.f("epsilon")?, p.int("d")?)?,
        "ball_surface" => tailbounds::ball_surface_threshold(p.int("n")?, p.int("d")?)?,
        "ball_angle" => tailbounds::ball_angle_threshold(p.int("n")?, p.int("d")?)?,
        "orthogonality" => {
            tailbounds::gaussian_orthogonality_bound(p.f("epsilon")?, p.int("d")?)?
        }
        "anticoncentration" => {
            tailbounds::gaussian_anticoncentration_bound(p.f("epsilon")?, p.int("d")?)?
        }
        "rp" => projection::rp_bound(p.f("epsilon")?, p.int("k")?)?,
        "jl_guarantee" => projection::jl_guarantee(p.int("n")?, p.f("epsilon")?)?,
        "jl_dimension" => {
            let (n, eps) = (p.int("n")?, p.f("epsilon")?);
            let k = projection::jl_dimension(n, eps)?;
            BoundResult::new("jl_dimension")
                .input("n", n as f64)
                .input("epsilon", eps)
                .value(k as f64)
                .valid(true)
                .note("k = ceil(48 ln n / epsilon^2)")
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown bound {other:?}; try `bounds --list`"
            )));
        }
    };
    p.finish()?;
    Ok(result)
}
