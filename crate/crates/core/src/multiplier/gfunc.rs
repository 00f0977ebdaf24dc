use std::collections::BTreeMap;
use std::f64::consts::E;
use std::fmt;

use crate::error::{Error, Result};

/// Radial weakening factor `g ≥ 1`, non-decreasing in the radius.
///
/// The dissipation symbol is `|ξ|^α / g(|ξ|)`, so faster-growing `g` means
/// weaker high-frequency dissipation.
#[derive(Clone, Debug, PartialEq)]
pub enum GFunction {
    /// `g ≡ 1`.
    ConstantOne,
    /// `g(τ) = ln(e + τ)^c`.
    PowerLog { c: f64 },
    /// `g(τ) = sqrt(ln(e + ln(e + τ)))`.
    IteratedLog,
    /// `g(τ) = (e + τ)^ε`.
    Power { eps: f64 },
    /// Staircase `g = height^J(τ)`, jumping by `height` at the radii
    /// `τ_j = exp(exp(period · height^{2j}))`, `j = 0, 1, ...`. Constant
    /// between jumps. Each constant stretch contributes the same mass
    /// `period·(1 - height^{-2})` to the Osgood integral, so it diverges.
    Spiky { period: f64, height: f64 },
    /// Piecewise-linear through `(radius, value)` points, held constant
    /// outside the tabulated range.
    Tabulated(Vec<(f64, f64)>),
}

impl GFunction {
    pub const CATALOG: [&'static str; 6] = [
        "constant_one",
        "power_log",
        "iterated_log",
        "power",
        "spiky",
        "tabulated",
    ];

    pub fn power_log(c: f64) -> Result<Self> {
        let g = GFunction::PowerLog { c };
        g.validate()?;
        Ok(g)
    }

    pub fn power(eps: f64) -> Result<Self> {
        let g = GFunction::Power { eps };
        g.validate()?;
        Ok(g)
    }

    pub fn spiky(period: f64, height: f64) -> Result<Self> {
        let g = GFunction::Spiky { period, height };
        g.validate()?;
        Ok(g)
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        let g = GFunction::Tabulated(points);
        g.validate()?;
        Ok(g)
    }

    /// Resolves a catalog name with string parameters (as read from a run
    /// config). Missing parameters take the catalog defaults: `c = 0.5`,
    /// `eps = 0.1`, `period = 1`, `height = 2`.
    pub fn from_catalog(name: &str, params: &BTreeMap<String, String>) -> Result<Self> {
        let num = |key: &str, default: f64| -> Result<f64> {
            match params.get(key) {
                None => Ok(default),
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("{name}.{key}: not a number: {v:?}"))),
            }
        };
        let known: &[&str] = match name {
            "constant_one" | "iterated_log" => &[],
            "power_log" => &["c"],
            "power" => &["eps"],
            "spiky" => &["period", "height"],
            "tabulated" => &["points"],
            other => return Err(Error::Config(format!("unknown g function {other:?}"))),
        };
        if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::Config(format!("{name}: unknown parameter {k:?}")));
        }
        match name {
            "constant_one" => Ok(GFunction::ConstantOne),
            "iterated_log" => Ok(GFunction::IteratedLog),
            "power_log" => GFunction::power_log(num("c", 0.5)?),
            "power" => GFunction::power(num("eps", 0.1)?),
            "spiky" => GFunction::spiky(num("period", 1.0)?, num("height", 2.0)?),
            _ => {
                let raw = params
                    .get("points")
                    .ok_or_else(|| Error::Config("tabulated: missing points".into()))?;
                GFunction::tabulated(parse_points(raw)?)
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GFunction::ConstantOne => "constant_one",
            GFunction::PowerLog { .. } => "power_log",
            GFunction::IteratedLog => "iterated_log",
            GFunction::Power { .. } => "power",
            GFunction::Spiky { .. } => "spiky",
            GFunction::Tabulated(_) => "tabulated",
        }
    }

    /// Parameters in the string form accepted by [`GFunction::from_catalog`].
    pub fn params(&self) -> BTreeMap<String, String> {
        let pairs: Vec<(&str, String)> = match self {
            GFunction::ConstantOne | GFunction::IteratedLog => vec![],
            GFunction::PowerLog { c } => vec![("c", c.to_string())],
            GFunction::Power { eps } => vec![("eps", eps.to_string())],
            GFunction::Spiky { period, height } => {
                vec![("period", period.to_string()), ("height", height.to_string())]
            }
            GFunction::Tabulated(pts) => {
                let s = pts.iter().map(|(r, v)| format!("{r}:{v}")).collect::<Vec<_>>().join(", ");
                vec![("points", s)]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Checks parameter ranges, `g ≥ 1` and monotonicity.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            GFunction::PowerLog { c } if !(c >= 0.0 && c.is_finite()) => {
                bad(format!("power_log exponent c = {c} must be >= 0"))
            }
            GFunction::Power { eps } if !(eps >= 0.0 && eps.is_finite()) => {
                bad(format!("power exponent eps = {eps} must be >= 0"))
            }
            GFunction::Spiky { period, height }
                if !(period > 0.0 && period.is_finite() && height >= 1.0 && height.is_finite()) =>
            {
                bad(format!("spiky needs period > 0 and height >= 1 (got {period}, {height})"))
            }
            GFunction::Tabulated(ref pts) => validate_table(pts),
            _ => Ok(()),
        }
    }

    /// Verifies `g ≥ 1` and non-decrease on a log-spaced radius mesh.
    pub fn check_sampled_monotone(&self) -> Result<()> {
        self.validate()?;
        let mut prev: Option<(f64, f64)> = None;
        for i in 0..=400 {
            let r = 10f64.powf(-3.0 + 18.0 * i as f64 / 400.0);
            let v = self.eval(r);
            if v < 1.0 {
                return Err(Error::InvalidParameter(format!("g({r}) = {v} < 1")));
            }
            if let Some((pr, pv)) = prev {
                if v < pv {
                    return Err(Error::MonotonicityViolation {
                        left: pr,
                        left_value: pv,
                        right: r,
                        right_value: v,
                    });
                }
            }
            prev = Some((r, v));
        }
        Ok(())
    }

    /// `g(r)` for `r ≥ 0`.
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            GFunction::ConstantOne => 1.0,
            GFunction::PowerLog { c } => (E + r).ln().powf(c),
            GFunction::IteratedLog => (E + (E + r).ln()).ln().sqrt(),
            GFunction::Power { eps } => (E + r).powf(eps),
            GFunction::Spiky { period, height } => {
                if r <= 1.0 {
                    1.0
                } else {
                    height.powi(spiky_jumps(r.ln().ln(), period, height))
                }
            }
            GFunction::Tabulated(ref pts) => eval_table(pts, r),
        }
    }

    /// `ln g(τ)` at `τ = exp(exp(y))`, evaluated without forming `τ` so that
    /// astronomically large radii stay finite.
    pub fn ln_g_at_loglog(&self, y: f64) -> f64 {
        match *self {
            GFunction::ConstantOne => 0.0,
            GFunction::PowerLog { c } => c * ln_ln_e_plus(y),
            GFunction::IteratedLog => {
                let lam = ln_ln_e_plus(y);
                // ln(e + L) with L = e^lam.
                let ln_e_plus_l = if lam < 700.0 {
                    (E + lam.exp()).ln()
                } else {
                    lam
                };
                0.5 * ln_e_plus_l.ln()
            }
            GFunction::Power { eps } => eps * ln_ln_e_plus(y).exp(),
            GFunction::Spiky { period, height } => {
                spiky_jumps(y, period, height) as f64 * height.ln()
            }
            GFunction::Tabulated(ref pts) => {
                let x = y.exp();
                if x < 700.0 {
                    eval_table(pts, x.exp()).ln()
                } else {
                    pts.last().map_or(0.0, |p| p.1.ln())
                }
            }
        }
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::PowerLog { c } => write!(f, "power_log(c={c})"),
            GFunction::Power { eps } => write!(f, "power(eps={eps})"),
            GFunction::Spiky { period, height } => write!(f, "spiky(period={period}, height={height})"),
            GFunction::Tabulated(p) => write!(f, "tabulated({} points)", p.len()),
            other => f.write_str(other.name()),
        }
    }
}

/// `ln(ln(e + τ))` for `τ = exp(exp(y))`.
fn ln_ln_e_plus(y: f64) -> f64 {
    if y < 3.5 {
        let tau = y.exp().exp();
        (E + tau).ln().ln()
    } else {
        // ln(e + τ) = x + ln(1 + e^{1-x}), x = e^y ≥ 33.
        let x = y.exp();
        y + (((1.0 - x).exp()) / x).ln_1p()
    }
}

fn spiky_jumps(y: f64, period: f64, height: f64) -> i32 {
    if height <= 1.0 || y < period {
        return 0;
    }
    let mut j = ((y / period).ln() / (2.0 * height.ln())).floor() as i32 + 1;
    // Guard the floor against rounding at exact jump locations.
    while j > 0 && y < period * height.powi(2 * (j - 1)) {
        j -= 1;
    }
    while y >= period * height.powi(2 * j) {
        j += 1;
    }
    j
}

fn validate_table(pts: &[(f64, f64)]) -> Result<()> {
    if pts.is_empty() {
        return Err(Error::InvalidParameter("tabulated g needs at least one point".into()));
    }
    for &(r, v) in pts {
        if !(r >= 0.0 && r.is_finite() && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad table point ({r}, {v})")));
        }
        if v < 1.0 {
            return Err(Error::InvalidParameter(format!("tabulated g({r}) = {v} < 1")));
        }
    }
    for w in pts.windows(2) {
        let ((r0, v0), (r1, v1)) = (w[0], w[1]);
        if r1 <= r0 {
            return Err(Error::InvalidParameter(format!(
                "table radii must increase strictly ({r0} then {r1})"
            )));
        }
        if v1 < v0 {
            return Err(Error::MonotonicityViolation {
                left: r0,
                left_value: v0,
                right: r1,
                right_value: v1,
            });
        }
    }
    Ok(())
}

fn eval_table(pts: &[(f64, f64)], r: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 <= r);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[i - 1].1;
    }
    let ((r0, v0), (r1, v1)) = (pts[i - 1], pts[i]);
    v0 + (v1 - v0) * (r - r0) / (r1 - r0)
}

/// Parses `r1:v1, r2:v2, ...`.
pub fn parse_points(raw: &str) -> Result<Vec<(f64, f64)>> {
    raw.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (r, v) = pair
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("table point {pair:?} is not radius:value")))?;
            let p = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("table point {pair:?}: bad number")))
            };
            Ok((p(r)?, p(v)?))
        })
        .collect()
}
