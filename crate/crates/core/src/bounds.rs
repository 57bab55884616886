//! Numeric bound calculators: ξ fixpoints and the lower-bound chain, pairing
//! model β thresholds, the exact h-inequality behind the random-subset
//! argument, Chernoff envelopes and the Δ(t) / Zarankiewicz envelopes.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Published `(Δ, lower, upper)` constants for Δ = 3..=10.
pub const PUBLISHED_TABLE: [(usize, f64, f64); 8] = [
    (3, 0.34116, 0.4591),
    (4, 0.24716, 0.4212),
    (5, 0.18657, 0.3887),
    (6, 0.14516, 0.3621),
    (7, 0.11562, 0.3395),
    (8, 0.09384, 0.3201),
    (9, 0.07735, 0.3031),
    (10, 0.06459, 0.2882),
];

pub const LOWER_TABLE_TOL: f64 = 1e-5;
pub const UPPER_TABLE_TOL: f64 = 5e-4;

/// Bisection for a root of `f` in `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root in `(0, 1)` of `ξ^Δ + ξ = 1`.
pub fn xi_of_delta(delta: usize, tol: f64) -> f64 {
    if delta == 0 {
        return 0.0;
    }
    let d = delta as i32;
    bisect(|x| x.powi(d) + x - 1.0, 0.0, 1.0, tol).expect("ξ^Δ + ξ - 1 changes sign on [0, 1]")
}

fn truncate_5(v: f64) -> f64 {
    ((v * 1e5) + 1e-7).floor() / 1e5
}

/// Lower-bound constant for `f(n, Δ)/n` from the ξ recursion, with each
/// intermediate value rounded down to 5 decimals (the tabulated form).
/// Rounding down keeps every step a valid lower bound.
pub fn lower_constant(delta: usize) -> f64 {
    assert!(delta >= 2, "lower_constant needs delta >= 2");
    (3..=delta).fold(0.5, |l, d| truncate_5(l * xi_of_delta(d, DEFAULT_TOL)))
}

/// Unrounded product `1/2 · ξ(3) · … · ξ(Δ)`.
pub fn lower_constant_exact(delta: usize) -> f64 {
    assert!(delta >= 2, "lower_constant_exact needs delta >= 2");
    (3..=delta).fold(0.5, |l, d| l * xi_of_delta(d, DEFAULT_TOL))
}

/// Logarithm of the pairing-model first-moment expression. Negative values
/// certify that a random Δ-regular graph has no bi-hole of size `βn` w.h.p.
pub fn beta_log_expression(beta: f64, delta: usize) -> f64 {
    let d = delta as f64;
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let (b, c, e) = (beta, 1.0 - beta, 1.0 - 2.0 * beta);
    2.0 * d * c * c.ln() - 2.0 * xlnx(b) - 2.0 * xlnx(c) - d * xlnx(e)
}

/// Root `β* ∈ (0, 1/2)` of [`beta_log_expression`]; every β in `(β*, 1/2)`
/// satisfies the strict inequality.
pub fn beta_threshold(delta: usize, tol: f64) -> Result<f64> {
    if delta < 3 {
        return Err(Error::param("delta", "beta threshold needs delta >= 3"));
    }
    bisect(|b| beta_log_expression(b, delta), 1e-6, 0.5 - 1e-12, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsTableRow {
    pub delta: usize,
    pub lower: f64,
    pub upper: f64,
}

pub fn bounds_table(delta_min: usize, delta_max: usize) -> Result<Vec<BoundsTableRow>> {
    if delta_min < 3 || delta_min > delta_max {
        return Err(Error::param(
            "delta range",
            format!("need 3 <= min <= max, got {delta_min}..{delta_max}"),
        ));
    }
    (delta_min..=delta_max)
        .map(|delta| {
            Ok(BoundsTableRow {
                delta,
                lower: lower_constant(delta),
                upper: beta_threshold(delta, DEFAULT_TOL)?,
            })
        })
        .collect()
}

pub fn published_row(delta: usize) -> Option<(f64, f64)> {
    PUBLISHED_TABLE
        .iter()
        .find(|r| r.0 == delta)
        .map(|&(_, l, u)| (l, u))
}

/// Size of the random subset `S ⊆ B` used by the random-subset argument:
/// `⌊(1-2x)n⌋ - 2`.
pub fn random_subset_size(x: f64, n: usize) -> Option<usize> {
    let raw = ((1.0 - 2.0 * x) * n as f64 + 1e-9).floor();
    if raw < 2.0 {
        return None;
    }
    Some(raw as usize - 2)
}

/// `x = ½ · log Δ / Δ`.
pub fn random_subset_x(delta: usize) -> f64 {
    let d = delta as f64;
    0.5 * d.ln() / d
}

fn h_arguments(x: f64, n: usize, delta: usize) -> Result<usize> {
    if delta < 2 {
        return Err(Error::param("delta", "need delta >= 2"));
    }
    if n < delta {
        return Err(Error::param(
            "n",
            format!("n = {n} is below delta = {delta}"),
        ));
    }
    let s = random_subset_size(x, n).ok_or_else(|| {
        Error::param("x", format!("(1-2x)n - 2 is negative for x = {x}, n = {n}"))
    })?;
    if s > n || s + 2 < delta {
        return Err(Error::param(
            "x",
            format!("subset size {s} leaves invalid binomial arguments (n = {n}, delta = {delta})"),
        ));
    }
    Ok(s)
}

/// `C(Δ, Δ-2) · C(n-Δ, s-Δ+2) / C(n, s)` with `s = ⌊(1-2x)n⌋ - 2`, exactly.
/// This is the probability that a fixed vertex of degree Δ has exactly Δ-2
/// neighbors in a uniform random `s`-subset.
pub fn h_value(x: f64, n: usize, delta: usize) -> Result<BigRational> {
    let s = h_arguments(x, n, delta)?;
    let big = |v: usize| BigInt::from(v);
    let num = binomial(big(delta), big(2)) * binomial(big(n - delta), big(s + 2 - delta));
    let den = binomial(big(n), big(s));
    Ok(BigRational::new(num, den))
}

/// The same quantity through log-gamma, as an independent floating route.
pub fn h_value_lgamma(x: f64, n: usize, delta: usize) -> Result<f64> {
    let s = h_arguments(x, n, delta)?;
    let ln_choose = |a: usize, b: usize| {
        ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
    };
    let d = delta as f64;
    Ok(d * (d - 1.0) / 2.0 * (ln_choose(n - delta, s + 2 - delta) - ln_choose(n, s)).exp())
}

fn ser_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HEvaluation {
    pub x: f64,
    pub n: usize,
    pub delta: usize,
    pub subset_size: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub h: BigRational,
    pub h_approx: f64,
    /// `2x + 2/n`.
    pub rhs: f64,
    pub holds: bool,
    /// `(n - s)/n`, the requirement once floors are applied to `|S|`.
    pub rhs_floored: f64,
    pub holds_floored: bool,
}

pub fn check_h_inequality(n: usize, delta: usize) -> Result<HEvaluation> {
    let x = random_subset_x(delta);
    let h = h_value(x, n, delta)?;
    let s = h_arguments(x, n, delta)?;
    let rhs = 2.0 * x + 2.0 / n as f64;
    let rhs_exact = BigRational::from_float(rhs).expect("finite rhs");
    let floored = BigRational::new(BigInt::from(n - s), BigInt::from(n));
    Ok(HEvaluation {
        x,
        n,
        delta,
        subset_size: s,
        h_approx: h.to_f64().unwrap_or(f64::NAN),
        holds: h >= rhs_exact,
        rhs,
        rhs_floored: (n - s) as f64 / n as f64,
        holds_floored: h >= floored,
        h,
    })
}

/// `⌈5 Δ log Δ⌉`, the smallest `n` in the random-subset regime.
pub fn random_subset_regime_n(delta: usize) -> usize {
    let d = delta as f64;
    (5.0 * d * d.ln()).ceil() as usize
}

/// Smallest Δ in `[2, delta_max]` such that the h-inequality holds at
/// `n = ⌈5Δ log Δ⌉` for every Δ' from there up to `delta_max`.
pub fn empirical_delta0(delta_max: usize) -> Result<Option<usize>> {
    let mut smallest = None;
    for delta in (2..=delta_max).rev() {
        if check_h_inequality(random_subset_regime_n(delta), delta)?.holds {
            smallest = Some(delta);
        } else {
            break;
        }
    }
    Ok(smallest)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailSide {
    Upper,
    Lower,
}

/// Chernoff envelope for `Bin(N, p)`: `exp(-ε²Np/3)` above the mean,
/// `exp(-ε²Np/2)` below it.
pub fn chernoff_tail(n_trials: u64, p: f64, eps: f64, side: TailSide) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::param("eps", format!("{eps} not in [0, 1)")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} not in [0, 1]")));
    }
    let mean = n_trials as f64 * p;
    let denom = match side {
        TailSide::Upper => 3.0,
        TailSide::Lower => 2.0,
    };
    Ok((-eps * eps * mean / denom).exp())
}

/// Kővári–Sós–Turán envelope `C n^{2 - 1/t}`.
pub fn kst_bound(n: usize, t: usize, c_const: f64) -> f64 {
    c_const * (n as f64).powf(2.0 - 1.0 / t as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaTBounds {
    pub t: usize,
    pub n: usize,
    pub c_const: f64,
    /// `n - C n^{1 - 1/t}`
    pub lower: f64,
    /// `n - C n^{1 - 2/(t+1)}`
    pub upper: f64,
    /// Leading term of the sharp form for t = 2 (`n - n^{1/2}`) and t = 3
    /// (`n - n^{2/3}`); the (1 + o(1)) factor is not resolved.
    pub sharp_leading: Option<f64>,
}

pub fn delta_t_bounds(t: usize, n: usize, c_const: f64) -> Result<DeltaTBounds> {
    if t < 2 {
        return Err(Error::param("t", "need t >= 2"));
    }
    if n < 1 {
        return Err(Error::param("n", "need n >= 1"));
    }
    let nf = n as f64;
    let tf = t as f64;
    let sharp_leading = match t {
        2 => Some(nf - nf.sqrt()),
        3 => Some(nf - nf.powf(2.0 / 3.0)),
        _ => None,
    };
    Ok(DeltaTBounds {
        t,
        n,
        c_const,
        lower: nf - c_const * nf.powf(1.0 - 1.0 / tf),
        upper: nf - c_const * nf.powf(1.0 - 2.0 / (tf + 1.0)),
        sharp_leading,
    })
}

/// Bi-hole size guaranteed in every `n x n` graph with A-degrees at most Δ:
/// `n` for Δ = 0, `⌊n/2⌋` for Δ = 1, `⌈n/2⌉ - 1` for Δ = 2 and
/// `⌊(n-2)/Δ⌋` beyond.
pub fn guaranteed_bihole(n: usize, delta: usize) -> usize {
    match delta {
        0 => n,
        1 => n / 2,
        2 => n.div_ceil(2).saturating_sub(1),
        d => n.saturating_sub(2) / d,
    }
}
