//! `ζ(1/2 + it)`: the approximate-functional-equation main sum, an
//! Euler–Maclaurin oracle, Hardy's `Z`, and a growth scan against `t^{13/84}`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::sampling::stream_rng;
use crate::summation::chunked_complex_sum;

/// Default number of Bernoulli correction terms.
pub const DEFAULT_DEPTH: usize = 8;
/// Largest supported Bernoulli depth.
pub const MAX_DEPTH: usize = 12;
/// Largest `t` accepted by the scan.
pub const SCAN_MAX_T: f64 = 1e6;
/// Largest number of scan points.
pub const SCAN_MAX_POINTS: usize = 100_000;
/// Exponent the scan divides by.
pub const GROWTH_EXPONENT: f64 = 13.0 / 84.0;

/// `B_2, B_4, …, B_26`.
const BERNOULLI: [f64; 13] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
];

/// A value of ζ with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub re: f64,
    pub im: f64,
    pub abs_err: f64,
}

impl ZetaValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `n^{-s}` and its evaluation error (relative to `|n^{-s}|`).
#[inline]
fn power_term(n: f64, s: Complex64) -> (Complex64, f64) {
    let ln = n.ln();
    let modulus = (-s.re * ln).exp();
    let (sin, cos) = (s.im * ln).sin_cos();
    let term = Complex64::new(modulus * cos, -modulus * sin);
    let rel = f64::EPSILON * (s.im.abs() * ln + s.re.abs() * ln + 4.0);
    (term, rel)
}

/// `Σ_{1≤n≤count} n^{-s}`, plus its rounding bound.
fn dirichlet_partial(count: u64, s: Complex64) -> (Complex64, f64) {
    let sum = chunked_complex_sum(count as usize, |i| power_term((i + 1) as f64, s).0);
    // The per-term relative error grows with log n, so the last term bounds it.
    let worst = if count > 0 {
        power_term(count as f64, s).1
    } else {
        0.0
    };
    (sum.value(), sum.error_bound() + worst * sum.abs_mass())
}

/// `Σ_{n ≤ √(t/2π)} n^{-1/2+it}` for any `t > 0`.
pub fn main_sum(t: f64) -> Result<ZetaValue> {
    ensure_finite("t", t)?;
    if !(t > 0.0) {
        return Err(Error::invalid(format!("t must be > 0, got {t}")));
    }
    let count = (t / std::f64::consts::TAU).sqrt().floor() as u64;
    let (z, err) = dirichlet_partial(count, Complex64::new(0.5, -t));
    Ok(ZetaValue {
        re: z.re,
        im: z.im,
        abs_err: err,
    })
}

/// The approximate-functional-equation sum `S(t)`, with
/// `|ζ(1/2+it)| ≤ 2|S(t)| + O(1)`. The error covers rounding only; the `O(1)`
/// constant is not quantified.
pub fn afe_main_sum(t: f64) -> Result<ZetaValue> {
    ensure_finite("t", t)?;
    if t < 10.0 {
        return Err(Error::invalid(format!("t must be >= 10, got {t}")));
    }
    main_sum(t)
}

/// Smallest term count accepted by [`zeta_em_oracle`] at height `t`.
pub fn default_terms(t: f64) -> u64 {
    (10.0 + t.abs() / 2.0).ceil() as u64
}

/// Euler–Maclaurin evaluation of `ζ(s)` with `terms` leading terms summed
/// directly and `depth` Bernoulli corrections.
pub fn zeta_em(s: Complex64, terms: u64, depth: usize) -> Result<ZetaValue> {
    ensure_finite("Re s", s.re)?;
    ensure_finite("Im s", s.im)?;
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::invalid(format!(
            "depth must lie in 1..={MAX_DEPTH}, got {depth}"
        )));
    }
    if terms < 2 {
        return Err(Error::invalid("terms must be >= 2"));
    }
    if (s - Complex64::new(1.0, 0.0)).norm() == 0.0 {
        return Err(Error::invalid("pole at s = 1"));
    }
    let p = depth as f64;
    if !(s.re + 2.0 * p + 1.0 > 0.0) {
        return Err(Error::invalid("Re s too small for the requested depth"));
    }
    let n = terms as f64;
    let (head, head_err) = dirichlet_partial(terms - 1, s);
    let (n_pow, n_rel) = power_term(n, s); // N^{-s}
    let one = Complex64::new(1.0, 0.0);
    let mut total = head + n_pow * n / (s - one) + n_pow * 0.5;
    let mut mass = head.norm() + n_pow.norm() * (n / (s - one).norm() + 0.5);

    // T_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{-s-2k+1}
    let mut poch = s;
    let mut fact = 2.0;
    let mut n_scale = n_pow / n;
    let mut next_term = Complex64::new(0.0, 0.0);
    for k in 1..=depth + 1 {
        let term = poch * n_scale * (BERNOULLI[k - 1] / fact);
        if k <= depth {
            total += term;
            mass += term.norm();
        } else {
            next_term = term;
        }
        let kk = k as f64;
        poch *= (s + (2.0 * kk - 1.0)) * (s + 2.0 * kk);
        fact *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
        n_scale /= n * n;
    }
    let truncation = (s + (2.0 * p + 1.0)).norm() / (s.re + 2.0 * p + 1.0) * next_term.norm();
    let rounding = head_err + (n_rel + 8.0 * f64::EPSILON) * mass;
    Ok(ZetaValue {
        re: total.re,
        im: total.im,
        abs_err: truncation + rounding,
    })
}

/// `ζ(1/2 + it)` by Euler–Maclaurin at the default depth.
pub fn zeta_em_oracle(t: f64, terms: u64) -> Result<ZetaValue> {
    ensure_finite("t", t)?;
    let need = default_terms(t);
    if terms < need {
        return Err(Error::invalid(format!(
            "terms = {terms} below the minimum {need} for t = {t}"
        )));
    }
    zeta_em(Complex64::new(0.5, t), terms, DEFAULT_DEPTH)
}

/// `ζ(1/2 + it)` with [`default_terms`].
pub fn zeta_half(t: f64) -> Result<ZetaValue> {
    zeta_em_oracle(t, default_terms(t))
}

/// Riemann–Siegel θ by its Stirling expansion (accurate for `t ≳ 10`).
pub fn theta(t: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    t / 2.0 * (t / TAU).ln() - t / 2.0 - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's `Z(t) = Re(e^{iθ(t)} ζ(1/2+it))` and its error bound.
pub fn hardy_z(t: f64) -> Result<(f64, f64)> {
    let z = zeta_half(t)?;
    let rot = Complex64::from_polar(1.0, theta(t));
    Ok((
        (rot * z.as_complex()).re,
        z.abs_err + 4.0 * f64::EPSILON * z.abs() * t.abs().max(1.0),
    ))
}

/// First sign change of `Z` on `[lo, hi]` scanned in steps of `step`, then
/// bisected to width `tol`.
pub fn bracket_first_zero(lo: f64, hi: f64, step: f64, tol: f64) -> Result<(f64, f64)> {
    for (name, v) in [("lo", lo), ("hi", hi), ("step", step), ("tol", tol)] {
        ensure_finite(name, v)?;
    }
    if !(lo >= 1.0 && lo < hi && step > 0.0 && tol > 0.0) {
        return Err(Error::invalid("need 1 <= lo < hi, step > 0, tol > 0"));
    }
    let steps = ((hi - lo) / step).ceil() as u64;
    let mut a = lo;
    let mut za = hardy_z(a)?.0;
    for i in 1..=steps {
        let b = (lo + i as f64 * step).min(hi);
        let zb = hardy_z(b)?.0;
        if za.signum() != zb.signum() {
            let (mut a, mut b, mut za) = (a, b, za);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                let zm = hardy_z(mid)?.0;
                if zm.signum() == za.signum() {
                    a = mid;
                    za = zm;
                } else {
                    b = mid;
                }
            }
            return Ok((a, b));
        }
        a = b;
        za = zb;
    }
    Err(Error::invalid(format!(
        "no sign change of Z on [{lo}, {hi}]"
    )))
}

/// One-sided check `2|S(t)| + slack ≥ |ζ(1/2+it)| − abs_err`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfeCheck {
    pub t: f64,
    pub main_sum_abs: f64,
    pub slack: f64,
    pub zeta_abs: f64,
    pub zeta_err: f64,
    pub holds: bool,
}

pub fn afe_consistency(t: f64, slack: f64) -> Result<AfeCheck> {
    ensure_finite("slack", slack)?;
    let s = afe_main_sum(t)?;
    let z = zeta_half(t)?;
    let lhs = 2.0 * (s.abs() + s.abs_err) + slack;
    Ok(AfeCheck {
        t,
        main_sum_abs: s.abs(),
        slack,
        zeta_abs: z.abs(),
        zeta_err: z.abs_err,
        holds: lhs >= z.abs() - z.abs_err,
    })
}

/// One scan row: CSV `t,abs_zeta,ratio_13_84,abs_err`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub t: f64,
    pub abs_zeta: f64,
    pub ratio_13_84: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthScan {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    pub seed: u64,
    pub rows: Vec<GrowthRow>,
    /// Running maximum of the ratio, one entry per row.
    pub running_max: Vec<f64>,
}

impl GrowthScan {
    pub fn max_ratio(&self) -> f64 {
        self.running_max.last().copied().unwrap_or(f64::NAN)
    }

    /// Height where the maximum ratio is first attained.
    pub fn argmax(&self) -> Option<f64> {
        let m = self.max_ratio();
        self.rows.iter().find(|r| r.ratio_13_84 == m).map(|r| r.t)
    }
}

/// Log-spaced grid over `[t_min, t_max]` with one uniformly jittered point per
/// cell; strictly increasing.
pub fn jittered_grid(t_min: f64, t_max: f64, points: usize, seed: u64) -> Result<Vec<f64>> {
    ensure_finite("t_min", t_min)?;
    ensure_finite("t_max", t_max)?;
    if !(10.0 <= t_min && t_min < t_max && t_max <= SCAN_MAX_T) {
        return Err(Error::guard(
            "zeta.scan_range",
            format!("need 10 <= t_min < t_max <= {SCAN_MAX_T}, got [{t_min}, {t_max}]"),
        ));
    }
    if points == 0 || points > SCAN_MAX_POINTS {
        return Err(Error::guard(
            "zeta.scan_points",
            format!("points must lie in 1..={SCAN_MAX_POINTS}, got {points}"),
        ));
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    let width = (b - a) / points as f64;
    let mut rng = stream_rng(seed, 0);
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let u: f64 = rng.random();
            (a + (i as f64 + u) * width).exp().clamp(t_min, t_max)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

/// [`growth_scan_with`] using the Euler–Maclaurin oracle.
pub fn growth_scan(t_min: f64, t_max: f64, points: usize, seed: u64) -> Result<GrowthScan> {
    growth_scan_with(t_min, t_max, points, seed, zeta_half)
}

/// Tabulates `|f(t)| / t^{13/84}` on [`jittered_grid`].
pub fn growth_scan_with<F>(
    t_min: f64,
    t_max: f64,
    points: usize,
    seed: u64,
    f: F,
) -> Result<GrowthScan>
where
    F: Fn(f64) -> Result<ZetaValue> + Sync,
{
    let grid = jittered_grid(t_min, t_max, points, seed)?;
    let values: Vec<ZetaValue> = grid.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let rows: Vec<GrowthRow> = grid
        .iter()
        .zip(&values)
        .map(|(&t, z)| GrowthRow {
            t,
            abs_zeta: z.abs(),
            ratio_13_84: z.abs() / t.powf(GROWTH_EXPONENT),
            abs_err: z.abs_err,
        })
        .collect();
    let mut running_max = Vec::with_capacity(rows.len());
    let mut best = f64::NEG_INFINITY;
    for r in &rows {
        best = best.max(r.ratio_13_84);
        running_max.push(best);
    }
    Ok(GrowthScan {
        t_min,
        t_max,
        points,
        seed,
        rows,
        running_max,
    })
}
