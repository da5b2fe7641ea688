//! Mean values `A_r(N, δ, Δ)` of the quadruple-phase sum,
//!
//! ```text
//! A_r = ∫₀¹∫₀¹∫₋₁¹∫₋₁¹ |Σ_{n≤N} e(n x₁ + n² x₂ + δ⁻¹(n/N)^{3/2} x₃ + Δ⁻¹(n/N)^{1/2} x₄)|^{2r} dx,
//! ```
//!
//! computed three ways: a windowed count of near-solutions of the associated
//! Diophantine system, an exact kernel sum over pairs of `r`-tuples with equal
//! `(Σm, Σm²)`, and plain Monte-Carlo quadrature. `δ = N⁻²`, `Δ = N⁻¹` gives the
//! headline normalization `N^{1/2} n^{3/2}`, `N^{1/2} n^{1/2}`.
//!
//! Every enumeration walks multisets (non-decreasing tuples) and weights each by
//! its number of orderings, which cuts storage by roughly `r!`.

use std::time::Duration;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::expsum::{e, frac_product};
use crate::multiset::{for_each_multiset, for_each_multiset_with_sum};
use crate::sampling::mc_mean;
use crate::summation::NeumaierSum;

/// Largest `N` accepted by the windowed twelve-variable count.
pub const WINDOWED_MAX_N: u32 = 48;
/// Largest `N` accepted by [`count_vinogradov_j`].
pub const VINOGRADOV_MAX_N: u32 = 256;
/// Largest `N` accepted by the quadrature estimator.
pub const QUADRATURE_MAX_N: u32 = 1 << 16;
/// Minimum Monte-Carlo sample count.
pub const MIN_SAMPLES: u64 = 1000;

/// Largest `N` for the exact kernel sum, indexed by `r`.
const KERNEL_MAX_N: [u32; 7] = [0, 1_000_000, 2000, 256, 48, 24, 12];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Windowed,
    KernelSum,
    Quadrature,
    VinogradovJ,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Windowed => "windowed",
            Method::KernelSum => "kernel",
            Method::Quadrature => "quadrature",
            Method::VinogradovJ => "vinogradov",
        }
    }
}

/// Parameters of a mean-value computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanValueSpec {
    pub n: u32,
    pub r: u32,
    /// Scale of the `x₃` frequency, `N⁻² ≤ δ ≤ 1`.
    pub delta: f64,
    /// Scale of the `x₄` frequency, `N⁻¹ ≤ Δ ≤ 1`.
    pub big_delta: f64,
    pub window3: f64,
    pub window4: f64,
}

impl MeanValueSpec {
    /// `δ = N⁻²`, `Δ = N⁻¹`, both windows `N^{-1/2}`.
    pub fn new(n: u32, r: u32) -> Self {
        let nf = n as f64;
        Self {
            n,
            r,
            delta: nf.powi(-2),
            big_delta: 1.0 / nf,
            window3: nf.powf(-0.5),
            window4: nf.powf(-0.5),
        }
    }

    pub fn with_scales(mut self, delta: f64, big_delta: f64) -> Self {
        self.delta = delta;
        self.big_delta = big_delta;
        self
    }

    pub fn with_windows(mut self, window3: f64, window4: f64) -> Self {
        self.window3 = window3;
        self.window4 = window4;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::invalid(format!("N must be >= 2, got {}", self.n)));
        }
        if self.r < 1 {
            return Err(Error::invalid("r must be >= 1"));
        }
        let nf = self.n as f64;
        let slack = 1.0 - 1e-12;
        ensure_finite("delta", self.delta)?;
        ensure_finite("Delta", self.big_delta)?;
        if !(self.delta >= nf.powi(-2) * slack && self.delta <= 1.0) {
            return Err(Error::invalid(format!(
                "delta = {} outside [N^-2, 1]",
                self.delta
            )));
        }
        if !(self.big_delta >= slack / nf && self.big_delta <= 1.0) {
            return Err(Error::invalid(format!(
                "Delta = {} outside [N^-1, 1]",
                self.big_delta
            )));
        }
        check_windows(self.window3, self.window4)
    }

    /// Frequency vectors `(n, n², δ⁻¹(n/N)^{3/2}, Δ⁻¹(n/N)^{1/2})`.
    pub fn frequencies(&self) -> Vec<[f64; 4]> {
        let nf = self.n as f64;
        (1..=self.n)
            .map(|m| {
                let t = m as f64 / nf;
                let mf = m as f64;
                [
                    mf,
                    mf * mf,
                    t.powf(1.5) / self.delta,
                    t.sqrt() / self.big_delta,
                ]
            })
            .collect()
    }
}

fn check_windows(w3: f64, w4: f64) -> Result<()> {
    if !(w3 > 0.0) || !(w4 > 0.0) {
        return Err(Error::invalid(format!(
            "windows must be > 0, got ({w3}, {w4})"
        )));
    }
    Ok(())
}

/// A count or integral estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub value: f64,
    pub exact: bool,
    pub stderr: f64,
    pub method: Method,
    /// The exact integer count, for counting methods.
    pub count: Option<u128>,
}

impl CountResult {
    fn exact_count(count: u128, method: Method) -> Self {
        Self {
            value: count as f64,
            exact: true,
            stderr: 0.0,
            method,
            count: Some(count),
        }
    }
}

/// Number of ordered 12-tuples `(m₁..m₁₂) ∈ {1..N}¹²` with
/// `Σ₁⁶ m = Σ₇¹² m`, `Σ₁⁶ m² = Σ₇¹² m²`, `|Σ₁⁶ m^{3/2} − Σ₇¹² m^{3/2}| ≤ window₃`
/// and `|Σ₁⁶ m^{1/2} − Σ₇¹² m^{1/2}| ≤ window₄`.
pub fn count_windowed_a6(n: u32, window3: f64, window4: f64) -> Result<CountResult> {
    count_windowed(n, 6, window3, window4)
}

/// The windowed count for `r`-fold sums (`2r` variables), `1 ≤ r ≤ 6`.
///
/// Multisets are generated one value of `Σm` at a time, sorted by
/// `(Σm², Σm^{3/2})`, and cross pairs inside each `(Σm, Σm²)` class are found
/// with a sliding window on `Σm^{3/2}`. Windows are closed.
pub fn count_windowed(n: u32, r: usize, window3: f64, window4: f64) -> Result<CountResult> {
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    if n > WINDOWED_MAX_N {
        return Err(Error::guard(
            "meanvalue.windowed_max_n",
            format!("N = {n} exceeds {WINDOWED_MAX_N}"),
        ));
    }
    if !(1..=6).contains(&r) {
        return Err(Error::Unsupported(format!("windowed count for r = {r}")));
    }
    check_windows(window3, window4)?;
    let r32 = r as u32;
    let pow32: Vec<f64> = (0..=n).map(|m| (m as f64).powf(1.5)).collect();
    let pow12: Vec<f64> = (0..=n).map(|m| (m as f64).sqrt()).collect();

    let partials: Vec<u128> = (r32..=r32 * n)
        .into_par_iter()
        .map(|s1| {
            let mut rows: Vec<(u32, f64, f64, u64)> = Vec::new();
            for_each_multiset_with_sum(n, r, s1, |t, w| {
                let s2 = t.iter().map(|&m| m * m).sum::<u32>();
                let s3 = t.iter().map(|&m| pow32[m as usize]).sum::<f64>();
                let s4 = t.iter().map(|&m| pow12[m as usize]).sum::<f64>();
                rows.push((s2, s3, s4, w));
            });
            rows.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
            let mut total = 0u128;
            let mut start = 0;
            while start < rows.len() {
                let mut end = start + 1;
                while end < rows.len() && rows[end].0 == rows[start].0 {
                    end += 1;
                }
                let class = &rows[start..end];
                for (i, a) in class.iter().enumerate() {
                    total += (a.3 * a.3) as u128;
                    for b in &class[i + 1..] {
                        if b.1 - a.1 > window3 {
                            break;
                        }
                        if (b.2 - a.2).abs() <= window4 {
                            total += 2 * (a.3 * b.3) as u128;
                        }
                    }
                }
                start = end;
            }
            total
        })
        .collect();
    Ok(CountResult::exact_count(
        partials.iter().sum(),
        Method::Windowed,
    ))
}

/// `∫₋₁¹ e(θx) dx = sin(2πθ)/(πθ)`.
pub fn kernel_factor(theta: f64) -> f64 {
    let z = std::f64::consts::TAU * theta;
    if z.abs() < 1e-4 {
        2.0 * (1.0 - z * z / 6.0)
    } else {
        z.sin() / (std::f64::consts::PI * theta)
    }
}

/// Exact evaluation of `A_r(N, δ, Δ)`: expanding `|·|^{2r}`, the `x₁, x₂`
/// integrals force `Σm = Σm'` and `Σm² = Σm'²`, and the `x₃, x₄` integrals
/// contribute [`kernel_factor`] of the scaled defects.
pub fn kernel_sum_a_r(spec: &MeanValueSpec) -> Result<CountResult> {
    spec.validate()?;
    let r = spec.r as usize;
    if r > 6 {
        return Err(Error::Unsupported(format!("kernel sum for r = {r}")));
    }
    if spec.n > KERNEL_MAX_N[r] {
        return Err(Error::guard(
            "meanvalue.kernel_max_n",
            format!("N = {} exceeds {} for r = {r}", spec.n, KERNEL_MAX_N[r]),
        ));
    }
    let freq = spec.frequencies();
    let mut rows: Vec<((u64, u64), f64, f64, f64)> = Vec::new();
    for_each_multiset(spec.n, r, |t, w| {
        let mut key = (0u64, 0u64);
        let (mut s3, mut s4) = (NeumaierSum::new(), NeumaierSum::new());
        for &m in t {
            key.0 += m as u64;
            key.1 += (m as u64) * (m as u64);
            s3.add(freq[m as usize - 1][2]);
            s4.add(freq[m as usize - 1][3]);
        }
        rows.push((key, s3.value(), s4.value(), w as f64));
    });
    rows.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut bounds = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let mut end = start + 1;
        while end < rows.len() && rows[end].0 == rows[start].0 {
            end += 1;
        }
        bounds.push((start, end));
        start = end;
    }
    let diag = kernel_factor(0.0) * kernel_factor(0.0);
    let partials: Vec<NeumaierSum> = bounds
        .par_iter()
        .map(|&(lo, hi)| {
            let class = &rows[lo..hi];
            let mut acc = NeumaierSum::new();
            for (i, a) in class.iter().enumerate() {
                acc.add(a.3 * a.3 * diag);
                for b in &class[i + 1..] {
                    let k = kernel_factor(a.1 - b.1) * kernel_factor(a.2 - b.2);
                    acc.add(2.0 * a.3 * b.3 * k);
                }
            }
            acc
        })
        .collect();
    let mut total = NeumaierSum::new();
    partials.iter().for_each(|p| total.merge(p));
    Ok(CountResult {
        value: total.value().max(0.0),
        exact: true,
        stderr: 0.0,
        method: Method::KernelSum,
        count: None,
    })
}

/// Monte-Carlo estimate of `A_r(N, δ, Δ)` from `samples` uniform points of
/// `[0,1]² × [−1,1]²`.
pub fn estimate_a_r_quadrature(
    spec: &MeanValueSpec,
    samples: u64,
    seed: u64,
) -> Result<CountResult> {
    spec.validate()?;
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "samples = {samples} below the minimum {MIN_SAMPLES}"
        )));
    }
    if spec.n > QUADRATURE_MAX_N {
        return Err(Error::guard(
            "meanvalue.quadrature_max_n",
            format!("N = {} exceeds {QUADRATURE_MAX_N}", spec.n),
        ));
    }
    let freq = spec.frequencies();
    let power = 2 * spec.r as i32;
    let est = mc_mean(4, samples, seed, |u| {
        let x = [u[0], u[1], 2.0 * u[2] - 1.0, 2.0 * u[3] - 1.0];
        let s: Complex64 = freq
            .iter()
            .map(|f| {
                e(frac_product(f[0], x[0])
                    + frac_product(f[1], x[1])
                    + frac_product(f[2], x[2])
                    + frac_product(f[3], x[3]))
            })
            .sum();
        4.0 * s.norm_sqr().powi(power / 2)
    });
    Ok(CountResult {
        value: est.mean,
        exact: false,
        stderr: est.stderr,
        method: Method::Quadrature,
        count: None,
    })
}

/// `J_{s,2}(N)`: ordered `2s`-tuples in `{1..N}` with equal sums and equal sums
/// of squares between the two halves, i.e. `∫∫_{[0,1]²} |Σ_{n≤N} e(nα + n²β)|^{2s}`.
pub fn count_vinogradov_j(n: u32, s: u32) -> Result<CountResult> {
    if !(2..=3).contains(&s) {
        return Err(Error::Unsupported(format!("J_{{s,2}} for s = {s}")));
    }
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    if n > VINOGRADOV_MAX_N {
        return Err(Error::guard(
            "meanvalue.vinogradov_max_n",
            format!("N = {n} exceeds {VINOGRADOV_MAX_N}"),
        ));
    }
    let mut keys: Vec<(u64, u64, u64)> = Vec::new();
    for_each_multiset(n, s as usize, |t, w| {
        let s1 = t.iter().map(|&m| m as u64).sum();
        let s2 = t.iter().map(|&m| (m as u64) * (m as u64)).sum();
        keys.push((s1, s2, w));
    });
    keys.sort_unstable();
    let mut total = 0u128;
    let mut i = 0;
    while i < keys.len() {
        let mut class = 0u128;
        let mut j = i;
        while j < keys.len() && keys[j].0 == keys[i].0 && keys[j].1 == keys[i].1 {
            class += keys[j].2 as u128;
            j += 1;
        }
        total += class * class;
        i = j;
    }
    Ok(CountResult::exact_count(total, Method::VinogradovJ))
}

/// Least-squares slope of `log value` against `log N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

pub fn fit_growth_exponent(points: &[(f64, f64)]) -> Result<GrowthFit> {
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    for &(n, v) in points {
        if !(n > 0.0 && n.is_finite() && v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!("degenerate point ({n}, {v})")));
        }
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("N values must be distinct"));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = (ssr / (k - 2.0) / sxx).sqrt();
    Ok(GrowthFit {
        slope,
        stderr,
        intercept,
    })
}

/// One CSV row: `method,N,r,delta,Delta,window3,window4,value,stderr,seconds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanValueRow {
    pub method: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub r: u32,
    pub delta: f64,
    #[serde(rename = "Delta")]
    pub big_delta: f64,
    pub window3: f64,
    pub window4: f64,
    pub value: f64,
    pub stderr: f64,
    pub seconds: f64,
}

impl MeanValueRow {
    pub fn new(spec: &MeanValueSpec, result: &CountResult, elapsed: Option<Duration>) -> Self {
        Self {
            method: result.method.as_str().to_string(),
            n: spec.n,
            r: spec.r,
            delta: spec.delta,
            big_delta: spec.big_delta,
            window3: spec.window3,
            window4: spec.window4,
            value: result.value,
            stderr: result.stderr,
            seconds: elapsed.map_or(0.0, |d| d.as_secs_f64()),
        }
    }
}
