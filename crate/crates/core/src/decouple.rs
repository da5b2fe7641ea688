//! Numerical probes of two decoupling inequalities: the discrete parabola
//! `‖Σ a_n e(n x₁ + n² x₂)‖_{L⁶_#} ≪ N^ε ‖a‖_{ℓ²}`, and the bilinear `L¹²`
//! inequality for the curve `Φ(t) = (t, t², t^{3/2}, t^{1/2})` over `B_N`.
//!
//! All integrals are normalized averages.

use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsum::{e, frac_product};
use crate::meanvalue::{count_vinogradov_j, fit_growth_exponent, GrowthFit, VINOGRADOV_MAX_N};
use crate::sampling::{rqmc_mean, stream_rng, Estimate};

/// Largest `N` for the bilinear probe.
pub const BILINEAR_MAX_N: usize = 64;
/// Largest `N` for the sampled parabola probe.
pub const PARABOLA_MAX_N: usize = 1 << 12;
/// Largest sample count for either probe.
pub const MAX_SAMPLES: u64 = 1 << 26;
/// Random shifts per quasi-Monte-Carlo estimate.
pub const REPLICATES: u64 = 16;

const COEFF_SALT: u64 = 0xC0EF_F1C1_E475_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Curve {
    /// `(t, t²)`.
    Parabola,
    /// `(t, t², t^{3/2}, t^{1/2})`.
    Quadruple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ensemble {
    Ones,
    RandomSigns,
    RandomPhase,
}

impl Ensemble {
    pub fn label(&self) -> &'static str {
        match self {
            Ensemble::Ones => "ones",
            Ensemble::RandomSigns => "random-signs",
            Ensemble::RandomPhase => "random-phase",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(Ensemble::Ones),
            "random-signs" | "signs" => Ok(Ensemble::RandomSigns),
            "random-phase" | "phase" => Ok(Ensemble::RandomPhase),
            other => Err(Error::invalid(format!("unknown ensemble '{other}'"))),
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `a_1..a_N` drawn from `ensemble`; depends only on `(seed, N)`.
pub fn coefficients(ensemble: Ensemble, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = stream_rng(seed ^ COEFF_SALT, n as u64);
    (0..n)
        .map(|_| match ensemble {
            Ensemble::Ones => Complex64::new(1.0, 0.0),
            Ensemble::RandomSigns => {
                Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0)
            }
            Ensemble::RandomPhase => e(rng.random::<f64>()),
        })
        .collect()
}

/// `‖a‖_{ℓ²}`.
pub fn parabola_rhs(a: &[Complex64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::invalid("coefficient list is empty"));
    }
    Ok(a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// `|Σ_n a_n e(n u + n² v)|` for `n = 1..=a.len()`.
pub fn parabola_integrand(a: &[Complex64], u: f64, v: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &c) in a.iter().enumerate() {
        let n = (i + 1) as f64;
        acc += c * e(frac_product(n, u) + frac_product(n * n, v));
    }
    acc.norm()
}

/// How to evaluate the parabola `L⁶` average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum L6Mode {
    /// `J_{3,2}(N)^{1/6}`; needs `a ≡ 1`.
    Exact,
    /// Randomized quasi-Monte-Carlo with this many samples.
    Sampled { samples: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lhs {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// `(avg_{B_N} |Σ a_n e(x·(n/N, n²/N²))|⁶)^{1/6}` with `N = a.len()`.
///
/// On `B_N = [0,N]×[0,N²]` the substitution `x = (N u, N² v)` turns the phase
/// into `n u + n² v`, which is 1-periodic in both variables, so the average
/// equals the integral over the unit square.
pub fn parabola_l6_lhs(a: &[Complex64], mode: L6Mode, seed: u64) -> Result<Lhs> {
    let n = a.len();
    if n == 0 {
        return Err(Error::invalid("coefficient list is empty"));
    }
    match mode {
        L6Mode::Exact => {
            if a.iter().any(|&z| z != Complex64::new(1.0, 0.0)) {
                return Err(Error::invalid("exact mode requires a_n = 1 for all n"));
            }
            if n > VINOGRADOV_MAX_N as usize {
                return Err(Error::guard(
                    "meanvalue.vinogradov_max_n",
                    format!("N = {n} exceeds {VINOGRADOV_MAX_N}"),
                ));
            }
            let j = count_vinogradov_j(n as u32, 3)?;
            Ok(Lhs {
                value: j.value.powf(1.0 / 6.0),
                stderr: 0.0,
                samples: 0,
            })
        }
        L6Mode::Sampled { samples } => {
            check_samples(samples)?;
            if n > PARABOLA_MAX_N {
                return Err(Error::guard(
                    "decouple.parabola_max_n",
                    format!("N = {n} exceeds {PARABOLA_MAX_N}"),
                ));
            }
            let est = rqmc_mean(2, samples, REPLICATES, seed, |p| {
                parabola_integrand(a, p[0], p[1]).powi(6)
            });
            Ok(root_estimate(est, 6.0))
        }
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples < 2 * REPLICATES {
        return Err(Error::invalid(format!(
            "samples must be >= {}, got {samples}",
            2 * REPLICATES
        )));
    }
    if samples > MAX_SAMPLES {
        return Err(Error::guard(
            "decouple.max_samples",
            format!("{samples} exceeds {MAX_SAMPLES}"),
        ));
    }
    Ok(())
}

/// `mean^{1/p}` with a delta-method standard error.
fn root_estimate(est: Estimate, p: f64) -> Lhs {
    let value = est.mean.powf(1.0 / p);
    let stderr = if est.mean > 0.0 {
        value * est.stderr / (p * est.mean)
    } else {
        0.0
    };
    Lhs {
        value,
        stderr,
        samples: est.samples,
    }
}

/// `I₁ = [1, ⌈N/3⌉]`, `I₂ = [N − ⌈N/3⌉ + 1, N]`.
pub fn default_intervals(n: usize) -> (RangeInclusive<usize>, RangeInclusive<usize>) {
    let w = n.div_ceil(3);
    (1..=w, n + 1 - w..=n)
}

/// A single decoupling measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecouplingExperiment {
    pub d: u32,
    pub n: usize,
    pub curve: Curve,
    pub ensemble: Ensemble,
    pub samples: u64,
    pub seed: u64,
    /// `(I₁, I₂)` as inclusive index ranges; `d = 4` only.
    pub intervals: Option<(RangeInclusive<usize>, RangeInclusive<usize>)>,
}

impl DecouplingExperiment {
    pub fn parabola(n: usize, ensemble: Ensemble, samples: u64, seed: u64) -> Self {
        Self {
            d: 2,
            n,
            curve: Curve::Parabola,
            ensemble,
            samples,
            seed,
            intervals: None,
        }
    }

    pub fn bilinear(n: usize, ensemble: Ensemble, samples: u64, seed: u64) -> Self {
        Self {
            d: 4,
            n,
            curve: Curve::Quadruple,
            ensemble,
            samples,
            seed,
            intervals: Some(default_intervals(n)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.d, self.curve) {
            (2, Curve::Parabola) | (4, Curve::Quadruple) => {}
            (d, c) => {
                return Err(Error::invalid(format!(
                    "d = {d} does not match curve {c:?}"
                )))
            }
        }
        if self.n < 4 {
            return Err(Error::invalid(format!("N must be >= 4, got {}", self.n)));
        }
        if self.d == 4 {
            if self.n > BILINEAR_MAX_N {
                return Err(Error::guard(
                    "decouple.bilinear_max_n",
                    format!("N = {} exceeds {BILINEAR_MAX_N}", self.n),
                ));
            }
            let (i1, i2) = self
                .intervals
                .as_ref()
                .ok_or_else(|| Error::invalid("d = 4 needs intervals"))?;
            let ok = !i1.is_empty()
                && !i2.is_empty()
                && *i1.start() >= 1
                && *i2.end() <= self.n
                && i1.end() < i2.start();
            if !ok {
                return Err(Error::invalid(format!(
                    "intervals {i1:?}, {i2:?} must be disjoint, ordered subranges of 1..={}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// `(avg_{B_N} |S₁ S₂|⁶)^{1/12}` with `S_j = Σ_{n∈I_j} a_n e(Φ(n/N)·x)` and
/// `B_N = [−N/2, N/2]⁴`; returns the estimate together with
/// `lhs / (N^{1/2} ‖a‖_∞)`.
pub fn bilinear_d4_ratio(exp: &DecouplingExperiment, a: &[Complex64]) -> Result<(Lhs, f64)> {
    exp.validate()?;
    if exp.d != 4 {
        return Err(Error::invalid("bilinear probe needs d = 4"));
    }
    check_samples(exp.samples)?;
    if a.len() != exp.n {
        return Err(Error::LengthMismatch {
            expected: exp.n,
            got: a.len(),
        });
    }
    let (i1, i2) = exp.intervals.clone().expect("validated");
    let n = exp.n as f64;
    let table = |r: RangeInclusive<usize>| -> Vec<(Complex64, [f64; 4])> {
        r.map(|k| {
            let t = k as f64 / n;
            (a[k - 1], [t, t * t, t * t.sqrt(), t.sqrt()])
        })
        .collect()
    };
    let (t1, t2) = (table(i1), table(i2));
    let partial = |tab: &[(Complex64, [f64; 4])], x: &[f64; 4]| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, phi) in tab {
            let phase: f64 = phi.iter().zip(x).map(|(p, xi)| p * xi).sum();
            acc += c * e(phase);
        }
        acc.norm()
    };
    let est = rqmc_mean(4, exp.samples, REPLICATES, exp.seed, |u| {
        let x = [
            n * (u[0] - 0.5),
            n * (u[1] - 0.5),
            n * (u[2] - 0.5),
            n * (u[3] - 0.5),
        ];
        (partial(&t1, &x) * partial(&t2, &x)).powi(6)
    });
    let lhs = root_estimate(est, 12.0);
    let sup = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok((lhs, lhs.value / (n.sqrt() * sup)))
}

/// CSV row `d,N,ensemble,lhs,rhs,ratio,stderr,samples,seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub d: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub ensemble: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    /// Slope of `log ratio` against `log N`.
    pub fit: GrowthFit,
}

/// Settings shared by every `N` in a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub d: u32,
    pub ensemble: Ensemble,
    pub samples: u64,
    pub seed: u64,
    /// Use the exact count for the parabola when `a ≡ 1`.
    pub exact: bool,
}

/// Runs the probe at each `N` and fits the growth of `lhs / rhs`; the
/// right-hand side is `‖a‖_{ℓ²}` for `d = 2` and `N^{1/2} ‖a‖_∞` for `d = 4`.
pub fn ratio_scan(ns: &[usize], cfg: &ScanConfig) -> Result<RatioReport> {
    let mut distinct = ns.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 distinct N, got {}",
            distinct.len()
        )));
    }
    if cfg.exact && (cfg.d != 2 || cfg.ensemble != Ensemble::Ones) {
        return Err(Error::invalid(
            "exact mode needs d = 2 and the ones ensemble",
        ));
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let a = coefficients(cfg.ensemble, n, cfg.seed);
        let (lhs, rhs, samples) = match cfg.d {
            2 => {
                DecouplingExperiment::parabola(n, cfg.ensemble, cfg.samples, cfg.seed)
                    .validate()?;
                let mode = if cfg.exact {
                    L6Mode::Exact
                } else {
                    L6Mode::Sampled {
                        samples: cfg.samples,
                    }
                };
                let lhs = parabola_l6_lhs(&a, mode, cfg.seed)?;
                (lhs, parabola_rhs(&a)?, lhs.samples)
            }
            4 => {
                let exp = DecouplingExperiment::bilinear(n, cfg.ensemble, cfg.samples, cfg.seed);
                let (lhs, ratio) = bilinear_d4_ratio(&exp, &a)?;
                (lhs, lhs.value / ratio, lhs.samples)
            }
            d => return Err(Error::invalid(format!("d must be 2 or 4, got {d}"))),
        };
        rows.push(RatioRow {
            d: cfg.d,
            n,
            ensemble: cfg.ensemble.label().to_string(),
            lhs: lhs.value,
            rhs,
            ratio: lhs.value / rhs,
            stderr: lhs.stderr / rhs,
            samples,
            seed: cfg.seed,
        });
    }
    let fit = fit_growth_exponent(
        &rows
            .iter()
            .map(|r| (r.n as f64, r.ratio))
            .collect::<Vec<_>>(),
    )?;
    Ok(RatioReport { rows, fit })
}
