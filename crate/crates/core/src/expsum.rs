//! Direct evaluation of the exponential sums used throughout the crate.
//!
//! All evaluators write `e(z) = exp(2πiz)`, reduce each phase modulo 1 before
//! calling `sin_cos`, and accumulate with [`ComplexSum`]. The `err` field of the
//! returned [`ComplexValue`] bounds the summation and per-term evaluation error
//! given the reduced phases; it does not cover the rounding of the irrational
//! frequencies `n^{3/2}`, `n^{1/2}` themselves.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::rational::{to_f64, Rational};
use crate::summation::{chunked_complex_sum, ComplexSum};

/// Largest `N` accepted by the double-precision evaluators.
pub const MAX_TERMS: u64 = 1 << 26;

/// Per-term evaluation error of `a·e(φ)` relative to `|a|`, in units of ε.
const TERM_ULPS: f64 = 4.0;

/// Complex result with an absolute rounding-error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    /// Upper bound on the accumulated rounding error (absolute, ≥ 0).
    pub err: f64,
}

impl ComplexValue {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        Self { re, im, err }
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im, self.err)
    }

    fn from_sum(sum: &ComplexSum) -> Self {
        let z = sum.value();
        let err = sum.error_bound() + TERM_ULPS * f64::EPSILON * sum.abs_mass();
        Self::new(z.re, z.im, err)
    }
}

/// Distance of `x` to the nearest integer, signed, in `[-1/2, 1/2]`.
#[inline]
pub(crate) fn reduce(x: f64) -> f64 {
    x - x.round()
}

/// `(a·b) mod 1`, using the exact product residual so that large products keep
/// their fractional part.
#[inline]
pub(crate) fn frac_product(a: f64, b: f64) -> f64 {
    let p = a * b;
    let lo = a.mul_add(b, -p);
    reduce(reduce(p) + reduce(lo))
}

/// `e(z) = exp(2πiz)`.
#[inline]
pub fn e(z: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * reduce(z)).sin_cos();
    Complex64::new(c, s)
}

fn check_x(x: &[f64]) -> Result<()> {
    for (i, &v) in x.iter().enumerate() {
        ensure_finite(&format!("x[{}]", i + 1), v)?;
    }
    Ok(())
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("N must be >= 1"));
    }
    if n > MAX_TERMS {
        return Err(Error::guard(
            "expsum.max_terms",
            format!("N = {n} exceeds the double-precision cap {MAX_TERMS}"),
        ));
    }
    Ok(())
}

/// `Σ_{1≤n≤N} a_n e(n x₁ + n² x₂ + N^{1/2} n^{3/2} x₃ + N^{1/2} n^{1/2} x₄)`,
/// with `a_n = 1` when `coeffs` is `None`.
pub fn eval_quadruple_sum(
    n: u64,
    x: [f64; 4],
    coeffs: Option<&[Complex64]>,
) -> Result<ComplexValue> {
    check_n(n)?;
    check_x(&x)?;
    if let Some(a) = coeffs {
        if a.len() as u64 != n {
            return Err(Error::LengthMismatch {
                expected: n as usize,
                got: a.len(),
            });
        }
    }
    let root_n = (n as f64).sqrt();
    let sum = chunked_complex_sum(n as usize, |i| {
        let m = (i + 1) as f64;
        let root_m = m.sqrt();
        let phase = frac_product(m, x[0])
            + frac_product(m * m, x[1])
            + frac_product(root_n * m * root_m, x[2])
            + frac_product(root_n * root_m, x[3]);
        let a = coeffs.map_or(Complex64::new(1.0, 0.0), |c| c[i]);
        a * e(phase)
    });
    Ok(ComplexValue::from_sum(&sum))
}

/// Phase function `F` in `f(m) = T·F(m/M)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseFunction {
    /// `F(u) = log u`; ties the sum to `Σ m^{2πiT}`.
    Log,
    /// `F(u) = u^exponent`.
    Monomial(Rational),
}

/// `S = Σ_{M/2 < m ≤ M} e(T·F(m/M))`, with `T` measured in cycles.
pub fn eval_s(t: f64, m: u64, f: &PhaseFunction) -> Result<ComplexValue> {
    ensure_finite("T", t)?;
    if m < 2 {
        return Err(Error::invalid(format!("M must be >= 2, got {m}")));
    }
    check_n(m)?;
    let first = m / 2 + 1;
    let count = (m - first + 1) as usize;
    let big_m = m as f64;
    let exponent = match f {
        PhaseFunction::Log => None,
        PhaseFunction::Monomial(p) => Some(to_f64(p)),
    };
    let sum = chunked_complex_sum(count, |i| {
        let u = (first + i as u64) as f64 / big_m;
        let shape = match exponent {
            None => u.ln(),
            Some(p) => u.powf(p),
        };
        e(frac_product(t, shape))
    });
    Ok(ComplexValue::from_sum(&sum))
}

/// `Σ_n a_n e(x·Φ_n)` for precomputed curve samples `Φ_n ∈ ℝ⁴`.
pub fn eval_curve_sum(a: &[Complex64], samples: &[[f64; 4]], x: [f64; 4]) -> Result<ComplexValue> {
    if a.len() != samples.len() {
        return Err(Error::LengthMismatch {
            expected: samples.len(),
            got: a.len(),
        });
    }
    check_x(&x)?;
    let sum = chunked_complex_sum(a.len(), |i| {
        let p = &samples[i];
        let phase = frac_product(p[0], x[0])
            + frac_product(p[1], x[1])
            + frac_product(p[2], x[2])
            + frac_product(p[3], x[3]);
        a[i] * e(phase)
    });
    Ok(ComplexValue::from_sum(&sum))
}

/// Samples `Φ(n/N)` for `n = 1..=N` of a curve `Φ: [0,1] → ℝ⁴`.
pub fn sample_curve(n: usize, phi: impl Fn(f64) -> [f64; 4]) -> Vec<[f64; 4]> {
    (1..=n).map(|k| phi(k as f64 / n as f64)).collect()
}

/// The phase families handled by this module, bundled with their size parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSpec {
    /// `(n, n², N^{1/2} n^{3/2}, N^{1/2} n^{1/2})`, `1 ≤ n ≤ N`.
    Quadruple { n: u64 },
    /// `T log(m/M)` over `M/2 < m ≤ M`.
    Log { t: f64, m: u64 },
    /// `T (m/M)^exponent` over `M/2 < m ≤ M`.
    Monomial { t: f64, m: u64, exponent: Rational },
    /// Arbitrary curve samples, unit coefficients.
    CurvePoints(Vec<[f64; 4]>),
}

impl PhaseSpec {
    /// Evaluates the unit-coefficient sum at frequency `x`. `Log` and `Monomial`
    /// carry their own frequency `T` and take an empty `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<ComplexValue> {
        let four = |x: &[f64]| -> Result<[f64; 4]> {
            x.try_into().map_err(|_| Error::LengthMismatch {
                expected: 4,
                got: x.len(),
            })
        };
        match self {
            PhaseSpec::Quadruple { n } => eval_quadruple_sum(*n, four(x)?, None),
            PhaseSpec::Log { t, m } => {
                expect_empty(x)?;
                eval_s(*t, *m, &PhaseFunction::Log)
            }
            PhaseSpec::Monomial { t, m, exponent } => {
                expect_empty(x)?;
                eval_s(*t, *m, &PhaseFunction::Monomial(exponent.clone()))
            }
            PhaseSpec::CurvePoints(samples) => {
                let ones = vec![Complex64::new(1.0, 0.0); samples.len()];
                eval_curve_sum(&ones, samples, four(x)?)
            }
        }
    }
}

fn expect_empty(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected: 0,
            got: x.len(),
        })
    }
}
