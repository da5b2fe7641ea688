//! Double-precision evaluators checked against 256-bit arithmetic and against
//! reference values from an independent arbitrary-precision library.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use expsum_core::expsum::{
    eval_curve_sum, eval_quadruple_sum, eval_s, sample_curve, PhaseFunction,
};
use expsum_core::zeta::{afe_main_sum, zeta_em, zeta_em_oracle, zeta_half};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

struct Hp {
    cc: Consts,
    tau: BigFloat,
}

impl Hp {
    fn new() -> Self {
        let mut cc = Consts::new().unwrap();
        let tau = cc.pi(P, RM).mul(&BigFloat::from_f64(2.0, P), P, RM);
        Self { cc, tau }
    }

    fn f(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn to_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .unwrap()
            .parse()
            .unwrap()
    }

    /// `e(φ)` rounded to double.
    fn e(&mut self, phase: &BigFloat) -> Complex64 {
        let angle = phase.mul(&self.tau, P, RM);
        let c = angle.cos(P, RM, &mut self.cc);
        let s = angle.sin(P, RM, &mut self.cc);
        Complex64::new(self.to_f64(&c), self.to_f64(&s))
    }

    fn e_sum<I: IntoIterator<Item = (Complex64, BigFloat)>>(&mut self, terms: I) -> Complex64 {
        let (mut re, mut im) = (BigFloat::from_f64(0.0, P), BigFloat::from_f64(0.0, P));
        for (a, phase) in terms {
            let angle = phase.mul(&self.tau, P, RM);
            let c = angle.cos(P, RM, &mut self.cc);
            let s = angle.sin(P, RM, &mut self.cc);
            let (ar, ai) = (self.f(a.re), self.f(a.im));
            re = re.add(&ar.mul(&c, P, RM).sub(&ai.mul(&s, P, RM), P, RM), P, RM);
            im = im.add(&ar.mul(&s, P, RM).add(&ai.mul(&c, P, RM), P, RM), P, RM);
        }
        Complex64::new(self.to_f64(&re), self.to_f64(&im))
    }
}

#[test]
fn high_precision_helper_is_sane() {
    let mut hp = Hp::new();
    let z = hp.e(&hp.f(0.25));
    assert!(z.re.abs() < 1e-60 && (z.im - 1.0).abs() < 1e-15);
}

#[test]
fn quadruple_sum_matches_high_precision() {
    let mut hp = Hp::new();
    let n = 8u64;
    let x = [0.3, 0.7, -0.2, 0.9];
    let big_n = hp.f(n as f64).sqrt(P, RM);
    let terms: Vec<(Complex64, BigFloat)> = (1..=n)
        .map(|k| {
            let kf = hp.f(k as f64);
            let sk = kf.sqrt(P, RM);
            let comps = [
                kf.clone(),
                kf.mul(&kf, P, RM),
                big_n.mul(&kf, P, RM).mul(&sk, P, RM),
                big_n.mul(&sk, P, RM),
            ];
            let mut phase = BigFloat::from_f64(0.0, P);
            for (c, xi) in comps.iter().zip(x) {
                phase = phase.add(&c.mul(&hp.f(xi), P, RM), P, RM);
            }
            (Complex64::new(1.0, 0.0), phase)
        })
        .collect();
    let want = hp.e_sum(terms);
    let got = eval_quadruple_sum(n, x, None).unwrap();
    assert!(
        (got.as_complex() - want).norm() < 1e-12,
        "{got:?} vs {want}"
    );
    assert!(got.err < 1e-12);
}

#[test]
fn dyadic_log_sum_matches_high_precision() {
    let mut hp = Hp::new();
    let (t, m) = (1000.0, 100u64);
    let big_m = hp.f(m as f64);
    let terms: Vec<(Complex64, BigFloat)> = (51..=m)
        .map(|k| {
            let ratio = hp.f(k as f64).div(&big_m, P, RM);
            let phase = ratio.ln(P, RM, &mut hp.cc).mul(&hp.f(t), P, RM);
            (Complex64::new(1.0, 0.0), phase)
        })
        .collect();
    let want = hp.e_sum(terms);
    let got = eval_s(t, m, &PhaseFunction::Log).unwrap();
    let rel = (got.as_complex() - want).norm() / want.norm();
    assert!(rel < 1e-10, "relative error {rel}");
}

#[test]
fn parabola_curve_sum_matches_high_precision() {
    let mut hp = Hp::new();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 16;
    let a: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let samples = sample_curve(n, |t| [t, t * t, 0.0, 0.0]);
    let x = [3.7, -11.25, 0.0, 0.0];
    let terms: Vec<(Complex64, BigFloat)> = samples
        .iter()
        .zip(&a)
        .map(|(p, &c)| {
            let phase =
                hp.f(p[0])
                    .mul(&hp.f(x[0]), P, RM)
                    .add(&hp.f(p[1]).mul(&hp.f(x[1]), P, RM), P, RM);
            (c, phase)
        })
        .collect();
    let want = hp.e_sum(terms);
    let got = eval_curve_sum(&a, &samples, x).unwrap();
    assert!(
        (got.as_complex() - want).norm() < 1e-12,
        "{got:?} vs {want}"
    );
}

#[test]
fn afe_main_sum_matches_high_precision() {
    let mut hp = Hp::new();
    let t = 1000.0;
    let count = (t / std::f64::consts::TAU).sqrt().floor() as u64;
    assert_eq!(count, 12);
    let (mut re, mut im) = (BigFloat::from_f64(0.0, P), BigFloat::from_f64(0.0, P));
    for k in 1..=count {
        let kf = hp.f(k as f64);
        let ln = kf.ln(P, RM, &mut hp.cc);
        let modulus = kf.sqrt(P, RM).reciprocal(P, RM);
        let angle = ln.mul(&hp.f(t), P, RM);
        let c = angle.cos(P, RM, &mut hp.cc);
        let s = angle.sin(P, RM, &mut hp.cc);
        re = re.add(&modulus.mul(&c, P, RM), P, RM);
        im = im.add(&modulus.mul(&s, P, RM), P, RM);
    }
    let want = Complex64::new(hp.to_f64(&re), hp.to_f64(&im));
    let got = afe_main_sum(t).unwrap();
    assert!((got.abs() - want.norm()).abs() < 1e-9);
    assert!((got.as_complex() - want).norm() < 1e-9);
}

/// `(t, Re ζ, Im ζ)` on the critical line, computed independently at 30 digits.
const REFERENCE: [(f64, f64, f64); 4] = [
    (0.0, -1.4603545088095868129, 0.0),
    (100.0, 2.6926198856813240905, -0.020386029602598161771),
    (1000.0, 0.35633436719439605507, 0.93199783123299366512),
    (10000.0, -0.33937380263883445757, -0.037091505973206031474),
];

#[test]
fn zeta_matches_reference_within_reported_error() {
    for (t, re, im) in REFERENCE {
        let z = zeta_half(t).unwrap();
        let d = (z.as_complex() - Complex64::new(re, im)).norm();
        assert!(
            d <= z.abs_err + 1e-15,
            "t={t}: diff {d} > err {}",
            z.abs_err
        );
        assert!(z.abs_err < 1e-7, "t={t}: err {}", z.abs_err);
    }
}

#[test]
fn zeta_half_agrees_across_term_counts() {
    let a = zeta_em_oracle(0.0, 10).unwrap();
    let b = zeta_em_oracle(0.0, 50).unwrap();
    assert!((a.re + 1.4603545088).abs() < 1e-10);
    assert!((a.re - b.re).abs() <= a.abs_err + b.abs_err + 1e-15);
}

#[test]
fn zeta_two_calibration() {
    let z = zeta_em(Complex64::new(2.0, 0.0), 12, 8).unwrap();
    let exact = std::f64::consts::PI.powi(2) / 6.0;
    assert!((z.re - exact).abs() <= z.abs_err, "{z:?}");
}
