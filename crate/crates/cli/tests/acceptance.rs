//! Acceptance gate: one PASS/FAIL line per criterion. Exits non-zero if any fail.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use expsum_core::decouple::{
    coefficients, parabola_l6_lhs, ratio_scan, Ensemble, L6Mode, ScanConfig,
};
use expsum_core::meanvalue::{
    count_vinogradov_j, count_windowed_a6, estimate_a_r_quadrature, fit_growth_exponent,
    kernel_sum_a_r, MeanValueSpec,
};
use expsum_core::pairs::{apply_word, zeta_exponent, ExponentPair};
use expsum_core::planner::{verify_envelope_coverage, PieceTag};
use expsum_core::rational::rat;
use expsum_core::zeta::{afe_consistency, bracket_first_zero, growth_scan, zeta_em};
use num_complex::Complex64;

type Check = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

const fn criterion(
    id: &'static str,
    title: &'static str,
    secs: u64,
    check: fn() -> Check,
) -> Criterion {
    Criterion {
        id,
        title,
        budget: Duration::from_secs(secs),
        check,
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ac1_pairs() -> Check {
    let p = apply_word("ABAAB", &ExponentPair::trivial()).map_err(|e| e.to_string())?;
    ensure(
        p.k == rat(1, 9) && p.l == rat(13, 18),
        format!("ABAAB(0,1) = ({}, {})", p.k, p.l),
    )?;
    let theta = zeta_exponent(&ExponentPair::new_pair()).theta;
    ensure(theta == rat(13, 84), format!("theta = {theta}"))?;
    Ok(format!(
        "ABAAB(0,1) = ({}, {}), theta(13/84, 55/84) = {theta}",
        p.k, p.l
    ))
}

fn ac2_coverage() -> Check {
    let rep = verify_envelope_coverage(1000);
    let hux = rep.crossover(PieceTag::Huxley).cloned();
    let pair = rep.crossover(PieceTag::ExponentPair).cloned();
    ensure(
        hux == Some(rat(332, 819)),
        format!("huxley crossover {hux:?}"),
    )?;
    ensure(
        pair == Some(rat(11, 28)),
        format!("pair crossover {pair:?}"),
    )?;
    ensure(
        rep.union_covers && rep.failures.is_empty(),
        format!("{} grid failures", rep.failures.len()),
    )?;
    ensure(
        rep.middle_at_edge == rat(89, 252) && rep.target_at_edge == rat(90, 252),
        format!(
            "edge values {} vs {}",
            rep.middle_at_edge, rep.target_at_edge
        ),
    )?;
    ensure(rep.middle_at_edge <= rep.target_at_edge, "edge inequality")?;
    Ok(format!(
        "crossovers 332/819 and 11/28, {} rationals checked, 89/252 <= 90/252",
        rep.grid_points
    ))
}

fn windowed(n: u32) -> Result<f64, String> {
    let w = (n as f64).powf(-0.5);
    count_windowed_a6(n, w, w)
        .map(|c| c.value)
        .map_err(|e| e.to_string())
}

fn ac3_windowed_growth() -> Check {
    for n in [4u32, 8, 12] {
        let c = windowed(n)?;
        ensure(c >= (n as f64).powi(6), format!("A6({n}) = {c} < N^6"))?;
    }
    let mut pts = Vec::new();
    for n in [8u32, 12, 16, 24, 32] {
        pts.push((n as f64, windowed(n)?));
    }
    let fit = fit_growth_exponent(&pts).map_err(|e| e.to_string())?;
    let msg = format!(
        "diagonal bound holds; slope {:.3} ± {:.3} (want [5.8, 6.8])",
        fit.slope, fit.stderr
    );
    ensure((5.8..=6.8).contains(&fit.slope), msg.clone())?;
    Ok(msg)
}

/// Naive `J_{3,2}(N)` over all ordered sextuples.
fn naive_j3(n: u64) -> u128 {
    let mut keys = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                keys.push((a + b + c, a * a + b * b + c * c));
            }
        }
    }
    let mut count = 0u128;
    for x in &keys {
        for y in &keys {
            if x == y {
                count += 1;
            }
        }
    }
    count
}

fn agree(n: u32, samples: u64, seed: u64) -> Result<(f64, f64), String> {
    let spec = MeanValueSpec::new(n, 6);
    let exact = kernel_sum_a_r(&spec).map_err(|e| e.to_string())?.value;
    let est = estimate_a_r_quadrature(&spec, samples, seed).map_err(|e| e.to_string())?;
    let z = (est.value - exact) / est.stderr;
    ensure(
        z.abs() <= 3.0,
        format!(
            "N={n}: kernel {exact} vs quadrature {} ± {}",
            est.value, est.stderr
        ),
    )?;
    Ok((exact, z))
}

fn ac4_oracles() -> Check {
    let mut ns: Vec<u32> = (2..=200).collect();
    ns.extend([500, 1000, 2500, 5000, 10_000]);
    for n in ns {
        let v = kernel_sum_a_r(&MeanValueSpec::new(n, 1))
            .map_err(|e| e.to_string())?
            .value;
        let rel = (v / (4.0 * n as f64) - 1.0).abs();
        ensure(rel <= 1e-9, format!("A1({n}) = {v}, relative error {rel}"))?;
    }
    let mut zs = Vec::new();
    for (n, seed) in [(4, 11), (6, 12)] {
        zs.push(agree(n, 2_000_000, seed)?.1);
    }
    let j2 = count_vinogradov_j(2, 3).map_err(|e| e.to_string())?.count;
    ensure(j2 == Some(20), format!("J(2) = {j2:?}"))?;
    for n in 1..=6u32 {
        let j = count_vinogradov_j(n, 3).map_err(|e| e.to_string())?.count;
        ensure(j == Some(naive_j3(n as u64)), format!("J({n}) = {j:?}"))?;
    }
    Ok(format!(
        "A1 = 4N to 1e-9 for N <= 10^4; kernel vs quadrature z = {:.2}, {:.2}; J(2) = 20; J(N<=6) naive",
        zs[0], zs[1]
    ))
}

fn ac5_scaling() -> Check {
    let mut pts = Vec::new();
    let mut zs = Vec::new();
    for (n, seed) in [(4u32, 21u64), (6, 22), (8, 23)] {
        let (exact, z) = agree(n, 2_000_000, seed)?;
        zs.push(format!("{z:.2}"));
        pts.push((n as f64, exact * (n as f64).powi(3)));
    }
    let fit = fit_growth_exponent(&pts).map_err(|e| e.to_string())?;
    let msg = format!(
        "kernel/quadrature agree (z = {}); slope of A6*N^3 {:.3} (want [8.3, 9.7])",
        zs.join(", "),
        fit.slope
    );
    ensure((8.3..=9.7).contains(&fit.slope), msg.clone())?;
    Ok(msg)
}

fn ac6_decoupling() -> Check {
    for n in [16usize, 32, 64, 128] {
        let a = coefficients(Ensemble::Ones, n, 0);
        let lhs = parabola_l6_lhs(&a, L6Mode::Exact, 0)
            .map_err(|e| e.to_string())?
            .value;
        let j = count_vinogradov_j(n as u32, 3)
            .map_err(|e| e.to_string())?
            .value;
        ensure(
            (lhs.powi(6) / j - 1.0).abs() < 1e-12,
            format!("N={n}: lhs^6 = {} vs J = {j}", lhs.powi(6)),
        )?;
    }
    let exact = ScanConfig {
        d: 2,
        ensemble: Ensemble::Ones,
        samples: 0,
        seed: 0,
        exact: true,
    };
    let parabola = ratio_scan(&[16, 32, 64, 128], &exact).map_err(|e| e.to_string())?;
    ensure(
        (0.0..=0.2).contains(&parabola.fit.slope),
        format!("parabola slope {}", parabola.fit.slope),
    )?;
    let bil = ScanConfig {
        d: 4,
        ensemble: Ensemble::Ones,
        samples: 1 << 20,
        seed: 0,
        exact: false,
    };
    let d4 = ratio_scan(&[8, 16, 32], &bil).map_err(|e| e.to_string())?;
    ensure(
        d4.fit.slope <= 0.25,
        format!("bilinear slope {}", d4.fit.slope),
    )?;
    Ok(format!(
        "lhs^6 = J exactly; parabola slope {:.3}; bilinear slope {:.3} (exploratory)",
        parabola.fit.slope, d4.fit.slope
    ))
}

fn expsum_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_expsum"))
        .args(args)
        .env_remove("EXPSUM_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(
        out.status.success(),
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)),
    )?;
    Ok(out.stdout)
}

fn ac7_zeta() -> Check {
    let z = zeta_em(Complex64::new(2.0, 0.0), 20, 8).map_err(|e| e.to_string())?;
    let target = std::f64::consts::PI.powi(2) / 6.0;
    ensure(
        (z.re - target).abs() <= z.abs_err && z.im.abs() <= z.abs_err,
        format!("zeta(2) = {z:?}"),
    )?;
    let (a, b) = bracket_first_zero(10.0, 20.0, 0.01, 1e-6).map_err(|e| e.to_string())?;
    ensure(14.12 <= a && b <= 14.15, format!("bracket [{a}, {b}]"))?;
    let mut violations = Vec::new();
    for i in 0..200 {
        let t = 10.0 * 1000f64.powf(i as f64 / 199.0);
        let c = afe_consistency(t, 2.0).map_err(|e| e.to_string())?;
        if !c.holds {
            violations.push(t);
        }
    }
    ensure(
        violations.is_empty(),
        format!("one-sided bound fails at {violations:?}"),
    )?;
    let s1 = growth_scan(10.0, 1e4, 200, 7).map_err(|e| e.to_string())?;
    let s2 = growth_scan(10.0, 1e4, 200, 7).map_err(|e| e.to_string())?;
    ensure(s1 == s2, "growth scan differs between runs")?;
    let args = [
        "zeta", "scan", "--t-min", "10", "--t-max", "1e4", "--points", "200", "--seed", "7",
        "--format", "csv",
    ];
    ensure(
        expsum_cli(&args)? == expsum_cli(&args)?,
        "scan CSV differs between runs",
    )?;
    Ok(format!(
        "zeta(2) within {:.1e}; zero in [{a:.6}, {b:.6}]; one-sided bound at 200 heights; scan CSV reproducible",
        z.abs_err
    ))
}

fn ac8_determinism() -> Check {
    let runs: [&[&str]; 9] = [
        &[
            "expsum",
            "quadruple",
            "--n",
            "5000",
            "--x",
            "0.1,0.2,0.3,0.4",
        ],
        &["meanvalue", "windowed", "--n", "4,6,8", "--format", "csv"],
        &["meanvalue", "kernel", "--n", "4,5,6", "--format", "json"],
        &[
            "meanvalue",
            "quadrature",
            "--n",
            "4",
            "--samples",
            "200000",
            "--seed",
            "5",
        ],
        &[
            "decouple",
            "scan",
            "--d",
            "2",
            "--ns",
            "8,12,16",
            "--ensemble",
            "random-phase",
            "--samples",
            "65536",
            "--seed",
            "3",
        ],
        &[
            "decouple",
            "scan",
            "--d",
            "4",
            "--ns",
            "8,12,16",
            "--samples",
            "16384",
            "--seed",
            "4",
            "--format",
            "csv",
        ],
        &["pairs", "search", "--max-len", "8", "--format", "json"],
        &[
            "planner",
            "envelope",
            "--denominator-bound",
            "60",
            "--format",
            "csv",
        ],
        &[
            "zeta", "scan", "--points", "100", "--seed", "11", "--format", "csv",
        ],
    ];
    for args in runs {
        let first = expsum_cli(&[args, &["--threads", "1"]].concat())?;
        let again = expsum_cli(&[args, &["--threads", "1"]].concat())?;
        let wide = expsum_cli(&[args, &["--threads", "4"]].concat())?;
        ensure(first == again, format!("{args:?} differs between runs"))?;
        ensure(
            first == wide,
            format!("{args:?} differs between 1 and 4 threads"),
        )?;
    }
    Ok(format!(
        "{} commands byte-identical across reruns and thread counts",
        runs.len()
    ))
}

fn main() -> ExitCode {
    let criteria = [
        criterion("AC1", "exponent-pair anchor", 1, ac1_pairs),
        criterion("AC2", "exact envelope coverage", 10, ac2_coverage),
        criterion("AC3", "windowed A6 growth", 600, ac3_windowed_growth),
        criterion("AC4", "mean-value oracle equivalence", 300, ac4_oracles),
        criterion("AC5", "scaled A6 growth", 600, ac5_scaling),
        criterion("AC6", "decoupling probes", 900, ac6_decoupling),
        criterion("AC7", "zeta checks", 300, ac7_zeta),
        criterion("AC8", "CLI determinism", 600, ac8_determinism),
    ];
    let mut failed = 0;
    let total = criteria.len();
    for Criterion {
        id,
        title,
        budget,
        check,
    } in criteria
    {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > budget {
            outcome = Err(format!("took {elapsed:.1?}, budget {budget:?}"));
        }
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{id} {status} {title}: {detail} [{:.2}s]",
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
