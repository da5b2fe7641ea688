//! Mean-value counts against brute-force enumeration and against each other.

use expsum_core::meanvalue::{
    count_vinogradov_j, count_windowed, count_windowed_a6, estimate_a_r_quadrature, kernel_sum_a_r,
    MeanValueSpec,
};

/// Per-side sums `(Σm, Σm², Σm^{3/2}, Σm^{1/2})` of every ordered `r`-tuple.
fn sides(n: u32, r: u32) -> Vec<(u64, u64, f64, f64)> {
    (0..n.pow(r))
        .map(|code| {
            let mut c = code;
            let mut acc = (0u64, 0u64, 0.0, 0.0);
            for _ in 0..r {
                let m = (c % n + 1) as u64;
                c /= n;
                acc.0 += m;
                acc.1 += m * m;
                acc.2 += (m as f64).powf(1.5);
                acc.3 += (m as f64).sqrt();
            }
            acc
        })
        .collect()
}

fn naive_windowed(n: u32, r: u32, w3: f64, w4: f64) -> u128 {
    let s = sides(n, r);
    let mut count = 0u128;
    for a in &s {
        for b in &s {
            if a.0 == b.0 && a.1 == b.1 && (a.2 - b.2).abs() <= w3 && (a.3 - b.3).abs() <= w4 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn windowed_a6_matches_twelve_fold_enumeration() {
    for n in 1..=4u32 {
        let w = (n as f64).powf(-0.5);
        for (w3, w4) in [(w, w), (f64::INFINITY, f64::INFINITY), (0.05, 0.01)] {
            let fast = count_windowed_a6(n, w3, w4).unwrap().count.unwrap();
            assert_eq!(
                fast,
                naive_windowed(n, 6, w3, w4),
                "N={n} windows=({w3},{w4})"
            );
        }
    }
}

#[test]
fn windowed_with_infinite_windows_is_vinogradov() {
    for n in 2..=6u32 {
        let w = count_windowed(n, 3, f64::INFINITY, f64::INFINITY)
            .unwrap()
            .count;
        assert_eq!(w, count_vinogradov_j(n, 3).unwrap().count, "N={n}");
    }
}

#[test]
fn windowed_a6_exceeds_diagonal() {
    for n in [4u32, 8, 12] {
        let w = (n as f64).powf(-0.5);
        let c = count_windowed_a6(n, w, w).unwrap().value;
        assert!(c >= (n as f64).powi(6), "N={n}: {c}");
    }
}

#[test]
fn vinogradov_small_values() {
    assert_eq!(count_vinogradov_j(2, 3).unwrap().count, Some(20));
    for n in 1..=6u32 {
        let want = naive_windowed(n, 3, f64::INFINITY, f64::INFINITY);
        assert_eq!(count_vinogradov_j(n, 3).unwrap().count, Some(want), "N={n}");
        let n2 = n as u128;
        assert_eq!(
            count_vinogradov_j(n, 2).unwrap().count,
            Some(2 * n2 * n2 - n2)
        );
    }
    assert_eq!(count_vinogradov_j(16, 3).unwrap().count, Some(27304));
}

#[test]
fn kernel_first_moment_is_four_n() {
    for n in [2u32, 3, 10, 100, 1000, 10_000] {
        let v = kernel_sum_a_r(&MeanValueSpec::new(n, 1)).unwrap().value;
        let want = 4.0 * n as f64;
        assert!((v / want - 1.0).abs() < 1e-9, "N={n}: {v}");
    }
}

#[test]
fn kernel_small_values() {
    assert_eq!(
        kernel_sum_a_r(&MeanValueSpec::new(2, 6))
            .unwrap()
            .value
            .round(),
        3696.0
    );
    assert_eq!(
        kernel_sum_a_r(&MeanValueSpec::new(3, 6))
            .unwrap()
            .value
            .round(),
        140676.0
    );
}

#[test]
fn kernel_and_quadrature_agree() {
    for (n, seed) in [(4u32, 1u64), (6, 2)] {
        let spec = MeanValueSpec::new(n, 6);
        let exact = kernel_sum_a_r(&spec).unwrap().value;
        let est = estimate_a_r_quadrature(&spec, 2_000_000, seed).unwrap();
        let z = (est.value - exact) / est.stderr;
        assert!(
            z.abs() < 3.0,
            "N={n}: kernel {exact}, estimate {} ± {}",
            est.value,
            est.stderr
        );
    }
}
