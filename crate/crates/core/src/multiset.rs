//! Enumeration of non-decreasing tuples (multisets) over `{1..=n}` with their
//! ordering multiplicities.

const FACTORIALS: [u64; 13] = [
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
];

/// Number of distinct orderings of a sorted tuple: `r! / ∏ c_i!`.
pub(crate) fn multinomial(sorted: &[u32]) -> u64 {
    let mut w = FACTORIALS[sorted.len()];
    let mut run = 1usize;
    for i in 1..=sorted.len() {
        if i < sorted.len() && sorted[i] == sorted[i - 1] {
            run += 1;
        } else {
            w /= FACTORIALS[run];
            run = 1;
        }
    }
    w
}

/// Calls `f(tuple, weight)` for every non-decreasing `r`-tuple over `{1..=n}`.
pub(crate) fn for_each_multiset(n: u32, r: usize, mut f: impl FnMut(&[u32], u64)) {
    assert!(r < FACTORIALS.len());
    let mut buf = vec![0u32; r];
    fn rec(buf: &mut [u32], pos: usize, lo: u32, n: u32, f: &mut dyn FnMut(&[u32], u64)) {
        if pos == buf.len() {
            f(buf, multinomial(buf));
            return;
        }
        for v in lo..=n {
            buf[pos] = v;
            rec(buf, pos + 1, v, n, f);
        }
    }
    if r == 0 {
        f(&[], 1);
    } else {
        rec(&mut buf, 0, 1, n, &mut f);
    }
}

/// Like [`for_each_multiset`] but restricted to tuples with `Σ = sum`.
pub(crate) fn for_each_multiset_with_sum(
    n: u32,
    r: usize,
    sum: u32,
    mut f: impl FnMut(&[u32], u64),
) {
    assert!(r >= 1 && r < FACTORIALS.len());
    let mut buf = vec![0u32; r];
    fn rec(buf: &mut [u32], pos: usize, lo: u32, n: u32, rem: u32, f: &mut dyn FnMut(&[u32], u64)) {
        let slots = (buf.len() - pos) as u32;
        if slots == 1 {
            if rem >= lo && rem <= n {
                buf[pos] = rem;
                f(buf, multinomial(buf));
            }
            return;
        }
        // Every remaining slot is at least v, and at most n.
        let mut v = lo;
        while v <= n && v * slots <= rem {
            if rem - v <= (slots - 1) * n {
                buf[pos] = v;
                rec(buf, pos + 1, v, n, rem - v, f);
            }
            v += 1;
        }
    }
    rec(&mut buf, 0, 1, n, sum, &mut f);
}
