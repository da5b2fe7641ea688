//! Compensated (Neumaier) accumulation with a running error bound, and a
//! fixed-shape parallel reduction whose result does not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

/// Chunk size used by every parallel reduction in the crate. Results are
/// bit-reproducible because the chunk boundaries and the merge order are fixed.
pub const CHUNK: usize = 4096;

/// Neumaier-compensated sum of `f64` terms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    /// Folds another partial sum in; the absolute mass is carried over unchanged.
    pub fn merge(&mut self, other: &NeumaierSum) {
        let abs = self.abs + other.abs;
        self.add(other.sum);
        self.add(other.comp);
        self.abs = abs;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Sum of |terms| seen so far.
    pub fn abs_mass(&self) -> f64 {
        self.abs
    }

    /// Bound on the summation error: `2·ε·Σ|terms|`.
    pub fn error_bound(&self) -> f64 {
        2.0 * f64::EPSILON * self.abs
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated complex sum; tracks Σ|z| for the error bound.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
    modulus: f64,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.modulus += z.norm();
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
        self.modulus += other.modulus;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    /// Σ|terms|.
    pub fn abs_mass(&self) -> f64 {
        self.modulus
    }

    /// Bound on the accumulated rounding error of the complex sum.
    pub fn error_bound(&self) -> f64 {
        self.re.error_bound().hypot(self.im.error_bound())
    }
}

/// Sums `term(i)` for `i in 0..n` in fixed chunks of [`CHUNK`], merging the chunk
/// partials left to right.
pub fn chunked_complex_sum<F>(n: usize, term: F) -> ComplexSum
where
    F: Fn(usize) -> Complex64 + Sync,
{
    if n <= CHUNK {
        let mut acc = ComplexSum::new();
        (0..n).for_each(|i| acc.add(term(i)));
        return acc;
    }
    let partials: Vec<ComplexSum> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexSum::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                acc.add(term(i));
            }
            acc
        })
        .collect();
    let mut total = ComplexSum::new();
    for p in &partials {
        total.merge(p);
    }
    total
}

/// Mean and sample variance accumulator (Welford), mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn chunked_sum_is_thread_count_invariant() {
        let term = |i: usize| Complex64::from_polar(1.0 / (1.0 + i as f64), i as f64 * 0.37);
        let n = 3 * CHUNK + 17;
        let a = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| chunked_complex_sum(n, term));
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| chunked_complex_sum(n, term));
        assert_eq!(a.value().re.to_bits(), b.value().re.to_bits());
        assert_eq!(a.value().im.to_bits(), b.value().im.to_bits());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 113) as f64).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..300].iter().for_each(|&x| a.push(x));
        xs[300..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - whole.mean).abs() < 1e-12);
        assert!((a.variance() - whole.variance()).abs() < 1e-9);
    }
}
