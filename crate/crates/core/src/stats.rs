//! Compensated accumulation of sample moments.
//!
//! Sums are Neumaier-compensated so that merging per-block partial results in
//! a fixed order gives the same bits no matter how the blocks were scheduled.

use num_traits::Float;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Count, Σx and Σx² of a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    s1: CompensatedSum,
    s2: CompensatedSum,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.s1.add(x);
        self.s2.add(x * x);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.s1.merge(&other.s1);
        self.s2.merge(&other.s2);
    }

    pub fn mean(&self) -> f64 {
        self.s1.value() / self.n as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            return f64::NAN;
        }
        let n = self.n as f64;
        let m = self.mean();
        ((self.s2.value() - n * m * m) / (n - 1.0)).max(0.0)
    }

    pub fn std_error(&self) -> f64 {
        (self.variance() / self.n as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1.0);
        for _ in 0..10_000 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn simple_sample() {
        let mut m = Moments::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            m.push(x);
        }
        assert_eq!(m.mean(), 2.5);
        assert!((m.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert!((m.std_error() - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn merge_matches_single_pass(xs in proptest::collection::vec(-1e3f64..1e3, 2..200), cut in 0usize..200) {
            let cut = cut.min(xs.len());
            let mut whole = Moments::default();
            xs.iter().for_each(|&x| whole.push(x));
            let (mut a, mut b) = (Moments::default(), Moments::default());
            xs[..cut].iter().for_each(|&x| a.push(x));
            xs[cut..].iter().for_each(|&x| b.push(x));
            a.merge(&b);
            prop_assert_eq!(a.n, whole.n);
            prop_assert!((a.mean() - whole.mean()).abs() <= 1e-12 * (1.0 + whole.mean().abs()));
            prop_assert!((a.variance() - whole.variance()).abs() <= 1e-9 * (1.0 + whole.variance()));
        }
    }
}
