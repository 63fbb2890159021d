//! Correctly rounded summation.
//!
//! Every path in this crate is a sequence of partial sums. Accumulating them
//! with [`ExactSum`] makes each partial sum the correctly rounded value of the
//! exact sum, so totals do not depend on summation order. In particular, a
//! permutation of the auxiliary increments sums to exactly the same `f64` as
//! the original order, and an exactly antisymmetric multiset of quantiles
//! sums to exactly zero.

use alloc::vec::Vec;

/// Shewchuk-style accumulator holding the running sum as non-overlapping
/// partials of increasing magnitude. Inputs must be finite.
#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let mut x = value;
        let mut kept = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                core::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }

    /// The exact sum rounded to nearest, ties to even.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Half-way case: the remaining partials decide the rounding direction.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

impl Extend<f64> for ExactSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Correctly rounded sum of `values`.
pub fn exact_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = ExactSum::new();
    acc.extend(values);
    acc.value()
}

/// `[0, s_1, ..., s_n]` where `s_i` is the correctly rounded sum of the first
/// `i` values.
pub fn prefix_sums<I: IntoIterator<Item = f64>>(values: I) -> Vec<f64> {
    let iter = values.into_iter();
    let mut out = Vec::with_capacity(iter.size_hint().0 + 1);
    out.push(0.0);
    let mut acc = ExactSum::new();
    for v in iter {
        acc.add(v);
        out.push(acc.value());
    }
    out
}
