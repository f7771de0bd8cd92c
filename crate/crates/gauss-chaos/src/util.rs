//! Small numeric helpers used across modules.

/// Kahan–Babuška compensated accumulator. The compensation term retains
/// the low-order bits a plain `+=` would discard, which matters when
/// millions of diagram values of mixed sign are folded into one sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `n!` as an exact integer; panics on overflow, callers cap `n` first.
pub(crate) fn factorial_u128(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// `(2m-1)!! = (2m)! / (2^m m!)`, the number of pairings of `2m` points.
pub(crate) fn double_factorial_odd(m: usize) -> u128 {
    (0..m as u128).map(|j| 2 * j + 1).product()
}

/// Distinct rearrangements of a sorted multiset with the given run lengths:
/// `len! / Π run_j!`.
pub(crate) fn multiset_permutations(runs: &[usize]) -> u128 {
    let len: usize = runs.iter().sum();
    let mut num = factorial_u128(len);
    for &r in runs {
        num /= factorial_u128(r);
    }
    num
}
