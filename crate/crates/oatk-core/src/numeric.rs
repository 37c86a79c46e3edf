//! Small numeric helpers.

/// Exact running sum of f64 terms, kept as a Shewchuk expansion of
/// non-overlapping components. The rounded total is the correctly rounded
/// sum of the inputs, so it does not depend on the order terms arrive in.
/// Used where a contract promises bit-identical output under permutation
/// of the inputs (per-pixel detector sums in delay-and-sum).
#[derive(Clone, Debug, Default)]
pub struct ExactSum {
    parts: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self { parts: Vec::with_capacity(4) }
    }

    pub fn add(&mut self, value: f64) {
        // Grow-expansion: thread `value` through the existing components with
        // two_sum, keeping every rounding residue.
        let mut q = value;
        let mut out = 0;
        for i in 0..self.parts.len() {
            let (s, err) = two_sum(q, self.parts[i]);
            q = s;
            if err != 0.0 {
                self.parts[out] = err;
                out += 1;
            }
        }
        self.parts.truncate(out);
        if q != 0.0 {
            self.parts.push(q);
        }
    }

    /// Correctly rounded value of the accumulated sum.
    pub fn value(&self) -> f64 {
        // Components are nonoverlapping and ordered by increasing magnitude;
        // summing upward is exact until the final rounding.
        self.parts.iter().sum()
    }
}

/// Knuth two_sum: s = fl(a+b) and the exact rounding error.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Linear interpolation read of `data` at fractional index `u`.
/// Returns 0 when either of the two enclosing samples falls outside.
#[inline]
pub fn lerp_at(data: &[f64], u: f64) -> f64 {
    let i0 = u.floor();
    if !(i0 >= 0.0) || data.len() < 2 || i0 as usize + 1 > data.len() - 1 {
        return 0.0;
    }
    let lo = i0 as usize;
    let w = u - i0;
    data[lo] * (1.0 - w) + data[lo + 1] * w
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn exact_sum_is_permutation_invariant() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        let mut terms: Vec<f64> = (0..64)
            .map(|_| (rng.random::<f64>() - 0.5) * 10f64.powi(rng.random_range(-8..8)))
            .collect();
        let mut fwd = ExactSum::new();
        for &t in &terms {
            fwd.add(t);
        }
        terms.reverse();
        let mut rev = ExactSum::new();
        for &t in &terms {
            rev.add(t);
        }
        assert_eq!(fwd.value().to_bits(), rev.value().to_bits());
    }

    #[test]
    fn exact_sum_recovers_cancellation() {
        let mut s = ExactSum::new();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn lerp_reads_and_window() {
        let d = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(lerp_at(&d, 1.5), 1.5);
        assert_eq!(lerp_at(&d, 0.0), 0.0);
        assert_eq!(lerp_at(&d, -0.25), 0.0);
        assert_eq!(lerp_at(&d, 3.0), 0.0); // needs sample 4
        assert!((lerp_at(&d, 2.999) - (2.0 * 0.001 + 3.0 * 0.999)).abs() < 1e-12);
    }
}
