//! High-accuracy logarithms of huge factorial ratios.
//!
//! Quantities such as `f^{λ/μ}` or `A_{λ/μ}` for shapes with millions of cells
//! are products and quotients of factorials, superfactorials and hook
//! products. [`FactoredRatio`] records those factors symbolically, reduces them
//! to one exact exponent per prime (Legendre's formula for factorials, a
//! smallest-prime-factor table for everything else), and only then takes
//! `Σ e_p ln p` in double-double arithmetic. Cancellation between numerator
//! and denominator therefore happens in exact integers.

use std::ops::{Add, Neg, Sub};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::partitions::Partition;

/// Relative error bound of `f64::ln`, taken as one ulp.
const LN_REL_ERROR: f64 = f64::EPSILON;

/// A real number in natural-log scale together with an absolute error budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogReal {
    pub value: f64,
    pub abs_error_budget: f64,
}

impl LogReal {
    pub fn new(value: f64, abs_error_budget: f64) -> Self {
        LogReal { value, abs_error_budget }
    }

    /// `ln 1`.
    pub fn zero() -> Self {
        LogReal::new(0.0, 0.0)
    }

    /// `ln x` for a positive integer, with a budget covering the conversion.
    pub fn of_biguint(x: &BigUint) -> Self {
        let v = crate::exact_count::ln_biguint(x);
        LogReal::new(v, 4.0 * f64::EPSILON * v.abs().max(1.0))
    }

    /// True if `x` lies within the error budget of the value.
    pub fn within(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.abs_error_budget
    }

    fn rounded(value: f64, budget: f64) -> Self {
        LogReal::new(value, budget + 0.5 * ulp(value))
    }
}

impl Add for LogReal {
    type Output = LogReal;
    fn add(self, rhs: LogReal) -> LogReal {
        LogReal::rounded(self.value + rhs.value, self.abs_error_budget + rhs.abs_error_budget)
    }
}

impl Sub for LogReal {
    type Output = LogReal;
    fn sub(self, rhs: LogReal) -> LogReal {
        LogReal::rounded(self.value - rhs.value, self.abs_error_budget + rhs.abs_error_budget)
    }
}

impl Neg for LogReal {
    type Output = LogReal;
    fn neg(self) -> LogReal {
        LogReal::new(-self.value, self.abs_error_budget)
    }
}

pub fn ulp(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return f64::MIN_POSITIVE;
    }
    let bits = x.abs().to_bits();
    f64::from_bits(bits + 1) - x.abs()
}

/// Double-double accumulator (error-free transformations on every step).
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = two_sum(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    /// Adds `a·b` exactly (the product's rounding error is carried along).
    pub fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        self.add(e);
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Primes up to `limit` by a plain sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_prime(limit, |p| out.push(p));
    out
}

/// Calls `f` on every prime `≤ limit` in increasing order (segmented sieve, `O(√limit)` memory).
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    if limit < 2 {
        return;
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i as usize] {
            base.push(i);
            let mut m = i * i;
            while m <= root {
                small[m as usize] = false;
                m += i;
            }
        }
    }
    const SEGMENT: u64 = 1 << 18;
    let mut seg = vec![true; SEGMENT as usize];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT - 1).min(limit);
        seg.fill(true);
        for &p in &base {
            if p * p > high {
                break;
            }
            let mut m = (p * p).max(low.div_ceil(p) * p);
            while m <= high {
                seg[(m - low) as usize] = false;
                m += p;
            }
        }
        for (i, &is_prime) in seg[..(high - low + 1) as usize].iter().enumerate() {
            if is_prime {
                f(low + i as u64);
            }
        }
        low = high + 1;
    }
}

/// Smallest prime factor of every integer below `len` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(len: usize) -> Vec<u32> {
    let mut spf = vec![0u32; len];
    for i in 2..len {
        if spf[i] == 0 {
            let mut m = i;
            while m < len {
                if spf[m] == 0 {
                    spf[m] = i as u32;
                }
                m += i;
            }
        }
    }
    spf
}

/// Exponent of `p` in `n!`.
pub fn legendre(n: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut q = n / p;
    while q > 0 {
        e += q;
        q /= p;
    }
    e
}

/// A rational number kept as a formal product of factorials and integer powers.
#[derive(Clone, Debug, Default)]
pub struct FactoredRatio {
    factorials: Vec<(u64, i64)>,
    integers: Vec<i64>,
}

impl FactoredRatio {
    pub fn new() -> Self {
        Self::default()
    }

    /// Multiplies by `(n!)^times`.
    pub fn mul_factorial(&mut self, n: u64, times: i64) -> &mut Self {
        if n >= 2 && times != 0 {
            match self.factorials.iter_mut().find(|(m, _)| *m == n) {
                Some(entry) => entry.1 += times,
                None => self.factorials.push((n, times)),
            }
        }
        self
    }

    /// Multiplies by `m^times`.
    pub fn mul_integer(&mut self, m: u64, times: i64) -> &mut Self {
        assert!(m > 0, "zero factor in a factored ratio");
        if m >= 2 && times != 0 {
            let idx = m as usize;
            if self.integers.len() <= idx {
                self.integers.resize(idx + 1, 0);
            }
            self.integers[idx] += times;
        }
        self
    }

    /// Multiplies by `Φ(m)^times` where `Φ(m) = 1!·2!⋯(m−1)! = Π_{i<m} i^{m−i}`.
    pub fn mul_superfactorial(&mut self, m: u64, times: i64) -> &mut Self {
        for i in 2..m {
            self.mul_integer(i, times * (m - i) as i64);
        }
        self
    }

    /// Multiplies by `(Π hooks of p)^times`.
    pub fn mul_hook_product(&mut self, p: &Partition, times: i64) -> &mut Self {
        for (h, &count) in p.hook_histogram().iter().enumerate().skip(2) {
            if count > 0 {
                self.mul_integer(h as u64, times * count as i64);
            }
        }
        self
    }

    /// Multiplies by `(f^p)^times = (|p|! / Π hooks)^times`.
    pub fn mul_f_lambda(&mut self, p: &Partition, times: i64) -> &mut Self {
        self.mul_factorial(p.size() as u64, times);
        self.mul_hook_product(p, -times)
    }

    /// Calls `f(p, e_p)` for every prime with a nonzero net exponent, in increasing order.
    pub fn for_each_exponent(&self, mut f: impl FnMut(u64, i64)) {
        let len = self.integers.len();
        let spf = smallest_prime_factors(len);
        let mut small = vec![0i64; len];
        for (m, &times) in self.integers.iter().enumerate() {
            if times == 0 {
                continue;
            }
            let mut x = m;
            while x > 1 {
                let p = spf[x] as usize;
                while x % p == 0 {
                    x /= p;
                    small[p] += times;
                }
            }
        }
        let mut factorials = self.factorials.clone();
        factorials.retain(|&(_, t)| t != 0);
        factorials.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let top = factorials.first().map(|f| f.0).unwrap_or(0).max(len.saturating_sub(1) as u64);
        for_each_prime(top, |p| {
            let mut e = if (p as usize) < len { small[p as usize] } else { 0 };
            for &(n, times) in &factorials {
                if n < p {
                    break;
                }
                e += times * legendre(n, p) as i64;
            }
            if e != 0 {
                f(p, e);
            }
        });
    }

    /// `ln` of the represented rational, which must be positive (it always is).
    pub fn ln(&self) -> LogReal {
        let mut sum = CompensatedSum::new();
        let mut budget = 0.0;
        self.for_each_exponent(|p, e| {
            let lp = (p as f64).ln();
            let ef = e as f64;
            sum.add_product(ef, lp);
            budget += (ef * lp).abs() * LN_REL_ERROR;
        });
        let value = sum.value();
        // double-double accumulation error is far below this term
        budget += (budget + value.abs()) * 1e-28 + 0.5 * ulp(value);
        LogReal::new(value, budget)
    }

    /// The exact rational value; only sensible for moderate sizes.
    pub fn to_rational(&self) -> BigRational {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        self.for_each_exponent(|p, e| {
            let factor = BigUint::from(p).pow(e.unsigned_abs() as u32);
            if e > 0 {
                num *= factor;
            } else {
                den *= factor;
            }
        });
        debug_assert!(!den.is_zero());
        BigRational::new(num.into(), den.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_count::{f_lambda, factorial};
    use num_bigint::BigInt;

    #[test]
    fn sieve_matches_trial_division() {
        let is_prime = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
        let expected: Vec<u64> = (0..3000).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes_up_to(2999), expected);
        // crosses several sieve segments
        let mut count = 0;
        for_each_prime(1_000_000, |_| count += 1);
        assert_eq!(count, 78_498);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn smallest_factors() {
        let spf = smallest_prime_factors(50);
        assert_eq!(spf[2], 2);
        assert_eq!(spf[49], 7);
        assert_eq!(spf[45], 3);
        assert_eq!(spf[47], 47);
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(10, 2), 8);
        assert_eq!(legendre(100, 5), 24);
        assert_eq!(legendre(3, 5), 0);
    }

    #[test]
    fn factored_ratio_is_exact() {
        let mut r = FactoredRatio::new();
        r.mul_factorial(30, 1).mul_factorial(12, -2).mul_integer(18, 3).mul_superfactorial(6, -1);
        let expected = BigRational::new(
            BigInt::from(factorial(30) * BigUint::from(18u32).pow(3)),
            BigInt::from(factorial(12).pow(2) * BigUint::from(34_560u32)),
        );
        assert_eq!(r.to_rational(), expected);
        let ln = r.ln();
        assert!(ln.within(crate::exact_count::ln_ratio(&expected)), "{ln:?}");
    }

    #[test]
    fn f_lambda_through_factored_ratio() {
        for n in [5usize, 9, 12] {
            for p in Partition::all(n) {
                let mut r = FactoredRatio::new();
                r.mul_f_lambda(&p, 1);
                assert_eq!(r.to_rational(), BigRational::from(BigInt::from(f_lambda(&p))));
            }
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn log_real_budget_accumulates() {
        let a = LogReal::new(1.0, 1e-9);
        let b = LogReal::new(2.0, 2e-9);
        let c = a + b - a;
        assert!(c.abs_error_budget >= 4e-9);
        assert!(c.within(2.0));
        assert_eq!((-a).value, -1.0);
    }
}
