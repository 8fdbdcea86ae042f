//! The five-parameter skew shapes with a closed product formula for `f^{λ/μ}`.
//!
//! For `(a, b, c, d, e)` the outer diagram is the `(a+c+e) × (b+c+d)` rectangle
//! with an `e × d` block removed from its bottom-right corner, and the inner
//! diagram is the `a × b` rectangle in the top-left corner:
//! `λ = ((b+c+d)^{a+c}, (b+c)^e)`, `μ = (b^a)`.
//! Writing `Φ(n) = 1!·2!⋯(n−1)!` and `N = (a+c+e)(b+c+d) − ab − ed`,
//!
//! ```text
//! f^{λ/μ} = N! · Φ(a)Φ(b)Φ(c)Φ(d)Φ(e)Φ(a+b+c)Φ(c+d+e)Φ(a+b+c+d+e)
//!              / (Φ(a+b)Φ(d+e)Φ(a+c+d)Φ(b+c+e)Φ(a+b+2c+d+e)).
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_count::factorial;
use crate::logspace::{FactoredRatio, LogReal};
use crate::partitions::{Partition, SkewShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct KimOhParams {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub e: u64,
}

impl KimOhParams {
    pub fn new(a: u64, b: u64, c: u64, d: u64, e: u64) -> Self {
        KimOhParams { a, b, c, d, e }
    }

    pub fn as_array(&self) -> [u64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    /// Cells of `λ/μ`: `(a+c+e)(b+c+d) − ab − ed`.
    pub fn cell_count(&self) -> u128 {
        let KimOhParams { a, b, c, d, e } = *self;
        let (a, b, c, d, e) = (a as u128, b as u128, c as u128, d as u128, e as u128);
        (a + c + e) * (b + c + d) - a * b - e * d
    }

    /// Cells of the outer diagram `λ`.
    pub fn outer_cells(&self) -> u128 {
        self.cell_count() + self.a as u128 * self.b as u128
    }

    /// Cells of the inner diagram `μ`.
    pub fn inner_cells(&self) -> u128 {
        self.a as u128 * self.b as u128
    }

    /// Multiplicities of the superfactorials in the product formula (positive: numerator).
    fn superfactorial_terms(&self) -> [(u64, i64); 13] {
        let KimOhParams { a, b, c, d, e } = *self;
        [
            (a, 1),
            (b, 1),
            (c, 1),
            (d, 1),
            (e, 1),
            (a + b + c, 1),
            (c + d + e, 1),
            (a + b + c + d + e, 1),
            (a + b, -1),
            (d + e, -1),
            (a + c + d, -1),
            (b + c + e, -1),
            (a + b + 2 * c + d + e, -1),
        ]
    }

    /// The product formula as a formal factor list.
    pub fn factored_count(&self) -> FactoredRatio {
        let mut ratio = FactoredRatio::new();
        ratio.mul_factorial(self.cell_count() as u64, 1);
        for (m, times) in self.superfactorial_terms() {
            ratio.mul_superfactorial(m, times);
        }
        ratio
    }
}

impl fmt::Display for KimOhParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a, self.b, self.c, self.d, self.e)
    }
}

impl FromStr for KimOhParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("expected five naturals `a,b,c,d,e`, got `{s}`"));
        let values: Vec<u64> = s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match values[..] {
            [a, b, c, d, e] => Ok(KimOhParams::new(a, b, c, d, e)),
            _ => Err(bad()),
        }
    }
}

/// `Φ(n) = 1!·2!⋯(n−1)!`, with `Φ(0) = Φ(1) = 1`.
pub fn superfactorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut fact = BigUint::one();
    for j in 1..n {
        fact *= j;
        acc *= &fact;
    }
    acc
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).expect("parameter exceeds the address space")
}

/// `λ = ((b+c+d)^{a+c}, (b+c)^e)`, `μ = (b^a)`.
pub fn kimoh_shape(p: &KimOhParams) -> SkewShape {
    let KimOhParams { a, b, c, d, e } = *p;
    let mut outer = vec![to_usize(b + c + d); to_usize(a + c)];
    outer.extend(std::iter::repeat(to_usize(b + c)).take(to_usize(e)));
    let outer = Partition::new(outer).expect("rows are weakly decreasing by construction");
    let inner = Partition::rectangle(to_usize(a), to_usize(b));
    SkewShape::new(outer, inner).expect("the inner rectangle fits by construction")
}

pub fn cell_count(p: &KimOhParams) -> u128 {
    p.cell_count()
}

/// `f^{λ/μ}` from the product formula, exactly.
pub fn kimoh_count(p: &KimOhParams) -> Result<BigUint> {
    let mut num = factorial(to_usize(p.cell_count() as u64));
    let mut den = BigUint::one();
    for (m, times) in p.superfactorial_terms() {
        if times > 0 {
            num *= superfactorial(m);
        } else {
            den *= superfactorial(m);
        }
    }
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::SelfTest(format!("product formula is not an integer at ({p})")));
    }
    Ok(quot)
}

/// `ln f^{λ/μ}` from exact prime exponents of the product formula.
pub fn log_kimoh_count(p: &KimOhParams) -> LogReal {
    p.factored_count().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_count::ln_biguint;

    #[test]
    fn superfactorial_values() {
        assert_eq!(superfactorial(0), BigUint::one());
        assert_eq!(superfactorial(1), BigUint::one());
        assert_eq!(superfactorial(4), BigUint::from(12u32));
        assert_eq!(superfactorial(5), BigUint::from(288u32));
        for n in 0..=200u64 {
            assert_eq!(superfactorial(n + 1), superfactorial(n) * factorial(n as usize));
        }
    }

    #[test]
    fn shapes() {
        let s = kimoh_shape(&KimOhParams::default());
        assert!(s.outer().is_empty() && s.inner().is_empty());
        let s = kimoh_shape(&KimOhParams::new(1, 1, 1, 1, 1));
        assert_eq!(s.outer().parts(), &[3, 3, 2]);
        assert_eq!(s.inner().parts(), &[1]);
        let s = kimoh_shape(&KimOhParams::new(0, 0, 1, 1, 1));
        assert_eq!(s.outer().parts(), &[2, 1]);
        assert!(s.inner().is_empty());
    }

    #[test]
    fn cell_counts_match_shapes() {
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    for d in 0..5 {
                        for e in 0..5 {
                            let p = KimOhParams::new(a, b, c, d, e);
                            assert_eq!(kimoh_shape(&p).cells() as u128, p.cell_count(), "{p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(kimoh_count(&KimOhParams::default()).unwrap(), BigUint::one());
        assert_eq!(kimoh_count(&KimOhParams::new(1, 1, 1, 1, 1)).unwrap(), BigUint::from(42u32));
        assert_eq!(kimoh_count(&KimOhParams::new(0, 0, 1, 1, 1)).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn log_counts() {
        assert_eq!(log_kimoh_count(&KimOhParams::default()).value, 0.0);
        let l = log_kimoh_count(&KimOhParams::new(1, 1, 1, 1, 1));
        assert!((l.value - 42f64.ln()).abs() < 1e-9);
        let p = KimOhParams::new(2, 2, 2, 2, 2);
        let exact = ln_biguint(&kimoh_count(&p).unwrap());
        assert!((log_kimoh_count(&p).value - exact).abs() < 1e-9);
    }

    #[test]
    fn param_text() {
        let p: KimOhParams = "1, 2,3,4,5".parse().unwrap();
        assert_eq!(p, KimOhParams::new(1, 2, 3, 4, 5));
        assert_eq!(p.to_string(), "1,2,3,4,5");
        assert!("1,2,3".parse::<KimOhParams>().is_err());
        assert!("1,2,3,4,x".parse::<KimOhParams>().is_err());
    }
}
