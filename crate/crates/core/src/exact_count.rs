//! Exact counts of standard Young tableaux.
//!
//! `f^{λ/μ}` is available through four independent routes: saturated chains
//! in Young's lattice ([`f_skew_chain_dp`]), the Aitken determinant
//! ([`f_skew_determinant`]), the character inner product
//! ([`f_skew_charsum`]) and explicit generation ([`enumerate_syt`]). Nothing
//! here approximates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{character, cycle_types};
use crate::error::{Error, Result};
use crate::partitions::{Partition, SkewShape};

/// Default cell limit for [`enumerate_syt`].
pub const ENUMERATION_CELL_LIMIT: usize = 12;

/// Product of `lo..=hi` by balanced splitting; 1 for an empty range.
pub fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    if hi - lo < 16 {
        return (lo..=hi).fold(BigUint::one(), |acc, x| acc * x);
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

/// Product of arbitrary factors by balanced splitting.
pub fn product_of(values: &[u64]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1..=16 => values.iter().fold(BigUint::one(), |acc, &x| acc * x),
        len => {
            let (a, b) = values.split_at(len / 2);
            product_of(a) * product_of(b)
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    range_product(2, n as u64)
}

/// Number of standard Young tableaux of straight shape `p` (hook-length formula).
pub fn f_lambda(p: &Partition) -> BigUint {
    let hist = p.hook_histogram();
    let mut hooks = BigUint::one();
    for (h, &count) in hist.iter().enumerate().skip(2) {
        if count > 0 {
            hooks *= BigUint::from(h).pow(count as u32);
        }
    }
    factorial(p.size()) / hooks
}

fn padded(p: &Partition, len: usize) -> Vec<usize> {
    let mut v = p.parts().to_vec();
    v.resize(len, 0);
    v
}

/// `f^{λ/μ}` by counting saturated chains from `μ` to `λ`, one box at a time.
pub fn f_skew_chain_dp(shape: &SkewShape) -> BigUint {
    let outer = shape.outer().parts();
    let rows = outer.len();
    let mut level: HashMap<Vec<usize>, BigUint> = HashMap::new();
    level.insert(padded(shape.inner(), rows), BigUint::one());
    for _ in 0..shape.cells() {
        let mut next: HashMap<Vec<usize>, BigUint> = HashMap::with_capacity(level.len() * 2);
        for (cur, count) in &level {
            for i in 0..rows {
                if cur[i] < outer[i] && (i == 0 || cur[i - 1] > cur[i]) {
                    let mut grown = cur.clone();
                    grown[i] += 1;
                    *next.entry(grown).or_default() += count;
                }
            }
        }
        level = next;
    }
    level.into_values().sum()
}

/// `f^{λ/μ}` for every `μ ⊢ k` inside `λ`, by removing corners from `λ`.
pub fn skew_counts_from_outer(lam: &Partition, k: usize) -> Result<HashMap<Partition, BigUint>> {
    let n = lam.size();
    if k > n {
        return Err(Error::Precondition(format!("level k = {k} exceeds |λ| = {n}")));
    }
    let mut level: HashMap<Vec<usize>, BigUint> = HashMap::new();
    level.insert(lam.parts().to_vec(), BigUint::one());
    for _ in k..n {
        let mut next: HashMap<Vec<usize>, BigUint> = HashMap::with_capacity(level.len() * 2);
        for (cur, count) in &level {
            for i in 0..cur.len() {
                if cur[i] > 0 && (i + 1 == cur.len() || cur[i + 1] < cur[i]) {
                    let mut shrunk = cur.clone();
                    shrunk[i] -= 1;
                    if shrunk[i] == 0 {
                        shrunk.pop();
                    }
                    *next.entry(shrunk).or_default() += count;
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(|(parts, c)| (Partition::from_sorted_unchecked(parts), c)).collect())
}

/// Classical determinant oracle `|λ/μ|!·det[1/(λ_i − μ_j − i + j)!]`.
///
/// Row `i` is scaled by `x_i!` with `x_i = λ_i + ℓ − 1 − i`, which turns every
/// entry into a falling factorial; the integer determinant is then taken by
/// fraction-free (Bareiss) elimination.
pub fn f_skew_determinant(shape: &SkewShape) -> Result<BigUint> {
    let len = shape.outer().rows();
    let x: Vec<usize> = (0..len).map(|i| shape.outer().part(i) + len - 1 - i).collect();
    let y: Vec<usize> = (0..len).map(|j| shape.inner().part(j) + len - 1 - j).collect();
    let mut m: Vec<Vec<BigInt>> = x
        .iter()
        .map(|&xi| {
            y.iter()
                .map(|&yj| if xi >= yj { BigInt::from(range_product((xi - yj + 1) as u64, xi as u64)) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let det = bareiss_determinant(&mut m);
    let numerator = det * BigInt::from(factorial(shape.cells()));
    let scale = BigInt::from(x.iter().map(|&xi| factorial(xi)).product::<BigUint>());
    let (q, r) = numerator.div_rem(&scale);
    if !r.is_zero() || q.is_negative() {
        return Err(Error::SelfTest(format!("determinant formula gave a non-natural count for {shape}")));
    }
    Ok(q.magnitude().clone())
}

fn bareiss_determinant(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// `f^{λ/μ} = (1/k!) Σ_{ρ ⊢ k} |C_ρ|·χ^λ(ρ ∪ 1^{n−k})·χ^μ(ρ)`.
///
/// The final division is checked: a remainder means the character values are wrong.
pub fn f_skew_charsum(outer: &Partition, inner: &Partition) -> Result<BigUint> {
    let shape = SkewShape::new(outer.clone(), inner.clone())?;
    let n = outer.size();
    let k = inner.size();
    let classes: Vec<_> = cycle_types(k).collect();
    let terms = classes
        .par_iter()
        .map(|rho| {
            let big = character(outer, &rho.embed(n)?)?;
            let small = character(inner, rho)?;
            Ok(BigInt::from(rho.class_size()) * big * small)
        })
        .collect::<Result<Vec<BigInt>>>()?;
    let total: BigInt = terms.into_iter().sum();
    let (q, r) = total.div_rem(&BigInt::from(factorial(k)));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::SelfTest(format!("character sum for {shape} is not a natural multiple of {k}!")));
    }
    Ok(q.magnitude().clone())
}

/// Visits every standard filling of `shape`; `grid[i][j]` holds the entry of
/// cell `(i, j)` (1-based labels), with 0 inside the inner diagram.
pub fn for_each_syt(shape: &SkewShape, limit: usize, mut visit: impl FnMut(&[Vec<usize>])) -> Result<()> {
    if shape.cells() > limit {
        return Err(Error::Refused(format!(
            "explicit enumeration is limited to {limit} cells, shape {shape} has {}",
            shape.cells()
        )));
    }
    let outer = shape.outer().parts().to_vec();
    let mut cur = padded(shape.inner(), outer.len());
    let mut grid: Vec<Vec<usize>> = outer.iter().map(|&l| vec![0; l]).collect();
    fill(&outer, &mut cur, &mut grid, 1, shape.cells(), &mut visit);
    Ok(())
}

fn fill(
    outer: &[usize],
    cur: &mut [usize],
    grid: &mut [Vec<usize>],
    label: usize,
    cells: usize,
    visit: &mut impl FnMut(&[Vec<usize>]),
) {
    if label > cells {
        visit(grid);
        return;
    }
    for i in 0..outer.len() {
        if cur[i] < outer[i] && (i == 0 || cur[i - 1] > cur[i]) {
            grid[i][cur[i]] = label;
            cur[i] += 1;
            fill(outer, cur, grid, label + 1, cells, visit);
            cur[i] -= 1;
            grid[i][cur[i]] = 0;
        }
    }
}

/// Counts standard fillings by generating each one.
pub fn enumerate_syt(shape: &SkewShape, limit: usize) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_syt(shape, limit, |_| count += 1)?;
    Ok(BigUint::from(count))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    #[serde(rename = "dp")]
    ChainDp,
    #[serde(rename = "det")]
    Determinant,
    CharSum,
    #[serde(rename = "enum")]
    Enumerate,
}

impl CountMethod {
    pub const ALL: [CountMethod; 4] =
        [CountMethod::ChainDp, CountMethod::Determinant, CountMethod::CharSum, CountMethod::Enumerate];

    pub fn name(self) -> &'static str {
        match self {
            CountMethod::ChainDp => "dp",
            CountMethod::Determinant => "det",
            CountMethod::CharSum => "charsum",
            CountMethod::Enumerate => "enum",
        }
    }
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CountMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CountMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown count method `{s}` (expected dp, det, charsum or enum)")))
    }
}

/// `f^{λ/μ}` by the chosen method, validating containment first.
pub fn f_skew(outer: &Partition, inner: &Partition, method: CountMethod) -> Result<BigUint> {
    let shape = SkewShape::new(outer.clone(), inner.clone())?;
    match method {
        CountMethod::ChainDp => Ok(f_skew_chain_dp(&shape)),
        CountMethod::Determinant => f_skew_determinant(&shape),
        CountMethod::CharSum => f_skew_charsum(outer, inner),
        CountMethod::Enumerate => enumerate_syt(&shape, ENUMERATION_CELL_LIMIT),
    }
}

/// The three algebraic counts side by side.
#[derive(Clone, Debug, Serialize)]
pub struct SkewCountReport {
    pub shape: SkewShape,
    pub by_chain_dp: BigUint,
    pub by_charsum: BigUint,
    pub by_determinant: BigUint,
}

impl SkewCountReport {
    pub fn compute(shape: &SkewShape) -> Result<Self> {
        Ok(SkewCountReport {
            shape: shape.clone(),
            by_chain_dp: f_skew_chain_dp(shape),
            by_charsum: f_skew_charsum(shape.outer(), shape.inner())?,
            by_determinant: f_skew_determinant(shape)?,
        })
    }

    pub fn agree(&self) -> bool {
        self.by_chain_dp == self.by_charsum && self.by_chain_dp == self.by_determinant
    }
}

/// `A_{λ/μ} = |μ|!·f^{λ/μ} / (f^λ f^μ)`.
pub fn a_ratio(outer: &Partition, inner: &Partition) -> Result<BigRational> {
    let shape = SkewShape::new(outer.clone(), inner.clone())?;
    Ok(a_ratio_from_count(outer, inner, &f_skew_chain_dp(&shape)))
}

/// `A_{λ/μ}` from an already known `f^{λ/μ}`.
pub fn a_ratio_from_count(outer: &Partition, inner: &Partition, skew_count: &BigUint) -> BigRational {
    let num = factorial(inner.size()) * skew_count;
    let den = f_lambda(outer) * f_lambda(inner);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Law of the level set `L^{(k)}(T)` of a uniform standard tableau `T` of shape `λ`:
/// `P(L = μ) = f^μ f^{λ/μ} / f^λ`.
pub fn level_set_distribution(lam: &Partition, k: usize) -> Result<BTreeMap<Partition, BigRational>> {
    let counts = skew_counts_from_outer(lam, k)?;
    let total = BigInt::from(f_lambda(lam));
    Ok(counts
        .into_iter()
        .map(|(mu, skew)| {
            let weight = BigInt::from(f_lambda(&mu) * skew);
            (mu, BigRational::new(weight, total.clone()))
        })
        .collect())
}

/// Natural log of a positive big integer, accurate to a few ulps.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_ratio(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "log of a non-positive rational");
    ln_biguint(q.numer().magnitude()) - ln_biguint(q.denom().magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn skew(o: &str, i: &str) -> SkewShape {
        SkewShape::new(p(o), p(i)).unwrap()
    }

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn f_lambda_examples() {
        assert_eq!(f_lambda(&p("1")), n(1));
        assert_eq!(f_lambda(&p("2,1")), n(2));
        assert_eq!(f_lambda(&p("3,3,2")), n(42));
        assert_eq!(f_lambda(&p("")), n(1));
    }

    #[test]
    fn chain_dp_examples() {
        assert_eq!(f_skew_chain_dp(&skew("2,2", "1")), n(2));
        assert_eq!(f_skew_chain_dp(&skew("2,2", "2")), n(1));
        assert_eq!(f_skew_chain_dp(&skew("3,1", "3,1")), n(1));
        assert_eq!(f_skew_chain_dp(&skew("3,3,2", "")), n(42));
        assert!(f_skew(&p("2"), &p("3"), CountMethod::ChainDp).is_err());
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(f_skew_determinant(&skew("2,2", "1")).unwrap(), n(2));
        assert_eq!(f_skew_determinant(&skew("3,1", "2")).unwrap(), n(2));
        assert_eq!(f_skew_determinant(&skew("3,2", "3,2")).unwrap(), n(1));
        assert_eq!(f_skew_determinant(&skew("", "")).unwrap(), n(1));
        assert!(f_skew(&p("1"), &p("1,1"), CountMethod::Determinant).is_err());
    }

    #[test]
    fn charsum_examples() {
        assert_eq!(f_skew_charsum(&p("2,2"), &p("2")).unwrap(), n(1));
        assert_eq!(f_skew_charsum(&p("3,1"), &p("2")).unwrap(), n(2));
        assert_eq!(f_skew_charsum(&p("2,1"), &p("")).unwrap(), n(2));
        assert!(matches!(f_skew_charsum(&p("2"), &p("1,1")), Err(Error::NotContained { .. })));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_syt(&skew("2,2", "1"), 12).unwrap(), n(2));
        assert_eq!(enumerate_syt(&skew("3,3,2", ""), 12).unwrap(), n(42));
        assert_eq!(enumerate_syt(&skew("1", "1"), 12).unwrap(), n(1));
        assert!(matches!(enumerate_syt(&skew("5,4,4", ""), 12), Err(Error::Refused(_))));
    }

    #[test]
    fn generated_fillings_are_standard() {
        let shape = skew("4,3,2", "2,1");
        let mut seen = std::collections::HashSet::new();
        for_each_syt(&shape, 12, |g| {
            for (i, row) in g.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if v == 0 {
                        continue;
                    }
                    if j + 1 < row.len() {
                        assert!(row[j + 1] > v);
                    }
                    if i + 1 < g.len() && j < g[i + 1].len() {
                        assert!(g[i + 1][j] > v);
                    }
                }
            }
            assert!(seen.insert(g.to_vec()));
        })
        .unwrap();
        assert_eq!(BigUint::from(seen.len()), f_skew_chain_dp(&shape));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(a_ratio(&p("4,2,1"), &p("")).unwrap(), q(1, 1));
        assert_eq!(a_ratio(&p("2,2"), &p("2")).unwrap(), q(1, 1));
        assert_eq!(a_ratio(&p("3,1"), &p("2")).unwrap(), q(4, 3));
        assert!(a_ratio(&p("3,1"), &p("1,1,1")).is_err());
    }

    #[test]
    fn level_set_examples() {
        let d = level_set_distribution(&p("2,1"), 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&p("1")], q(1, 1));
        let d = level_set_distribution(&p("2,2"), 2).unwrap();
        assert_eq!(d[&p("2")], q(1, 2));
        assert_eq!(d[&p("1,1")], q(1, 2));
        let d = level_set_distribution(&p("4,3,1"), 0).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(Partition::empty(), q(1, 1))]);
        assert!(level_set_distribution(&p("2"), 3).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in CountMethod::ALL {
            assert_eq!(m.name().parse::<CountMethod>().unwrap(), m);
        }
        assert!("fast".parse::<CountMethod>().is_err());
    }

    #[test]
    fn products() {
        assert_eq!(factorial(0), n(1));
        assert_eq!(factorial(20), n(2432902008176640000));
        assert_eq!(range_product(5, 4), n(1));
        assert_eq!(product_of(&(1..=40).collect::<Vec<_>>()), factorial(40));
    }

    #[test]
    fn big_logs() {
        let f = factorial(500);
        let direct: f64 = (1..=500).map(|i| (i as f64).ln()).sum();
        assert!((ln_biguint(&f) - direct).abs() < 1e-9);
        assert!((ln_ratio(&q(4, 3)) - (4.0f64 / 3.0).ln()).abs() < 1e-15);
    }
}
