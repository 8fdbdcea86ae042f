//! Irreducible characters of the symmetric groups and conjugacy-class bookkeeping.
//!
//! Characters are evaluated with the Murnaghan–Nakayama rule on beta-sets:
//! removing a border strip of length `r` from a diagram is moving one bead of
//! its beta-set `r` positions down into a free slot, and the strip's height is
//! the number of beads jumped over. The largest remaining cycle is always
//! removed first, and intermediate values are memoized on
//! `(remaining shape, remaining cycle type)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_count::{f_lambda, factorial};
use crate::partitions::Partition;

/// A conjugacy class of `S_k`, given by the multiset of its cycle lengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(transparent)]
pub struct CycleType {
    cycles: Partition,
}

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        CycleType { cycles }
    }

    /// The class of the identity in `S_k`.
    pub fn identity(k: usize) -> Self {
        CycleType::new(Partition::column(k))
    }

    /// The class of a transposition in `S_n`, `n ≥ 2`.
    pub fn transposition(n: usize) -> Result<Self> {
        CycleType::new(Partition::row(2)).embed(n)
    }

    pub fn cycles(&self) -> &Partition {
        &self.cycles
    }

    /// `k`, the degree of the symmetric group this class lives in.
    pub fn degree(&self) -> usize {
        self.cycles.size()
    }

    /// Minimal number of transpositions needed to write any element of the class.
    pub fn absolute_length(&self) -> usize {
        self.degree() - self.cycles.rows()
    }

    pub fn fixed_points(&self) -> usize {
        self.cycles.parts().iter().filter(|&&c| c == 1).count()
    }

    pub fn is_identity(&self) -> bool {
        self.absolute_length() == 0
    }

    /// `z_ρ = Π j^{m_j} m_j!`.
    pub fn centralizer_order(&self) -> BigUint {
        let mut z = BigUint::one();
        let parts = self.cycles.parts();
        let mut i = 0;
        while i < parts.len() {
            let j = parts[i];
            let mut m = 0;
            while i < parts.len() && parts[i] == j {
                m += 1;
                i += 1;
            }
            z *= BigUint::from(j).pow(m as u32) * factorial(m);
        }
        z
    }

    /// Number of permutations of `S_k` in this class, `k!/z_ρ`.
    pub fn class_size(&self) -> BigUint {
        factorial(self.degree()) / self.centralizer_order()
    }

    /// The same class seen in `S_n` through the inclusion fixing every point above `k`.
    pub fn embed(&self, n: usize) -> Result<CycleType> {
        let k = self.degree();
        if n < k {
            return Err(Error::Precondition(format!("cannot embed a class of S_{k} into S_{n}")));
        }
        let mut parts = self.cycles.parts().to_vec();
        parts.resize(parts.len() + (n - k), 1);
        Ok(CycleType::new(Partition::from_sorted_unchecked(parts)))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.cycles, f)
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse().map(CycleType::new)
    }
}

pub fn absolute_length(rho: &CycleType) -> usize {
    rho.absolute_length()
}

pub fn class_size(rho: &CycleType) -> BigUint {
    rho.class_size()
}

pub fn embed(rho: &CycleType, n: usize) -> Result<CycleType> {
    rho.embed(n)
}

/// Every conjugacy class of `S_k`, each exactly once.
pub fn cycle_types(k: usize) -> impl Iterator<Item = CycleType> {
    Partition::all(k).map(CycleType::new)
}

/// `#{σ ∈ S_k : ℓ_T(σ) = i}`, the unsigned Stirling number `c(k, k−i)`.
pub fn count_by_absolute_length(k: usize, i: usize) -> BigUint {
    absolute_length_distribution(k).into_iter().nth(i).unwrap_or_default()
}

/// `#{σ ∈ S_k : ℓ_T(σ) = i}` for every `i` in `0..max(k,1)`, in one pass over the classes.
pub fn absolute_length_distribution(k: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); k.max(1)];
    for rho in cycle_types(k) {
        out[rho.absolute_length()] += rho.class_size();
    }
    out
}

type CacheKey = (Vec<usize>, Vec<usize>);

/// Memo table for Murnaghan–Nakayama evaluations, safe to share between threads.
#[derive(Default)]
pub struct CharacterCache {
    map: RwLock<HashMap<CacheKey, BigInt>>,
}

impl CharacterCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by the free functions of this module.
    pub fn global() -> &'static CharacterCache {
        static GLOBAL: OnceLock<CharacterCache> = OnceLock::new();
        GLOBAL.get_or_init(CharacterCache::new)
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `χ^ν(ρ)`.
    pub fn character(&self, nu: &Partition, rho: &CycleType) -> Result<BigInt> {
        if nu.size() != rho.degree() {
            return Err(Error::SizeMismatch { expected: nu.size(), found: rho.degree() });
        }
        Ok(self.evaluate(nu.parts(), rho.cycles().parts()))
    }

    fn evaluate(&self, shape: &[usize], cycles: &[usize]) -> BigInt {
        match cycles.first() {
            None => return BigInt::one(),
            // only fixed points remain: the character is the dimension f^shape
            Some(1) => return BigInt::from(f_lambda(&Partition::from_sorted_unchecked(shape.to_vec()))),
            Some(_) => {}
        }
        let key = (shape.to_vec(), cycles.to_vec());
        if let Some(v) = self.map.read().unwrap().get(&key) {
            return v.clone();
        }
        let r = cycles[0];
        let rest = &cycles[1..];
        let mut total = BigInt::zero();
        for (smaller, negative) in remove_border_strips(shape, r) {
            let v = self.evaluate(&smaller, rest);
            if negative {
                total -= v;
            } else {
                total += v;
            }
        }
        self.map.write().unwrap().insert(key, total.clone());
        total
    }
}

/// All diagrams obtained by removing a border strip of length `r`, with the
/// strip's sign (`true` when its height is odd).
fn remove_border_strips(shape: &[usize], r: usize) -> Vec<(Vec<usize>, bool)> {
    let len = shape.len();
    let beta: Vec<usize> = shape.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect();
    let top = beta.first().copied().unwrap_or(0);
    let mut occupied = vec![false; top + 1];
    for &b in &beta {
        occupied[b] = true;
    }
    let mut out = Vec::new();
    for (idx, &x) in beta.iter().enumerate() {
        if x < r || occupied[x - r] {
            continue;
        }
        let target = x - r;
        let jumped = occupied[target + 1..x].iter().filter(|&&o| o).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let mut parts: Vec<usize> = moved.iter().enumerate().map(|(i, &b)| b - (len - 1 - i)).collect();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        out.push((parts, jumped % 2 == 1));
    }
    out
}

/// `χ^ν(ρ)` through the shared cache.
pub fn character(nu: &Partition, rho: &CycleType) -> Result<BigInt> {
    CharacterCache::global().character(nu, rho)
}

/// `χ^ν(ρ) / f^ν`.
pub fn normalized_character(nu: &Partition, rho: &CycleType) -> Result<BigRational> {
    let chi = character(nu, rho)?;
    Ok(BigRational::new(chi, BigInt::from(f_lambda(nu))))
}

/// Closed form of the normalized character on a transposition, `2(b(ν′)−b(ν)) / (n(n−1))`.
pub fn transposition_normalized_character(nu: &Partition) -> Result<BigRational> {
    let n = nu.size();
    if n < 2 {
        return Err(Error::Precondition(format!("transpositions need n ≥ 2, got n = {n}")));
    }
    let diff = BigInt::from(nu.conjugate().b_statistic()) - BigInt::from(nu.b_statistic());
    Ok(BigRational::new(diff * 2, BigInt::from(n * (n - 1))))
}

/// `|χ^ν(ρ)/f^ν| ≤ 1`, exposed for diagnostics.
pub fn normalized_character_abs(nu: &Partition, rho: &CycleType) -> Result<BigRational> {
    normalized_character(nu, rho).map(|q| q.abs())
}
