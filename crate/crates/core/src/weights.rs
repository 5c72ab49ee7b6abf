//! Reduced weight vectors: admissibility, enumeration, random sampling, and
//! the type-level free-sum calculus.
//!
//! A nondecreasing vector `q` with gcd 1 where every entry divides the sum `s`
//! corresponds to a multiset of integers `k_i = s / q_i` with
//! `sum 1/k_i = 1`. Both enumeration and sampling walk that unit-fraction
//! recursion, which is finite for a fixed number of terms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{ints, Int};
use crate::simplex::{SimplexType, WeightVector};

/// gcd 1 and every weight divides the sum.
pub fn satisfies_condition(q: &WeightVector) -> bool {
    q.gcd().is_one() && q.entries().iter().all(|x| q.sum().is_multiple_of(x))
}

fn weights_from_denominators(ks: &[BigInt]) -> WeightVector {
    let s = ks.iter().fold(BigInt::one(), |l, k| l.lcm(k));
    WeightVector::from_unsorted(ks.iter().map(|k| &s / k).collect())
        .expect("unit-fraction denominators give positive weights")
}

/// Smallest admissible next denominator when more terms follow: `1/k < r`.
fn strict_lower(r: &BigRational) -> BigInt {
    (r.denom() / r.numer()) + 1
}

/// All nondecreasing reduced admissible weight vectors of length `dim + 1`,
/// sorted lexicographically.
pub fn enumerate_reduced_weights(dim: usize) -> Vec<WeightVector> {
    assert!(dim >= 1, "dimension must be at least 1");
    let mut out = BTreeSet::new();
    let mut ks = Vec::with_capacity(dim + 1);
    enumerate_rec(&BigRational::one(), dim + 1, &BigInt::one(), &mut ks, &mut out);
    out.into_iter().collect()
}

fn enumerate_rec(
    remaining: &BigRational,
    terms: usize,
    min_k: &BigInt,
    ks: &mut Vec<BigInt>,
    out: &mut BTreeSet<WeightVector>,
) {
    if terms == 1 {
        if remaining.numer().is_one() && remaining.denom() >= min_k {
            ks.push(remaining.denom().clone());
            out.insert(weights_from_denominators(ks));
            ks.pop();
        }
        return;
    }
    let lo = strict_lower(remaining).max(min_k.clone());
    // k_i <= terms / r, otherwise the remaining terms cannot reach r
    let hi = (BigRational::from_integer(BigInt::from(terms)) / remaining).floor().to_integer();
    let mut k = lo;
    while k <= hi {
        let next = remaining - BigRational::new(BigInt::one(), k.clone());
        ks.push(k.clone());
        enumerate_rec(&next, terms - 1, &k, ks, out);
        ks.pop();
        k += 1;
    }
}

/// Denominator pairs `a <= b`, `a >= min_k`, with `1/a + 1/b = r`.
fn unit_fraction_pairs(r: &BigRational, min_k: &BigInt) -> Option<Vec<(BigInt, BigInt)>> {
    let (u, v) = (r.numer(), r.denom());
    let lo = strict_lower(r).max(min_k.clone());
    let hi = (2 * v) / u;
    if hi < lo {
        return Some(Vec::new());
    }
    let mut pairs = Vec::new();
    if &hi - &lo <= BigInt::from(DIRECT_PAIR_SCAN) {
        let mut a = lo;
        while a <= hi {
            let den = u * &a - v;
            let num = &a * v;
            if num.is_multiple_of(&den) {
                pairs.push((a.clone(), num / den));
            }
            a += 1;
        }
        return Some(pairs);
    }
    // (u a - v)(u b - v) = v^2: walk the divisors x <= v of v^2.
    let v64 = v.to_u64().filter(|&v| v <= MAX_FACTOR)?;
    for x in divisors_of_square(v64) {
        let x = BigInt::from(x);
        if &x > v || !(&x + v).is_multiple_of(u) {
            continue;
        }
        let y = v * v / &x;
        if !(&y + v).is_multiple_of(u) {
            continue;
        }
        let a = (&x + v) / u;
        let b = (&y + v) / u;
        if a >= lo && a <= b {
            pairs.push((a, b));
        }
    }
    pairs.sort();
    Some(pairs)
}

const DIRECT_PAIR_SCAN: u64 = 200_000;
const MAX_FACTOR: u64 = 1 << 50;

fn divisors_of_square(v: u64) -> Vec<u64> {
    let mut factors = Vec::new();
    let mut n = v;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            factors.push((p, 2 * e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 2));
    }
    let mut divs: Vec<u128> = vec![1];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for d in &divs {
            let mut x = *d;
            for _ in 0..=e {
                next.push(x);
                x *= p as u128;
            }
        }
        divs = next;
    }
    divs.into_iter()
        .filter(|&d| d <= v as u128)
        .map(|d| d as u64)
        .collect()
}

/// One admissible reduced weight vector of length `dim + 1`.
///
/// Randomized unit-fraction recursion: each denominator except the last two
/// is drawn uniformly from its feasible interval, the final pair is drawn
/// uniformly from the exact solutions, and a dead end restarts the draw.
/// With `max_sum` set, draws whose weight sum exceeds it are rejected too.
pub fn sample_one<R: Rng + ?Sized>(dim: usize, rng: &mut R, max_sum: Option<&BigInt>) -> WeightVector {
    assert!(dim >= 1, "dimension must be at least 1");
    'attempt: loop {
        let mut remaining = BigRational::one();
        let mut min_k = BigInt::one();
        let mut ks = Vec::with_capacity(dim + 1);
        for terms in (3..=dim + 1).rev() {
            let lo = strict_lower(&remaining).max(min_k.clone());
            let hi = (BigRational::from_integer(BigInt::from(terms)) / &remaining)
                .floor()
                .to_integer();
            if hi < lo {
                continue 'attempt;
            }
            let k = uniform_in(rng, &lo, &hi);
            remaining -= BigRational::new(BigInt::one(), k.clone());
            min_k = k.clone();
            ks.push(k);
        }
        let Some(pairs) = unit_fraction_pairs(&remaining, &min_k) else {
            continue;
        };
        if pairs.is_empty() {
            continue;
        }
        let (a, b) = pairs[rng.gen_range(0..pairs.len())].clone();
        ks.push(a);
        ks.push(b);
        let w = weights_from_denominators(&ks);
        if max_sum.is_some_and(|m| w.sum() > m) {
            continue;
        }
        return w;
    }
}

fn uniform_in<R: Rng + ?Sized>(rng: &mut R, lo: &BigInt, hi: &BigInt) -> BigInt {
    let span: BigInt = hi - lo + 1;
    match span.to_u64() {
        Some(n) => lo + BigInt::from(rng.gen_range(0..n)),
        None => {
            // wide interval: rejection-sample enough random bits
            let bits = span.bits();
            loop {
                let mut x = BigInt::zero();
                for _ in 0..bits.div_ceil(32) {
                    x = (x << 32) + BigInt::from(rng.gen::<u32>());
                }
                x %= BigInt::one() << bits;
                if x < span {
                    return lo + x;
                }
            }
        }
    }
}

/// `count` reproducible samples from a ChaCha stream seeded with `seed`.
/// Duplicates are kept.
pub fn sample_random_weights(dim: usize, count: usize, seed: u64) -> Vec<WeightVector> {
    sample_random_weights_bounded(dim, count, seed, None)
}

pub fn sample_random_weights_bounded(
    dim: usize,
    count: usize,
    seed: u64,
    max_sum: Option<&BigInt>,
) -> Vec<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_one(dim, &mut rng, max_sum)).collect()
}

/// Type of `P *_i Q` from the reduced weights of `P` and `Q`:
/// `(1/d)(q_i p_0, ..., q_i p_n, s q_0, ..., ^s q_i^, ..., s q_m)` with
/// `s = sum p` and multiplier `d = gcd(q_i, s)`, sorted.
pub fn compose_types(p: &WeightVector, q: &WeightVector, i: usize) -> Result<SimplexType> {
    if !p.gcd().is_one() || !q.gcd().is_one() {
        return Err(Error::Precondition("compose_types needs reduced weights".into()));
    }
    if i >= q.len() {
        return Err(Error::Precondition(format!(
            "index {i} out of range for weights of length {}",
            q.len()
        )));
    }
    let s = p.sum();
    let qi = &q.entries()[i];
    let d = qi.gcd(s);
    let mut v: Vec<BigInt> = p.entries().iter().map(|pj| qi * pj / &d).collect();
    v.extend(
        q.entries()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, qk)| s * qk / &d),
    );
    SimplexType::new(WeightVector::from_unsorted(v)?, d)
}

/// One way of writing a type as `compose_types(p, q, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeDecomposition {
    pub p: WeightVector,
    pub q: WeightVector,
    pub i: usize,
    pub d: BigInt,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TypeDecompositionJson {
    pub p: Vec<Int>,
    pub q: Vec<Int>,
    pub i: usize,
    pub d: Int,
}

impl TypeDecomposition {
    pub fn to_json(&self) -> TypeDecompositionJson {
        TypeDecompositionJson {
            p: ints(self.p.entries()),
            q: ints(self.q.entries()),
            i: self.i,
            d: Int(self.d.clone()),
        }
    }
}

/// Every `(p, q, i)` whose composition is exactly `t`.
///
/// Splits the multiset `t.q_red` into a part `A` (scaled copy of `p`) and a
/// part `B` (scaled copy of `q` minus `q_i`) and inverts the composition
/// formula. A nonempty answer is only a necessary condition for the simplex
/// to split when `lambda > 1`.
pub fn type_decompositions(t: &SimplexType) -> Vec<TypeDecomposition> {
    let entries = t.q_red.entries();
    let len = entries.len();
    let d = &t.lambda;
    let mut found = BTreeSet::new();
    if len < 3 || len >= usize::BITS as usize {
        return Vec::new();
    }
    for mask in 1u64..(1u64 << len) - 1 {
        let (a, b): (Vec<&BigInt>, Vec<&BigInt>) = {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (k, x) in entries.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    a.push(x);
                } else {
                    b.push(x);
                }
            }
            (a, b)
        };
        if a.len() < 2 || b.is_empty() {
            continue;
        }
        let g = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let p: Vec<BigInt> = a.iter().map(|x| *x / &g).collect();
        let s: BigInt = p.iter().sum();
        if !s.is_multiple_of(d) {
            continue;
        }
        let scaled: Vec<BigInt> = b.iter().map(|x| *x * d).collect();
        if !scaled.iter().all(|x| x.is_multiple_of(&s)) {
            continue;
        }
        let qi = d * &g;
        if qi.gcd(&s) != *d {
            continue;
        }
        let mut q: Vec<BigInt> = scaled.iter().map(|x| x / &s).collect();
        q.push(qi.clone());
        let (Ok(pw), Ok(qw)) = (WeightVector::new(p), WeightVector::from_unsorted(q)) else {
            continue;
        };
        if !satisfies_condition(&pw) || !satisfies_condition(&qw) {
            continue;
        }
        for (i, _) in qw.entries().iter().enumerate().filter(|(_, x)| **x == qi) {
            if compose_types(&pw, &qw, i).ok().as_ref() == Some(t) {
                found.insert(TypeDecomposition {
                    p: pw.clone(),
                    q: qw.clone(),
                    i,
                    d: d.clone(),
                });
            }
        }
    }
    found.into_iter().collect()
}

pub fn is_type_decomposable(t: &SimplexType) -> bool {
    !type_decompositions(t).is_empty()
}

/// Positive integer check used by CLI parsing.
pub fn parse_weight_list(text: &str) -> Result<Vec<BigInt>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Precondition(format!("`{t}` is not an integer")))
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|v| {
            if v.iter().any(|x| !x.is_positive()) {
                Err(Error::invalid_weight(&v, "entries must be positive"))
            } else {
                Ok(v)
            }
        })
}
