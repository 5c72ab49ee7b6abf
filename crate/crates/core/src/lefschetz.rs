//! Weak Lefschetz elements of the graded quotient `R_P`.
//!
//! `R_P` has the parallelepiped points as a monomial basis, graded by height;
//! a product of two basis monomials is the monomial of their sum when that
//! sum is still in the parallelepiped and zero otherwise (it then lies in the
//! ideal of the vertex monomials). Multiplication by a generic degree-1 form
//! `sum a_j x^{p_j} z` is therefore a matrix whose entries are sums of the
//! symbolic coefficients `a_j`, recorded here as index sets.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{fpp_points, FppPoint, HStarVector};
use crate::error::{Error, Result};
use crate::simplex::{is_reflexive, LatticeSimplex};

/// Prime field used for randomized rank estimates (2^31 - 1).
pub const RANK_PRIME: u64 = 2_147_483_647;

/// Largest side length for which the exact symbolic rank is attempted.
pub const SYMBOLIC_LIMIT: usize = 6;

/// Parallelepiped points bucketed by height.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    levels: Vec<Vec<FppPoint>>,
}

impl GradedBasis {
    pub fn levels(&self) -> &[Vec<FppPoint>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &[FppPoint] {
        &self.levels[k]
    }

    pub fn sizes(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }

    pub fn hilbert_numerator(&self) -> HStarVector {
        HStarVector::new(self.sizes())
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Basis with each height level in lexicographic order.
pub fn graded_basis(s: &LatticeSimplex) -> Result<GradedBasis> {
    let points = fpp_points(s)?;
    let mut levels = vec![Vec::new(); s.dim() + 1];
    for p in points {
        let h = p.height;
        levels[h].push(p);
    }
    Ok(GradedBasis { levels })
}

/// Basis ordered to follow `order`, which must list every parallelepiped
/// point exactly once.
pub fn graded_basis_with_order(s: &LatticeSimplex, order: &[Vec<BigInt>]) -> Result<GradedBasis> {
    let basis = graded_basis(s)?;
    if order.len() != basis.len() {
        return Err(Error::Precondition(format!(
            "ordering lists {} points, parallelepiped has {}",
            order.len(),
            basis.len()
        )));
    }
    let rank: HashMap<&[BigInt], usize> = order.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut levels = basis.levels;
    for level in levels.iter_mut() {
        for p in level.iter() {
            if !rank.contains_key(p.point.as_slice()) {
                return Err(Error::Precondition(format!(
                    "ordering is missing parallelepiped point {:?}",
                    p.point.iter().map(ToString::to_string).collect::<Vec<_>>()
                )));
            }
        }
        level.sort_by_key(|p| rank[p.point.as_slice()]);
    }
    Ok(GradedBasis { levels })
}

/// Matrix of multiplication by the generic degree-1 form from height
/// `degree` to height `degree + 1`. Entry `(row, col)` holds the indices `j`
/// of the height-1 basis elements whose coefficient `a_j` appears there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationPattern {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Vec<usize>>,
}

impl MultiplicationPattern {
    pub fn from_entries(degree: usize, rows: usize, cols: usize, entries: Vec<Vec<usize>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} pattern",
                entries.len()
            )));
        }
        Ok(MultiplicationPattern {
            degree,
            rows,
            cols,
            entries,
        })
    }

    pub fn entry(&self, row: usize, col: usize) -> &[usize] {
        &self.entries[row * self.cols + col]
    }

    pub fn target_rank(&self) -> usize {
        self.rows.min(self.cols)
    }

    /// Lower triangular: nothing above the diagonal.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.entry(r, c).is_empty()))
    }

    pub fn empty_diagonal(&self) -> Vec<usize> {
        (0..self.target_rank()).filter(|&i| self.entry(i, i).is_empty()).collect()
    }

    /// Numeric matrix over `F_p` for the coefficient assignment `a`.
    fn substitute(&self, a: &[u64], p: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.entry(r, c).iter().fold(0u64, |acc, &j| (acc + a[j]) % p))
                    .collect()
            })
            .collect()
    }
}

/// Patterns for degrees `0 .. d-1`.
pub fn multiplication_patterns(basis: &GradedBasis) -> Vec<MultiplicationPattern> {
    let levels = basis.levels();
    if levels.len() < 2 {
        return Vec::new();
    }
    let position: HashMap<&[u64], (usize, usize)> = levels
        .iter()
        .enumerate()
        .flat_map(|(h, level)| {
            level
                .iter()
                .enumerate()
                .map(move |(i, p)| (p.numerators.as_slice(), (h, i)))
        })
        .collect();
    let linear = &levels[1];
    let mut sum = Vec::new();
    (0..levels.len() - 1)
        .map(|degree| {
            let (cols, rows) = (levels[degree].len(), levels[degree + 1].len());
            let mut entries = vec![Vec::new(); rows * cols];
            for (c, u) in levels[degree].iter().enumerate() {
                for (j, p) in linear.iter().enumerate() {
                    let den = u.denominator;
                    sum.clear();
                    sum.extend(u.numerators.iter().zip(&p.numerators).map(|(x, y)| x + y));
                    if sum.iter().any(|&x| x >= den) {
                        continue; // product is a multiple of a vertex monomial
                    }
                    let &(h, r) = position.get(sum.as_slice()).expect("sum stays in the parallelepiped");
                    debug_assert_eq!(h, degree + 1);
                    entries[r * cols + c].push(j);
                }
            }
            MultiplicationPattern {
                degree,
                rows,
                cols,
                entries,
            }
        })
        .collect()
}

/// Maximum matching on the nonzero support (Hopcroft–Karp). Upper bound on
/// the rank under every substitution.
pub fn structural_rank(m: &MultiplicationPattern) -> usize {
    let adj: Vec<Vec<usize>> = (0..m.cols)
        .map(|c| (0..m.rows).filter(|&r| !m.entry(r, c).is_empty()).collect())
        .collect();
    hopcroft_karp(&adj, m.rows)
}

fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> usize {
    const NONE: usize = usize::MAX;
    let left = adj.len();
    let mut match_l = vec![NONE; left];
    let mut match_r = vec![NONE; right];
    let mut dist = vec![0usize; left];
    let mut matched = 0;

    loop {
        // BFS layering from free left vertices
        let mut queue = std::collections::VecDeque::new();
        for u in 0..left {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = NONE;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NONE {
                    reachable_free = true;
                } else if dist[w] == NONE {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            return matched;
        }
        for u in 0..left {
            if match_l[u] == NONE && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                matched += 1;
            }
        }
    }

    fn augment(u: usize, adj: &[Vec<usize>], ml: &mut [usize], mr: &mut [usize], dist: &mut [usize]) -> bool {
        for &v in &adj[u] {
            let w = mr[v];
            if w == NONE || (dist[w] == dist[u] + 1 && augment(w, adj, ml, mr, dist)) {
                ml[u] = v;
                mr[v] = u;
                return true;
            }
        }
        dist[u] = NONE;
        false
    }
}

/// Rank of a matrix over `F_p` by Gaussian elimination, `p < 2^31`.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    debug_assert!(p < 1 << 31);
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut support = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let (done, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &mut done[rank];
        let inv = pow_mod(pivot_row[c], p - 2, p);
        support.clear();
        for (j, x) in pivot_row.iter_mut().enumerate().skip(c) {
            if *x != 0 {
                *x = *x * inv % p;
                support.push(j);
            }
        }
        for row in rest.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let neg = p - row[c];
            for &j in &support {
                row[j] = (row[j] + neg * pivot_row[j]) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn random_assignment<R: Rng>(rng: &mut R, vars: usize) -> Vec<u64> {
    (0..vars).map(|_| rng.gen_range(1..RANK_PRIME)).collect()
}

fn variable_count(m: &MultiplicationPattern) -> usize {
    m.entries.iter().flatten().max().map_or(0, |&j| j + 1)
}

/// Best rank over `trials` random substitutions in `F_p`, `p = 2^31 - 1`.
/// Every observed rank is a lower bound on the generic rank.
pub fn generic_rank_lower_bound(m: &MultiplicationPattern, seed: u64, trials: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = variable_count(m);
    let target = m.target_rank();
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let a = random_assignment(&mut rng, vars);
        best = best.max(rank_mod_p(m.substitute(&a, RANK_PRIME), RANK_PRIME));
        if best == target {
            break;
        }
    }
    best
}

/// Polynomial in the coefficient variables, exponent vector -> coefficient.
type Poly = BTreeMap<Vec<u32>, BigInt>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn poly_add_assign(a: &mut Poly, b: &Poly, negate: bool) {
    for (e, c) in b {
        let entry = a.entry(e.clone()).or_insert_with(BigInt::zero);
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
    }
    a.retain(|_, c| !c.is_zero());
}

fn symbolic_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        let mut one = Poly::new();
        one.insert(Vec::new(), BigInt::one());
        return one;
    }
    let mut acc = Poly::new();
    for (c, entry) in m[0].iter().enumerate() {
        if entry.is_empty() {
            continue;
        }
        let sub: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = poly_mul(entry, &symbolic_det(&sub));
        poly_add_assign(&mut acc, &term, c % 2 == 1);
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exact generic rank by expanding minors as polynomials in the `a_j`.
/// `None` when either side exceeds [`SYMBOLIC_LIMIT`].
pub fn symbolic_rank(m: &MultiplicationPattern) -> Option<usize> {
    if m.rows > SYMBOLIC_LIMIT || m.cols > SYMBOLIC_LIMIT {
        return None;
    }
    let vars = variable_count(m);
    let poly_entry = |r: usize, c: usize| -> Poly {
        let mut p = Poly::new();
        for &j in m.entry(r, c) {
            let mut e = vec![0u32; vars];
            e[j] = 1;
            *p.entry(e).or_insert_with(BigInt::zero) += 1;
        }
        p
    };
    for k in (1..=m.target_rank()).rev() {
        for rows in subsets(m.rows, k) {
            for cols in subsets(m.cols, k) {
                let minor: Vec<Vec<Poly>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| poly_entry(r, c)).collect())
                    .collect();
                if !symbolic_det(&minor).is_empty() {
                    return Some(k);
                }
            }
        }
    }
    Some(0)
}

/// Why no weak Lefschetz element exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// No matching of size `min(rows, cols)` in the support.
    Structural { rank: usize },
    /// Every maximal minor vanishes identically.
    Symbolic { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WlVerdict {
    /// One coefficient assignment in `F_p` with maximal rank in every degree.
    Exists { witness: Vec<u64> },
    NotExists { degree: usize, certificate: Certificate },
    Undetermined {
        degree: usize,
        structural_rank: usize,
        best_rank: usize,
    },
}

impl WlVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            WlVerdict::Exists { .. } => "exists",
            WlVerdict::NotExists { .. } => "not_exists",
            WlVerdict::Undetermined { .. } => "undetermined",
        }
    }
}

/// Ranks observed at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRanks {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub target: usize,
    pub structural: usize,
    pub observed: usize,
    pub symbolic: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct WlReport {
    pub verdict: WlVerdict,
    pub degrees: Vec<DegreeRanks>,
    pub hstar: HStarVector,
    pub prime: u64,
    pub trials: usize,
}

impl WlReport {
    /// Per-trial Schwartz–Zippel bound on missing a full-rank substitution at
    /// the worst degree, as `(numerator, denominator)`: a nonzero minor of
    /// size `r` has total degree `r`.
    pub fn failure_bound(&self) -> (u64, u64) {
        let worst = self.degrees.iter().map(|d| d.target).max().unwrap_or(0);
        (worst as u64, self.prime)
    }

    pub fn to_json(&self) -> WlJson {
        let (degree, witness) = match &self.verdict {
            WlVerdict::Exists { witness } => (None, Some(witness.clone())),
            WlVerdict::NotExists { degree, .. } => (Some(*degree), None),
            WlVerdict::Undetermined { degree, .. } => (Some(*degree), None),
        };
        WlJson {
            verdict: self.verdict.tag().to_string(),
            degree,
            witness,
            prime: self.prime,
            trials: self.trials,
        }
    }
}

/// `{"verdict": ..., "degree": ..., "witness": ..., "prime": ..., "trials": ...}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WlJson {
    pub verdict: String,
    pub degree: Option<usize>,
    pub witness: Option<Vec<u64>>,
    pub prime: u64,
    pub trials: usize,
}

/// Decides existence of a weak Lefschetz element for a reflexive simplex.
pub fn weak_lefschetz_verdict(s: &LatticeSimplex, seed: u64, trials: usize) -> Result<WlReport> {
    if !is_reflexive(s).0 {
        return Err(Error::Precondition(
            "weak Lefschetz test needs a reflexive simplex".into(),
        ));
    }
    Ok(verdict_for_basis(&graded_basis(s)?, seed, trials))
}

/// Verdict from an already built basis.
///
/// A structural deficiency is substitution-independent and settles the
/// question. Otherwise one random substitution that is simultaneously of
/// maximal rank in every degree is a witness; full-rank sets are Zariski
/// open, so a single witness suffices.
pub fn verdict_for_basis(basis: &GradedBasis, seed: u64, trials: usize) -> WlReport {
    let trials = trials.max(1);
    let patterns = multiplication_patterns(basis);
    let mut degrees: Vec<DegreeRanks> = patterns
        .iter()
        .map(|m| DegreeRanks {
            degree: m.degree,
            rows: m.rows,
            cols: m.cols,
            target: m.target_rank(),
            structural: structural_rank(m),
            observed: 0,
            symbolic: None,
        })
        .collect();
    let report = |verdict, degrees| WlReport {
        verdict,
        degrees,
        hstar: basis.hilbert_numerator(),
        prime: RANK_PRIME,
        trials,
    };

    if let Some(d) = degrees.iter().find(|d| d.structural < d.target) {
        let verdict = WlVerdict::NotExists {
            degree: d.degree,
            certificate: Certificate::Structural { rank: d.structural },
        };
        return report(verdict, degrees);
    }

    let vars = basis.level(1).len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let a = random_assignment(&mut rng, vars);
        let mut all_full = true;
        for (m, d) in patterns.iter().zip(degrees.iter_mut()) {
            let r = rank_mod_p(m.substitute(&a, RANK_PRIME), RANK_PRIME);
            d.observed = d.observed.max(r);
            all_full &= r == d.target;
        }
        if all_full {
            return report(WlVerdict::Exists { witness: a }, degrees);
        }
    }

    for (m, d) in patterns.iter().zip(degrees.iter_mut()) {
        if d.observed < d.target {
            d.symbolic = symbolic_rank(m);
        }
    }
    if let Some(d) = degrees.iter().find(|d| d.symbolic.is_some_and(|r| r < d.target)) {
        let verdict = WlVerdict::NotExists {
            degree: d.degree,
            certificate: Certificate::Symbolic {
                rank: d.symbolic.unwrap_or_default(),
            },
        };
        return report(verdict, degrees);
    }
    let d = degrees
        .iter()
        .find(|d| d.observed < d.target)
        .or_else(|| degrees.first())
        .cloned()
        .expect("at least one degree when no witness was found");
    let verdict = WlVerdict::Undetermined {
        degree: d.degree,
        structural_rank: d.structural,
        best_rank: d.observed,
    };
    report(verdict, degrees)
}
