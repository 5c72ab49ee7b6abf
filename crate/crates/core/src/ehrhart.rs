//! h*-vectors of lattice simplices.
//!
//! Two independent routes: lattice points of the fundamental parallelepiped
//! graded by height, and brute-force counting of dilates followed by exact
//! interpolation of the Ehrhart series numerator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjugate, determinant, smith_normal_form, RationalVector};
use crate::simplex::LatticeSimplex;

/// A lattice point `sum c_i (v_i, 1)` of the half-open parallelepiped
/// spanned by the lifted vertices, with `c_i = numerators[i] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FppPoint {
    pub point: Vec<BigInt>,
    pub height: usize,
    pub numerators: Vec<u64>,
    /// Normalized volume of the simplex.
    pub denominator: u64,
}

impl FppPoint {
    pub fn coeffs(&self) -> RationalVector {
        let den = BigInt::from(self.denominator);
        RationalVector(
            self.numerators
                .iter()
                .map(|&a| BigRational::new(BigInt::from(a), den.clone()))
                .collect(),
        )
    }

    /// `sum c_i (v_i, 1)` recomputed from the coefficients.
    pub fn reconstruct(&self, s: &LatticeSimplex) -> Vec<BigInt> {
        let n = s.dim();
        let mut acc = vec![BigInt::zero(); n + 1];
        for (a, v) in self.numerators.iter().zip(s.vertices()) {
            let a = BigInt::from(*a);
            for k in 0..n {
                acc[k] += &a * &v[k];
            }
            acc[n] += &a;
        }
        acc.into_iter()
            .map(|x| x / BigInt::from(self.denominator))
            .collect()
    }
}

/// Normalized volume as a machine integer; enumeration beyond that is out of
/// reach anyway.
pub(crate) fn volume_u64(s: &LatticeSimplex) -> Result<u64> {
    let vol = s.normalized_volume();
    vol.to_u64()
        .filter(|&v| v <= MAX_ENUMERABLE_VOLUME)
        .ok_or_else(|| Error::Overflow(format!("normalized volume {vol}")))
}

/// Largest normalized volume for which points are enumerated.
pub const MAX_ENUMERABLE_VOLUME: u64 = 1 << 40;

/// All lattice points of the fundamental parallelepiped, sorted
/// lexicographically by point.
///
/// With `U A V = D` the Smith form of the lifted vertex matrix `A`, the
/// cosets of `Z^{n+1} / A Z^{n+1}` are `U^{-1} y` for `0 <= y_i < d_i`, and
/// their coefficient vectors are `V D^{-1} y` reduced mod 1.
pub fn fpp_points(s: &LatticeSimplex) -> Result<Vec<FppPoint>> {
    let a = s.lifted_matrix();
    let n1 = a.rows();
    let vol = volume_u64(s)?;
    let modulus = vol as u128;
    let snf = smith_normal_form(&a);
    let diag: Vec<u64> = snf
        .invariant_factors()
        .iter()
        .map(|d| d.to_u64().expect("invariant factors divide the volume"))
        .collect();

    // generator i: column i of V scaled by N / d_i, reduced mod N
    let big_mod = BigInt::from(vol);
    let gens: Vec<(u64, Vec<u64>)> = diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 1)
        .map(|(i, &d)| {
            let scale = BigInt::from(vol / d);
            let g = (0..n1)
                .map(|j| {
                    (&snf.v[(j, i)] * &scale)
                        .mod_floor(&big_mod)
                        .to_u64()
                        .expect("reduced below the volume")
                })
                .collect();
            (d, g)
        })
        .collect();

    let mut out = Vec::with_capacity(vol as usize);
    let mut digits = vec![0u64; gens.len()];
    let mut cur = vec![0u64; n1];
    loop {
        out.push(materialize(s, &cur, vol));
        // odometer step; a wrapped digit has added d_i * g_i = 0 mod N
        let mut k = 0;
        loop {
            if k == gens.len() {
                out.sort_by(|x, y| x.point.cmp(&y.point));
                debug_assert_eq!(out.len() as u64, vol);
                return Ok(out);
            }
            let (d, g) = &gens[k];
            for (c, gj) in cur.iter_mut().zip(g) {
                *c = ((*c as u128 + *gj as u128) % modulus) as u64;
            }
            digits[k] += 1;
            if digits[k] < *d {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

fn materialize(s: &LatticeSimplex, numerators: &[u64], vol: u64) -> FppPoint {
    let total: u128 = numerators.iter().map(|&a| a as u128).sum();
    debug_assert_eq!(total % vol as u128, 0);
    let mut p = FppPoint {
        point: Vec::new(),
        height: (total / vol as u128) as usize,
        numerators: numerators.to_vec(),
        denominator: vol,
    };
    p.point = p.reconstruct(s);
    p
}

/// Coefficients of the h*-polynomial, `h_0* .. h_d*` for a `d`-simplex
/// (trailing zeros kept).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HStarVector(Vec<u64>);

impl HStarVector {
    pub fn new(coeffs: Vec<u64>) -> Self {
        HStarVector(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn sum(&self) -> u128 {
        self.0.iter().map(|&x| x as u128).sum()
    }

    /// Weakly rises to some index and weakly falls after it.
    pub fn is_unimodal(&self) -> bool {
        let mut falling = false;
        for w in self.0.windows(2) {
            if w[1] < w[0] {
                falling = true;
            } else if w[1] > w[0] && falling {
                return false;
            }
        }
        true
    }

    /// `h_i = h_{d-i}` against the full length.
    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Coefficientwise convolution.
    pub fn product(&self, other: &HStarVector) -> HStarVector {
        if self.0.is_empty() || other.0.is_empty() {
            return HStarVector(Vec::new());
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .expect("h* coefficient overflow");
            }
        }
        HStarVector(out)
    }
}

impl fmt::Debug for HStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h*{:?}", self.0)
    }
}

impl From<&[u64]> for HStarVector {
    fn from(v: &[u64]) -> Self {
        HStarVector(v.to_vec())
    }
}

pub fn is_unimodal(h: &HStarVector) -> bool {
    h.is_unimodal()
}

pub fn is_palindromic(h: &HStarVector) -> bool {
    h.is_palindromic()
}

pub fn polynomial_product(a: &HStarVector, b: &HStarVector) -> HStarVector {
    a.product(b)
}

/// Histogram of parallelepiped points by height.
pub fn hstar(s: &LatticeSimplex) -> Result<HStarVector> {
    Ok(hstar_from_points(s.dim(), &fpp_points(s)?))
}

pub fn hstar_from_points(dim: usize, points: &[FppPoint]) -> HStarVector {
    let mut h = vec![0u64; dim + 1];
    for p in points {
        h[p.height] += 1;
    }
    HStarVector(h)
}

/// `|m S ∩ Z^n|` by scanning the bounding box of `m S` and testing
/// barycentric coordinates exactly. `m = 0` gives the single point `{0}`.
pub fn count_lattice_points(s: &LatticeSimplex, m: u64) -> Result<u64> {
    if m == 0 {
        return Ok(1);
    }
    let n = s.dim();
    let lifted = s.lifted_matrix();
    let det = determinant(&lifted)?;
    let adj = adjugate(&lifted)?;
    let to_i128 = |x: &BigInt| {
        x.to_i128()
            .filter(|v| v.abs() < 1 << 100)
            .ok_or_else(|| Error::Overflow(format!("entry {x} in lattice point count")))
    };
    // det * c = adj * (x, m); flip signs so that membership reads c >= 0
    let sign: i128 = if det.is_negative() { -1 } else { 1 };
    let adj: Vec<Vec<i128>> = (0..=n)
        .map(|i| {
            adj.row(i)
                .iter()
                .map(|x| to_i128(x).map(|v| v * sign))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = m as i128;
    let mut lo = vec![i128::MAX; n];
    let mut hi = vec![i128::MIN; n];
    for v in s.vertices() {
        for k in 0..n {
            let x = to_i128(&v[k])? * m;
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }

    // running value of adj * (x, m) as the box is walked odometer-style
    let mut acc: Vec<i128> = (0..=n)
        .map(|i| (0..n).map(|k| adj[i][k] * lo[k]).sum::<i128>() + adj[i][n] * m)
        .collect();
    let mut x = lo.clone();
    let mut count = 0u64;
    loop {
        if acc.iter().all(|&c| c >= 0) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(count);
            }
            if x[k] < hi[k] {
                x[k] += 1;
                for i in 0..=n {
                    acc[i] += adj[i][k];
                }
                break;
            }
            let span = x[k] - lo[k];
            x[k] = lo[k];
            for i in 0..=n {
                acc[i] -= adj[i][k] * span;
            }
            k += 1;
        }
    }
}

/// h* from `L(0), ..., L(d)` via `h_j = sum_{i<=j} (-1)^i C(d+1, i) L(j-i)`.
pub fn hstar_by_interpolation(s: &LatticeSimplex) -> Result<HStarVector> {
    let d = s.dim();
    let counts: Vec<BigInt> = (0..=d as u64)
        .map(|m| count_lattice_points(s, m).map(BigInt::from))
        .collect::<Result<_>>()?;
    let binom = binomials(d as u64 + 1);
    let mut h = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut acc = BigInt::zero();
        for i in 0..=j {
            let term = &binom[i] * &counts[j - i];
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let v = acc.to_u64().ok_or_else(|| {
            Error::Precondition(format!("interpolated h*_{j} = {acc} is not a nonnegative machine integer"))
        })?;
        h.push(v);
    }
    Ok(HStarVector(h))
}

/// Row `n` of Pascal's triangle.
fn binomials(n: u64) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = &row[k as usize - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
        row.push(next);
    }
    row
}
