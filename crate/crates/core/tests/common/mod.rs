//! Independent oracles and property checks shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use lattice_simplex::ehrhart::{fpp_points, hstar, is_palindromic, is_unimodal, polynomial_product};
use lattice_simplex::linalg::{adjugate, determinant, smith_normal_form, IntMatrix};
use lattice_simplex::weights::{compose_types, type_decompositions};
use lattice_simplex::{
    build_delta_q, free_sum, is_integrally_closed, is_reflexive, simplex_type, HStarVector, LatticeSimplex,
    WeightVector,
};

/// Largest weight sum of a reduced admissible vector with `len` entries
/// (Sylvester's sequence products).
pub const MAX_WEIGHT_SUM: [u64; 6] = [0, 1, 2, 6, 42, 1806];

/// Reduced admissible weights of length `len` by scanning sums: every entry
/// divides the total, entries are coprime overall.
pub fn reduced_weights_by_sums(len: usize) -> Vec<Vec<u64>> {
    fn fill(divs: &[u64], left: usize, rest: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            if rest == 0 && cur.iter().fold(0, |g, &x| g.gcd(&x)) == 1 {
                out.push(cur.clone());
            }
            return;
        }
        for &d in divs.iter().filter(|&&d| d >= min && d * left as u64 <= rest) {
            cur.push(d);
            fill(divs, left - 1, rest - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for s in len as u64..=MAX_WEIGHT_SUM[len] {
        let divs: Vec<u64> = (1..=s).filter(|d| s % d == 0).collect();
        fill(&divs, len, s, 1, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

pub fn wv(q: &[u64]) -> WeightVector {
    WeightVector::from_u64(q).unwrap()
}

fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("oracle inputs are small")
}

/// Barycentric numerators `adj(A) (x, h)` against `det A` of the lifted
/// vertex matrix, in machine integers.
struct Barycentric {
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl Barycentric {
    fn new(s: &LatticeSimplex) -> Self {
        let a = s.lifted_matrix();
        let adj = adjugate(&a).unwrap();
        Barycentric {
            adj: (0..adj.rows()).map(|i| adj.row(i).iter().map(to_i128).collect()).collect(),
            det: to_i128(&determinant(&a).unwrap()),
        }
    }

    /// Numerators scaled so the denominator is `|det|`.
    fn numerators(&self, x: &[i64], h: i64) -> Vec<i128> {
        let sign = self.det.signum();
        self.adj
            .iter()
            .map(|row| {
                let dot: i128 = row.iter().zip(x.iter().chain(std::iter::once(&h))).map(|(a, &b)| a * b as i128).sum();
                dot * sign
            })
            .collect()
    }
}

/// Lattice points of `m P` by scanning the bounding box.
pub fn dilate_points(s: &LatticeSimplex, m: i64) -> Vec<Vec<i64>> {
    scan(s, m, |c, _| c.iter().all(|&x| x >= 0))
}

/// Parallelepiped lattice points `(x, h)` by scanning the boxes of `h P`.
pub fn box_fpp(s: &LatticeSimplex) -> Vec<(Vec<i64>, usize)> {
    let d = s.dim() as i64;
    let mut out = Vec::new();
    for h in 0..=d {
        for x in scan(s, h, |c, det| c.iter().all(|&x| x >= 0 && x < det)) {
            out.push((x, h as usize));
        }
    }
    out
}

fn scan(s: &LatticeSimplex, m: i64, keep: impl Fn(&[i128], i128) -> bool) -> Vec<Vec<i64>> {
    let b = Barycentric::new(s);
    let n = s.dim();
    let coord = |k: usize| s.vertices().iter().map(move |v| v[k].to_i64().unwrap());
    let lo: Vec<i64> = (0..n).map(|k| m * coord(k).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|k| m * coord(k).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if keep(&b.numerators(&x, m), b.det.abs()) {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
            k += 1;
        }
    }
}

/// Integral closure from the definition: every lattice point of `m P` for
/// `2 <= m <= dim - 1` is a sum of `m` lattice points of `P`.
pub fn brute_force_closed(s: &LatticeSimplex) -> bool {
    let base = dilate_points(s, 1);
    let mut sums: HashSet<Vec<i64>> = base.iter().cloned().collect();
    for m in 2..s.dim().max(2) as i64 {
        sums = sums
            .iter()
            .flat_map(|a| base.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
            .collect();
        if dilate_points(s, m).iter().any(|x| !sums.contains(x)) {
            return false;
        }
    }
    true
}

/// h* from the scanned parallelepiped.
pub fn box_hstar(s: &LatticeSimplex) -> Vec<u64> {
    let mut h = vec![0u64; s.dim() + 1];
    for (_, k) in box_fpp(s) {
        h[k] += 1;
    }
    h
}

pub fn check_smith(m: &IntMatrix) -> Result<(), String> {
    let f = smith_normal_form(m);
    if f.u.mul(m).unwrap().mul(&f.v).unwrap() != f.d {
        return Err(format!("U M V != D for {m:?}"));
    }
    for (name, x) in [("U", &f.u), ("V", &f.v)] {
        if determinant(x).unwrap().abs() != BigInt::from(1) {
            return Err(format!("{name} not unimodular for {m:?}"));
        }
    }
    for r in 0..f.d.rows() {
        for c in 0..f.d.cols() {
            if r != c && !f.d[(r, c)].is_zero() {
                return Err(format!("D not diagonal for {m:?}"));
            }
        }
    }
    let diag = f.invariant_factors();
    if diag.iter().any(Signed::is_negative) {
        return Err(format!("negative invariant factor {diag:?}"));
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok {
            return Err(format!("divisibility chain broken: {diag:?}"));
        }
    }
    if m.is_square() && determinant(m).unwrap().abs() != diag.iter().product::<BigInt>() {
        return Err(format!("|det| != product of invariant factors {diag:?}"));
    }
    Ok(())
}

/// Parallelepiped points: coefficients in `[0, 1)`, summing to the height,
/// re-summing to the point, count equal to the volume, and matching the box
/// scan exactly.
pub fn check_fpp(s: &LatticeSimplex) -> Result<(), String> {
    let points = fpp_points(s).map_err(|e| e.to_string())?;
    if BigInt::from(points.len()) != s.normalized_volume() {
        return Err(format!("{} points, volume {}", points.len(), s.normalized_volume()));
    }
    for p in &points {
        let c = p.coeffs();
        if c.iter().any(|x| x.is_negative() || x.numer() >= x.denom()) {
            return Err(format!("coefficient out of [0,1) at {:?}", p.point));
        }
        if c.sum() != num_rational::BigRational::from_integer(BigInt::from(p.height)) {
            return Err(format!("coefficients do not sum to the height at {:?}", p.point));
        }
        if p.reconstruct(s) != p.point {
            return Err(format!("re-summation mismatch at {:?}", p.point));
        }
    }
    let mut ours: Vec<(Vec<i64>, usize)> = points
        .iter()
        .map(|p| {
            let n = p.point.len() - 1;
            (p.point[..n].iter().map(|x| x.to_i64().unwrap()).collect(), p.height)
        })
        .collect();
    let mut scanned = box_fpp(s);
    ours.sort();
    scanned.sort();
    if ours != scanned {
        return Err("Smith-coset points differ from the box scan".into());
    }
    Ok(())
}

pub fn check_stanley(a: &[u64], b: &[u64]) -> Result<(), String> {
    let (ha, hb) = (HStarVector::new(a.to_vec()), HStarVector::new(b.to_vec()));
    let p = polynomial_product(&ha, &hb);
    if !is_palindromic(&p) || !is_unimodal(&p) {
        return Err(format!("{a:?} * {b:?} = {p:?}"));
    }
    Ok(())
}

/// `compose_types(p, q, i)` is among the decompositions of its result, and
/// every listed decomposition recomposes to it.
pub fn check_round_trip(p: &WeightVector, q: &WeightVector, i: usize) -> Result<(), String> {
    let t = compose_types(p, q, i).map_err(|e| e.to_string())?;
    let ds = type_decompositions(&t);
    let found = ds
        .iter()
        .any(|d| &d.p == p && &d.q == q && d.q.entries()[d.i] == q.entries()[i]);
    if !found {
        return Err(format!("({p}, {q}, {i}) -> {t} not recovered"));
    }
    for d in &ds {
        if compose_types(&d.p, &d.q, d.i).map_err(|e| e.to_string())? != t {
            return Err(format!("decomposition ({}, {}, {}) of {t} does not recompose", d.p, d.q, d.i));
        }
    }
    Ok(())
}

/// Free sum of two `Delta_Q`: reflexive, h* multiplicative, closure and
/// unimodality inherited, and the type matches the composition formula.
pub fn check_free_sum(p: &WeightVector, q: &WeightVector, i: usize) -> Result<(), String> {
    let e = |e: lattice_simplex::Error| e.to_string();
    let (sp, sq) = (build_delta_q(p).map_err(e)?, build_delta_q(q).map_err(e)?);
    let s = free_sum(&sp, &sq, i).map_err(e)?;
    let tag = format!("{p} *_{i} {q}");
    if !is_reflexive(&s).0 {
        return Err(format!("{tag} not reflexive"));
    }
    let (hp, hq, hs) = (hstar(&sp).map_err(e)?, hstar(&sq).map_err(e)?, hstar(&s).map_err(e)?);
    if hs != hp.product(&hq) {
        return Err(format!("{tag}: h* {hs:?} != {hp:?} * {hq:?}"));
    }
    if hp.is_unimodal() && hq.is_unimodal() && !hs.is_unimodal() {
        return Err(format!("{tag}: unimodality lost"));
    }
    let closed = |x: &LatticeSimplex| is_integrally_closed(x).map(|v| v.closed);
    if closed(&sp).map_err(e)? && closed(&sq).map_err(e)? && !closed(&s).map_err(e)? {
        return Err(format!("{tag}: integral closure lost"));
    }
    let t = simplex_type(&s).map_err(e)?;
    let formula = compose_types(p, q, i).map_err(e)?;
    if t != formula {
        return Err(format!("{tag}: geometric type {t} != formula {formula}"));
    }
    Ok(())
}

/// Hibi: reflexive iff palindromic h*, for simplices with interior origin.
pub fn check_hibi(s: &LatticeSimplex) -> Result<(), String> {
    let h = hstar(s).map_err(|e| e.to_string())?;
    let reflexive = is_reflexive(s).0;
    if reflexive != h.is_palindromic() {
        return Err(format!("reflexive={reflexive} but h* {h:?}"));
    }
    Ok(())
}

pub fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            IntMatrix::from_rows(&rows).unwrap()
        })
    })
}

/// Nonnegative palindromic unimodal sequences.
pub fn palindromic_unimodal() -> impl Strategy<Value = Vec<u64>> {
    (prop::collection::vec(0u64..20, 1..6), any::<bool>()).prop_map(|(steps, odd)| {
        let mut half = Vec::new();
        let mut acc = 0;
        for s in steps {
            acc += s;
            half.push(acc);
        }
        let mut out = half.clone();
        let mirror = if odd { &half[..half.len() - 1] } else { &half[..] };
        out.extend(mirror.iter().rev());
        out
    })
}

/// Reduced admissible weights whose length lies in `lens`, drawn from the
/// enumeration.
pub fn admissible_weights(lens: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = WeightVector> {
    let all: Vec<WeightVector> = lens
        .flat_map(reduced_weights_by_sums)
        .map(|q| wv(&q))
        .collect();
    prop::sample::select(all)
}

/// Pair of weights with a vertex index into the second.
pub fn free_sum_input(lens: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (WeightVector, WeightVector, usize)> {
    (admissible_weights(lens.clone()), admissible_weights(lens))
        .prop_flat_map(|(p, q)| {
            let n = q.len();
            (Just(p), Just(q), 0..n)
        })
}

/// Full-dimensional simplices with small coordinates, dimensions 1 to 3.
pub fn small_simplex() -> impl Strategy<Value = LatticeSimplex> {
    (1usize..=3)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, n), n + 1))
        .prop_filter_map("degenerate", |vs| {
            let refs: Vec<&[i64]> = vs.iter().map(Vec::as_slice).collect();
            LatticeSimplex::from_i64(&refs).ok()
        })
}
