//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt`/`BigRational`; there is no floating
//! point anywhere on the math path. Matrices are tiny (at most a dozen rows),
//! so the algorithms favour clarity over asymptotics.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<BigInt>]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&owned).expect("rectangular literal")
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Copy with row `skip_row` and column `skip_col` removed.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != skip_row) {
            for j in (0..self.cols).filter(|&j| j != skip_col) {
                data.push(self[(i, j)].clone());
            }
        }
        IntMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self[(src, j)];
            self[(dst, j)] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self[(i, src)];
            self[(i, dst)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| {
                self.row(i)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            }))
            .finish()
    }
}

/// Vector of rationals; `BigRational` keeps every entry in lowest terms with a
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    pub fn sum(&self) -> BigRational {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for RationalVector {
    type Output = BigRational;
    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&p| !a[(p, k)].is_zero()) {
                Some(p) => {
                    a.swap_rows(k, p);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let det = a[(n - 1, n - 1)].clone();
    Ok(if negate { -det } else { det })
}

/// Adjugate matrix, so that `m * adj(m) = det(m) * I`.
pub fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension("adjugate of non-square matrix".into()));
    }
    let n = m.rows;
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut adj = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let cof = determinant(&m.minor(i, j))?;
            adj[(j, i)] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    Ok(adj)
}

/// Result of a Smith normal form computation: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries `d_1 | d_2 | ...`, zeros included.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|x| !x.is_zero())
            .count()
    }
}

/// Smith normal form by gcd-reduction pivoting. `U` and `V` are unimodular and
/// the diagonal of `D` is nonnegative with each nonzero entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &d[(i, j)];
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish_smith(u, d, v);
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }

            // divisibility: fold an offending row into the pivot row and retry
            let pivot = d[(t, t)].clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_smith(u, d, v)
}

fn finish_smith(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix) -> SmithForm {
    for t in 0..d.rows.min(d.cols) {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Solves `a x = b` exactly over the rationals.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Result<RationalVector> {
    if !a.is_square() || a.rows != b.len() {
        return Err(Error::Dimension(format!(
            "solve with {}x{} matrix and rhs of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let n = a.rows;
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .chain(std::iter::once(&b[i]))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&p| !aug[p][k].is_zero()).ok_or(Error::Singular)?;
        aug.swap(k, p);
        let pivot = aug[k][k].clone();
        for x in aug[k][k..].iter_mut() {
            *x = &*x / &pivot;
        }
        let pivot_row = aug[k].clone();
        for (i, row) in aug.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= &f * p;
            }
        }
    }
    Ok(RationalVector(aug.into_iter().map(|r| r[n].clone()).collect()))
}

/// Unimodular `U` with `U q = e_last`, for an integer vector with gcd 1.
pub fn unimodular_completion(q: &[BigInt]) -> Result<IntMatrix> {
    let n = q.len();
    if n == 0 {
        return Err(Error::invalid_weight(q, "empty vector"));
    }
    let g = q.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_one() {
        return Err(Error::invalid_weight(q, format!("gcd is {g}, expected 1")));
    }
    let mut w = q.to_vec();
    let mut u = IntMatrix::identity(n);
    loop {
        let pivot = (0..n)
            .filter(|&i| !w[i].is_zero())
            .min_by(|&a, &b| w[a].abs().cmp(&w[b].abs()))
            .expect("gcd 1 implies a nonzero entry");
        let mut reduced = false;
        for i in 0..n {
            if i == pivot || w[i].is_zero() {
                continue;
            }
            let f = -w[i].div_floor(&w[pivot]);
            let delta = &f * &w[pivot];
            w[i] += delta;
            u.add_row_multiple(i, pivot, &f);
            reduced = true;
        }
        if !reduced {
            // only the pivot is left and it must be a unit
            let last = n - 1;
            w.swap(pivot, last);
            u.swap_rows(pivot, last);
            if w[last].is_negative() {
                w[last] = -&w[last];
                u.negate_row(last);
            }
            debug_assert!(w[last].is_one());
            return Ok(u);
        }
    }
}

/// Index of a sublattice inside the ambient integer lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    /// The vectors do not span a full-rank sublattice.
    Infinite,
}

/// Index of the lattice generated by `vectors` in `Z^k`, where `k` is their
/// common length.
pub fn lattice_index(vectors: &[Vec<BigInt>]) -> Result<LatticeIndex> {
    let Some(first) = vectors.first() else {
        return Ok(LatticeIndex::Infinite);
    };
    let ambient = first.len();
    if vectors.iter().any(|v| v.len() != ambient) {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    if ambient == 0 {
        return Ok(LatticeIndex::Finite(BigInt::one()));
    }
    let snf = smith_normal_form(&IntMatrix::from_columns(vectors)?);
    if snf.rank() < ambient {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(
        snf.invariant_factors().iter().product(),
    ))
}

/// Pairwise size reduction of the rows of `m`: repeatedly subtracts the
/// nearest-integer multiple of one row from another while that strictly
/// shortens it. Row operations only, so the row lattice is unchanged.
pub fn reduce_rows(m: &mut IntMatrix) {
    let norm = |m: &IntMatrix, i: usize| -> BigInt { m.row(i).iter().map(|x| x * x).sum() };
    let dot = |m: &IntMatrix, i: usize, j: usize| -> BigInt {
        m.row(i).iter().zip(m.row(j)).map(|(a, b)| a * b).sum()
    };
    loop {
        let mut changed = false;
        for i in 0..m.rows {
            for j in 0..m.rows {
                if i == j {
                    continue;
                }
                let nj = norm(m, j);
                if nj.is_zero() {
                    continue;
                }
                // nearest integer to <r_i, r_j> / |r_j|^2
                let num = dot(m, i, j);
                let f = (BigInt::from(2) * &num + &nj).div_floor(&(BigInt::from(2) * &nj));
                if f.is_zero() {
                    continue;
                }
                let before = norm(m, i);
                let neg = -&f;
                m.add_row_multiple(i, j, &neg);
                if norm(m, i) < before {
                    changed = true;
                } else {
                    m.add_row_multiple(i, j, &f);
                }
            }
        }
        if !changed {
            return;
        }
    }
}

#[cfg(test)]
pub(crate) fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

#[cfg(test)]
pub(crate) fn big_vec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(big(n), big(d))
    }

    fn check_smith(m: &IntMatrix) -> SmithForm {
        let snf = smith_normal_form(m);
        let prod = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(prod, snf.d);
        assert_eq!(determinant(&snf.u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&snf.v).unwrap().abs(), BigInt::one());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.invariant_factors();
        assert!(diag.iter().all(|x| !x.is_negative()));
        let nonzero: Vec<_> = diag.iter().filter(|x| !x.is_zero()).collect();
        for w in nonzero.windows(2) {
            assert!(w[1].is_multiple_of(w[0]), "{diag:?}");
        }
        snf
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(determinant(&IntMatrix::identity(3)).unwrap(), big(1));
        assert_eq!(
            determinant(&IntMatrix::diagonal(&big_vec(&[2, 3]))).unwrap(),
            big(6)
        );
        let m = IntMatrix::from_i64_rows(&[
            &[1, 0, 0, -3],
            &[0, 1, 0, -4],
            &[0, 0, 1, -4],
            &[1, 1, 1, 1],
        ]);
        assert_eq!(determinant(&m).unwrap().abs(), big(12));
        assert!(matches!(
            determinant(&IntMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = IntMatrix::from_i64_rows(&[&[0, 2], &[3, 0]]);
        assert_eq!(determinant(&m).unwrap(), big(-6));
        let singular = IntMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 5]]);
        assert_eq!(determinant(&singular).unwrap(), big(0));
    }

    #[test]
    fn adjugate_inverts() {
        let m = IntMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let det = determinant(&m).unwrap();
        let prod = m.mul(&adjugate(&m).unwrap()).unwrap();
        assert_eq!(prod, IntMatrix::diagonal(&vec![det; 3]));
    }

    #[test]
    fn smith_examples() {
        let id = IntMatrix::identity(3);
        let snf = check_smith(&id);
        assert_eq!(snf.d, id);

        let row = IntMatrix::from_i64_rows(&[&[1, 1, 2]]);
        assert_eq!(check_smith(&row).invariant_factors(), big_vec(&[1]));
        assert_eq!(check_smith(&row).d, IntMatrix::from_i64_rows(&[&[1, 0, 0]]));

        let diag = IntMatrix::diagonal(&big_vec(&[2, 3]));
        assert_eq!(check_smith(&diag).invariant_factors(), big_vec(&[1, 6]));

        let m = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(check_smith(&m).invariant_factors(), big_vec(&[2, 6, 12]));

        let rank_deficient = IntMatrix::from_i64_rows(&[&[2, 4], &[1, 2], &[3, 6]]);
        assert_eq!(check_smith(&rank_deficient).invariant_factors(), big_vec(&[1, 0]));
    }

    #[test]
    fn solve_examples() {
        let x = solve_rational(&IntMatrix::identity(2), &big_vec(&[7, -2])).unwrap();
        assert_eq!(x.0, vec![r(7, 1), r(-2, 1)]);

        let x = solve_rational(&IntMatrix::diagonal(&big_vec(&[2, 3])), &big_vec(&[1, 1])).unwrap();
        assert_eq!(x.0, vec![r(1, 2), r(1, 3)]);

        // lifted vertices of conv(e1, e2, e3, (-3,-4,-4))
        let a = IntMatrix::from_i64_rows(&[
            &[1, 0, 0, -3],
            &[0, 1, 0, -4],
            &[0, 0, 1, -4],
            &[1, 1, 1, 1],
        ]);
        let b = big_vec(&[0, 0, 0, 1]);
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x.0, vec![r(3, 12), r(4, 12), r(4, 12), r(1, 12)]);
        assert!(x.iter().all(|c| c.is_positive()));
        assert_eq!(x.sum(), r(1, 1));

        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve_rational(&singular, &big_vec(&[1, 1])), Err(Error::Singular));
    }

    #[test]
    fn completion_examples() {
        for q in [vec![1], vec![1, 1], vec![1, 1, 2], vec![6, 10, 15], vec![-4, 9]] {
            let qb = big_vec(&q);
            let u = unimodular_completion(&qb).unwrap();
            let mut e = vec![big(0); q.len()];
            *e.last_mut().unwrap() = big(1);
            assert_eq!(u.mul_vec(&qb).unwrap(), e, "q = {q:?}");
            assert_eq!(determinant(&u).unwrap().abs(), big(1));
        }
        assert!(matches!(
            unimodular_completion(&big_vec(&[2, 4])),
            Err(Error::InvalidWeight { .. })
        ));
    }

    #[test]
    fn lattice_index_examples() {
        let unit = vec![big_vec(&[1, 0, 0]), big_vec(&[0, 1, 0]), big_vec(&[0, 0, 1])];
        assert_eq!(lattice_index(&unit).unwrap(), LatticeIndex::Finite(big(1)));
        let reeve = vec![big_vec(&[1, 0, 0]), big_vec(&[0, 1, 0]), big_vec(&[1, 1, 2])];
        assert_eq!(lattice_index(&reeve).unwrap(), LatticeIndex::Finite(big(2)));
        assert_eq!(
            lattice_index(&[big_vec(&[2, 0])]).unwrap(),
            LatticeIndex::Infinite
        );
    }

    #[test]
    fn reduce_rows_preserves_lattice() {
        let mut m = IntMatrix::from_i64_rows(&[&[1, 0, 37], &[0, 1, 41], &[5, 7, 3]]);
        let before = lattice_index(&m.to_rows()).unwrap();
        reduce_rows(&mut m);
        assert_eq!(lattice_index(&m.to_rows()).unwrap(), before);
        let max = m.entries().iter().map(|x| x.abs()).max().unwrap();
        assert!(max <= big(37));
    }
}
