//! Lattice simplices, their weight vectors and types, reflexivity, and the
//! free-sum construction `P *_i Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{ints, unints, Int};
use crate::linalg::{determinant, reduce_rows, solve_rational, unimodular_completion, IntMatrix, RationalVector};
use crate::weights::satisfies_condition;

/// Full-dimensional simplex in `Z^n` given by an ordered list of `n + 1`
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeSimplex {
    vertices: Vec<Vec<BigInt>>,
}

impl LatticeSimplex {
    pub fn new(vertices: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = vertices.len().checked_sub(1).ok_or_else(|| {
            Error::Dimension("a simplex needs at least one vertex".into())
        })?;
        if let Some(bad) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::Dimension(format!(
                "{} vertices need {n} coordinates each, got {}",
                n + 1,
                bad.len()
            )));
        }
        let s = LatticeSimplex { vertices };
        if determinant(&s.lifted_matrix())?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(s)
    }

    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        Self::new(
            vertices
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// `conv(e_1, ..., e_n, -sum e_i)`.
    pub fn standard_reflexive(n: usize) -> Self {
        let mut vertices: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        vertices.push(vec![BigInt::from(-1); n]);
        Self::new(vertices).expect("standard simplex is full-dimensional")
    }

    /// Reeve tetrahedron `conv(0, e_1, e_2, e_1 + e_2 + h e_3)`.
    pub fn reeve(h: i64) -> Result<Self> {
        Self::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, h]])
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    /// Square matrix whose columns are the lifted vertices `(v_i, 1)`.
    pub fn lifted_matrix(&self) -> IntMatrix {
        let columns: Vec<Vec<BigInt>> = self
            .vertices
            .iter()
            .map(|v| v.iter().cloned().chain(std::iter::once(BigInt::one())).collect())
            .collect();
        IntMatrix::from_columns(&columns).expect("vertices share a length")
    }

    /// `|det|` of the lifted vertex matrix.
    pub fn normalized_volume(&self) -> BigInt {
        determinant(&self.lifted_matrix())
            .expect("lifted matrix is square")
            .abs()
    }

    /// Barycentric coordinates of the origin.
    pub fn origin_barycentric(&self) -> RationalVector {
        let mut rhs = vec![BigInt::zero(); self.dim() + 1];
        rhs[self.dim()] = BigInt::one();
        solve_rational(&self.lifted_matrix(), &rhs).expect("nondegenerate simplex")
    }

    pub fn origin_in_interior(&self) -> bool {
        self.origin_barycentric().iter().all(|c| c.is_positive())
    }

    pub fn origin_in_closure(&self) -> bool {
        self.origin_barycentric().iter().all(|c| !c.is_negative())
    }

    /// `|det(v_0 .. v̂_i .. v_n)|` in vertex order.
    pub fn aligned_minors(&self) -> Vec<BigInt> {
        let n = self.dim();
        if n == 0 {
            return vec![BigInt::one()];
        }
        (0..=n)
            .map(|i| {
                let cols: Vec<Vec<BigInt>> = self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                let m = IntMatrix::from_columns(&cols).expect("n columns of length n");
                determinant(&m).expect("square").abs()
            })
            .collect()
    }

    pub fn to_json(&self) -> SimplexJson {
        SimplexJson {
            dim: self.dim(),
            vertices: self.vertices.iter().map(|v| ints(v)).collect(),
        }
    }

    pub fn from_json(json: SimplexJson) -> Result<Self> {
        let s = Self::new(json.vertices.into_iter().map(unints).collect())?;
        if s.dim() != json.dim {
            return Err(Error::Dimension(format!(
                "declared dim {} but vertices describe dim {}",
                json.dim,
                s.dim()
            )));
        }
        Ok(s)
    }
}

/// `{"dim": n, "vertices": [[...], ...]}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SimplexJson {
    pub dim: usize,
    pub vertices: Vec<Vec<Int>>,
}

/// Positive, nondecreasing integer weights with their cached sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    q: Vec<BigInt>,
    sum: BigInt,
}

impl WeightVector {
    pub fn new(q: Vec<BigInt>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::invalid_weight(&q, "empty"));
        }
        if q.iter().any(|x| !x.is_positive()) {
            return Err(Error::invalid_weight(&q, "entries must be positive"));
        }
        if q.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::invalid_weight(&q, "entries must be nondecreasing"));
        }
        let sum = q.iter().sum();
        Ok(WeightVector { q, sum })
    }

    /// Sorts before validating.
    pub fn from_unsorted(mut q: Vec<BigInt>) -> Result<Self> {
        q.sort();
        Self::new(q)
    }

    pub fn from_u64(q: &[u64]) -> Result<Self> {
        Self::new(q.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.q
    }

    pub fn sum(&self) -> &BigInt {
        &self.sum
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn gcd(&self) -> BigInt {
        self.q.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    /// Divides out the gcd.
    pub fn reduced(&self) -> (WeightVector, BigInt) {
        let g = self.gcd();
        let q: Vec<BigInt> = self.q.iter().map(|x| x / &g).collect();
        (WeightVector::new(q).expect("scaling keeps order and sign"), g)
    }
}

impl std::fmt::Display for WeightVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.q.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The classification data `(Q_red, lambda)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexType {
    pub q_red: WeightVector,
    pub lambda: BigInt,
}

impl SimplexType {
    pub fn new(q_red: WeightVector, lambda: BigInt) -> Result<Self> {
        if !q_red.gcd().is_one() {
            return Err(Error::invalid_weight(q_red.entries(), "reduced weights need gcd 1"));
        }
        if !lambda.is_positive() {
            return Err(Error::Precondition(format!("multiplier {lambda} must be positive")));
        }
        Ok(SimplexType { q_red, lambda })
    }

    pub fn to_json(&self) -> TypeJson {
        TypeJson {
            q_red: ints(self.q_red.entries()),
            lambda: Int(self.lambda.clone()),
        }
    }
}

impl std::fmt::Display for SimplexType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.q_red, self.lambda)
    }
}

/// `{"q_red": [...], "lambda": L}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TypeJson {
    pub q_red: Vec<Int>,
    pub lambda: Int,
}

/// Sorted absolute maximal minors of the vertex matrix.
///
/// A zero minor (the origin on a facet hyperplane) is rejected.
pub fn weight_vector(s: &LatticeSimplex) -> Result<WeightVector> {
    let minors = s.aligned_minors();
    if minors.iter().any(Zero::is_zero) {
        return Err(Error::Precondition(
            "the origin lies on a facet hyperplane, so some maximal minor vanishes".into(),
        ));
    }
    WeightVector::from_unsorted(minors)
}

pub fn simplex_type(s: &LatticeSimplex) -> Result<SimplexType> {
    let (q_red, lambda) = weight_vector(s)?.reduced();
    Ok(SimplexType { q_red, lambda })
}

/// `sum q_i v_i == 0` for weights aligned with the vertex order.
pub fn verify_weight_relation(s: &LatticeSimplex, q: &[BigInt]) -> bool {
    if q.len() != s.vertices().len() {
        return false;
    }
    (0..s.dim()).all(|k| {
        s.vertices()
            .iter()
            .zip(q)
            .map(|(v, w)| &v[k] * w)
            .sum::<BigInt>()
            .is_zero()
    })
}

/// Realizes `Delta_Q` for a reduced admissible weight vector.
///
/// The vertices are the images of the standard basis of `Z^{n+1}` in the
/// quotient `Z^{n+1} / Z q`, identified with `Z^n` through a unimodular
/// completion of `q`. The rows are size-reduced afterwards to keep the
/// coordinates small. Vertex `i` carries weight `q_i`.
pub fn build_delta_q(q: &WeightVector) -> Result<LatticeSimplex> {
    if q.len() < 2 {
        return Err(Error::invalid_weight(q.entries(), "need at least two weights"));
    }
    if !satisfies_condition(q) {
        return Err(Error::invalid_weight(
            q.entries(),
            "not admissible: need gcd 1 and every weight dividing the sum",
        ));
    }
    let u = unimodular_completion(q.entries())?;
    let n = q.len() - 1;
    let top: Vec<Vec<BigInt>> = (0..n).map(|i| u.row(i).to_vec()).collect();
    let mut rows = IntMatrix::from_rows(&top)?;
    reduce_rows(&mut rows);
    let vertices = (0..=n).map(|i| rows.column(i)).collect();
    LatticeSimplex::new(vertices)
}

/// One facet `<normal, x> <= 1`, opposite the vertex `opposite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub opposite: usize,
    /// `None` when the facet hyperplane passes through the origin.
    pub normal: Option<RationalVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetDescription {
    pub origin_interior: bool,
    pub facets: Vec<Facet>,
}

/// Reflexivity test: origin strictly interior and every facet normal,
/// scaled so the facet reads `<a, x> = 1`, integral.
pub fn is_reflexive(s: &LatticeSimplex) -> (bool, FacetDescription) {
    let n = s.dim();
    let facets: Vec<Facet> = (0..=n)
        .map(|i| {
            let rows: Vec<Vec<BigInt>> = s
                .vertices()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.clone())
                .collect();
            let normal = IntMatrix::from_rows(&rows)
                .ok()
                .and_then(|m| solve_rational(&m, &vec![BigInt::one(); n]).ok());
            Facet { opposite: i, normal }
        })
        .collect();
    let origin_interior = s.origin_in_interior();
    let reflexive = origin_interior
        && facets
            .iter()
            .all(|f| f.normal.as_ref().is_some_and(RationalVector::is_integral));
    (
        reflexive,
        FacetDescription {
            origin_interior,
            facets,
        },
    )
}

/// `P *_i Q = conv((P x 0) ∪ (0 x (Q - w_i)))`, translated by `(0, w_i)`.
///
/// Vertex order: `(v_k, w_i)` for the vertices of `P`, then `(0, w_k)` for
/// `k != i` in order.
pub fn free_sum(p: &LatticeSimplex, q: &LatticeSimplex, i: usize) -> Result<LatticeSimplex> {
    if !p.origin_in_interior() {
        return Err(Error::Precondition(
            "free sum needs the origin in the interior of the first operand".into(),
        ));
    }
    if i > q.dim() {
        return Err(Error::Precondition(format!(
            "vertex index {i} out of range for a {}-simplex",
            q.dim()
        )));
    }
    let (n, m) = (p.dim(), q.dim());
    let zeros = |k: usize| std::iter::repeat_n(BigInt::zero(), k);
    // Shifted by (0, w_i) so that the origin of Q stays interior; the
    // untranslated hull has the origin on the boundary of P x 0.
    let pivot = &q.vertices()[i];
    let mut vertices: Vec<Vec<BigInt>> = p
        .vertices()
        .iter()
        .map(|v| v.iter().chain(pivot.iter()).cloned().collect())
        .collect();
    vertices.extend(
        q.vertices()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, w)| zeros(n).chain(w.iter().cloned()).collect()),
    );
    debug_assert!(vertices.iter().all(|v| v.len() == n + m));
    LatticeSimplex::new(vertices)
}
