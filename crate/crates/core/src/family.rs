//! The family `Q = (1, d, d+1, ..., d+1)`: integrally closed reflexive
//! simplices whose quotient algebra has no weak Lefschetz element.

use num_bigint::BigInt;
use serde::Serialize;

use crate::ehrhart::{fpp_points, hstar_from_points, HStarVector};
use crate::error::{Error, Result};
use crate::idp::closure_from_points;
use crate::lefschetz::{graded_basis_with_order, multiplication_patterns, verdict_for_basis, Certificate, WlVerdict};
use crate::simplex::{build_delta_q, is_reflexive, weight_vector, LatticeSimplex, WeightVector};

pub fn family_weights(d: usize) -> Result<WeightVector> {
    check_d(d)?;
    let d64 = d as u64;
    let mut q = vec![1, d64];
    q.extend(std::iter::repeat_n(d64 + 1, d - 1));
    WeightVector::from_u64(&q)
}

/// `conv(e_1, ..., e_d, (-d, -d-1, ..., -d-1))`.
pub fn family_simplex(d: usize) -> Result<LatticeSimplex> {
    check_d(d)?;
    let d = d as i64;
    let mut vertices: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    vertices.push((0..d).map(|j| BigInt::from(if j == 0 { -d } else { -d - 1 })).collect());
    LatticeSimplex::new(vertices)
}

/// `v_{k,r}` with the height `r` as last coordinate.
fn listed_point(d: i64, k: i64, r: i64) -> Vec<BigInt> {
    let (first, rest) = if k <= r { (-k, -k) } else { (-k + 2, -k + 1) };
    std::iter::once(first)
        .chain(std::iter::repeat_n(rest, d as usize - 1))
        .chain(std::iter::once(r))
        .map(BigInt::from)
        .collect()
}

/// Parallelepiped points in the listing order: the origin, then
/// `v_{0,r}, ..., v_{d+1,r}` for `r = 1 .. d-1`, then the top point
/// `(-d+1, -d, ..., -d, d)`.
pub fn family_point_order(d: usize) -> Result<Vec<Vec<BigInt>>> {
    check_d(d)?;
    let d = d as i64;
    let mut out = vec![vec![BigInt::from(0); d as usize + 1]];
    for r in 1..d {
        out.extend((0..=d + 1).map(|k| listed_point(d, k, r)));
    }
    out.push(listed_point(d, d + 1, d));
    Ok(out)
}

fn check_d(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Precondition(format!("family needs d >= 3, got {d}")));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub d: usize,
    pub claims: Vec<Claim>,
}

impl FamilyReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.passed).collect()
    }
}

/// Checks the five family claims for one `d`: reflexive, `d(d+1)`
/// parallelepiped points (exactly the listed ones), `h* = (1, d+2, ..., d+2, 1)`,
/// integrally closed, and a structural obstruction to a weak Lefschetz
/// element in degree 1 -> 2.
pub fn verify_family(d: usize) -> Result<FamilyReport> {
    let q = family_weights(d)?;
    let s = family_simplex(d)?;
    let mut claims = Vec::new();

    let (reflexive, _) = is_reflexive(&s);
    let w = weight_vector(&s)?;
    let weights_match = w == q;
    claims.push(Claim {
        name: "reflexive",
        passed: reflexive && weights_match,
        detail: format!("reflexive={reflexive}, weight vector {w} (expected {q})"),
    });

    let points = fpp_points(&s)?;
    let mut listed = family_point_order(d)?;
    listed.sort();
    let found: Vec<Vec<BigInt>> = points.iter().map(|p| p.point.clone()).collect();
    let count_ok = points.len() == d * (d + 1);
    claims.push(Claim {
        name: "parallelepiped_size",
        passed: count_ok && found == listed,
        detail: format!(
            "{} points (expected {}), listing matches: {}",
            points.len(),
            d * (d + 1),
            found == listed
        ),
    });

    let h = hstar_from_points(d, &points);
    let mut expected = vec![1u64];
    expected.extend(std::iter::repeat_n(d as u64 + 2, d - 1));
    expected.push(1);
    let expected = HStarVector::new(expected);
    // the canonical Delta_Q realization must agree
    let h_delta = crate::ehrhart::hstar(&build_delta_q(&q)?)?;
    claims.push(Claim {
        name: "hstar",
        passed: h == expected && h_delta == expected,
        detail: format!("{h:?} (Delta_Q realization {h_delta:?}, expected {expected:?})"),
    });

    let idp = closure_from_points(points);
    claims.push(Claim {
        name: "integrally_closed",
        passed: idp.closed,
        detail: match &idp.witness {
            None => "every parallelepiped point splits into height-1 points".into(),
            Some(w) => format!("witness {:?}", w.point),
        },
    });

    let basis = graded_basis_with_order(&s, &family_point_order(d)?)?;
    let patterns = multiplication_patterns(&basis);
    let one_two = &patterns[1];
    let triangular = one_two.is_lower_triangular() && one_two.empty_diagonal() == vec![2];
    let report = verdict_for_basis(&basis, 0, 1);
    let structural = matches!(
        report.verdict,
        WlVerdict::NotExists {
            degree: 1,
            certificate: Certificate::Structural { .. }
        }
    );
    claims.push(Claim {
        name: "no_weak_lefschetz",
        passed: structural && triangular,
        detail: format!(
            "verdict {:?}; degree 1->2 lower triangular with empty diagonal at {:?}",
            report.verdict,
            one_two.empty_diagonal()
        ),
    });

    Ok(FamilyReport { d, claims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::big_vec;

    #[test]
    fn order_for_d3() {
        let order = family_point_order(3).unwrap();
        assert_eq!(order.len(), 12);
        assert_eq!(order[1], big_vec(&[0, 0, 0, 1]));
        assert_eq!(order[2], big_vec(&[-1, -1, -1, 1]));
        assert_eq!(order[3], big_vec(&[0, -1, -1, 1]));
        assert_eq!(order[5], big_vec(&[-2, -3, -3, 1]));
        assert_eq!(order[8], big_vec(&[-2, -2, -2, 2]));
        assert_eq!(order[11], big_vec(&[-2, -3, -3, 3]));
    }

    #[test]
    fn small_d_rejected() {
        assert!(matches!(verify_family(2), Err(Error::Precondition(_))));
    }

    #[test]
    fn d3_passes() {
        let r = verify_family(3).unwrap();
        assert!(r.all_passed(), "{:?}", r.failed());
        assert_eq!(r.claims.len(), 5);
    }
}
