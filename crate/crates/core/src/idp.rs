//! Integral closure of lattice simplices with witnesses.
//!
//! Every cone point is a parallelepiped point plus ray generators, and ray
//! generators sit at height 1, so the simplex is integrally closed exactly
//! when every parallelepiped point of height `k >= 2` is a sum of `k`
//! height-1 lattice points. If `g = p + r` with `p` at height 1, the
//! coefficients of `p` and `r` are bounded by those of `g`, so `p` and `r`
//! are parallelepiped points too and the search never leaves that finite set.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::ehrhart::{fpp_points, FppPoint};
use crate::error::Result;
use crate::json::{ints, Int};
use crate::simplex::LatticeSimplex;

#[derive(Clone, Debug)]
pub struct IdpVerdict {
    pub closed: bool,
    /// Lowest-height parallelepiped point with no decomposition.
    pub witness: Option<FppPoint>,
    points: Vec<FppPoint>,
    /// For each point at height >= 2: (height-1 summand, remainder).
    links: Vec<Option<(usize, usize)>>,
}

impl IdpVerdict {
    pub fn points(&self) -> &[FppPoint] {
        &self.points
    }

    /// Height-1 summands of `point`, in the order they were peeled off.
    pub fn decomposition(&self, point: &[BigInt]) -> Option<Vec<Vec<BigInt>>> {
        let idx = self
            .points
            .binary_search_by(|p| p.point.as_slice().cmp(point))
            .ok()?;
        self.decompose_index(idx)
    }

    fn decompose_index(&self, mut idx: usize) -> Option<Vec<Vec<BigInt>>> {
        let mut parts = Vec::new();
        loop {
            let p = &self.points[idx];
            match p.height {
                0 => return Some(parts),
                1 => {
                    parts.push(p.point.clone());
                    return Some(parts);
                }
                _ => {
                    let (first, rest) = self.links[idx]?;
                    parts.push(self.points[first].point.clone());
                    idx = rest;
                }
            }
        }
    }

    /// Every decomposed parallelepiped point of height >= 2 with its summands.
    pub fn decomposition_table(&self) -> BTreeMap<Vec<BigInt>, Vec<Vec<BigInt>>> {
        (0..self.points.len())
            .filter(|&i| self.points[i].height >= 2)
            .filter_map(|i| Some((self.points[i].point.clone(), self.decompose_index(i)?)))
            .collect()
    }

    pub fn to_json(&self) -> IdpJson {
        IdpJson {
            closed: self.closed,
            witness: self.witness.as_ref().map(|w| ints(&w.point)),
        }
    }
}

/// `{"closed": bool, "witness": point or null}`
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IdpJson {
    pub closed: bool,
    pub witness: Option<Vec<Int>>,
}

pub fn is_integrally_closed(s: &LatticeSimplex) -> Result<IdpVerdict> {
    Ok(closure_from_points(fpp_points(s)?))
}

/// Memoized search over parallelepiped points by increasing height;
/// height-1 summands are tried in lexicographic order and the first success
/// is kept.
pub fn closure_from_points(points: Vec<FppPoint>) -> IdpVerdict {
    let width = points.first().map_or(0, |p| p.numerators.len());
    let index: HashMap<&[u64], usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.numerators.as_slice(), i))
        .collect();
    let degree_one: Vec<usize> = (0..points.len()).filter(|&i| points[i].height == 1).collect();

    let mut order: Vec<usize> = (0..points.len()).filter(|&i| points[i].height >= 2).collect();
    order.sort_by_key(|&i| points[i].height);

    let mut links: Vec<Option<(usize, usize)>> = vec![None; points.len()];
    let mut ok: Vec<bool> = points.iter().map(|p| p.height <= 1).collect();
    let mut witness = None;
    let mut rest = vec![0u64; width];
    for &g in &order {
        let target = &points[g].numerators;
        let found = degree_one.iter().find_map(|&p| {
            let summand = &points[p].numerators;
            if summand.iter().zip(target).any(|(a, b)| a > b) {
                return None;
            }
            for ((r, a), b) in rest.iter_mut().zip(summand).zip(target) {
                *r = b - a;
            }
            let r = *index.get(rest.as_slice()).expect("remainder stays in the parallelepiped");
            ok[r].then_some((p, r))
        });
        match found {
            Some(link) => {
                links[g] = Some(link);
                ok[g] = true;
            }
            None => {
                witness = Some(points[g].clone());
                break;
            }
        }
    }
    drop(index);
    IdpVerdict {
        closed: witness.is_none(),
        witness,
        points,
        links,
    }
}
