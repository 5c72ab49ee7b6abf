//! Named, interchangeable algorithm variants selected at runtime.
//!
//! h*-vectors can be computed from the parallelepiped or by interpolating
//! dilate counts, and multiplication-map ranks can be bounded structurally,
//! estimated over a prime field, or expanded symbolically. Each variant sits
//! behind a small trait and is looked up by name from a [`Registry`].

use std::collections::BTreeMap;

use crate::ehrhart::{hstar, hstar_by_interpolation, HStarVector};
use crate::error::{Error, Result};
use crate::lefschetz::{generic_rank_lower_bound, structural_rank, symbolic_rank, MultiplicationPattern};
use crate::simplex::LatticeSimplex;

pub trait HStarMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, s: &LatticeSimplex) -> Result<HStarVector>;
}

/// Histogram of parallelepiped points (Smith-form coset enumeration).
pub struct ParallelepipedMethod;

impl HStarMethod for ParallelepipedMethod {
    fn name(&self) -> &'static str {
        "fpp"
    }

    fn compute(&self, s: &LatticeSimplex) -> Result<HStarVector> {
        hstar(s)
    }
}

/// Brute-force dilate counts `L(0..d)` and exact interpolation.
pub struct InterpolationMethod;

impl HStarMethod for InterpolationMethod {
    fn name(&self) -> &'static str {
        "interpolation"
    }

    fn compute(&self, s: &LatticeSimplex) -> Result<HStarVector> {
        hstar_by_interpolation(s)
    }
}

/// Rank of a multiplication pattern under some notion of "generic".
pub trait RankEstimator: Send + Sync {
    fn name(&self) -> &'static str;
    /// `None` when the estimator does not apply to this pattern.
    fn rank(&self, m: &MultiplicationPattern, seed: u64, trials: usize) -> Option<usize>;
}

/// Maximum matching on the support; an upper bound.
pub struct StructuralRank;

impl RankEstimator for StructuralRank {
    fn name(&self) -> &'static str {
        "structural"
    }

    fn rank(&self, m: &MultiplicationPattern, _seed: u64, _trials: usize) -> Option<usize> {
        Some(structural_rank(m))
    }
}

/// Best rank over random substitutions in `F_p`; a lower bound.
pub struct RandomPrimeRank;

impl RankEstimator for RandomPrimeRank {
    fn name(&self) -> &'static str {
        "random-prime"
    }

    fn rank(&self, m: &MultiplicationPattern, seed: u64, trials: usize) -> Option<usize> {
        Some(generic_rank_lower_bound(m, seed, trials))
    }
}

/// Exact generic rank via symbolic minors, small patterns only.
pub struct SymbolicRank;

impl RankEstimator for SymbolicRank {
    fn name(&self) -> &'static str {
        "symbolic"
    }

    fn rank(&self, m: &MultiplicationPattern, _seed: u64, _trials: usize) -> Option<usize> {
        symbolic_rank(m)
    }
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, entry: Box<T>) {
        self.entries.insert(name, entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| &**b).ok_or_else(|| Error::UnknownStrategy {
            kind: self.kind,
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &T)> {
        self.entries.iter().map(|(k, v)| (*k, &**v))
    }
}

pub fn hstar_methods() -> Registry<dyn HStarMethod> {
    let mut r: Registry<dyn HStarMethod> = Registry::new("h*");
    for m in [Box::new(ParallelepipedMethod) as Box<dyn HStarMethod>, Box::new(InterpolationMethod)] {
        r.register(m.name(), m);
    }
    r
}

pub fn rank_estimators() -> Registry<dyn RankEstimator> {
    let mut r: Registry<dyn RankEstimator> = Registry::new("rank");
    for m in [
        Box::new(StructuralRank) as Box<dyn RankEstimator>,
        Box::new(RandomPrimeRank),
        Box::new(SymbolicRank),
    ] {
        r.register(m.name(), m);
    }
    r
}
