//! Transition cocycles over abstract cover nerves: validation, associated
//! bundles, frame bundles of n-tuple vector bundles, cohomology search, and
//! second-order tangent transitions.

mod associated;
mod t2;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{AutError, NVectAutomorphism};
use crate::graded::{Field, GradedError, GradedSignature};
use crate::group::{FiniteGroup, GroupError};

pub use associated::{
    associated_cocycle, associated_vector_cocycle, factor_transition, frame_cocycle,
    quotient_cocycle, standard_fibered_space, AssociatedBundle, FiberedSpace,
};
pub use t2::{is_vector_bundle_transition, t2_signature, t2_transition};

/// Default cap on `|group|^charts` for the cohomology search.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("invalid nerve: {0}")]
    InvalidNerve(String),
    #[error("invalid cocycle: {0:?}")]
    InvalidCocycle(CocycleViolation),
    #[error("action is incompatible with the fibration: {0}")]
    ActionIncompatibleWithFibration(String),
    #[error("search needs {candidates} candidates, cap is {cap}")]
    SearchCapExceeded { candidates: u128, cap: u128 },
    #[error("chart change has a singular linear part: {0}")]
    NotInvertibleChart(String),
    #[error("transition on ({i}, {j}) is not an element of the group")]
    NotInGroup { i: usize, j: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

pub type Result<T> = std::result::Result<T, CocycleError>;

/// Index set with pair and triple overlaps. Every chart overlaps itself; pairs
/// are stored as `i < j` and triples sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverNerve {
    charts: usize,
    overlaps: BTreeSet<(usize, usize)>,
    triples: BTreeSet<[usize; 3]>,
}

impl CoverNerve {
    pub fn new(
        charts: usize,
        overlaps: impl IntoIterator<Item = (usize, usize)>,
        triples: impl IntoIterator<Item = [usize; 3]>,
    ) -> Result<Self> {
        let mut pairs = BTreeSet::new();
        for (i, j) in overlaps {
            if i >= charts || j >= charts {
                return Err(CocycleError::InvalidNerve(format!(
                    "overlap ({i}, {j}) names a missing chart"
                )));
            }
            if i != j {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
        let mut tri = BTreeSet::new();
        for mut t in triples {
            t.sort();
            if t[0] == t[1] || t[1] == t[2] || t[2] >= charts {
                return Err(CocycleError::InvalidNerve(format!(
                    "triple {t:?} is not three distinct charts"
                )));
            }
            for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                if !pairs.contains(&(a, b)) {
                    return Err(CocycleError::InvalidNerve(format!(
                        "triple {t:?} without the overlap ({a}, {b})"
                    )));
                }
            }
            tri.insert(t);
        }
        Ok(CoverNerve {
            charts,
            overlaps: pairs,
            triples: tri,
        })
    }

    /// Every pair and every triple overlaps.
    pub fn full(charts: usize) -> Self {
        let overlaps = (0..charts)
            .flat_map(|i| (i + 1..charts).map(move |j| (i, j)))
            .collect();
        let mut triples = BTreeSet::new();
        for i in 0..charts {
            for j in i + 1..charts {
                for k in j + 1..charts {
                    triples.insert([i, j, k]);
                }
            }
        }
        CoverNerve {
            charts,
            overlaps,
            triples,
        }
    }

    pub fn charts(&self) -> usize {
        self.charts
    }

    pub fn overlaps(&self, i: usize, j: usize) -> bool {
        i == j || self.overlaps.contains(&(i.min(j), i.max(j)))
    }

    /// Pairs `i < j` that overlap.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.overlaps.iter().copied()
    }

    pub fn triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.triples.iter().copied()
    }

    /// All ordered overlapping pairs including the diagonal.
    pub fn ordered_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.charts).map(|i| (i, i)).collect();
        for &(i, j) in &self.overlaps {
            out.push((i, j));
            out.push((j, i));
        }
        out.sort();
        out
    }
}

/// The group a cocycle takes values in.
pub trait TransitionGroup {
    type Value: Clone + PartialEq + Debug;
    fn identity(&self) -> Self::Value;
    /// `a * b`; as transition maps, `a` after `b`.
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn inv(&self, a: &Self::Value) -> Self::Value;
}

impl TransitionGroup for FiniteGroup {
    type Value = usize;
    fn identity(&self) -> usize {
        FiniteGroup::identity(self)
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        FiniteGroup::mul(self, *a, *b)
    }
    fn inv(&self, a: &usize) -> usize {
        FiniteGroup::inv(self, *a)
    }
}

/// Permutations of `0..points` under composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Permutations(pub usize);

impl TransitionGroup for Permutations {
    type Value = Vec<usize>;
    fn identity(&self) -> Vec<usize> {
        (0..self.0).collect()
    }
    fn mul(&self, a: &Vec<usize>, b: &Vec<usize>) -> Vec<usize> {
        b.iter().map(|&x| a[x]).collect()
    }
    fn inv(&self, a: &Vec<usize>) -> Vec<usize> {
        let mut out = vec![0; a.len()];
        for (x, &y) in a.iter().enumerate() {
            out[y] = x;
        }
        out
    }
}

/// Automorphisms of an n-tuple vector space under composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutMaps {
    pub sig: GradedSignature,
    pub field: Field,
}

impl TransitionGroup for AutMaps {
    type Value = NVectAutomorphism;
    fn identity(&self) -> NVectAutomorphism {
        NVectAutomorphism::identity(&self.sig, self.field).expect("signature was validated")
    }
    fn mul(&self, a: &NVectAutomorphism, b: &NVectAutomorphism) -> NVectAutomorphism {
        a.compose(b).expect("automorphisms of one space compose")
    }
    fn inv(&self, a: &NVectAutomorphism) -> NVectAutomorphism {
        a.inverse()
    }
}

/// Transition values on every ordered overlapping pair, including the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle<V> {
    nerve: CoverNerve,
    values: BTreeMap<(usize, usize), V>,
}

impl<V: Clone + PartialEq + Debug> Cocycle<V> {
    /// Values exactly as given; missing entries are reported by [`check_cocycle`].
    pub fn new(nerve: &CoverNerve, values: BTreeMap<(usize, usize), V>) -> Result<Self> {
        if let Some(&(i, j)) = values
            .keys()
            .find(|&&(i, j)| !nerve.overlaps(i, j) || i >= nerve.charts)
        {
            return Err(CocycleError::InvalidNerve(format!(
                "value on ({i}, {j}) outside the overlaps"
            )));
        }
        Ok(Cocycle {
            nerve: nerve.clone(),
            values,
        })
    }

    /// Values on `i < j`; the diagonal is filled with the identity and `(j, i)`
    /// with inverses, unless given explicitly.
    pub fn from_upper<G: TransitionGroup<Value = V>>(
        nerve: &CoverNerve,
        group: &G,
        given: BTreeMap<(usize, usize), V>,
    ) -> Result<Self> {
        let mut values = given;
        for i in 0..nerve.charts {
            values.entry((i, i)).or_insert_with(|| group.identity());
        }
        for (i, j) in nerve.pairs() {
            if let Some(v) = values.get(&(i, j)).cloned() {
                values.entry((j, i)).or_insert_with(|| group.inv(&v));
            } else if let Some(v) = values.get(&(j, i)).cloned() {
                values.insert((i, j), group.inv(&v));
            }
        }
        Cocycle::new(nerve, values)
    }

    /// The identity on every overlap.
    pub fn trivial<G: TransitionGroup<Value = V>>(nerve: &CoverNerve, group: &G) -> Self {
        let values = nerve
            .ordered_pairs()
            .into_iter()
            .map(|p| (p, group.identity()))
            .collect();
        Cocycle {
            nerve: nerve.clone(),
            values,
        }
    }

    pub fn nerve(&self) -> &CoverNerve {
        &self.nerve
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&V> {
        self.values.get(&(i, j))
    }

    pub fn values(&self) -> &BTreeMap<(usize, usize), V> {
        &self.values
    }

    /// Applies `f` to every value.
    pub fn map_values<W: Clone + PartialEq + Debug, E>(
        &self,
        mut f: impl FnMut((usize, usize), &V) -> std::result::Result<W, E>,
    ) -> std::result::Result<Cocycle<W>, E> {
        let values = self
            .values
            .iter()
            .map(|(&k, v)| f(k, v).map(|w| (k, w)))
            .collect::<std::result::Result<_, E>>()?;
        Ok(Cocycle {
            nerve: self.nerve.clone(),
            values,
        })
    }
}

/// First failing cocycle law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum CocycleViolation {
    Missing { i: usize, j: usize },
    NotIdentity { i: usize },
    NotInverse { i: usize, j: usize },
    NotMultiplicative { i: usize, j: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleCheck {
    pub valid: bool,
    pub witness: Option<CocycleViolation>,
}

/// Checks `g_ii = e`, `g_ij = g_ji^-1` and `g_ij g_jk = g_ik` on every triple
/// overlap (all orderings).
pub fn check_cocycle<G: TransitionGroup>(c: &Cocycle<G::Value>, group: &G) -> CocycleCheck {
    let witness = first_violation(c, group);
    CocycleCheck {
        valid: witness.is_none(),
        witness,
    }
}

fn first_violation<G: TransitionGroup>(
    c: &Cocycle<G::Value>,
    group: &G,
) -> Option<CocycleViolation> {
    let nerve = &c.nerve;
    for (i, j) in nerve.ordered_pairs() {
        if !c.values.contains_key(&(i, j)) {
            return Some(CocycleViolation::Missing { i, j });
        }
    }
    let e = group.identity();
    for i in 0..nerve.charts {
        if c.values[&(i, i)] != e {
            return Some(CocycleViolation::NotIdentity { i });
        }
    }
    for (i, j) in nerve.pairs() {
        if group.mul(&c.values[&(i, j)], &c.values[&(j, i)]) != e {
            return Some(CocycleViolation::NotInverse { i, j });
        }
    }
    for t in nerve.triples() {
        for [i, j, k] in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .map(|p| p.map(|x| t[x]))
        {
            if group.mul(&c.values[&(i, j)], &c.values[&(j, k)]) != c.values[&(i, k)] {
                return Some(CocycleViolation::NotMultiplicative { i, j, k });
            }
        }
    }
    None
}

pub fn require_cocycle<G: TransitionGroup>(c: &Cocycle<G::Value>, group: &G) -> Result<()> {
    match first_violation(c, group) {
        Some(v) => Err(CocycleError::InvalidCocycle(v)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyResult {
    pub cohomologous: bool,
    /// `lambda` with `c2_ij = lambda_i c1_ij lambda_j^-1`.
    pub witness: Option<Vec<usize>>,
    /// Partial assignments visited.
    pub explored: u64,
}

/// Exhaustive search for `lambda` with `c2_ij = lambda_i c1_ij lambda_j^-1`.
///
/// Charts are assigned in order; a chart overlapping an assigned one has its
/// value forced, so the search is complete.
pub fn are_cohomologous(
    c1: &Cocycle<usize>,
    c2: &Cocycle<usize>,
    group: &FiniteGroup,
    cap: u128,
) -> Result<CohomologyResult> {
    if c1.nerve != c2.nerve {
        return Err(CocycleError::InvalidNerve(
            "cocycles live on different nerves".into(),
        ));
    }
    require_cocycle(c1, group)?;
    require_cocycle(c2, group)?;
    let n = c1.nerve.charts;
    let candidates = (group.order() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if candidates > cap {
        return Err(CocycleError::SearchCapExceeded { candidates, cap });
    }
    let mut lambda: Vec<usize> = Vec::with_capacity(n);
    let mut explored = 0u64;
    let found = search(c1, c2, group, &mut lambda, &mut explored);
    Ok(CohomologyResult {
        cohomologous: found,
        witness: found.then_some(lambda),
        explored,
    })
}

fn search(
    c1: &Cocycle<usize>,
    c2: &Cocycle<usize>,
    g: &FiniteGroup,
    lambda: &mut Vec<usize>,
    explored: &mut u64,
) -> bool {
    let j = lambda.len();
    if j == c1.nerve.charts {
        return true;
    }
    // lambda_j = c2_ij^-1 lambda_i c1_ij for an assigned overlapping i
    let forced = (0..j).find(|&i| c1.nerve.overlaps(i, j)).map(|i| {
        g.mul(
            g.mul(g.inv(c2.values[&(i, j)]), lambda[i]),
            c1.values[&(i, j)],
        )
    });
    let options: Vec<usize> = match forced {
        Some(x) => vec![x],
        None => g.elements().collect(),
    };
    for x in options {
        *explored += 1;
        let consistent = (0..j)
            .filter(|&i| c1.nerve.overlaps(i, j))
            .all(|i| g.mul(g.mul(lambda[i], c1.values[&(i, j)]), g.inv(x)) == c2.values[&(i, j)]);
        if !consistent {
            continue;
        }
        lambda.push(x);
        if search(c1, c2, g, lambda, explored) {
            return true;
        }
        lambda.pop();
    }
    false
}
