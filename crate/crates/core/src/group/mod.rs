//! Exact finite-group arithmetic on index-coded multiplication tables.
//!
//! Elements of a [`FiniteGroup`] are the dense indices `0..order`. The identity
//! is discovered from the table, so arbitrary user tables are accepted as long
//! as they satisfy the group axioms.

mod action;
pub mod catalog;
mod hom;
mod subgroup;

use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

pub use action::{action_check, ActionReport, ActionSide, FiniteAction};
pub use hom::{quotient, GroupHom, Quotient};
pub use subgroup::{
    generates, intersect, is_normal, join, normal_closure, normal_subgroups, normality_witness,
    subgroup_closure, Subgroup,
};

/// Default cap on the number of elements produced by permutation closure.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

/// Tables up to this order get the full `|G|^3` associativity scan.
const FULL_ASSOCIATIVITY_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    EmptyTable,
    #[error("table row {row} has length {len}, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table entry ({row}, {col}) = {value} is out of range for order {order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("table is not a Latin square: {line} {index} repeats element {repeated}")]
    NotLatinSquare {
        line: &'static str,
        index: usize,
        repeated: usize,
    },
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("element index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("members {members:?} are not closed under the group operation")]
    NotASubgroup { members: Vec<usize> },
    #[error("subgroup is not normal: conjugating {element} by {conjugator} leaves the subgroup")]
    NotNormal { conjugator: usize, element: usize },
    #[error("not a homomorphism: map({a}*{b}) != map({a})*map({b})")]
    NotAHomomorphism { a: usize, b: usize },
    #[error("not an action: composition law fails for pair ({a}, {b}) at point {point}")]
    NotAnAction { a: usize, b: usize, point: usize },
    #[error("invalid action data: {0}")]
    InvalidAction(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds the configured cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
}

pub type Result<T> = std::result::Result<T, GroupError>;

struct GroupData {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    fingerprint: u64,
    labels: Option<Vec<String>>,
}

/// A validated finite group given by its multiplication table.
///
/// Cloning is cheap; the table is shared.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("identity", &self.identity())
            .field("abelian", &self.is_abelian())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.fingerprint == other.0.fingerprint && self.0.table == other.0.table)
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a square multiplication table and builds the group.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange {
                        row,
                        col,
                        value,
                        order: n,
                    });
                }
                flat.push(value as u32);
            }
        }
        Self::from_flat(n, flat, true)
    }

    /// Builds a group from a flat row-major table.
    ///
    /// With `check_associativity == false` the caller vouches for associativity
    /// (tables produced by composing permutations or polynomial maps).
    pub(crate) fn from_flat(n: usize, flat: Vec<u32>, check_associativity: bool) -> Result<Self> {
        let at = |a: usize, b: usize| flat[a * n + b] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;

        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or(GroupError::NoInverse { element: a })?;
            inverse[a] = inv;
        }

        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let v = at(a, b);
                if seen[v] == a {
                    return Err(GroupError::NotLatinSquare {
                        line: "row",
                        index: a,
                        repeated: v,
                    });
                }
                seen[v] = a;
            }
        }
        seen.fill(usize::MAX);
        for b in 0..n {
            for a in 0..n {
                let v = at(a, b);
                if seen[v] == b {
                    return Err(GroupError::NotLatinSquare {
                        line: "column",
                        index: b,
                        repeated: v,
                    });
                }
                seen[v] = b;
            }
        }

        if check_associativity {
            if let Some((a, b, c)) = associativity_violation(n, &flat) {
                return Err(GroupError::NonAssociative { a, b, c });
            }
        }

        let mut hasher = DefaultHasher::new();
        n.hash(&mut hasher);
        flat.hash(&mut hasher);
        Ok(FiniteGroup(Arc::new(GroupData {
            order: n,
            table: flat,
            identity,
            inverse,
            fingerprint: hasher.finish(),
            labels: None,
        })))
    }

    /// Builds the group generated by permutations of `0..degree`.
    ///
    /// Products follow the right-action convention: `a*b` applies `a` first,
    /// so `(a*b)[x] = b[a[x]]`. Elements are indexed in lexicographic order of
    /// their image lists, which places the identity at index 0. Returns the
    /// group and the permutation of every element.
    pub fn from_permutations(
        generators: &[Vec<usize>],
        degree: usize,
        max_order: usize,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        for g in generators {
            validate_permutation(g, degree)?;
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            frontier += 1;
            for g in generators {
                let next = compose_perm(&current, g);
                if !index.contains_key(&next) {
                    if elements.len() >= max_order {
                        return Err(GroupError::OrderCapExceeded { cap: max_order });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                }
            }
        }
        elements.sort();
        let index: HashMap<&[usize], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let n = elements.len();
        let flat: Vec<u32> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let elements = &elements;
                let index = &index;
                (0..n)
                    .map(move |b| index[compose_perm(&elements[a], &elements[b]).as_slice()] as u32)
            })
            .collect();
        let group = Self::from_flat(n, flat, false)?;
        Ok((group, elements))
    }

    /// Attaches human-readable element labels (used by reports and the CLI).
    pub fn with_labels(self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(GroupError::InvalidAction(format!(
                "{} labels given for a group of order {}",
                labels.len(),
                self.order()
            )));
        }
        let data = &self.0;
        Ok(FiniteGroup(Arc::new(GroupData {
            order: data.order,
            table: data.table.clone(),
            identity: data.identity,
            inverse: data.inverse.clone(),
            fingerprint: data.fingerprint,
            labels: Some(labels),
        })))
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn identity(&self) -> usize {
        self.0.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.0.table[a * self.0.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.0.inverse[a]
    }

    /// `g * h * g^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
            .collect()
    }

    /// Identity-free fingerprint of the table, used to detect parent mismatches.
    pub fn fingerprint(&self) -> u64 {
        self.0.fingerprint
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.0.labels.as_deref()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.0.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    /// Looks up an element by label, falling back to a decimal index.
    pub fn find_label(&self, name: &str) -> Option<usize> {
        if let Some(labels) = &self.0.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.order())
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n)
            .map(|a| (0..n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.order() {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange {
                index,
                order: self.order(),
            })
        }
    }

    /// Order/abelianness/center fingerprint used in reports.
    pub fn summary(&self) -> GroupSummary {
        let mut order_profile: Vec<usize> =
            self.elements().map(|a| self.element_order(a)).collect();
        order_profile.sort_unstable();
        GroupSummary {
            order: self.order(),
            abelian: self.is_abelian(),
            center_order: self.center().len(),
            element_orders: order_profile,
        }
    }

    /// Direct product; `(a, b)` is stored at index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let mut flat = Vec::with_capacity(n * m * n * m);
        for x in 0..n * m {
            for y in 0..n * m {
                let a = self.mul(x / m, y / m);
                let b = other.mul(x % m, y % m);
                flat.push((a * m + b) as u32);
            }
        }
        Self::from_flat(n * m, flat, false).expect("direct product of groups is a group")
    }
}

/// Cheap isomorphism-invariant description of a group.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub center_order: usize,
    pub element_orders: Vec<usize>,
}

pub(crate) fn validate_permutation(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(GroupError::InvalidPermutation(format!(
            "length {} does not match degree {degree}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || std::mem::replace(&mut seen[x], true) {
            return Err(GroupError::InvalidPermutation(format!(
                "{p:?} is not a bijection of 0..{degree}"
            )));
        }
    }
    Ok(())
}

/// Apply `a` then `b`.
pub(crate) fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

fn associativity_violation(n: usize, flat: &[u32]) -> Option<(usize, usize, usize)> {
    let at = |a: usize, b: usize| flat[a * n + b] as usize;
    let fails = |a: usize, b: usize, c: usize| at(at(a, b), c) != at(a, at(b, c));
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        return (0..n).into_par_iter().find_map_first(|a| {
            (0..n).find_map(|b| (0..n).find(|&c| fails(a, b, c)).map(|c| (a, b, c)))
        });
    }
    // Light's test: the middle-associative elements are closed under the
    // operation, so it suffices to test a generating set of the magma.
    let generators = magma_generators(n, flat);
    (0..n).into_par_iter().find_map_first(|a| {
        generators
            .iter()
            .find_map(|&b| (0..n).find(|&c| fails(a, b, c)).map(|c| (a, b, c)))
    })
}

/// Greedy generating set of the magma under products alone.
fn magma_generators(n: usize, flat: &[u32]) -> Vec<usize> {
    let mut generators = Vec::new();
    let mut reached = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    while let Some(next) = (0..n).find(|&x| !reached[x]) {
        generators.push(next);
        reached[next] = true;
        members.push(next);
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            i += 1;
            for j in 0..members.len() {
                let b = members[j];
                for v in [flat[a * n + b] as usize, flat[b * n + a] as usize] {
                    if !reached[v] {
                        reached[v] = true;
                        members.push(v);
                    }
                }
            }
        }
    }
    generators
}
