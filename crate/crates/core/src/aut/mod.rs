//! Automorphism groups of n-tuple vector spaces and double affine spaces.
//!
//! An n-tuple vector space is a multi-graded signature with an empty base.
//! Its automorphisms are the invertible weight-preserving polynomial maps:
//! the component of degree `sigma` is a combination of monomials whose
//! factors have degrees partitioning `sigma`.

mod affine;
mod enumerate;

use serde::Serialize;
use thiserror::Error;

use crate::graded::{Exponents, Field, GradedError, GradedSignature, PolyMap, Polynomial, Scalar};
use crate::group::GroupError;
use crate::principal::PrincipalError;

pub use affine::{linear_part_is_multiplicative, AffineAutomorphism, AffineCoefficients};
pub use enumerate::{
    enumerate_aut, predicted_order, verify_p54, AutGroup, IntersectionOrder, P54Report,
    DEFAULT_MAX_CANDIDATES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("signature is not an n-tuple vector space: {0}")]
    InvalidSignature(String),
    #[error("monomial {exponents:?} is illegal in component {target}")]
    IllegalMonomial { target: usize, exponents: Exponents },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("enumeration needs {candidates} candidates, cap is {cap}")]
    EnumerationCapExceeded { candidates: u128, cap: u128 },
    #[error("enumerated maps are not closed: {0}")]
    NotClosed(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Principal(#[from] PrincipalError),
}

pub type Result<T> = std::result::Result<T, AutError>;

/// Checks that `sig` is multi-graded with an empty base.
pub fn check_vector_signature(sig: &GradedSignature) -> Result<()> {
    match sig {
        GradedSignature::Multi { base: 0, .. } => {
            sig.validate(&Default::default())?;
            Ok(())
        }
        GradedSignature::Multi { .. } => Err(AutError::InvalidSignature(
            "base block must be empty".into(),
        )),
        GradedSignature::Simple { .. } => Err(AutError::InvalidSignature(
            "expected a multi-graded signature".into(),
        )),
    }
}

/// All monomials of multi-degree `mask` (one per choice of a set partition
/// of `mask` into present blocks and one coordinate per part).
pub fn legal_monomials(sig: &GradedSignature, mask: u32) -> Vec<Exponents> {
    let n = sig.coords();
    let blocks = sig.blocks();
    let block_of_mask = |m: u32| {
        blocks
            .iter()
            .find(|b| b.dim > 0 && degree_mask(&b.degree) == m)
    };
    let mut out = Vec::new();
    let mut stack: Vec<(u32, Exponents)> = vec![(mask, vec![0; n])];
    while let Some((remaining, e)) = stack.pop() {
        if remaining == 0 {
            out.push(e);
            continue;
        }
        let low = remaining & remaining.wrapping_neg();
        let rest = remaining & !low;
        // every submask of `rest`, joined with the lowest bit
        let mut sub = rest;
        loop {
            let part = sub | low;
            if let Some(b) = block_of_mask(part) {
                for c in b.coords() {
                    let mut f = e.clone();
                    f[c] += 1;
                    stack.push((remaining & !part, f));
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    out.sort();
    out
}

pub(crate) fn degree_mask(degree: &[u32]) -> u32 {
    degree.iter().enumerate().fold(0, |m, (i, &x)| m | (x << i))
}

/// An invertible weight-preserving self-map of an n-tuple vector space,
/// with its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NVectAutomorphism {
    map: PolyMap,
    inverse: PolyMap,
}

impl NVectAutomorphism {
    /// Validates legality of every monomial and invertibility of every linear block.
    pub fn from_map(map: PolyMap) -> Result<Self> {
        let sig = map.sig_in().clone();
        check_vector_signature(&sig)?;
        if map.sig_out() != &sig {
            return Err(AutError::InvalidSignature(
                "automorphisms map a space to itself".into(),
            ));
        }
        let degrees = sig.degrees();
        for (target, c) in map.components().iter().enumerate() {
            if let Some((e, _)) = c
                .terms()
                .find(|(e, _)| sig.monomial_degree(e) != degrees[target])
            {
                return Err(AutError::IllegalMonomial {
                    target,
                    exponents: e.clone(),
                });
            }
        }
        let inverse = match map.invert() {
            Ok(inv) => inv,
            Err(GradedError::NotInvertible(m)) => return Err(AutError::NotInvertible(m)),
            Err(e) => return Err(e.into()),
        };
        Ok(NVectAutomorphism { map, inverse })
    }

    /// Builds from `(target, exponents, coefficient)` terms.
    pub fn from_terms(
        sig: &GradedSignature,
        field: Field,
        terms: impl IntoIterator<Item = (usize, Exponents, Scalar)>,
    ) -> Result<Self> {
        check_vector_signature(sig)?;
        NVectAutomorphism::from_map(PolyMap::from_terms(sig, sig, field, terms)?)
    }

    pub fn identity(sig: &GradedSignature, field: Field) -> Result<Self> {
        check_vector_signature(sig)?;
        let id = PolyMap::identity(sig, field);
        Ok(NVectAutomorphism {
            map: id.clone(),
            inverse: id,
        })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn inverse_map(&self) -> &PolyMap {
        &self.inverse
    }

    pub fn signature(&self) -> &GradedSignature {
        self.map.sig_in()
    }

    pub fn field(&self) -> Field {
        self.map.field()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &NVectAutomorphism) -> Result<NVectAutomorphism> {
        let map = self.map.compose(&other.map)?;
        let inverse = other.inverse.compose(&self.inverse)?;
        Ok(NVectAutomorphism { map, inverse })
    }

    pub fn inverse(&self) -> NVectAutomorphism {
        NVectAutomorphism {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// The matrix of the block of degree `mask` acting on itself.
    pub fn linear_block(&self, mask: u32) -> Vec<Vec<Scalar>> {
        let Some(block) = self
            .signature()
            .blocks()
            .into_iter()
            .find(|b| degree_mask(&b.degree) == mask)
        else {
            return Vec::new();
        };
        let n = self.signature().coords();
        block
            .coords()
            .map(|c| {
                block
                    .coords()
                    .map(|v| {
                        let mut e = vec![0; n];
                        e[v] = 1;
                        self.map.component(c).coefficient(&e)
                    })
                    .collect()
            })
            .collect()
    }

    fn block_is_identity(&self, block: &crate::graded::Block) -> bool {
        let n = self.signature().coords();
        let field = self.field();
        block
            .coords()
            .all(|c| self.map.component(c) == &Polynomial::var(n, field, c))
    }

    /// Every linear block is the identity; only products of at least two
    /// coordinates may be added.
    pub fn is_statomorphism(&self) -> bool {
        let n = self.signature().coords();
        (0..n).all(|c| {
            let comp = self.map.component(c);
            let mut e = vec![0; n];
            e[c] = 1;
            comp.coefficient(&e).is_one()
                && comp
                    .terms()
                    .all(|(f, _)| f == &e || f.iter().sum::<u32>() >= 2)
        })
    }

    /// Acts as the identity on the factor of degree `epsilon_family`.
    pub fn in_gi(&self, family: usize) -> bool {
        let mask = 1u32 << family;
        self.signature()
            .blocks()
            .iter()
            .find(|b| degree_mask(&b.degree) == mask)
            .is_none_or(|b| self.block_is_identity(b))
    }

    /// Components of degree `epsilon_i` contain only linear terms of the same degree.
    pub fn linear_in_factors(&self) -> bool {
        let sig = self.signature();
        sig.blocks()
            .iter()
            .filter(|b| b.degree.iter().sum::<u32>() == 1)
            .all(|b| {
                b.coords().all(|c| {
                    self.map.component(c).terms().all(|(e, _)| {
                        e.iter().sum::<u32>() == 1 && sig.monomial_degree(e) == b.degree
                    })
                })
            })
    }

    pub fn eval(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.map.eval(point)
    }
}

/// Serializable form of a map: `(target, exponents, coefficient)` triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub target: usize,
    pub exponents: Exponents,
    pub coefficient: String,
}

pub fn term_records(map: &PolyMap) -> Vec<TermRecord> {
    map.terms()
        .into_iter()
        .map(|(target, exponents, c)| TermRecord {
            target,
            exponents,
            coefficient: c.to_string(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn d111() -> GradedSignature {
        GradedSignature::double(1, 1, 1).unwrap()
    }

    #[test]
    fn legal_monomials_of_small_signatures() {
        let sig = d111();
        assert_eq!(legal_monomials(&sig, 1), vec![vec![1, 0, 0]]);
        assert_eq!(legal_monomials(&sig, 3), vec![vec![0, 0, 1], vec![1, 1, 0]]);
        let triple = GradedSignature::multi(
            3,
            0,
            &(1u32..8)
                .map(|m| ((0..3).map(|i| (m >> i) & 1).collect(), 1))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        // the full degree has five set partitions
        assert_eq!(legal_monomials(&triple, 7).len(), 5);
    }

    #[test]
    fn example_automorphism_over_f3() {
        let f = f3();
        let a = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![1, 0, 0], f.int(2)),
                (1, vec![0, 1, 0], f.int(1)),
                (2, vec![1, 1, 0], f.int(1)),
                (2, vec![0, 0, 1], f.int(1)),
            ],
        )
        .unwrap();
        let back = a.compose(&a.inverse()).unwrap();
        assert!(back.map().is_identity());
        // the inverse is (y, y', z) -> (2y, y', z - 2yy') = (2y, y', z + yy')
        let inv = a.inverse_map();
        assert_eq!(inv.component(0).coefficient(&[1, 0, 0]), f.int(2));
        assert_eq!(inv.component(2).coefficient(&[1, 1, 0]), f.int(1));
        assert!(!a.is_statomorphism());
        assert!(!a.in_gi(0) && a.in_gi(1));
    }

    #[test]
    fn illegal_and_singular() {
        let f = f3();
        let err = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![1, 0, 0], f.one()),
                (0, vec![0, 0, 1], f.one()),
                (1, vec![0, 1, 0], f.one()),
                (2, vec![0, 0, 1], f.one()),
            ],
        );
        assert_eq!(
            err,
            Err(AutError::IllegalMonomial {
                target: 0,
                exponents: vec![0, 0, 1]
            })
        );
        let singular = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [(0, vec![1, 0, 0], f.one()), (2, vec![0, 0, 1], f.one())],
        );
        assert!(matches!(singular, Err(AutError::NotInvertible(_))));
    }

    #[test]
    fn statomorphisms_and_gi() {
        let f = f3();
        let id = NVectAutomorphism::identity(&d111(), f).unwrap();
        assert!(id.is_statomorphism() && id.in_gi(0) && id.in_gi(1));
        let s = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![1, 0, 0], f.one()),
                (1, vec![0, 1, 0], f.one()),
                (2, vec![1, 1, 0], f.one()),
                (2, vec![0, 0, 1], f.one()),
            ],
        )
        .unwrap();
        assert!(s.is_statomorphism() && s.in_gi(0) && s.in_gi(1));
        let scale = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![1, 0, 0], f.int(2)),
                (1, vec![0, 1, 0], f.one()),
                (2, vec![0, 0, 1], f.one()),
            ],
        )
        .unwrap();
        assert!(!scale.is_statomorphism());
        let second = NVectAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![1, 0, 0], f.one()),
                (1, vec![0, 1, 0], f.int(2)),
                (2, vec![0, 0, 1], f.one()),
            ],
        )
        .unwrap();
        assert!(second.in_gi(0) && !second.in_gi(1));
    }

    #[test]
    fn rejects_simple_signatures() {
        let sig = GradedSignature::simple(&[1, 1]).unwrap();
        assert!(matches!(
            NVectAutomorphism::identity(&sig, f3()),
            Err(AutError::InvalidSignature(_))
        ));
    }
}
