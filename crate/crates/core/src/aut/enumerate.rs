use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    check_vector_signature, degree_mask, legal_monomials, AutError, NVectAutomorphism, Result,
};
use crate::graded::{invert_matrix, Exponents, Field, GradedSignature, PolyMap, Scalar};
use crate::group::{intersect, is_normal, FiniteGroup, Subgroup};
use crate::principal::{verify_ntuple, NTupleWitness, TraceNode};

pub const DEFAULT_MAX_CANDIDATES: u128 = 1_000_000;

/// The full automorphism group of an n-tuple vector space over a prime field.
#[derive(Debug, Clone)]
pub struct AutGroup {
    sig: GradedSignature,
    field: Field,
    group: FiniteGroup,
    elements: Vec<NVectAutomorphism>,
    index: HashMap<PolyMap, usize>,
    candidates: u128,
}

impl AutGroup {
    pub fn signature(&self) -> &GradedSignature {
        &self.sig
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Product `a * b` is the composition `a` after `b`.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[NVectAutomorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &NVectAutomorphism {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &NVectAutomorphism) -> Option<usize> {
        self.index.get(a.map()).copied()
    }

    pub fn index_of_map(&self, m: &PolyMap) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Size of the coefficient grid that was searched.
    pub fn candidates(&self) -> u128 {
        self.candidates
    }

    pub fn members_where(&self, pred: impl Fn(&NVectAutomorphism) -> bool) -> Result<Subgroup> {
        let members: Vec<usize> = (0..self.order())
            .filter(|&i| pred(&self.elements[i]))
            .collect();
        Ok(Subgroup::from_members(&self.group, members)?)
    }

    /// Elements acting as the identity on the factor of degree `epsilon_family`.
    pub fn gi(&self, family: usize) -> Result<Subgroup> {
        self.members_where(|a| a.in_gi(family))
    }

    pub fn statomorphisms(&self) -> Result<Subgroup> {
        self.members_where(NVectAutomorphism::is_statomorphism)
    }
}

fn gl_order(d: usize, p: u128) -> u128 {
    let q = p.pow(d as u32);
    (0..d).map(|i| q - p.pow(i as u32)).product()
}

fn matrices(d: usize, field: Field) -> Vec<Vec<Vec<Scalar>>> {
    let p = field.characteristic() as usize;
    let total = p.pow((d * d) as u32);
    (0..total)
        .filter_map(|mut code| {
            let m: Vec<Vec<Scalar>> = (0..d)
                .map(|_| {
                    (0..d)
                        .map(|_| {
                            let v = code % p;
                            code /= p;
                            field.int(v as i64)
                        })
                        .collect()
                })
                .collect();
            invert_matrix(&m, field).map(|_| m)
        })
        .collect()
}

/// Group order predicted by counting: invertible linear blocks times free
/// higher coefficients.
pub fn predicted_order(sig: &GradedSignature, p: u64) -> u128 {
    let mut order = 1u128;
    for block in sig
        .blocks()
        .iter()
        .filter(|b| b.dim > 0 && degree_mask(&b.degree) != 0)
    {
        order *= gl_order(block.dim, p as u128);
        let nonlinear = legal_monomials(sig, degree_mask(&block.degree)).len() - block.dim;
        order *= (p as u128).pow((nonlinear * block.dim) as u32);
    }
    order
}

/// Enumerates every automorphism over `F_p` and builds the group from the
/// composition table; closure under composition is asserted.
pub fn enumerate_aut(
    sig: &GradedSignature,
    field: Field,
    max_candidates: u128,
) -> Result<AutGroup> {
    check_vector_signature(sig)?;
    let Field::Prime(p) = field else {
        return Err(AutError::InvalidSignature(
            "enumeration needs a prime field".into(),
        ));
    };
    let n = sig.coords();
    let blocks: Vec<_> = sig
        .blocks()
        .into_iter()
        .filter(|b| b.dim > 0 && degree_mask(&b.degree) != 0)
        .collect();
    let mut nonlinear: Vec<(usize, Exponents)> = Vec::new();
    let mut linear_slots = 0u32;
    for b in &blocks {
        let higher: Vec<Exponents> = legal_monomials(sig, degree_mask(&b.degree))
            .into_iter()
            .filter(|e| e.iter().sum::<u32>() >= 2)
            .collect();
        for c in b.coords() {
            nonlinear.extend(higher.iter().map(|e| (c, e.clone())));
        }
        linear_slots += (b.dim * b.dim) as u32;
    }
    let candidates = (p as u128)
        .checked_pow(linear_slots + nonlinear.len() as u32)
        .unwrap_or(u128::MAX);
    if candidates > max_candidates {
        return Err(AutError::EnumerationCapExceeded {
            candidates,
            cap: max_candidates,
        });
    }
    let gls: Vec<Vec<Vec<Vec<Scalar>>>> = blocks.iter().map(|b| matrices(b.dim, field)).collect();
    let free = (p as usize).pow(nonlinear.len() as u32);
    let total = gls.iter().map(Vec::len).product::<usize>() * free;

    let build = |mut code: usize| -> Result<NVectAutomorphism> {
        let mut terms: Vec<(usize, Exponents, Scalar)> = Vec::new();
        for (slot, e) in &nonlinear {
            terms.push((*slot, e.clone(), field.int((code % p as usize) as i64)));
            code /= p as usize;
        }
        for (b, gl) in blocks.iter().zip(&gls) {
            let m = &gl[code % gl.len()];
            code /= gl.len();
            for (r, c) in b.coords().enumerate() {
                for (j, v) in b.coords().enumerate() {
                    let mut e = vec![0; n];
                    e[v] = 1;
                    terms.push((c, e, m[r][j].clone()));
                }
            }
        }
        NVectAutomorphism::from_terms(sig, field, terms)
    };
    let mut elements: Vec<NVectAutomorphism> = (0..total)
        .into_par_iter()
        .map(build)
        .collect::<Result<_>>()?;
    let id = elements
        .iter()
        .position(|a| a.map().is_identity())
        .expect("identity is a candidate");
    let identity = elements.remove(id);
    elements.insert(0, identity);
    let index: HashMap<PolyMap, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, a)| (a.map().clone(), i))
        .collect();
    if index.len() != elements.len() {
        return Err(AutError::NotClosed(
            "two coefficient choices give the same map".into(),
        ));
    }
    let order = elements.len();
    let rows: Vec<Vec<u32>> = (0..order)
        .into_par_iter()
        .map(|a| {
            (0..order)
                .map(|b| {
                    let c = elements[a].map().compose(elements[b].map())?;
                    index.get(&c).map(|&i| i as u32).ok_or_else(|| {
                        AutError::NotClosed(format!(
                            "composition of elements {a} and {b} is not enumerated"
                        ))
                    })
                })
                .collect::<Result<Vec<u32>>>()
        })
        .collect::<Result<_>>()?;
    let group = FiniteGroup::from_flat(order, rows.concat(), false)?;
    Ok(AutGroup {
        sig: sig.clone(),
        field,
        group,
        elements,
        index,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionOrder {
    pub families: Vec<usize>,
    pub order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct P54Report {
    pub families: usize,
    pub field: Field,
    pub candidates: u128,
    pub gamma_order: usize,
    pub predicted_order: u128,
    pub gi_orders: Vec<usize>,
    pub intersections: Vec<IntersectionOrder>,
    pub all_gi_normal: bool,
    pub statomorphism_order: usize,
    pub statomorphisms_normal: bool,
    pub statomorphisms_in_core: bool,
    pub linear_in_factors: bool,
    pub verdict: bool,
    pub trace: TraceNode,
    #[serde(skip)]
    pub witness: NTupleWitness,
}

/// Enumerates the automorphism group, forms the subgroups `G^i` fixing each
/// factor, and runs the recursive n-tuple check on them.
pub fn verify_p54(sig: &GradedSignature, field: Field, max_candidates: u128) -> Result<P54Report> {
    let aut = enumerate_aut(sig, field, max_candidates)?;
    let k = sig.families();
    let gamma = aut.group();
    let gis: Vec<Subgroup> = (0..k).map(|i| aut.gi(i)).collect::<Result<_>>()?;
    let mut all_gi_normal = true;
    for g in &gis {
        all_gi_normal &= is_normal(gamma, g)?;
    }
    let mut intersections = Vec::new();
    let mut core = Subgroup::whole(gamma);
    for mask in 1u32..1 << k {
        if mask.count_ones() < 2 {
            continue;
        }
        let families: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let mut s = Subgroup::whole(gamma);
        for &i in &families {
            s = intersect(&s, &gis[i])?;
        }
        intersections.push(IntersectionOrder {
            families,
            order: s.order(),
        });
    }
    intersections.sort_by_key(|x| (x.families.len(), x.families.clone()));
    for g in &gis {
        core = intersect(&core, g)?;
    }
    let stat = aut.statomorphisms()?;
    let witness = verify_ntuple(gamma, &gis)?;
    Ok(P54Report {
        families: k,
        field,
        candidates: aut.candidates(),
        gamma_order: aut.order(),
        predicted_order: predicted_order(sig, field.characteristic()),
        gi_orders: gis.iter().map(Subgroup::order).collect(),
        intersections,
        all_gi_normal,
        statomorphism_order: stat.order(),
        statomorphisms_normal: is_normal(gamma, &stat)?,
        statomorphisms_in_core: stat.is_subset_of(&core),
        linear_in_factors: aut
            .elements()
            .iter()
            .all(NVectAutomorphism::linear_in_factors),
        verdict: witness.verdict,
        trace: witness.trace.clone(),
        witness,
    })
}
