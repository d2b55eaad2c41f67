//! Double and n-tuple principal groups: verification, vacancy, exact
//! sequences, dressing actions, semidirect products, and the construction of
//! the structure group of a pair of compatible principal actions.

pub mod corpus;
mod dressing;
mod ntuple;
mod pipeline;

use thiserror::Error;

use crate::group::{
    intersect, join, normality_witness, quotient, FiniteGroup, GroupError, GroupHom, Quotient,
    Subgroup,
};
use crate::groupoid::GroupoidError;

pub use dressing::{dressing, semidirect, semidirect_to_gamma, DressingAction, Semidirect};
pub use ntuple::{verify_ntuple, NTupleFailure, NTupleWitness, TraceNode};
pub use pipeline::{
    check_compatibility, gamma_from_actions, CompatibilityReport, Diagram, DirectionReport,
    PipelineResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrincipalError {
    #[error("subgroup {index} is not normal: conjugating {element} by {conjugator} leaves it")]
    NotNormal {
        index: usize,
        conjugator: usize,
        element: usize,
    },
    #[error("subgroups do not generate: element {missing} is missing")]
    NotGenerating { missing: usize },
    #[error("not an action by automorphisms ({law}) at ({a}, {b})")]
    NotAnActionByAutomorphisms {
        law: &'static str,
        a: usize,
        b: usize,
    },
    #[error("{direction}: no g_{{g'}} for g = {g}, g' = {gprime} valid at point {point}")]
    NotCompatible {
        direction: &'static str,
        g: usize,
        gprime: usize,
        point: usize,
    },
    #[error("precondition: action {which} is not free, element {element} fixes point {point}")]
    PreconditionNotFree {
        which: &'static str,
        element: usize,
        point: usize,
    },
    #[error("structure group action is not free: element {element} fixes point {point}")]
    NotFree { element: usize, point: usize },
    #[error("diagram failure: {0}")]
    DiagramFailure(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

pub type Result<T> = std::result::Result<T, PrincipalError>;

/// A group `gamma` with normal subgroups `g1 = G`, `g2 = G'` generating it.
#[derive(Debug, Clone)]
pub struct DoublePrincipalGroup {
    pub gamma: FiniteGroup,
    pub g1: Subgroup,
    pub g2: Subgroup,
    /// `G0 = G n G'`.
    pub core: Subgroup,
    /// `[G] = G/G0`.
    pub q1: FiniteGroup,
    /// `[G'] = G'/G0`.
    pub q2: FiniteGroup,
}

/// Quotient of a subgroup by a normal subgroup it contains, both inside `gamma`.
pub(crate) fn sub_quotient(sub: &Subgroup, normal: &Subgroup) -> Result<Quotient> {
    let (group, embed) = sub.to_group();
    let inside = Subgroup::from_members(
        &group,
        (0..embed.len()).filter(|&k| normal.contains(embed[k])),
    )?;
    Ok(quotient(&group, &inside)?)
}

/// Least element of `ambient` missing from `sub`.
pub(crate) fn first_missing(ambient: &Subgroup, sub: &Subgroup) -> Option<usize> {
    ambient
        .members()
        .iter()
        .copied()
        .find(|&a| !sub.contains(a))
}

pub fn verify_double(
    gamma: &FiniteGroup,
    g1: &Subgroup,
    g2: &Subgroup,
) -> Result<DoublePrincipalGroup> {
    for (index, s) in [g1, g2].into_iter().enumerate() {
        if s.parent() != gamma {
            return Err(GroupError::ParentMismatch.into());
        }
        if let Some((conjugator, element)) = normality_witness(s) {
            return Err(PrincipalError::NotNormal {
                index,
                conjugator,
                element,
            });
        }
    }
    let joined = join(gamma, &[g1.clone(), g2.clone()])?;
    if let Some(missing) = first_missing(&Subgroup::whole(gamma), &joined) {
        return Err(PrincipalError::NotGenerating { missing });
    }
    let core = intersect(g1, g2)?;
    let q1 = sub_quotient(g1, &core)?.group;
    let q2 = sub_quotient(g2, &core)?.group;
    Ok(DoublePrincipalGroup {
        gamma: gamma.clone(),
        g1: g1.clone(),
        g2: g2.clone(),
        core,
        q1,
        q2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vacancy {
    pub vacant: bool,
    pub product_bijective: bool,
    /// Number of pairs `(g, g')` with `g g' = gamma`, for every `gamma`.
    pub fiber_sizes: Vec<usize>,
}

/// Vacancy (`G n G' = {e}`) against bijectivity of `m(g, g') = g g'`.
pub fn vacancy(dpg: &DoublePrincipalGroup) -> Vacancy {
    let gamma = &dpg.gamma;
    let mut fiber_sizes = vec![0; gamma.order()];
    for &g in dpg.g1.members() {
        for &h in dpg.g2.members() {
            fiber_sizes[gamma.mul(g, h)] += 1;
        }
    }
    let vacant = dpg.core.is_trivial();
    let product_bijective = fiber_sizes.iter().all(|&c| c == 1);
    assert_eq!(
        vacant, product_bijective,
        "vacancy must match bijectivity of the product map"
    );
    assert!(
        fiber_sizes.iter().all(|&c| c == dpg.core.order()),
        "product map fibers must have the size of the core"
    );
    Vacancy {
        vacant,
        product_bijective,
        fiber_sizes,
    }
}

/// The map `gamma -> gamma/G' x gamma/G` and its kernel.
#[derive(Debug, Clone)]
pub struct ExactSequence {
    /// Class of each element modulo `G'` and modulo `G`.
    pub phi: Vec<(usize, usize)>,
    pub kernel: Subgroup,
    pub image_order: usize,
    /// `ker(phi) = G0`.
    pub exact: bool,
}

pub fn exact_sequence(dpg: &DoublePrincipalGroup) -> Result<ExactSequence> {
    let mod_g2 = quotient(&dpg.gamma, &dpg.g2)?;
    let mod_g1 = quotient(&dpg.gamma, &dpg.g1)?;
    let phi: Vec<(usize, usize)> = dpg
        .gamma
        .elements()
        .map(|a| (mod_g2.projection.apply(a), mod_g1.projection.apply(a)))
        .collect();
    let unit = (mod_g2.group.identity(), mod_g1.group.identity());
    let kernel =
        Subgroup::from_members(&dpg.gamma, dpg.gamma.elements().filter(|&a| phi[a] == unit))?;
    let mut image = phi.clone();
    image.sort_unstable();
    image.dedup();
    Ok(ExactSequence {
        exact: kernel == dpg.core,
        phi,
        kernel,
        image_order: image.len(),
    })
}

/// `phi(G1) <= G2` and `phi(G1') <= G2'`.
pub fn dpg_morphism_check(
    phi: &GroupHom,
    source: &DoublePrincipalGroup,
    target: &DoublePrincipalGroup,
) -> Result<bool> {
    if phi.source() != &source.gamma || phi.target() != &target.gamma {
        return Err(GroupError::ParentMismatch.into());
    }
    Ok(phi.image_of(&source.g1)?.is_subset_of(&target.g1)
        && phi.image_of(&source.g2)?.is_subset_of(&target.g2))
}
