use petgraph::unionfind::UnionFind;

use super::{require_cocycle, AutMaps, Cocycle, CocycleError, Permutations, Result};
use crate::aut::{AutGroup, NVectAutomorphism};
use crate::graded::{GradedSignature, PolyMap, Polynomial, Scalar};
use crate::group::{ActionSide, FiniteAction, FiniteGroup, GroupError, GroupHom};

/// Relabels to `0..k` by first occurrence.
fn normalize(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Image of a permutation on the classes of `labels`, if well defined.
fn on_classes(perm: &[usize], labels: &[usize], classes: usize) -> Option<Vec<usize>> {
    let mut out = vec![usize::MAX; classes];
    for (x, &y) in perm.iter().enumerate() {
        let (a, b) = (labels[x], labels[y]);
        if out[a] == usize::MAX {
            out[a] = b;
        } else if out[a] != b {
            return None;
        }
    }
    Some(out)
}

/// A group action on a finite fiber with two projections `rho`, `rho'` given
/// as class labels; the action must descend along both.
#[derive(Debug, Clone)]
pub struct FiberedSpace {
    action: FiniteAction,
    rho: Vec<usize>,
    rho_prime: Vec<usize>,
}

impl FiberedSpace {
    pub fn new(action: FiniteAction, rho: &[usize], rho_prime: &[usize]) -> Result<Self> {
        let points = action.points();
        if rho.len() != points || rho_prime.len() != points {
            return Err(CocycleError::ActionIncompatibleWithFibration(
                "one label per fiber point is required".into(),
            ));
        }
        let (rho, k) = normalize(rho);
        let (rho_prime, kp) = normalize(rho_prime);
        let group = action.group().clone();
        for g in group.elements() {
            let perm = action.permutation(g);
            if on_classes(perm, &rho, k).is_none() {
                return Err(CocycleError::ActionIncompatibleWithFibration(format!(
                    "element {g} does not descend along rho"
                )));
            }
            if on_classes(perm, &rho_prime, kp).is_none() {
                return Err(CocycleError::ActionIncompatibleWithFibration(format!(
                    "element {g} does not descend along rho'"
                )));
            }
        }
        Ok(FiberedSpace {
            action,
            rho,
            rho_prime,
        })
    }

    pub fn action(&self) -> &FiniteAction {
        &self.action
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn rho_prime(&self) -> &[usize] {
        &self.rho_prime
    }

    /// Labels of the common quotient of `rho` and `rho'`.
    pub fn base_labels(&self) -> Vec<usize> {
        let n = self.rho.len();
        let mut uf = UnionFind::<usize>::new(n);
        for labels in [&self.rho, &self.rho_prime] {
            let mut first = std::collections::HashMap::new();
            for (x, &l) in labels.iter().enumerate() {
                let r = *first.entry(l).or_insert(x);
                uf.union(r, x);
            }
        }
        normalize(&(0..n).map(|x| uf.find(x)).collect::<Vec<_>>()).0
    }

    /// Transition map of the fiber for `g`, as a left action `x -> g.x`.
    pub fn transition(&self, g: usize) -> Vec<usize> {
        let group = self.action.group();
        self.action.permutation(group.inv(g)).to_vec()
    }
}

/// Quotient of a permutation-valued cocycle by a partition of the fiber.
pub fn quotient_cocycle(c: &Cocycle<Vec<usize>>, labels: &[usize]) -> Result<Cocycle<Vec<usize>>> {
    let (labels, k) = normalize(labels);
    c.map_values(|(i, j), perm| {
        on_classes(perm, &labels, k).ok_or_else(|| {
            CocycleError::ActionIncompatibleWithFibration(format!(
                "transition ({i}, {j}) does not descend"
            ))
        })
    })
}

#[derive(Debug, Clone)]
pub struct AssociatedBundle {
    /// Transitions in the acting group (after `tau`, when given).
    pub structure: Cocycle<usize>,
    /// Fiber transitions of the associated bundle.
    pub fiber: Cocycle<Vec<usize>>,
    pub rho_quotient: Cocycle<Vec<usize>>,
    pub rho_prime_quotient: Cocycle<Vec<usize>>,
    /// The common quotient of both projections.
    pub base: Cocycle<Vec<usize>>,
    /// Quotienting either projection further reaches `base`.
    pub corners_commute: bool,
}

/// Associated bundle of a principal cocycle: every transition `g_ij` becomes
/// the fiber map of `tau(g_ij)`, together with the induced transitions on
/// both quotients and on their common quotient.
pub fn associated_cocycle(
    c: &Cocycle<usize>,
    gamma: &FiniteGroup,
    fibered: &FiberedSpace,
    tau: Option<&GroupHom>,
) -> Result<AssociatedBundle> {
    require_cocycle(c, gamma)?;
    let acting = fibered.action.group();
    let structure = match tau {
        Some(t) => {
            if t.source() != gamma || t.target() != acting {
                return Err(GroupError::ParentMismatch.into());
            }
            c.map_values(|_, &g| Ok::<_, CocycleError>(t.apply(g)))?
        }
        None => {
            if acting != gamma {
                return Err(GroupError::ParentMismatch.into());
            }
            c.clone()
        }
    };
    require_cocycle(&structure, acting)?;
    let perms = Permutations(fibered.action.points());
    let fiber = structure.map_values(|_, &g| Ok::<_, CocycleError>(fibered.transition(g)))?;
    require_cocycle(&fiber, &perms)?;
    let rho_quotient = quotient_cocycle(&fiber, &fibered.rho)?;
    let rho_prime_quotient = quotient_cocycle(&fiber, &fibered.rho_prime)?;
    let base_labels = fibered.base_labels();
    let base = quotient_cocycle(&fiber, &base_labels)?;
    for (q, size) in [
        (&rho_quotient, &fibered.rho),
        (&rho_prime_quotient, &fibered.rho_prime),
        (&base, &base_labels),
    ] {
        let k = size.iter().max().map_or(0, |m| m + 1);
        require_cocycle(q, &Permutations(k))?;
    }
    let descend = |labels: &[usize]| -> Vec<usize> {
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![0; k];
        for (x, &l) in labels.iter().enumerate() {
            out[l] = base_labels[x];
        }
        out
    };
    let via_rho = quotient_cocycle(&rho_quotient, &descend(&fibered.rho))?;
    let via_rho_prime = quotient_cocycle(&rho_prime_quotient, &descend(&fibered.rho_prime))?;
    let corners_commute = via_rho == base && via_rho_prime == base;
    Ok(AssociatedBundle {
        structure,
        fiber,
        rho_quotient,
        rho_prime_quotient,
        base,
        corners_commute,
    })
}

fn decode(mut x: usize, p: usize, n: usize, field: crate::graded::Field) -> Vec<Scalar> {
    (0..n)
        .map(|_| {
            let v = x % p;
            x /= p;
            field.int(v as i64)
        })
        .collect()
}

fn encode(point: &[Scalar], p: usize) -> usize {
    point.iter().rev().fold(0, |acc, s| {
        let (num, _) = s.to_ratio();
        acc * p + usize::try_from(num).expect("prime field values are small")
    })
}

/// The enumerated automorphism group acting on `F_p^n` by evaluation, with
/// `rho`, `rho'` the projections onto the first two factors.
pub fn standard_fibered_space(aut: &AutGroup) -> Result<FiberedSpace> {
    let sig = aut.signature();
    if sig.families() < 2 {
        return Err(CocycleError::ActionIncompatibleWithFibration(
            "two factors are required".into(),
        ));
    }
    let field = aut.field();
    let p = field.characteristic() as usize;
    let n = sig.coords();
    let points = p
        .checked_pow(n as u32)
        .filter(|&m| m <= 1 << 16)
        .ok_or_else(|| {
            CocycleError::ActionIncompatibleWithFibration("fiber is too large to tabulate".into())
        })?;
    let coords: Vec<Vec<Scalar>> = (0..points).map(|x| decode(x, p, n, field)).collect();
    let rows: Vec<Vec<usize>> = aut
        .elements()
        .iter()
        .map(|a| coords.iter().map(|pt| encode(&a.eval(pt), p)).collect())
        .collect();
    let action = FiniteAction::new(aut.group(), points, rows, ActionSide::Left)?;
    let blocks = sig.blocks();
    let project = |mask: u32| -> Vec<usize> {
        let block = blocks
            .iter()
            .find(|b| crate::aut::degree_mask(&b.degree) == mask);
        coords
            .iter()
            .map(|pt| block.map_or(0, |b| encode(&pt[b.coords()], p)))
            .collect()
    };
    FiberedSpace::new(action, &project(1), &project(2))
}

/// The n-tuple vector bundle cocycle with the automorphisms named by `c`.
pub fn associated_vector_cocycle(
    c: &Cocycle<usize>,
    aut: &AutGroup,
) -> Result<Cocycle<NVectAutomorphism>> {
    require_cocycle(c, aut.group())?;
    let out = c.map_values(|_, &g| Ok::<_, CocycleError>(aut.element(g).clone()))?;
    require_cocycle(
        &out,
        &AutMaps {
            sig: aut.signature().clone(),
            field: aut.field(),
        },
    )?;
    Ok(out)
}

/// The principal cocycle of the frame bundle: the same transitions read as
/// elements of the abstract automorphism group.
pub fn frame_cocycle(dvb: &Cocycle<NVectAutomorphism>, aut: &AutGroup) -> Result<Cocycle<usize>> {
    require_cocycle(
        dvb,
        &AutMaps {
            sig: aut.signature().clone(),
            field: aut.field(),
        },
    )?;
    let out =
        dvb.map_values(|(i, j), a| aut.index_of(a).ok_or(CocycleError::NotInGroup { i, j }))?;
    require_cocycle(&out, aut.group())?;
    Ok(out)
}

/// Restriction of an automorphism to the factor of degree `mask`, which must
/// not depend on other coordinates.
pub fn factor_transition(a: &NVectAutomorphism, mask: u32) -> Result<PolyMap> {
    let sig = a.signature();
    let block = sig
        .blocks()
        .into_iter()
        .find(|b| crate::aut::degree_mask(&b.degree) == mask && b.dim > 0)
        .ok_or_else(|| {
            CocycleError::ActionIncompatibleWithFibration(format!("no block of degree mask {mask}"))
        })?;
    let sub =
        GradedSignature::multi_unchecked(sig.families(), 0, &[(block.degree.clone(), block.dim)])?;
    let field = a.field();
    let mut components = Vec::new();
    for c in block.coords() {
        let mut p = Polynomial::zero(block.dim, field);
        for (e, s) in a.map().component(c).terms() {
            if e.iter()
                .enumerate()
                .any(|(v, &k)| k > 0 && !block.coords().contains(&v))
            {
                return Err(CocycleError::ActionIncompatibleWithFibration(format!(
                    "component {c} depends on coordinates outside the factor"
                )));
            }
            p.add_term(e[block.coords()].to_vec(), s.clone());
        }
        components.push(p);
    }
    Ok(PolyMap::new(&sub, &sub, field, components)?)
}
