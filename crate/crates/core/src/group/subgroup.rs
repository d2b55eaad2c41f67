use std::fmt;

use super::{FiniteGroup, GroupError, Result};

/// A subgroup stored as a sorted member list of its parent group.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("parent_order", &self.parent.order())
            .field("members", &self.members)
            .finish()
    }
}

impl Subgroup {
    /// Validates that `members` is a subgroup of `parent`.
    pub fn from_members(
        parent: &FiniteGroup,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut mask = vec![false; parent.order()];
        for m in members {
            parent.check_index(m)?;
            mask[m] = true;
        }
        let sub = Self::from_mask(parent, mask);
        let closed = sub.members.contains(&parent.identity())
            && sub.members.iter().all(|&a| {
                sub.mask[parent.inv(a)] && sub.members.iter().all(|&b| sub.mask[parent.mul(a, b)])
            });
        if !closed {
            return Err(GroupError::NotASubgroup {
                members: sub.members,
            });
        }
        Ok(sub)
    }

    pub(crate) fn from_mask(parent: &FiniteGroup, mask: Vec<bool>) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
            .collect();
        Subgroup {
            parent: parent.clone(),
            members,
            mask,
        }
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        let mut mask = vec![false; parent.order()];
        mask[parent.identity()] = true;
        Self::from_mask(parent, mask)
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::from_mask(parent, vec![true; parent.order()])
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask.get(a).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }

    /// The subgroup as a group in its own right, plus the embedding.
    ///
    /// Element `k` of the returned group is `members()[k]`.
    pub fn to_group(&self) -> (FiniteGroup, Vec<usize>) {
        let n = self.order();
        let mut position = vec![usize::MAX; self.parent.order()];
        for (k, &m) in self.members.iter().enumerate() {
            position[m] = k;
        }
        let mut flat = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                flat.push(position[self.parent.mul(a, b)] as u32);
            }
        }
        let group = FiniteGroup::from_flat(n, flat, false).expect("validated subgroup is a group");
        (group, self.members.clone())
    }

    fn same_parent(&self, other: &Subgroup) -> Result<()> {
        if self.parent == other.parent {
            Ok(())
        } else {
            Err(GroupError::ParentMismatch)
        }
    }
}

/// Smallest subgroup containing `generators`.
pub fn subgroup_closure(group: &FiniteGroup, generators: &[usize]) -> Result<Subgroup> {
    for &g in generators {
        group.check_index(g)?;
    }
    let mut mask = vec![false; group.order()];
    mask[group.identity()] = true;
    let mut members = vec![group.identity()];
    let mut i = 0;
    // In a finite group, closing under right multiplication by the generators
    // also produces inverses (they are positive powers).
    while i < members.len() {
        let a = members[i];
        i += 1;
        for &g in generators {
            let b = group.mul(a, g);
            if !mask[b] {
                mask[b] = true;
                members.push(b);
            }
        }
    }
    Ok(Subgroup::from_mask(group, mask))
}

/// First `(conjugator, element)` pair, in index order, with
/// `conjugator * element * conjugator^-1` outside `sub`.
pub fn normality_witness(sub: &Subgroup) -> Option<(usize, usize)> {
    let g = sub.parent();
    g.elements().find_map(|c| {
        sub.members()
            .iter()
            .find(|&&h| !sub.contains(g.conjugate(c, h)))
            .map(|&h| (c, h))
    })
}

pub fn is_normal(group: &FiniteGroup, sub: &Subgroup) -> Result<bool> {
    if sub.parent() != group {
        return Err(GroupError::ParentMismatch);
    }
    Ok(normality_witness(sub).is_none())
}

pub fn intersect(a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
    a.same_parent(b)?;
    let mask = a.mask.iter().zip(&b.mask).map(|(&x, &y)| x && y).collect();
    Ok(Subgroup::from_mask(a.parent(), mask))
}

/// Subgroup generated by the union of `subgroups`.
pub fn join(group: &FiniteGroup, subgroups: &[Subgroup]) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for s in subgroups {
        if s.parent() != group {
            return Err(GroupError::ParentMismatch);
        }
        gens.extend_from_slice(s.members());
    }
    gens.sort_unstable();
    gens.dedup();
    subgroup_closure(group, &gens)
}

/// Does the union of `subgroups` generate `group`?
pub fn generates(group: &FiniteGroup, subgroups: &[Subgroup]) -> Result<bool> {
    Ok(join(group, subgroups)?.is_whole())
}

/// Smallest normal subgroup containing `elements`.
pub fn normal_closure(group: &FiniteGroup, elements: &[usize]) -> Result<Subgroup> {
    for &g in elements {
        group.check_index(g)?;
    }
    let mut gens: Vec<usize> = elements
        .iter()
        .flat_map(|&h| group.elements().map(move |c| (c, h)))
        .map(|(c, h)| group.conjugate(c, h))
        .collect();
    gens.sort_unstable();
    gens.dedup();
    subgroup_closure(group, &gens)
}

/// All normal subgroups, sorted by order and then by member list.
pub fn normal_subgroups(group: &FiniteGroup) -> Vec<Subgroup> {
    let mut found: Vec<Subgroup> = Vec::new();
    let push = |s: Subgroup, found: &mut Vec<Subgroup>| {
        if !found.contains(&s) {
            found.push(s);
            true
        } else {
            false
        }
    };
    for g in group.elements() {
        push(
            normal_closure(group, &[g]).expect("index in range"),
            &mut found,
        );
    }
    // Every normal subgroup is a join of normal closures of its elements.
    let mut i = 0;
    while i < found.len() {
        let mut j = 0;
        while j < i {
            let joined = join(group, &[found[i].clone(), found[j].clone()]).expect("same parent");
            push(joined, &mut found);
            j += 1;
        }
        i += 1;
    }
    found.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.members().cmp(b.members()))
    });
    found
}
