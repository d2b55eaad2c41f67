use super::{normality_witness, FiniteGroup, GroupError, Result, Subgroup};

/// A validated homomorphism between finite groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(GroupError::IndexOutOfRange {
                index: map.len(),
                order: source.order(),
            });
        }
        for &m in &map {
            target.check_index(m)?;
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotAHomomorphism { a, b });
                }
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            map: group.elements().collect(),
        }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> Subgroup {
        let e = self.target.identity();
        Subgroup::from_mask(&self.source, self.map.iter().map(|&m| m == e).collect())
    }

    pub fn image(&self) -> Subgroup {
        let mut mask = vec![false; self.target.order()];
        for &m in &self.map {
            mask[m] = true;
        }
        Subgroup::from_mask(&self.target, mask)
    }

    /// Image of a subgroup of the source.
    pub fn image_of(&self, sub: &Subgroup) -> Result<Subgroup> {
        if sub.parent() != &self.source {
            return Err(GroupError::ParentMismatch);
        }
        let mut mask = vec![false; self.target.order()];
        for &a in sub.members() {
            mask[self.map[a]] = true;
        }
        Ok(Subgroup::from_mask(&self.target, mask))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(GroupError::ParentMismatch);
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&a| self.map[a]).collect(),
        })
    }
}

/// A quotient group together with its projection and coset data.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: FiniteGroup,
    pub projection: GroupHom,
    /// Least element index of each coset, indexed by quotient element.
    pub representatives: Vec<usize>,
}

/// Quotient by a normal subgroup on canonical (least-index) coset representatives.
///
/// Quotient elements are ordered by their representative.
pub fn quotient(group: &FiniteGroup, normal: &Subgroup) -> Result<Quotient> {
    if normal.parent() != group {
        return Err(GroupError::ParentMismatch);
    }
    if let Some((conjugator, element)) = normality_witness(normal) {
        return Err(GroupError::NotNormal {
            conjugator,
            element,
        });
    }
    let mut class = vec![usize::MAX; group.order()];
    let mut representatives = Vec::new();
    for a in group.elements() {
        if class[a] != usize::MAX {
            continue;
        }
        let k = representatives.len();
        representatives.push(a);
        for &n in normal.members() {
            class[group.mul(a, n)] = k;
        }
    }
    let q = representatives.len();
    let mut flat = Vec::with_capacity(q * q);
    for &a in &representatives {
        for &b in &representatives {
            flat.push(class[group.mul(a, b)] as u32);
        }
    }
    let qgroup = FiniteGroup::from_flat(q, flat, false)?;
    let projection = GroupHom {
        source: group.clone(),
        target: qgroup.clone(),
        map: class,
    };
    Ok(Quotient {
        group: qgroup,
        projection,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, subgroup_closure};

    #[test]
    fn q8_mod_center_is_klein() {
        let q8 = catalog::quaternion();
        let center = Subgroup::from_members(&q8, q8.center()).unwrap();
        assert_eq!(center.order(), 2);
        let q = quotient(&q8, &center).unwrap();
        assert_eq!(q.group.order(), 4);
        assert!(q.group.is_abelian());
        assert!(q
            .group
            .elements()
            .all(|a| q.group.mul(a, a) == q.group.identity()));
        assert_eq!(q.projection.kernel(), center);
        assert!(q.projection.is_surjective());
    }

    #[test]
    fn trivial_and_whole_quotients() {
        let s3 = catalog::symmetric(3);
        let q = quotient(&s3, &Subgroup::trivial(&s3)).unwrap();
        assert_eq!(q.group, s3);
        assert_eq!(q.projection.map(), (0..6).collect::<Vec<_>>().as_slice());
        let q = quotient(&s3, &Subgroup::whole(&s3)).unwrap();
        assert_eq!(q.group.order(), 1);
    }

    #[test]
    fn quotient_by_non_normal_fails() {
        let s3 = catalog::symmetric(3);
        let t = (0..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let h = subgroup_closure(&s3, &[t]).unwrap();
        assert!(matches!(
            quotient(&s3, &h),
            Err(GroupError::NotNormal { .. })
        ));
    }

    #[test]
    fn hom_validation() {
        let z4 = catalog::cyclic(4);
        let z2 = catalog::cyclic(2);
        assert!(GroupHom::new(&z4, &z2, vec![0, 1, 0, 1]).is_ok());
        assert_eq!(
            GroupHom::new(&z4, &z2, vec![0, 1, 1, 1]),
            Err(GroupError::NotAHomomorphism { a: 1, b: 1 })
        );
    }
}
