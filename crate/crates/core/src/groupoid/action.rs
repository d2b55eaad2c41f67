use std::collections::HashMap;

use super::{FiniteGroupoid, GaugeGroupoid, GroupoidError, Result};
use crate::group::{ActionSide, FiniteAction, FiniteGroup, Subgroup};

/// A right action of a finite group on the arrows of a finite groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidAction {
    groupoid: FiniteGroupoid,
    group: FiniteGroup,
    act: Vec<Vec<usize>>,
}

impl GroupoidAction {
    /// `act[g][y]` is `y.g`. Rows must be permutations composing as a right action.
    pub fn new(
        groupoid: &FiniteGroupoid,
        group: &FiniteGroup,
        act: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let arrows = FiniteAction::new(group, groupoid.arrows(), act, ActionSide::Right)
            .map_err(|e| GroupoidError::NotAnAction(e.to_string()))?;
        Ok(GroupoidAction {
            groupoid: groupoid.clone(),
            group: group.clone(),
            act: arrows.rows(),
        })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn apply(&self, y: usize, g: usize) -> usize {
        self.act[g][y]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// Permutation of the objects read off from the units: `x.g = tgt(1_x . g)`.
    pub fn object_rows(&self) -> Vec<Vec<usize>> {
        let gd = &self.groupoid;
        self.act
            .iter()
            .map(|row| (0..gd.objects()).map(|x| gd.tgt(row[gd.unit(x)])).collect())
            .collect()
    }
}

/// The action of a second group on a gauge groupoid, `<p,q>.g' = <p.g', q.g'>`.
///
/// `other` acts on the same points as the action that built `gauge`; the induced
/// map must be well defined on orbits.
pub fn induced_gauge_action(gauge: &GaugeGroupoid, other: &FiniteAction) -> Result<GroupoidAction> {
    let n = gauge.points();
    if other.points() != n {
        return Err(GroupoidError::NotAnAction(format!(
            "acting group moves {} points, the gauge groupoid has {n}",
            other.points()
        )));
    }
    let arrows = gauge.groupoid.arrows();
    let mut act = Vec::with_capacity(other.group().order());
    for g in other.group().elements() {
        let mut row = vec![usize::MAX; arrows];
        for p in 0..n {
            for q in 0..n {
                let y = gauge.arrow(p, q);
                let image = gauge.arrow(other.apply(p, g), other.apply(q, g));
                if row[y] == usize::MAX {
                    row[y] = image;
                } else if row[y] != image {
                    return Err(GroupoidError::NotWellDefined { element: g, p, q });
                }
            }
        }
        act.push(row);
    }
    GroupoidAction::new(&gauge.groupoid, other.group(), act)
}

#[derive(Debug, Clone)]
pub struct CompatReport {
    pub compatible: bool,
    /// First violated condition when not compatible.
    pub violation: Option<String>,
    /// Elements acting as the identity on all arrows.
    pub kernel: Subgroup,
    /// The action of `G/kernel` on arrows is free.
    pub pre_principal: bool,
    /// Element outside the kernel and an arrow it fixes.
    pub fixed_arrow: Option<(usize, usize)>,
    /// Induced action on objects, `object_action[g][x]`.
    pub object_action: Vec<Vec<usize>>,
    /// The induced action of `G/kernel` on objects is free.
    pub objects_free_mod_kernel: bool,
}

fn compatibility_violation(ga: &GroupoidAction, objects: &[Vec<usize>]) -> Option<String> {
    let gd = &ga.groupoid;
    for g in ga.group.elements() {
        let h = &ga.act[g];
        let phi = &objects[g];
        let mut seen = vec![false; gd.objects()];
        if phi.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
            return Some(format!("element {g} does not permute the objects"));
        }
        for x in 0..gd.objects() {
            if h[gd.unit(x)] != gd.unit(phi[x]) {
                return Some(format!(
                    "element {g} does not send the unit of object {x} to a unit"
                ));
            }
        }
        for y in 0..gd.arrows() {
            if gd.src(h[y]) != phi[gd.src(y)] || gd.tgt(h[y]) != phi[gd.tgt(y)] {
                return Some(format!(
                    "element {g} does not cover its object map at arrow {y}"
                ));
            }
            if h[gd.inv(y)] != gd.inv(h[y]) {
                return Some(format!(
                    "element {g} does not commute with inversion at arrow {y}"
                ));
            }
        }
        for [a, b, ab] in gd.products() {
            if gd.mul(h[a], h[b]) != Some(h[ab]) {
                return Some(format!(
                    "element {g} does not preserve the product of ({a}, {b})"
                ));
            }
        }
    }
    None
}

/// Checks that every `y -> y.g` is a groupoid automorphism and computes the
/// kernel, pre-principality, and the induced action on objects.
pub fn check_compatible(ga: &GroupoidAction) -> CompatReport {
    let group = &ga.group;
    let gd = &ga.groupoid;
    let object_action = ga.object_rows();
    let violation = compatibility_violation(ga, &object_action);
    let mask: Vec<bool> = group
        .elements()
        .map(|g| (0..gd.arrows()).all(|y| ga.act[g][y] == y))
        .collect();
    let kernel = Subgroup::from_mask(group, mask.clone());
    let fixed_arrow = group.elements().filter(|&g| !mask[g]).find_map(|g| {
        (0..gd.arrows())
            .find(|&y| ga.act[g][y] == y)
            .map(|y| (g, y))
    });
    let objects_free_mod_kernel = group
        .elements()
        .filter(|&g| !mask[g])
        .all(|g| (0..gd.objects()).all(|x| object_action[g][x] != x));
    let compatible = violation.is_none();
    if compatible {
        debug_assert!(kernel
            .members()
            .iter()
            .all(|&k| (0..gd.objects()).all(|x| object_action[k][x] == x)));
        assert_eq!(
            fixed_arrow.is_none(),
            objects_free_mod_kernel,
            "pre-principality must agree with freeness on objects"
        );
    }
    CompatReport {
        compatible,
        violation,
        kernel,
        pre_principal: fixed_arrow.is_none(),
        fixed_arrow,
        object_action,
        objects_free_mod_kernel,
    }
}

/// Orbit groupoid of a pre-principal compatible action, with the projections.
#[derive(Debug, Clone)]
pub struct QuotientGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Orbit of each arrow.
    pub arrow_map: Vec<usize>,
    /// Orbit of each object.
    pub object_map: Vec<usize>,
    pub kernel: Subgroup,
    /// Object action of the acting group.
    pub object_action: FiniteAction,
}

fn orbit_labels(rows: &[Vec<usize>], n: usize) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        for row in rows {
            label[row[x]] = count;
        }
        count += 1;
    }
    (label, count)
}

/// Orbit groupoid of a compatible action that is free modulo its kernel.
pub fn quotient_groupoid(ga: &GroupoidAction) -> Result<QuotientGroupoid> {
    let report = check_compatible(ga);
    if let Some(v) = report.violation {
        return Err(GroupoidError::NotCompatible(v));
    }
    if let Some((element, arrow)) = report.fixed_arrow {
        return Err(GroupoidError::NotFree { element, arrow });
    }
    let gd = &ga.groupoid;
    let (arrow_map, arrows) = orbit_labels(&ga.act, gd.arrows());
    let (object_map, objects) = orbit_labels(&report.object_action, gd.objects());

    let mut src = vec![usize::MAX; arrows];
    let mut tgt = vec![usize::MAX; arrows];
    let mut inv = vec![usize::MAX; arrows];
    let mut unit = vec![usize::MAX; objects];
    for y in 0..gd.arrows() {
        let c = arrow_map[y];
        src[c] = object_map[gd.src(y)];
        tgt[c] = object_map[gd.tgt(y)];
        inv[c] = arrow_map[gd.inv(y)];
    }
    for x in 0..gd.objects() {
        unit[object_map[x]] = arrow_map[gd.unit(x)];
    }
    let mut mul: HashMap<(usize, usize), usize> = HashMap::new();
    for [a, b, ab] in gd.products() {
        let key = (arrow_map[a], arrow_map[b]);
        let c = arrow_map[ab];
        if let Some(&prev) = mul.get(&key) {
            if prev != c {
                return Err(GroupoidError::NotCompatible(format!(
                    "orbit product of arrows {a} and {b} is not well defined"
                )));
            }
        } else {
            mul.insert(key, c);
        }
    }
    // Every lift must agree on the structure maps of its orbit.
    for y in 0..gd.arrows() {
        let c = arrow_map[y];
        assert!(
            src[c] == object_map[gd.src(y)]
                && tgt[c] == object_map[gd.tgt(y)]
                && inv[c] == arrow_map[gd.inv(y)],
            "orbit structure maps are well defined for a compatible action"
        );
    }
    let groupoid = FiniteGroupoid::new(objects, src, tgt, unit, inv, mul)?;
    if let Some(v) = super::morphism_violation(gd, &groupoid, &arrow_map, &object_map) {
        panic!("projection onto the quotient is not a morphism: {v}");
    }
    let object_action = FiniteAction::new(
        &ga.group,
        gd.objects(),
        report.object_action,
        ActionSide::Right,
    )?;
    Ok(QuotientGroupoid {
        groupoid,
        arrow_map,
        object_map,
        kernel: report.kernel,
        object_action,
    })
}
