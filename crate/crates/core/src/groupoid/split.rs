use std::collections::HashMap;

use super::{
    isomorphism_violation, quotient_groupoid, FiniteGroupoid, GroupoidAction, GroupoidError,
    QuotientGroupoid, Result,
};
use crate::group::FiniteGroup;

/// A G-groupoid presented over its quotient `G0` as the fiber product
/// `{(y0, x) : p(x) = src(y0)}`.
#[derive(Debug, Clone)]
pub struct SplitPresentation {
    pub quotient: QuotientGroupoid,
    /// Fiber-product pairs `(y0, x)`, sorted.
    pub fiber_pairs: Vec<(usize, usize)>,
    /// Index into `fiber_pairs` of `(pi(y), s(y))` for every arrow `y`.
    pub s_map: Vec<usize>,
    /// `y0.x` for each fiber-product pair.
    pub t_action: Vec<usize>,
    pair_index: HashMap<(usize, usize), usize>,
}

impl SplitPresentation {
    /// `y0.x`, defined when `p(x) = src(y0)`.
    pub fn act(&self, y0: usize, x: usize) -> Option<usize> {
        self.pair_index.get(&(y0, x)).map(|&i| self.t_action[i])
    }

    pub fn base(&self) -> &FiniteGroupoid {
        &self.quotient.groupoid
    }
}

fn failure(property: &'static str, witness: String) -> GroupoidError {
    GroupoidError::SplitFailure { property, witness }
}

/// Splits a free compatible action: checks that `y -> (pi(y), s(y))` is a
/// bijection onto the fiber product and that `y0.x := t(S^-1(y0, x))`
/// satisfies the four action properties.
pub fn split(ga: &GroupoidAction) -> Result<SplitPresentation> {
    let quotient = quotient_groupoid(ga)?;
    let gd = ga.groupoid();
    let g0 = quotient.groupoid.clone();
    let p = quotient.object_map.clone();
    let mut fiber_pairs = Vec::new();
    for y0 in 0..g0.arrows() {
        for x in 0..gd.objects() {
            if p[x] == g0.src(y0) {
                fiber_pairs.push((y0, x));
            }
        }
    }
    let pair_index: HashMap<(usize, usize), usize> = fiber_pairs
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();

    let mut s_map = Vec::with_capacity(gd.arrows());
    let mut t_action = vec![usize::MAX; fiber_pairs.len()];
    for y in 0..gd.arrows() {
        let key = (quotient.arrow_map[y], gd.src(y));
        let Some(&i) = pair_index.get(&key) else {
            return Err(failure(
                "S lands in the fiber product",
                format!("arrow {y} maps to {key:?}"),
            ));
        };
        if t_action[i] != usize::MAX {
            return Err(failure(
                "S is injective",
                format!("arrow {y} collides at {key:?}"),
            ));
        }
        t_action[i] = gd.tgt(y);
        s_map.push(i);
    }
    if let Some(i) = t_action.iter().position(|&t| t == usize::MAX) {
        return Err(failure(
            "S is surjective",
            format!("pair {:?} has no preimage", fiber_pairs[i]),
        ));
    }
    let sp = SplitPresentation {
        quotient,
        fiber_pairs,
        s_map,
        t_action,
        pair_index,
    };

    for (i, &(y0, x)) in sp.fiber_pairs.iter().enumerate() {
        if p[sp.t_action[i]] != g0.tgt(y0) {
            return Err(failure(
                "(i) p(y0.x) = tgt(y0)",
                format!("y0 = {y0}, x = {x}"),
            ));
        }
        if g0.is_unit(y0) && sp.t_action[i] != x {
            return Err(failure("(iii) unit acts trivially", format!("x = {x}")));
        }
    }
    for (a, b) in g0.composable_pairs() {
        let ab = g0.mul(a, b).unwrap();
        for x in (0..gd.objects()).filter(|&x| p[x] == g0.src(b)) {
            let bx = sp.act(b, x).unwrap();
            if sp.act(a, bx) != sp.act(ab, x) {
                return Err(failure(
                    "(ii) y0.(y0'.x) = (y0 y0').x",
                    format!("y0 = {a}, y0' = {b}, x = {x}"),
                ));
            }
        }
    }
    let objects = sp.quotient.object_action.clone();
    for (i, &(y0, x)) in sp.fiber_pairs.iter().enumerate() {
        for g in ga.group().elements() {
            if sp.act(y0, objects.apply(x, g)) != Some(objects.apply(sp.t_action[i], g)) {
                return Err(failure(
                    "(iv) y0.(xg) = (y0.x)g",
                    format!("y0 = {y0}, x = {x}, g = {g}"),
                ));
            }
        }
    }
    Ok(sp)
}

/// A multiplicative function `b: G0 -> G` read off from a split presentation
/// whose units form a trivial bundle `M0 x G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeFunction {
    pub b: Vec<usize>,
    /// Chosen base object (least in its orbit) over each object of `G0`.
    pub section: Vec<usize>,
    /// `(m0, g)` with `x = section[m0].g` for every object `x`.
    pub coordinates: Vec<(usize, usize)>,
}

pub fn multiplicative_function(
    sp: &SplitPresentation,
    group: &FiniteGroup,
) -> Result<MultiplicativeFunction> {
    let objects = &sp.quotient.object_action;
    if objects.group() != group {
        return Err(GroupoidError::NotTrivialized(
            "group differs from the acting group".into(),
        ));
    }
    if let Some((g, x)) = objects.fixed_point_witness() {
        return Err(GroupoidError::NotTrivialized(format!(
            "element {g} fixes object {x}"
        )));
    }
    let g0 = sp.base();
    let mut section = vec![usize::MAX; g0.objects()];
    for x in 0..objects.points() {
        let m0 = sp.quotient.object_map[x];
        if section[m0] == usize::MAX {
            section[m0] = x;
        }
    }
    let mut coordinates = vec![(usize::MAX, usize::MAX); objects.points()];
    for (m0, &base) in section.iter().enumerate() {
        for g in group.elements() {
            coordinates[objects.apply(base, g)] = (m0, g);
        }
    }
    let mut b = Vec::with_capacity(g0.arrows());
    for y0 in 0..g0.arrows() {
        let moved = sp.act(y0, section[g0.src(y0)]).unwrap();
        let (m0, by0) = coordinates[moved];
        debug_assert_eq!(m0, g0.tgt(y0));
        for g in group.elements() {
            let x = objects.apply(section[g0.src(y0)], g);
            if sp.act(y0, x) != Some(objects.apply(section[g0.tgt(y0)], group.mul(by0, g))) {
                return Err(failure(
                    "t(y0, (m, g)) = (tau(y0), b(y0) g)",
                    format!("y0 = {y0}, g = {g}"),
                ));
            }
        }
        b.push(by0);
    }
    check_multiplicative(g0, group, &b)?;
    Ok(MultiplicativeFunction {
        b,
        section,
        coordinates,
    })
}

fn check_multiplicative(base: &FiniteGroupoid, group: &FiniteGroup, b: &[usize]) -> Result<()> {
    if b.len() != base.arrows() || b.iter().any(|&g| g >= group.order()) {
        return Err(GroupoidError::NotAnAction(
            "function must assign a group element to every arrow".into(),
        ));
    }
    for (first, second) in base.composable_pairs() {
        if group.mul(b[first], b[second]) != b[base.mul(first, second).unwrap()] {
            return Err(GroupoidError::NotMultiplicative { first, second });
        }
    }
    Ok(())
}

/// The G-groupoid `G0 x G` twisted by a multiplicative `b`.
///
/// Arrow `(y0, g)` has index `y0 * |G| + g`, object `(m, g)` has index
/// `m * |G| + g`; `s(y0, g) = (src y0, g)`, `t(y0, g) = (tgt y0, b(y0) g)`,
/// and `G` acts by right multiplication on the second factor.
pub fn build_from_morphism(
    base: &FiniteGroupoid,
    group: &FiniteGroup,
    b: &[usize],
) -> Result<GroupoidAction> {
    check_multiplicative(base, group, b)?;
    let n = group.order();
    let arrows = base.arrows() * n;
    let mut src = Vec::with_capacity(arrows);
    let mut tgt = Vec::with_capacity(arrows);
    let mut inv = Vec::with_capacity(arrows);
    for y0 in 0..base.arrows() {
        for g in group.elements() {
            let bg = group.mul(b[y0], g);
            src.push(base.src(y0) * n + g);
            tgt.push(base.tgt(y0) * n + bg);
            inv.push(base.inv(y0) * n + bg);
        }
    }
    let unit = (0..base.objects())
        .flat_map(|m| group.elements().map(move |g| (m, g)))
        .map(|(m, g)| base.unit(m) * n + g)
        .collect();
    let mut mul = HashMap::new();
    for (y, y2) in base.composable_pairs() {
        let yy = base.mul(y, y2).unwrap();
        for g2 in group.elements() {
            let g1 = group.mul(b[y2], g2);
            mul.insert((y * n + g1, y2 * n + g2), yy * n + g2);
        }
    }
    let groupoid = FiniteGroupoid::new(base.objects() * n, src, tgt, unit, inv, mul)?;
    let act = group
        .elements()
        .map(|h| {
            (0..arrows)
                .map(|a| (a / n) * n + group.mul(a % n, h))
                .collect()
        })
        .collect();
    GroupoidAction::new(&groupoid, group, act)
}

/// Result of splitting a trivialized G-groupoid and rebuilding it from `b`.
#[derive(Debug, Clone)]
pub struct SplitRoundTrip {
    pub split: SplitPresentation,
    pub function: MultiplicativeFunction,
    pub rebuilt: GroupoidAction,
    /// Isomorphism from the original arrows to the rebuilt ones.
    pub arrow_iso: Vec<usize>,
    pub object_iso: Vec<usize>,
}

/// Splits `ga`, extracts `b`, rebuilds `G0 x_b G`, and checks that
/// `y -> (pi(y), g)` with `s(y) = section.g` is an equivariant isomorphism.
pub fn split_round_trip(ga: &GroupoidAction) -> Result<SplitRoundTrip> {
    let sp = split(ga)?;
    let group = ga.group();
    let function = multiplicative_function(&sp, group)?;
    let rebuilt = build_from_morphism(sp.base(), group, &function.b)?;
    let n = group.order();
    let object_iso: Vec<usize> = function
        .coordinates
        .iter()
        .map(|&(m, g)| m * n + g)
        .collect();
    let gd = ga.groupoid();
    let arrow_iso: Vec<usize> = (0..gd.arrows())
        .map(|y| sp.quotient.arrow_map[y] * n + function.coordinates[gd.src(y)].1)
        .collect();
    if let Some(v) = isomorphism_violation(gd, rebuilt.groupoid(), &arrow_iso, &object_iso) {
        return Err(failure("reconstruction is an isomorphism", v));
    }
    for h in group.elements() {
        if let Some(y) =
            (0..gd.arrows()).find(|&y| arrow_iso[ga.apply(y, h)] != rebuilt.apply(arrow_iso[y], h))
        {
            return Err(failure(
                "reconstruction is equivariant",
                format!("arrow {y}, element {h}"),
            ));
        }
    }
    Ok(SplitRoundTrip {
        split: sp,
        function,
        rebuilt,
        arrow_iso,
        object_iso,
    })
}
