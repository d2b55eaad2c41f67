//! Finite groupoids, gauge groupoids `(P x P)/G`, compatible group actions on
//! groupoids, quotient groupoids, and the splitting of a G-groupoid over its
//! quotient.

mod action;
mod gauge;
mod split;

use std::collections::HashMap;

use thiserror::Error;

use crate::group::GroupError;

pub use action::{
    check_compatible, induced_gauge_action, quotient_groupoid, CompatReport, GroupoidAction,
    QuotientGroupoid,
};
pub use gauge::{gauge_groupoid, GaugeGroupoid};
pub use split::{
    build_from_morphism, multiplicative_function, split, split_round_trip, MultiplicativeFunction,
    SplitPresentation, SplitRoundTrip,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("groupoid law '{law}' fails at {witness:?}")]
    Invalid {
        law: &'static str,
        witness: Vec<usize>,
    },
    #[error("action is not free: element {element} fixes point {point}")]
    ActionNotFree { element: usize, point: usize },
    #[error("induced action is not well defined: element {element} separates pairs of the orbit of ({p}, {q})")]
    NotWellDefined { element: usize, p: usize, q: usize },
    #[error("action is not compatible with the groupoid structure: {0}")]
    NotCompatible(String),
    #[error("action is not free modulo its kernel: element {element} fixes arrow {arrow}")]
    NotFree { element: usize, arrow: usize },
    #[error("splitting fails property {property}: {witness}")]
    SplitFailure {
        property: &'static str,
        witness: String,
    },
    #[error("units bundle is not trivializable: {0}")]
    NotTrivialized(String),
    #[error("function is not multiplicative on composable pair ({first}, {second})")]
    NotMultiplicative { first: usize, second: usize },
    #[error("not a groupoid action: {0}")]
    NotAnAction(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T> = std::result::Result<T, GroupoidError>;

/// A finite groupoid with arrows `0..arrows` over objects `0..objects`.
///
/// `mul(g, h)` is defined exactly when `src(g) == tgt(h)`; then
/// `src(gh) = src(h)` and `tgt(gh) = tgt(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    mul: HashMap<(usize, usize), usize>,
}

fn invalid(law: &'static str, witness: Vec<usize>) -> GroupoidError {
    GroupoidError::Invalid { law, witness }
}

impl FiniteGroupoid {
    pub fn new(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        mul: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let arrows = src.len();
        if tgt.len() != arrows || inv.len() != arrows {
            return Err(invalid(
                "src/tgt/inv lengths agree",
                vec![src.len(), tgt.len(), inv.len()],
            ));
        }
        if unit.len() != objects {
            return Err(invalid("one unit per object", vec![unit.len(), objects]));
        }
        if let Some(a) =
            (0..arrows).find(|&a| src[a] >= objects || tgt[a] >= objects || inv[a] >= arrows)
        {
            return Err(invalid("indices in range", vec![a]));
        }
        if let Some(x) =
            (0..objects).find(|&x| unit[x] >= arrows || src[unit[x]] != x || tgt[unit[x]] != x)
        {
            return Err(invalid("unit of x is a loop at x", vec![x]));
        }
        let g = FiniteGroupoid {
            objects,
            src,
            tgt,
            unit,
            inv,
            mul,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let arrows = self.arrows();
        let out_of = self.arrows_by_target();
        let mut composable = 0;
        for a in 0..arrows {
            for &b in &out_of[self.src[a]] {
                composable += 1;
                let Some(&ab) = self.mul.get(&(a, b)) else {
                    return Err(invalid("composable pairs have a product", vec![a, b]));
                };
                if ab >= arrows || self.src[ab] != self.src[b] || self.tgt[ab] != self.tgt[a] {
                    return Err(invalid("src(gh) = src(h) and tgt(gh) = tgt(g)", vec![a, b]));
                }
            }
        }
        if composable != self.mul.len() {
            let extra = self
                .mul
                .keys()
                .find(|&&(a, b)| a >= arrows || b >= arrows || self.src[a] != self.tgt[b]);
            let (a, b) = extra.copied().unwrap_or((usize::MAX, usize::MAX));
            return Err(invalid("products only on composable pairs", vec![a, b]));
        }
        for a in 0..arrows {
            if self.mul[&(self.unit[self.tgt[a]], a)] != a
                || self.mul[&(a, self.unit[self.src[a]])] != a
            {
                return Err(invalid("units are two-sided identities", vec![a]));
            }
            let i = self.inv[a];
            if self.src[i] != self.tgt[a] || self.tgt[i] != self.src[a] {
                return Err(invalid("inverse swaps source and target", vec![a]));
            }
            if self.mul[&(a, i)] != self.unit[self.tgt[a]]
                || self.mul[&(i, a)] != self.unit[self.src[a]]
            {
                return Err(invalid("inverse composes to units", vec![a]));
            }
        }
        for a in 0..arrows {
            for &b in &out_of[self.src[a]] {
                let ab = self.mul[&(a, b)];
                for &c in &out_of[self.src[b]] {
                    if self.mul[&(ab, c)] != self.mul[&(a, self.mul[&(b, c)])] {
                        return Err(invalid("associativity", vec![a, b, c]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pair groupoid on `n` objects: arrow `x*n + y` goes from `y` to `x`.
    pub fn pair(n: usize) -> Self {
        let arrows = n * n;
        let src = (0..arrows).map(|a| a % n).collect();
        let tgt = (0..arrows).map(|a| a / n).collect();
        let unit = (0..n).map(|x| x * n + x).collect();
        let inv = (0..arrows).map(|a| (a % n) * n + a / n).collect();
        let mut mul = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    mul.insert((x * n + y, y * n + z), x * n + z);
                }
            }
        }
        FiniteGroupoid {
            objects: n,
            src,
            tgt,
            unit,
            inv,
            mul,
        }
    }

    /// A group viewed as a one-object groupoid.
    pub fn from_group(group: &crate::group::FiniteGroup) -> Self {
        let n = group.order();
        let mut mul = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                mul.insert((a, b), group.mul(a, b));
            }
        }
        FiniteGroupoid {
            objects: 1,
            src: vec![0; n],
            tgt: vec![0; n],
            unit: vec![group.identity()],
            inv: (0..n).map(|a| group.inv(a)).collect(),
            mul,
        }
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn arrows(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, a: usize) -> usize {
        self.src[a]
    }

    pub fn tgt(&self, a: usize) -> usize {
        self.tgt[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        self.mul.get(&(a, b)).copied()
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[self.src[a]] == a
    }

    /// Composable pairs `(g, h)` sorted lexicographically.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let out_of = self.arrows_by_target();
        (0..self.arrows())
            .flat_map(|a| out_of[self.src[a]].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Composition triples `(g, h, gh)` sorted lexicographically.
    pub fn products(&self) -> Vec<[usize; 3]> {
        self.composable_pairs()
            .into_iter()
            .map(|(a, b)| [a, b, self.mul[&(a, b)]])
            .collect()
    }

    pub fn src_map(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt_map(&self) -> &[usize] {
        &self.tgt
    }

    pub fn unit_map(&self) -> &[usize] {
        &self.unit
    }

    pub fn inv_map(&self) -> &[usize] {
        &self.inv
    }

    /// `result[x]` lists the arrows with target `x`.
    fn arrows_by_target(&self) -> Vec<Vec<usize>> {
        let mut by = vec![Vec::new(); self.objects];
        for a in 0..self.arrows() {
            by[self.tgt[a]].push(a);
        }
        by
    }

    /// Isotropy group at object `x` as a finite group, with the arrow of each element.
    pub fn isotropy(&self, x: usize) -> (crate::group::FiniteGroup, Vec<usize>) {
        let loops: Vec<usize> = (0..self.arrows())
            .filter(|&a| self.src[a] == x && self.tgt[a] == x)
            .collect();
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table: Vec<Vec<usize>> = loops
            .iter()
            .map(|&a| loops.iter().map(|&b| pos[&self.mul[&(a, b)]]).collect())
            .collect();
        let group = crate::group::FiniteGroup::from_table(&table)
            .expect("isotropy of a groupoid is a group");
        (group, loops)
    }
}

/// Checks that `(arrow_map, object_map)` is a groupoid morphism `from -> to`.
///
/// Returns the first violated condition.
pub fn morphism_violation(
    from: &FiniteGroupoid,
    to: &FiniteGroupoid,
    arrow_map: &[usize],
    object_map: &[usize],
) -> Option<String> {
    if arrow_map.len() != from.arrows() || object_map.len() != from.objects() {
        return Some("map sizes do not match the source groupoid".into());
    }
    if arrow_map.iter().any(|&a| a >= to.arrows()) || object_map.iter().any(|&x| x >= to.objects())
    {
        return Some("map lands outside the target groupoid".into());
    }
    for a in 0..from.arrows() {
        if to.src(arrow_map[a]) != object_map[from.src(a)]
            || to.tgt(arrow_map[a]) != object_map[from.tgt(a)]
        {
            return Some(format!("arrow {a} does not cover the object map"));
        }
    }
    for (a, b) in from.composable_pairs() {
        let ab = from.mul(a, b).unwrap();
        if to.mul(arrow_map[a], arrow_map[b]) != Some(arrow_map[ab]) {
            return Some(format!("product of ({a}, {b}) not preserved"));
        }
    }
    None
}

/// A groupoid isomorphism is a morphism bijective on arrows and objects.
pub fn isomorphism_violation(
    from: &FiniteGroupoid,
    to: &FiniteGroupoid,
    arrow_map: &[usize],
    object_map: &[usize],
) -> Option<String> {
    if from.arrows() != to.arrows() || from.objects() != to.objects() {
        return Some("arrow or object counts differ".into());
    }
    let bijective = |m: &[usize], n: usize| {
        let mut seen = vec![false; n];
        m.iter()
            .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
    };
    if !bijective(arrow_map, to.arrows()) || !bijective(object_map, to.objects()) {
        return Some("maps are not bijective".into());
    }
    morphism_violation(from, to, arrow_map, object_map)
}
