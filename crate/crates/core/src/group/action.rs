use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError, Result, Subgroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ActionSide {
    #[default]
    Right,
    Left,
}

/// A group action on `0..points`.
///
/// Stored internally as a right action `x.g`; a left action is converted with
/// `x.g := g^-1 . x` and keeps its tag for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    group: FiniteGroup,
    points: usize,
    right: Vec<Vec<usize>>,
    side: ActionSide,
}

impl FiniteAction {
    /// `act[g][x]` is the image of point `x` under `g` with the given side convention.
    pub fn new(
        group: &FiniteGroup,
        points: usize,
        act: Vec<Vec<usize>>,
        side: ActionSide,
    ) -> Result<Self> {
        if act.len() != group.order() {
            return Err(GroupError::InvalidAction(format!(
                "{} rows given for a group of order {}",
                act.len(),
                group.order()
            )));
        }
        for (g, row) in act.iter().enumerate() {
            if row.len() != points {
                return Err(GroupError::InvalidAction(format!(
                    "row {g} has {} entries, expected {points}",
                    row.len()
                )));
            }
            let mut seen = vec![false; points];
            for &x in row {
                if x >= points || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::InvalidAction(format!(
                        "row {g} is not a permutation of the points"
                    )));
                }
            }
        }
        let right = match side {
            ActionSide::Right => act,
            ActionSide::Left => group
                .elements()
                .map(|g| act[group.inv(g)].clone())
                .collect(),
        };
        let e = group.identity();
        if let Some(x) = (0..points).find(|&x| right[e][x] != x) {
            return Err(GroupError::InvalidAction(format!(
                "identity moves point {x}"
            )));
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if let Some(point) = (0..points).find(|&x| right[b][right[a][x]] != right[ab][x]) {
                    return Err(GroupError::NotAnAction { a, b, point });
                }
            }
        }
        Ok(FiniteAction {
            group: group.clone(),
            points,
            right,
            side,
        })
    }

    /// The right regular action of a group on itself, `x.g = x*g`.
    pub fn right_regular(group: &FiniteGroup) -> Self {
        let right = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(x, g)).collect())
            .collect();
        FiniteAction {
            group: group.clone(),
            points: group.order(),
            right,
            side: ActionSide::Right,
        }
    }

    /// Right translations of `parent` by the members of `sub`; the acting group
    /// is `sub` as a group in its own right.
    pub fn right_translation(sub: &Subgroup) -> Self {
        let parent = sub.parent();
        let (group, embed) = sub.to_group();
        let right = embed
            .iter()
            .map(|&h| parent.elements().map(|x| parent.mul(x, h)).collect())
            .collect();
        FiniteAction {
            group,
            points: parent.order(),
            right,
            side: ActionSide::Right,
        }
    }

    /// Restriction along a homomorphism-like embedding of `group` into this action's group.
    pub fn restrict(&self, group: &FiniteGroup, embed: &[usize]) -> Result<Self> {
        let act = embed.iter().map(|&g| self.right[g].clone()).collect();
        FiniteAction::new(group, self.points, act, ActionSide::Right)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn side(&self) -> ActionSide {
        self.side
    }

    /// Right-action image `x.g`.
    #[inline]
    pub fn apply(&self, x: usize, g: usize) -> usize {
        self.right[g][x]
    }

    /// Permutation of the points induced by `g`.
    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.right[g]
    }

    /// Rows in the declared side convention (inverse of the conversion done by [`FiniteAction::new`]).
    pub fn rows(&self) -> Vec<Vec<usize>> {
        match self.side {
            ActionSide::Right => self.right.clone(),
            ActionSide::Left => self
                .group
                .elements()
                .map(|g| self.right[self.group.inv(g)].clone())
                .collect(),
        }
    }

    /// First `(element, point)` with `element != e` fixing `point`.
    pub fn fixed_point_witness(&self) -> Option<(usize, usize)> {
        let e = self.group.identity();
        self.group.elements().filter(|&g| g != e).find_map(|g| {
            (0..self.points)
                .find(|&x| self.right[g][x] == x)
                .map(|x| (g, x))
        })
    }

    pub fn is_free(&self) -> bool {
        self.fixed_point_witness().is_none()
    }

    pub fn kernel(&self) -> Subgroup {
        let mask = self
            .group
            .elements()
            .map(|g| (0..self.points).all(|x| self.right[g][x] == x))
            .collect();
        Subgroup::from_mask(&self.group, mask)
    }

    /// Orbit label of every point (least point of its orbit) and the orbits in
    /// increasing order of their least point.
    pub fn orbits(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut uf = UnionFind::<usize>::new(self.points);
        for row in &self.right {
            for (x, &y) in row.iter().enumerate() {
                uf.union(x, y);
            }
        }
        let mut orbit_of_root = vec![usize::MAX; self.points];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut label = vec![0; self.points];
        for x in 0..self.points {
            let root = uf.find(x);
            if orbit_of_root[root] == usize::MAX {
                orbit_of_root[root] = orbits.len();
                orbits.push(Vec::new());
            }
            label[x] = orbit_of_root[root];
            orbits[orbit_of_root[root]].push(x);
        }
        (label, orbits)
    }
}

#[derive(Debug, Clone)]
pub struct ActionReport {
    pub is_free: bool,
    pub kernel: Subgroup,
    pub orbits: Vec<Vec<usize>>,
    /// Non-identity element and a point it fixes, when not free.
    pub fixed_point: Option<(usize, usize)>,
}

pub fn action_check(action: &FiniteAction) -> ActionReport {
    let fixed_point = action.fixed_point_witness();
    ActionReport {
        is_free: fixed_point.is_none(),
        kernel: action.kernel(),
        orbits: action.orbits().1,
        fixed_point,
    }
}
