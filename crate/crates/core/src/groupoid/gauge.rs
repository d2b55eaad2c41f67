use std::collections::HashMap;

use super::{FiniteGroupoid, GroupoidError, Result};
use crate::group::FiniteAction;

/// Gauge groupoid `(P x P)/G` of a free right action, with its labelling data.
#[derive(Debug, Clone)]
pub struct GaugeGroupoid {
    pub groupoid: FiniteGroupoid,
    /// `arrow_of[p * |P| + q]` is the arrow `<p, q>`.
    pub arrow_of: Vec<usize>,
    /// Orbit (object) of each point.
    pub object_of: Vec<usize>,
    /// Least pair `(p, q)` of each arrow.
    pub representatives: Vec<(usize, usize)>,
    /// Least point of each object.
    pub object_representatives: Vec<usize>,
    points: usize,
}

impl GaugeGroupoid {
    pub fn arrow(&self, p: usize, q: usize) -> usize {
        self.arrow_of[p * self.points + q]
    }

    pub fn points(&self) -> usize {
        self.points
    }
}

/// Builds `(P x P)/G` with `src<p,q> = [q]`, `tgt<p,q> = [p]` and
/// `<p,q><q,r> = <p,r>`. Arrows are numbered in order of their least pair.
pub fn gauge_groupoid(action: &FiniteAction) -> Result<GaugeGroupoid> {
    if let Some((element, point)) = action.fixed_point_witness() {
        return Err(GroupoidError::ActionNotFree { element, point });
    }
    let n = action.points();
    let group = action.group();
    let (object_of, orbits) = action.orbits();
    let object_representatives: Vec<usize> = orbits.iter().map(|o| o[0]).collect();

    let mut arrow_of = vec![usize::MAX; n * n];
    let mut representatives = Vec::new();
    for p in 0..n {
        for q in 0..n {
            if arrow_of[p * n + q] != usize::MAX {
                continue;
            }
            let label = representatives.len();
            representatives.push((p, q));
            for g in group.elements() {
                arrow_of[action.apply(p, g) * n + action.apply(q, g)] = label;
            }
        }
    }

    let arrows = representatives.len();
    let src: Vec<usize> = representatives.iter().map(|&(_, q)| object_of[q]).collect();
    let tgt: Vec<usize> = representatives.iter().map(|&(p, _)| object_of[p]).collect();
    let unit: Vec<usize> = object_representatives
        .iter()
        .map(|&x| arrow_of[x * n + x])
        .collect();
    let inv: Vec<usize> = representatives
        .iter()
        .map(|&(p, q)| arrow_of[q * n + p])
        .collect();

    // Transporter: for points in one orbit, the unique g with x.g = y.
    let mut transport: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..n {
        for g in group.elements() {
            transport.insert((x, action.apply(x, g)), g);
        }
    }
    let mut mul = HashMap::new();
    for a in 0..arrows {
        let (p, q) = representatives[a];
        for b in 0..arrows {
            let (q2, r) = representatives[b];
            if object_of[q] != object_of[q2] {
                continue;
            }
            let g = transport[&(q2, q)];
            mul.insert((a, b), arrow_of[p * n + action.apply(r, g)]);
        }
    }
    let groupoid = FiniteGroupoid::new(orbits.len(), src, tgt, unit, inv, mul)?;
    Ok(GaugeGroupoid {
        groupoid,
        arrow_of,
        object_of,
        representatives,
        object_representatives,
        points: n,
    })
}
