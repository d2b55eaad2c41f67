use serde::Serialize;

use super::{first_missing, verify_double, PrincipalError, Result};
use crate::group::{intersect, join, FiniteGroup, GroupError, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NTupleFailure {
    /// Member `index` is not normal in the ambient group.
    NotNormal {
        index: usize,
        conjugator: usize,
        element: usize,
    },
    /// The members do not generate the ambient group.
    NotGenerating { missing: usize },
}

/// One checked system `(A; S_1, ..., S_m)`, all sets inside the top group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    /// Indices of the omitted members leading here from the root.
    pub path: Vec<usize>,
    pub ambient: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub verdict: bool,
    /// Failures of this node's own conditions (not its children's).
    pub failures: Vec<NTupleFailure>,
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    /// Depth-first list of all nodes.
    pub fn walk(&self) -> Vec<&TraceNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct NTupleWitness {
    pub gamma: FiniteGroup,
    pub subgroups: Vec<Subgroup>,
    pub verdict: bool,
    pub trace: TraceNode,
    /// `(i, j)` with `(gamma; G^i, G^j)` a double principal group, checked when the verdict holds.
    pub pairs_checked: Vec<(usize, usize)>,
}

fn check_node(
    gamma: &FiniteGroup,
    ambient: &Subgroup,
    members: &[Subgroup],
    path: Vec<usize>,
) -> TraceNode {
    let mut failures = Vec::new();
    for (index, s) in members.iter().enumerate() {
        let witness = ambient.members().iter().find_map(|&c| {
            s.members()
                .iter()
                .find(|&&h| !s.contains(gamma.conjugate(c, h)))
                .map(|&h| (c, h))
        });
        if let Some((conjugator, element)) = witness {
            failures.push(NTupleFailure::NotNormal {
                index,
                conjugator,
                element,
            });
        }
    }
    let joined = join(gamma, members).expect("members share the parent");
    if let Some(missing) = first_missing(ambient, &joined) {
        failures.push(NTupleFailure::NotGenerating { missing });
    }
    let mut children = Vec::new();
    if members.len() >= 3 {
        for i in 0..members.len() {
            let sub: Vec<Subgroup> = (0..members.len())
                .filter(|&j| j != i)
                .map(|j| intersect(&members[j], &members[i]).expect("members share the parent"))
                .collect();
            let mut child_path = path.clone();
            child_path.push(i);
            children.push(check_node(gamma, &members[i], &sub, child_path));
        }
    }
    let verdict = failures.is_empty() && children.iter().all(|c| c.verdict);
    TraceNode {
        path,
        ambient: ambient.members().to_vec(),
        members: members.iter().map(|s| s.members().to_vec()).collect(),
        verdict,
        failures,
        children,
    }
}

/// Recursive n-tuple check. A 1-tuple requires `G^1 = gamma`; a 2-tuple is a
/// double principal group; for `n >= 3` every `(G^i; G^j n G^i)_{j != i}` must
/// be an (n-1)-tuple principal group.
pub fn verify_ntuple(gamma: &FiniteGroup, subgroups: &[Subgroup]) -> Result<NTupleWitness> {
    if subgroups.is_empty() {
        return Err(PrincipalError::InternalInconsistency(
            "at least one subgroup is required".into(),
        ));
    }
    if subgroups.iter().any(|s| s.parent() != gamma) {
        return Err(GroupError::ParentMismatch.into());
    }
    let trace = check_node(gamma, &Subgroup::whole(gamma), subgroups, Vec::new());
    let verdict = trace.verdict;
    if subgroups.len() == 2 {
        assert_eq!(
            verdict,
            verify_double(gamma, &subgroups[0], &subgroups[1]).is_ok(),
            "2-tuple check must agree with the double check"
        );
    }
    let mut pairs_checked = Vec::new();
    if verdict {
        for i in 0..subgroups.len() {
            for j in i + 1..subgroups.len() {
                assert!(
                    verify_double(gamma, &subgroups[i], &subgroups[j]).is_ok(),
                    "every pair of an n-tuple principal group is double principal"
                );
                pairs_checked.push((i, j));
            }
        }
    }
    Ok(NTupleWitness {
        gamma: gamma.clone(),
        subgroups: subgroups.to_vec(),
        verdict,
        trace,
        pairs_checked,
    })
}
