//! Small groups and all their double principal structures, used by tests and
//! the acceptance suite.

use super::{verify_double, DoublePrincipalGroup};
use crate::group::{catalog, normal_subgroups, FiniteGroup};

/// Named groups of order at most 48.
pub fn groups() -> Vec<(&'static str, FiniteGroup)> {
    let z = catalog::cyclic;
    vec![
        ("Z6", z(6)),
        ("V4", catalog::klein()),
        ("Q8", catalog::quaternion()),
        ("D4", catalog::dihedral(4)),
        ("S3xZ2", catalog::symmetric(3).direct_product(&z(2))),
        ("S3", catalog::symmetric(3)),
        ("Z12", z(12)),
        ("A4", catalog::alternating(4)),
        ("Z2^3", catalog::klein().direct_product(&z(2))),
        ("Q8xZ2", catalog::quaternion().direct_product(&z(2))),
        ("Z3xS3", z(3).direct_product(&catalog::symmetric(3))),
        ("S4", catalog::symmetric(4)),
        ("D4xZ3", catalog::dihedral(4).direct_product(&z(3))),
        ("S4xZ2", catalog::symmetric(4).direct_product(&z(2))),
    ]
}

/// Every ordered pair of normal subgroups generating the group.
pub fn double_principal_groups(group: &FiniteGroup) -> Vec<DoublePrincipalGroup> {
    let normals = normal_subgroups(group);
    let mut out = Vec::new();
    for a in &normals {
        for b in &normals {
            if let Ok(dpg) = verify_double(group, a, b) {
                out.push(dpg);
            }
        }
    }
    out
}

/// The full corpus: `(group name, double principal group)`.
pub fn corpus() -> Vec<(&'static str, DoublePrincipalGroup)> {
    groups()
        .into_iter()
        .flat_map(|(name, g)| {
            double_principal_groups(&g)
                .into_iter()
                .map(move |d| (name, d))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_covers_required_groups() {
        let gs = groups();
        assert!(gs.len() >= 10);
        assert!(gs.iter().all(|(_, g)| g.order() <= 48));
        let q8 = &gs[2].1;
        // Pairs generating Q8: any pair containing Q8, plus the 6 ordered pairs of distinct order-4 subgroups.
        assert_eq!(double_principal_groups(q8).len(), 2 * 6 - 1 + 6);
    }
}
