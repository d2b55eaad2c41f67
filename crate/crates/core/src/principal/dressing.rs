use std::collections::HashMap;

use super::{DoublePrincipalGroup, PrincipalError, Result};
use crate::group::{is_normal, FiniteGroup, GroupHom, Subgroup};

/// The two conjugation actions of a double principal group, in `gamma` indices.
#[derive(Debug, Clone)]
pub struct DressingAction {
    /// `g_{g'} = g'^-1 g g'` keyed by `(g, g')`.
    pub g_on_gprime: HashMap<(usize, usize), usize>,
    /// `g'_g = g^-1 g' g` keyed by `(g', g)`.
    pub gprime_on_g: HashMap<(usize, usize), usize>,
}

impl DressingAction {
    /// `g_{g'}`.
    pub fn g_by(&self, g: usize, gprime: usize) -> usize {
        self.g_on_gprime[&(g, gprime)]
    }

    /// `g'_g`.
    pub fn gprime_by(&self, gprime: usize, g: usize) -> usize {
        self.gprime_on_g[&(gprime, g)]
    }
}

fn inconsistent(what: &str, g: usize, gprime: usize) -> PrincipalError {
    PrincipalError::InternalInconsistency(format!("{what} fails at g = {g}, g' = {gprime}"))
}

/// Builds both dressing actions and checks their laws on all element pairs.
pub fn dressing(dpg: &DoublePrincipalGroup) -> Result<DressingAction> {
    let c = &dpg.gamma;
    let (gs, gps) = (dpg.g1.members(), dpg.g2.members());
    let mut g_on_gprime = HashMap::new();
    let mut gprime_on_g = HashMap::new();
    for &g in gs {
        for &gp in gps {
            let a = c.conjugate(c.inv(gp), g);
            let b = c.conjugate(c.inv(g), gp);
            if !dpg.g1.contains(a) || !dpg.g2.contains(b) {
                return Err(inconsistent("dressing lands in the subgroup", g, gp));
            }
            g_on_gprime.insert((g, gp), a);
            gprime_on_g.insert((gp, g), b);
        }
    }
    let d = DressingAction {
        g_on_gprime,
        gprime_on_g,
    };
    for &g in gs {
        for &gp in gps {
            for &gp2 in gps {
                if d.g_by(g, c.mul(gp, gp2)) != d.g_by(d.g_by(g, gp), gp2) {
                    return Err(inconsistent("g_{g'1 g'2} = (g_{g'1})_{g'2}", g, gp));
                }
            }
            for &g2 in gs {
                if d.g_by(c.mul(g, g2), gp) != c.mul(d.g_by(g, gp), d.g_by(g2, gp)) {
                    return Err(inconsistent("(g1 g2)_{g'} = (g1)_{g'} (g2)_{g'}", g, gp));
                }
                if d.gprime_by(gp, c.mul(g, g2)) != d.gprime_by(d.gprime_by(gp, g), g2) {
                    return Err(inconsistent("g'_{g1 g2} = (g'_{g1})_{g2}", g, gp));
                }
            }
            for &gp2 in gps {
                if d.gprime_by(c.mul(gp, gp2), g) != c.mul(d.gprime_by(gp, g), d.gprime_by(gp2, g))
                {
                    return Err(inconsistent("(g'1 g'2)_g = (g'1)_g (g'2)_g", g, gp));
                }
            }
            let (gi, gpi) = (c.inv(g), c.inv(gp));
            let ggp = c.mul(g, gp);
            if ggp != c.mul(gp, d.g_by(g, gp)) || ggp != c.mul(d.gprime_by(gp, gi), g) {
                return Err(inconsistent("g g' = g' g_{g'} = g'_{g^-1} g", g, gp));
            }
            let gpg = c.mul(gp, g);
            if gpg != c.mul(g, d.gprime_by(gp, g)) || gpg != c.mul(d.g_by(g, gpi), gp) {
                return Err(inconsistent("g' g = g g'_g = g_{g'^-1} g'", g, gp));
            }
            let lhs = c.mul(d.gprime_by(gp, gi), gpi);
            let rhs = c.mul(g, c.inv(d.g_by(g, gpi)));
            if lhs != rhs {
                return Err(inconsistent(
                    "(g')_{g^-1} (g')^-1 = g (g_{(g')^-1})^-1",
                    g,
                    gp,
                ));
            }
        }
    }
    Ok(d)
}

/// `G' x| G` with `(g', g)(g'1, g1) = (g' g'1, g_{g'1} g1)`; element `(g', g)`
/// has index `g' * |G| + g`.
#[derive(Debug, Clone)]
pub struct Semidirect {
    pub group: FiniteGroup,
    /// Index of `(e', g)` for each `g`.
    pub embed_g: Vec<usize>,
    /// Index of `(g', e)` for each `g'`.
    pub embed_gprime: Vec<usize>,
}

/// `act[g'][g]` is `g_{g'}`, a right action of `gprime` on `g` by automorphisms.
pub fn semidirect(gprime: &FiniteGroup, g: &FiniteGroup, act: &[Vec<usize>]) -> Result<Semidirect> {
    let (np, n) = (gprime.order(), g.order());
    let bad = |law, a, b| PrincipalError::NotAnActionByAutomorphisms { law, a, b };
    if act.len() != np
        || act
            .iter()
            .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
    {
        return Err(bad("table shape", act.len(), n));
    }
    if let Some(a) = g.elements().find(|&a| act[gprime.identity()][a] != a) {
        return Err(bad("identity acts trivially", gprime.identity(), a));
    }
    for a in gprime.elements() {
        for b in gprime.elements() {
            if g.elements()
                .any(|x| act[gprime.mul(a, b)][x] != act[b][act[a][x]])
            {
                return Err(bad("g_{g'1 g'2} = (g_{g'1})_{g'2}", a, b));
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                if act[a][g.mul(x, y)] != g.mul(act[a][x], act[a][y]) {
                    return Err(bad("(g1 g2)_{g'} = (g1)_{g'} (g2)_{g'}", x, y));
                }
            }
        }
    }
    let order = np * n;
    let mut flat = Vec::with_capacity(order * order);
    for a in 0..order {
        let (ap, ag) = (a / n, a % n);
        for b in 0..order {
            let (bp, bg) = (b / n, b % n);
            flat.push((gprime.mul(ap, bp) * n + g.mul(act[bp][ag], bg)) as u32);
        }
    }
    let group = FiniteGroup::from_flat(order, flat, false)?;
    let embed_g: Vec<usize> = g.elements().map(|x| gprime.identity() * n + x).collect();
    let embed_gprime: Vec<usize> = gprime.elements().map(|x| x * n + g.identity()).collect();
    for a in 0..order {
        let (ap, ag) = (a / n, a % n);
        let api = gprime.inv(ap);
        if group.inv(a) != api * n + act[api][g.inv(ag)] {
            return Err(PrincipalError::InternalInconsistency(format!(
                "inverse formula fails at {a}"
            )));
        }
    }
    let g_sub = Subgroup::from_members(&group, embed_g.iter().copied())?;
    Subgroup::from_members(&group, embed_gprime.iter().copied())?;
    if !is_normal(&group, &g_sub)? {
        return Err(PrincipalError::InternalInconsistency(
            "G is not normal in the semidirect product".into(),
        ));
    }
    Ok(Semidirect {
        group,
        embed_g,
        embed_gprime,
    })
}

/// The semidirect product `G' x| G` of the dressing action and the
/// homomorphism `(g', g) -> g' g` onto `gamma` (an isomorphism when vacant).
pub fn semidirect_to_gamma(dpg: &DoublePrincipalGroup) -> Result<(Semidirect, GroupHom)> {
    let c = &dpg.gamma;
    let (g, g_embed) = dpg.g1.to_group();
    let (gp, gp_embed) = dpg.g2.to_group();
    let pos: HashMap<usize, usize> = g_embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let act: Vec<Vec<usize>> = gp_embed
        .iter()
        .map(|&y| {
            g_embed
                .iter()
                .map(|&x| pos[&c.conjugate(c.inv(y), x)])
                .collect()
        })
        .collect();
    let sd = semidirect(&gp, &g, &act)?;
    let n = g.order();
    let map = (0..sd.group.order())
        .map(|a| c.mul(gp_embed[a / n], g_embed[a % n]))
        .collect();
    let hom = GroupHom::new(&sd.group, c, map)?;
    Ok((sd, hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, subgroup_closure};
    use crate::principal::verify_double;

    fn q8_dpg() -> DoublePrincipalGroup {
        let q8 = catalog::quaternion();
        let i = subgroup_closure(&q8, &[q8.find_label("i").unwrap()]).unwrap();
        let j = subgroup_closure(&q8, &[q8.find_label("j").unwrap()]).unwrap();
        verify_double(&q8, &i, &j).unwrap()
    }

    #[test]
    fn i_dressed_by_j() {
        let dpg = q8_dpg();
        let q8 = &dpg.gamma;
        let d = dressing(&dpg).unwrap();
        let l = |s| q8.find_label(s).unwrap();
        assert_eq!(d.g_by(l("i"), l("j")), l("-i"));
        assert_eq!(d.gprime_by(l("j"), l("i")), l("-j"));
        assert_eq!(d.g_by(l("i"), l("-1")), l("i"));
    }

    #[test]
    fn abelian_dressing_is_trivial() {
        let z6 = catalog::cyclic(6);
        let dpg = verify_double(
            &z6,
            &subgroup_closure(&z6, &[3]).unwrap(),
            &subgroup_closure(&z6, &[2]).unwrap(),
        )
        .unwrap();
        let d = dressing(&dpg).unwrap();
        assert!(d.g_on_gprime.iter().all(|(&(g, _), &v)| v == g));
        let (sd, hom) = semidirect_to_gamma(&dpg).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(hom.is_injective() && hom.is_surjective());
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        let sd = semidirect(&z2, &z3, &[vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(sd.group.is_abelian());
    }

    #[test]
    fn inversion_action_gives_s3() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        let sd = semidirect(&z2, &z3, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(sd.group.order(), 6);
        assert!(!sd.group.is_abelian());
        let mut orders = sd.group.summary().element_orders;
        let mut expected = catalog::symmetric(3).summary().element_orders;
        orders.sort();
        expected.sort();
        assert_eq!(orders, expected);
    }

    #[test]
    fn bad_action_is_rejected() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        // x -> x + 1 is not an automorphism.
        let err = semidirect(&z2, &z3, &[vec![0, 1, 2], vec![1, 2, 0]]).unwrap_err();
        assert!(matches!(
            err,
            PrincipalError::NotAnActionByAutomorphisms { .. }
        ));
    }

    #[test]
    fn q8_semidirect_has_order_16() {
        let dpg = q8_dpg();
        let (sd, hom) = semidirect_to_gamma(&dpg).unwrap();
        assert_eq!(sd.group.order(), 16);
        assert!(hom.is_surjective());
        assert_eq!(hom.kernel().order(), 2);
    }
}
