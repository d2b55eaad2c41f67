use super::{semidirect, verify_double, DoublePrincipalGroup, PrincipalError, Result, Semidirect};
use crate::group::{quotient, ActionSide, FiniteAction, FiniteGroup, Subgroup};
use crate::groupoid::{check_compatible, gauge_groupoid, induced_gauge_action, GroupoidError};

/// One direction of the compatibility check: `acting` on the gauge groupoid of `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionReport {
    pub direction: &'static str,
    /// A single `g_{g'}` works for all points (equivalently the induced action is well defined).
    pub well_defined: bool,
    /// `(g, g', point)` where no common `g_{g'}` exists.
    pub witness: Option<(usize, usize, usize)>,
    pub groupoid_compatible: bool,
    pub pre_principal: bool,
    pub kernel_order: usize,
}

impl DirectionReport {
    pub fn passes(&self) -> bool {
        self.well_defined && self.groupoid_compatible && self.pre_principal
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    /// `rho'` acting on the gauge groupoid of `rho`.
    pub forward: DirectionReport,
    /// `rho` acting on the gauge groupoid of `rho'`.
    pub backward: DirectionReport,
    pub compatible: bool,
    pub note: &'static str,
}

const PROPER_NOTE: &str = "finite: proper automatically";

fn require_free(action: &FiniteAction, which: &'static str) -> Result<()> {
    match action.fixed_point_witness() {
        Some((element, point)) => Err(PrincipalError::PreconditionNotFree {
            which,
            element,
            point,
        }),
        None => Ok(()),
    }
}

/// For each `(g', g)` the unique `h` in `base` with `p.g.g' = p.g'.h`, derived at
/// point 0 and checked at every point. `Err` carries `(g, g', point)`.
fn dressing_table(
    base: &FiniteAction,
    acting: &FiniteAction,
) -> std::result::Result<Vec<Vec<usize>>, (usize, usize, usize)> {
    let (g, gp) = (base.group(), acting.group());
    let mut table = vec![vec![usize::MAX; g.order()]; gp.order()];
    if base.points() == 0 {
        return Ok(gp.elements().map(|_| g.elements().collect()).collect());
    }
    for b in gp.elements() {
        for a in g.elements() {
            let target = acting.apply(base.apply(0, a), b);
            let start = acting.apply(0, b);
            let h = g
                .elements()
                .find(|&h| base.apply(start, h) == target)
                .ok_or((a, b, 0))?;
            if let Some(p) = (0..base.points())
                .find(|&p| acting.apply(base.apply(p, a), b) != base.apply(acting.apply(p, b), h))
            {
                return Err((a, b, p));
            }
            table[b][a] = h;
        }
    }
    Ok(table)
}

fn direction(
    base: &FiniteAction,
    acting: &FiniteAction,
    name: &'static str,
) -> Result<DirectionReport> {
    let direct = dressing_table(base, acting);
    let gauge = gauge_groupoid(base)?;
    let induced = match induced_gauge_action(&gauge, acting) {
        Ok(ga) => Some(ga),
        Err(GroupoidError::NotWellDefined { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    assert_eq!(
        direct.is_ok(),
        induced.is_some(),
        "pointwise and gauge-groupoid well-definedness must agree"
    );
    let mut report = DirectionReport {
        direction: name,
        well_defined: direct.is_ok(),
        witness: direct.err(),
        groupoid_compatible: false,
        pre_principal: false,
        kernel_order: 0,
    };
    if let Some(ga) = induced {
        let c = check_compatible(&ga);
        report.groupoid_compatible = c.compatible;
        report.pre_principal = c.pre_principal;
        report.kernel_order = c.kernel.order();
    }
    Ok(report)
}

/// Checks both directions of the double principal bundle condition for two
/// free actions on the same points.
pub fn check_compatibility(
    rho: &FiniteAction,
    rho_prime: &FiniteAction,
) -> Result<CompatibilityReport> {
    require_free(rho, "rho")?;
    require_free(rho_prime, "rho_prime")?;
    if rho.points() != rho_prime.points() {
        return Err(PrincipalError::DiagramFailure(
            "actions move different numbers of points".into(),
        ));
    }
    let forward = direction(rho, rho_prime, "rho_prime on gauge groupoid of rho")?;
    let backward = direction(rho_prime, rho, "rho on gauge groupoid of rho_prime")?;
    let compatible = forward.passes() && backward.passes();
    Ok(CompatibilityReport {
        forward,
        backward,
        compatible,
        note: PROPER_NOTE,
    })
}

/// Orbit maps of the square `P -> P/G -> P/gamma`, `P -> P/G' -> P/gamma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub to_m: Vec<usize>,
    pub to_m_prime: Vec<usize>,
    pub m_to_m0: Vec<usize>,
    pub m_prime_to_m0: Vec<usize>,
    pub m: usize,
    pub m_prime: usize,
    pub m0: usize,
    /// Kernel orders of the descended `G'` action on `M` and `G` action on `M'`.
    pub descended_kernel_orders: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub gamma: FiniteGroup,
    /// `gamma` acting on the points.
    pub action: FiniteAction,
    pub semidirect: Semidirect,
    /// `G0`: pairs `(g', g)` acting trivially.
    pub kernel: Subgroup,
    /// `g_{g'}` as `dressing[g'][g]`.
    pub dressing: Vec<Vec<usize>>,
    pub dpg: DoublePrincipalGroup,
    pub diagram: Diagram,
    /// Order of the permutation group generated by both actions.
    pub generated_order: usize,
    pub note: &'static str,
}

/// Descends `acting` to the orbits of `base`; returns the descended rows.
fn descend(base_orbit: &[usize], orbits: usize, acting: &FiniteAction) -> Result<Vec<Vec<usize>>> {
    let mut rows = Vec::new();
    for g in acting.group().elements() {
        let mut row = vec![usize::MAX; orbits];
        for p in 0..acting.points() {
            let image = base_orbit[acting.apply(p, g)];
            let slot = &mut row[base_orbit[p]];
            if *slot != usize::MAX && *slot != image {
                return Err(PrincipalError::DiagramFailure(format!(
                    "element {g} does not descend to the orbit of point {p}"
                )));
            }
            *slot = image;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Builds the structure group of two compatible free actions on the same points:
/// `gamma = (G' x| G)/G0` acting by `p.[g', g] = (p.g').g`.
pub fn gamma_from_actions(rho: &FiniteAction, rho_prime: &FiniteAction) -> Result<PipelineResult> {
    require_free(rho, "rho")?;
    require_free(rho_prime, "rho_prime")?;
    let n = rho.points();
    if rho_prime.points() != n {
        return Err(PrincipalError::DiagramFailure(
            "actions move different numbers of points".into(),
        ));
    }
    let (g, gp) = (rho.group(), rho_prime.group());
    let dressing =
        dressing_table(rho, rho_prime).map_err(|(a, b, point)| PrincipalError::NotCompatible {
            direction: "rho_prime on gauge groupoid of rho",
            g: a,
            gprime: b,
            point,
        })?;
    let sd = semidirect(gp, g, &dressing)?;
    let m = g.order();
    let rows: Vec<Vec<usize>> = sd
        .group
        .elements()
        .map(|x| {
            (0..n)
                .map(|p| rho.apply(rho_prime.apply(p, x / m), x % m))
                .collect()
        })
        .collect();
    let big = FiniteAction::new(&sd.group, n, rows, ActionSide::Right)?;
    let kernel = big.kernel();
    let q = quotient(&sd.group, &kernel)?;
    let gamma = q.group.clone();
    assert_eq!(gamma.order() * kernel.order(), g.order() * gp.order());
    let gamma_rows: Vec<Vec<usize>> = q
        .representatives
        .iter()
        .map(|&r| big.permutation(r).to_vec())
        .collect();
    let action = FiniteAction::new(&gamma, n, gamma_rows, ActionSide::Right)?;
    if let Some((element, point)) = action.fixed_point_witness() {
        return Err(PrincipalError::NotFree { element, point });
    }

    let g_image = q.projection.image_of(&Subgroup::from_members(
        &sd.group,
        sd.embed_g.iter().copied(),
    )?)?;
    let gp_image = q.projection.image_of(&Subgroup::from_members(
        &sd.group,
        sd.embed_gprime.iter().copied(),
    )?)?;
    let dpg = verify_double(&gamma, &g_image, &gp_image)?;
    if dpg.core.order() != kernel.order() {
        return Err(PrincipalError::InternalInconsistency(format!(
            "core of order {} but kernel of order {}",
            dpg.core.order(),
            kernel.order()
        )));
    }

    let (to_m, m_orbits) = rho.orbits();
    let (to_m_prime, mp_orbits) = rho_prime.orbits();
    let (to_m0, m0_orbits) = action.orbits();
    let mut m_to_m0 = vec![usize::MAX; m_orbits.len()];
    let mut m_prime_to_m0 = vec![usize::MAX; mp_orbits.len()];
    for p in 0..n {
        for (map, from) in [(&mut m_to_m0, to_m[p]), (&mut m_prime_to_m0, to_m_prime[p])] {
            if map[from] != usize::MAX && map[from] != to_m0[p] {
                return Err(PrincipalError::DiagramFailure(format!(
                    "square does not commute at point {p}"
                )));
            }
            map[from] = to_m0[p];
        }
    }
    let on_m = FiniteAction::new(
        gp,
        m_orbits.len(),
        descend(&to_m, m_orbits.len(), rho_prime)?,
        ActionSide::Right,
    )?;
    let on_m_prime = FiniteAction::new(
        g,
        mp_orbits.len(),
        descend(&to_m_prime, mp_orbits.len(), rho)?,
        ActionSide::Right,
    )?;
    for (desc, name) in [(&on_m, "G' on P/G"), (&on_m_prime, "G on P/G'")] {
        let kernel_mask = desc.kernel();
        let free_mod_kernel = desc
            .group()
            .elements()
            .filter(|&x| !kernel_mask.contains(x))
            .all(|x| (0..desc.points()).all(|y| desc.apply(y, x) != y));
        if !free_mod_kernel || kernel_mask.order() != kernel.order() {
            return Err(PrincipalError::DiagramFailure(format!(
                "descended action {name} is not principal mod G0"
            )));
        }
    }

    let mut gens: Vec<Vec<usize>> = g.elements().map(|x| rho.permutation(x).to_vec()).collect();
    gens.extend(gp.elements().map(|x| rho_prime.permutation(x).to_vec()));
    let (closure, perms) =
        FiniteGroup::from_permutations(&gens, n, crate::group::DEFAULT_MAX_ORDER)?;
    let mut ours: Vec<Vec<usize>> = gamma
        .elements()
        .map(|x| action.permutation(x).to_vec())
        .collect();
    ours.sort();
    if ours != perms {
        return Err(PrincipalError::DiagramFailure(
            "structure group differs from the generated permutation group".into(),
        ));
    }
    let diagram = Diagram {
        to_m,
        to_m_prime,
        m_to_m0,
        m_prime_to_m0,
        m: m_orbits.len(),
        m_prime: mp_orbits.len(),
        m0: m0_orbits.len(),
        descended_kernel_orders: (on_m.kernel().order(), on_m_prime.kernel().order()),
    };
    Ok(PipelineResult {
        gamma,
        action,
        semidirect: sd,
        kernel,
        dressing,
        dpg,
        diagram,
        generated_order: closure.order(),
        note: PROPER_NOTE,
    })
}
