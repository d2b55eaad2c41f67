use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde::Deserialize;
use serde_json::{json, Value};

use ntuple_core::group::{FiniteGroup, Subgroup};
use ntuple_core::io::{parse_generator_list, ActionPairSpec, GroupSpec, SubgroupSystemSpec};
use ntuple_core::principal::{
    dressing, exact_sequence, gamma_from_actions, semidirect_to_gamma, vacancy, verify_double,
    verify_ntuple, DoublePrincipalGroup, PrincipalError, TraceNode,
};

use crate::report::{error_witness, input, CmdResult, Failure, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum DpgCmd {
    /// Check that two subgroups make a double principal group.
    Verify {
        file: PathBuf,
        /// Comma-separated generators, one subgroup each (`i,j`; `a+b` for two generators).
        #[arg(long)]
        subgroups: Option<String>,
    },
    /// Build the structure group of two compatible free actions.
    GammaFromActions { file: PathBuf },
    /// Both dressing actions and the semidirect product.
    Dressing {
        file: PathBuf,
        #[arg(long)]
        subgroups: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum NtupleCmd {
    /// Recursive n-tuple principal group check.
    Verify {
        file: PathBuf,
        #[arg(long)]
        subgroups: Option<String>,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SystemOrGroup {
    System(SubgroupSystemSpec),
    Group(GroupSpec),
}

fn load_system(
    file: &Path,
    subgroups: Option<&str>,
    opts: &Options,
) -> Result<(FiniteGroup, Vec<Subgroup>), Failure> {
    let spec: SystemOrGroup = read_json(file)?;
    let (gamma, from_file) = match &spec {
        SystemOrGroup::System(s) => s.build(opts.max_order).map_err(input)?,
        SystemOrGroup::Group(g) => (g.build(opts.max_order).map_err(input)?, Vec::new()),
    };
    let subs = match subgroups {
        Some(list) => parse_generator_list(&gamma, list).map_err(input)?,
        None => from_file,
    };
    if subs.is_empty() {
        return Err(input(
            "no subgroups given (use a \"subgroups\" field or --subgroups)",
        ));
    }
    Ok((gamma, subs))
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x)).collect()
}

fn principal_verdict(e: &PrincipalError) -> bool {
    matches!(
        e,
        PrincipalError::NotNormal { .. }
            | PrincipalError::NotGenerating { .. }
            | PrincipalError::NotCompatible { .. }
            | PrincipalError::PreconditionNotFree { .. }
            | PrincipalError::NotFree { .. }
            | PrincipalError::DiagramFailure(_)
    )
}

fn classify(e: PrincipalError) -> Result<Outcome, Failure> {
    match e {
        PrincipalError::InternalInconsistency(m) => Err(Failure::Theory(m)),
        e if principal_verdict(&e) => Ok(Outcome::fail(json!({}), vec![error_witness(&e)])),
        e => Err(input(e)),
    }
}

fn double(
    gamma: &FiniteGroup,
    subs: &[Subgroup],
) -> Result<Result<DoublePrincipalGroup, Outcome>, Failure> {
    if subs.len() != 2 {
        return Err(input(format!("expected two subgroups, got {}", subs.len())));
    }
    match verify_double(gamma, &subs[0], &subs[1]) {
        Ok(d) => Ok(Ok(d)),
        Err(e) => classify(e).map(Err),
    }
}

fn dpg_details(dpg: &DoublePrincipalGroup) -> Result<(Value, bool), Failure> {
    let v = vacancy(dpg);
    let ex = exact_sequence(dpg).map_err(input)?;
    let g = &dpg.gamma;
    let details = json!({
        "gamma_order": g.order(),
        "subgroup_orders": [dpg.g1.order(), dpg.g2.order()],
        "core_order": dpg.core.order(),
        "core": labels(g, dpg.core.members()),
        "quotients": [dpg.q1.order(), dpg.q2.order()],
        "vacant": v.vacant,
        "product_bijective": v.product_bijective,
        "product_fiber_size": v.fiber_sizes.first().copied().unwrap_or(0),
        "exact_sequence": {
            "kernel": labels(g, ex.kernel.members()),
            "image_order": ex.image_order,
            "exact": ex.exact,
        },
    });
    Ok((details, ex.exact))
}

fn trace_json(g: &FiniteGroup, node: &TraceNode) -> Value {
    json!({
        "path": node.path,
        "ambient": labels(g, &node.ambient),
        "members": node.members.iter().map(|m| labels(g, m)).collect::<Vec<_>>(),
        "verdict": node.verdict,
        "failures": node.failures,
        "children": node.children.iter().map(|c| trace_json(g, c)).collect::<Vec<_>>(),
    })
}

pub fn run_ntuple(cmd: &NtupleCmd, opts: &Options) -> CmdResult {
    let NtupleCmd::Verify { file, subgroups } = cmd;
    let (gamma, subs) = load_system(file, subgroups.as_deref(), opts)?;
    let w = verify_ntuple(&gamma, &subs).map_err(|e| match e {
        PrincipalError::InternalInconsistency(m) => Failure::Theory(m),
        e => input(e),
    })?;
    let witnesses: Vec<Value> = w
        .trace
        .walk()
        .into_iter()
        .filter(|n| !n.failures.is_empty())
        .map(|n| {
            json!({
                "level": subs.len() - n.path.len(),
                "path": n.path,
                "ambient": labels(&gamma, &n.ambient),
                "members": n.members.iter().map(|m| labels(&gamma, m)).collect::<Vec<_>>(),
                "failures": n.failures,
            })
        })
        .collect();
    let details = json!({
        "gamma_order": gamma.order(),
        "subgroup_orders": subs.iter().map(Subgroup::order).collect::<Vec<_>>(),
        "verdict": w.verdict,
        "pairs_checked": w.pairs_checked,
        "trace": trace_json(&gamma, &w.trace),
    });
    Ok(Outcome::verdict(w.verdict, details, witnesses).assert(
        "a passing verdict has no failing node",
        !w.verdict || w.trace.walk().iter().all(|n| n.failures.is_empty()),
    ))
}

pub fn run_dpg(cmd: &DpgCmd, opts: &Options) -> CmdResult {
    match cmd {
        DpgCmd::Verify { file, subgroups } => {
            let (gamma, subs) = load_system(file, subgroups.as_deref(), opts)?;
            let dpg = match double(&gamma, &subs)? {
                Ok(d) => d,
                Err(fail) => return Ok(fail),
            };
            let (details, exact) = dpg_details(&dpg)?;
            Ok(Outcome::pass(details).assert("ker(phi) = G0", exact))
        }
        DpgCmd::Dressing { file, subgroups } => {
            let (gamma, subs) = load_system(file, subgroups.as_deref(), opts)?;
            let dpg = match double(&gamma, &subs)? {
                Ok(d) => d,
                Err(fail) => return Ok(fail),
            };
            let d = match dressing(&dpg) {
                Ok(d) => d,
                Err(e) => return classify(e),
            };
            let (sd, hom) = semidirect_to_gamma(&dpg).map_err(input)?;
            let mut g_by: Vec<[usize; 3]> = d
                .g_on_gprime
                .iter()
                .map(|(&(g, h), &v)| [g, h, v])
                .collect();
            let mut gprime_by: Vec<[usize; 3]> = d
                .gprime_on_g
                .iter()
                .map(|(&(h, g), &v)| [h, g, v])
                .collect();
            g_by.sort_unstable();
            gprime_by.sort_unstable();
            let details = json!({
                "g_dressed_by_gprime": g_by,
                "gprime_dressed_by_g": gprime_by,
                "semidirect_order": sd.group.order(),
                "product_map_kernel_order": hom.kernel().order(),
                "product_map_surjective": hom.is_surjective(),
            });
            Ok(Outcome::pass(details)
                .assert("dressing laws", true)
                .assert(
                    "kernel of G' x| G -> gamma has the order of G0",
                    hom.kernel().order() == dpg.core.order(),
                )
                .assert("G' x| G -> gamma is onto", hom.is_surjective()))
        }
        DpgCmd::GammaFromActions { file } => {
            let spec: ActionPairSpec = read_json(file)?;
            let (rho, rho_prime) = spec.build(opts.max_order).map_err(input)?;
            let r = match gamma_from_actions(&rho, &rho_prime) {
                Ok(r) => r,
                Err(e) => return classify(e),
            };
            let free = r.action.is_free();
            let details = json!({
                "gamma_order": r.gamma.order(),
                "free": free,
                "kernel_order": r.kernel.order(),
                "semidirect_order": r.semidirect.group.order(),
                "generated_order": r.generated_order,
                "m": r.diagram.m,
                "m_prime": r.diagram.m_prime,
                "m0": r.diagram.m0,
                "to_m": r.diagram.to_m,
                "to_m_prime": r.diagram.to_m_prime,
                "m_to_m0": r.diagram.m_to_m0,
                "m_prime_to_m0": r.diagram.m_prime_to_m0,
                "dpg": {
                    "core_order": r.dpg.core.order(),
                    "quotients": [r.dpg.q1.order(), r.dpg.q2.order()],
                },
                "action": (0..r.gamma.order()).map(|g| r.action.permutation(g).to_vec()).collect::<Vec<_>>(),
                "note": r.note,
            });
            Ok(Outcome::pass(details)
                .assert("gamma acts freely", free)
                .assert(
                    "gamma equals the group generated by both actions",
                    r.generated_order == r.gamma.order(),
                ))
        }
    }
}
