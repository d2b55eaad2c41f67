use std::path::PathBuf;

use clap::Subcommand;
use serde::Deserialize;
use serde_json::json;

use ntuple_core::group::{action_check, GroupError};
use ntuple_core::io::{ActionSpec, GroupSpec, IoError};

use crate::report::{error_witness, input, CmdResult, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Check the group axioms of a table, permutation set, or action file.
    Validate { file: PathBuf },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupOrAction {
    Action(ActionSpec),
    Group(GroupSpec),
}

/// Axiom failures are verdicts; shape errors are input errors.
fn axiom_failure(e: &GroupError) -> bool {
    matches!(
        e,
        GroupError::NoIdentity
            | GroupError::NoInverse { .. }
            | GroupError::NotLatinSquare { .. }
            | GroupError::NonAssociative { .. }
            | GroupError::NotAnAction { .. }
    )
}

pub fn run(cmd: &GroupCmd, opts: &Options) -> CmdResult {
    let GroupCmd::Validate { file } = cmd;
    let spec: GroupOrAction = read_json(file)?;
    let built = match &spec {
        GroupOrAction::Group(g) => g.build(opts.max_order).map(|g| (g, None)),
        GroupOrAction::Action(a) => a
            .build(opts.max_order)
            .map(|a| (a.group().clone(), Some(a))),
    };
    let (group, action) = match built {
        Ok(x) => x,
        Err(IoError::Group(e)) if axiom_failure(&e) => {
            return Ok(Outcome::fail(
                json!({ "valid": false }),
                vec![error_witness(&e)],
            ));
        }
        Err(e) => return Err(input(e)),
    };
    let summary = group.summary();
    let mut details = json!({
        "valid": true,
        "order": summary.order,
        "identity": group.identity(),
        "abelian": summary.abelian,
        "center_order": summary.center_order,
        "element_orders": summary.element_orders,
    });
    if let Some(a) = action {
        let r = action_check(&a);
        details["action"] = json!({
            "points": a.points(),
            "side": a.side(),
            "free": r.is_free,
            "kernel": r.kernel.members(),
            "orbits": r.orbits,
            "fixed_point": r.fixed_point.map(|(g, x)| json!({ "element": g, "point": x })),
        });
    }
    Ok(Outcome::pass(details))
}
