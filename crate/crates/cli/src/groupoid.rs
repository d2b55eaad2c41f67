use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::json;

use ntuple_core::groupoid::{
    check_compatible, gauge_groupoid, multiplicative_function, quotient_groupoid, split,
    split_round_trip, GroupoidAction, GroupoidError,
};
use ntuple_core::io::{ActionSpec, GroupoidActionSpec, GroupoidSpec, IoError};

use crate::report::{error_witness, input, CmdResult, Failure, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum GroupoidCmd {
    /// Gauge groupoid of a free action.
    Gauge { file: PathBuf },
    /// Orbit groupoid of a compatible, pre-principal action on a groupoid.
    Quotient { file: PathBuf },
    /// Fiber-product presentation of a free action on a groupoid.
    Split { file: PathBuf },
    /// Multiplicative function of a trivialized action, and the rebuilt groupoid.
    MultFunction { file: PathBuf },
}

fn classify(e: GroupoidError) -> CmdResult {
    match e {
        GroupoidError::SplitFailure { .. } => Err(Failure::Theory(e.to_string())),
        GroupoidError::ActionNotFree { .. }
        | GroupoidError::NotWellDefined { .. }
        | GroupoidError::NotCompatible(_)
        | GroupoidError::NotFree { .. }
        | GroupoidError::NotTrivialized(_)
        | GroupoidError::NotMultiplicative { .. } => {
            Ok(Outcome::fail(json!({}), vec![error_witness(&e)]))
        }
        e => Err(input(e)),
    }
}

fn load_action(file: &Path, opts: &Options) -> Result<Result<GroupoidAction, Outcome>, Failure> {
    let spec: GroupoidActionSpec = read_json(file)?;
    match spec.build(opts.max_order) {
        Ok(ga) => Ok(Ok(ga)),
        Err(IoError::Groupoid(e)) => classify(e).map(Err),
        Err(e) => Err(input(e)),
    }
}

macro_rules! or_verdict {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(e) => return classify(e),
        }
    };
}

pub fn run(cmd: &GroupoidCmd, opts: &Options) -> CmdResult {
    match cmd {
        GroupoidCmd::Gauge { file } => {
            let spec: ActionSpec = read_json(file)?;
            let action = spec.build(opts.max_order).map_err(input)?;
            let g = or_verdict!(gauge_groupoid(&action));
            Ok(Outcome::pass(json!({
                "groupoid": GroupoidSpec::from_groupoid(&g.groupoid),
                "object_of": g.object_of,
                "representatives": g.representatives,
            })))
        }
        GroupoidCmd::Quotient { file } => {
            let ga = match load_action(file, opts)? {
                Ok(ga) => ga,
                Err(fail) => return Ok(fail),
            };
            let report = check_compatible(&ga);
            let q = or_verdict!(quotient_groupoid(&ga));
            Ok(Outcome::pass(json!({
                "compatible": report.compatible,
                "pre_principal": report.pre_principal,
                "kernel": q.kernel.members(),
                "quotient": GroupoidSpec::from_groupoid(&q.groupoid),
                "arrow_map": q.arrow_map,
                "object_map": q.object_map,
            })))
        }
        GroupoidCmd::Split { file } => {
            let ga = match load_action(file, opts)? {
                Ok(ga) => ga,
                Err(fail) => return Ok(fail),
            };
            let sp = or_verdict!(split(&ga));
            let gd = ga.groupoid();
            Ok(Outcome::pass(json!({
                "arrows": gd.arrows(),
                "fiber_pairs": sp.fiber_pairs,
                "s_map": sp.s_map,
                "t_action": sp.t_action,
                "base": GroupoidSpec::from_groupoid(sp.base()),
            }))
            .assert(
                "S is a bijection onto the fiber product",
                sp.fiber_pairs.len() == gd.arrows(),
            ))
        }
        GroupoidCmd::MultFunction { file } => {
            let ga = match load_action(file, opts)? {
                Ok(ga) => ga,
                Err(fail) => return Ok(fail),
            };
            let sp = or_verdict!(split(&ga));
            let f = or_verdict!(multiplicative_function(&sp, ga.group()));
            let rt = or_verdict!(split_round_trip(&ga));
            Ok(Outcome::pass(json!({
                "b": f.b,
                "section": f.section,
                "coordinates": f.coordinates,
                "base": GroupoidSpec::from_groupoid(sp.base()),
                "arrow_iso": rt.arrow_iso,
                "object_iso": rt.object_iso,
            }))
            .assert(
                "rebuilding from b recovers the same function",
                rt.function.b == f.b,
            ))
        }
    }
}
