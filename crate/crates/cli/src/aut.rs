use std::path::{Path, PathBuf};

use clap::Subcommand;
use serde_json::{json, Value};

use ntuple_core::aut::{enumerate_aut, term_records, verify_p54, AutError};
use ntuple_core::graded::{Field, GradedSignature};
use ntuple_core::io::parse_field;
use ntuple_core::principal::TraceNode;

use crate::report::{error_witness, input, CmdResult, Failure, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum AutCmd {
    /// Enumerate the automorphism group over a prime field.
    Enumerate {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        field: String,
        /// List every automorphism by its terms.
        #[arg(long)]
        elements: bool,
    },
    /// Check that the factor-fixing subgroups form an n-tuple principal group.
    VerifyP54 {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        field: String,
    },
}

fn load(sig: &Path, field: &str) -> Result<(GradedSignature, Field), Failure> {
    let s: GradedSignature = read_json(sig)?;
    let f = parse_field(field).map_err(input)?;
    if f == Field::Rational {
        return Err(input("enumeration needs a prime field"));
    }
    Ok((s, f))
}

fn classify(e: AutError) -> Failure {
    match e {
        AutError::NotClosed(m) => Failure::Theory(m),
        e => input(e),
    }
}

fn failing_nodes(node: &TraceNode) -> Vec<Value> {
    node.walk()
        .into_iter()
        .filter(|n| !n.failures.is_empty())
        .map(
            |n| json!({ "path": n.path, "ambient_order": n.ambient.len(), "failures": n.failures }),
        )
        .collect()
}

pub fn run(cmd: &AutCmd, opts: &Options) -> CmdResult {
    match cmd {
        AutCmd::Enumerate {
            sig,
            field,
            elements,
        } => {
            let (s, f) = load(sig, field)?;
            let aut = match enumerate_aut(&s, f, opts.max_candidates) {
                Ok(a) => a,
                Err(e @ AutError::EnumerationCapExceeded { .. }) => {
                    return Err(input(error_witness(&e)))
                }
                Err(e) => return Err(classify(e)),
            };
            let predicted = ntuple_core::aut::predicted_order(&s, f.characteristic());
            let gi: Vec<usize> = (0..s.families())
                .map(|i| aut.gi(i).map(|g| g.order()))
                .collect::<Result<_, _>>()
                .map_err(classify)?;
            let mut details = json!({
                "field": f,
                "families": s.families(),
                "candidates": aut.candidates(),
                "order": aut.order(),
                "predicted_order": predicted,
                "gi_orders": gi,
                "statomorphism_order": aut.statomorphisms().map_err(classify)?.order(),
            });
            if *elements {
                details["elements"] = json!(aut
                    .elements()
                    .iter()
                    .map(|a| term_records(a.map()))
                    .collect::<Vec<_>>());
            }
            Ok(Outcome::pass(details).assert(
                "order matches the closed-form count",
                aut.order() as u128 == predicted,
            ))
        }
        AutCmd::VerifyP54 { sig, field } => {
            let (s, f) = load(sig, field)?;
            let r = match verify_p54(&s, f, opts.max_candidates) {
                Ok(r) => r,
                Err(e @ AutError::EnumerationCapExceeded { .. }) => {
                    return Err(input(error_witness(&e)))
                }
                Err(e) => return Err(classify(e)),
            };
            let witnesses = failing_nodes(&r.trace);
            let details = serde_json::to_value(&r).map_err(input)?;
            Ok(Outcome::verdict(r.verdict, details, witnesses)
                .assert(
                    "order matches the closed-form count",
                    r.gamma_order as u128 == r.predicted_order,
                )
                .assert("every G^i is normal", r.all_gi_normal))
        }
    }
}
