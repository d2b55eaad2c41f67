use std::path::PathBuf;

use clap::Subcommand;
use serde::Deserialize;
use serde_json::{json, Value};

use ntuple_core::aut::{enumerate_aut, AutGroup};
use ntuple_core::cocycle::{
    are_cohomologous, associated_cocycle, associated_vector_cocycle, check_cocycle, frame_cocycle,
    is_vector_bundle_transition, standard_fibered_space, t2_transition, AssociatedBundle, AutMaps,
    Cocycle, CocycleError, FiberedSpace, Permutations,
};
use ntuple_core::graded::{is_graded_morphism, Field, GradedError, GradedSignature};
use ntuple_core::group::{FiniteGroup, GroupHom};
use ntuple_core::io::{
    aut_cocycle_spec, check_field, polynomial_from_spec, ActionSpec, AnyCocycle, CocycleFile,
    CocycleSpec, IoError, MonomialSpec, PolyMapSpec,
};

use crate::report::{error_witness, input, CmdResult, Failure, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum CocycleCmd {
    /// Check the cocycle laws.
    Check { file: PathBuf },
    /// Associated bundle: fiber transitions and their quotients.
    Associate { file: PathBuf },
    /// Frame bundle cocycle of an automorphism-valued cocycle, and back.
    Frame { file: PathBuf },
    /// Search for a chartwise conjugation relating two cocycles.
    Cohomologous { first: PathBuf, second: PathBuf },
    /// Second-order tangent transition of a polynomial chart change.
    T2 { file: PathBuf },
}

fn classify(e: CocycleError) -> CmdResult {
    match e {
        CocycleError::Graded(GradedError::InternalDisagreement(m)) => Err(Failure::Theory(m)),
        CocycleError::InvalidCocycle(_)
        | CocycleError::NotInGroup { .. }
        | CocycleError::ActionIncompatibleWithFibration(_)
        | CocycleError::NotInvertibleChart(_) => {
            let w = match &e {
                CocycleError::InvalidCocycle(v) => {
                    json!({ "kind": "InvalidCocycle", "violation": v })
                }
                _ => error_witness(&e),
            };
            Ok(Outcome::fail(json!({}), vec![w]))
        }
        e => Err(input(e)),
    }
}

fn io(e: IoError) -> Result<Failure, Outcome> {
    match e {
        IoError::Cocycle(c) => match classify(c) {
            Ok(o) => Err(o),
            Err(f) => Ok(f),
        },
        e => Ok(input(e)),
    }
}

macro_rules! or_verdict {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(e) => return classify(e.into()),
        }
    };
}

macro_rules! load {
    ($e:expr) => {
        match $e {
            Ok(x) => x,
            Err(e) => {
                return match io(e) {
                    Ok(f) => Err(f),
                    Err(o) => Ok(o),
                }
            }
        }
    };
}

fn perm_spec(c: &Cocycle<Vec<usize>>) -> CocycleSpec<Vec<usize>> {
    CocycleSpec::spec_from(c, Clone::clone)
}

fn enumerate(sig: &GradedSignature, field: Field, opts: &Options) -> Result<AutGroup, Failure> {
    enumerate_aut(sig, field, opts.max_candidates).map_err(input)
}

fn bundle_details(b: &AssociatedBundle) -> Value {
    json!({
        "structure": CocycleSpec::spec_from(&b.structure, |&g| g),
        "fiber": perm_spec(&b.fiber),
        "rho_quotient": perm_spec(&b.rho_quotient),
        "rho_prime_quotient": perm_spec(&b.rho_prime_quotient),
        "base": perm_spec(&b.base),
        "corners_commute": b.corners_commute,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AssociateFile {
    General {
        cocycle: CocycleFile,
        fiber: ActionSpec,
        rho: Vec<usize>,
        rho_prime: Vec<usize>,
        #[serde(default)]
        tau: Option<Vec<usize>>,
    },
    Aut(CocycleFile),
}

#[derive(Deserialize)]
struct T2File {
    field: Field,
    chart: Vec<Vec<MonomialSpec>>,
}

/// Group-valued form of a cocycle; automorphism values are read in the
/// enumerated group.
fn indexed(
    c: AnyCocycle,
    opts: &Options,
) -> Result<(FiniteGroup, Cocycle<usize>, Option<AutGroup>), Result<Failure, Outcome>> {
    match c {
        AnyCocycle::Group(g, c) => Ok((g, c, None)),
        AnyCocycle::Aut(sig, field, c) => {
            let aut = enumerate(&sig, field, opts).map_err(Ok)?;
            let idx = frame_cocycle(&c, &aut).map_err(|e| io(e.into()))?;
            Ok((aut.group().clone(), idx, Some(aut)))
        }
        AnyCocycle::Permutations(..) => Err(Ok(input("expected group or automorphism values"))),
    }
}

pub fn run(cmd: &CocycleCmd, opts: &Options) -> CmdResult {
    match cmd {
        CocycleCmd::Check { file } => {
            let spec: CocycleFile = read_json(file)?;
            let c = load!(spec.build(opts.max_order));
            let (check, kind) = match &c {
                AnyCocycle::Group(g, c) => (check_cocycle(c, g), "group"),
                AnyCocycle::Permutations(n, c) => {
                    (check_cocycle(c, &Permutations(*n)), "permutations")
                }
                AnyCocycle::Aut(sig, field, c) => (
                    check_cocycle(
                        c,
                        &AutMaps {
                            sig: sig.clone(),
                            field: *field,
                        },
                    ),
                    "automorphisms",
                ),
            };
            let witnesses = check
                .witness
                .iter()
                .map(|v| json!({ "violation": v }))
                .collect();
            Ok(Outcome::verdict(
                check.valid,
                json!({ "values": kind, "valid": check.valid }),
                witnesses,
            ))
        }
        CocycleCmd::Associate { file } => {
            let spec: AssociateFile = read_json(file)?;
            let bundle = match spec {
                AssociateFile::General {
                    cocycle,
                    fiber,
                    rho,
                    rho_prime,
                    tau,
                } => {
                    let AnyCocycle::Group(gamma, c) = load!(cocycle.build(opts.max_order)) else {
                        return Err(input(
                            "the principal cocycle takes values in a finite group",
                        ));
                    };
                    let action = fiber.build(opts.max_order).map_err(input)?;
                    let fibered = or_verdict!(FiberedSpace::new(action, &rho, &rho_prime));
                    let hom = match tau {
                        Some(map) => Some(
                            GroupHom::new(&gamma, fibered.action().group(), map).map_err(input)?,
                        ),
                        None => None,
                    };
                    or_verdict!(associated_cocycle(&c, &gamma, &fibered, hom.as_ref()))
                }
                AssociateFile::Aut(file) => {
                    let c = load!(file.build(opts.max_order));
                    let (gamma, idx, aut) = match indexed(c, opts) {
                        Ok(x) => x,
                        Err(Ok(f)) => return Err(f),
                        Err(Err(o)) => return Ok(o),
                    };
                    let Some(aut) = aut else {
                        return Err(input("group-valued cocycles need a fiber action (\"cocycle\", \"fiber\", \"rho\", \"rho_prime\")"));
                    };
                    let fibered = or_verdict!(standard_fibered_space(&aut));
                    or_verdict!(associated_cocycle(&idx, &gamma, &fibered, None))
                }
            };
            let commute = bundle.corners_commute;
            Ok(Outcome::pass(bundle_details(&bundle))
                .assert("both quotient routes reach the same base", commute))
        }
        CocycleCmd::Frame { file } => {
            let spec: CocycleFile = read_json(file)?;
            let AnyCocycle::Aut(sig, field, c) = load!(spec.build(opts.max_order)) else {
                return Err(input(
                    "frame needs automorphism values (\"sig\" and \"field\")",
                ));
            };
            let aut = enumerate(&sig, field, opts)?;
            let frame = or_verdict!(frame_cocycle(&c, &aut));
            let back = or_verdict!(associated_vector_cocycle(&frame, &aut));
            Ok(Outcome::pass(json!({
                "group_order": aut.order(),
                "frame": CocycleSpec::spec_from(&frame, |&g| g),
                "vector_bundle": aut_cocycle_spec(&back),
            }))
            .assert(
                "associated cocycle of the frame cocycle is the input",
                back == c,
            ))
        }
        CocycleCmd::Cohomologous { first, second } => {
            let a: CocycleFile = read_json(first)?;
            let b: CocycleFile = read_json(second)?;
            let (a, b) = (
                load!(a.build(opts.max_order)),
                load!(b.build(opts.max_order)),
            );
            let same_space = match (&a, &b) {
                (AnyCocycle::Group(g, _), AnyCocycle::Group(h, _)) => g == h,
                (AnyCocycle::Aut(s, f, _), AnyCocycle::Aut(t, k, _)) => s == t && f == k,
                _ => false,
            };
            if !same_space {
                return Err(input("both cocycles must take values in the same group"));
            }
            let ((gamma, c1, aut), (_, c2, _)) = match (indexed(a, opts), indexed(b, opts)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(Ok(f)), _) | (_, Err(Ok(f))) => return Err(f),
                (Err(Err(o)), _) | (_, Err(Err(o))) => return Ok(o),
            };
            let r = match are_cohomologous(&c1, &c2, &gamma, opts.max_candidates) {
                Ok(r) => r,
                Err(e @ CocycleError::SearchCapExceeded { .. }) => return Err(input(e)),
                Err(e) => return classify(e),
            };
            let lambda: Option<Value> = r.witness.as_ref().map(|l| match &aut {
                Some(aut) => json!(l
                    .iter()
                    .map(|&g| ntuple_core::io::map_terms(aut.element(g).map()))
                    .collect::<Vec<_>>()),
                None => json!(l.iter().map(|&g| gamma.label(g)).collect::<Vec<_>>()),
            });
            let details =
                json!({ "cohomologous": r.cohomologous, "lambda": lambda, "explored": r.explored });
            let witnesses = if r.cohomologous {
                Vec::new()
            } else {
                vec![
                    json!({ "kind": "exhaustive search", "explored": r.explored, "group_order": gamma.order() }),
                ]
            };
            Ok(Outcome::verdict(r.cohomologous, details, witnesses))
        }
        CocycleCmd::T2 { file } => {
            let spec: T2File = read_json(file)?;
            let field = check_field(spec.field).map_err(input)?;
            let m = spec.chart.len();
            let chart = spec
                .chart
                .iter()
                .map(|c| polynomial_from_spec(m, field, c))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input)?;
            let t = or_verdict!(t2_transition(&chart, field));
            let graded = or_verdict!(is_graded_morphism(&t).map_err(CocycleError::from));
            Ok(Outcome::pass(json!({
                "transition": PolyMapSpec::from_map(&t),
                "graded": graded,
                "vector_bundle_transition": is_vector_bundle_transition(&t),
            }))
            .assert("the transition is graded", graded))
        }
    }
}
