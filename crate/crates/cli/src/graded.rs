use std::path::PathBuf;

use clap::Subcommand;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use ntuple_core::graded::{
    check_compatible_structures, dilation, dilations, is_graded_morphism, is_homogeneous, random,
    weight_components, Field, GradedError, GradedSignature, HomogeneityStructure, PolyMap,
};
use ntuple_core::io::{
    check_field, polynomial_from_spec, polynomial_to_spec, IoError, MonomialSpec, PolyMapSpec,
};

use crate::report::{input, CmdResult, Failure, Outcome};
use crate::{read_json, Options};

#[derive(Debug, Subcommand)]
pub enum GradedCmd {
    /// Whether a polynomial map intertwines the dilations of its signatures.
    CheckMorphism {
        file: PathBuf,
        /// Random points and scalars for the sampled cross-check.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
    /// Pairwise commutation of homogeneity structures and their weight vector fields.
    CheckCompat { file: PathBuf },
    /// Split a polynomial by total weight.
    Weights {
        file: PathBuf,
        /// Require homogeneity of this weight.
        #[arg(long)]
        weight: Option<u32>,
    },
}

fn graded(e: GradedError) -> Failure {
    match e {
        GradedError::InternalDisagreement(m) => Failure::Theory(m),
        e => input(e),
    }
}

fn io(e: IoError) -> Failure {
    match e {
        IoError::Graded(g) => graded(g),
        e => input(e),
    }
}

/// Terms whose multi-degree differs from that of their target coordinate.
fn off_degree_terms(phi: &PolyMap) -> Vec<Value> {
    let (sin, out) = (phi.sig_in(), phi.sig_out().degrees());
    phi.terms()
        .into_iter()
        .filter(|(t, e, _)| sin.monomial_degree(e) != out[*t])
        .map(|(t, e, c)| {
            json!({
                "target": t,
                "exponents": e,
                "coefficient": c.to_string(),
                "monomial_degree": sin.monomial_degree(&e),
                "target_degree": out[t],
            })
        })
        .collect()
}

/// Random points and scalars where `phi(h_t x) != h_t phi(x)` for some family.
fn sampled_counterexamples(
    phi: &PolyMap,
    samples: usize,
    seed: u64,
) -> Result<Vec<Value>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (sin, sout, field) = (phi.sig_in(), phi.sig_out(), phi.field());
    let (h_in, h_out) = (dilations(sin, field), dilations(sout, field));
    let mut out = Vec::new();
    for _ in 0..samples {
        let t = random::scalar(field, &mut rng, true);
        let x: Vec<_> = (0..sin.coords())
            .map(|_| random::scalar(field, &mut rng, false))
            .collect();
        for (family, (a, b)) in h_in.iter().zip(&h_out).enumerate() {
            let lhs = phi.eval(&a.at(sin, &t).map_err(graded)?.eval(&x));
            let rhs = b.at(sout, &t).map_err(graded)?.eval(&phi.eval(&x));
            if lhs != rhs {
                out.push(json!({
                    "family": family,
                    "t": t.to_string(),
                    "point": x.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            }
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StructureSpec {
    Dilation {
        sig: GradedSignature,
        family: usize,
        #[serde(default)]
        conjugate_by: Option<PolyMapSpec>,
    },
    Explicit {
        nvars: usize,
        components: Vec<Vec<MonomialSpec>>,
    },
}

#[derive(Deserialize)]
struct CompatFile {
    field: Field,
    structures: Vec<StructureSpec>,
}

impl StructureSpec {
    fn build(&self, field: Field) -> Result<HomogeneityStructure, Failure> {
        match self {
            StructureSpec::Dilation {
                sig,
                family,
                conjugate_by,
            } => {
                let h = dilation(sig, *family, field).map_err(graded)?;
                match conjugate_by {
                    Some(spec) => {
                        let phi = spec.build().map_err(io)?;
                        h.conjugate(&phi).map_err(graded)
                    }
                    None => Ok(h),
                }
            }
            StructureSpec::Explicit { nvars, components } => {
                let comps = components
                    .iter()
                    .map(|c| polynomial_from_spec(nvars + 1, field, c))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(io)?;
                HomogeneityStructure::new(*nvars, field, comps).map_err(graded)
            }
        }
    }
}

#[derive(Deserialize)]
struct WeightsFile {
    sig: GradedSignature,
    field: Field,
    polynomial: Vec<MonomialSpec>,
}

pub fn run(cmd: &GradedCmd, opts: &Options) -> CmdResult {
    match cmd {
        GradedCmd::CheckMorphism { file, samples } => {
            let spec: PolyMapSpec = read_json(file)?;
            let phi = spec.build().map_err(io)?;
            let formal = is_graded_morphism(&phi).map_err(graded)?;
            let sampled = sampled_counterexamples(&phi, *samples, opts.seed)?;
            let mut witnesses = off_degree_terms(&phi);
            witnesses.extend(
                sampled
                    .iter()
                    .cloned()
                    .map(|s| json!({ "sampled_counterexample": s })),
            );
            let details = json!({
                "graded": formal,
                "weight_preserving": phi.is_weight_preserving(),
                "families": phi.sig_in().families(),
                "samples": samples,
                "sampled_counterexamples": sampled.len(),
            });
            Ok(Outcome::verdict(formal, details, witnesses).assert(
                "graded maps pass every sampled dilation",
                !formal || sampled.is_empty(),
            ))
        }
        GradedCmd::CheckCompat { file } => {
            let spec: CompatFile = read_json(file)?;
            let field = check_field(spec.field).map_err(input)?;
            let hs = spec
                .structures
                .iter()
                .map(|s| s.build(field))
                .collect::<Result<Vec<_>, _>>()?;
            let v = check_compatible_structures(&hs).map_err(graded)?;
            let witnesses: Vec<Value> = v
                .pairs
                .iter()
                .filter(|p| !p.commute)
                .map(|p| serde_json::to_value(p).expect("pairs serialize"))
                .collect();
            let agree = v.compatible == v.brackets_vanish;
            let details = json!({
                "compatible": v.compatible,
                "brackets_vanish": v.brackets_vanish,
                "pairs": v.pairs,
            });
            let mut o = Outcome::verdict(v.compatible, details, witnesses);
            if field == Field::Rational {
                o = o.assert(
                    "commuting structures have commuting weight vector fields",
                    agree,
                );
            }
            Ok(o)
        }
        GradedCmd::Weights { file, weight } => {
            let spec: WeightsFile = read_json(file)?;
            let field = check_field(spec.field).map_err(input)?;
            spec.sig.validate(&Default::default()).map_err(graded)?;
            let f = polynomial_from_spec(spec.sig.coords(), field, &spec.polynomial).map_err(io)?;
            let parts = weight_components(&f, &spec.sig);
            let components: Vec<Value> = parts
                .iter()
                .map(|(w, p)| json!({ "weight": w, "terms": polynomial_to_spec(p) }))
                .collect();
            let mut details = json!({ "components": components });
            match weight {
                None => Ok(Outcome::pass(details)),
                Some(w) => {
                    let homogeneous = is_homogeneous(&f, &spec.sig, *w);
                    details["homogeneous"] = json!(homogeneous);
                    let witnesses = parts
                        .iter()
                        .filter(|(k, _)| *k != w)
                        .map(|(k, p)| json!({ "weight": k, "terms": polynomial_to_spec(p) }))
                        .collect();
                    Ok(Outcome::verdict(homogeneous, details, witnesses))
                }
            }
        }
    }
}
