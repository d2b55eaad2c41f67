//! JSON formats for groups, actions, groupoids, polynomial maps, and cocycles.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{AutError, NVectAutomorphism};
use crate::cocycle::{AutMaps, Cocycle, CocycleError, CoverNerve, Permutations};
use crate::graded::{Exponents, Field, GradedError, GradedSignature, PolyMap, Polynomial, Scalar};
use crate::group::{
    catalog, subgroup_closure, ActionSide, FiniteAction, FiniteGroup, GroupError, Subgroup,
};
use crate::groupoid::{
    gauge_groupoid, induced_gauge_action, FiniteGroupoid, GroupoidAction, GroupoidError,
};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

pub type Result<T> = std::result::Result<T, IoError>;

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

/// `"Q"`, `"Fp:3"`, `"F3"` or `"3"`.
pub fn parse_field(s: &str) -> Result<Field> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    let digits = t.trim_start_matches(|c: char| !c.is_ascii_digit());
    let p: u64 = digits
        .parse()
        .map_err(|_| invalid(format!("unknown field {s:?}")))?;
    Ok(Field::prime(p)?)
}

/// Checks a deserialized field (the prime must be a prime at most the cap).
pub fn check_field(field: Field) -> Result<Field> {
    match field {
        Field::Rational => Ok(field),
        Field::Prime(p) => Ok(Field::prime(p)?),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
        degree: usize,
    },
    Named {
        name: String,
    },
}

impl GroupSpec {
    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table {
                order,
                table,
                labels,
            } => {
                if table.len() != *order {
                    return Err(invalid(format!(
                        "table has {} rows, order is {order}",
                        table.len()
                    )));
                }
                let g = FiniteGroup::from_table(table)?;
                Ok(match labels {
                    Some(l) => g.with_labels(l.clone())?,
                    None => g,
                })
            }
            GroupSpec::Permutations {
                permutations,
                degree,
            } => Ok(FiniteGroup::from_permutations(permutations, *degree, max_order)?.0),
            GroupSpec::Named { name } => {
                let g = catalog::by_name(name)
                    .ok_or_else(|| invalid(format!("unknown group name {name:?}")))?;
                if g.order() > max_order {
                    return Err(GroupError::OrderCapExceeded { cap: max_order }.into());
                }
                Ok(g)
            }
        }
    }

    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupSpec::Table {
            order: g.order(),
            table: g.table_rows(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }
}

/// An element given by index or by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Index(usize),
    Label(String),
}

impl ElementRef {
    pub fn resolve(&self, g: &FiniteGroup) -> Result<usize> {
        match self {
            ElementRef::Index(i) => {
                g.check_index(*i)?;
                Ok(*i)
            }
            ElementRef::Label(s) => g
                .find_label(s)
                .or_else(|| s.parse().ok().filter(|&i| i < g.order()))
                .ok_or_else(|| invalid(format!("no element named {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubgroupSpec {
    Members { members: Vec<ElementRef> },
    Generators { generators: Vec<ElementRef> },
    List(Vec<ElementRef>),
}

impl SubgroupSpec {
    pub fn build(&self, g: &FiniteGroup) -> Result<Subgroup> {
        let resolve =
            |xs: &[ElementRef]| xs.iter().map(|x| x.resolve(g)).collect::<Result<Vec<_>>>();
        match self {
            SubgroupSpec::Members { members } | SubgroupSpec::List(members) => {
                Ok(Subgroup::from_members(g, resolve(members)?)?)
            }
            SubgroupSpec::Generators { generators } => {
                Ok(subgroup_closure(g, &resolve(generators)?)?)
            }
        }
    }
}

/// `"i,j,k"`: one subgroup per comma-separated item, generated by the
/// `+`-separated elements of the item.
pub fn parse_generator_list(g: &FiniteGroup, s: &str) -> Result<Vec<Subgroup>> {
    s.split(',')
        .map(|item| {
            let gens = item
                .split('+')
                .map(|x| ElementRef::Label(x.trim().to_string()).resolve(g))
                .collect::<Result<Vec<_>>>()?;
            Ok(subgroup_closure(g, &gens)?)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionSpec {
    pub group: GroupSpec,
    pub points: usize,
    pub act: Vec<Vec<usize>>,
    #[serde(default)]
    pub side: ActionSide,
}

impl ActionSpec {
    pub fn build(&self, max_order: usize) -> Result<FiniteAction> {
        let g = self.group.build(max_order)?;
        Ok(FiniteAction::new(
            &g,
            self.points,
            self.act.clone(),
            self.side,
        )?)
    }

    /// An action on an already built group (the `group` field is checked to agree).
    pub fn build_on(&self, group: &FiniteGroup, max_order: usize) -> Result<FiniteAction> {
        if &self.group.build(max_order)? != group {
            return Err(GroupError::ParentMismatch.into());
        }
        Ok(FiniteAction::new(
            group,
            self.points,
            self.act.clone(),
            self.side,
        )?)
    }
}

/// `{"gamma": <group>, "subgroups": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgroupSystemSpec {
    pub gamma: GroupSpec,
    pub subgroups: Vec<SubgroupSpec>,
}

impl SubgroupSystemSpec {
    pub fn build(&self, max_order: usize) -> Result<(FiniteGroup, Vec<Subgroup>)> {
        let g = self.gamma.build(max_order)?;
        let subs = self
            .subgroups
            .iter()
            .map(|s| s.build(&g))
            .collect::<Result<_>>()?;
        Ok((g, subs))
    }
}

/// `{"points": n, "rho": <action>, "rho_prime": <action>}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionPairSpec {
    #[serde(default)]
    pub points: Option<usize>,
    pub rho: ActionSpec,
    pub rho_prime: ActionSpec,
}

impl ActionPairSpec {
    pub fn build(&self, max_order: usize) -> Result<(FiniteAction, FiniteAction)> {
        let (a, b) = (self.rho.build(max_order)?, self.rho_prime.build(max_order)?);
        let n = self.points.unwrap_or(a.points());
        if a.points() != n || b.points() != n {
            return Err(invalid("both actions must move the same points"));
        }
        Ok((a, b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidSpec {
    pub objects: usize,
    pub arrows: usize,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub id: Vec<usize>,
    pub inv: Vec<usize>,
    pub mul: Vec<[usize; 3]>,
}

impl GroupoidSpec {
    pub fn build(&self) -> Result<FiniteGroupoid> {
        if self.src.len() != self.arrows {
            return Err(invalid(format!(
                "{} sources for {} arrows",
                self.src.len(),
                self.arrows
            )));
        }
        let mut mul = HashMap::new();
        for &[a, b, ab] in &self.mul {
            if mul.insert((a, b), ab).is_some_and(|old| old != ab) {
                return Err(invalid(format!("product of ({a}, {b}) given twice")));
            }
        }
        Ok(FiniteGroupoid::new(
            self.objects,
            self.src.clone(),
            self.tgt.clone(),
            self.id.clone(),
            self.inv.clone(),
            mul,
        )?)
    }

    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let mut mul = g.products();
        mul.sort_unstable();
        GroupoidSpec {
            objects: g.objects(),
            arrows: g.arrows(),
            src: g.src_map().to_vec(),
            tgt: g.tgt_map().to_vec(),
            id: g.unit_map().to_vec(),
            inv: g.inv_map().to_vec(),
            mul,
        }
    }
}

/// A group acting on a groupoid, given explicitly or induced on the gauge
/// groupoid of `principal` by `acting`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidActionSpec {
    Explicit {
        groupoid: GroupoidSpec,
        group: GroupSpec,
        act: Vec<Vec<usize>>,
    },
    Induced {
        principal: ActionSpec,
        acting: ActionSpec,
    },
}

impl GroupoidActionSpec {
    pub fn build(&self, max_order: usize) -> Result<GroupoidAction> {
        match self {
            GroupoidActionSpec::Explicit {
                groupoid,
                group,
                act,
            } => Ok(GroupoidAction::new(
                &groupoid.build()?,
                &group.build(max_order)?,
                act.clone(),
            )?),
            GroupoidActionSpec::Induced { principal, acting } => {
                let gauge = gauge_groupoid(&principal.build(max_order)?)?;
                Ok(induced_gauge_action(&gauge, &acting.build(max_order)?)?)
            }
        }
    }
}

/// An integer given as a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntText {
    Int(i64),
    Text(String),
}

impl IntText {
    fn value(&self) -> Result<BigInt> {
        match self {
            IntText::Int(n) => Ok(BigInt::from(*n)),
            IntText::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| invalid(format!("not an integer: {s:?}"))),
        }
    }
}

fn one() -> IntText {
    IntText::Text("1".into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub exponents: Exponents,
    pub num: IntText,
    #[serde(default = "one")]
    pub den: IntText,
}

impl MonomialSpec {
    fn scalar(&self, field: Field) -> Result<Scalar> {
        Ok(field.ratio(&self.num.value()?, &self.den.value()?)?)
    }
}

/// Parses `"a"` or `"a/b"` as a field element.
pub fn parse_scalar(field: Field, text: &str) -> Result<Scalar> {
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    let int = |t: &str| IntText::Text(t.into()).value();
    Ok(field.ratio(&int(num)?, &int(den)?)?)
}

fn ratio_text(s: &Scalar) -> (IntText, IntText) {
    let (n, d) = s.to_ratio();
    (IntText::Text(n.to_string()), IntText::Text(d.to_string()))
}

pub fn polynomial_from_spec(
    nvars: usize,
    field: Field,
    terms: &[MonomialSpec],
) -> Result<Polynomial> {
    let terms = terms
        .iter()
        .map(|t| Ok((t.exponents.clone(), t.scalar(field)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_terms(nvars, field, terms)?)
}

pub fn polynomial_to_spec(p: &Polynomial) -> Vec<MonomialSpec> {
    p.terms()
        .map(|(e, s)| {
            let (num, den) = ratio_text(s);
            MonomialSpec {
                exponents: e.clone(),
                num,
                den,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub target: usize,
    pub exponents: Exponents,
    pub num: IntText,
    #[serde(default = "one")]
    pub den: IntText,
}

pub fn map_from_terms(
    sig_in: &GradedSignature,
    sig_out: &GradedSignature,
    field: Field,
    terms: &[TermSpec],
) -> Result<PolyMap> {
    let terms = terms
        .iter()
        .map(|t| {
            Ok((
                t.target,
                t.exponents.clone(),
                field.ratio(&t.num.value()?, &t.den.value()?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMap::from_terms(sig_in, sig_out, field, terms)?)
}

pub fn map_terms(map: &PolyMap) -> Vec<TermSpec> {
    map.terms()
        .into_iter()
        .map(|(target, exponents, s)| {
            let (num, den) = ratio_text(&s);
            TermSpec {
                target,
                exponents,
                num,
                den,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMapSpec {
    pub sig_in: GradedSignature,
    pub sig_out: GradedSignature,
    pub field: Field,
    pub terms: Vec<TermSpec>,
}

impl PolyMapSpec {
    pub fn build(&self) -> Result<PolyMap> {
        map_from_terms(
            &self.sig_in,
            &self.sig_out,
            check_field(self.field)?,
            &self.terms,
        )
    }

    pub fn from_map(map: &PolyMap) -> Self {
        PolyMapSpec {
            sig_in: map.sig_in().clone(),
            sig_out: map.sig_out().clone(),
            field: map.field(),
            terms: map_terms(map),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairValue<E> {
    pub pair: [usize; 2],
    pub element: E,
}

/// `{"charts": n, "overlaps": [[i, j], ...], "triples": [[i, j, k], ...], "values": [...]}`.
///
/// Values on `(i, i)` default to the identity and values on `(j, i)` to the
/// inverse of `(i, j)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleSpec<E> {
    pub charts: usize,
    #[serde(default)]
    pub overlaps: Vec<[usize; 2]>,
    #[serde(default)]
    pub triples: Vec<[usize; 3]>,
    pub values: Vec<PairValue<E>>,
}

impl<E> CocycleSpec<E> {
    pub fn nerve(&self) -> Result<CoverNerve> {
        Ok(CoverNerve::new(
            self.charts,
            self.overlaps.iter().map(|&[i, j]| (i, j)),
            self.triples.iter().copied(),
        )?)
    }

    fn values_with<V>(
        &self,
        mut f: impl FnMut(&E) -> Result<V>,
    ) -> Result<BTreeMap<(usize, usize), V>> {
        let mut out = BTreeMap::new();
        for pv in &self.values {
            let [i, j] = pv.pair;
            if out.insert((i, j), f(&pv.element)?).is_some() {
                return Err(invalid(format!("value on ({i}, {j}) given twice")));
            }
        }
        Ok(out)
    }

    pub fn spec_from<V>(c: &Cocycle<V>, mut f: impl FnMut(&V) -> E) -> Self
    where
        V: Clone + PartialEq + std::fmt::Debug,
    {
        let nerve = c.nerve();
        CocycleSpec {
            charts: nerve.charts(),
            overlaps: nerve.pairs().map(|(i, j)| [i, j]).collect(),
            triples: nerve.triples().collect(),
            values: c
                .values()
                .iter()
                .filter(|((i, j), _)| i < j)
                .map(|(&(i, j), v)| PairValue {
                    pair: [i, j],
                    element: f(v),
                })
                .collect(),
        }
    }
}

impl CocycleSpec<ElementRef> {
    pub fn build(&self, group: &FiniteGroup) -> Result<Cocycle<usize>> {
        let values = self.values_with(|e| e.resolve(group))?;
        Ok(Cocycle::from_upper(&self.nerve()?, group, values)?)
    }
}

impl CocycleSpec<Vec<usize>> {
    pub fn build(&self, points: usize) -> Result<Cocycle<Vec<usize>>> {
        let values = self.values_with(|p| {
            crate::group::validate_permutation(p, points)?;
            Ok(p.clone())
        })?;
        Ok(Cocycle::from_upper(
            &self.nerve()?,
            &Permutations(points),
            values,
        )?)
    }
}

impl CocycleSpec<Vec<TermSpec>> {
    pub fn build(&self, sig: &GradedSignature, field: Field) -> Result<Cocycle<NVectAutomorphism>> {
        let values = self.values_with(|terms| {
            Ok(NVectAutomorphism::from_map(map_from_terms(
                sig, sig, field, terms,
            )?)?)
        })?;
        let group = AutMaps {
            sig: sig.clone(),
            field,
        };
        Ok(Cocycle::from_upper(&self.nerve()?, &group, values)?)
    }
}

/// A cocycle file: the value group is named by `group` (finite group
/// elements), `points` (permutations) or `sig` with `field` (automorphisms
/// given by their terms).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sig: Option<GradedSignature>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    #[serde(flatten)]
    pub cocycle: CocycleSpec<serde_json::Value>,
}

#[derive(Debug, Clone)]
pub enum AnyCocycle {
    Group(FiniteGroup, Cocycle<usize>),
    Permutations(usize, Cocycle<Vec<usize>>),
    Aut(GradedSignature, Field, Cocycle<NVectAutomorphism>),
}

impl CocycleFile {
    fn typed<E: serde::de::DeserializeOwned>(&self) -> Result<CocycleSpec<E>> {
        let values = self
            .cocycle
            .values
            .iter()
            .map(|pv| {
                Ok(PairValue {
                    pair: pv.pair,
                    element: serde_json::from_value(pv.element.clone())?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CocycleSpec {
            charts: self.cocycle.charts,
            overlaps: self.cocycle.overlaps.clone(),
            triples: self.cocycle.triples.clone(),
            values,
        })
    }

    pub fn build(&self, max_order: usize) -> Result<AnyCocycle> {
        match (&self.group, self.points, &self.sig) {
            (Some(g), None, None) => {
                let g = g.build(max_order)?;
                let c = self.typed::<ElementRef>()?.build(&g)?;
                Ok(AnyCocycle::Group(g, c))
            }
            (None, Some(n), None) => Ok(AnyCocycle::Permutations(
                n,
                self.typed::<Vec<usize>>()?.build(n)?,
            )),
            (None, None, Some(sig)) => {
                let field = check_field(
                    self.field
                        .ok_or_else(|| invalid("automorphism cocycles need a field"))?,
                )?;
                let c = self.typed::<Vec<TermSpec>>()?.build(sig, field)?;
                Ok(AnyCocycle::Aut(sig.clone(), field, c))
            }
            _ => Err(invalid(
                "exactly one of \"group\", \"points\" or \"sig\" names the value group",
            )),
        }
    }
}

pub fn aut_cocycle_spec(c: &Cocycle<NVectAutomorphism>) -> CocycleSpec<Vec<TermSpec>> {
    CocycleSpec::spec_from(c, |a| map_terms(a.map()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn fields_parse() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rational);
        assert_eq!(parse_field("Fp:3").unwrap(), Field::prime(3).unwrap());
        assert!(parse_field("Fp:4").is_err());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(parse_scalar(f3, "1/2").unwrap(), f3.int(2));
        assert_eq!(
            parse_scalar(Field::Rational, "-6/4").unwrap().to_string(),
            "-3/2"
        );
        assert!(parse_scalar(f3, "1/3").is_err());
        let f: Field = serde_json::from_str(r#"{"Fp":5}"#).unwrap();
        assert_eq!(f, Field::prime(5).unwrap());
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), r#""Q""#);
    }

    #[test]
    fn group_formats() {
        let t: GroupSpec =
            serde_json::from_str(r#"{"order": 2, "table": [[0, 1], [1, 0]]}"#).unwrap();
        assert_eq!(t.build(100).unwrap(), catalog::cyclic(2));
        let p: GroupSpec =
            serde_json::from_str(r#"{"permutations": [[1, 2, 0]], "degree": 3}"#).unwrap();
        assert_eq!(p.build(100).unwrap().order(), 3);
        let q: GroupSpec = serde_json::from_str(r#"{"name": "Q8"}"#).unwrap();
        let q8 = q.build(100).unwrap();
        let subs = parse_generator_list(&q8, "i,j,k").unwrap();
        assert!(subs.iter().all(|s| s.order() == 4));
        let round = GroupSpec::from_group(&q8).build(100).unwrap();
        assert_eq!(round, q8);
        assert_eq!(round.find_label("i"), q8.find_label("i"));
    }

    #[test]
    fn groupoid_round_trip() {
        let g = FiniteGroupoid::pair(3);
        let spec = GroupoidSpec::from_groupoid(&g);
        let json = serde_json::to_string(&spec).unwrap();
        let back: GroupoidSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), g);
    }

    #[test]
    fn polymap_round_trip() {
        let json = r#"{
            "sig_in": {"mode": "simple", "dims": [1, 1]},
            "sig_out": {"mode": "simple", "dims": [1, 1]},
            "field": "Q",
            "terms": [
                {"target": 0, "exponents": [1, 0], "num": "1"},
                {"target": 1, "exponents": [0, 1], "num": 1, "den": 1},
                {"target": 1, "exponents": [2, 0], "num": "-3", "den": "2"}
            ]
        }"#;
        let spec: PolyMapSpec = serde_json::from_str(json).unwrap();
        let map = spec.build().unwrap();
        let again = PolyMapSpec::from_map(&map).build().unwrap();
        assert_eq!(again, map);
    }

    #[test]
    fn cocycle_files() {
        let json = r#"{"group": {"name": "Z3"}, "charts": 3, "overlaps": [[0,1],[1,2],[0,2]], "triples": [[0,1,2]],
            "values": [{"pair": [0,1], "element": 1}, {"pair": [1,2], "element": 1}, {"pair": [0,2], "element": 2}]}"#;
        let file: CocycleFile = serde_json::from_str(json).unwrap();
        let AnyCocycle::Group(g, c) = file.build(100).unwrap() else {
            panic!()
        };
        assert_eq!(g.order(), 3);
        assert_eq!(c.get(2, 0), Some(&1));
        let perms = r#"{"points": 2, "charts": 2, "overlaps": [[0,1]], "values": [{"pair": [0,1], "element": [1,0]}]}"#;
        let file: CocycleFile = serde_json::from_str(perms).unwrap();
        assert!(matches!(
            file.build(100).unwrap(),
            AnyCocycle::Permutations(2, _)
        ));
        let both = r#"{"points": 2, "group": {"name": "Z2"}, "charts": 1, "values": []}"#;
        let file: CocycleFile = serde_json::from_str(both).unwrap();
        assert!(file.build(100).is_err());
    }
}
