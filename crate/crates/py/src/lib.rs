//! Python bindings for `ntuple-core`.
//!
//! Groups, polynomial maps and automorphism groups are wrapped as classes.
//! Structured results come back as plain dicts; inputs that have a JSON
//! format in `ntuple_core::io` are accepted as JSON text.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use ntuple_core::aut::{self, enumerate_aut, term_records, DEFAULT_MAX_CANDIDATES};
use ntuple_core::cocycle::{are_cohomologous, check_cocycle, frame_cocycle, AutMaps, Permutations};
use ntuple_core::graded::{is_graded_morphism, GradedSignature};
use ntuple_core::group::{self as grp, catalog, subgroup_closure, DEFAULT_MAX_ORDER};
use ntuple_core::io::{self, parse_field, parse_scalar, AnyCocycle, GroupSpec, PolyMapSpec};
use ntuple_core::principal::{self, exact_sequence, vacancy};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(err)
}

/// An element given by index or by label.
#[derive(FromPyObject)]
enum Element {
    Index(usize),
    Label(String),
}

impl Element {
    fn resolve(&self, g: &grp::FiniteGroup) -> PyResult<usize> {
        match self {
            Element::Index(i) => g.check_index(*i).map(|_| *i).map_err(err),
            Element::Label(s) => g
                .find_label(s)
                .ok_or_else(|| err(format!("no element named {s:?}"))),
        }
    }
}

/// A finite group stored as a multiplication table.
#[pyclass(frozen, skip_from_py_object, name = "Group", module = "ntuple")]
#[derive(Clone)]
struct Group(grp::FiniteGroup);

#[pymethods]
impl Group {
    /// Catalog groups: `"Q8"`, `"V4"`, `"C6"`, `"D4"`, `"S3"`, `"A4"`, ...
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        catalog::by_name(name)
            .map(Group)
            .ok_or_else(|| err(format!("unknown group {name:?}")))
    }

    #[staticmethod]
    #[pyo3(signature = (table, labels=None))]
    fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let g = grp::FiniteGroup::from_table(&table).map_err(err)?;
        match labels {
            Some(l) => g.with_labels(l).map(Group).map_err(err),
            None => Ok(Group(g)),
        }
    }

    /// Closure of the given permutations of `0..degree`.
    #[staticmethod]
    #[pyo3(signature = (permutations, degree, max_order=DEFAULT_MAX_ORDER))]
    fn from_permutations(
        permutations: Vec<Vec<usize>>,
        degree: usize,
        max_order: usize,
    ) -> PyResult<Self> {
        let spec = GroupSpec::Permutations {
            permutations,
            degree,
        };
        spec.build(max_order).map(Group).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json::<GroupSpec>(text)?
            .build(DEFAULT_MAX_ORDER)
            .map(Group)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&GroupSpec::from_group(&self.0)).expect("groups serialize")
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn mul(&self, a: Element, b: Element) -> PyResult<usize> {
        Ok(self.0.mul(a.resolve(&self.0)?, b.resolve(&self.0)?))
    }

    fn inv(&self, a: Element) -> PyResult<usize> {
        Ok(self.0.inv(a.resolve(&self.0)?))
    }

    fn element_order(&self, a: Element) -> PyResult<usize> {
        Ok(self.0.element_order(a.resolve(&self.0)?))
    }

    fn label(&self, a: usize) -> PyResult<String> {
        self.0.check_index(a).map_err(err)?;
        Ok(self.0.label(a))
    }

    fn index(&self, label: &str) -> PyResult<usize> {
        Element::Label(label.into()).resolve(&self.0)
    }

    fn is_abelian(&self) -> bool {
        self.0.is_abelian()
    }

    fn center(&self) -> Vec<usize> {
        self.0.center()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.0.table_rows()
    }

    /// Members of the subgroup generated by `generators`.
    fn subgroup(&self, generators: Vec<Element>) -> PyResult<Vec<usize>> {
        let gens = generators
            .iter()
            .map(|g| g.resolve(&self.0))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(subgroup_closure(&self.0, &gens)
            .map_err(err)?
            .members()
            .to_vec())
    }

    fn __len__(&self) -> usize {
        self.0.order()
    }

    fn __eq__(&self, other: &Group) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Group(order={})", self.0.order())
    }
}

fn subgroups(g: &Group, gens: &[Vec<Element>]) -> PyResult<Vec<grp::Subgroup>> {
    gens.iter()
        .map(|s| {
            let idx = s
                .iter()
                .map(|x| x.resolve(&g.0))
                .collect::<PyResult<Vec<_>>>()?;
            subgroup_closure(&g.0, &idx).map_err(err)
        })
        .collect()
}

/// Checks that the subgroups generated by `g1` and `g2` make `gamma` a double
/// principal group; returns the core, quotients, vacancy and exactness.
#[pyfunction]
fn verify_double<'py>(
    py: Python<'py>,
    gamma: &Group,
    g1: Vec<Element>,
    g2: Vec<Element>,
) -> PyResult<Bound<'py, PyAny>> {
    let subs = subgroups(gamma, &[g1, g2])?;
    let dpg = principal::verify_double(&gamma.0, &subs[0], &subs[1]).map_err(err)?;
    let v = vacancy(&dpg);
    let ex = exact_sequence(&dpg).map_err(err)?;
    to_py(
        py,
        &json!({
            "gamma_order": dpg.gamma.order(),
            "subgroup_orders": [dpg.g1.order(), dpg.g2.order()],
            "core": dpg.core.members(),
            "quotient_orders": [dpg.q1.order(), dpg.q2.order()],
            "vacant": v.vacant,
            "product_bijective": v.product_bijective,
            "exact": ex.exact,
        }),
    )
}

/// Recursive n-tuple check; each subgroup is given by generators.
#[pyfunction]
fn verify_ntuple<'py>(
    py: Python<'py>,
    gamma: &Group,
    generators: Vec<Vec<Element>>,
) -> PyResult<Bound<'py, PyAny>> {
    let subs = subgroups(gamma, &generators)?;
    let w = principal::verify_ntuple(&gamma.0, &subs).map_err(err)?;
    to_py(
        py,
        &json!({ "verdict": w.verdict, "trace": w.trace, "pairs_checked": w.pairs_checked }),
    )
}

/// Structure group of two compatible free actions, given as an action-pair JSON document.
#[pyfunction]
fn gamma_from_actions<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let (rho, rho_prime) = from_json::<io::ActionPairSpec>(text)?
        .build(DEFAULT_MAX_ORDER)
        .map_err(err)?;
    let r = principal::gamma_from_actions(&rho, &rho_prime).map_err(err)?;
    to_py(
        py,
        &json!({
            "gamma": serde_json::to_value(GroupSpec::from_group(&r.gamma)).expect("groups serialize"),
            "gamma_order": r.gamma.order(),
            "kernel_order": r.kernel.order(),
            "generated_order": r.generated_order,
            "m": r.diagram.m,
            "m_prime": r.diagram.m_prime,
            "m0": r.diagram.m0,
        }),
    )
}

/// A polynomial map between graded coordinate spaces.
#[pyclass(frozen, skip_from_py_object, name = "PolyMap", module = "ntuple")]
#[derive(Clone)]
struct PolyMap(ntuple_core::graded::PolyMap);

#[pymethods]
impl PolyMap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json::<PolyMapSpec>(text)?
            .build()
            .map(PolyMap)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&PolyMapSpec::from_map(&self.0)).expect("maps serialize")
    }

    fn is_graded(&self) -> PyResult<bool> {
        is_graded_morphism(&self.0).map_err(err)
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// `self ∘ inner`.
    fn compose(&self, inner: &PolyMap) -> PyResult<PolyMap> {
        self.0.compose(&inner.0).map(PolyMap).map_err(err)
    }

    fn invert(&self) -> PyResult<PolyMap> {
        self.0.invert().map(PolyMap).map_err(err)
    }

    /// Evaluates at a point given as integers or `"a/b"` strings.
    fn eval(&self, point: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<String>> {
        let field = self.0.field();
        let x = point
            .iter()
            .map(|p| parse_scalar(field, &p.str()?.to_string()).map_err(err))
            .collect::<PyResult<Vec<_>>>()?;
        if x.len() != self.0.sig_in().coords() {
            return Err(err(format!(
                "expected {} coordinates",
                self.0.sig_in().coords()
            )));
        }
        Ok(self.0.eval(&x).iter().map(ToString::to_string).collect())
    }

    fn __eq__(&self, other: &PolyMap) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("PolyMap({} terms)", self.0.terms().len())
    }
}

/// The automorphism group of an n-tuple graded vector space over a prime field.
#[pyclass(frozen, name = "AutGroup", module = "ntuple")]
struct AutGroup(aut::AutGroup);

#[pymethods]
impl AutGroup {
    /// `signature` is signature JSON; `field` is `"Fp:3"`, `"F2"`, ...
    #[new]
    #[pyo3(signature = (signature, field, max_candidates=DEFAULT_MAX_CANDIDATES))]
    fn new(signature: &str, field: &str, max_candidates: u128) -> PyResult<Self> {
        let sig: GradedSignature = from_json(signature)?;
        let f = parse_field(field).map_err(err)?;
        enumerate_aut(&sig, f, max_candidates)
            .map(AutGroup)
            .map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn candidates(&self) -> u128 {
        self.0.candidates()
    }

    fn predicted_order(&self) -> u128 {
        aut::predicted_order(self.0.signature(), self.0.field().characteristic())
    }

    fn group(&self) -> Group {
        Group(self.0.group().clone())
    }

    fn element(&self, i: usize) -> PyResult<PolyMap> {
        if i >= self.0.order() {
            return Err(err(format!("index {i} out of range")));
        }
        Ok(PolyMap(self.0.element(i).map().clone()))
    }

    fn index_of(&self, map: &PolyMap) -> Option<usize> {
        self.0.index_of_map(&map.0)
    }

    /// Members of the subgroup fixing the factor `family`.
    fn gi(&self, family: usize) -> PyResult<Vec<usize>> {
        if family >= self.0.signature().families() {
            return Err(err(format!("no family {family}")));
        }
        Ok(self.0.gi(family).map_err(err)?.members().to_vec())
    }

    fn statomorphisms(&self) -> PyResult<Vec<usize>> {
        Ok(self.0.statomorphisms().map_err(err)?.members().to_vec())
    }

    fn terms<'py>(&self, py: Python<'py>, i: usize) -> PyResult<Bound<'py, PyAny>> {
        let map = self.element(i)?;
        to_py(
            py,
            &serde_json::to_value(term_records(&map.0)).expect("terms serialize"),
        )
    }

    fn __len__(&self) -> usize {
        self.0.order()
    }
}

/// Factor-fixing subgroups of the automorphism group and their n-tuple check.
#[pyfunction]
#[pyo3(signature = (signature, field, max_candidates=DEFAULT_MAX_CANDIDATES))]
fn verify_p54<'py>(
    py: Python<'py>,
    signature: &str,
    field: &str,
    max_candidates: u128,
) -> PyResult<Bound<'py, PyAny>> {
    let sig: GradedSignature = from_json(signature)?;
    let f = parse_field(field).map_err(err)?;
    let r = aut::verify_p54(&sig, f, max_candidates).map_err(err)?;
    to_py(py, &serde_json::to_value(&r).map_err(err)?)
}

fn cocycle(text: &str) -> PyResult<AnyCocycle> {
    from_json::<io::CocycleFile>(text)?
        .build(DEFAULT_MAX_ORDER)
        .map_err(err)
}

/// Checks the cocycle laws of a cocycle JSON document.
#[pyfunction]
fn check_cocycle_json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let check = match cocycle(text)? {
        AnyCocycle::Group(g, c) => check_cocycle(&c, &g),
        AnyCocycle::Permutations(n, c) => check_cocycle(&c, &Permutations(n)),
        AnyCocycle::Aut(sig, field, c) => check_cocycle(&c, &AutMaps { sig, field }),
    };
    to_py(py, &serde_json::to_value(check).map_err(err)?)
}

/// Searches for a chartwise conjugation between two group-valued or
/// automorphism-valued cocycles.
#[pyfunction]
#[pyo3(signature = (first, second, max_candidates=DEFAULT_MAX_CANDIDATES))]
fn cohomologous<'py>(
    py: Python<'py>,
    first: &str,
    second: &str,
    max_candidates: u128,
) -> PyResult<Bound<'py, PyAny>> {
    let indexed = |c: AnyCocycle| -> PyResult<_> {
        match c {
            AnyCocycle::Group(g, c) => Ok((g, c)),
            AnyCocycle::Aut(sig, field, c) => {
                let aut = enumerate_aut(&sig, field, max_candidates).map_err(err)?;
                let idx = frame_cocycle(&c, &aut).map_err(err)?;
                Ok((aut.group().clone(), idx))
            }
            AnyCocycle::Permutations(..) => Err(err("expected group or automorphism values")),
        }
    };
    let (g, a) = indexed(cocycle(first)?)?;
    let (h, b) = indexed(cocycle(second)?)?;
    if g != h {
        return Err(err("both cocycles must take values in the same group"));
    }
    let r = are_cohomologous(&a, &b, &g, max_candidates).map_err(err)?;
    to_py(py, &serde_json::to_value(r).map_err(err)?)
}

#[pymodule]
fn ntuple(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<PolyMap>()?;
    m.add_class::<AutGroup>()?;
    m.add_function(wrap_pyfunction!(verify_double, m)?)?;
    m.add_function(wrap_pyfunction!(verify_ntuple, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_from_actions, m)?)?;
    m.add_function(wrap_pyfunction!(verify_p54, m)?)?;
    m.add_function(wrap_pyfunction!(check_cocycle_json, m)?)?;
    m.add_function(wrap_pyfunction!(cohomologous, m)?)?;
    Ok(())
}
