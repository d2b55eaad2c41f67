use super::{CocycleError, Result};
use crate::graded::{
    invert_matrix, is_graded_morphism, Field, GradedError, GradedSignature, PolyMap, Polynomial,
};

/// Coordinates `(x, x', x'')` of weights 0, 1, 2 over `m` base coordinates.
pub fn t2_signature(m: usize) -> GradedSignature {
    GradedSignature::Simple {
        base: m,
        dims: vec![m, m],
    }
}

/// Transition of the second-order tangent bundle induced by a polynomial
/// chart change `x -> x'(x)`:
///
/// ```text
/// xdot'_a  = d_b x'_a xdot_b
/// xddot'_a = d_b x'_a xddot_b + d_b d_c x'_a xdot_b xdot_c
/// ```
pub fn t2_transition(chart: &[Polynomial], field: Field) -> Result<PolyMap> {
    let m = chart.len();
    if chart.iter().any(|c| c.nvars() != m || c.field() != field) {
        return Err(CocycleError::NotInvertibleChart(
            "chart change must map m coordinates to m coordinates".into(),
        ));
    }
    let origin = vec![field.zero(); m];
    let jacobian: Vec<Vec<_>> = chart
        .iter()
        .map(|c| (0..m).map(|b| c.derivative(b).eval(&origin)).collect())
        .collect();
    if invert_matrix(&jacobian, field).is_none() {
        return Err(CocycleError::NotInvertibleChart(
            "jacobian at the origin is singular".into(),
        ));
    }
    let n = 3 * m;
    let base: Vec<usize> = (0..m).collect();
    let lift = |p: &Polynomial| p.embed(n, &base);
    let xdot = |b: usize| Polynomial::var(n, field, m + b);
    let xddot = |b: usize| Polynomial::var(n, field, 2 * m + b);
    let mut components: Vec<Polynomial> = chart.iter().map(lift).collect();
    for c in chart {
        let mut v = Polynomial::zero(n, field);
        for b in 0..m {
            v.add_assign(&lift(&c.derivative(b)).mul(&xdot(b)));
        }
        components.push(v);
    }
    for c in chart {
        let mut a = Polynomial::zero(n, field);
        for b in 0..m {
            let db = c.derivative(b);
            a.add_assign(&lift(&db).mul(&xddot(b)));
            for k in 0..m {
                a.add_assign(&lift(&db.derivative(k)).mul(&xdot(b)).mul(&xdot(k)));
            }
        }
        components.push(a);
    }
    let sig = t2_signature(m);
    let map = PolyMap::new(&sig, &sig, field, components)?;
    if !is_graded_morphism(&map)? {
        return Err(GradedError::InternalDisagreement(
            "second-order transition is not graded".into(),
        )
        .into());
    }
    Ok(map)
}

/// Every fiber component is linear in the fiber coordinates and base
/// components do not involve them.
pub fn is_vector_bundle_transition(map: &PolyMap) -> bool {
    let weights = map.sig_in().weights();
    map.components()
        .iter()
        .zip(map.sig_out().weights())
        .all(|(c, w)| {
            c.terms().all(|(e, _)| {
                let fiber_degree: u32 = e
                    .iter()
                    .zip(&weights)
                    .filter(|(_, &wt)| wt > 0)
                    .map(|(k, _)| k)
                    .sum();
                fiber_degree == u32::from(w > 0)
            })
        })
}
