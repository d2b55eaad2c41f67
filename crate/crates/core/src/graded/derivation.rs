use std::collections::BTreeMap;

use super::homogeneity::scaling;
use super::{Field, GradedError, GradedSignature, Polynomial, Result};

/// The vector field `sum_i a_i(y) d/dy_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    nvars: usize,
    field: Field,
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(nvars: usize, field: Field, coeffs: Vec<Polynomial>) -> Result<Self> {
        if coeffs.len() != nvars || coeffs.iter().any(|c| c.nvars() != nvars) {
            return Err(GradedError::InvalidPolynomial(
                "one coefficient per coordinate".into(),
            ));
        }
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(GradedError::FieldMismatch);
        }
        Ok(Derivation {
            nvars,
            field,
            coeffs,
        })
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert_eq!(
            f.nvars(),
            self.nvars,
            "polynomial lives on other coordinates"
        );
        let mut out = Polynomial::zero(self.nvars, self.field);
        for (i, a) in self.coeffs.iter().enumerate() {
            let d = f.derivative(i);
            if !d.is_zero() && !a.is_zero() {
                out.add_assign(&a.mul(&d));
            }
        }
        out
    }

    /// `[self, other]`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.apply(b).sub(&other.apply(a)))
            .collect();
        Derivation {
            nvars: self.nvars,
            field: self.field,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }
}

/// `sum w_i y_i d/dy_i` for the weights of family `family`.
pub fn weight_vector_field(
    sig: &GradedSignature,
    family: usize,
    field: Field,
) -> Result<Derivation> {
    if family >= sig.families() {
        return Err(GradedError::SignatureMismatch(format!(
            "no dilation family {family}"
        )));
    }
    let n = sig.coords();
    let coeffs = sig
        .family_weights(family)
        .iter()
        .enumerate()
        .map(|(i, &w)| Polynomial::var(n, field, i).scale(&field.int(w as i64)))
        .collect();
    Derivation::new(n, field, coeffs)
}

/// Splits `f` by total weight of its monomials. The split is asserted equal
/// to the `t`-coefficients of `f` composed with the total dilation.
pub fn weight_components(f: &Polynomial, sig: &GradedSignature) -> BTreeMap<u32, Polynomial> {
    assert_eq!(
        f.nvars(),
        sig.coords(),
        "polynomial lives on other coordinates"
    );
    let n = f.nvars();
    let weights = sig.weights();
    let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (e, c) in f.terms() {
        let w = e.iter().zip(&weights).map(|(k, w)| k * w).sum();
        out.entry(w)
            .or_insert_with(|| Polynomial::zero(n, f.field()))
            .add_term(e.clone(), c.clone());
    }
    let h = scaling(sig, &weights, f.field());
    let composed = f.substitute(h.components());
    let from_dilation: BTreeMap<u32, Polynomial> = composed
        .coefficients_in(n)
        .into_iter()
        .map(|(w, p)| {
            let mut back = Polynomial::zero(n, f.field());
            for (e, c) in p.terms() {
                back.add_term(e[..n].to_vec(), c.clone());
            }
            (w, back)
        })
        .collect();
    assert_eq!(
        out, from_dilation,
        "weight split disagrees with dilation coefficients"
    );
    out
}

/// Whether `f` is homogeneous of weight `w`. The answer is asserted equal to
/// the Euler-type test `grad(f) = w f` when `w` is nonzero in the field.
pub fn is_homogeneous(f: &Polynomial, sig: &GradedSignature, w: u32) -> bool {
    let parts = weight_components(f, sig);
    let by_split = parts.keys().all(|&k| k == w);
    let wf = f.field().int(w as i64);
    let p = f.field().characteristic();
    let separated = p == 0 || parts.keys().chain([&w]).all(|&k| (k as u64) < p);
    if sig.families() == 1 && separated {
        let grad = weight_vector_field(sig, 0, f.field()).expect("family 0 exists");
        let by_field = grad.apply(f) == f.scale(&wf);
        assert_eq!(
            by_split, by_field,
            "weight vector field disagrees with the weight split"
        );
    }
    by_split
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::HomogeneityStructure;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn split_and_homogeneity() {
        let sig = GradedSignature::simple(&[1, 1]).unwrap();
        let y = Polynomial::var(2, q(), 0);
        let z = Polynomial::var(2, q(), 1);
        let f = z.add(&y.pow(2));
        assert!(is_homogeneous(&f, &sig, 2));
        assert!(!is_homogeneous(&f, &sig, 1));
        let g = y.add(&z);
        let parts = weight_components(&g, &sig);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&1], y);
        assert_eq!(parts[&2], z);
        assert!(!is_homogeneous(&g, &sig, 1) && !is_homogeneous(&g, &sig, 2));
        let zero = Polynomial::zero(2, q());
        assert!(weight_components(&zero, &sig).is_empty());
        assert!(is_homogeneous(&zero, &sig, 5));
    }

    #[test]
    fn weight_field_values() {
        let sig = GradedSignature::simple(&[1, 1]).unwrap();
        let grad = weight_vector_field(&sig, 0, q()).unwrap();
        let y = Polynomial::var(2, q(), 0);
        let z = Polynomial::var(2, q(), 1);
        let f = z.add(&y.pow(2));
        assert_eq!(grad.apply(&f), f.scale(&q().int(2)));
        assert!(grad.apply(&Polynomial::one(2, q())).is_zero());
        let vs = GradedSignature::simple(&[2]).unwrap();
        let euler = weight_vector_field(&vs, 0, q()).unwrap();
        let p = y.mul(&z);
        assert_eq!(euler.apply(&p), p.scale(&q().int(2)));
    }

    #[test]
    fn field_from_dilation_matches() {
        let sig = GradedSignature::double(1, 2, 1).unwrap();
        for family in 0..2 {
            let h: HomogeneityStructure = crate::graded::dilation(&sig, family, q()).unwrap();
            assert_eq!(
                h.weight_vector_field(),
                weight_vector_field(&sig, family, q()).unwrap()
            );
        }
    }

    #[test]
    fn bracket_of_commuting_fields() {
        let sig = GradedSignature::double(1, 1, 1).unwrap();
        let a = weight_vector_field(&sig, 0, q()).unwrap();
        let b = weight_vector_field(&sig, 1, q()).unwrap();
        assert!(a.bracket(&b).is_zero());
    }
}
