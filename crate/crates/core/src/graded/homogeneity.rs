use serde::Serialize;

use super::{Derivation, Field, GradedError, GradedSignature, PolyMap, Polynomial, Result};

/// A one-parameter family `h_t` of polynomial self-maps of `nvars`
/// coordinates. Each component is a polynomial in the coordinates and a
/// formal parameter `t`, stored as the last variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneityStructure {
    nvars: usize,
    field: Field,
    components: Vec<Polynomial>,
}

impl HomogeneityStructure {
    /// Checks the shape and the laws `h_t h_s = h_ts`, `h_1 = id`.
    pub fn new(nvars: usize, field: Field, components: Vec<Polynomial>) -> Result<Self> {
        if components.len() != nvars {
            return Err(GradedError::InvalidStructure(format!(
                "{} components for {nvars} coordinates",
                components.len()
            )));
        }
        if components.iter().any(|c| c.nvars() != nvars + 1) {
            return Err(GradedError::InvalidStructure(
                "components must use the coordinates and t".into(),
            ));
        }
        if components.iter().any(|c| c.field() != field) {
            return Err(GradedError::FieldMismatch);
        }
        let h = HomogeneityStructure {
            nvars,
            field,
            components,
        };
        if let Some(law) = h.law_violation() {
            return Err(GradedError::InvalidStructure(law.into()));
        }
        Ok(h)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    fn coords_plus(&self, extra: usize) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| Polynomial::var(self.nvars + extra, self.field, i))
            .collect()
    }

    /// `None` when both laws hold as identities in formal `t`, `s`.
    pub fn law_violation(&self) -> Option<&'static str> {
        let n = self.nvars;
        let f = self.field;
        // h_1 = id
        let mut at_one = self.coords_plus(0);
        at_one.push(Polynomial::one(n, f));
        let ys = self.coords_plus(0);
        if self
            .components
            .iter()
            .zip(&ys)
            .any(|(c, y)| &c.substitute(&at_one) != y)
        {
            return Some("h_1 is not the identity");
        }
        // h_t h_s = h_ts in variables (y, t, s)
        let t = Polynomial::var(n + 2, f, n);
        let s = Polynomial::var(n + 2, f, n + 1);
        let mut map_s: Vec<usize> = (0..n).collect();
        map_s.push(n + 1);
        let mut inner: Vec<Polynomial> = self
            .components
            .iter()
            .map(|c| c.embed(n + 2, &map_s))
            .collect();
        inner.push(t.clone());
        let mut scaled = self.coords_plus(2);
        scaled.push(t.mul(&s));
        for c in &self.components {
            if c.substitute(&inner) != c.substitute(&scaled) {
                return Some("h_t h_s differs from h_ts");
            }
        }
        None
    }

    /// `h_t` with `t` set to a field value, as a self-map of `sig`.
    pub fn at(&self, sig: &GradedSignature, t: &super::Scalar) -> Result<PolyMap> {
        let mut values = self.coords_plus(0);
        values.push(Polynomial::constant(self.nvars, t.clone()));
        PolyMap::new(
            sig,
            sig,
            self.field,
            self.components
                .iter()
                .map(|c| c.substitute(&values))
                .collect(),
        )
    }

    /// Whether `self_t` and `other_s` commute as formal identities.
    pub fn commutes_with(&self, other: &HomogeneityStructure) -> Result<bool> {
        self.check_pair(other)?;
        let n = self.nvars;
        let f = self.field;
        let mut map_t: Vec<usize> = (0..n).collect();
        map_t.push(n);
        let mut map_s: Vec<usize> = (0..n).collect();
        map_s.push(n + 1);
        let a: Vec<Polynomial> = self
            .components
            .iter()
            .map(|c| c.embed(n + 2, &map_t))
            .collect();
        let b: Vec<Polynomial> = other
            .components
            .iter()
            .map(|c| c.embed(n + 2, &map_s))
            .collect();
        let t = Polynomial::var(n + 2, f, n);
        let s = Polynomial::var(n + 2, f, n + 1);
        let mut into_a = b.clone();
        into_a.extend([t.clone(), s.clone()]);
        let mut into_b = a.clone();
        into_b.extend([t, s]);
        Ok(a.iter()
            .zip(&b)
            .all(|(ai, bi)| ai.substitute(&into_a) == bi.substitute(&into_b)))
    }

    /// `phi h_t phi^-1`.
    pub fn conjugate(&self, phi: &PolyMap) -> Result<HomogeneityStructure> {
        if phi.sig_in().coords() != self.nvars || phi.field() != self.field {
            return Err(GradedError::SignatureMismatch(
                "conjugating map does not match the structure".into(),
            ));
        }
        let inv = phi.invert()?;
        let n = self.nvars;
        let lift = |p: &Polynomial| p.extend(1);
        let t = Polynomial::var(n + 1, self.field, n);
        let mut into_h: Vec<Polynomial> = inv.components().iter().map(lift).collect();
        into_h.push(t.clone());
        let h_inv: Vec<Polynomial> = self
            .components
            .iter()
            .map(|c| c.substitute(&into_h))
            .collect();
        let components = phi
            .components()
            .iter()
            .map(|c| c.substitute(&h_inv))
            .collect();
        HomogeneityStructure::new(n, self.field, components)
    }

    /// `d/dt h_t` at `t = 1`.
    pub fn weight_vector_field(&self) -> Derivation {
        let n = self.nvars;
        let mut at_one = self.coords_plus(0);
        at_one.push(Polynomial::one(n, self.field));
        let coeffs = self
            .components
            .iter()
            .map(|c| c.derivative(n).substitute(&at_one))
            .collect();
        Derivation::new(n, self.field, coeffs).expect("coefficients share the coordinate space")
    }

    fn check_pair(&self, other: &HomogeneityStructure) -> Result<()> {
        if self.field != other.field {
            return Err(GradedError::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(GradedError::SignatureMismatch(
                "structures on different coordinate sets".into(),
            ));
        }
        Ok(())
    }
}

/// Dilation family `family`: every coordinate of multi-degree `sigma` is
/// scaled by `t^sigma_family`.
pub fn dilation(
    sig: &GradedSignature,
    family: usize,
    field: Field,
) -> Result<HomogeneityStructure> {
    if family >= sig.families() {
        return Err(GradedError::SignatureMismatch(format!(
            "no dilation family {family}"
        )));
    }
    Ok(scaling(sig, &sig.family_weights(family), field))
}

/// One dilation per family.
pub fn dilations(sig: &GradedSignature, field: Field) -> Vec<HomogeneityStructure> {
    (0..sig.families())
        .map(|i| scaling(sig, &sig.family_weights(i), field))
        .collect()
}

pub(crate) fn scaling(
    sig: &GradedSignature,
    weights: &[u32],
    field: Field,
) -> HomogeneityStructure {
    let n = sig.coords();
    let components = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut e = vec![0; n + 1];
            e[i] = 1;
            e[n] = w;
            Polynomial::monomial(field, e, field.one())
        })
        .collect();
    let h = HomogeneityStructure {
        nvars: n,
        field,
        components,
    };
    assert_eq!(
        h.law_violation(),
        None,
        "diagonal scaling breaks the dilation laws"
    );
    h
}

/// `phi h_in_t = h_out_t phi` as a formal identity in `t`.
pub fn intertwines(
    phi: &PolyMap,
    h_in: &HomogeneityStructure,
    h_out: &HomogeneityStructure,
) -> Result<bool> {
    if h_in.nvars != phi.sig_in().coords() || h_out.nvars != phi.sig_out().coords() {
        return Err(GradedError::SignatureMismatch(
            "structures do not match the map".into(),
        ));
    }
    if h_in.field != phi.field() || h_out.field != phi.field() {
        return Err(GradedError::FieldMismatch);
    }
    let lhs: Vec<Polynomial> = phi
        .components()
        .iter()
        .map(|c| c.substitute(&h_in.components))
        .collect();
    let mut values: Vec<Polynomial> = phi.components().iter().map(|c| c.extend(1)).collect();
    values.push(Polynomial::var(h_in.nvars + 1, phi.field(), h_in.nvars));
    let rhs: Vec<Polynomial> = h_out
        .components
        .iter()
        .map(|c| c.substitute(&values))
        .collect();
    Ok(lhs == rhs)
}

/// Whether `phi` intertwines every dilation family. The formal check is
/// asserted equal to the degree bookkeeping on monomials.
pub fn is_graded_morphism(phi: &PolyMap) -> Result<bool> {
    let (sin, sout) = (phi.sig_in(), phi.sig_out());
    if sin.families() != sout.families() {
        return Err(GradedError::SignatureMismatch(format!(
            "{} families against {}",
            sin.families(),
            sout.families()
        )));
    }
    let mut formal = true;
    for family in 0..sin.families() {
        let h_in = dilation(sin, family, phi.field())?;
        let h_out = dilation(sout, family, phi.field())?;
        formal &= intertwines(phi, &h_in, &h_out)?;
    }
    let by_degree = phi.is_weight_preserving();
    if formal != by_degree {
        return Err(GradedError::InternalDisagreement(format!(
            "formal intertwining says {formal}, degree bookkeeping says {by_degree}"
        )));
    }
    Ok(formal)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub commute: bool,
    pub bracket_vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilityVerdict {
    pub compatible: bool,
    pub brackets_vanish: bool,
    pub pairs: Vec<PairVerdict>,
}

/// Pairwise commutation of the families, and independently the vanishing of
/// the brackets of their weight vector fields. Over the rationals the two
/// verdicts must agree.
pub fn check_compatible_structures(list: &[HomogeneityStructure]) -> Result<CompatibilityVerdict> {
    let mut pairs = Vec::new();
    let fields: Vec<Derivation> = list.iter().map(|h| h.weight_vector_field()).collect();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            let commute = list[i].commutes_with(&list[j])?;
            let bracket_vanishes = fields[i].bracket(&fields[j]).is_zero();
            if commute != bracket_vanishes && list[i].field == Field::Rational {
                return Err(GradedError::InternalDisagreement(format!(
                    "families {i} and {j}: commutation {commute}, bracket test {bracket_vanishes}"
                )));
            }
            pairs.push(PairVerdict {
                i,
                j,
                commute,
                bracket_vanishes,
            });
        }
    }
    Ok(CompatibilityVerdict {
        compatible: pairs.iter().all(|p| p.commute),
        brackets_vanish: pairs.iter().all(|p| p.bracket_vanishes),
        pairs,
    })
}
