use super::{check_vector_signature, AutError, NVectAutomorphism, Result};
use crate::graded::{Exponents, Field, GradedError, GradedSignature, PolyMap, Polynomial, Scalar};

/// Coefficients of a double affine automorphism of `(y, y', z)` with block
/// dimensions `(d, d', d0)`:
///
/// ```text
/// y_j  -> alpha0[j]  + alpha[j][i] y_i
/// y'_b -> alpha_p0[b] + alpha_p[b][a] y'_a
/// z_v  -> beta00[v] + beta_i0[v][i] y_i + beta_0a[v][a] y'_a
///         + beta_ia[v][i][a] y_i y'_a + sigma[v][u] z_u
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCoefficients {
    pub alpha0: Vec<Scalar>,
    pub alpha: Vec<Vec<Scalar>>,
    pub alpha_p0: Vec<Scalar>,
    pub alpha_p: Vec<Vec<Scalar>>,
    pub beta00: Vec<Scalar>,
    pub beta_i0: Vec<Vec<Scalar>>,
    pub beta_0a: Vec<Vec<Scalar>>,
    pub beta_ia: Vec<Vec<Vec<Scalar>>>,
    pub sigma: Vec<Vec<Scalar>>,
}

impl AffineCoefficients {
    /// Coefficients of the identity.
    pub fn identity(d: usize, dprime: usize, d0: usize, field: Field) -> Self {
        let zeros = |k: usize| vec![field.zero(); k];
        let eye = |k: usize| {
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| if i == j { field.one() } else { field.zero() })
                        .collect()
                })
                .collect()
        };
        AffineCoefficients {
            alpha0: zeros(d),
            alpha: eye(d),
            alpha_p0: zeros(dprime),
            alpha_p: eye(dprime),
            beta00: zeros(d0),
            beta_i0: vec![zeros(d); d0],
            beta_0a: vec![zeros(dprime); d0],
            beta_ia: vec![vec![zeros(dprime); d]; d0],
            sigma: eye(d0),
        }
    }
}

/// An automorphism of a double affine space: affine in each grading
/// separately.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineAutomorphism {
    map: PolyMap,
    inverse: PolyMap,
}

fn double_dims(sig: &GradedSignature) -> Result<(usize, usize, usize)> {
    check_vector_signature(sig)?;
    match sig {
        GradedSignature::Multi { n: 2, blocks, .. } => Ok((
            blocks.get(&1).copied().unwrap_or(0),
            blocks.get(&2).copied().unwrap_or(0),
            blocks.get(&3).copied().unwrap_or(0),
        )),
        _ => Err(AutError::InvalidSignature("expected two gradings".into())),
    }
}

impl AffineAutomorphism {
    /// Every monomial of a component must have degree at most the component's
    /// degree in each grading; every linear block must be invertible.
    pub fn from_map(map: PolyMap) -> Result<Self> {
        let sig = map.sig_in().clone();
        check_vector_signature(&sig)?;
        if map.sig_out() != &sig {
            return Err(AutError::InvalidSignature(
                "automorphisms map a space to itself".into(),
            ));
        }
        let degrees = sig.degrees();
        for (target, c) in map.components().iter().enumerate() {
            let bad = c.terms().find(|(e, _)| {
                sig.monomial_degree(e)
                    .iter()
                    .zip(&degrees[target])
                    .any(|(m, d)| m > d)
            });
            if let Some((e, _)) = bad {
                return Err(AutError::IllegalMonomial {
                    target,
                    exponents: e.clone(),
                });
            }
        }
        let inverse = match map.invert() {
            Ok(inv) => inv,
            Err(GradedError::NotInvertible(m)) => return Err(AutError::NotInvertible(m)),
            Err(e) => return Err(e.into()),
        };
        Ok(AffineAutomorphism { map, inverse })
    }

    pub fn from_terms(
        sig: &GradedSignature,
        field: Field,
        terms: impl IntoIterator<Item = (usize, Exponents, Scalar)>,
    ) -> Result<Self> {
        check_vector_signature(sig)?;
        AffineAutomorphism::from_map(PolyMap::from_terms(sig, sig, field, terms)?)
    }

    pub fn from_coefficients(
        sig: &GradedSignature,
        field: Field,
        c: &AffineCoefficients,
    ) -> Result<Self> {
        let (d, dp, d0) = double_dims(sig)?;
        let shape_ok = c.alpha0.len() == d
            && c.alpha.len() == d
            && c.alpha.iter().all(|r| r.len() == d)
            && c.alpha_p0.len() == dp
            && c.alpha_p.len() == dp
            && c.alpha_p.iter().all(|r| r.len() == dp)
            && c.beta00.len() == d0
            && c.beta_i0.len() == d0
            && c.beta_i0.iter().all(|r| r.len() == d)
            && c.beta_0a.len() == d0
            && c.beta_0a.iter().all(|r| r.len() == dp)
            && c.beta_ia.len() == d0
            && c.beta_ia
                .iter()
                .all(|m| m.len() == d && m.iter().all(|r| r.len() == dp))
            && c.sigma.len() == d0
            && c.sigma.iter().all(|r| r.len() == d0);
        if !shape_ok {
            return Err(AutError::InvalidSignature(format!(
                "coefficient shapes do not match ({d}, {dp}, {d0})"
            )));
        }
        let n = d + dp + d0;
        let y = |i: usize| i;
        let yp = |a: usize| d + a;
        let z = |u: usize| d + dp + u;
        let unit = |vars: &[usize]| {
            let mut e = vec![0; n];
            for &v in vars {
                e[v] += 1;
            }
            e
        };
        let mut terms: Vec<(usize, Exponents, Scalar)> = Vec::new();
        for j in 0..d {
            terms.push((y(j), unit(&[]), c.alpha0[j].clone()));
            terms.extend((0..d).map(|i| (y(j), unit(&[y(i)]), c.alpha[j][i].clone())));
        }
        for b in 0..dp {
            terms.push((yp(b), unit(&[]), c.alpha_p0[b].clone()));
            terms.extend((0..dp).map(|a| (yp(b), unit(&[yp(a)]), c.alpha_p[b][a].clone())));
        }
        for v in 0..d0 {
            terms.push((z(v), unit(&[]), c.beta00[v].clone()));
            terms.extend((0..d).map(|i| (z(v), unit(&[y(i)]), c.beta_i0[v][i].clone())));
            terms.extend((0..dp).map(|a| (z(v), unit(&[yp(a)]), c.beta_0a[v][a].clone())));
            for i in 0..d {
                terms.extend(
                    (0..dp).map(|a| (z(v), unit(&[y(i), yp(a)]), c.beta_ia[v][i][a].clone())),
                );
            }
            terms.extend((0..d0).map(|u| (z(v), unit(&[z(u)]), c.sigma[v][u].clone())));
        }
        AffineAutomorphism::from_terms(sig, field, terms)
    }

    pub fn identity(sig: &GradedSignature, field: Field) -> Result<Self> {
        check_vector_signature(sig)?;
        let id = PolyMap::identity(sig, field);
        Ok(AffineAutomorphism {
            map: id.clone(),
            inverse: id,
        })
    }

    pub fn map(&self) -> &PolyMap {
        &self.map
    }

    pub fn inverse_map(&self) -> &PolyMap {
        &self.inverse
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AffineAutomorphism) -> Result<AffineAutomorphism> {
        Ok(AffineAutomorphism {
            map: self.map.compose(&other.map)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }

    pub fn inverse(&self) -> AffineAutomorphism {
        AffineAutomorphism {
            map: self.inverse.clone(),
            inverse: self.map.clone(),
        }
    }

    /// Drops every monomial of degree below its component's degree.
    pub fn linear_part(&self) -> Result<NVectAutomorphism> {
        let sig = self.map.sig_in();
        let degrees = sig.degrees();
        let n = sig.coords();
        let components = self
            .map
            .components()
            .iter()
            .zip(&degrees)
            .map(|(c, d)| {
                let mut p = Polynomial::zero(n, self.map.field());
                for (e, s) in c.terms() {
                    if &sig.monomial_degree(e) == d {
                        p.add_term(e.clone(), s.clone());
                    }
                }
                p
            })
            .collect();
        NVectAutomorphism::from_map(PolyMap::new(sig, sig, self.map.field(), components)?)
    }
}

/// `linear_part(a b) = linear_part(a) linear_part(b)`.
pub fn linear_part_is_multiplicative(
    a: &AffineAutomorphism,
    b: &AffineAutomorphism,
) -> Result<bool> {
    let lhs = a.compose(b)?.linear_part()?;
    let rhs = a.linear_part()?.compose(&b.linear_part()?)?;
    Ok(lhs.map() == rhs.map())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn d111() -> GradedSignature {
        GradedSignature::double(1, 1, 1).unwrap()
    }

    #[test]
    fn identity_coefficients() {
        let c = AffineCoefficients::identity(1, 1, 1, f3());
        let a = AffineAutomorphism::from_coefficients(&d111(), f3(), &c).unwrap();
        assert!(a.map().is_identity());
    }

    #[test]
    fn translation_inverse() {
        let f = f3();
        let mut c = AffineCoefficients::identity(1, 1, 1, f);
        c.alpha0[0] = f.int(1);
        let a = AffineAutomorphism::from_coefficients(&d111(), f, &c).unwrap();
        let inv = a.inverse_map();
        assert_eq!(inv.component(0).coefficient(&[0, 0, 0]), f.int(-1));
        assert!(inv.component(1) == &Polynomial::var(3, f, 1));
        assert!(a.linear_part().unwrap().map().is_identity());
    }

    #[test]
    fn beta_i0_forgets_to_vector_automorphism() {
        let f = f3();
        let mut c = AffineCoefficients::identity(1, 1, 1, f);
        c.beta_i0[0][0] = f.one();
        c.alpha[0][0] = f.int(2);
        let a = AffineAutomorphism::from_coefficients(&d111(), f, &c).unwrap();
        assert!(a.compose(&a.inverse()).unwrap().map().is_identity());
        let lin = a.linear_part().unwrap();
        assert_eq!(lin.map().component(2), &Polynomial::var(3, f, 2));
        let mut t = AffineCoefficients::identity(1, 1, 1, f);
        t.alpha_p0[0] = f.int(2);
        t.beta_ia[0][0][0] = f.one();
        let b = AffineAutomorphism::from_coefficients(&d111(), f, &t).unwrap();
        assert!(linear_part_is_multiplicative(&a, &b).unwrap());
        assert!(linear_part_is_multiplicative(&b, &a).unwrap());
    }

    #[test]
    fn rejects_cross_terms_and_singular_blocks() {
        let f = f3();
        let bad = AffineAutomorphism::from_terms(
            &d111(),
            f,
            [
                (0, vec![0, 1, 0], f.one()),
                (0, vec![1, 0, 0], f.one()),
                (1, vec![0, 1, 0], f.one()),
                (2, vec![0, 0, 1], f.one()),
            ],
        );
        assert!(matches!(
            bad,
            Err(AutError::IllegalMonomial { target: 0, .. })
        ));
        let mut c = AffineCoefficients::identity(1, 1, 1, f);
        c.sigma[0][0] = f.zero();
        assert!(matches!(
            AffineAutomorphism::from_coefficients(&d111(), f, &c),
            Err(AutError::NotInvertible(_))
        ));
    }
}
