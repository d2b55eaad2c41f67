use super::{
    invert_matrix, Exponents, Field, GradedError, GradedSignature, Polynomial, Result, Scalar,
};

/// A polynomial map between graded coordinate spaces: component `i` is the
/// `i`-th target coordinate as a polynomial in the source coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    sig_in: GradedSignature,
    sig_out: GradedSignature,
    field: Field,
    components: Vec<Polynomial>,
}

impl PolyMap {
    pub fn new(
        sig_in: &GradedSignature,
        sig_out: &GradedSignature,
        field: Field,
        components: Vec<Polynomial>,
    ) -> Result<Self> {
        if components.len() != sig_out.coords() {
            return Err(GradedError::SignatureMismatch(format!(
                "{} components for {} target coordinates",
                components.len(),
                sig_out.coords()
            )));
        }
        for c in &components {
            if c.nvars() != sig_in.coords() {
                return Err(GradedError::SignatureMismatch(format!(
                    "component in {} variables for {} source coordinates",
                    c.nvars(),
                    sig_in.coords()
                )));
            }
            if c.field() != field {
                return Err(GradedError::FieldMismatch);
            }
        }
        Ok(PolyMap {
            sig_in: sig_in.clone(),
            sig_out: sig_out.clone(),
            field,
            components,
        })
    }

    /// Builds from `(target, exponents, coefficient)` terms.
    pub fn from_terms(
        sig_in: &GradedSignature,
        sig_out: &GradedSignature,
        field: Field,
        terms: impl IntoIterator<Item = (usize, Exponents, Scalar)>,
    ) -> Result<Self> {
        let n = sig_in.coords();
        let mut components = vec![Polynomial::zero(n, field); sig_out.coords()];
        for (target, e, c) in terms {
            if target >= components.len() {
                return Err(GradedError::InvalidPolynomial(format!(
                    "target coordinate {target} out of range"
                )));
            }
            if e.len() != n {
                return Err(GradedError::InvalidPolynomial(format!(
                    "exponent vector of length {}",
                    e.len()
                )));
            }
            if c.field() != field {
                return Err(GradedError::FieldMismatch);
            }
            components[target].add_term(e, c);
        }
        PolyMap::new(sig_in, sig_out, field, components)
    }

    pub fn identity(sig: &GradedSignature, field: Field) -> Self {
        let n = sig.coords();
        let components = (0..n).map(|i| Polynomial::var(n, field, i)).collect();
        PolyMap {
            sig_in: sig.clone(),
            sig_out: sig.clone(),
            field,
            components,
        }
    }

    pub fn sig_in(&self) -> &GradedSignature {
        &self.sig_in
    }

    pub fn sig_out(&self) -> &GradedSignature {
        &self.sig_out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    /// All terms as `(target, exponents, coefficient)`, ordered by target, then
    /// by source weight, then lexicographically.
    pub fn terms(&self) -> Vec<(usize, Exponents, Scalar)> {
        let weights = self.sig_in.weights();
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            let mut ts: Vec<(u32, &Exponents, &Scalar)> = c
                .terms()
                .map(|(e, s)| (e.iter().zip(&weights).map(|(k, w)| k * w).sum(), e, s))
                .collect();
            ts.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            out.extend(ts.into_iter().map(|(_, e, s)| (i, e.clone(), s.clone())));
        }
        out
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if inner.field != self.field {
            return Err(GradedError::FieldMismatch);
        }
        if inner.sig_out != self.sig_in {
            return Err(GradedError::SignatureMismatch(
                "inner target differs from outer source".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect();
        Ok(PolyMap {
            sig_in: inner.sig_in.clone(),
            sig_out: self.sig_out.clone(),
            field: self.field,
            components,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.sig_in == self.sig_out && *self == PolyMap::identity(&self.sig_in, self.field)
    }

    /// Every monomial has the multi-degree of its target coordinate.
    pub fn is_weight_preserving(&self) -> bool {
        if self.sig_in.families() != self.sig_out.families() {
            return false;
        }
        let out = self.sig_out.degrees();
        self.components
            .iter()
            .zip(&out)
            .all(|(c, d)| c.terms().all(|(e, _)| &self.sig_in.monomial_degree(e) == d))
    }

    /// Evaluates at a point of the source space.
    pub fn eval(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    /// Inverse map, solved block by block up the filtration.
    ///
    /// The base block must be affine in the base coordinates with invertible
    /// linear part. Every other block `B` must have the form
    /// `L y_B + N(lower blocks)` with a constant invertible matrix `L`.
    pub fn invert(&self) -> Result<PolyMap> {
        if self.sig_in != self.sig_out {
            return Err(GradedError::SignatureMismatch(
                "only self-maps can be inverted".into(),
            ));
        }
        let sig = &self.sig_in;
        let field = self.field;
        let n = sig.coords();
        let blocks = sig.blocks();
        let block_of: Vec<usize> = blocks
            .iter()
            .enumerate()
            .flat_map(|(k, b)| std::iter::repeat_n(k, b.dim))
            .collect();
        let below = |a: &[u32], b: &[u32]| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
        let ys: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, field, i)).collect();
        let mut inverse: Vec<Polynomial> = vec![Polynomial::zero(n, field); n];

        for (k, block) in blocks.iter().enumerate() {
            if block.dim == 0 {
                continue;
            }
            let coords: Vec<usize> = block.coords().collect();
            let mut linear = vec![vec![field.zero(); block.dim]; block.dim];
            let mut rest: Vec<Polynomial> = Vec::with_capacity(block.dim);
            for (r, &c) in coords.iter().enumerate() {
                let mut other = Polynomial::zero(n, field);
                for (e, coef) in self.components[c].terms() {
                    let vars: Vec<usize> = (0..n).filter(|&v| e[v] > 0).collect();
                    if let Some(&v) = vars.iter().find(|&&v| block_of[v] == k) {
                        if vars.len() != 1 || e[v] != 1 {
                            return Err(GradedError::NotInvertible(format!(
                                "component {c} is not linear in its own block (coordinate {v})"
                            )));
                        }
                        linear[r][v - block.start] = coef.clone();
                    } else if let Some(&v) = vars
                        .iter()
                        .find(|&&v| !below(&blocks[block_of[v]].degree, &block.degree))
                    {
                        return Err(GradedError::NotInvertible(format!(
                            "component {c} depends on coordinate {v} outside the lower blocks"
                        )));
                    } else {
                        other.add_term(e.clone(), coef.clone());
                    }
                }
                rest.push(other);
            }
            let l_inv = invert_matrix(&linear, field).ok_or_else(|| {
                GradedError::NotInvertible(format!(
                    "linear block of degree {:?} is singular",
                    block.degree
                ))
            })?;
            // y_B = L^-1 (y'_B - N(inverse of lower blocks)).
            let rhs: Vec<Polynomial> = coords
                .iter()
                .zip(&rest)
                .map(|(&c, other)| ys[c].sub(&other.substitute(&inverse)))
                .collect();
            for (r, &c) in coords.iter().enumerate() {
                let mut value = Polynomial::zero(n, field);
                for (j, h) in rhs.iter().enumerate() {
                    value.add_assign(&h.scale(&l_inv[r][j]));
                }
                inverse[c] = value;
            }
        }
        let g = PolyMap {
            sig_in: sig.clone(),
            sig_out: sig.clone(),
            field,
            components: inverse,
        };
        if !self.compose(&g)?.is_identity() || !g.compose(self)?.is_identity() {
            return Err(GradedError::InternalDisagreement(
                "triangular inverse is not two-sided".into(),
            ));
        }
        Ok(g)
    }
}
