use std::collections::BTreeMap;
use std::fmt;

use super::{Field, GradedError, Result, Scalar};

pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial over an exact field. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: Field) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(nvars, c.field());
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Polynomial::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Polynomial::monomial(field, e, field.one())
    }

    pub fn monomial(field: Field, exponents: Exponents, c: Scalar) -> Self {
        let mut p = Polynomial::zero(exponents.len(), field);
        p.add_term(exponents, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(
        nvars: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Exponents, Scalar)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(nvars, field);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(GradedError::InvalidPolynomial(format!(
                    "exponent vector of length {} for {nvars} variables",
                    e.len()
                )));
            }
            if c.field() != field {
                return Err(GradedError::FieldMismatch);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Scalar {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Total degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_term(&mut self, exponents: Exponents, c: Scalar) {
        debug_assert_eq!(exponents.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Polynomial) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials in different variable counts"
        );
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        self.check(other);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&(-&self.field.one()))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars, self.field);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a * c);
        }
        p
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check(other);
        let mut p = Polynomial::zero(self.nvars, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(self.nvars, self.field);
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut p = Polynomial::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            p.add_term(d, c * &self.field.int(e[i] as i64));
        }
        p
    }

    /// Replaces variable `i` by `values[i]`; all values share a variable count.
    pub fn substitute(&self, values: &[Polynomial]) -> Polynomial {
        assert_eq!(values.len(), self.nvars, "one value per variable");
        let target_vars = values.first().map_or(0, |v| v.nvars);
        let mut cache: Vec<Vec<Polynomial>> = values
            .iter()
            .map(|v| vec![Polynomial::one(v.nvars, self.field), v.clone()])
            .collect();
        let mut result = Polynomial::zero(target_vars, self.field);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().unwrap().mul(&values[i]);
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][k as usize]);
            }
            result.add_assign(&term);
        }
        result
    }

    /// Renames variable `i` to `map[i]` in a space of `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Polynomial {
        let mut p = Polynomial::zero(nvars, self.field);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            p.add_term(f, c.clone());
        }
        p
    }

    /// Appends `extra` unused variables.
    pub fn extend(&self, extra: usize) -> Polynomial {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.embed(self.nvars + extra, &map)
    }

    /// Collects by the power of variable `i`: `power -> coefficient polynomial`
    /// (still in all variables, with variable `i` absent).
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] = 0;
            out.entry(e[i])
                .or_insert_with(|| Polynomial::zero(self.nvars, self.field))
                .add_term(f, c.clone());
        }
        out
    }

    /// Evaluates at a point in the field.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut total = self.field.zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, &k) in point.iter().zip(e) {
                v = &v * &x.pow(k);
            }
            total = &total + &v;
        }
        total
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("y{i}")
                    } else {
                        format!("y{i}^{k}")
                    }
                })
                .collect();
            match (vars.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}
