use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{GradedError, Result};

/// Largest prime accepted by [`Field::prime`].
pub const MAX_PRIME: u64 = 97;

/// Exact coefficient field: the rationals or a small prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Fp")]
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        let is_prime = p >= 2
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d));
        if !is_prime || p > MAX_PRIME {
            return Err(GradedError::InvalidField(format!(
                "{p} is not a prime <= {MAX_PRIME}"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den` in this field.
    pub fn ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(GradedError::InvalidPolynomial("zero denominator".into()));
        }
        match self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let reduce = |x: &BigInt| x.mod_floor(&m).to_u64().expect("reduced value fits");
                let d = Scalar::Fp {
                    value: reduce(den),
                    modulus: p,
                };
                let inv = d.inv().ok_or_else(|| {
                    GradedError::InvalidPolynomial(format!("denominator {den} vanishes modulo {p}"))
                })?;
                Ok(&Scalar::Fp {
                    value: reduce(num),
                    modulus: p,
                } * &inv)
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An element of a [`Field`]. Arithmetic between different fields panics;
/// public entry points check fields first and return `FieldMismatch`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, modulus } => {
                // Fermat: a^(p-2).
                let mut result = 1u64;
                let mut base = *value;
                let mut e = modulus - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % modulus;
                    }
                    base = base * base % modulus;
                    e >>= 1;
                }
                Scalar::Fp {
                    value: result,
                    modulus: *modulus,
                }
            }
        })
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut result = self.field().one();
        for _ in 0..e {
            result = &result * self;
        }
        result
    }

    /// Numerator and denominator (for prime fields: the canonical representative over 1).
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Q(q) => (q.numer().clone(), q.denom().clone()),
            Scalar::Fp { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }

    fn same_field(&self, other: &Scalar) -> Field {
        let f = self.field();
        assert_eq!(f, other.field(), "scalar arithmetic across fields");
        f
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Q(q) if q.is_negative() => write!(f, "-{}/{}", -q.numer(), q.denom()),
            Scalar::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => {
                self.same_field(rhs);
                Scalar::Fp {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => panic!("scalar arithmetic across fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => {
                self.same_field(rhs);
                Scalar::Fp {
                    value: a * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => panic!("scalar arithmetic across fields"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.int(3);
        let b = f.int(-2);
        assert_eq!(b, f.int(5));
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert_eq!(&a + &b, f.int(1));
        assert_eq!(&a - &b, f.int(5));
        assert_eq!(a.pow(6), f.one());
        assert_eq!(
            f.ratio(&BigInt::from(1), &BigInt::from(2)).unwrap(),
            f.int(4)
        );
        assert!(f.ratio(&BigInt::from(1), &BigInt::from(7)).is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational;
        let x = q.ratio(&BigInt::from(6), &BigInt::from(-4)).unwrap();
        assert_eq!(x.to_ratio(), (BigInt::from(-3), BigInt::from(2)));
        assert_eq!(x.to_string(), "-3/2");
        assert!(x.inv().unwrap() == q.ratio(&BigInt::from(-2), &BigInt::from(3)).unwrap());
    }

    #[test]
    fn field_validation() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(101).is_err());
        assert!(Field::prime(97).is_ok());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    #[should_panic(expected = "across fields")]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::Prime(3).one();
    }
}
