use core::cmp::Ordering;
use core::fmt;
use core::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use super::{inverse_mod, reduce_mod_pn, vp_finite, vp_int, Prime, Valuation};
use crate::error::{Error, Result};

/// An element of `E ⊇ Q_p(√p)` of the form `√p^t · u` with `u ∈ Z_p^×` known modulo `p^N`.
///
/// Zero carries the valuation down to which it is known to vanish: exact zeros are zero to
/// infinite order, while a sum that cancels completely at the working precision is zero
/// only up to the absolute precision of its operands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    prime: Prime,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Zero modulo `√p^known_to`; `None` means exactly zero.
    Zero { known_to: Option<i64> },
    /// `√p^twice_val · unit`, unit in `[1, p^precision)` and prime to `p`.
    Nonzero {
        twice_val: i64,
        unit: BigInt,
        precision: u32,
    },
}

impl PadicScalar {
    pub fn zero(prime: Prime) -> Self {
        PadicScalar {
            prime,
            repr: Repr::Zero { known_to: None },
        }
    }

    pub fn one(prime: Prime, precision: u32) -> Self {
        Self::from_parts(prime, 0, BigInt::one(), precision).expect("1 is a unit")
    }

    /// `√p^twice_val · unit`. Fails if `unit` is divisible by `p` or `precision` is 0.
    pub fn from_parts(prime: Prime, twice_val: i64, unit: BigInt, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let unit = unit.mod_floor(&prime.pow(precision));
        if unit.mod_floor(&prime.big()).is_zero() {
            return Err(Error::OutOfRange("unit part divisible by p".into()));
        }
        Ok(PadicScalar {
            prime,
            repr: Repr::Nonzero {
                twice_val,
                unit,
                precision,
            },
        })
    }

    pub fn from_rational(x: &BigRational, prime: Prime, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        if x.is_zero() {
            return Ok(Self::zero(prime));
        }
        let v = vp_finite(x, prime);
        let unit = reduce_mod_pn(&(x * prime.rational_pow(-v)), prime, precision);
        Self::from_parts(prime, 2 * v, unit, precision)
    }

    pub fn from_int(x: i64, prime: Prime, precision: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(BigInt::from(x)), prime, precision)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// The valuation, or for an inexact zero the valuation to which it is known to vanish.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { known_to: None } => Valuation::Infinite,
            Repr::Zero {
                known_to: Some(t),
            } => Valuation::Finite(Ratio::new(*t, 2)),
            Repr::Nonzero { twice_val, .. } => Valuation::Finite(Ratio::new(*twice_val, 2)),
        }
    }

    /// Twice the valuation for nonzero elements.
    pub fn twice_valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Nonzero { twice_val, .. } => Some(*twice_val),
            Repr::Zero { .. } => None,
        }
    }

    pub fn unit(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Nonzero { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    /// Relative precision `N`; `None` for zero.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Nonzero { precision, .. } => Some(*precision),
            Repr::Zero { .. } => None,
        }
    }

    /// Twice the absolute precision (`None` for an exact zero).
    fn twice_absolute(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { known_to } => *known_to,
            Repr::Nonzero {
                twice_val,
                precision,
                ..
            } => Some(twice_val + 2 * *precision as i64),
        }
    }

    /// Image in the residue field `F_p`; fails for negative valuation.
    pub fn residue(&self) -> Result<u64> {
        match &self.repr {
            Repr::Zero { .. } => Ok(0),
            Repr::Nonzero {
                twice_val, unit, ..
            } => match twice_val.cmp(&0) {
                Ordering::Less => Err(Error::OutOfRange("residue of a non-integral element".into())),
                Ordering::Equal => Ok(unit.mod_floor(&self.prime.big()).to_u64().expect("residue")),
                Ordering::Greater => Ok(0),
            },
        }
    }

    /// Multiply by `√p^twice`.
    pub fn shift(&self, twice: i64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Zero { known_to } => *known_to = known_to.map(|t| t + twice),
            Repr::Nonzero { twice_val, .. } => *twice_val += twice,
        }
        out
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.prime);
        }
        match &self.repr {
            Repr::Zero { .. } => {
                let v = vp_finite(q, self.prime);
                self.shift(2 * v)
            }
            Repr::Nonzero { precision, .. } => {
                let other =
                    Self::from_rational(q, self.prime, *precision).expect("nonzero precision");
                self * &other
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Nonzero {
                twice_val,
                unit,
                precision,
            } => {
                let modulus = self.prime.pow(*precision);
                let inv = inverse_mod(unit, &modulus).expect("unit is invertible");
                Self::from_parts(self.prime, -twice_val, inv, *precision)
            }
        }
    }

    /// Sum, failing when the two valuations differ by a half-integer.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.prime, other.prime, "mixing scalars over different primes");
        let (a, b) = match (&self.repr, &other.repr) {
            (Repr::Zero { .. }, _) | (_, Repr::Zero { .. }) => return Ok(self.add_with_zero(other)),
            (
                Repr::Nonzero {
                    twice_val: ta,
                    unit: ua,
                    ..
                },
                Repr::Nonzero {
                    twice_val: tb,
                    unit: ub,
                    ..
                },
            ) => {
                if (ta - tb).rem_euclid(2) != 0 {
                    return Err(Error::MixedParity);
                }
                if ta <= tb {
                    ((*ta, ua), (*tb, ub))
                } else {
                    ((*tb, ub), (*ta, ua))
                }
            }
        };
        let abs = self
            .twice_absolute()
            .unwrap()
            .min(other.twice_absolute().unwrap());
        let (t_low, u_low) = a;
        let (t_high, u_high) = b;
        // Width (in powers of p) of the window between the lower valuation and the
        // absolute precision of the sum.
        let width = (abs - t_low).div_euclid(2);
        if width <= 0 {
            return Ok(PadicScalar {
                prime: self.prime,
                repr: Repr::Zero {
                    known_to: Some(abs),
                },
            });
        }
        let gap = ((t_high - t_low) / 2) as u32;
        let modulus = self.prime.pow(width as u32);
        let s = (u_low + u_high * self.prime.pow(gap)).mod_floor(&modulus);
        if s.is_zero() {
            return Ok(PadicScalar {
                prime: self.prime,
                repr: Repr::Zero {
                    known_to: Some(t_low + 2 * width),
                },
            });
        }
        let k = vp_int(&s, self.prime);
        let unit = s / self.prime.pow(k as u32);
        Self::from_parts(
            self.prime,
            t_low + 2 * k as i64,
            unit,
            (width as u64 - k) as u32,
        )
    }

    fn add_with_zero(&self, other: &Self) -> Self {
        let (zero, x) = if self.is_zero() {
            (self, other)
        } else {
            (other, self)
        };
        let Repr::Zero { known_to } = zero.repr else {
            unreachable!()
        };
        let Some(limit) = known_to else {
            return x.clone();
        };
        match &x.repr {
            Repr::Zero { known_to: k2 } => PadicScalar {
                prime: self.prime,
                repr: Repr::Zero {
                    known_to: Some(k2.map_or(limit, |k| k.min(limit))),
                },
            },
            Repr::Nonzero {
                twice_val,
                unit,
                precision,
            } => {
                let room = (limit - twice_val).div_euclid(2);
                if room <= 0 {
                    PadicScalar {
                        prime: self.prime,
                        repr: Repr::Zero {
                            known_to: Some(limit.min(*twice_val)),
                        },
                    }
                } else if room < *precision as i64 {
                    Self::from_parts(self.prime, *twice_val, unit.clone(), room as u32)
                        .expect("truncation keeps a unit")
                } else {
                    x.clone()
                }
            }
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Whether `self - other` vanishes at the shared precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.checked_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Exact rational value when the valuation is integral: `p^v · unit`, using the
    /// representative of the unit in `[0, p^N)`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Zero { .. } => Some(BigRational::zero()),
            Repr::Nonzero {
                twice_val, unit, ..
            } if twice_val % 2 == 0 => Some(
                BigRational::from_integer(unit.clone()) * self.prime.rational_pow(twice_val / 2),
            ),
            Repr::Nonzero { .. } => None,
        }
    }
}

impl<'a> Mul<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        assert_eq!(self.prime, rhs.prime, "mixing scalars over different primes");
        match (&self.repr, &rhs.repr) {
            (
                Repr::Nonzero {
                    twice_val: ta,
                    unit: ua,
                    precision: na,
                },
                Repr::Nonzero {
                    twice_val: tb,
                    unit: ub,
                    precision: nb,
                },
            ) => {
                let n = (*na).min(*nb);
                PadicScalar::from_parts(self.prime, ta + tb, ua * ub, n).expect("product of units")
            }
            (Repr::Zero { known_to }, Repr::Nonzero { twice_val, .. })
            | (Repr::Nonzero { twice_val, .. }, Repr::Zero { known_to }) => PadicScalar {
                prime: self.prime,
                repr: Repr::Zero {
                    known_to: known_to.map(|k| k + twice_val),
                },
            },
            (Repr::Zero { known_to: ka }, Repr::Zero { known_to: kb }) => PadicScalar {
                prime: self.prime,
                repr: Repr::Zero {
                    known_to: match (ka, kb) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    },
                },
            },
        }
    }
}

impl Mul for PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: PadicScalar) -> PadicScalar {
        &self * &rhs
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                twice_val,
                unit,
                precision,
            } => PadicScalar::from_parts(self.prime, *twice_val, -unit, *precision)
                .expect("negated unit"),
        }
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        -&self
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { known_to: None } => f.write_str("0"),
            Repr::Zero {
                known_to: Some(t),
            } => write!(f, "O(p^{})", Valuation::Finite(Ratio::new(*t, 2))),
            Repr::Nonzero {
                twice_val,
                unit,
                precision,
            } => write!(
                f,
                "p^{} * {} (mod p^{})",
                Valuation::Finite(Ratio::new(*twice_val, 2)),
                unit,
                precision
            ),
        }
    }
}
