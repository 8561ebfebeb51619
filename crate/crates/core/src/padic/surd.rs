use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use super::{vp, Prime, Valuation};

/// An element `a + b√p` of `Q(√p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    prime: Prime,
    pub rational: BigRational,
    pub sqrt_coeff: BigRational,
}

impl Surd {
    pub fn new(prime: Prime, rational: BigRational, sqrt_coeff: BigRational) -> Self {
        Surd {
            prime,
            rational,
            sqrt_coeff,
        }
    }

    pub fn from_rational(prime: Prime, rational: BigRational) -> Self {
        Self::new(prime, rational, BigRational::zero())
    }

    pub fn zero(prime: Prime) -> Self {
        Self::from_rational(prime, BigRational::zero())
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.sqrt_coeff.is_zero()
    }

    /// `v_p(a + b√p) = min(v_p(a), v_p(b) + 1/2)`; the two never tie.
    pub fn valuation(&self) -> Valuation {
        let va = vp(&self.rational, self.prime);
        let vb = vp(&self.sqrt_coeff, self.prime).shift(Ratio::new(1, 2));
        va.min(vb)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Surd::new(self.prime, &self.rational * q, &self.sqrt_coeff * q)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        Surd::new(
            self.prime,
            &self.rational + &rhs.rational,
            &self.sqrt_coeff + &rhs.sqrt_coeff,
        )
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::new(self.prime, -&self.rational, -&self.sqrt_coeff)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let p = BigRational::from_integer(BigInt::from(self.prime.get()));
        Surd::new(
            self.prime,
            &self.rational * &rhs.rational + &self.sqrt_coeff * &rhs.sqrt_coeff * p,
            &self.rational * &rhs.sqrt_coeff + &self.sqrt_coeff * &rhs.rational,
        )
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt_coeff.is_zero() {
            write!(f, "{}", self.rational)
        } else if self.rational.is_zero() {
            write!(f, "{}*sqrt({})", self.sqrt_coeff, self.prime)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.sqrt_coeff, self.prime)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuation_of_surds() {
        let p = Prime::new(5).unwrap();
        assert_eq!(Surd::new(p, q(25, 1), q(1, 1)).valuation(), Valuation::half(1));
        assert_eq!(Surd::new(p, q(3, 1), q(1, 1)).valuation(), Valuation::int(0));
        assert_eq!(Surd::new(p, q(0, 1), q(1, 25)).valuation(), Valuation::half(-3));
        assert_eq!(Surd::zero(p).valuation(), Valuation::Infinite);
    }

    #[test]
    fn product_of_conjugates() {
        let p = Prime::new(7).unwrap();
        let a = Surd::new(p, q(2, 1), q(3, 1));
        let conj = Surd::new(p, q(2, 1), q(-3, 1));
        assert_eq!(&a * &conj, Surd::from_rational(p, q(4 - 9 * 7, 1)));
    }
}
