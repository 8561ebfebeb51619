//! The residue field `F_p` and its quadratic extension `F_{p^2}`.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::padic::Prime;

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    p: u64,
    v: u64,
}

impl Fp {
    pub fn new(p: Prime, v: i64) -> Self {
        let m = p.get() as i128;
        Fp {
            p: p.get(),
            v: (v as i128).rem_euclid(m) as u64,
        }
    }

    pub fn from_u64(p: Prime, v: u64) -> Self {
        Fp {
            p: p.get(),
            v: v % p.get(),
        }
    }

    pub fn zero(p: Prime) -> Self {
        Fp::from_u64(p, 0)
    }

    pub fn one(p: Prime) -> Self {
        Fp::from_u64(p, 1)
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.v
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp { p: self.p, v: 1 % self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(self.pow(self.p - 2))
        }
    }

    /// Legendre symbol test; zero counts as a square.
    pub fn is_square(self) -> bool {
        self.v == 0 || self.pow((self.p - 1) / 2).v == 1
    }

    /// A square root (Tonelli–Shanks), the smaller of the two representatives.
    pub fn sqrt(self) -> Option<Self> {
        if self.v == 0 {
            return Some(self);
        }
        if !self.is_square() {
            return None;
        }
        let p = self.p;
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = Fp { p, v: 2 };
        while z.is_square() {
            z.v += 1;
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.v != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.v != 1 {
                t2 = t2 * t2;
                i += 1;
            }
            let b = c.pow(1 << (m - i - 1));
            m = i;
            c = b * b;
            t = t * c;
            r = r * b;
        }
        let other = -r;
        Some(if other.v < r.v { other } else { r })
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            p: self.p,
            v: ((self.v as u128 + rhs.v as u128) % self.p as u128) as u64,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            p: self.p,
            v: (self.p - self.v) % self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            p: self.p,
            v: ((self.v as u128 * rhs.v as u128) % self.p as u128) as u64,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// The smallest quadratic non-residue mod `p`; `F_{p^2} = F_p(θ)` with `θ^2` equal to it.
pub fn smallest_nonresidue(p: Prime) -> u64 {
    (2..p.get())
        .find(|&n| !Fp::from_u64(p, n).is_square())
        .expect("odd primes have non-residues")
}

/// An element `x + yθ` of `F_{p^2}`, `θ^2 = smallest_nonresidue(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2 {
    pub x: Fp,
    pub y: Fp,
    theta_sq: u64,
}

impl Fp2 {
    pub fn new(x: Fp, y: Fp) -> Self {
        let p = Prime::new(x.p).expect("field element over a valid prime");
        Fp2 {
            x,
            y,
            theta_sq: smallest_nonresidue(p),
        }
    }

    pub fn from_fp(x: Fp) -> Self {
        Fp2::new(x, Fp { p: x.p, v: 0 })
    }

    pub fn is_in_fp(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn theta_squared(&self) -> u64 {
        self.theta_sq
    }

    /// `x^2 - θ^2 y^2`, the norm to `F_p`.
    pub fn norm(&self) -> Fp {
        let n = Fp {
            p: self.x.p,
            v: self.theta_sq,
        };
        self.x * self.x - n * self.y * self.y
    }

    pub fn conj(&self) -> Self {
        Fp2 {
            y: -self.y,
            ..*self
        }
    }

    pub fn inv(&self) -> Option<Self> {
        let ninv = self.norm().inv()?;
        let c = self.conj();
        Some(Fp2 {
            x: c.x * ninv,
            y: c.y * ninv,
            theta_sq: self.theta_sq,
        })
    }

    /// Serialized as `[x, y]`.
    pub fn pair(&self) -> [u64; 2] {
        [self.x.v, self.y.v]
    }
}

impl Add for Fp2 {
    type Output = Fp2;
    fn add(self, rhs: Fp2) -> Fp2 {
        Fp2 {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            ..self
        }
    }
}

impl Sub for Fp2 {
    type Output = Fp2;
    fn sub(self, rhs: Fp2) -> Fp2 {
        Fp2 {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
            ..self
        }
    }
}

impl Mul for Fp2 {
    type Output = Fp2;
    fn mul(self, rhs: Fp2) -> Fp2 {
        let n = Fp {
            p: self.x.p,
            v: self.theta_sq,
        };
        Fp2 {
            x: self.x * rhs.x + n * self.y * rhs.y,
            y: self.x * rhs.y + self.y * rhs.x,
            ..self
        }
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{}+{}t", self.x, self.y)
        }
    }
}

/// The roots of `λ^2 - cλ + 1`, as `(λ, λ^{-1})`.
///
/// Split case: the smaller representative first. Inert case: the root `c/2 + yθ` with the
/// smaller `y` first. When `c = ±2` both entries equal `±1`.
pub fn reciprocal_roots(c: Fp) -> (Fp2, Fp2) {
    let p = Prime::new(c.p).expect("valid prime");
    let two_inv = Fp::from_u64(p, 2).inv().expect("p odd");
    let four = Fp::from_u64(p, 4);
    let disc = c * c - four;
    let half_c = c * two_inv;
    if let Some(s) = disc.sqrt() {
        let a = (c + s) * two_inv;
        let b = (c - s) * two_inv;
        let (lo, hi) = if a.v <= b.v { (a, b) } else { (b, a) };
        return (Fp2::from_fp(lo), Fp2::from_fp(hi));
    }
    let n = Fp::from_u64(p, smallest_nonresidue(p));
    // disc / 4 = n y^2
    let y = (disc * two_inv * two_inv * n.inv().expect("nonzero"))
        .sqrt()
        .expect("disc / n is a square when disc is not");
    let root = Fp2::new(half_c, y);
    (root, root.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn fp_basics() {
        let f = |v| Fp::new(p(7), v);
        assert_eq!(f(3) * f(5), f(1));
        assert_eq!(f(-1), f(6));
        assert_eq!(f(3).inv(), Some(f(5)));
        assert_eq!(f(0).inv(), None);
        assert!(f(2).is_square());
        assert!(!f(3).is_square());
        assert_eq!(f(2).sqrt(), Some(f(3)));
    }

    #[test]
    fn sqrt_is_correct_for_all_residues() {
        for pv in [5u64, 7, 11, 13, 17, 41] {
            let pr = p(pv);
            for a in 0..pv {
                let x = Fp::from_u64(pr, a);
                match x.sqrt() {
                    Some(s) => assert_eq!(s * s, x),
                    None => assert!(!x.is_square()),
                }
            }
        }
    }

    #[test]
    fn nonresidues() {
        assert_eq!(smallest_nonresidue(p(5)), 2);
        assert_eq!(smallest_nonresidue(p(7)), 3);
        assert_eq!(smallest_nonresidue(p(11)), 2);
    }

    #[test]
    fn roots_of_lambda_plus_inverse_zero() {
        // λ + λ^{-1} = 0 over F_5: λ^2 = -1 = 4, so λ = 2 or 3 already in F_5.
        let (a, b) = reciprocal_roots(Fp::new(p(5), 0));
        assert_eq!(a, Fp2::from_fp(Fp::new(p(5), 2)));
        assert_eq!(b, Fp2::from_fp(Fp::new(p(5), 3)));
        // Over F_7, -1 is not a square; the root lives in F_49.
        let (a, b) = reciprocal_roots(Fp::new(p(7), 0));
        assert!(!a.is_in_fp());
        assert_eq!(a * a, Fp2::from_fp(Fp::new(p(7), -1)));
        assert_eq!(a * b, Fp2::from_fp(Fp::one(p(7))));
    }

    #[test]
    fn repeated_roots() {
        let (a, b) = reciprocal_roots(Fp::new(p(7), 2));
        assert_eq!(a, Fp2::from_fp(Fp::one(p(7))));
        assert_eq!(b, a);
        let (a, _) = reciprocal_roots(Fp::new(p(7), -2));
        assert_eq!(a, Fp2::from_fp(Fp::new(p(7), -1)));
    }

    proptest! {
        #[test]
        fn reciprocal_roots_satisfy_the_quadratic(pi in 0usize..4, c in 0u64..100) {
            let pr = p([5u64, 7, 11, 13][pi]);
            let c = Fp::from_u64(pr, c);
            let (l, m) = reciprocal_roots(c);
            let one = Fp2::from_fp(Fp::one(pr));
            prop_assert_eq!(l * m, one);
            prop_assert_eq!(l + m, Fp2::from_fp(c));
            prop_assert_eq!(l.inv().unwrap(), m);
        }

        #[test]
        fn fp2_inverse(pi in 0usize..3, x in 0u64..50, y in 0u64..50) {
            let pr = p([5u64, 7, 11][pi]);
            let a = Fp2::new(Fp::from_u64(pr, x), Fp::from_u64(pr, y));
            prop_assume!(!a.is_zero());
            prop_assert_eq!(a * a.inv().unwrap(), Fp2::from_fp(Fp::one(pr)));
        }
    }
}
