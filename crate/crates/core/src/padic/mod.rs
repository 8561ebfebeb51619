//! Exact rational and truncated p-adic arithmetic.
//!
//! Rationals are `num_rational::BigRational`. Valuations live in `(1/2)Z ∪ {+∞}` so that
//! the element `√p` of the coefficient field is accounted for purely by bookkeeping.

mod scalar;
mod surd;

pub use scalar::PadicScalar;
pub use surd::Surd;

use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default relative precision `N` (unit parts are tracked modulo `p^N`).
pub const DEFAULT_PRECISION: u32 = 8;

/// An odd prime `p >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    /// `p^e` as a rational, for any integer `e`.
    pub fn rational_pow(self, e: i64) -> BigRational {
        let m = BigRational::from_integer(self.pow(e.unsigned_abs() as u32));
        if e >= 0 {
            m
        } else {
            m.recip()
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A valuation in `(1/2)Z ∪ {+∞}` (or any rational, for weighted Mahler valuations).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn int(v: i64) -> Self {
        Valuation::Finite(Ratio::from_integer(v))
    }

    pub fn half(twice: i64) -> Self {
        Valuation::Finite(Ratio::new(twice, 2))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }

    /// Shift by a finite amount; `+∞` stays `+∞`.
    pub fn shift(self, by: Ratio<i64>) -> Self {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + by),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Valuation::Finite(v) => *v > Ratio::from_integer(0),
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Valuation::Finite(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl core::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let pb = p.big();
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// `v_p(x)`, normalized so that `v_p(p) = 1`.
pub fn vp(x: &BigRational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = vp_int(x.numer(), p) as i64;
    let den = vp_int(x.denom(), p) as i64;
    Valuation::int(num - den)
}

/// Integer valuation of a nonzero rational.
pub(crate) fn vp_finite(x: &BigRational, p: Prime) -> i64 {
    vp(x, p)
        .finite()
        .map(|v| v.to_integer())
        .expect("valuation of a nonzero rational")
}

/// The partial harmonic sum `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic_sum(n: u32) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::one(), BigInt::from(i))
    })
}

/// The integers `v_- < r/2 < v_+` closest to `r/2`.
pub fn v_plus_minus(r: u32) -> (u32, u32) {
    assert!(r >= 1, "v_plus_minus needs r >= 1");
    if r % 2 == 0 {
        (r / 2 - 1, r / 2 + 1)
    } else {
        ((r - 1) / 2, (r + 1) / 2)
    }
}

/// Teichmüller representative of `a` modulo `p^n`, as an integer in `[0, p^n)`.
pub fn teichmuller(a: &BigInt, p: Prime, n: u32) -> BigInt {
    let modulus = p.pow(n);
    let mut x = a.mod_floor(&modulus);
    if x.mod_floor(&p.big()).is_zero() {
        return BigInt::zero();
    }
    // x -> x^p converges p-adically with one extra digit per step.
    for _ in 0..=n {
        let next = x.modpow(&p.big(), &modulus);
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// `v_p(j!) = (j - s_p(j)) / (p - 1)` where `s_p` is the base-`p` digit sum.
pub fn vp_factorial(j: u64, p: Prime) -> u64 {
    let mut digit_sum = 0;
    let mut m = j;
    while m > 0 {
        digit_sum += m % p.get();
        m /= p.get();
    }
    (j - digit_sum) / (p.get() - 1)
}

/// Binomial coefficient `C(n, k)`, extended to negative `n` through the polynomial
/// `n (n-1) ... (n-k+1) / k!`.
pub fn binom(n: i64, k: u64) -> BigInt {
    if n >= 0 && (k as i128) > n as i128 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n as i128 - i as i128);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `C(x, n)` for a rational `x`.
pub fn binom_rational(x: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..n {
        acc *= x - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Inverse of a unit modulo `m`.
pub(crate) fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Image of a `p`-integral rational in `Z / p^n`.
pub fn reduce_mod_pn(x: &BigRational, p: Prime, n: u32) -> BigInt {
    let modulus = p.pow(n);
    let den_inv = inverse_mod(&x.denom().mod_floor(&modulus), &modulus)
        .expect("denominator must be prime to p");
    (x.numer() * den_inv).mod_floor(&modulus)
}

/// Residue in `F_p` of a `p`-integral rational.
pub fn residue(x: &BigRational, p: Prime) -> u64 {
    reduce_mod_pn(x, p, 1).to_u64().expect("residue fits in u64")
}

/// The base-`p` digits of `x` at positions `e < below`, i.e. the class of `x` in
/// `Q_p / p^below Z_p`. Only nonzero digits are stored.
pub fn digits_below(x: &BigRational, p: Prime, below: i64) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    if x.is_zero() {
        return out;
    }
    let v = vp_finite(x, p);
    if v >= below {
        return out;
    }
    let unit = x * p.rational_pow(-v);
    let width = (below - v) as u32;
    let mut rep = reduce_mod_pn(&unit, p, width);
    let pb = p.big();
    let mut e = v;
    while !rep.is_zero() {
        let (q, d) = rep.div_rem(&pb);
        if !d.is_zero() {
            out.insert(e, d.to_u64().expect("digit"));
        }
        rep = q;
        e += 1;
    }
    out
}

/// Inverse of [`digits_below`]: `Σ d_e p^e`.
pub fn from_digits(digits: &BTreeMap<i64, u64>, p: Prime) -> BigRational {
    digits.iter().fold(BigRational::zero(), |acc, (&e, &d)| {
        acc + BigRational::from_integer(BigInt::from(d)) * p.rational_pow(e)
    })
}

/// Canonical representative of `x + p^h Z_p`: the rational with the same digits below `h`.
pub fn reduce_coset(x: &BigRational, p: Prime, h: i64) -> BigRational {
    from_digits(&digits_below(x, p, h), p)
}
