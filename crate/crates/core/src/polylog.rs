//! The branch `log_L` of the p-adic logarithm and poly·log functions
//! `Σ λ_i (z - z_i)^{n_i} log_L(z - z_i)`.
//!
//! `L` is kept as a formal symbol: every value computed here is affine in `L`, so it is
//! stored as an [`EValue`] `c_0 + c_1 L`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mahler::{self, MahlerSeries};
use crate::padic::{
    self, binom, factorial, harmonic_sum, reduce_mod_pn, teichmuller, vp, vp_finite, vp_int,
    PadicScalar, Prime, Valuation,
};

/// `constant + ell · L` with `L` an indeterminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EValue {
    pub constant: PadicScalar,
    pub ell: PadicScalar,
}

impl EValue {
    pub fn zero(p: Prime) -> Self {
        EValue {
            constant: PadicScalar::zero(p),
            ell: PadicScalar::zero(p),
        }
    }

    pub fn from_scalar(constant: PadicScalar) -> Self {
        let p = constant.prime();
        EValue {
            constant,
            ell: PadicScalar::zero(p),
        }
    }

    pub fn from_rationals(
        constant: &BigRational,
        ell: &BigRational,
        p: Prime,
        precision: u32,
    ) -> Result<Self> {
        Ok(EValue {
            constant: PadicScalar::from_rational(constant, p, precision)?,
            ell: PadicScalar::from_rational(ell, p, precision)?,
        })
    }

    pub fn prime(&self) -> Prime {
        self.constant.prime()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.ell.is_zero()
    }

    /// Smaller of the two coefficient valuations.
    pub fn valuation(&self) -> Valuation {
        self.constant.valuation().min(self.ell.valuation())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(EValue {
            constant: self.constant.checked_add(&other.constant)?,
            ell: self.ell.checked_add(&other.ell)?,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        EValue {
            constant: self.constant.mul_rational(q),
            ell: self.ell.mul_rational(q),
        }
    }

    pub fn mul_scalar(&self, s: &PadicScalar) -> Self {
        EValue {
            constant: &self.constant * s,
            ell: &self.ell * s,
        }
    }

    /// Product; fails if both factors involve `L`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !self.ell.is_zero() && !other.ell.is_zero() {
            return Err(Error::EllOverflow);
        }
        let constant = &self.constant * &other.constant;
        let ell = (&self.constant * &other.ell).checked_add(&(&self.ell * &other.constant))?;
        Ok(EValue { constant, ell })
    }

    /// Multiply by `√p^twice`.
    pub fn shift(&self, twice: i64) -> Self {
        EValue {
            constant: self.constant.shift(twice),
            ell: self.ell.shift(twice),
        }
    }

    /// Substitute a rational value for `L`.
    pub fn specialize(&self, l: &BigRational) -> Result<PadicScalar> {
        self.constant.checked_add(&self.ell.mul_rational(l))
    }

    /// Congruence modulo the maximal ideal: both coefficient differences have positive
    /// valuation.
    pub fn congruent_mod_pi(&self, other: &Self) -> Result<bool> {
        let d = self.checked_sub(other)?;
        Ok(d.constant.valuation().is_positive() && d.ell.valuation().is_positive())
    }
}

impl core::ops::Neg for &EValue {
    type Output = EValue;
    fn neg(self) -> EValue {
        EValue {
            constant: -&self.constant,
            ell: -&self.ell,
        }
    }
}

impl fmt::Display for EValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}]·L", self.constant, self.ell)
    }
}

/// `log` on `1 + pZ_p`, evaluated at the unit part of a nonzero rational.
///
/// Returns `(v_p(z), log(u))` where `z = p^v · ζ · u` with `ζ` a `(p-1)`-th root of unity.
fn log_unit_part(z: &BigRational, p: Prime, precision: u32) -> (i64, PadicScalar) {
    let v = vp_finite(z, p);
    let w = z * p.rational_pow(-v);
    if w.abs().is_one() {
        return (v, PadicScalar::zero(p));
    }
    let t_mod = |m: u32| -> BigInt {
        let modulus = p.pow(m);
        let wm = reduce_mod_pn(&w, p, m);
        let zeta = teichmuller(&wm, p, m);
        let zinv = padic::inverse_mod(&zeta, &modulus).expect("root of unity is a unit");
        (wm * zinv - BigInt::one()).mod_floor(&modulus)
    };
    // Find v_p(u - 1); it is finite because the only rational roots of unity are ±1.
    let mut m = precision + 4;
    let vt = loop {
        let t = t_mod(m);
        if !t.is_zero() {
            break vp_int(&t, p) as u32;
        }
        m *= 2;
    };
    // Stop once every further term k has valuation k·vt - v_p(k) >= vt + N.
    let target = vt + precision;
    let mut kmax = 1u64;
    let mut max_vpk = 0u32;
    while !(kmax * vt as u64 >= target as u64 + ilog(kmax, p) as u64 && kmax > 1) {
        kmax += 1;
    }
    for k in 1..=kmax {
        max_vpk = max_vpk.max(vp_int(&BigInt::from(k), p) as u32);
    }
    let work = target + max_vpk + 1;
    let t = t_mod(work);
    let out_mod = p.pow(target);
    let work_mod = p.pow(work);
    let mut sum = BigInt::zero();
    let mut tk = BigInt::one();
    for k in 1..kmax {
        tk = (&tk * &t).mod_floor(&work_mod);
        let kb = BigInt::from(k);
        let e = vp_int(&kb, p) as u32;
        let unit = &kb / p.pow(e);
        let term = (&tk / p.pow(e)) * padic::inverse_mod(&unit, &out_mod).expect("unit");
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let sum = sum.mod_floor(&out_mod);
    let s = vp_int(&sum, p) as u32;
    debug_assert_eq!(s, vt, "v_p(log(1+t)) = v_p(t) for odd p");
    let unit = &sum / p.pow(s);
    let log = PadicScalar::from_parts(p, 2 * s as i64, unit, target - s).expect("unit part");
    (v, log)
}

/// Smallest `e` with `p^e > k`, an upper bound for `v_p(k)` with slack.
fn ilog(k: u64, p: Prime) -> u32 {
    let mut e = 0;
    let mut q = 1u64;
    while q <= k {
        q = q.saturating_mul(p.get());
        e += 1;
    }
    e
}

/// `log_L(z) = v_p(z)·L + log(u)` for `z = p^{v_p(z)} ζ u`, `u ∈ 1 + pZ_p`.
pub fn log_branch(z: &BigRational, p: Prime, precision: u32) -> Result<EValue> {
    if precision == 0 {
        return Err(Error::InvalidPrecision(0));
    }
    if z.is_zero() {
        return Err(Error::LogOfZero);
    }
    let (v, log) = log_unit_part(z, p, precision);
    Ok(EValue {
        constant: log,
        ell: PadicScalar::from_int(v, p, precision)?,
    })
}

/// `d^j/dz^j [(z - z0)^n log_L(z - z0)]` at `z`.
pub fn polylog_derivative(
    n: u32,
    j: u32,
    z: &BigRational,
    z0: &BigRational,
    p: Prime,
    precision: u32,
) -> Result<EValue> {
    let mut acc = Accumulator::new(p, precision);
    acc.add_derivative(&BigRational::one(), n, j, z, z0)?;
    acc.finish(0)
}

/// Running sum `rational + ell·L + Σ log terms`; the rational parts stay exact.
struct Accumulator {
    p: Prime,
    precision: u32,
    rational: BigRational,
    ell: BigRational,
    log: PadicScalar,
}

impl Accumulator {
    fn new(p: Prime, precision: u32) -> Self {
        Accumulator {
            p,
            precision,
            rational: BigRational::zero(),
            ell: BigRational::zero(),
            log: PadicScalar::zero(p),
        }
    }

    /// Add `coeff · d^j/dz^j [(z - z0)^n log_L(z - z0)]`.
    fn add_derivative(
        &mut self,
        coeff: &BigRational,
        n: u32,
        j: u32,
        z: &BigRational,
        z0: &BigRational,
    ) -> Result<()> {
        if j > n {
            return Err(Error::OutOfRange("derivative order exceeds exponent".into()));
        }
        let d = z - z0;
        if d.is_zero() {
            if n > j {
                return Ok(());
            }
            return Err(Error::SingularDerivative { exponent: n, order: j });
        }
        let falling = BigRational::from_integer(factorial(n as u64) / factorial((n - j) as u64));
        let power = num_traits::pow(d.clone(), (n - j) as usize);
        let c = coeff * falling * &power;
        if c.is_zero() {
            return Ok(());
        }
        let harmonic = harmonic_sum(n) - harmonic_sum(n - j);
        self.rational += &c * harmonic;
        let (v, log) = log_unit_part(&d, self.p, self.precision);
        self.ell += &c * BigRational::from_integer(BigInt::from(v));
        self.log = self.log.checked_add(&log.mul_rational(&c))?;
        Ok(())
    }

    fn finish(self, shift: i64) -> Result<EValue> {
        let constant =
            PadicScalar::from_rational(&self.rational, self.p, self.precision)?.checked_add(&self.log)?;
        let ell = PadicScalar::from_rational(&self.ell, self.p, self.precision)?;
        Ok(EValue { constant, ell }.shift(shift))
    }
}

/// One summand `λ (z - z0)^n log_L(z - z0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLogTerm {
    pub lambda: BigRational,
    pub center: BigRational,
    pub exponent: u32,
}

/// `p^{scale/2} · Σ λ_i (z - z_i)^{n_i} log_L(z - z_i)` attached to a weight `k = r + 2`.
///
/// The overall factor `p^x` with `x ∈ (1/2)Z` is kept apart from the rational `λ_i` so the
/// polynomial part stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyLogFunction {
    prime: Prime,
    r: u32,
    twice_scale: i64,
    terms: Vec<PolyLogTerm>,
}

impl PolyLogFunction {
    /// Each exponent must satisfy `r/2 < n <= r`.
    pub fn new(prime: Prime, r: u32, twice_scale: i64, terms: Vec<PolyLogTerm>) -> Result<Self> {
        for t in &terms {
            if 2 * t.exponent <= r || t.exponent > r {
                return Err(Error::OutOfRange(alloc::format!(
                    "exponent {} outside ({}/2, {}]",
                    t.exponent,
                    r,
                    r
                )));
            }
        }
        Ok(PolyLogFunction {
            prime,
            r,
            twice_scale,
            terms,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> &[PolyLogTerm] {
        &self.terms
    }

    /// `x` in the overall factor `p^x`.
    pub fn scale(&self) -> Ratio<i64> {
        Ratio::new(self.twice_scale, 2)
    }

    pub fn twice_scale(&self) -> i64 {
        self.twice_scale
    }

    /// `g^{(j)}(z) / j!`, summed termwise.
    pub fn taylor_coefficient(&self, z: &BigRational, j: u32, precision: u32) -> Result<EValue> {
        let mut acc = Accumulator::new(self.prime, precision);
        let jfact = BigRational::from_integer(factorial(j as u64));
        for t in &self.terms {
            acc.add_derivative(&(&t.lambda / &jfact), t.exponent, j, z, &t.center)?;
        }
        acc.finish(self.twice_scale)
    }

    /// Coefficients (lowest degree first) of `Σ λ_i (z - z_i)^{n_i}`, without the `p^x`.
    pub fn polynomial_part(&self) -> Vec<BigRational> {
        let top = self.terms.iter().map(|t| t.exponent).max().unwrap_or(0) as usize;
        let mut coeffs = vec![BigRational::zero(); top + 1];
        for t in &self.terms {
            let n = t.exponent as u64;
            let minus_center = -&t.center;
            for (k, slot) in coeffs.iter_mut().enumerate().take(n as usize + 1) {
                let c = BigRational::from_integer(binom(n as i64, k as u64))
                    * num_traits::pow(minus_center.clone(), (n as usize) - k);
                *slot += &t.lambda * c;
            }
        }
        coeffs
    }
}

/// `g(z)`, with the value of `(z - z_i)^n log_L(z - z_i)` at `z = z_i` taken to be 0.
pub fn polylog_eval(f: &PolyLogFunction, z: &BigRational, precision: u32) -> Result<EValue> {
    f.taylor_coefficient(z, 0, precision)
}

/// Outcome of the degree test on the polynomial part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub holds: bool,
    /// Degree of the polynomial part; `None` when it vanishes identically.
    pub degree: Option<i64>,
}

/// Whether `deg Σ λ_i (z - z_i)^{n_i} < r/2`.
pub fn degree_condition_check(f: &PolyLogFunction) -> DegreeCheck {
    let coeffs = f.polynomial_part();
    let degree = coeffs.iter().rposition(|c| !c.is_zero()).map(|d| d as i64);
    let holds = degree.is_none_or(|d| 2 * d < f.r as i64);
    DegreeCheck { holds, degree }
}

/// Decay of `v_p(a_n) - s·l(n)` for the Mahler coefficients of a specialized poly·log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecayReport {
    pub weighted: Vec<Valuation>,
    /// Minimum over `n < p`.
    pub head_min: Valuation,
    /// Minimum over the second half of the window.
    pub trailing_min: Valuation,
}

/// Specialize `L`, take `window` Mahler coefficients and report their weighted valuations.
pub fn csmooth_diagnostic(
    f: &PolyLogFunction,
    s: Ratio<i64>,
    l: &BigRational,
    window: usize,
    precision: u32,
) -> Result<DecayReport> {
    for t in &f.terms {
        if vp(&t.center, f.prime) < Valuation::int(0) {
            return Err(Error::OutOfRange("centers must lie in Z_p".into()));
        }
    }
    let series = mahler::mahler_coeffs(
        f.prime,
        |x: u64| {
            polylog_eval(f, &BigRational::from_integer(BigInt::from(x)), precision)?.specialize(l)
        },
        window,
    )?;
    Ok(decay_report(&series, s))
}

fn decay_report(series: &MahlerSeries, s: Ratio<i64>) -> DecayReport {
    let p = series.prime().get() as usize;
    let weighted: Vec<Valuation> = series
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, a)| {
            let l = mahler::branch_length(n as u64, series.prime()) as i64;
            a.valuation().shift(-s * l)
        })
        .collect();
    let head_min = weighted.iter().take(p).copied().min().unwrap_or(Valuation::Infinite);
    let trailing_min = weighted[weighted.len() / 2..]
        .iter()
        .copied()
        .min()
        .unwrap_or(Valuation::Infinite);
    DecayReport {
        weighted,
        head_min,
        trailing_min,
    }
}
