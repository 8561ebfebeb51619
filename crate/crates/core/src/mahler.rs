//! Finite expansions of functions on `Z_p` in the Mahler basis `C(x, n)` and in the
//! wavelet basis of indicators `1_{i + p^{l(i)} Z_p}`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;

use crate::error::Result;
use crate::padic::{binom, PadicScalar, Prime, Valuation};
use crate::polylog::EValue;

/// `l(i)`: the smallest `n >= 0` with `p^n > i`.
pub fn branch_length(i: u64, p: Prime) -> u32 {
    let mut n = 0;
    let mut pn: u128 = 1;
    while pn <= i as u128 {
        pn *= p.get() as u128;
        n += 1;
    }
    n
}

/// `Σ_{n < N} a_n C(x, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerSeries {
    prime: Prime,
    coefficients: Vec<PadicScalar>,
    /// Intended smoothness class, informational only.
    pub r_hint: Option<Ratio<i64>>,
}

impl MahlerSeries {
    pub fn new(prime: Prime, coefficients: Vec<PadicScalar>) -> Self {
        MahlerSeries {
            prime,
            coefficients,
            r_hint: None,
        }
    }

    pub fn from_rationals(prime: Prime, coefficients: &[BigRational], precision: u32) -> Result<Self> {
        let coefficients = coefficients
            .iter()
            .map(|c| PadicScalar::from_rational(c, prime, precision))
            .collect::<Result<_>>()?;
        Ok(Self::new(prime, coefficients))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficient-wise agreement at the shared precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.len().max(other.len());
        let zero = PadicScalar::zero(self.prime);
        (0..n).all(|i| {
            let a = self.coefficients.get(i).unwrap_or(&zero);
            let b = other.coefficients.get(i).unwrap_or(&zero);
            a.agrees_with(b)
        })
    }
}

/// `a_n = Σ_i (-1)^i C(n, i) g(n - i)` for `n < count`, via iterated forward differences.
pub fn mahler_coeffs<F>(p: Prime, mut g: F, count: usize) -> Result<MahlerSeries>
where
    F: FnMut(u64) -> Result<PadicScalar>,
{
    let mut row = (0..count as u64).map(&mut g).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(count);
    while !row.is_empty() {
        out.push(row[0].clone());
        row = row
            .windows(2)
            .map(|w| w[1].checked_sub(&w[0]))
            .collect::<Result<_>>()?;
    }
    Ok(MahlerSeries::new(p, out))
}

/// `Σ a_n C(x, n)`.
pub fn evaluate(s: &MahlerSeries, x: i64) -> Result<PadicScalar> {
    let mut acc = PadicScalar::zero(s.prime);
    for (n, a) in s.coefficients.iter().enumerate() {
        let c = binom(x, n as u64);
        if c.is_zero() {
            continue;
        }
        acc = acc.checked_add(&a.mul_rational(&BigRational::from_integer(c)))?;
    }
    Ok(acc)
}

/// `min_n v_p(a_n)`, the sup-norm valuation.
pub fn c0_valuation(s: &MahlerSeries) -> Valuation {
    s.coefficients
        .iter()
        .map(PadicScalar::valuation)
        .min()
        .unwrap_or(Valuation::Infinite)
}

/// `inf_n v_p(a_n) - r·l(n)` over the computed window, with the same minimum restricted to
/// the second half of the window as a decay indicator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrValuation {
    pub infimum: Valuation,
    pub trailing_min: Valuation,
}

pub fn cr_valuation(s: &MahlerSeries, r: Ratio<i64>) -> CrValuation {
    let weighted: Vec<Valuation> = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, a)| a.valuation().shift(-r * branch_length(n as u64, s.prime) as i64))
        .collect();
    let half = weighted.len() / 2;
    CrValuation {
        infimum: weighted.iter().copied().min().unwrap_or(Valuation::Infinite),
        trailing_min: weighted[half..].iter().copied().min().unwrap_or(Valuation::Infinite),
    }
}

/// Drop the first `k` coefficients: the `k`-th forward difference.
pub fn forward_difference(s: &MahlerSeries, k: usize) -> MahlerSeries {
    MahlerSeries {
        prime: s.prime,
        coefficients: s.coefficients.iter().skip(k).cloned().collect(),
        r_hint: s.r_hint,
    }
}

/// `Σ_{i < M} b_i 1_{i + p^{l(i)} Z_p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletSeries {
    prime: Prime,
    coefficients: Vec<PadicScalar>,
}

impl WaveletSeries {
    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coefficients
    }

    /// Value at a nonnegative integer.
    pub fn evaluate(&self, x: u64) -> Result<PadicScalar> {
        let mut acc = PadicScalar::zero(self.prime);
        for (j, b) in self.coefficients.iter().enumerate() {
            if indicator_contains(j as u64, x, self.prime) {
                acc = acc.checked_add(b)?;
            }
        }
        Ok(acc)
    }
}

/// Whether `x ∈ j + p^{l(j)} Z_p`.
fn indicator_contains(j: u64, x: u64, p: Prime) -> bool {
    let modulus = (p.get() as u128).pow(branch_length(j, p));
    (x as u128) % modulus == (j as u128) % modulus
}

/// Solve `g(i) = Σ_{j <= i, i ≡ j mod p^{l(j)}} b_j` for `i < count`.
pub fn wavelet_decompose<F>(p: Prime, mut g: F, count: usize) -> Result<WaveletSeries>
where
    F: FnMut(u64) -> Result<PadicScalar>,
{
    let mut b: Vec<PadicScalar> = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let mut value = g(i)?;
        for (j, bj) in b.iter().enumerate() {
            if indicator_contains(j as u64, i, p) {
                value = value.checked_sub(bj)?;
            }
        }
        b.push(value);
    }
    Ok(WaveletSeries {
        prime: p,
        coefficients: b,
    })
}

/// Taylor jets supplied by a function with known derivatives: `g^{(j)}(m) / j!`.
pub trait DerivativeOracle {
    fn prime(&self) -> Prime;
    fn taylor_coefficient(&self, m: &BigRational, j: u32) -> Result<EValue>;
}

/// `Σ_m 1_{m + p^h Z_p}(z) Σ_{j <= t} g^{(j)}(m)/j! (z - m)^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyPolynomialApprox {
    prime: Prime,
    h: u32,
    /// `jets[m][j] = g^{(j)}(m) / j!`.
    jets: Vec<Vec<EValue>>,
}

impl LocallyPolynomialApprox {
    pub fn level(&self) -> u32 {
        self.h
    }

    pub fn jets(&self) -> &[Vec<EValue>] {
        &self.jets
    }

    /// Value at a rational `z ∈ Z_p`.
    pub fn evaluate(&self, z: &BigRational) -> Result<EValue> {
        let m = crate::padic::reduce_mod_pn(z, self.prime, self.h);
        let idx: usize = m.try_into().expect("residue index");
        let d = z - BigRational::from_integer(BigInt::from(idx));
        let mut acc = EValue::zero(self.prime);
        let mut power = BigRational::from_integer(BigInt::from(1));
        for c in &self.jets[idx] {
            acc = acc.checked_add(&c.mul_rational(&power))?;
            power *= &d;
        }
        Ok(acc)
    }
}

/// Jets of order `t` at every residue `m < p^h`.
pub fn local_poly_approx<O: DerivativeOracle + ?Sized>(
    g: &O,
    h: u32,
    t: u32,
) -> Result<LocallyPolynomialApprox> {
    let p = g.prime();
    let count = p.pow(h);
    let count: u64 = count.try_into().expect("level too large");
    let jets = (0..count)
        .map(|m| {
            let m = BigRational::from_integer(BigInt::from(m));
            (0..=t).map(|j| g.taylor_coefficient(&m, j)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocallyPolynomialApprox { prime: p, h, jets })
}
