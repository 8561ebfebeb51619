//! Mod-`p` Galois and smooth `GL_2(Q_p)` descriptors, the Iwahori mod-`p` correspondence
//! and the reduction calculator for semi-stable representations of weight `k ∈ [3, p+1]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::{BigRational, Ratio};
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{reciprocal_roots, Fp, Fp2};
use crate::padic::{binom, harmonic_sum, residue, v_plus_minus, Prime, Surd, Valuation};

/// A weight `k ∈ [3, p+1]` and an L-invariant in `Q(√p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInput {
    prime: Prime,
    k: u32,
    l: Surd,
}

impl ReductionInput {
    pub fn new(prime: Prime, k: u32, l: Surd) -> Result<Self> {
        if k < 3 || u64::from(k) > prime.get() + 1 {
            return Err(Error::OutOfRange(format!(
                "weight {k} outside [3, {}]",
                prime.get() + 1
            )));
        }
        if l.prime() != prime {
            return Err(Error::OutOfRange("L-invariant over a different prime".into()));
        }
        Ok(ReductionInput { prime, k, l })
    }

    pub fn rational(prime: Prime, k: u32, l: BigRational) -> Result<Self> {
        Self::new(prime, k, Surd::from_rational(prime, l))
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn r(&self) -> u32 {
        self.k - 2
    }

    pub fn l(&self) -> &Surd {
        &self.l
    }

    /// `L - H_{v_-} - H_{v_+}`.
    pub fn shifted(&self) -> Surd {
        let (vm, vp) = v_plus_minus(self.r());
        let h = harmonic_sum(vm) + harmonic_sum(vp);
        &self.l - &Surd::from_rational(self.prime, h)
    }
}

/// A semisimple two-dimensional mod-`p` representation of `Gal(Q̄_p/Q_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GaloisRepDescriptor {
    /// `ind ω_2^c ⊗ μ_twist`, with `c` taken mod `p^2 - 1`.
    Irreducible { prime: Prime, c: u64, twist: Fp2 },
    /// `μ_λ ω^a ⊕ μ_λ' ω^b`, exponents mod `p - 1`.
    Reducible { prime: Prime, summands: [(u64, Fp2); 2] },
}

impl GaloisRepDescriptor {
    pub fn irreducible(prime: Prime, c: u64, twist: Fp2) -> Result<Self> {
        let p = prime.get();
        if c % (p + 1) == 0 {
            return Err(Error::OutOfRange(format!("ind ω_2^{c} is reducible: {} | {c}", p + 1)));
        }
        Ok(GaloisRepDescriptor::Irreducible {
            prime,
            c: c % (p * p - 1),
            twist,
        })
    }

    pub fn reducible(prime: Prime, first: (u64, Fp2), second: (u64, Fp2)) -> Self {
        let m = prime.get() - 1;
        GaloisRepDescriptor::Reducible {
            prime,
            summands: [(first.0 % m, first.1), (second.0 % m, second.1)],
        }
    }

    pub fn prime(&self) -> Prime {
        match self {
            GaloisRepDescriptor::Irreducible { prime, .. }
            | GaloisRepDescriptor::Reducible { prime, .. } => *prime,
        }
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self, GaloisRepDescriptor::Irreducible { .. })
    }
}

impl fmt::Display for GaloisRepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisRepDescriptor::Irreducible { c, twist, .. } => {
                write!(f, "ind ω2^{c}")?;
                if !is_one(twist) {
                    write!(f, " ⊗ μ_{twist}")?;
                }
                Ok(())
            }
            GaloisRepDescriptor::Reducible { summands, .. } => {
                let [(a, la), (b, lb)] = summands;
                write!(f, "μ_{la} ω^{a} ⊕ μ_{lb} ω^{b}")
            }
        }
    }
}

/// The smooth representation `π(r, λ, η)` with `η = ω^s μ_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothRepDescriptor {
    pub r: u32,
    pub lambda: Fp2,
    pub eta_exp: u64,
    pub eta_unramified: Fp2,
    pub semisimplified: bool,
}

impl fmt::Display for SmoothRepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π({}, {}, ω^{}", self.r, self.lambda, self.eta_exp)?;
        if !is_one(&self.eta_unramified) {
            write!(f, " μ_{}", self.eta_unramified)?;
        }
        f.write_str(")")?;
        if self.semisimplified {
            f.write_str("^ss")?;
        }
        Ok(())
    }
}

fn is_one(x: &Fp2) -> bool {
    x.x.value() == 1 && x.y.is_zero()
}

/// Where `ν` falls on the line of marked points `ν = i - r/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interval(u32),
    Point(u32),
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Interval(i) => write!(f, "interval {i}"),
            Region::Point(i) => write!(f, "point {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub nu: Valuation,
    pub region: Region,
    pub descriptor: GaloisRepDescriptor,
    /// `λ_i` at a point, `None` on an interval.
    pub lambda: Option<Fp2>,
    /// `λ + λ^{-1}` at the self-dual point (`r` odd, last point).
    pub trace: Option<Fp>,
}

/// `ν = v_p(L - H_{v_-} - H_{v_+})`.
pub fn nu(input: &ReductionInput) -> Valuation {
    input.shifted().valuation()
}

/// Number of marked points for a given `r`.
pub fn point_count(r: u32) -> u32 {
    if r % 2 == 1 {
        (r + 1) / 2
    } else {
        r / 2
    }
}

/// Locates `ν` among the regions for `r`. The first interval is unbounded on the left,
/// and the last region is `ν ≥ 1/2` (odd `r`, a point) or `ν > 0` (even `r`, an interval).
pub fn locate(r: u32, nu: Valuation) -> Region {
    let last = point_count(r);
    let t = match nu {
        Valuation::Infinite => {
            return if r % 2 == 1 {
                Region::Point(last)
            } else {
                Region::Interval(last + 1)
            }
        }
        Valuation::Finite(v) => v + Ratio::new(i64::from(r), 2),
    };
    let last_r = Ratio::from_integer(i64::from(last));
    if r % 2 == 1 && t >= last_r {
        return Region::Point(last);
    }
    if r % 2 == 0 && t > last_r {
        return Region::Interval(last + 1);
    }
    if t < Ratio::one() {
        return Region::Interval(1);
    }
    if t.is_integer() {
        return Region::Point(t.to_integer() as u32);
    }
    Region::Interval(t.ceil().to_integer() as u32)
}

/// Residue of `x / p^{e}` for `e = twice_e / 2`, assuming `v_p(x) ≥ e`.
fn residue_of_shift(x: &Surd, twice_e: i64) -> Fp {
    let p = x.prime();
    if twice_e % 2 == 0 {
        // the √p part has half-integer valuation ≥ e, hence vanishes mod π
        let u = &x.rational * p.rational_pow(-twice_e / 2);
        Fp::from_u64(p, residue(&u, p))
    } else {
        let u = &x.sqrt_coeff * p.rational_pow((1 - twice_e) / 2);
        Fp::from_u64(p, residue(&u, p))
    }
}

/// `(-1)^i i C(r+1-i, i) · ((L - H_- - H_+) / p^{i - r/2} mod π)`.
fn point_constant(input: &ReductionInput, i: u32) -> Fp {
    let p = input.prime();
    let r = input.r();
    let twice_e = 2 * i64::from(i) - i64::from(r);
    let u = residue_of_shift(&input.shifted(), twice_e);
    let b = binom(i64::from(r + 1 - i), u64::from(i));
    let b = residue(&BigRational::from_integer(b), p);
    let sign = if i % 2 == 0 { 1 } else { -1 };
    Fp::new(p, sign * i64::from(i)) * Fp::from_u64(p, b) * u
}

/// The semi-simplified reduction of the semi-stable representation `V_{k,L}`.
pub fn reduce(input: &ReductionInput) -> Result<Reduction> {
    let p = input.prime();
    let r = input.r();
    let nu = nu(input);
    let region = locate(r, nu);
    let one = Fp2::from_fp(Fp::one(p));
    match region {
        Region::Interval(i) => {
            let c = u64::from(r + 1) + u64::from(i - 1) * (p.get() - 1);
            Ok(Reduction {
                nu,
                region,
                descriptor: GaloisRepDescriptor::irreducible(p, c, one)?,
                lambda: None,
                trace: None,
            })
        }
        Region::Point(i) => {
            let constant = point_constant(input, i);
            let self_dual = r % 2 == 1 && i == point_count(r);
            let (lambda, trace) = if self_dual {
                (reciprocal_roots(constant).0, Some(constant))
            } else {
                if constant.is_zero() {
                    // ν sits exactly on the point, so the shifted L-invariant is a unit
                    return Err(Error::Normalization(format!(
                        "λ_{i} vanished at ν = {nu}"
                    )));
                }
                (Fp2::from_fp(constant), None)
            };
            let lambda_inv = lambda.inv().expect("roots of λ^2 - cλ + 1 are units");
            let descriptor = GaloisRepDescriptor::reducible(
                p,
                (u64::from(r + 1 - i), lambda),
                (u64::from(i), lambda_inv),
            );
            Ok(Reduction {
                nu,
                region,
                descriptor,
                lambda: Some(lambda),
                trace,
            })
        }
    }
}

/// Writes `ind ω_2^c` as `ind ω_2^{r+1} ⊗ ω^s`: `r + 1 ≡ c mod (p+1)` with `r ∈ [0, p-1]`,
/// and `s ≡ (c - r - 1)/(p+1) mod (p-1)`.
pub fn normalize_irreducible(p: Prime, c: u64) -> Result<(u32, u64)> {
    let q = p.get();
    if c % (q + 1) == 0 {
        return Err(Error::Normalization(format!("{} divides {c}", q + 1)));
    }
    let c = c % (q * q - 1);
    let r = c % (q + 1) - 1;
    let s = ((c - r - 1) / (q + 1)) % (q - 1);
    Ok((r as u32, s))
}

/// `[a]`, the representative of `a` mod `p - 1` in `{0, ..., p-2}`.
pub fn bracket(a: i64, p: Prime) -> u64 {
    a.rem_euclid(p.get() as i64 - 1) as u64
}

/// The Iwahori mod-`p` correspondence.
///
/// `ind ω_2^{r+1} ⊗ η ↦ π(r, 0, η)` and
/// `(μ_λ ω^{r+1} ⊕ μ_{λ^{-1}}) ⊗ η ↦ π(r, λ, η)^ss ⊕ π([p-3-r], λ^{-1}, ηω^{r+1})^ss`.
/// A reducible input `μ_λ ω^a ⊕ μ_λ' ω^b` is read with `η = ω^b` and `r = [a - b - 1]`.
pub fn iwahori_llc(g: &GaloisRepDescriptor) -> Result<Vec<SmoothRepDescriptor>> {
    let p = g.prime();
    let one = Fp2::from_fp(Fp::one(p));
    match g {
        GaloisRepDescriptor::Irreducible { c, twist, .. } => {
            let (r, s) = normalize_irreducible(p, *c)?;
            Ok(vec![SmoothRepDescriptor {
                r,
                lambda: Fp2::from_fp(Fp::zero(p)),
                eta_exp: s,
                eta_unramified: *twist,
                semisimplified: false,
            }])
        }
        GaloisRepDescriptor::Reducible { summands, .. } => {
            let [(a, lambda), (b, lambda_prime)] = *summands;
            if lambda * lambda_prime != one {
                return Err(Error::Normalization(format!(
                    "unramified parts {lambda} and {lambda_prime} are not inverse"
                )));
            }
            let r = bracket(a as i64 - b as i64 - 1, p);
            let first = SmoothRepDescriptor {
                r: r as u32,
                lambda,
                eta_exp: b,
                eta_unramified: one,
                semisimplified: true,
            };
            let second = SmoothRepDescriptor {
                r: bracket(p.get() as i64 - 3 - r as i64, p) as u32,
                lambda: lambda_prime,
                eta_exp: bracket((b + r + 1) as i64, p),
                eta_unramified: one,
                semisimplified: true,
            };
            Ok(vec![first, second])
        }
    }
}

/// Determinant consistency: the inertia exponent is `≡ r+1 mod (p-1)` and the unramified
/// parts multiply to 1.
pub fn det_check(g: &GaloisRepDescriptor, r: u32) -> bool {
    let p = g.prime();
    let m = p.get() - 1;
    let one = Fp2::from_fp(Fp::one(p));
    let target = u64::from(r + 1) % m;
    match g {
        GaloisRepDescriptor::Irreducible { c, twist, .. } => {
            c % m == target && *twist * *twist == one
        }
        GaloisRepDescriptor::Reducible { summands, .. } => {
            let [(a, la), (b, lb)] = *summands;
            (a + b) % m == target && la * lb == one
        }
    }
}

/// An L-invariant `H_{v_-} + H_{v_+} + u p^{e}` realizing `ν = e` with leading unit `u`,
/// where `e = twice_e / 2` (the `√p` coordinate is used when `e` is a half-integer).
pub fn l_with_nu(p: Prime, r: u32, twice_e: i64, u: &BigRational) -> Surd {
    let (vm, vp) = v_plus_minus(r);
    let h = harmonic_sum(vm) + harmonic_sum(vp);
    if twice_e % 2 == 0 {
        Surd::from_rational(p, h + u * p.rational_pow(twice_e / 2))
    } else {
        Surd::new(p, h, u * p.rational_pow((twice_e - 1) / 2))
    }
}
