//! Locally algebraic functions on `Q_p` with the weight-`k` action of `GL_2(Q_p)`,
//! integral elements of the lattice with their valuation certificates, and the explicit
//! congruences behind the poly·log witnesses `p^x Σ λ_i (z - i)^n log_L(z - i)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mahler::{local_poly_approx, DerivativeOracle, LocallyPolynomialApprox};
use crate::padic::{binom, reduce_coset, residue, vp, Prime, Surd, Valuation};
use crate::polylog::{degree_condition_check, EValue, PolyLogFunction, PolyLogTerm};
use crate::tree::GL2Mat;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `√p^twice` as an element of `Q(√p)`.
pub fn sqrt_p_power(p: Prime, twice: i64) -> Surd {
    if twice % 2 == 0 {
        Surd::from_rational(p, p.rational_pow(twice / 2))
    } else {
        Surd::new(p, BigRational::zero(), p.rational_pow((twice - 1) / 2))
    }
}

/// A ball `c + p^h Z_p`, its complement in `Q_p`, or all of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Support {
    All,
    Ball { center: BigRational, h: i64 },
    Complement { center: BigRational, h: i64 },
}

impl Support {
    pub fn ball(center: &BigRational, h: i64, p: Prime) -> Self {
        Support::Ball {
            center: reduce_coset(center, p, h),
            h,
        }
    }

    pub fn complement(center: &BigRational, h: i64, p: Prime) -> Self {
        Support::Complement {
            center: reduce_coset(center, p, h),
            h,
        }
    }

    pub fn contains(&self, z: &BigRational, p: Prime) -> bool {
        let in_ball = |c: &BigRational, h: i64| vp(&(z - c), p) >= Valuation::int(h);
        match self {
            Support::All => true,
            Support::Ball { center, h } => in_ball(center, *h),
            Support::Complement { center, h } => !in_ball(center, *h),
        }
    }

    fn affine(&self, scale: &BigRational, shift: &BigRational, p: Prime) -> Self {
        let v = vp(scale, p).finite().expect("nonzero scale").to_integer();
        match self {
            Support::All => Support::All,
            Support::Ball { center, h } => Support::ball(&(scale * center + shift), h + v, p),
            Support::Complement { center, h } => {
                Support::complement(&(scale * center + shift), h + v, p)
            }
        }
    }

    /// Image under `u ↦ 1/u`, up to the points `0` and `∞`.
    fn invert(&self, p: Prime) -> Self {
        let far = |c: &BigRational, h: i64| -> Option<i64> {
            match vp(c, p) {
                Valuation::Finite(v) if v.to_integer() < h => Some(v.to_integer()),
                _ => None,
            }
        };
        match self {
            Support::All => Support::All,
            Support::Ball { center, h } => match far(center, *h) {
                Some(v) => Support::ball(&center.recip(), h - 2 * v, p),
                None => Support::complement(&BigRational::zero(), 1 - h, p),
            },
            Support::Complement { center, h } => match far(center, *h) {
                Some(v) => Support::complement(&center.recip(), h - 2 * v, p),
                None => Support::ball(&BigRational::zero(), 1 - h, p),
            },
        }
    }

    /// Image under `w ↦ (aw + b)/(cw + d)`.
    pub fn mobius_image(&self, m: &GL2Mat, p: Prime) -> Self {
        if m.c.is_zero() {
            return self.affine(&(&m.a / &m.d), &(&m.b / &m.d), p);
        }
        // (aw + b)/(cw + d) = a/c - (det/c) / (cw + d)
        let inner = self.affine(&m.c, &m.d, p).invert(p);
        inner.affine(&(-(m.det() / &m.c)), &(&m.a / &m.c), p)
    }
}

/// `P(z) · 1_S(z)` with `deg P ≤ r`; coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicTerm {
    pub coefficients: Vec<Surd>,
    pub support: Support,
}

/// A finite sum of locally algebraic terms of degree at most `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocallyAlgebraicFn {
    prime: Prime,
    r: u32,
    terms: Vec<AlgebraicTerm>,
}

fn rational_poly_pow(base: &[BigRational], e: u32) -> Vec<BigRational> {
    let mut acc = vec![BigRational::one()];
    for _ in 0..e {
        let mut next = vec![BigRational::zero(); acc.len() + base.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in base.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

fn rational_poly_mul(x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl LocallyAlgebraicFn {
    pub fn zero(prime: Prime, r: u32) -> Self {
        LocallyAlgebraicFn {
            prime,
            r,
            terms: Vec::new(),
        }
    }

    /// `coeff · (z - z0)^j · 1_S`.
    pub fn monomial(
        prime: Prime,
        r: u32,
        coeff: &Surd,
        z0: &BigRational,
        j: u32,
        support: Support,
    ) -> Result<Self> {
        if j > r {
            return Err(Error::OutOfRange(format!("exponent {j} exceeds r = {r}")));
        }
        let shifted = rational_poly_pow(&[-z0, BigRational::one()], j);
        let mut coefficients = vec![Surd::zero(prime); r as usize + 1];
        for (slot, c) in coefficients.iter_mut().zip(&shifted) {
            *slot = coeff.scale(c);
        }
        Ok(LocallyAlgebraicFn {
            prime,
            r,
            terms: vec![AlgebraicTerm {
                coefficients,
                support,
            }],
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn terms(&self) -> &[AlgebraicTerm] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LocallyAlgebraicFn { terms, ..self.clone() }
    }

    pub fn scaled(&self, s: &Surd) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| AlgebraicTerm {
                coefficients: t.coefficients.iter().map(|c| c * s).collect(),
                support: t.support.clone(),
            })
            .collect();
        LocallyAlgebraicFn { terms, ..self.clone() }
    }

    pub fn evaluate(&self, z: &BigRational) -> Surd {
        let mut acc = Surd::zero(self.prime);
        for t in &self.terms {
            if !t.support.contains(z, self.prime) {
                continue;
            }
            let mut power = BigRational::one();
            for c in &t.coefficients {
                acc = &acc + &c.scale(&power);
                power *= z;
            }
        }
        acc
    }

    /// The class modulo polynomials of degree `≤ r`: `P·1_{Q_p∖B} ≡ -P·1_B`, and terms
    /// supported everywhere are dropped.
    pub fn modulo_polynomials(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| match &t.support {
                Support::All => None,
                Support::Ball { .. } => Some(t.clone()),
                Support::Complement { center, h } => Some(AlgebraicTerm {
                    coefficients: t.coefficients.iter().map(|c| -c).collect(),
                    support: Support::Ball {
                        center: center.clone(),
                        h: *h,
                    },
                }),
            })
            .collect();
        LocallyAlgebraicFn { terms, ..self.clone() }
    }
}

/// A matrix acting on functions of weight `r + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAction {
    pub matrix: GL2Mat,
    pub r: u32,
}

/// `(g·f)(z) = |ad - bc|^{r/2} (bz + d)^r f((az + c)/(bz + d))`.
pub fn apply_g_action(g: &GAction, f: &LocallyAlgebraicFn) -> Result<LocallyAlgebraicFn> {
    if g.r != f.r {
        return Err(Error::OutOfRange(format!("weight mismatch: {} vs {}", g.r, f.r)));
    }
    let p = f.prime;
    let r = f.r;
    let m = &g.matrix;
    let v_det = vp(&m.det(), p).finite().expect("invertible").to_integer();
    let norm = sqrt_p_power(p, -v_det * i64::from(r));
    let num = [m.c.clone(), m.a.clone()];
    let den = [m.d.clone(), m.b.clone()];
    // the preimage of S under z ↦ (az + c)/(bz + d)
    let back = GL2Mat::new(m.d.clone(), -&m.c, -&m.b, m.a.clone())?;
    let mut terms = Vec::with_capacity(f.terms.len());
    for t in &f.terms {
        let mut coefficients = vec![Surd::zero(p); r as usize + 1];
        for (i, c) in t.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = i as u32;
            let poly = rational_poly_mul(
                &rational_poly_pow(&num, i),
                &rational_poly_pow(&den, r - i),
            );
            let c = c * &norm;
            for (slot, q) in coefficients.iter_mut().zip(&poly) {
                *slot = &*slot + &c.scale(q);
            }
        }
        terms.push(AlgebraicTerm {
            coefficients,
            support: t.support.mobius_image(&back, p),
        });
    }
    Ok(LocallyAlgebraicFn {
        prime: p,
        r,
        terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    /// `p^{(h-1)(r/2-j)} (z - z0)^j 1_{z0 + p^h Z_p}`, `0 ≤ j ≤ r`.
    Interior,
    /// `p^{h(r/2-j)} (z - z0)^j 1_{z0 + p^h Z_p}` modulo polynomials, `r/2 ≤ j ≤ r`.
    Boundary,
}

/// An integral function together with the exponent `c` such that
/// `(z - z0)^j 1_{z0 + p^h Z_p} ∈ p^{-c} Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeElement {
    pub kind: ElementKind,
    pub function: LocallyAlgebraicFn,
    pub certificate: Ratio<i64>,
}

/// Builds the element as a translate of `z^i 1_{pZ_p}`, which is integral for `i ≤ r`.
pub fn lattice_element(
    kind: ElementKind,
    p: Prime,
    z0: &BigRational,
    j: u32,
    h: i64,
    r: u32,
) -> Result<LatticeElement> {
    if j > r {
        return Err(Error::OutOfRange(format!("exponent {j} exceeds r = {r}")));
    }
    if h < 1 {
        return Err(Error::OutOfRange(format!("radius exponent {h} < 1")));
    }
    let pzp = Support::ball(&BigRational::zero(), 1, p);
    let one = Surd::from_rational(p, BigRational::one());
    let half_r = Ratio::new(i64::from(r), 2);
    let jr = Ratio::from_integer(i64::from(j));
    match kind {
        ElementKind::Interior => {
            let seed = LocallyAlgebraicFn::monomial(p, r, &one, &BigRational::zero(), j, pzp)?;
            let g = GL2Mat::new(int(1), int(0), -z0, p.rational_pow(h - 1))?;
            let function = apply_g_action(&GAction { matrix: g, r }, &seed)?;
            Ok(LatticeElement {
                kind,
                function,
                certificate: Ratio::from_integer(h - 1) * (half_r - jr),
            })
        }
        ElementKind::Boundary => {
            if 2 * j < r {
                return Err(Error::OutOfRange(format!("boundary element needs j ≥ r/2, got {j}")));
            }
            let seed =
                LocallyAlgebraicFn::monomial(p, r, &one, &BigRational::zero(), r - j, pzp)?;
            let g = GL2Mat::new(int(0), int(1), p.rational_pow(h), -z0)?;
            let minus = Surd::from_rational(p, -BigRational::one());
            let function = apply_g_action(&GAction { matrix: g, r }, &seed)?
                .scaled(&minus)
                .modulo_polynomials();
            Ok(LatticeElement {
                kind,
                function,
                certificate: Ratio::from_integer(h) * (half_r - jr),
            })
        }
    }
}

/// Coefficients `λ_0, ..., λ_n` with `Σ λ_i i^j = p^j` for `0 ≤ j ≤ n`, so that together
/// with `λ_p = -1` every power sum `Σ_{i ∈ {0..n, p}} λ_i i^j` vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSystem {
    pub prime: Prime,
    pub n: u32,
    pub lambdas: Vec<BigRational>,
    pub lambda_p: BigRational,
}

impl LambdaSystem {
    /// `(node, λ)` over `{0, ..., n, p}`.
    pub fn nodes(&self) -> Vec<(BigRational, BigRational)> {
        let mut out: Vec<_> = self
            .lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| (int(i as i64), l.clone()))
            .collect();
        out.push((int(self.prime.get() as i64), self.lambda_p.clone()));
        out
    }

    /// `Σ_i λ_i z_i^j` for `j = 0..=through`.
    pub fn power_sums(&self, through: u32) -> Vec<BigRational> {
        let nodes = self.nodes();
        (0..=through)
            .map(|j| {
                nodes.iter().fold(BigRational::zero(), |acc, (z, l)| {
                    acc + l * num_traits::pow(z.clone(), j as usize)
                })
            })
            .collect()
    }

    /// Residues of `λ_0, ..., λ_n` in `F_p`.
    pub fn residues(&self) -> Vec<u64> {
        self.lambdas.iter().map(|l| residue(l, self.prime)).collect()
    }
}

/// Lagrange weights `λ_i = Π_{m ≠ i} (p - m)/(i - m)` of the nodes `0..=n` at `p`.
pub fn solve_lambda_system(n: u32, p: Prime) -> Result<LambdaSystem> {
    if u64::from(n) >= p.get() {
        return Err(Error::OutOfRange(format!("n = {n} must be below p = {p}")));
    }
    let pr = int(p.get() as i64);
    let lambdas = (0..=n as i64)
        .map(|i| {
            (0..=n as i64)
                .filter(|&m| m != i)
                .fold(BigRational::one(), |acc, m| acc * (&pr - int(m)) / int(i - m))
        })
        .collect();
    let sys = LambdaSystem {
        prime: p,
        n,
        lambdas,
        lambda_p: -BigRational::one(),
    };
    debug_assert!(sys.power_sums(n).iter().all(Zero::is_zero));
    let pattern = sys.residues();
    if pattern[0] != 1 || pattern[1..].iter().any(|&v| v != 0) {
        return Err(Error::OutOfRange(format!("unexpected residue pattern {pattern:?}")));
    }
    Ok(sys)
}

/// `p^x Σ_{i ∈ {0..n, p}} λ_i (z - i)^n log_L(z - i)` with `x = twice_x / 2`.
pub fn build_witness(sys: &LambdaSystem, r: u32, twice_x: i64) -> Result<PolyLogFunction> {
    let terms = sys
        .nodes()
        .into_iter()
        .map(|(center, lambda)| PolyLogTerm {
            lambda,
            center,
            exponent: sys.n,
        })
        .collect();
    let f = PolyLogFunction::new(sys.prime, r, twice_x, terms)?;
    let check = degree_condition_check(&f);
    if !check.holds {
        return Err(Error::DegreeCondition {
            degree: check.degree.unwrap_or(0),
        });
    }
    Ok(f)
}

struct Jets<'a> {
    f: &'a PolyLogFunction,
    precision: u32,
}

impl DerivativeOracle for Jets<'_> {
    fn prime(&self) -> Prime {
        self.f.prime()
    }

    fn taylor_coefficient(&self, m: &BigRational, j: u32) -> Result<EValue> {
        self.f.taylor_coefficient(m, j, self.precision)
    }
}

/// The jets `g^{(j)}(m)/j!`, `j ≤ t`, at every `m < p^h`.
pub fn taylor_jet_expand(
    f: &PolyLogFunction,
    h: u32,
    t: u32,
    precision: u32,
) -> Result<LocallyPolynomialApprox> {
    let n_min = f.terms().iter().map(|t| t.exponent).min().unwrap_or(u32::MAX);
    if t >= n_min {
        return Err(Error::OutOfRange(format!("jet order {t} must be below {n_min}")));
    }
    local_poly_approx(&Jets { f, precision }, h, t)
}

/// Margin `v_p(computed - expected)` of one congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCell {
    pub a: u64,
    pub j: u32,
    pub pass: bool,
    pub margin: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceReport {
    pub prime: Prime,
    pub r: u32,
    pub n: u32,
    pub twice_x: i64,
    pub cells: Vec<CongruenceCell>,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn min_margin(&self) -> Valuation {
        self.cells
            .iter()
            .map(|c| c.margin)
            .min()
            .unwrap_or(Valuation::Infinite)
    }
}

fn check_witness_range(p: Prime, r: u32, n: u32, twice_x: i64) -> Result<()> {
    if r == 0 || u64::from(r) >= p.get() {
        return Err(Error::OutOfRange(format!("r = {r} outside [1, p-1]")));
    }
    if n > r || 2 * n <= r + 2 {
        return Err(Error::OutOfRange(format!("need (r+2)/2 < n ≤ r, got n = {n}, r = {r}")));
    }
    if twice_x < -2 {
        return Err(Error::OutOfRange(format!("x = {twice_x}/2 below -1")));
    }
    Ok(())
}

/// The predicted residue class of `g^{(j)}(a)/j!`: `C(n,j) p^{1+x} a^{n-j-1}` for `a ≠ 0`
/// and `(-1)^{n-j+1} C(n,j) p^{x+n-j} L` for `a = 0`.
pub fn g1_prediction(p: Prime, n: u32, twice_x: i64, a: u64, j: u32, precision: u32) -> Result<EValue> {
    if j >= n {
        return Err(Error::OutOfRange(format!("derivative order {j} must be below n = {n}")));
    }
    let c = BigRational::from_integer(binom(i64::from(n), u64::from(j)));
    if a != 0 {
        let v = c * num_traits::pow(int(a as i64), (n - j - 1) as usize);
        Ok(EValue::from_rationals(&v, &BigRational::zero(), p, precision)?.shift(2 + twice_x))
    } else {
        let sign = if (n - j + 1) % 2 == 0 { 1 } else { -1 };
        let v = c * int(sign);
        Ok(EValue::from_rationals(&BigRational::zero(), &v, p, precision)?
            .shift(2 * i64::from(n - j) + twice_x))
    }
}

/// Checks `g^{(j)}(a)/j!` against [`g1_prediction`] for `a < p`, `j < n`, where `g` is
/// the witness built from [`solve_lambda_system`].
pub fn verify_g1_congruence(
    p: Prime,
    r: u32,
    n: u32,
    twice_x: i64,
    precision: u32,
) -> Result<CongruenceReport> {
    check_witness_range(p, r, n, twice_x)?;
    let sys = solve_lambda_system(n, p)?;
    let g = build_witness(&sys, r, twice_x)?;
    let mut cells = Vec::new();
    for a in 0..p.get() {
        let z = int(a as i64);
        for j in 0..n {
            let computed = g.taylor_coefficient(&z, j, precision)?;
            let expected = g1_prediction(p, n, twice_x, a, j, precision)?;
            let margin = computed.checked_sub(&expected)?.valuation();
            cells.push(CongruenceCell {
                a,
                j,
                pass: margin.is_positive(),
                margin,
            });
        }
    }
    Ok(CongruenceReport {
        prime: p,
        r,
        n,
        twice_x,
        cells,
    })
}

/// Coefficients of `z^{r-n+j} log_L(z)` in `z^r g(1/z)`, `g = Σ λ_i (z - z_i)^n log_L(z - z_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterPartReport {
    pub offset: u32,
    pub log_coefficients: Vec<BigRational>,
}

impl OuterPartReport {
    pub fn log_term_vanishes(&self) -> bool {
        self.log_coefficients.iter().all(Zero::is_zero)
    }
}

/// Expands `z^r g(1/z) = Σ λ_i z^{r-n} (1 - z z_i)^n [log_L(1 - z z_i) - log_L(z)]` and
/// collects the `log_L(z)` part, `-Σ_j C(n,j) (-1)^j (Σ_i λ_i z_i^j) z^{r-n+j}`.
pub fn verify_outer_part_claim(r: u32, sys: &LambdaSystem) -> Result<OuterPartReport> {
    if sys.n > r {
        return Err(Error::OutOfRange(format!("n = {} exceeds r = {r}", sys.n)));
    }
    let sums = sys.power_sums(sys.n);
    let log_coefficients = sums
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let sign = if j % 2 == 0 { -1 } else { 1 };
            int(sign) * BigRational::from_integer(binom(i64::from(sys.n), j as u64)) * s
        })
        .collect();
    Ok(OuterPartReport {
        offset: r - sys.n,
        log_coefficients,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeCell {
    pub m: u64,
    pub j: u32,
    pub pass: bool,
    pub margin: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeReport {
    pub level: u32,
    pub cells: Vec<TelescopeCell>,
}

impl TelescopeReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }
}

/// One descent `g_h → g_{h-1}` for `h ≥ 3`. For `m = a + α p^{h-1}` and `j < n` it checks
///
/// `g^{(j)}(m)/j! ≡ Σ_{l=j}^{n-1} C(l,j) (α p^{h-1})^{l-j} g^{(l)}(a)/l!  mod p^{(h-1)(r/2-j)} π`,
///
/// after which regrouping the jets at `m` around `a` is an exact identity. The `L`-part of
/// each difference is weighted by the smallest `v_p(L)` allowed, `r/2 - n - x`.
///
/// Descending from level 3 to level 2 is the last generic step. Functions for which the
/// descent has to stop at level 3 are not treated here.
pub fn telescope_step(f: &PolyLogFunction, h: u32, precision: u32) -> Result<TelescopeReport> {
    if h < 3 {
        return Err(Error::OutOfRange(format!("descent needs h ≥ 3, got {h}")));
    }
    let p = f.prime();
    let n = f.terms().iter().map(|t| t.exponent).min().unwrap_or(0);
    if n == 0 {
        return Err(Error::OutOfRange("empty poly·log function".into()));
    }
    let fine = taylor_jet_expand(f, h, n - 1, precision)?;
    let coarse = taylor_jet_expand(f, h - 1, n - 1, precision)?;
    let half_r = Ratio::new(i64::from(f.r()), 2);
    let v_l = half_r - Ratio::from_integer(i64::from(n)) - f.scale();
    let step: u64 = p.pow(h - 1).try_into().expect("small level");
    let mut cells = Vec::new();
    for (m, jets) in fine.jets().iter().enumerate() {
        let m = m as u64;
        let (alpha, a) = (m / step, m % step);
        let shift = int((alpha * step) as i64);
        let base = &coarse.jets()[a as usize];
        for j in 0..n {
            let mut expected = EValue::zero(p);
            let mut power = BigRational::one();
            for l in j..n {
                let c = BigRational::from_integer(binom(i64::from(l), u64::from(j))) * &power;
                expected = expected.checked_add(&base[l as usize].mul_rational(&c))?;
                power *= &shift;
            }
            let d = jets[j as usize].checked_sub(&expected)?;
            let v = d.constant.valuation().min(d.ell.valuation().shift(v_l));
            let threshold = Ratio::from_integer(i64::from(h) - 1) * (half_r - Ratio::from_integer(i64::from(j)));
            let margin = v.shift(-threshold);
            cells.push(TelescopeCell {
                m,
                j,
                pass: margin.is_positive(),
                margin,
            });
        }
    }
    Ok(TelescopeReport { level: h, cells })
}
