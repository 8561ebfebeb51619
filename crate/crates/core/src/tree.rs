//! The Bruhat–Tits tree of `GL_2(Q_p)`: vertices are `G/KZ`, oriented edges are `G/IZ`.
//!
//! A vertex is stored in the canonical form `(p^n μ; 0 1)` with `μ` reduced modulo `p^n`.
//! An oriented edge with source `(n, μ)` has canonical representative `g_{n,μ}` when its
//! target is `(n-1, μ mod p^{n-1})` and `g_{n,μ} (λ 1; 1 0)` when its target is
//! `(n+1, μ + λ p^n)`. Functions on edges are sums of elementary functions `⟦γ_e, v⟧`
//! over canonical representatives, and the Hecke operators act by right translation
//! followed by re-canonicalization.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::padic::{digits_below, from_digits, residue, vp, vp_finite, Prime, Valuation};

/// A matrix `(a b; c d)` in `GL_2(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GL2Mat {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl GL2Mat {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Result<Self> {
        let m = GL2Mat { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        GL2Mat {
            a: int(1),
            b: int(0),
            c: int(0),
            d: int(1),
        }
    }

    pub fn scalar(s: BigRational) -> Result<Self> {
        Self::new(s.clone(), int(0), int(0), s)
    }

    /// `α = (1 0; 0 p)`.
    pub fn alpha(p: Prime) -> Self {
        GL2Mat::from_ints(1, 0, 0, p.get() as i64).expect("invertible")
    }

    /// `β = (0 1; p 0)`.
    pub fn beta(p: Prime) -> Self {
        GL2Mat::from_ints(0, 1, p.get() as i64, 0).expect("invertible")
    }

    /// `w = (0 1; 1 0)`.
    pub fn w() -> Self {
        GL2Mat::from_ints(0, 1, 1, 0).expect("invertible")
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inv(&self) -> Self {
        let det = self.det();
        GL2Mat {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        }
    }

    fn scale(&self, s: &BigRational) -> Self {
        GL2Mat {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
        }
    }

    fn entries(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Smallest valuation among the entries.
    fn min_valuation(&self, p: Prime) -> i64 {
        self.entries()
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| vp_finite(x, p))
            .min()
            .expect("invertible matrix has a nonzero entry")
    }

    fn is_integral(&self, p: Prime) -> bool {
        self.entries().iter().all(|x| vp(x, p) >= Valuation::int(0))
    }
}

impl Mul for &GL2Mat {
    type Output = GL2Mat;
    fn mul(self, rhs: &GL2Mat) -> GL2Mat {
        GL2Mat {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl fmt::Display for GL2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// The homothety class of the lattice spanned by the columns of `(p^n μ; 0 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexClass {
    prime: Prime,
    pub n: i64,
    /// Nonzero base-`p` digits `e ↦ d_e` of `μ`, all with `e < n`.
    pub mu: BTreeMap<i64, u64>,
}

impl VertexClass {
    /// The standard vertex `[Z_p^2]`.
    pub fn root(prime: Prime) -> Self {
        VertexClass {
            prime,
            n: 0,
            mu: BTreeMap::new(),
        }
    }

    pub fn new(prime: Prime, n: i64, mu: BTreeMap<i64, u64>) -> Result<Self> {
        for (&e, &d) in &mu {
            if e >= n || d == 0 || d >= prime.get() {
                return Err(Error::OutOfRange(alloc::format!("digit {d} at position {e}")));
            }
        }
        Ok(VertexClass { prime, n, mu })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn mu_value(&self) -> BigRational {
        from_digits(&self.mu, self.prime)
    }

    /// `(p^n μ; 0 1)`.
    pub fn representative(&self) -> GL2Mat {
        GL2Mat {
            a: self.prime.rational_pow(self.n),
            b: self.mu_value(),
            c: int(0),
            d: int(1),
        }
    }

    /// The `p + 1` adjacent vertices: `(n+1, μ + λp^n)` for `λ ∈ F_p`, then `(n-1, μ mod p^{n-1})`.
    pub fn neighbors(&self) -> Vec<VertexClass> {
        let mut out = Vec::with_capacity(self.prime.get() as usize + 1);
        for lambda in 0..self.prime.get() {
            let mut mu = self.mu.clone();
            if lambda != 0 {
                mu.insert(self.n, lambda);
            }
            out.push(VertexClass {
                prime: self.prime,
                n: self.n + 1,
                mu,
            });
        }
        out.push(self.parent());
        out
    }

    fn parent(&self) -> VertexClass {
        VertexClass {
            prime: self.prime,
            n: self.n - 1,
            mu: self
                .mu
                .iter()
                .filter(|(&e, _)| e < self.n - 1)
                .map(|(&e, &d)| (e, d))
                .collect(),
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}, mu={{", self.n)?;
        for (i, (e, d)) in self.mu.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}:{d}")?;
        }
        f.write_str("}]")
    }
}

/// The vertex `[g Z_p^2]`.
pub fn canonicalize_vertex(g: &GL2Mat, p: Prime) -> Result<VertexClass> {
    if g.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    // Column operations over Z_p: make the lower-right entry divide the lower-left one.
    let (a, b, c, d) = if vp(&g.c, p) < vp(&g.d, p) {
        (&g.b, &g.a, &g.d, &g.c)
    } else {
        (&g.a, &g.b, &g.c, &g.d)
    };
    let a1 = a - b * (c / d);
    let n = vp_finite(&a1, p) - vp_finite(d, p);
    let mu = b / d;
    Ok(VertexClass {
        prime: p,
        n,
        mu: digits_below(&mu, p, n),
    })
}

/// An oriented edge `(source, target)` between adjacent vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub source: VertexClass,
    pub target: VertexClass,
}

impl OrientedEdge {
    /// `([Z_p^2], [α Z_p^2])`.
    pub fn standard(p: Prime) -> Self {
        let root = VertexClass::root(p);
        OrientedEdge {
            target: root.parent(),
            source: root,
        }
    }

    pub fn new(source: VertexClass, target: VertexClass) -> Result<Self> {
        if !source.neighbors().contains(&target) {
            return Err(Error::OutOfRange("vertices are not adjacent".into()));
        }
        Ok(OrientedEdge { source, target })
    }

    pub fn flipped(&self) -> Self {
        OrientedEdge {
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// Canonical `γ` with `γ IZ` the coset of this edge.
    pub fn representative(&self) -> GL2Mat {
        let g0 = self.source.representative();
        if self.target.n < self.source.n {
            g0
        } else {
            let lambda = self.target.mu.get(&self.source.n).copied().unwrap_or(0);
            &g0 * &GL2Mat::from_ints(lambda as i64, 1, 1, 0).expect("invertible")
        }
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)
    }
}

/// The character `(a b; 0 d) ↦ ā^l d̄^m` of `IZ`, trivial on the scalar `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IZCharacter {
    prime: Prime,
    pub l: u64,
    pub m: u64,
}

impl IZCharacter {
    pub fn new(prime: Prime, l: i64, m: i64) -> Self {
        let q = prime.get() as i64 - 1;
        IZCharacter {
            prime,
            l: l.rem_euclid(q) as u64,
            m: m.rem_euclid(q) as u64,
        }
    }

    /// `d^r`.
    pub fn d_power(prime: Prime, r: i64) -> Self {
        Self::new(prime, 0, r)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// `h ↦ χ(β h β^{-1})`, which exchanges the roles of `a` and `d`.
    pub fn beta_conjugate(&self) -> Self {
        IZCharacter {
            prime: self.prime,
            l: self.m,
            m: self.l,
        }
    }

    /// `χ(h)` for `h ∈ IZ`; fails if `h ∉ IZ`.
    pub fn eval(&self, h: &GL2Mat) -> Result<Fp> {
        let p = self.prime;
        if h.a.is_zero() {
            return Err(Error::NotInIwahori);
        }
        let s = vp_finite(&h.a, p);
        let i = h.scale(&p.rational_pow(-s));
        if !i.is_integral(p) || !i.c.is_zero() && vp_finite(&i.c, p) < 1 {
            return Err(Error::NotInIwahori);
        }
        if i.d.is_zero() || vp_finite(&i.d, p) != 0 {
            return Err(Error::NotInIwahori);
        }
        let a = Fp::from_u64(p, residue(&i.a, p));
        let d = Fp::from_u64(p, residue(&i.d, p));
        Ok(a.pow(self.l) * d.pow(self.m))
    }
}

/// The edge of `g IZ` together with `χ(γ^{-1} g)` for the canonical representative `γ`,
/// so that `⟦g, v⟧ = ⟦γ, χ(γ^{-1} g) v⟧`.
pub fn canonicalize_edge(g: &GL2Mat, chi: &IZCharacter) -> Result<(OrientedEdge, Fp)> {
    let p = chi.prime;
    let source = canonicalize_vertex(g, p)?;
    // h0 = g_{n,μ}^{-1} g lies in KZ.
    let pn_inv = p.rational_pow(-source.n);
    let mu = source.mu_value();
    let h0 = GL2Mat {
        a: (&g.a - &mu * &g.c) * &pn_inv,
        b: (&g.b - &mu * &g.d) * &pn_inv,
        c: g.c.clone(),
        d: g.d.clone(),
    };
    let s = h0.min_valuation(p);
    // h0 ∈ p^s (λ 1; 1 0) I exactly when its lower-left entry is a unit multiple of p^s.
    let (target, h) = if !h0.c.is_zero() && vp_finite(&h0.c, p) == s {
        let lambda = residue(&(&h0.a / &h0.c), p);
        let mut mu = source.mu.clone();
        if lambda != 0 {
            mu.insert(source.n, lambda);
        }
        let l = int(lambda as i64);
        let h = GL2Mat {
            a: h0.c.clone(),
            b: h0.d.clone(),
            c: &h0.a - &l * &h0.c,
            d: &h0.b - &l * &h0.d,
        };
        let target = VertexClass {
            prime: p,
            n: source.n + 1,
            mu,
        };
        (target, h)
    } else {
        (source.parent(), h0)
    };
    let scalar = chi.eval(&h)?;
    Ok((OrientedEdge { source, target }, scalar))
}

/// A finitely supported function in `ind_{IZ}^G χ`, written as `Σ_e v_e ⟦γ_e, 1⟧`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeFunction {
    character: IZCharacter,
    support: BTreeMap<OrientedEdge, u64>,
}

impl EdgeFunction {
    pub fn zero(character: IZCharacter) -> Self {
        EdgeFunction {
            character,
            support: BTreeMap::new(),
        }
    }

    pub fn delta(character: IZCharacter, edge: OrientedEdge) -> Self {
        let mut f = Self::zero(character);
        f.add(edge, Fp::one(character.prime));
        f
    }

    pub fn character(&self) -> IZCharacter {
        self.character
    }

    pub fn support(&self) -> &BTreeMap<OrientedEdge, u64> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn value(&self, edge: &OrientedEdge) -> Fp {
        Fp::from_u64(self.character.prime, self.support.get(edge).copied().unwrap_or(0))
    }

    /// Add `v ⟦γ_e, 1⟧`, pruning zeros.
    pub fn add(&mut self, edge: OrientedEdge, v: Fp) {
        let new = self.value(&edge) + v;
        if new.is_zero() {
            self.support.remove(&edge);
        } else {
            self.support.insert(edge, new.value());
        }
    }

    /// Add `v ⟦g, 1⟧` for an arbitrary `g`.
    pub fn add_translate(&mut self, g: &GL2Mat, v: Fp) -> Result<()> {
        let (edge, s) = canonicalize_edge(g, &self.character)?;
        self.add(edge, s * v);
        Ok(())
    }

    pub fn scaled(&self, c: Fp) -> Self {
        let mut out = Self::zero(self.character);
        for (e, &v) in &self.support {
            out.add(e.clone(), Fp::from_u64(self.character.prime, v) * c);
        }
        out
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.character, other.character, "adding functions in different spaces");
        let mut out = self.clone();
        for (e, &v) in &other.support {
            out.add(e.clone(), Fp::from_u64(self.character.prime, v));
        }
        out
    }

    /// Right-translate every elementary function by each of `mats` and sum, landing in
    /// `ind χ'`.
    fn translate(&self, mats: &[GL2Mat], target: IZCharacter) -> Result<Self> {
        let mut out = Self::zero(target);
        for (edge, &v) in &self.support {
            let gamma = edge.representative();
            for m in mats {
                out.add_translate(&(&gamma * m), Fp::from_u64(target.prime, v))?;
            }
        }
        Ok(out)
    }
}

/// `T_{1,0} ⟦g, v⟧ = ⟦gβ, v⟧`, mapping `ind(a^l d^m)` to `ind(a^m d^l)`.
pub fn hecke_t10(f: &EdgeFunction) -> Result<EdgeFunction> {
    let p = f.character.prime;
    f.translate(&[GL2Mat::beta(p)], f.character.beta_conjugate())
}

/// `T_{-1,0} ⟦g, v⟧ = Σ_λ ⟦g (p λ; 0 1), v⟧`.
pub fn hecke_tm10(f: &EdgeFunction) -> Result<EdgeFunction> {
    let p = f.character.prime;
    let pi = p.get() as i64;
    let mats: Vec<GL2Mat> = (0..pi)
        .map(|l| GL2Mat::from_ints(pi, l, 0, 1).expect("invertible"))
        .collect();
    f.translate(&mats, f.character)
}

/// `T_{1,2} ⟦g, v⟧ = Σ_λ ⟦g (1 0; pλ p), v⟧`.
pub fn hecke_t12(f: &EdgeFunction) -> Result<EdgeFunction> {
    let p = f.character.prime;
    let pi = p.get() as i64;
    let mats: Vec<GL2Mat> = (0..pi)
        .map(|l| GL2Mat::from_ints(1, 0, pi * l, pi).expect("invertible"))
        .collect();
    f.translate(&mats, f.character)
}

/// `Σ_j c_j X^j Y^{r-j}` in `Sym^r F_p^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymVector {
    prime: Prime,
    coeffs: Vec<u64>,
}

impl SymVector {
    pub fn new(prime: Prime, coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() as u64 > prime.get() {
            return Err(Error::OutOfRange("degree must lie in [0, p-1]".into()));
        }
        Ok(SymVector {
            prime,
            coeffs: coeffs.iter().map(|&c| Fp::new(prime, c).value()).collect(),
        })
    }

    pub fn zero(prime: Prime, r: u32) -> Self {
        SymVector {
            prime,
            coeffs: vec![0; r as usize + 1],
        }
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    /// Coefficient of `X^j Y^{r-j}`.
    pub fn coeff(&self, j: usize) -> Fp {
        Fp::from_u64(self.prime, self.coeffs[j])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn add_assign(&mut self, other: &SymVector) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = (Fp::from_u64(self.prime, *a) + Fp::from_u64(self.prime, *b)).value();
        }
    }

    /// `v(aX + cY, bX + dY)` for `(a b; c d)` reduced mod `p`.
    pub fn substitute(&self, a: Fp, b: Fp, c: Fp, d: Fp) -> SymVector {
        let r = self.degree() as usize;
        let p = self.prime;
        let mut out = vec![Fp::zero(p); r + 1];
        // Powers of the linear forms as coefficient vectors in X^i Y^{deg-i}.
        let pow_form = |x: Fp, y: Fp, e: usize| -> Vec<Fp> {
            let mut poly = vec![Fp::one(p)];
            for _ in 0..e {
                let mut next = vec![Fp::zero(p); poly.len() + 1];
                for (i, &coef) in poly.iter().enumerate() {
                    next[i + 1] = next[i + 1] + coef * x;
                    next[i] = next[i] + coef * y;
                }
                poly = next;
            }
            poly
        };
        for j in 0..=r {
            let cj = self.coeff(j);
            if cj.is_zero() {
                continue;
            }
            let left = pow_form(a, c, j);
            let right = pow_form(b, d, r - j);
            for (i1, &u) in left.iter().enumerate() {
                for (i2, &w) in right.iter().enumerate() {
                    out[i1 + i2] = out[i1 + i2] + cj * u * w;
                }
            }
        }
        SymVector {
            prime: p,
            coeffs: out.into_iter().map(Fp::value).collect(),
        }
    }

    /// Action of `k ∈ KZ`, with `p` acting trivially.
    fn act(&self, k: &GL2Mat) -> Result<SymVector> {
        let p = self.prime;
        let k0 = k.scale(&p.rational_pow(-k.min_valuation(p)));
        if !k0.is_integral(p) || vp_finite(&k0.det(), p) != 0 {
            return Err(Error::OutOfRange("matrix is not in KZ".into()));
        }
        let red = |x: &BigRational| Fp::from_u64(p, residue(x, p));
        Ok(self.substitute(red(&k0.a), red(&k0.b), red(&k0.c), red(&k0.d)))
    }
}

/// A finitely supported function in `ind_{KZ}^G V_r`, written as `Σ_v [g_v, w_v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction {
    prime: Prime,
    r: u32,
    support: BTreeMap<VertexClass, SymVector>,
}

impl VertexFunction {
    pub fn zero(prime: Prime, r: u32) -> Result<Self> {
        if r as u64 >= prime.get() {
            return Err(Error::OutOfRange("r must lie in [0, p-1]".into()));
        }
        Ok(VertexFunction {
            prime,
            r,
            support: BTreeMap::new(),
        })
    }

    pub fn support(&self) -> &BTreeMap<VertexClass, SymVector> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Add `[g_v, w]` at a canonical vertex.
    pub fn add(&mut self, vertex: VertexClass, w: &SymVector) {
        assert_eq!(w.degree(), self.r, "vector of the wrong degree");
        let entry = self
            .support
            .entry(vertex.clone())
            .or_insert_with(|| SymVector::zero(self.prime, self.r));
        entry.add_assign(w);
        if entry.is_zero() {
            self.support.remove(&vertex);
        }
    }

    /// Add `[g, w]` for an arbitrary `g`, using `[g_v k, w] = [g_v, k·w]`.
    pub fn add_translate(&mut self, g: &GL2Mat, w: &SymVector) -> Result<()> {
        let v = canonicalize_vertex(g, self.prime)?;
        let k = &v.representative().inv() * g;
        let w = w.act(&k)?;
        self.add(v, &w);
        Ok(())
    }
}

/// `T[g, v] = Σ_λ [g (p λ; 0 1), v(X, -λX + pY)] + [gα, v(pX, Y)]`, substitutions mod `p`.
pub fn hecke_spherical_t(f: &VertexFunction) -> Result<VertexFunction> {
    let p = f.prime;
    let pi = p.get() as i64;
    let zero = Fp::zero(p);
    let one = Fp::one(p);
    let mut out = VertexFunction::zero(p, f.r)?;
    for (vertex, w) in &f.support {
        let g = vertex.representative();
        for l in 0..pi {
            let m = GL2Mat::from_ints(pi, l, 0, 1).expect("invertible");
            // v(X, -λX + pY) ≡ v(1·X + 0·Y, -λ·X + 0·Y)
            let sub = w.substitute(one, Fp::new(p, -l), zero, zero);
            out.add_translate(&(&g * &m), &sub)?;
        }
        let sub = w.substitute(zero, zero, zero, one);
        out.add_translate(&(&g * &GL2Mat::alpha(p)), &sub)?;
    }
    Ok(out)
}

/// All vertices within distance `radius` of `center`, in breadth-first order.
pub fn enumerate_ball(center: &VertexClass, radius: u32) -> Vec<VertexClass> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(center.clone());
    queue.push_back((center.clone(), 0));
    while let Some((v, dist)) = queue.pop_front() {
        if dist < radius {
            for u in v.neighbors() {
                if seen.insert(u.clone()) {
                    queue.push_back((u, dist + 1));
                }
            }
        }
        order.push(v);
    }
    order
}

/// The relations of the Iwahori–Hecke algebra of `ind_{IZ}^G d^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HeckeRelation {
    /// `T_{1,0}^2 = 1` (all `r`).
    FlipSquared,
    /// `T_{1,2} T_{1,0} T_{1,2} = -T_{1,2}` (`r ∈ {0, p-1}`).
    Braid,
    /// `T_{-1,0} = T_{1,0} T_{1,2} T_{1,0}` (`r ∈ {0, p-1}`).
    SourceViaSink,
    /// `T_{-1,0} T_{1,2} = 0` (`0 < r < p-1`).
    SourceAfterSink,
    /// `T_{1,2} T_{-1,0} = 0` (`0 < r < p-1`).
    SinkAfterSource,
}

impl HeckeRelation {
    pub fn name(self) -> &'static str {
        match self {
            HeckeRelation::FlipSquared => "T10^2 = 1",
            HeckeRelation::Braid => "T12 T10 T12 = -T12",
            HeckeRelation::SourceViaSink => "Tm10 = T10 T12 T10",
            HeckeRelation::SourceAfterSink => "Tm10 T12 = 0",
            HeckeRelation::SinkAfterSource => "T12 Tm10 = 0",
        }
    }

    /// Relations that hold on `ind_{IZ}^G d^r`.
    pub fn applicable(p: Prime, r: u32) -> Vec<HeckeRelation> {
        let mut out = vec![HeckeRelation::FlipSquared];
        if r == 0 || r as u64 == p.get() - 1 {
            out.extend([HeckeRelation::Braid, HeckeRelation::SourceViaSink]);
        } else {
            out.extend([HeckeRelation::SourceAfterSink, HeckeRelation::SinkAfterSource]);
        }
        out
    }

    /// Evaluate both sides on `f` and compare exactly.
    pub fn holds_on(self, f: &EdgeFunction) -> Result<bool> {
        self.holds_on_with(f, &mut HeckeCache::default())
    }

    pub fn holds_on_with(self, f: &EdgeFunction, cache: &mut HeckeCache) -> Result<bool> {
        use HeckeOp::*;
        let mut chain = |ops: &[HeckeOp]| -> Result<EdgeFunction> {
            // ops are applied right to left, as in the written product
            let mut g = f.clone();
            for &op in ops.iter().rev() {
                g = cache.apply(op, &g)?;
            }
            Ok(g)
        };
        Ok(match self {
            HeckeRelation::FlipSquared => chain(&[T10, T10])? == *f,
            HeckeRelation::Braid => {
                let lhs = chain(&[T12, T10, T12])?;
                lhs == chain(&[T12])?.scaled(Fp::new(f.character.prime, -1))
            }
            HeckeRelation::SourceViaSink => chain(&[Tm10])? == chain(&[T10, T12, T10])?,
            HeckeRelation::SourceAfterSink => chain(&[Tm10, T12])?.is_zero(),
            HeckeRelation::SinkAfterSource => chain(&[T12, Tm10])?.is_zero(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum HeckeOp {
    T10,
    Tm10,
    T12,
}

impl HeckeOp {
    pub fn apply(self, f: &EdgeFunction) -> Result<EdgeFunction> {
        match self {
            HeckeOp::T10 => hecke_t10(f),
            HeckeOp::Tm10 => hecke_tm10(f),
            HeckeOp::T12 => hecke_t12(f),
        }
    }
}

/// Memoized images `T(δ_e)`; by linearity `T f = Σ f(e) T(δ_e)`.
#[derive(Clone, Debug, Default)]
pub struct HeckeCache {
    images: BTreeMap<(HeckeOp, IZCharacter, OrientedEdge), EdgeFunction>,
}

impl HeckeCache {
    pub fn apply(&mut self, op: HeckeOp, f: &EdgeFunction) -> Result<EdgeFunction> {
        let chi = f.character;
        let target = match op {
            HeckeOp::T10 => chi.beta_conjugate(),
            _ => chi,
        };
        let mut out = EdgeFunction::zero(target);
        for (edge, &v) in &f.support {
            let key = (op, chi, edge.clone());
            if !self.images.contains_key(&key) {
                let image = op.apply(&EdgeFunction::delta(chi, edge.clone()))?;
                self.images.insert(key.clone(), image);
            }
            let v = Fp::from_u64(chi.prime, v);
            for (e, &w) in &self.images[&key].support {
                out.add(e.clone(), v * Fp::from_u64(chi.prime, w));
            }
        }
        Ok(out)
    }
}

/// A random function supported on at most `max_support` edges whose sources lie within
/// `max_depth` of the root. `below(n)` must return a uniform integer in `[0, n)`.
pub fn random_edge_function<R: FnMut(u64) -> u64>(
    character: IZCharacter,
    max_support: usize,
    max_depth: u32,
    mut below: R,
) -> EdgeFunction {
    let p = character.prime;
    let mut f = EdgeFunction::zero(character);
    let count = 1 + below(max_support as u64) as usize;
    for _ in 0..count {
        let mut v = VertexClass::root(p);
        for _ in 0..below(max_depth as u64 + 1) {
            let nb = v.neighbors();
            v = nb[below(nb.len() as u64) as usize].clone();
        }
        let nb = v.neighbors();
        let target = nb[below(nb.len() as u64) as usize].clone();
        let value = Fp::from_u64(p, 1 + below(p.get() - 1));
        f.add(OrientedEdge { source: v, target }, value);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    fn digits(pairs: &[(i64, u64)]) -> BTreeMap<i64, u64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn vertex_examples() {
        let p = p5();
        assert_eq!(canonicalize_vertex(&GL2Mat::identity(), p).unwrap(), VertexClass::root(p));
        let a = canonicalize_vertex(&GL2Mat::alpha(p), p).unwrap();
        assert_eq!((a.n, a.mu.is_empty()), (-1, true));
        let scalar = GL2Mat::scalar(int(5)).unwrap();
        assert_eq!(canonicalize_vertex(&scalar, p).unwrap(), VertexClass::root(p));
        let g = GL2Mat::from_ints(25, 7, 0, 1).unwrap();
        assert_eq!(canonicalize_vertex(&g, p).unwrap().mu, digits(&[(0, 2), (1, 1)]));
        assert!(GL2Mat::from_ints(1, 2, 2, 4).is_err());
    }

    #[test]
    fn neighbors_are_adjacent_lattices() {
        // Each neighbour of a vertex is the class of g·M for one of the p+1 index-p
        // sublattice matrices M.
        let p = p5();
        let v = VertexClass::new(p, 2, digits(&[(-1, 3), (1, 4)])).unwrap();
        let g = v.representative();
        let mut expected: Vec<VertexClass> = (0..5)
            .map(|l| canonicalize_vertex(&(&g * &GL2Mat::from_ints(5, l, 0, 1).unwrap()), p).unwrap())
            .collect();
        expected.push(canonicalize_vertex(&(&g * &GL2Mat::alpha(p)), p).unwrap());
        let mut got = v.neighbors();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn edge_examples() {
        let p = p5();
        let chi = IZCharacter::d_power(p, 3);
        let std_edge = OrientedEdge::standard(p);
        assert_eq!(canonicalize_edge(&GL2Mat::identity(), &chi).unwrap(), (std_edge.clone(), Fp::one(p)));
        let u = GL2Mat::from_ints(1, 1, 0, 1).unwrap();
        assert_eq!(canonicalize_edge(&u, &chi).unwrap(), (std_edge.clone(), Fp::one(p)));
        let s = GL2Mat::scalar(int(5)).unwrap();
        assert_eq!(canonicalize_edge(&s, &chi).unwrap(), (std_edge.clone(), Fp::one(p)));
        // diag(1, 2) ∈ I evaluates to 2^3.
        let d = GL2Mat::from_ints(1, 0, 0, 2).unwrap();
        assert_eq!(canonicalize_edge(&d, &chi).unwrap(), (std_edge, Fp::new(p, 8)));
    }

    #[test]
    fn edge_target_matches_translate_by_alpha() {
        let p = p5();
        let chi = IZCharacter::d_power(p, 0);
        for a in -3..4 {
            for b in -3..4 {
                for c in [-10i64, -5, 0, 1, 3, 25] {
                    for d in [1i64, 2, 5, 7] {
                        let Ok(g) = GL2Mat::from_ints(a, b, c, d) else { continue };
                        let (e, _) = canonicalize_edge(&g, &chi).unwrap();
                        assert_eq!(e.source, canonicalize_vertex(&g, p).unwrap());
                        assert_eq!(e.target, canonicalize_vertex(&(&g * &GL2Mat::alpha(p)), p).unwrap());
                        assert!(e.source.neighbors().contains(&e.target));
                    }
                }
            }
        }
    }

    #[test]
    fn standard_edge_operators() {
        let p = p5();
        let chi = IZCharacter::d_power(p, 0);
        let std_edge = OrientedEdge::standard(p);
        let delta = EdgeFunction::delta(chi, std_edge.clone());
        let flipped = hecke_t10(&delta).unwrap();
        assert_eq!(flipped, EdgeFunction::delta(chi, std_edge.flipped()));
        assert_eq!(hecke_t10(&flipped).unwrap(), delta);
        let source = hecke_tm10(&delta).unwrap();
        assert_eq!(source.support().len(), 5);
        assert!(source.support().keys().all(|e| e.target == std_edge.source));
        let sink = hecke_t12(&delta).unwrap();
        assert_eq!(sink.support().len(), 5);
        assert!(sink.support().keys().all(|e| e.source == std_edge.target));
        assert!(!sink.support().contains_key(&std_edge.flipped()));
        assert_ne!(source, sink);
        let zero = EdgeFunction::zero(chi);
        assert!(hecke_t10(&zero).unwrap().is_zero());
        assert!(hecke_tm10(&zero).unwrap().is_zero());
        assert!(hecke_t12(&zero).unwrap().is_zero());
    }

    #[test]
    fn spherical_examples() {
        let p = p5();
        let mut f = VertexFunction::zero(p, 0).unwrap();
        f.add(VertexClass::root(p), &SymVector::new(p, &[1]).unwrap());
        let t = hecke_spherical_t(&f).unwrap();
        let mut expected: Vec<_> = VertexClass::root(p).neighbors();
        expected.sort();
        assert_eq!(t.support().keys().cloned().collect::<Vec<_>>(), expected);
        assert!(t.support().values().all(|w| w.coeffs() == [1]));

        // r = 2, v = Y^2: the λ-translates carry λ^2 X^2, the α-translate carries Y^2.
        let mut f = VertexFunction::zero(p, 2).unwrap();
        f.add(VertexClass::root(p), &SymVector::new(p, &[1, 0, 0]).unwrap());
        let t = hecke_spherical_t(&f).unwrap();
        for l in 1..5u64 {
            let v = canonicalize_vertex(&GL2Mat::from_ints(5, l as i64, 0, 1).unwrap(), p).unwrap();
            assert_eq!(t.support()[&v], SymVector::new(p, &[0, 0, (l * l) as i64]).unwrap());
        }
        let v0 = canonicalize_vertex(&GL2Mat::from_ints(5, 0, 0, 1).unwrap(), p).unwrap();
        assert!(!t.support().contains_key(&v0));
        let va = canonicalize_vertex(&GL2Mat::alpha(p), p).unwrap();
        assert_eq!(t.support()[&va], SymVector::new(p, &[1, 0, 0]).unwrap());
        assert!(hecke_spherical_t(&VertexFunction::zero(p, 2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn ball_sizes() {
        for pv in [5u64, 7] {
            let p = Prime::new(pv).unwrap();
            for d in 0..4u32 {
                let expected = 1 + (pv + 1) * (pv.pow(d) - 1) / (pv - 1);
                assert_eq!(enumerate_ball(&VertexClass::root(p), d).len() as u64, expected);
            }
        }
    }

    #[test]
    fn substitution_is_an_action() {
        let p = Prime::new(7).unwrap();
        let v = SymVector::new(p, &[1, 2, 3, 4]).unwrap();
        let f = |x| Fp::new(p, x);
        let (g, h) = ((f(1), f(2), f(3), f(5)), (f(4), f(1), f(6), f(2)));
        // (k·v)(X,Y) = v((X,Y)k), so g·(h·v) = (gh)·v.
        let gh = (
            g.0 * h.0 + g.1 * h.2,
            g.0 * h.1 + g.1 * h.3,
            g.2 * h.0 + g.3 * h.2,
            g.2 * h.1 + g.3 * h.3,
        );
        let lhs = v.substitute(h.0, h.1, h.2, h.3).substitute(g.0, g.1, g.2, g.3);
        let rhs = v.substitute(gh.0, gh.1, gh.2, gh.3);
        assert_eq!(lhs, rhs);
    }

    fn unit_matrix_in_i() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (1i64..5, -20i64..20, -4i64..4, 1i64..5).prop_map(|(a, b, c, d)| (a, b, 5 * c, d))
    }

    #[test]
    fn cached_operators_match_direct() {
        let p = p5();
        let mut state = 7u64;
        let mut below = move |n: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % n
        };
        for r in [0i64, 2, 4] {
            let chi = IZCharacter::d_power(p, r);
            let mut cache = HeckeCache::default();
            for _ in 0..10 {
                let f = random_edge_function(chi, 4, 2, &mut below);
                for op in [HeckeOp::T10, HeckeOp::Tm10, HeckeOp::T12] {
                    assert_eq!(cache.apply(op, &f).unwrap(), op.apply(&f).unwrap());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30, r in 0i64..4) {
            let p = p5();
            let Ok(g) = GL2Mat::from_ints(a, b, c, d) else { return Ok(()) };
            let chi = IZCharacter::d_power(p, r);
            let (e, _) = canonicalize_edge(&g, &chi).unwrap();
            prop_assert_eq!(canonicalize_edge(&e.representative(), &chi).unwrap(), (e, Fp::one(p)));
        }

        #[test]
        fn equivariance_under_iz(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30,
                                  h in unit_matrix_in_i(), s in -2i64..3, l in 0i64..4, m in 0i64..4) {
            let p = p5();
            let Ok(g) = GL2Mat::from_ints(a, b, c, d) else { return Ok(()) };
            let Ok(h) = GL2Mat::from_ints(h.0, h.1, h.2, h.3) else { return Ok(()) };
            let h = h.scale(&p.rational_pow(s));
            let chi = IZCharacter::new(p, l, m);
            let (e, x) = canonicalize_edge(&g, &chi).unwrap();
            let (e2, y) = canonicalize_edge(&(&g * &h), &chi).unwrap();
            prop_assert_eq!(e, e2);
            prop_assert_eq!(y, x * chi.eval(&h).unwrap());
        }
    }
}
