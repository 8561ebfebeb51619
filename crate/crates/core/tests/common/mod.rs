//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use semistable_core::tree::{EdgeFunction, OrientedEdge};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn harmonic(n: u32) -> BigRational {
    let mut s = BigRational::zero();
    for i in 1..=n {
        s += q(1, i as i64);
    }
    s
}

/// `H_{v_-} + H_{v_+}` for the two integers nearest `r/2`.
pub fn shift_constant(r: u32) -> BigRational {
    let (a, b) = if r % 2 == 0 { (r / 2 - 1, r / 2 + 1) } else { ((r - 1) / 2, (r + 1) / 2) };
    harmonic(a) + harmonic(b)
}

pub fn binom_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn mod_inv(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a % p * x % p == 1).expect("unit")
}

/// `(-1)^i i C(r+1-i, i) u mod p` for a unit `u = num/den`.
pub fn hand_lambda(p: u64, r: u32, i: u32, num: i64, den: i64) -> u64 {
    let u = num.rem_euclid(p as i64) as u64 * mod_inv(den.rem_euclid(p as i64) as u64, p) % p;
    let c = binom_u64((r + 1 - i) as u64, i as u64) % p;
    let v = i as u64 % p * c % p * u % p;
    if i % 2 == 1 {
        (p - v) % p
    } else {
        v
    }
}

/// Graph oracles on `ind_{IZ}^G 1`: δ_(v,w) ↦ δ_(w,v), Σ_{u~v, u≠w} δ_(u,v), Σ_{u~w, u≠v} δ_(w,u).
pub fn graph_flip(f: &EdgeFunction) -> EdgeFunction {
    let mut out = EdgeFunction::zero(f.character());
    for (e, _) in f.support() {
        out.add(e.flipped(), f.value(e));
    }
    out
}

pub fn graph_source(f: &EdgeFunction) -> EdgeFunction {
    let mut out = EdgeFunction::zero(f.character());
    for (e, _) in f.support() {
        for u in e.source.neighbors() {
            if u != e.target {
                out.add(OrientedEdge { source: u, target: e.source.clone() }, f.value(e));
            }
        }
    }
    out
}

pub fn graph_sink(f: &EdgeFunction) -> EdgeFunction {
    let mut out = EdgeFunction::zero(f.character());
    for (e, _) in f.support() {
        for u in e.target.neighbors() {
            if u != e.source {
                out.add(OrientedEdge { source: e.target.clone(), target: u }, f.value(e));
            }
        }
    }
    out
}

/// Solves `Σ_i λ_i i^j = p^j`, `0 ≤ i, j ≤ n`, by Gauss–Jordan elimination.
pub fn gauss_lambdas(n: u32, p: u64) -> Vec<BigRational> {
    let size = n as usize + 1;
    let mut rows: Vec<Vec<BigRational>> = (0..size)
        .map(|j| {
            let mut row: Vec<BigRational> =
                (0..size).map(|i| num_traits::pow(q(i as i64, 1), j)).collect();
            row.push(num_traits::pow(q(p as i64, 1), j));
            row
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !rows[r][col].is_zero()).expect("nonsingular");
        rows.swap(col, pivot);
        let inv = BigRational::one() / &rows[col][col];
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..size {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=size {
                    let sub = &f * &rows[col][c];
                    rows[r][c] -= sub;
                }
            }
        }
    }
    rows.into_iter().map(|r| r[size].clone()).collect()
}

/// `(p, r, n)` with `p ∈ {5, 7}`, `2 ≤ r ≤ p-1` and `(r+2)/2 < n ≤ r`.
pub fn admissible_triples() -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in [5u64, 7] {
        for r in 2..p as u32 {
            for n in 1..=r {
                if 2 * n > r + 2 {
                    out.push((p, r, n));
                }
            }
        }
    }
    out
}
