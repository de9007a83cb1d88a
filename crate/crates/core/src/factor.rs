//! Factorization of monic polynomials: squarefree split, distinct-degree
//! split, then Cantor–Zassenhaus equal-degree splitting with a fixed seed.

use crate::error::{Error, Result};
use crate::field::{prime_factors, FieldRef};
use crate::poly::Poly;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EDF_SEED: u64 = 0x00ff_1234_5eed;

/// Sorted list of (monic irreducible, exponent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Multiplies the factors back together.
    pub fn product(&self, field: &FieldRef) -> Poly {
        self.factors.iter().fold(Poly::one(field), |acc, (p, e)| acc.mul(&p.pow(*e as u64)))
    }

    /// Multiset of (degree, exponent) pairs, sorted.
    pub fn degree_pairs(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self.factors.iter().map(|(p, e)| (p.deg() as u32, *e)).collect();
        v.sort_unstable();
        v
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }
}

/// Factors a monic nonzero polynomial.
pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut out: Vec<(Poly, u32)> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED ^ f.deg() as u64);
    for (sf, e) in squarefree_decomposition(f) {
        for (g, d) in distinct_degree(&sf) {
            let mut pieces = Vec::new();
            equal_degree(&g, d, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|p| (p, e)));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { factors: out })
}

/// Yun-style squarefree decomposition in characteristic p: returns pairs
/// (squarefree monic part, multiplicity) with pairwise coprime parts.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.p();
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.exact_div(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, e) in squarefree_decomposition(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// Inverse Frobenius on a polynomial whose derivative vanishes.
fn pth_root(c: &Poly) -> Poly {
    let field = c.field();
    let p = field.p() as usize;
    let e = (field.q() / field.p()) as u64;
    let coeffs: Vec<u32> = c.coeffs().iter().step_by(p).map(|&a| field.pow(a, e)).collect();
    Poly::new(field, coeffs)
}

/// Splits a squarefree monic polynomial into products of irreducibles of a
/// common degree: returns (product, degree) pairs.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = BigUint::from(field.q());
    let t = Poly::monomial(&field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.rem(&rest).expect("nonzero");
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.powmod(&q, &rest).expect("nonzero");
        let g = h.sub(&t).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dd = rest.deg();
        out.push((rest, dd));
    }
    out
}

fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if g.deg() == d {
        out.push(g.clone());
        return;
    }
    let field = g.field().clone();
    let q = field.q();
    let n = g.deg();
    loop {
        let a: Vec<u32> = (0..n).map(|_| rng.random_range(0..q)).collect();
        let a = Poly::new(&field, a);
        if a.deg() == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.powmod(&e, g).expect("nonzero").sub(&Poly::one(&field))
        } else {
            // absolute trace to F_2
            let k = field.k() as usize;
            let mut acc = Poly::zero(&field);
            let mut cur = a.rem(g).expect("nonzero");
            for _ in 0..k * d {
                acc = acc.add(&cur);
                cur = cur.mulmod(&cur, g);
            }
            acc
        };
        let h = b.gcd(g);
        if !h.is_one() && h.deg() < n {
            let other = g.exact_div(&h);
            equal_degree(&h, d, rng, out);
            equal_degree(&other, d, rng, out);
            return;
        }
    }
}

/// Rabin's irreducibility test for monic f.
pub fn is_irreducible(f: &Poly) -> bool {
    let n = f.deg();
    if f.is_zero() || n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let field = f.field().clone();
    let t = Poly::monomial(&field, 1);
    let q = BigUint::from(field.q());
    let frob = |times: usize| -> Poly {
        let mut h = t.rem(f).expect("nonzero");
        for _ in 0..times {
            h = h.powmod(&q, f).expect("nonzero");
        }
        h
    };
    for r in prime_factors(n as u64) {
        let h = frob(n / r as usize);
        if !h.sub(&t).gcd(f).is_one() {
            return false;
        }
    }
    frob(n) == t.rem(f).expect("nonzero")
}

/// Number of monic irreducibles of degree d over F_q (necklace formula).
pub fn count_irreducible(d: u32, q: u64) -> u128 {
    assert!(d >= 1);
    let mut total: i128 = 0;
    for e in 1..=d {
        if d.is_multiple_of(e) {
            total += moebius_int(e as u64) as i128 * (q as i128).pow(d / e);
        }
    }
    (total / d as i128) as u128
}

pub fn moebius_int(n: u64) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// All monic irreducibles of degree d, in enumeration order.
pub fn enumerate_irreducible(field: &FieldRef, d: usize) -> Vec<Poly> {
    let set = crate::enumerate::MonicSet::all(field, d);
    let found = crate::par::map_chunks(set.len() as usize, 4096, |r| {
        r.map(|i| set.get(i as u64)).filter(is_irreducible).collect::<Vec<_>>()
    });
    found.into_iter().flatten().collect()
}
