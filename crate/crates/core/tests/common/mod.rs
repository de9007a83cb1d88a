//! Brute-force oracles built only from ring arithmetic and exhaustive search.
#![allow(dead_code)]

use ffprog::field::{make_field, FieldRef};
use ffprog::poly::Poly;

pub fn field(q: u32) -> FieldRef {
    let (mut p, mut k) = (2u32, 0u32);
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut r = q;
    while r > 1 {
        assert_eq!(r % p, 0, "not a prime power");
        r /= p;
        k += 1;
    }
    make_field(p as u64, k).unwrap()
}

pub fn poly(f: &FieldRef, s: &str) -> Poly {
    Poly::parse(f, s).unwrap()
}

/// Every monic polynomial of degree d, from explicit coefficient vectors.
pub fn monics(f: &FieldRef, d: usize) -> Vec<Poly> {
    let q = f.q();
    let total = (q as u64).pow(d as u32);
    (0..total)
        .map(|mut i| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((i % q as u64) as u32);
                i /= q as u64;
            }
            c.push(1);
            Poly::new(f, c)
        })
        .collect()
}

/// Irreducible by trial division against every monic of degree 1..=d/2.
pub fn is_irreducible_brute(p: &Poly) -> bool {
    let d = p.deg();
    if d == 0 {
        return false;
    }
    (1..=d / 2).all(|e| monics(p.field(), e).iter().all(|h| !h.divides(p)))
}

pub fn irreducibles_brute(f: &FieldRef, d: usize) -> Vec<Poly> {
    monics(f, d).into_iter().filter(is_irreducible_brute).collect()
}

/// Factorization by repeated trial division with monics of increasing degree.
pub fn factor_brute(f: &Poly) -> Vec<(Poly, u32)> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut d = 1;
    while rest.deg() > 0 {
        if 2 * d > rest.deg() {
            out.push((rest.clone(), 1));
            break;
        }
        for h in monics(f.field(), d) {
            let mut e = 0;
            while rest.deg() > 0 && h.divides(&rest) {
                rest = rest.divrem(&h).unwrap().0;
                e += 1;
            }
            if e > 0 {
                out.push((h, e));
            }
        }
        d += 1;
    }
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, e) in out {
        match merged.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += e,
            None => merged.push((p, e)),
        }
    }
    merged.sort_by(|a, b| {
        let key = |p: &Poly| (p.deg(), p.coeffs().iter().rev().copied().collect::<Vec<u32>>());
        key(&a.0).cmp(&key(&b.0))
    });
    merged
}

pub fn mobius_brute(f: &Poly) -> i32 {
    let fac = factor_brute(f);
    if fac.iter().any(|(_, e)| *e > 1) {
        0
    } else if fac.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sorted (degree, exponent) pairs of the brute-force factorization.
pub fn eft_pairs_brute(f: &Poly) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = factor_brute(f).iter().map(|(p, e)| (p.deg() as u32, *e)).collect();
    v.sort_unstable();
    v
}

/// Number of ordered k-tuples of monics with product f.
pub fn divisor_k_brute(f: &Poly, k: u32) -> u128 {
    if k == 1 {
        return 1;
    }
    let mut total = 0;
    for d in 0..=f.deg() {
        for h in monics(f.field(), d) {
            if h.divides(f) {
                total += divisor_k_brute(&f.divrem(&h).unwrap().0, k - 1);
            }
        }
    }
    total
}

/// F'^h (or F''^h when distinct) by enumerating ordered prime tuples.
pub fn prime_tuple_brute(h: &Poly, ns: &[u32], f: &Poly, distinct: bool) -> u128 {
    fn rec(h: &Poly, ns: &[u32], i: usize, rest: &Poly, used: &mut Vec<Poly>, distinct: bool) -> u128 {
        if i == ns.len() {
            return rest.is_one() as u128;
        }
        let mut total = 0;
        for p in irreducibles_brute(rest.field(), ns[i] as usize) {
            if p.divides(h) || !p.divides(rest) || (distinct && used.contains(&p)) {
                continue;
            }
            used.push(p.clone());
            total += rec(h, ns, i + 1, &rest.divrem(&p).unwrap().0, used, distinct);
            used.pop();
        }
        total
    }
    let count = rec(h, ns, 0, f, &mut Vec::new(), distinct);
    count * ns.iter().map(|&n| n as u128).product::<u128>()
}

pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn gcd_is_one_brute(a: &Poly, g: &Poly) -> bool {
    (1..=g.deg()).all(|d| monics(g.field(), d).iter().all(|h| !(h.divides(a) && h.divides(g))))
}
