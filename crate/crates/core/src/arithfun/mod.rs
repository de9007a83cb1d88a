//! Arithmetic functions of monic polynomials: mu, Lambda, d_k, the
//! factorization function F_rho of a representation, and the convolution and
//! sieve functions built from prime tuples.

mod eft;
mod sieve;

pub use eft::Eft;
pub use sieve::{
    eft_indicator, eft_indicator_direct, f_prime, f_prime2, f_tuple, partition_sieve_check, PrimeData,
};

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::poly::Poly;
use crate::symrep::partition::{class_table, Partition};
use crate::symrep::VirtualCharacter;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub fn mobius(f: &Poly) -> Result<i32> {
    Ok(mobius_eft(&Eft::of(f)?))
}

pub fn mobius_eft(w: &Eft) -> i32 {
    if !w.is_squarefree() {
        0
    } else if w.pairs().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn von_mangoldt(f: &Poly) -> Result<u32> {
    Ok(von_mangoldt_eft(&Eft::of(f)?))
}

pub fn von_mangoldt_eft(w: &Eft) -> u32 {
    match w.pairs() {
        [(d, _)] => *d,
        _ => 0,
    }
}

/// Number of ordered k-tuples of monic polynomials with product f.
pub fn divisor_k(f: &Poly, k: u32) -> Result<u128> {
    Ok(divisor_k_eft(&Eft::of(f)?, k))
}

pub fn divisor_k_eft(w: &Eft, k: u32) -> u128 {
    if k == 0 {
        return if w.pairs().is_empty() { 1 } else { 0 };
    }
    w.pairs()
        .iter()
        .map(|&(_, e)| {
            // C(e + k - 1, k - 1)
            let (top, r) = ((e + k - 1) as u128, (k - 1).min(e) as u128);
            (0..r).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
        })
        .product()
}

/// Number of tuples (a_1..a_n) of roots of f (with multiplicity) fixed by
/// Frobenius composed with a permutation of cycle type lambda, where f has
/// factorization type w.
///
/// Each cycle of length c is assigned to a prime of degree d dividing c; it
/// consumes c/d copies of that prime's multiplicity and has d choices of
/// starting root.
pub fn fix_count(lambda: &Partition, w: &Eft) -> Result<u128> {
    if lambda.n() != w.n() {
        return Err(Error::DegreeMismatch { expected: w.n() as usize, got: lambda.n() as usize });
    }
    let rem: Vec<u32> = lambda.multiplicities();
    let mut memo = HashMap::new();
    Ok(fix_rec(w.pairs(), 0, &rem, &mut memo))
}

fn fix_rec(primes: &[(u32, u32)], i: usize, rem: &[u32], memo: &mut HashMap<(usize, Vec<u32>), u128>) -> u128 {
    if i == primes.len() {
        return rem.iter().all(|&r| r == 0) as u128;
    }
    let key = (i, rem.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let (d, l) = primes[i];
    // cycle lengths available to this prime: multiples of d up to d*l
    let lengths: Vec<usize> = (1..=l).map(|j| (j * d) as usize).filter(|&c| c < rem.len() && rem[c] > 0).collect();
    let mut total = 0u128;
    let mut cur = rem.to_vec();
    choose(&lengths, 0, l, d, &mut cur, 1, &mut |cur, ways| {
        total += ways * fix_rec(primes, i + 1, cur, memo);
    });
    memo.insert(key, total);
    total
}

/// Chooses j_c cycles of each length c (a multiple of d) with sum j_c c/d = need.
fn choose(
    lengths: &[usize],
    idx: usize,
    need: u32,
    d: u32,
    cur: &mut Vec<u32>,
    ways: u128,
    f: &mut impl FnMut(&[u32], u128),
) {
    if need == 0 {
        f(cur, ways);
        return;
    }
    if idx == lengths.len() {
        return;
    }
    let c = lengths[idx];
    let per = c as u32 / d;
    let avail = cur[c];
    for j in 0..=avail.min(need / per) {
        let mut w = ways;
        // C(avail, j) * d^j
        let mut binom = 1u128;
        for t in 0..j as u128 {
            binom = binom * (avail as u128 - t) / (t + 1);
        }
        w *= binom * (d as u128).pow(j);
        cur[c] -= j;
        choose(lengths, idx + 1, need - j * per, d, cur, w, f);
        cur[c] += j;
    }
}

/// fix_count for every cycle type of S_n, cached per EFT.
pub fn fix_vector(w: &Eft) -> Arc<Vec<u128>> {
    static CACHE: OnceLock<Mutex<HashMap<Eft, Arc<Vec<u128>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(w) {
        return v.clone();
    }
    let t = class_table(w.n());
    let v: Vec<u128> = t.classes.iter().map(|l| fix_count(l, w).expect("same weight")).collect();
    let v = Arc::new(v);
    cache.lock().unwrap().insert(w.clone(), v.clone());
    v
}

/// F_rho on the factorization type w: sum over cycle types of
/// chi(lambda) fix(lambda, w) / z(lambda), which must be an integer.
pub fn f_rho_eft(chi: &VirtualCharacter, w: &Eft) -> Result<i64> {
    if chi.n() != w.n() {
        return Err(Error::DegreeMismatch { expected: chi.n() as usize, got: w.n() as usize });
    }
    let t = class_table(chi.n());
    let fix = fix_vector(w);
    let mut num: i128 = 0;
    for i in 0..t.classes.len() {
        num += chi.values()[i] as i128 * fix[i] as i128 * t.sizes[i] as i128;
    }
    let order = t.order as i128;
    if num % order != 0 {
        return Err(Error::NonIntegral(format!("F_rho on {w}: {num}/{order}")));
    }
    Ok((num / order) as i64)
}

pub fn f_rho(chi: &VirtualCharacter, f: &Poly) -> Result<i64> {
    if chi.n() as usize != f.deg() {
        return Err(Error::DegreeMismatch { expected: chi.n() as usize, got: f.deg() });
    }
    f_rho_eft(chi, &Eft::of(f)?)
}

/// All monic divisors of f.
pub fn divisors(f: &Poly) -> Result<Vec<Poly>> {
    let fac = factor(f)?;
    let mut out = vec![Poly::one(f.field())];
    for (p, e) in &fac.factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..*e {
                cur = cur.mul(p);
                next.push(cur.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}
