//! Prime-tuple functions F_{n_1..n_w}, F'^h, F''^h, the partition sieve that
//! recovers F'' from F', and the factorization-type indicator built from F''.

use super::eft::Eft;
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::poly::Poly;
use std::collections::HashMap;

/// The prime factorization of f as parallel vectors.
#[derive(Clone, Debug)]
pub struct PrimeData {
    pub primes: Vec<Poly>,
    pub degrees: Vec<u32>,
    pub exps: Vec<u32>,
}

impl PrimeData {
    pub fn of(f: &Poly) -> Result<PrimeData> {
        let fac = factor(f)?;
        Ok(PrimeData {
            degrees: fac.factors.iter().map(|(p, _)| p.deg() as u32).collect(),
            exps: fac.factors.iter().map(|(_, e)| *e).collect(),
            primes: fac.factors.into_iter().map(|(p, _)| p).collect(),
        })
    }

    fn eft_of_exps(&self, exps: &[u32]) -> Eft {
        let pairs = self.degrees.iter().zip(exps).filter(|(_, &e)| e > 0).map(|(&d, &e)| (d, e)).collect();
        Eft::new(pairs).expect("positive pairs")
    }
}

fn check_sum(ns: &[u32], f: &Poly) -> Result<()> {
    let s: u32 = ns.iter().sum();
    if s as usize != f.deg() {
        return Err(Error::DegreeMismatch { expected: f.deg(), got: s as usize });
    }
    Ok(())
}

/// Sum over ordered f = f_1...f_w with deg f_i = n_i of prod Lambda(f_i).
pub fn f_tuple(ns: &[u32], f: &Poly) -> Result<u128> {
    check_sum(ns, f)?;
    let pd = PrimeData::of(f)?;
    let mut memo = HashMap::new();
    Ok(tuple_rec(&pd, ns, 0, &mut pd.exps.clone(), &mut memo))
}

fn tuple_rec(
    pd: &PrimeData,
    ns: &[u32],
    i: usize,
    rem: &mut Vec<u32>,
    memo: &mut HashMap<(usize, Vec<u32>), u128>,
) -> u128 {
    if i == ns.len() {
        return rem.iter().all(|&e| e == 0) as u128;
    }
    let key = (i, rem.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for j in 0..rem.len() {
        let d = pd.degrees[j];
        if !ns[i].is_multiple_of(d) {
            continue;
        }
        let r = ns[i] / d;
        if rem[j] >= r {
            rem[j] -= r;
            total += d as u128 * tuple_rec(pd, ns, i + 1, rem, memo);
            rem[j] += r;
        }
    }
    memo.insert(key, total);
    total
}

/// Ordered tuples of primes f_i of degree n_i, none dividing h, with product
/// f, each weighted by prod n_i. With `distinct`, the f_i must be distinct.
fn prime_tuple_sum(h: &Poly, ns: &[u32], f: &Poly, distinct: bool) -> Result<u128> {
    let s: u32 = ns.iter().sum();
    if s as usize != f.deg() {
        return Ok(0);
    }
    let pd = PrimeData::of(f)?;
    let allowed: Vec<bool> = pd.primes.iter().map(|p| !p.divides(h)).collect();
    if allowed.iter().any(|a| !a) {
        return Ok(0);
    }
    let mut memo = HashMap::new();
    let count = prime_rec(&pd, ns, 0, &mut pd.exps.clone(), distinct, &mut memo);
    let weight: u128 = ns.iter().map(|&n| n as u128).product();
    Ok(count * weight)
}

fn prime_rec(
    pd: &PrimeData,
    ns: &[u32],
    i: usize,
    rem: &mut Vec<u32>,
    distinct: bool,
    memo: &mut HashMap<(usize, Vec<u32>), u128>,
) -> u128 {
    if i == ns.len() {
        return rem.iter().all(|&e| e == 0) as u128;
    }
    let key = (i, rem.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for j in 0..rem.len() {
        if pd.degrees[j] != ns[i] || rem[j] == 0 || (distinct && rem[j] < pd.exps[j]) {
            continue;
        }
        rem[j] -= 1;
        total += prime_rec(pd, ns, i + 1, rem, distinct, memo);
        rem[j] += 1;
    }
    memo.insert(key, total);
    total
}

/// F'^h_{n_1..n_w}(f). Zero when the degrees do not sum to deg f.
pub fn f_prime(h: &Poly, ns: &[u32], f: &Poly) -> Result<u128> {
    prime_tuple_sum(h, ns, f, false)
}

/// F''^h_{n_1..n_w}(f): as F' with the primes required to be distinct.
pub fn f_prime2(h: &Poly, ns: &[u32], f: &Poly) -> Result<u128> {
    check_sum(ns, f)?;
    prime_tuple_sum(h, ns, f, true)
}

/// Set partitions of 0..w whose blocks have constant n_i.
fn admissible_partitions(ns: &[u32]) -> Vec<Vec<Vec<usize>>> {
    fn rec(ns: &[u32], i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == ns.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            if ns[blocks[b][0]] == ns[i] {
                blocks[b].push(i);
                rec(ns, i + 1, blocks, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![i]);
        rec(ns, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    rec(ns, 0, &mut Vec::new(), &mut out);
    out
}

/// The inclusion-exclusion side of the partition sieve: the sum over
/// admissible partitions P and injective prime labellings v of the blocks of
/// size >= 2 of (-1)^{|P>=2|} F'^{h H(v)}_{(n_i), i outside s(P)}(f / H(v)) prod_{i in s(P)} n_i.
pub fn partition_sieve_check(h: &Poly, ns: &[u32], f: &Poly) -> Result<i128> {
    check_sum(ns, f)?;
    let pd = PrimeData::of(f)?;
    let mut total: i128 = 0;
    for p in admissible_partitions(ns) {
        let big: Vec<&Vec<usize>> = p.iter().filter(|b| b.len() >= 2).collect();
        let sign: i128 = if big.len().is_multiple_of(2) { 1 } else { -1 };
        let in_s: Vec<bool> = (0..ns.len()).map(|i| big.iter().any(|b| b.contains(&i))).collect();
        let rest: Vec<u32> = (0..ns.len()).filter(|&i| !in_s[i]).map(|i| ns[i]).collect();
        let s_weight: i128 = (0..ns.len()).filter(|&i| in_s[i]).map(|i| ns[i] as i128).product();
        // only primes of f can make H(v) divide f
        let mut labels = vec![usize::MAX; big.len()];
        let mut acc: i128 = 0;
        label_blocks(&pd, h, &big, ns, 0, &mut labels, &mut |labels| {
            let mut hv = Poly::one(f.field());
            for (b, &j) in big.iter().zip(labels) {
                hv = hv.mul(&pd.primes[j].pow(b.len() as u64));
            }
            if !hv.divides(f) {
                return Ok(());
            }
            let v = f_prime(&h.mul(&hv), &rest, &f.exact_div(&hv))?;
            acc += v as i128;
            Ok(())
        })?;
        total += sign * acc * s_weight;
    }
    Ok(total)
}

fn label_blocks(
    pd: &PrimeData,
    h: &Poly,
    big: &[&Vec<usize>],
    ns: &[u32],
    k: usize,
    labels: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if k == big.len() {
        return f(labels);
    }
    let n_s = ns[big[k][0]];
    for j in 0..pd.primes.len() {
        if pd.degrees[j] != n_s || labels[..k].contains(&j) || pd.primes[j].divides(h) {
            continue;
        }
        labels[k] = j;
        label_blocks(pd, h, big, ns, k + 1, labels, f)?;
    }
    labels[k] = usize::MAX;
    Ok(())
}

/// The indicator of eft_of(f) = w through the identity
/// (1/prod n_i)(1/prod_k #{i : n_i = k}!) sum_{h | f, eft(h) = w>=2} F''^h_{n_1..n_r}(f/h).
pub fn eft_indicator(w: &Eft, f: &Poly) -> Result<u8> {
    if w.n() as usize != f.deg() {
        return Err(Error::DegreeMismatch { expected: f.deg(), got: w.n() as usize });
    }
    let pd = PrimeData::of(f)?;
    let target = w.squareful_part();
    let ns = w.simple_degrees();
    let mut total: u128 = 0;
    let mut exps = vec![0u32; pd.primes.len()];
    loop {
        if pd.eft_of_exps(&exps) == target {
            let mut h = Poly::one(f.field());
            for (p, &e) in pd.primes.iter().zip(&exps) {
                h = h.mul(&p.pow(e as u64));
            }
            total += f_prime2(&h, &ns, &f.exact_div(&h))?;
        }
        // next exponent vector below pd.exps
        let mut i = 0;
        while i < exps.len() && exps[i] == pd.exps[i] {
            exps[i] = 0;
            i += 1;
        }
        if i == exps.len() {
            break;
        }
        exps[i] += 1;
    }
    let mut denom: u128 = ns.iter().map(|&n| n as u128).product();
    let mut counts: HashMap<u32, u128> = HashMap::new();
    for &n in &ns {
        *counts.entry(n).or_default() += 1;
    }
    for &c in counts.values() {
        denom *= (1..=c).product::<u128>();
    }
    if !total.is_multiple_of(denom) || total / denom > 1 {
        return Err(Error::NonIntegral(format!("indicator sum {total}/{denom}")));
    }
    Ok((total / denom) as u8)
}

/// The same indicator by comparing factorization types directly.
pub fn eft_indicator_direct(w: &Eft, f: &Poly) -> Result<u8> {
    Ok((Eft::of(f)? == *w) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn examples() {
        let f2 = make_field(2, 1).unwrap();
        let f = |s: &str| Poly::parse(&f2, s).unwrap();
        let one = Poly::one(&f2);
        assert_eq!(f_prime2(&one, &[1, 1], &f("0,1,1")).unwrap(), 2);
        assert_eq!(f_prime2(&one, &[1, 1], &f("0,0,1")).unwrap(), 0);
        assert_eq!(f_prime(&one, &[1, 1], &f("0,0,1")).unwrap(), 1);
        assert_eq!(partition_sieve_check(&one, &[1, 1], &f("0,0,1")).unwrap(), 0);
        assert_eq!(f_tuple(&[3], &f("0,0,0,1")).unwrap(), 1);
        assert_eq!(f_tuple(&[2, 1], &f("0,0,0,1")).unwrap(), 1);
        let w = Eft::new(vec![(1, 1), (1, 1)]).unwrap();
        assert_eq!(eft_indicator(&w, &f("0,1,1")).unwrap(), 1);
        assert_eq!(eft_indicator(&w, &f("0,0,1")).unwrap(), 0);
    }
}
