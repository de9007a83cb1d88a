//! Univariate polynomials over F_q.

use crate::error::{Error, Result};
use crate::field::{FieldRef, Field};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A polynomial with coefficients stored low-to-high, no trailing zeros.
#[derive(Clone)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<u32>,
}

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<u32>) -> Poly {
        assert!(coeffs.iter().all(|&c| c < field.q()), "coefficient out of range");
        trim(&mut coeffs);
        Poly { field: field.clone(), coeffs }
    }

    pub(crate) fn from_raw(field: &FieldRef, coeffs: Vec<u32>) -> Poly {
        debug_assert!(coeffs.last() != Some(&0));
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldRef) -> Poly {
        Poly { field: field.clone(), coeffs: vec![] }
    }
    pub fn one(field: &FieldRef) -> Poly {
        Poly { field: field.clone(), coeffs: vec![1] }
    }
    pub fn constant(field: &FieldRef, c: u32) -> Poly {
        Poly::new(field, vec![c])
    }
    /// The monomial t^n.
    pub fn monomial(field: &FieldRef, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = 1;
        Poly { field: field.clone(), coeffs: c }
    }
    /// t - c
    pub fn linear(field: &FieldRef, c: u32) -> Poly {
        Poly::new(field, vec![field.neg(c), 1])
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }
    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    /// Degree with the zero polynomial mapped to 0 (callers check `is_zero`).
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    fn same_field(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field,
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &*self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c: Vec<u32> = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        trim(&mut c);
        Poly { field: self.field.clone(), coeffs: c }
    }

    pub fn neg(&self) -> Poly {
        let f = &*self.field;
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = &*self.field;
        let mut v: Vec<u32> = self.coeffs.iter().map(|&a| f.mul(a, c)).collect();
        trim(&mut v);
        Poly { field: self.field.clone(), coeffs: v }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        Poly { field: self.field.clone(), coeffs: mul_slices(&self.field, &self.coeffs, &other.coeffs) }
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = divrem_slices(&self.field, &self.coeffs, &divisor.coeffs);
        Ok((Poly { field: self.field.clone(), coeffs: q }, Poly { field: self.field.clone(), coeffs: r }))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        self.same_field(divisor);
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        rem_in_place(&self.field, &mut r, &divisor.coeffs);
        Ok(Poly { field: self.field.clone(), coeffs: r })
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        while !b.is_empty() {
            rem_in_place(&self.field, &mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        Poly { field: self.field.clone(), coeffs: a }.monic()
    }

    /// Returns (g, s, t) with s*self + t*other = g monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let fr = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(fr), Poly::zero(fr));
        let (mut t0, mut t1) = (Poly::zero(fr), Poly::one(fr));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = fr.inv(r0.lead()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.rem(m)?.xgcd(m);
        if !g.is_one() {
            return Err(Error::NotInvertible);
        }
        s.rem(m)
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        let mut c = mul_slices(&self.field, &self.coeffs, &other.coeffs);
        rem_in_place(&self.field, &mut c, &m.coeffs);
        Poly { field: self.field.clone(), coeffs: c }
    }

    /// self^e mod m.
    pub fn powmod(&self, e: &num_bigint::BigUint, m: &Poly) -> Result<Poly> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let base = self.rem(m)?;
        let mut acc = Poly::one(&self.field).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m);
            if e.bit(i) {
                acc = acc.mulmod(&base, m);
            }
        }
        Ok(acc)
    }

    pub fn powmod_u64(&self, e: u64, m: &Poly) -> Result<Poly> {
        self.powmod(&num_bigint::BigUint::from(e), m)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = &*self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &*self.field;
        let mut c: Vec<u32> = (1..self.coeffs.len())
            .map(|i| f.mul(f.from_int((i % f.p() as usize) as i64), self.coeffs[i]))
            .collect();
        trim(&mut c);
        Poly { field: self.field.clone(), coeffs: c }
    }

    /// Coefficient form "c0,c1,...".
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses "1,0,1" (coefficient indices, low-to-high) or a human form such
    /// as "t^2+2t+1". Human-form coefficients are integers reduced into the
    /// prime subfield.
    pub fn parse(field: &FieldRef, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s.contains('t') || s.contains('x') {
            return parse_human(field, s);
        }
        let mut v = Vec::new();
        for part in s.split(',') {
            let c: u64 = part.trim().parse().map_err(|_| Error::Parse(format!("bad coefficient '{part}'")))?;
            if c >= field.q() as u64 {
                return Err(Error::Parse(format!("coefficient {c} out of range for q = {}", field.q())));
            }
            v.push(c as u32);
        }
        Ok(Poly::new(field, v))
    }

    /// Total order by degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

fn parse_human(field: &FieldRef, s: &str) -> Result<Poly> {
    let bad = || Error::Parse(format!("bad polynomial '{s}'"));
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('x', "t");
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '+' || ch == '-' {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(bad());
    }
    terms.push((neg, cur));
    let mut acc = Poly::zero(field);
    for (neg, term) in terms {
        let term = term.replace('*', "");
        let (coef, exp) = match term.find('t') {
            None => (term.parse::<i64>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = &term[..pos];
                let c = if c.is_empty() { 1 } else { c.parse::<i64>().map_err(|_| bad())? };
                let rest = &term[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (c, e)
            }
        };
        let c = field.from_int(if neg { -coef } else { coef });
        acc = acc.add(&Poly::monomial(field, exp).scale(c));
    }
    Ok(acc)
}

pub(crate) fn mul_slices(f: &Field, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = f.add(c[i + j], f.mul(x, y));
        }
    }
    trim(&mut c);
    c
}

pub(crate) fn rem_in_place(f: &Field, a: &mut Vec<u32>, b: &[u32]) {
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]).expect("nonzero divisor");
    let monic = b[db] == 1;
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let c = if monic { top } else { f.mul(top, lead_inv) };
            let shift = a.len() - 1 - db;
            for j in 0..db {
                if b[j] != 0 {
                    a[shift + j] = f.sub(a[shift + j], f.mul(c, b[j]));
                }
            }
        }
        a.pop();
    }
    trim(a);
}

pub(crate) fn divrem_slices(f: &Field, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], a.to_vec());
    }
    let lead_inv = f.inv(b[db]).expect("nonzero divisor");
    let mut r = a.to_vec();
    let mut q = vec![0u32; a.len() - db];
    while r.len() > db {
        let top = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if top != 0 {
            let c = f.mul(top, lead_inv);
            q[shift] = c;
            for j in 0..db {
                r[shift + j] = f.sub(r[shift + j], f.mul(c, b[j]));
            }
        }
        r.pop();
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Human form, e.g. "t^2 + 2t + 1"; extension-field coefficients print as
/// their indices in brackets.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = if self.field.k() > 1 { format!("[{c}]") } else { c.to_string() };
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => cs,
                (1, _) => mono,
                _ => format!("{cs}{mono}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}
impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}
impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn spec_examples() {
        let f2 = make_field(2, 1).unwrap();
        let t1 = Poly::parse(&f2, "1,1").unwrap();
        assert_eq!(&t1 * &t1, Poly::parse(&f2, "1,0,1").unwrap());
        let a = Poly::parse(&f2, "t^2+t").unwrap();
        let b = Poly::parse(&f2, "t").unwrap();
        assert_eq!(a.gcd(&b), b);

        let f3 = make_field(3, 1).unwrap();
        let n = Poly::parse(&f3, "t^3+2t+1").unwrap();
        let d = Poly::parse(&f3, "t+1").unwrap();
        let (q, r) = n.divrem(&d).unwrap();
        assert_eq!(q, Poly::parse(&f3, "t^2+2t").unwrap());
        assert_eq!(r, Poly::one(&f3));
        assert_eq!(&(&q * &d) + &r, n);
        assert_eq!(n.divrem(&Poly::zero(&f3)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn parse_forms() {
        let f3 = make_field(3, 1).unwrap();
        let p = Poly::parse(&f3, "t^2 - 1").unwrap();
        assert_eq!(p.coeffs(), &[2, 0, 1]);
        assert_eq!(p.to_coeff_string(), "2,0,1");
        assert_eq!(format!("{p}"), "t^2 + 2");
        assert!(Poly::parse(&f3, "1,3").is_err());
        assert!(Poly::parse(&f3, "t^").is_err());
    }

    #[test]
    fn inverse_mod() {
        let f5 = make_field(5, 1).unwrap();
        let m = Poly::parse(&f5, "t^2+2").unwrap();
        let a = Poly::parse(&f5, "t+3").unwrap();
        let ai = a.inv_mod(&m).unwrap();
        assert!(a.mulmod(&ai, &m).is_one());
    }
}
