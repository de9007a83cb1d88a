//! Finite fields F_q with q = p^k <= 2^16.
//!
//! Elements are integers in `[0, q)`. For k = 1 the integer is the residue mod
//! p. For k > 1 it is the coefficient vector of a polynomial of degree < k
//! over F_p read as base-p digits, low digit first, relative to a fixed
//! primitive defining polynomial. Multiplication goes through discrete-log
//! tables over the primitive element.

use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

const MAX_Q: u64 = 1 << 16;
const ADD_TABLE_MAX_Q: u32 = 1024;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A finite field with its log/antilog tables. Immutable after construction.
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Defining polynomial over F_p, low-to-high, monic of degree k (k > 1 only).
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

/// Shared handle used by polynomials.
pub type FieldRef = Arc<Field>;

/// A field element tagged with the field it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    index: u32,
    p: u32,
    k: u32,
}

impl FieldElem {
    pub fn index(&self) -> u32 {
        self.index
    }
}

/// Builds F_{p^k}. The primitive element is deterministic: for k = 1 it is the
/// least primitive root mod p; for k > 1 it is the class of t modulo the first
/// monic degree-k polynomial (lower coefficients enumerated as a base-p
/// counter) for which t has multiplicative order p^k - 1.
pub fn make_field(p: u64, k: u32) -> Result<FieldRef> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::Precondition("extension degree must be >= 1".into()));
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > MAX_Q as u128 {
        return Err(Error::FieldTooLarge { p, k });
    }
    let (p, q) = (p as u32, q as u32);
    let mut field = if k == 1 {
        prime_field(p)
    } else {
        extension_field(p, k, q)
    };
    if k > 1 && p != 2 && q <= ADD_TABLE_MAX_Q {
        let mut t = vec![0u16; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = field.add_digits(a, b) as u16;
            }
        }
        field.add_table = Some(t);
    }
    Ok(Arc::new(field))
}

fn prime_field(p: u32) -> Field {
    let q = p;
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let g = (1..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&r| pow_mod(g as u64, order / r, p as u64) != 1 || order == 1)
        })
        .expect("primitive root exists");
    let mut exp = Vec::with_capacity(order as usize);
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for i in 0..order {
        exp.push(x as u32);
        log[x as usize] = i as u32;
        x = x * g as u64 % p as u64;
    }
    Field { p, k: 1, q, modulus: vec![], exp, log, add_table: None }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn extension_field(p: u32, k: u32, q: u32) -> Field {
    let order = q - 1;
    for low in 0..q {
        let mut modulus: Vec<u32> = digits(low, p, k);
        modulus.push(1);
        if modulus[0] == 0 {
            continue;
        }
        if let Some((exp, log)) = power_tables(p, k, q, &modulus) {
            debug_assert_eq!(exp.len(), order as usize);
            return Field { p, k, q, modulus, exp, log, add_table: None };
        }
    }
    unreachable!("a primitive polynomial of every degree exists")
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Walks the powers of t modulo `modulus`; returns tables iff t is primitive.
fn power_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let order = (q - 1) as usize;
    let mut exp = Vec::with_capacity(order);
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u32; k as usize];
    cur[0] = 1;
    for i in 0..order {
        let idx = cur.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        if log[idx as usize] != u32::MAX {
            return None;
        }
        log[idx as usize] = i as u32;
        exp.push(idx);
        // multiply by t and reduce by the monic modulus
        let top = cur[k as usize - 1];
        for j in (1..k as usize).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..k as usize {
                cur[j] = (cur[j] + p - top * modulus[j] % p) % p;
            }
        }
    }
    (cur[0] == 1 && cur[1..].iter().all(|&d| d == 0)).then_some((exp, log))
}

impl Field {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Defining polynomial over F_p (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Index of the fixed primitive element.
    pub fn primitive(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }
    /// Serialized name, e.g. "3^2".
    pub fn name(&self) -> String {
        format!("{}^{}", self.p, self.k)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index >= self.q as u64 {
            return Err(Error::BadElement(index, self.q));
        }
        Ok(FieldElem { index: index as u32, p: self.p, k: self.k })
    }

    fn check(&self, x: FieldElem) -> Result<u32> {
        if x.p != self.p || x.k != self.k {
            return Err(Error::MixedFields(self.name(), format!("{}^{}", x.p, x.k)));
        }
        Ok(x.index)
    }

    fn wrap(&self, index: u32) -> FieldElem {
        FieldElem { index, p: self.p, k: self.k }
    }

    pub fn add_elem(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.add(self.check(a)?, self.check(b)?)))
    }
    pub fn mul_elem(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.mul(self.check(a)?, self.check(b)?)))
    }
    pub fn neg_elem(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.neg(self.check(a)?)))
    }
    pub fn inv_elem(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(self.wrap(self.inv(self.check(a)?)?))
    }
    pub fn pow_elem(&self, a: FieldElem, e: u64) -> Result<FieldElem> {
        Ok(self.wrap(self.pow(self.check(a)?, e)))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let (p, mut place, mut out) = (self.p, 1u32, 0u32);
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize] as u32
        } else {
            self.add_digits(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let (p, mut a, mut place, mut out) = (self.p, a, 1u32, 0u32);
            for _ in 0..self.k {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        let o = self.q - 1;
        self.exp[(if s >= o { s - o } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InverseOfZero);
        }
        let o = self.q - 1;
        Ok(self.exp[((o - self.log[a as usize]) % o) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let o = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % o)) % o) as usize]
    }

    /// Discrete log to the primitive element (None for zero).
    pub fn dlog(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.name())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for Field {}

/// Parses "p^k" or a bare prime "p".
pub fn parse_field(s: &str) -> Result<FieldRef> {
    let s = s.trim();
    let (p, k) = match s.split_once('^') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad field '{s}'")))?;
    let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad field '{s}'")))?;
    make_field(p, k)
}
