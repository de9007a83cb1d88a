//! Index-addressable enumeration of monic polynomials of a fixed degree,
//! optionally restricted to a residue class or to polynomials coprime to a
//! modulus.
//!
//! For M_n and for a single residue class the element order is lexicographic
//! in the coefficient vector read from the top down. Coprime sets are ordered
//! by the top n - m coefficients, then by residue class.

use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::poly::{rem_in_place, Poly};

/// Index of a polynomial of degree < m as `sum c_j q^j`.
pub fn residue_index(r: &Poly) -> u64 {
    let q = r.field().q() as u64;
    r.coeffs().iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
}

/// Inverse of [`residue_index`].
pub fn residue_from_index(field: &FieldRef, mut idx: u64) -> Poly {
    let q = field.q() as u64;
    let mut c = Vec::new();
    while idx > 0 {
        c.push((idx % q) as u32);
        idx /= q;
    }
    Poly::new(field, c)
}

/// Units modulo g, sorted by residue index.
pub fn units_mod(g: &Poly) -> Vec<Poly> {
    let field = g.field();
    let total = (field.q() as u64).pow(g.deg() as u32);
    (0..total)
        .map(|i| residue_from_index(field, i))
        .filter(|r| !r.is_zero() && r.gcd(g).is_one())
        .collect()
}

/// Euler's totient of g from its factorization.
pub fn phi(g: &Poly) -> u64 {
    let q = g.field().q() as u64;
    crate::factor::factor(&g.monic())
        .expect("nonzero")
        .factors
        .iter()
        .map(|(p, e)| {
            let qd = q.pow(p.deg() as u32);
            (qd - 1) * qd.pow(e - 1)
        })
        .product()
}

#[derive(Clone)]
enum Kind {
    All,
    Residue { g: Poly, a: Poly },
    Coprime { g: Poly, units: Vec<Poly> },
    Listed(Vec<u64>),
}

fn count(field: &FieldRef, n: usize) -> u64 {
    (field.q() as u64).checked_pow(n as u32).expect("set size exceeds u64")
}

/// A deterministic, index-addressable set of monic polynomials of degree n.
#[derive(Clone)]
pub struct MonicSet {
    field: FieldRef,
    n: usize,
    kind: Kind,
    len: u64,
}

impl MonicSet {
    /// All of M_n. Panics if q^n does not fit in a u64.
    pub fn all(field: &FieldRef, n: usize) -> MonicSet {
        let len = count(field, n);
        MonicSet { field: field.clone(), n, kind: Kind::All, len }
    }

    /// Monic f of degree n with f = a mod g. The free high coefficients are
    /// enumerated and the low part is solved for by reduction.
    pub fn residue(n: usize, g: &Poly, a: &Poly) -> Result<MonicSet> {
        let field = g.field().clone();
        let a = a.rem(g)?;
        if !a.gcd(g).is_one() {
            return Err(Error::NotInvertible);
        }
        let m = g.deg();
        if n < m {
            let ok = a.deg() == n && a.is_monic();
            let idx = if ok { vec![residue_index(&a) - (field.q() as u64).pow(n as u32)] } else { vec![] };
            return Ok(MonicSet { field, n, len: idx.len() as u64, kind: Kind::Listed(idx) });
        }
        let len = count(&field, n - m);
        Ok(MonicSet { field, n, kind: Kind::Residue { g: g.clone(), a }, len })
    }

    /// Monic f of degree n with gcd(f, g) = 1.
    pub fn coprime(n: usize, g: &Poly) -> MonicSet {
        let field = g.field().clone();
        let m = g.deg();
        if n < m {
            let all = MonicSet::all(&field, n);
            let idx: Vec<u64> = (0..all.len()).filter(|&i| all.get(i).gcd(g).is_one()).collect();
            return MonicSet { field, n, len: idx.len() as u64, kind: Kind::Listed(idx) };
        }
        let units = units_mod(g);
        let len = count(&field, n - m).checked_mul(units.len() as u64).expect("set size exceeds u64");
        MonicSet { field, n, kind: Kind::Coprime { g: g.clone(), units }, len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    fn from_all_index(&self, mut i: u64) -> Vec<u32> {
        let q = self.field.q() as u64;
        let mut c = vec![0u32; self.n + 1];
        for slot in c.iter_mut().take(self.n) {
            *slot = (i % q) as u32;
            i /= q;
        }
        c[self.n] = 1;
        c
    }

    fn high_part(&self, mut hi: u64, m: usize) -> Vec<u32> {
        let q = self.field.q() as u64;
        let mut c = vec![0u32; self.n + 1];
        for slot in c.iter_mut().take(self.n).skip(m) {
            *slot = (hi % q) as u32;
            hi /= q;
        }
        c[self.n] = 1;
        c
    }

    fn solve_tail(&self, mut c: Vec<u32>, g: &Poly, target: &Poly) -> Poly {
        let f = &*self.field;
        let mut r = c.clone();
        rem_in_place(f, &mut r, g.coeffs());
        for j in 0..g.deg() {
            c[j] = f.sub(target.coeff(j), r.get(j).copied().unwrap_or(0));
        }
        Poly::from_raw(&self.field, c)
    }

    /// The i-th element, `i < len()`.
    pub fn get(&self, i: u64) -> Poly {
        assert!(i < self.len, "index out of range");
        match &self.kind {
            Kind::All => Poly::from_raw(&self.field, self.from_all_index(i)),
            Kind::Listed(idx) => Poly::from_raw(&self.field, self.from_all_index(idx[i as usize])),
            Kind::Residue { g, a } => {
                let c = self.high_part(i, g.deg());
                self.solve_tail(c, g, a)
            }
            Kind::Coprime { g, units } => {
                let u = units.len() as u64;
                let c = self.high_part(i / u, g.deg());
                self.solve_tail(c, g, &units[(i % u) as usize])
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Elements with indices in `range`.
    pub fn range(&self, range: std::ops::Range<u64>) -> impl Iterator<Item = Poly> + '_ {
        range.map(move |i| self.get(i))
    }
}
