//! Factorization types of every f in M_n, tallied per residue class mod g.
//! Any function of the factorization type then has its progression sums
//! computed from the tally without refactoring.

use crate::arithfun::Eft;
use crate::enumerate::MonicSet;
use crate::error::Result;
use crate::field::FieldRef;
use crate::poly::Poly;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// The factorization type of each f in M_n, in enumeration order.
pub struct Census {
    field: FieldRef,
    n: usize,
    efts: Vec<Eft>,
    ids: Vec<u32>,
}

/// Largest q^n a census will enumerate.
pub const MAX_CENSUS: u64 = 1 << 22;

type CensusKey = (String, usize);

fn cache() -> &'static Mutex<HashMap<CensusKey, Arc<Census>>> {
    static C: OnceLock<Mutex<HashMap<CensusKey, Arc<Census>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Census {
    /// The census for (field, n), built once per process.
    pub fn get(field: &FieldRef, n: usize) -> Result<Arc<Census>> {
        let key = (field.name(), n);
        if let Some(c) = cache().lock().expect("poisoned").get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(Census::build(field, n)?);
        cache().lock().expect("poisoned").insert(key, c.clone());
        Ok(c)
    }

    fn build(field: &FieldRef, n: usize) -> Result<Census> {
        let total = (field.q() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if total > MAX_CENSUS {
            return Err(crate::Error::TooLarge(format!("census of q^n = {total} polynomials")));
        }
        let efts = Eft::all(n as u32);
        let index: HashMap<&Eft, u32> = efts.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let set = MonicSet::all(field, n);
        let chunks = crate::par::map_chunks(total as usize, 1024, |r| {
            set.range(r.start as u64..r.end as u64)
                .map(|f| index[&Eft::of(&f).expect("monic")])
                .collect::<Vec<u32>>()
        });
        Ok(Census { field: field.clone(), n, efts, ids: chunks.into_iter().flatten().collect() })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn efts(&self) -> &[Eft] {
        &self.efts
    }
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// counts[eft][residue] for the residues mod g.
    pub fn tally(&self, g: &Poly) -> ClassTally {
        let reducer = Reducer::new(g, self.n);
        let size = reducer.size;
        let ne = self.efts.len();
        let q = self.field.q() as u64;
        let parts = crate::par::map_chunks(self.ids.len(), 4096, |r| {
            let mut c = vec![0u64; ne * size];
            let mut coeffs = vec![0u32; self.n];
            for i in r {
                let mut x = i as u64;
                for slot in coeffs.iter_mut() {
                    *slot = (x % q) as u32;
                    x /= q;
                }
                let res = reducer.index(&coeffs);
                c[self.ids[i] as usize * size + res] += 1;
            }
            c
        });
        let mut counts = vec![0u64; ne * size];
        for p in parts {
            for (a, b) in counts.iter_mut().zip(p) {
                *a += b;
            }
        }
        let units = (0..size).filter(|&i| reducer.unit[i]).collect();
        ClassTally { g: g.clone(), size, units, counts, n_efts: ne }
    }
}

/// Reduction of monic degree-n polynomials mod g via a table of t^i mod g.
struct Reducer {
    field: FieldRef,
    m: usize,
    size: usize,
    powers: Vec<Vec<u32>>,
    unit: Vec<bool>,
}

impl Reducer {
    fn new(g: &Poly, n: usize) -> Reducer {
        let field = g.field().clone();
        let m = g.deg();
        let powers = (0..=n)
            .map(|i| {
                let r = Poly::monomial(&field, i).rem(g).expect("nonzero");
                (0..m).map(|j| r.coeff(j)).collect()
            })
            .collect();
        let size = (field.q() as usize).pow(m as u32);
        let unit = (0..size)
            .map(|i| crate::enumerate::residue_from_index(&field, i as u64).gcd(g).is_one())
            .collect();
        Reducer { field, m, size, powers, unit }
    }

    /// Residue index of t^n + sum_{i<n} c_i t^i.
    fn index(&self, c: &[u32]) -> usize {
        let f = &*self.field;
        let mut r = self.powers[c.len()].clone();
        for (i, &ci) in c.iter().enumerate() {
            if ci != 0 {
                for j in 0..self.m {
                    r[j] = f.add(r[j], f.mul(ci, self.powers[i][j]));
                }
            }
        }
        let q = f.q() as usize;
        r.iter().rev().fold(0usize, |acc, &x| acc * q + x as usize)
    }
}

/// Counts of factorization types per residue class mod g.
pub struct ClassTally {
    g: Poly,
    size: usize,
    units: Vec<usize>,
    counts: Vec<u64>,
    n_efts: usize,
}

impl ClassTally {
    pub fn modulus(&self) -> &Poly {
        &self.g
    }
    pub fn units(&self) -> &[usize] {
        &self.units
    }
    pub fn count(&self, eft: usize, residue: usize) -> u64 {
        self.counts[eft * self.size + residue]
    }

    /// sum of values[eft] over f = residue mod g.
    pub fn class_sum(&self, values: &[i128], residue: usize) -> i128 {
        (0..self.n_efts).map(|e| values[e] * self.count(e, residue) as i128).sum()
    }

    /// sum of values[eft] over f coprime to g.
    pub fn coprime_sum(&self, values: &[i128]) -> i128 {
        self.units.iter().map(|&a| self.class_sum(values, a)).sum()
    }

    /// Class sums for every residue, in residue order (non-units included).
    pub fn all_class_sums(&self, values: &[i128]) -> Vec<i128> {
        (0..self.size).map(|a| self.class_sum(values, a)).collect()
    }
}
