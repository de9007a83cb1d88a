//! Dirichlet characters of (F_q[t]/g)^x for squarefree g, their
//! L-polynomials in u = q^-s, and the character-side moment sums.

mod lfunc;
mod moments;

pub use lfunc::{
    l_poly, l_roots, gammas, odd_primitive_count_formula, odd_primitive_count_printed,
    vonmangoldt_power_sum, LPolynomial,
};
pub use moments::{moment_m, moment_primitive_sum, moments1_all, moments1_check, MomentPaths, Moments1Report, PrimitiveMoment};

use crate::enumerate::{residue_index, MonicSet};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::{prime_factors, FieldRef};
use crate::poly::Poly;
use crate::residue::{ResidueRing, MAX_RESIDUES};
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

/// (F_q[t]/g)^x as a product of cyclic groups, one per prime factor of g.
pub struct UnitGroup {
    field: FieldRef,
    g: Poly,
    primes: Vec<Poly>,
    orders: Vec<u64>,
    generators: Vec<Poly>,
    idempotents: Vec<Poly>,
    /// Per residue index mod g, the dlog vector (u32::MAX marks non-units).
    dlogs: Vec<u32>,
    lcm: u64,
    roots_of_unity: Vec<Complex64>,
    ring: ResidueRing,
    coprime_hist: Vec<OnceLock<Vec<u64>>>,
    lambda_hist: Mutex<Vec<Vec<i128>>>,
}

impl std::fmt::Debug for UnitGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UnitGroup(g = {}, orders = {:?})", self.g, self.orders)
    }
}

fn find_generator(pi: &Poly, order: u64) -> Poly {
    let field = pi.field();
    let ps = prime_factors(order);
    let size = (field.q() as u64).pow(pi.deg() as u32);
    for idx in 1..size {
        let r = crate::enumerate::residue_from_index(field, idx);
        if ps.iter().all(|&p| !r.powmod_u64(order / p, pi).expect("nonzero").is_one()) {
            return r;
        }
    }
    unreachable!("a finite field has a primitive element")
}

impl UnitGroup {
    pub fn new(g: &Poly) -> Result<Arc<UnitGroup>> {
        if g.is_zero() || !g.is_monic() {
            return Err(Error::NotMonic);
        }
        if g.deg() == 0 {
            return Err(Error::Precondition("modulus must have degree >= 1".into()));
        }
        let field = g.field().clone();
        let q = field.q() as u64;
        let size = q.checked_pow(g.deg() as u32).unwrap_or(u64::MAX);
        if size > MAX_RESIDUES {
            return Err(Error::TooLarge(format!("q^deg g = {size} residues")));
        }
        let fac = factor(g)?;
        if !fac.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let primes: Vec<Poly> = fac.factors.into_iter().map(|(p, _)| p).collect();
        let orders: Vec<u64> = primes.iter().map(|p| q.pow(p.deg() as u32) - 1).collect();
        let generators: Vec<Poly> = primes.iter().zip(&orders).map(|(p, &o)| find_generator(p, o)).collect();
        let tables: Vec<Vec<u32>> = primes
            .iter()
            .zip(&generators)
            .zip(&orders)
            .map(|((p, gen), &o)| {
                let mut t = vec![u32::MAX; (q.pow(p.deg() as u32)) as usize];
                let mut x = Poly::one(&field);
                for j in 0..o {
                    t[residue_index(&x) as usize] = j as u32;
                    x = x.mulmod(gen, p);
                }
                t
            })
            .collect();
        let idempotents: Vec<Poly> = primes
            .iter()
            .map(|p| {
                let co = g.exact_div(p);
                co.mul(&co.inv_mod(p).expect("coprime factors")).rem(g).expect("nonzero")
            })
            .collect();
        let r = primes.len();
        let per: Vec<Vec<u32>> = crate::par::map_range(size as usize, |idx| {
            let f = crate::enumerate::residue_from_index(&field, idx as u64);
            let mut v = Vec::with_capacity(r);
            for (p, t) in primes.iter().zip(&tables) {
                v.push(t[residue_index(&f.rem(p).expect("nonzero")) as usize]);
            }
            if v.contains(&u32::MAX) {
                vec![u32::MAX; r]
            } else {
                v
            }
        });
        let dlogs: Vec<u32> = per.into_iter().flatten().collect();
        let lcm = orders.iter().fold(1u64, |a, &b| a.lcm(&b));
        let roots_of_unity = (0..lcm).map(|j| Complex64::cis(TAU * j as f64 / lcm as f64)).collect();
        let ring = ResidueRing::new(g)?;
        Ok(Arc::new(UnitGroup {
            field,
            g: g.clone(),
            primes,
            orders,
            generators,
            idempotents,
            dlogs,
            lcm,
            roots_of_unity,
            ring,
            coprime_hist: (0..=g.deg()).map(|_| OnceLock::new()).collect(),
            lambda_hist: Mutex::new(Vec::new()),
        }))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }
    pub fn modulus(&self) -> &Poly {
        &self.g
    }
    pub fn m(&self) -> usize {
        self.g.deg()
    }
    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }
    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }
    pub fn ring(&self) -> &ResidueRing {
        &self.ring
    }
    pub fn num_residues(&self) -> usize {
        self.ring.size()
    }

    /// phi(g).
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Number of primitive characters, prod (q^deg pi - 2).
    pub fn primitive_count(&self) -> u64 {
        self.orders.iter().map(|o| o - 1).product()
    }

    /// Discrete logs of a residue given by index, or None for a non-unit.
    pub fn dlog_index(&self, idx: usize) -> Option<&[u32]> {
        let r = self.primes.len();
        let v = &self.dlogs[idx * r..(idx + 1) * r];
        (r == 0 || v[0] != u32::MAX).then_some(v)
    }

    pub fn dlog(&self, f: &Poly) -> Option<Vec<u32>> {
        self.dlog_index(self.ring.index(f)).map(|v| v.to_vec())
    }

    /// The residue with the given discrete logs, via the CRT idempotents.
    pub fn from_dlogs(&self, e: &[u64]) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for ((gen, idem), (&ei, &o)) in self.generators.iter().zip(&self.idempotents).zip(e.iter().zip(&self.orders)) {
            let part = gen.powmod_u64(ei % o, &self.g).expect("nonzero");
            acc = acc.add(&part.mulmod(idem, &self.g));
        }
        acc
    }

    /// Discrete logs of the constant polynomial given by a primitive element of F_q.
    pub fn constant_generator_dlogs(&self) -> Vec<u32> {
        let c = Poly::constant(&self.field, self.field.primitive());
        self.dlog(&c).expect("constants are units")
    }

    pub fn character(self: &Arc<Self>, exps: Vec<u64>) -> Result<DirichletCharacter> {
        if exps.len() != self.orders.len() {
            return Err(Error::Precondition("exponent vector length must equal the number of prime factors".into()));
        }
        let exps: Vec<u64> = exps.iter().zip(&self.orders).map(|(e, o)| e % o).collect();
        let steps: Vec<u64> = self.orders.iter().map(|o| self.lcm / o).collect();
        let value = |idx: usize| match self.dlog_index(idx) {
            None => Complex64::new(0.0, 0.0),
            Some(d) => {
                let mut k = 0u64;
                for ((&di, &ei), (&si, &oi)) in d.iter().zip(&exps).zip(steps.iter().zip(&self.orders)) {
                    k = (k + (di as u64 * ei % oi) * si) % self.lcm;
                }
                self.roots_of_unity[k as usize]
            }
        };
        let values: Vec<Complex64> = crate::par::map_chunks(self.num_residues(), 8192, |r| r.map(value).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect();
        Ok(DirichletCharacter { group: self.clone(), exps, values: Arc::new(values) })
    }

    /// All phi(g) characters, exponent vectors in lexicographic order.
    pub fn characters(self: &Arc<Self>) -> impl Iterator<Item = DirichletCharacter> + '_ {
        self.exponent_vectors().map(move |e| self.character(e).expect("valid exponents"))
    }

    fn exponent_vectors(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(move |mut i| {
            let mut e = vec![0u64; self.orders.len()];
            for (slot, &o) in e.iter_mut().zip(&self.orders).rev() {
                *slot = i % o;
                i /= o;
            }
            e
        })
    }

    /// Primitive characters: those nontrivial on every prime factor.
    pub fn primitive_characters(self: &Arc<Self>) -> impl Iterator<Item = DirichletCharacter> + '_ {
        self.exponent_vectors()
            .filter(|e| e.iter().all(|&x| x != 0))
            .map(move |e| self.character(e).expect("valid exponents"))
    }

    /// Histogram over residues of monic f of degree n coprime to g (n <= m).
    pub(crate) fn coprime_histogram(&self, n: usize) -> &[u64] {
        self.coprime_hist[n].get_or_init(|| {
            let set = MonicSet::coprime(n, &self.g);
            let size = self.num_residues();
            let parts = crate::par::map_chunks(set.len() as usize, 2048, |r| {
                let mut h = vec![0u64; size];
                for f in set.range(r.start as u64..r.end as u64) {
                    h[self.ring.index(&f)] += 1;
                }
                h
            });
            let mut h = vec![0u64; size];
            for p in parts {
                for (a, b) in h.iter_mut().zip(p) {
                    *a += b;
                }
            }
            h
        })
    }

    /// Lambda histograms mod g for degrees 0..=nmax.
    pub(crate) fn lambda_histograms(&self, nmax: usize) -> Vec<Vec<i128>> {
        let mut cache = self.lambda_hist.lock().expect("poisoned");
        if cache.len() <= nmax {
            *cache = self.ring.lambda_histograms(nmax);
        }
        cache[..=nmax].to_vec()
    }
}

/// chi(f) = prod zeta_{o_i}^{e_i dlog_i(f)}.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    exps: Vec<u64>,
    values: Arc<Vec<Complex64>>,
}

impl std::fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "chi{:?} mod {}", self.exps, self.group.g)
    }
}

impl DirichletCharacter {
    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Value on a residue index (0 for non-units).
    pub fn value_index(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    pub fn value(&self, f: &Poly) -> Complex64 {
        self.values[self.group.ring.index(f)]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_primitive(&self) -> bool {
        self.exps.iter().all(|&e| e != 0)
    }

    /// Trivial on the constants F_q^x.
    pub fn is_even(&self) -> bool {
        let d = self.group.constant_generator_dlogs();
        let l = self.group.lcm;
        let mut k = 0u64;
        for ((&di, &ei), &o) in d.iter().zip(&self.exps).zip(&self.group.orders) {
            k = (k + (di as u64 * ei % o) * (l / o)) % l;
        }
        k == 0
    }

    pub fn is_odd(&self) -> bool {
        !self.is_even()
    }

    pub fn conj(&self) -> DirichletCharacter {
        let e = self.exps.iter().zip(&self.group.orders).map(|(&e, &o)| (o - e) % o).collect();
        self.group.character(e).expect("valid exponents")
    }
}
