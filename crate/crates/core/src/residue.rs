//! The multiplicative monoid F_q[t]/g with residues indexed by
//! `sum c_j q^j`, and per-residue histograms of arithmetic functions over
//! M_n built from convolution identities rather than prime enumeration.

use crate::enumerate::{residue_from_index, residue_index, MonicSet};
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::poly::Poly;

/// Largest q^deg g handled by residue tables.
pub const MAX_RESIDUES: u64 = 1 << 16;
const TABLE_LIMIT: u64 = 1024;

pub struct ResidueRing {
    field: FieldRef,
    g: Poly,
    size: usize,
    table: std::sync::OnceLock<Option<Vec<u32>>>,
}

impl ResidueRing {
    pub fn new(g: &Poly) -> Result<ResidueRing> {
        if g.is_zero() || !g.is_monic() || g.deg() == 0 {
            return Err(Error::Precondition("modulus must be monic of degree >= 1".into()));
        }
        let field = g.field().clone();
        let size = (field.q() as u64).checked_pow(g.deg() as u32).unwrap_or(u64::MAX);
        if size > MAX_RESIDUES {
            return Err(Error::TooLarge(format!("q^deg g = {size} residues")));
        }
        let ring = ResidueRing { field, g: g.clone(), size: size as usize, table: std::sync::OnceLock::new() };
        Ok(ring)
    }

    pub fn modulus(&self) -> &Poly {
        &self.g
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn poly(&self, idx: usize) -> Poly {
        residue_from_index(&self.field, idx as u64)
    }

    pub fn index(&self, f: &Poly) -> usize {
        residue_index(&f.rem(&self.g).expect("nonzero modulus")) as usize
    }

    /// Full multiplication table for small rings, built on first use.
    fn table(&self) -> Option<&Vec<u32>> {
        self.table
            .get_or_init(|| {
                if self.size as u64 > TABLE_LIMIT {
                    return None;
                }
                let n = self.size;
                let elems: Vec<Poly> = (0..n).map(|i| self.poly(i)).collect();
                let t = crate::par::map_range(n, |a| {
                    (0..n).map(|b| residue_index(&elems[a].mulmod(&elems[b], &self.g)) as u32).collect::<Vec<_>>()
                });
                Some(t.into_iter().flatten().collect())
            })
            .as_ref()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.size + b] as usize,
            None => self.index(&self.poly(a).mulmod(&self.poly(b), &self.g)),
        }
    }

    /// (a * b)(r) = sum over x y = r of a(x) b(y).
    pub fn convolve(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let nz_b: Vec<usize> = (0..self.size).filter(|&j| b[j] != 0).collect();
        let rows = crate::par::map_chunks(self.size, 64, |range| {
            let mut out = vec![0i128; self.size];
            for i in range {
                if a[i] == 0 {
                    continue;
                }
                for &j in &nz_b {
                    out[self.mul(i, j)] += a[i] * b[j];
                }
            }
            out
        });
        let mut out = vec![0i128; self.size];
        for r in rows {
            for (o, v) in out.iter_mut().zip(r) {
                *o += v;
            }
        }
        out
    }

    /// N_n(b) = #{f in M_n : f = b mod g}.
    pub fn monic_counts(&self, n: usize) -> Vec<i128> {
        let m = self.g.deg();
        if n >= m {
            return vec![(self.field.q() as i128).pow((n - m) as u32); self.size];
        }
        let mut out = vec![0i128; self.size];
        for f in MonicSet::all(&self.field, n).iter() {
            out[residue_index(&f) as usize] += 1;
        }
        out
    }

    /// Lambda_n(b) = sum of Lambda(f) over f in M_n with f = b mod g, for
    /// n = 0..=nmax, from n N_n = sum_{j=1}^{n} Lambda_j * N_{n-j}.
    pub fn lambda_histograms(&self, nmax: usize) -> Vec<Vec<i128>> {
        let counts: Vec<Vec<i128>> = (0..=nmax).map(|n| self.monic_counts(n)).collect();
        let mut lam: Vec<Vec<i128>> = vec![vec![0; self.size]];
        for n in 1..=nmax {
            let mut cur: Vec<i128> = counts[n].iter().map(|&c| c * n as i128).collect();
            for j in 1..n {
                let conv = self.convolve(&lam[j], &counts[n - j]);
                for (c, v) in cur.iter_mut().zip(conv) {
                    *c -= v;
                }
            }
            lam.push(cur);
        }
        lam
    }

    /// D_n(b) = sum of d_k(f) over f in M_n with f = b mod g, for n = 0..=nmax.
    pub fn divisor_histograms(&self, k: u32, nmax: usize) -> Vec<Vec<i128>> {
        let counts: Vec<Vec<i128>> = (0..=nmax).map(|n| self.monic_counts(n)).collect();
        let mut cur = counts.clone();
        for _ in 1..k {
            let mut next = Vec::with_capacity(nmax + 1);
            for n in 0..=nmax {
                let mut acc = vec![0i128; self.size];
                for i in 0..=n {
                    let conv = self.convolve(&cur[i], &counts[n - i]);
                    for (a, v) in acc.iter_mut().zip(conv) {
                        *a += v;
                    }
                }
                next.push(acc);
            }
            cur = next;
        }
        if k == 0 {
            let mut one = vec![vec![0i128; self.size]; nmax + 1];
            one[0][self.index(&Poly::one(&self.field))] = 1;
            return one;
        }
        cur
    }
}
