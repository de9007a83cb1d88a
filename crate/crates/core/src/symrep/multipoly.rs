//! Multivariate polynomials with exact integer coefficients, as used for
//! torus traces.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> MultiPoly {
        Self::monomial(nvars, vec![0; nvars], BigInt::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: BigInt) -> MultiPoly {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The power sum x_1^k + ... + x_v^k.
    pub fn power_sum(nvars: usize, k: u32) -> MultiPoly {
        let mut p = Self::zero(nvars);
        for i in 0..nvars {
            let mut e = vec![0; nvars];
            e[i] = k;
            *p.terms.entry(e).or_insert_with(BigInt::zero) += 1;
        }
        p
    }

    /// The product of power sums over the parts of a cycle type.
    pub fn power_sum_product(nvars: usize, parts: &[u32]) -> MultiPoly {
        parts.iter().fold(Self::one(nvars), |acc, &k| acc.mul(&Self::power_sum(nvars, k)))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add_scaled(&mut self, other: &MultiPoly, c: &BigInt) {
        assert_eq!(self.nvars, other.nvars);
        for (e, v) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += v * c;
            if slot.is_zero() {
                self.terms.remove(e);
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        let mut out = Self::zero(self.nvars);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert_with(BigInt::zero) += va * vb;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Divides every coefficient by d, failing unless all divisions are exact.
    pub fn div_exact(&self, d: &BigInt) -> Result<MultiPoly> {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            let (q, r) = v.div_rem(d);
            if !r.is_zero() {
                return Err(Error::NonIntegral(format!("coefficient {v} not divisible by {d}")));
            }
            out.terms.insert(e.clone(), q);
        }
        Ok(out)
    }

    /// Value with every variable set to 1.
    pub fn eval_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// d^v / dx_1 ... dx_v at all-ones: the sum of coeff * product of exponents.
    pub fn mixed_partial_at_ones(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, v)| v * e.iter().map(|&x| BigInt::from(x)).product::<BigInt>())
            .sum()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|v| !v.is_negative())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, v)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("x{}", i + 1) } else { format!("x{}^{x}", i + 1) })
                    .collect();
                if mono.is_empty() {
                    v.to_string()
                } else {
                    format!("{v}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
