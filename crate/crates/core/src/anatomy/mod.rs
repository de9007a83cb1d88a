//! Distributions of factorization types in progressions, total-variation
//! distances between them, and the Poisson-Dirichlet entropy machinery.

mod pd;

pub use pd::{
    chain_step, chain_tv_to_stationary, coupling_check, dp_bound, entropy_increase_properties, entropy_update,
    ks_entropy_convergence, pd_entropies, pd_from_sticks, pd_moments, pd_sample, pd_tail_mc, pi_stationary, tail_sum_bound,
    trajectory_rng, CouplingReport, EntropyChecks, KsReport, PdMoments, PdSample, TailEstimate,
};

use crate::arithfun::{eft_indicator, Eft};
use crate::bounds::check_progression;
use crate::enumerate::MonicSet;
use crate::error::{Error, Result};
use crate::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Exact probability measure on factorization types of degree n.
#[derive(Clone, Debug, PartialEq)]
pub struct EftMeasure {
    pub n: usize,
    pub g: String,
    /// "coprime" or the residue class as a coefficient string.
    pub context: String,
    pub masses: BTreeMap<Eft, BigRational>,
}

impl EftMeasure {
    pub fn total(&self) -> BigRational {
        self.masses.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn mass(&self, w: &Eft) -> BigRational {
        self.masses.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Masses as strings, keyed by the type's display form.
    pub fn to_json(&self) -> serde_json::Value {
        let m: BTreeMap<String, String> = self.masses.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        serde_json::json!({ "n": self.n, "g": self.g, "context": self.context, "masses": m })
    }
}

fn class_set(n: usize, g: &Poly, a: Option<&Poly>) -> Result<(MonicSet, String, BigInt)> {
    check_progression(n, g)?;
    let q = BigInt::from(g.field().q());
    let base = num_traits::pow(q, n - g.deg());
    Ok(match a {
        Some(a) => {
            let a = a.rem(g)?;
            (MonicSet::residue(n, g, &a)?, a.to_coeff_string(), base)
        }
        None => {
            let phi = crate::enumerate::phi(g);
            (MonicSet::coprime(n, g), "coprime".into(), base * BigInt::from(phi))
        }
    })
}

fn build(n: usize, g: &Poly, context: String, denom: &BigInt, counts: BTreeMap<Eft, u64>) -> EftMeasure {
    let masses = counts
        .into_iter()
        .filter(|(_, c)| *c > 0)
        .map(|(w, c)| (w, BigRational::new(BigInt::from(c), denom.clone())))
        .collect();
    EftMeasure { n, g: g.to_coeff_string(), context, masses }
}

/// The factorization-type distribution of f in M_n with f = a mod g (or
/// coprime to g when a is None), by factoring and tallying.
pub fn eft_measure(n: usize, g: &Poly, a: Option<&Poly>) -> Result<EftMeasure> {
    let (set, context, denom) = class_set(n, g, a)?;
    let parts = crate::par::map_chunks(set.len() as usize, 512, |r| {
        let mut c: BTreeMap<Eft, u64> = BTreeMap::new();
        for f in set.range(r.start as u64..r.end as u64) {
            *c.entry(Eft::of(&f).expect("monic")).or_default() += 1;
        }
        c
    });
    let mut counts = BTreeMap::new();
    for p in parts {
        for (k, v) in p {
            *counts.entry(k).or_default() += v;
        }
    }
    Ok(build(n, g, context, &denom, counts))
}

/// The same measure with each mass computed from the sieve identity for the
/// indicator of a factorization type.
pub fn eft_measure_indicator(n: usize, g: &Poly, a: Option<&Poly>) -> Result<EftMeasure> {
    let (set, context, denom) = class_set(n, g, a)?;
    let types = Eft::all(n as u32);
    let per = crate::par::map_slice(&types, |w| -> Result<u64> {
        let mut c = 0u64;
        for f in set.iter() {
            c += eft_indicator(w, &f)? as u64;
        }
        Ok(c)
    });
    let mut counts = BTreeMap::new();
    for (w, c) in types.into_iter().zip(per) {
        counts.insert(w, c?);
    }
    Ok(build(n, g, context, &denom, counts))
}

/// sum over types of max(mu2 - mu1, 0).
pub fn tv_distance(mu1: &EftMeasure, mu2: &EftMeasure) -> Result<BigRational> {
    if mu1.n != mu2.n {
        return Err(Error::Precondition(format!("measures on degrees {} and {}", mu1.n, mu2.n)));
    }
    let mut tv = BigRational::zero();
    for (w, m2) in &mu2.masses {
        let d = m2 - mu1.mass(w);
        if d.is_positive() {
            tv += d;
        }
    }
    Ok(tv)
}

/// The bound parameter L = (1/2) ((2 - 2 theta) sqrt q / ((1 + 2 theta) e))^(1 - theta).
pub fn eft_final_l(q: f64, theta: f64) -> f64 {
    0.5 * ((2.0 - 2.0 * theta) * q.sqrt() / ((1.0 + 2.0 * theta) * std::f64::consts::E)).powf(1.0 - theta)
}

#[derive(Clone, Debug, Serialize)]
pub struct EftTvRow {
    pub a: String,
    pub tv: String,
    pub tv_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EftTvReport {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub g: String,
    pub theta: f64,
    pub rows: Vec<EftTvRow>,
    pub max_tv: f64,
    pub l: f64,
    /// dp_bound(L) when L > 7, up to an unquantified o(1).
    pub tail_bound: Option<f64>,
    /// Whether q is large enough for the TV bound to apply.
    pub q_condition: bool,
    /// Averaging the class measures over all units recovers the coprime measure.
    pub average_matches: bool,
}

/// TV distance from each class measure to the coprime measure, with the
/// threshold L evaluated at theta = m / n. Reported, not asserted.
pub fn eft_tv_report(n: usize, g: &Poly) -> Result<EftTvReport> {
    let coprime = eft_measure(n, g, None)?;
    let units = crate::enumerate::units_mod(g);
    let mut rows = Vec::new();
    let mut avg: BTreeMap<Eft, BigRational> = BTreeMap::new();
    let mut max_tv = 0.0f64;
    for a in &units {
        let mu = eft_measure(n, g, Some(a))?;
        for (w, v) in &mu.masses {
            *avg.entry(w.clone()).or_insert_with(BigRational::zero) += v;
        }
        let tv = tv_distance(&mu, &coprime)?;
        let f = tv.to_f64().unwrap_or(f64::NAN);
        max_tv = max_tv.max(f);
        rows.push(EftTvRow { a: a.to_coeff_string(), tv: tv.to_string(), tv_f64: f });
    }
    let phi = BigRational::from_integer(BigInt::from(units.len()));
    let average_matches = avg.iter().all(|(w, v)| v / &phi == coprime.mass(w)) && avg.len() == coprime.masses.len();
    let q = g.field().q();
    let m = g.deg();
    let theta = m as f64 / n as f64;
    let l = eft_final_l(q as f64, theta);
    let qf = q as f64;
    let e = std::f64::consts::E;
    let threshold = ((1.0 + 2.0 * theta) * e * 2f64.powf(theta / (1.0 - theta)) * 7f64.powf(1.0 / (1.0 - theta))
        / (1.0 - theta))
        .powi(2);
    Ok(EftTvReport {
        q,
        n,
        m,
        g: g.to_coeff_string(),
        theta,
        rows,
        max_tv,
        l,
        tail_bound: dp_bound(l).ok(),
        q_condition: theta < 1.0 && qf > threshold,
        average_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use num_traits::One;

    #[test]
    fn measures_and_tv() {
        let f = make_field(3, 1).unwrap();
        let g = Poly::parse(&f, "0,1").unwrap();
        let one = Poly::one(&f);
        let mu = eft_measure(3, &g, Some(&one)).unwrap();
        let cop = eft_measure(3, &g, None).unwrap();
        assert!(mu.total().is_one() && cop.total().is_one());
        assert!(tv_distance(&mu, &mu).unwrap().is_zero());
        let tv = tv_distance(&mu, &cop).unwrap();
        assert!(tv >= BigRational::zero() && tv <= BigRational::one());
        assert_eq!(eft_measure_indicator(3, &g, Some(&one)).unwrap(), mu);
        let r = eft_tv_report(3, &g).unwrap();
        assert!(r.average_matches);
        assert_eq!(r.rows.len(), 2);
    }

    #[test]
    fn degree_mismatch() {
        let f = make_field(3, 1).unwrap();
        let g = Poly::parse(&f, "0,1").unwrap();
        let a = eft_measure(3, &g, None).unwrap();
        let b = eft_measure(4, &g, None).unwrap();
        assert!(tv_distance(&a, &b).is_err());
    }
}
