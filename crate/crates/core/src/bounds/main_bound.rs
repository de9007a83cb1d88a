use super::census::{Census, ClassTally};
use super::{check_progression, round_up, squarefree_moduli};
use crate::arithfun::f_rho_eft;
use crate::error::{Error, Result};
use crate::field::make_field;
use crate::poly::Poly;
use crate::symrep::{c1, c2, character_table, dim_vd, VirtualCharacter};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// One progression f = a mod g for one representation.
#[derive(Clone, Debug, Serialize)]
pub struct ProgressionReport {
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub g: String,
    pub a: String,
    pub function: String,
    pub sum: i128,
    pub coprime_sum: i128,
    pub phi: u64,
    /// Coprime mean as an exact fraction.
    pub mean: String,
    pub error: f64,
    pub c1: String,
    pub c2: String,
    pub bound: f64,
    pub pass: bool,
    /// |sum| against (C1 + C2 sqrt q) q^{(n-m)/2}, for irreducibles with all parts < m.
    pub alt_bound: Option<f64>,
    pub alt_pass: Option<bool>,
    /// error against (C1 + C2 sqrt q) q^{(n-m)/2} + sum_{d<m} q^d dim V^d / phi(g).
    pub refined_bound: f64,
    pub refined_pass: bool,
}

/// C1, C2 and dim V^d for d < m.
#[derive(Clone, Debug)]
pub struct RepConstants {
    pub c1: BigInt,
    pub c2: BigInt,
    pub dims: Vec<BigInt>,
}

type ConstKey = (Vec<i64>, u32);

/// Constants for (rho, m), cached for the life of the process.
pub fn constants_for(rho: &VirtualCharacter, m: u32) -> Result<Arc<RepConstants>> {
    static C: OnceLock<Mutex<HashMap<ConstKey, Arc<RepConstants>>>> = OnceLock::new();
    let cache = C.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (rho.values().to_vec(), m);
    if let Some(v) = cache.lock().expect("poisoned").get(&key) {
        return Ok(v.clone());
    }
    let dims = (0..m).map(|d| dim_vd(rho, d, m)).collect::<Result<Vec<_>>>()?;
    let v = Arc::new(RepConstants { c1: c1(rho, m)?, c2: c2(rho, m)?, dims });
    cache.lock().expect("poisoned").insert(key, v.clone());
    Ok(v)
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn values_on(census: &Census, rho: &VirtualCharacter) -> Result<Vec<i128>> {
    census.efts().iter().map(|w| f_rho_eft(rho, w).map(|v| v as i128)).collect()
}

fn report(
    tally: &ClassTally,
    census: &Census,
    label: &str,
    rho: &VirtualCharacter,
    values: &[i128],
    a_idx: usize,
) -> Result<ProgressionReport> {
    let g = tally.modulus();
    let q = g.field().q();
    let (n, m) = (census.n(), g.deg());
    let k = constants_for(rho, m as u32)?;
    let phi = tally.units().len() as u64;
    let sum = tally.class_sum(values, a_idx);
    let coprime_sum = tally.coprime_sum(values);
    let diff = (sum * phi as i128 - coprime_sum).unsigned_abs();
    let error = diff as f64 / phi as f64;
    let qf = q as f64;
    let core = (to_f64(&k.c1) + to_f64(&k.c2) * qf.sqrt()) * qf.powf((n - m) as f64 / 2.0);
    let bound = round_up(2.0 * core);
    let label_part = rho.irreducible_label();
    let small_parts = label_part.as_ref().is_some_and(|p| p.parts().iter().all(|&x| (x as usize) < m));
    let (alt_bound, alt_pass) = if small_parts {
        let b = round_up(core);
        (Some(b), Some(sum.unsigned_abs() as f64 <= b))
    } else {
        (None, None)
    };
    let o: f64 = k.dims.iter().enumerate().map(|(d, v)| qf.powi(d as i32) * to_f64(v)).sum::<f64>() / phi as f64;
    let refined_bound = round_up(core + o);
    let a = crate::enumerate::residue_from_index(g.field(), a_idx as u64);
    let g_div = num_integer::Integer::gcd(&coprime_sum, &(phi as i128));
    let mean = if g_div == 0 {
        "0".to_string()
    } else if phi as i128 / g_div == 1 {
        format!("{}", coprime_sum / g_div)
    } else {
        format!("{}/{}", coprime_sum / g_div, phi as i128 / g_div)
    };
    Ok(ProgressionReport {
        q,
        n,
        m,
        g: g.to_coeff_string(),
        a: a.to_coeff_string(),
        function: label.to_string(),
        sum,
        coprime_sum,
        phi,
        mean,
        error,
        c1: k.c1.to_string(),
        c2: k.c2.to_string(),
        bound,
        pass: error <= bound,
        alt_bound,
        alt_pass,
        refined_bound,
        refined_pass: error <= refined_bound,
    })
}

/// Checks the main inequality for one (rho, n, g, a).
pub fn verify_main_bound(rho: &VirtualCharacter, n: usize, g: &Poly, a: &Poly) -> Result<ProgressionReport> {
    check_progression(n, g)?;
    if rho.n() as usize != n {
        return Err(Error::DegreeMismatch { expected: n, got: rho.n() as usize });
    }
    if !rho.is_genuine() {
        return Err(Error::Precondition("rho must be a genuine representation".into()));
    }
    let a = a.rem(g)?;
    if !a.gcd(g).is_one() {
        return Err(Error::NotInvertible);
    }
    let census = Census::get(g.field(), n)?;
    let tally = census.tally(g);
    let values = values_on(&census, rho)?;
    let label = rho.irreducible_label().map(|p| p.to_string()).unwrap_or_else(|| format!("{:?}", rho.values()));
    let a_idx = crate::enumerate::residue_index(&a) as usize;
    report(&tally, &census, &label, rho, &values, a_idx)
}

/// Reports for every unit a mod g and each representation given.
pub fn reports_for(g: &Poly, n: usize, reps: &[(String, VirtualCharacter)]) -> Result<Vec<ProgressionReport>> {
    check_progression(n, g)?;
    let census = Census::get(g.field(), n)?;
    let tally = census.tally(g);
    let mut out = Vec::new();
    for (label, rho) in reps {
        let values = values_on(&census, rho)?;
        for &a in tally.units() {
            out.push(report(&tally, &census, label, rho, &values, a)?);
        }
    }
    Ok(out)
}

/// Grid of fields, degrees and moduli for the exhaustive main-bound run.
#[derive(Clone, Debug, Serialize)]
pub struct GridConfig {
    pub qs: Vec<u64>,
    pub nmax: usize,
    /// Per-q override of nmax.
    pub nmax_for: Vec<(u64, usize)>,
    pub mmax: usize,
}

impl GridConfig {
    fn nmax(&self, q: u64) -> usize {
        self.nmax_for.iter().find(|(p, _)| *p == q).map(|x| x.1).unwrap_or(self.nmax)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GridSummary {
    pub checked: u64,
    pub moduli: u64,
    pub failures: Vec<ProgressionReport>,
    /// Irreducibles with a part >= m whose progression sums were not constant in a.
    pub nonconstant_large_part: u64,
    pub alt_checked: u64,
    pub alt_failures: u64,
    pub refined_failures: u64,
    /// Largest error / bound seen over reports with a nonzero bound.
    pub max_ratio: f64,
}

/// Runs every irreducible rho of S_n against every unit of every squarefree
/// modulus of degree 1..=mmax (and <= n) on the grid.
pub fn verify_main_grid(cfg: &GridConfig) -> Result<GridSummary> {
    let mut summary = GridSummary::default();
    for &q in &cfg.qs {
        let field = make_field_q(q)?;
        for n in 1..=cfg.nmax(q) {
            let census = Census::get(&field, n)?;
            let irreps = character_table(n as u32)?;
            let values: Vec<Vec<i128>> = irreps.iter().map(|r| values_on(&census, r)).collect::<Result<_>>()?;
            for m in 1..=cfg.mmax.min(n) {
                for g in squarefree_moduli(&field, m) {
                    summary.moduli += 1;
                    let tally = census.tally(&g);
                    for (rho, vals) in irreps.iter().zip(&values) {
                        let label = rho.irreducible_label().expect("irreducible").to_string();
                        let consts = constants_for(rho, m as u32)?;
                        let large = rho.irreducible_label().is_some_and(|p| p.parts()[0] as usize >= m);
                        let reports: Vec<ProgressionReport> = crate::par::map_slice(tally.units(), |&a| {
                            report(&tally, &census, &label, rho, vals, a)
                        })
                        .into_iter()
                        .collect::<Result<_>>()?;
                        if large && (!consts.c1.is_zero() || !consts.c2.is_zero()) {
                            return Err(Error::Precondition(format!("C1/C2 nonzero for {label} with m = {m}")));
                        }
                        for r in reports {
                            summary.checked += 1;
                            if large && r.error != 0.0 {
                                summary.nonconstant_large_part += 1;
                            }
                            if r.bound > 0.0 {
                                summary.max_ratio = summary.max_ratio.max(r.error / r.bound);
                            }
                            if let Some(p) = r.alt_pass {
                                summary.alt_checked += 1;
                                if !p {
                                    summary.alt_failures += 1;
                                }
                            }
                            if !r.refined_pass {
                                summary.refined_failures += 1;
                            }
                            if !r.pass {
                                summary.failures.push(r);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}

/// Prime fields and F_4 are addressed by q alone.
fn make_field_q(q: u64) -> Result<crate::field::FieldRef> {
    let ps = crate::field::prime_factors(q);
    let p = ps[0];
    let mut k = 0;
    let mut x = q;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    if x != 1 {
        return Err(Error::Precondition(format!("{q} is not a prime power")));
    }
    make_field(p, k)
}
