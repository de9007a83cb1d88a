use super::census::Census;
use super::{check_progression, round_up, ArithFn};
use crate::arithfun::f_rho_eft;
use crate::enumerate::{residue_index, MonicSet};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::symrep::{binomial, named_rep, RepKind};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

/// The closed-form inequalities for named arithmetic functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NamedKind {
    Mobius,
    Primes,
    Divisor(u32),
    Moments(u32),
}

impl NamedKind {
    pub fn tag(&self) -> String {
        match self {
            NamedKind::Mobius => "mobius".into(),
            NamedKind::Primes => "primes".into(),
            NamedKind::Divisor(k) => format!("divisor{k}"),
            NamedKind::Moments(k) => format!("moments{k}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedReport {
    pub kind: String,
    pub q: u32,
    pub n: usize,
    pub m: usize,
    pub g: String,
    pub a: String,
    /// Left side from direct function values (exact, as a fraction where needed).
    pub lhs_direct: String,
    /// Left side from the representation-theoretic path.
    pub lhs_rep: String,
    pub paths_agree: bool,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    /// theta = m / n and the corresponding saving exponent, reported only.
    pub theta: f64,
    pub delta: Option<f64>,
}

fn bf(n: i64, k: i64) -> f64 {
    binomial(n, k).to_f64().unwrap_or(f64::INFINITY)
}

fn frac(num: i128, den: i128) -> String {
    let g = num_integer::Integer::gcd(&num, &den).max(1);
    if den / g == 1 {
        format!("{}", num / g)
    } else {
        format!("{}/{}", num / g, den / g)
    }
}

fn delta(kind: NamedKind, q: f64, theta: f64) -> Option<f64> {
    if !(0.0..1.0).contains(&theta) || theta == 0.0 {
        return None;
    }
    let lq = |x: f64| x.ln() / q.ln();
    Some(match kind {
        NamedKind::Mobius => 0.5 - lq((1.0 + theta) * std::f64::consts::E / (1.0 - theta)),
        NamedKind::Primes => {
            0.5 - lq(2f64.powf(theta / (1.0 - theta)) * std::f64::consts::E * (1.0 + theta) / (1.0 - theta))
        }
        NamedKind::Divisor(k) => {
            let k = k as f64;
            0.5 - lq((k - 1.0) * std::f64::consts::E * theta * k.powf(theta / (1.0 - theta)) / (1.0 - theta))
        }
        NamedKind::Moments(_) => return None,
    })
}

fn rep_values(census: &Census, chis: &[(i64, crate::symrep::VirtualCharacter)]) -> Result<Vec<i128>> {
    census
        .efts()
        .iter()
        .map(|w| {
            chis.iter().try_fold(0i128, |acc, (c, chi)| Ok(acc + *c as i128 * f_rho_eft(chi, w)? as i128))
        })
        .collect()
}

/// Evaluates one of the closed-form inequalities at (n, g, a): the left side
/// exactly along two paths and the right side rounded upward.
pub fn verify_named_bounds(kind: NamedKind, n: usize, g: &Poly, a: &Poly) -> Result<NamedReport> {
    check_progression(n, g)?;
    let a = a.rem(g)?;
    if !a.gcd(g).is_one() {
        return Err(Error::NotInvertible);
    }
    let q = g.field().q();
    let qf = q as f64;
    let m = g.deg();
    let (mi, ni) = (m as i64, n as i64);
    let theta = m as f64 / n as f64;
    let half = |e: i64| qf.powf(e as f64 / 2.0);
    if let NamedKind::Moments(k) = kind {
        let r = crate::dirichlet::moments1_check(g, &a, Complex64::new(0.5, 0.0), k)?;
        let paths = crate::dirichlet::moment_m(g, &a, Complex64::new(0.5, 0.0), k)?;
        return Ok(NamedReport {
            kind: kind.tag(),
            q,
            n,
            m,
            g: g.to_coeff_string(),
            a: a.to_coeff_string(),
            lhs_direct: format!("{:.12e}", (paths.direct - Complex64::new(r.main_term[0], r.main_term[1])).norm()),
            lhs_rep: format!("{:.12e}", r.error),
            paths_agree: (paths.direct - paths.identity).norm() < 1e-8,
            value: r.error,
            bound: r.bound,
            pass: r.pass,
            theta,
            delta: None,
        });
    }
    if m < 2 && !matches!(kind, NamedKind::Divisor(_)) {
        return Err(Error::Precondition("this bound needs m >= 2".into()));
    }
    let phi = crate::enumerate::phi(g) as i128;
    let census = Census::get(g.field(), n)?;
    let tally = census.tally(g);
    let a_idx = residue_index(&a) as usize;
    let class = MonicSet::residue(n, g, &a)?;
    let direct_sum = |func: &ArithFn| -> Result<i128> { class.iter().map(|f| func.eval(&f)).sum() };
    let (lhs_direct, lhs_rep, value, bound) = match kind {
        NamedKind::Mobius => {
            let d = direct_sum(&ArithFn::Mobius)?;
            let sgn = named_rep(&RepKind::Sign, n as u32)?;
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            let r = tally.class_sum(&rep_values(&census, &[(sign, sgn)])?, a_idx);
            let bound = bf(ni + mi - 2, 2 * mi - 2) * half(ni - mi) + bf(ni + mi - 2, 2 * mi - 3) * half(ni + 1 - mi);
            (frac(d, 1), frac(r, 1), d.unsigned_abs() as f64, bound)
        }
        NamedKind::Primes => {
            let all: i128 = MonicSet::all(g.field(), n).iter().map(|f| ArithFn::VonMangoldt.eval(&f)).sum::<Result<i128>>()?;
            if all != (q as i128).pow(n as u32) {
                return Err(Error::Precondition(format!("sum of Lambda over M_{n} is {all}, expected q^n")));
            }
            let d = direct_sum(&ArithFn::VonMangoldt)? * phi - all;
            let chis = (0..n as u32)
                .map(|i| Ok((if i % 2 == 0 { 1 } else { -1 }, named_rep(&RepKind::Wedge(i), n as u32)?)))
                .collect::<Result<Vec<_>>>()?;
            let vals = rep_values(&census, &chis)?;
            let all_rep: i128 = tally.all_class_sums(&vals).iter().sum();
            let r = tally.class_sum(&vals, a_idx) * phi - all_rep;
            let mut bound = 2f64.powi(mi as i32 - 1) * bf(ni + mi, 2 * mi - 1) * half(ni + 1 - mi);
            for r in 0..=mi - 2 {
                bound += 2f64.powi((mi - 1 - r) as i32) * bf(ni + mi - r, 2 * mi - r) * half(ni - mi);
            }
            (frac(d, phi), frac(r, phi), d.unsigned_abs() as f64 / phi as f64, bound)
        }
        NamedKind::Divisor(k) => {
            let coprime: i128 = MonicSet::coprime(n, g).iter().map(|f| ArithFn::Divisor(k).eval(&f)).sum::<Result<i128>>()?;
            let d = direct_sum(&ArithFn::Divisor(k))? * phi - coprime;
            let vals = rep_values(&census, &[(1, named_rep(&RepKind::TensorPower(k), n as u32)?)])?;
            let r = tally.class_sum(&vals, a_idx) * phi - tally.coprime_sum(&vals);
            let ki = k as i64;
            let km = (k as f64).powi(mi as i32);
            let bound = 2.0 * (km - bf(mi + ki - 1, mi)) * bf(mi * ki - mi - ki, ni - mi) * half(ni - mi)
                + 2.0 * (k as f64).powi(mi as i32 - 1) * bf(mi * ki - ki - mi + 1, ni + 1 - mi) * half(ni + 1 - mi);
            (frac(d, phi), frac(r, phi), d.unsigned_abs() as f64 / phi as f64, bound)
        }
        NamedKind::Moments(_) => unreachable!(),
    };
    let bound = round_up(bound);
    Ok(NamedReport {
        kind: kind.tag(),
        q,
        n,
        m,
        g: g.to_coeff_string(),
        a: a.to_coeff_string(),
        paths_agree: lhs_direct == lhs_rep,
        lhs_direct,
        lhs_rep,
        value,
        bound,
        pass: value <= bound,
        theta,
        delta: delta(kind, qf, theta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn grid_t_times_t_plus_one() {
        let f = make_field(3, 1).unwrap();
        let g = Poly::parse(&f, "0,1,1").unwrap();
        for n in 4..=8 {
            for a in crate::enumerate::units_mod(&g) {
                for kind in [NamedKind::Mobius, NamedKind::Primes, NamedKind::Divisor(2)] {
                    let r = verify_named_bounds(kind, n, &g, &a).unwrap();
                    assert!(r.pass && r.paths_agree, "{r:?}");
                }
            }
        }
    }
}
