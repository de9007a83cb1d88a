//! Progression sums of arithmetic functions and verification of the explicit
//! equidistribution inequalities.

mod census;
mod density;
mod main_bound;
mod named;

pub use census::{Census, ClassTally, MAX_CENSUS};
pub use density::{fejer_hat, fejer_periodized, one_level_density, ol_decomposition, DensityReport, OlIdentityRow};
pub use main_bound::{
    constants_for, reports_for, verify_main_bound, verify_main_grid, GridConfig, GridSummary, ProgressionReport,
};
pub use named::{verify_named_bounds, NamedKind, NamedReport};

use crate::arithfun::{divisor_k, f_prime, f_prime2, f_rho, f_tuple, mobius, von_mangoldt};
use crate::enumerate::MonicSet;
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::poly::Poly;
use crate::symrep::VirtualCharacter;
use num_bigint::BigInt;
use num_rational::BigRational;

/// An integer-valued function on monic polynomials.
#[derive(Clone, Debug)]
pub enum ArithFn {
    Mobius,
    VonMangoldt,
    Divisor(u32),
    Rho(VirtualCharacter),
    Tuple(Vec<u32>),
    FPrime(Poly, Vec<u32>),
    FPrime2(Poly, Vec<u32>),
}

impl ArithFn {
    pub fn eval(&self, f: &Poly) -> Result<i128> {
        Ok(match self {
            ArithFn::Mobius => mobius(f)? as i128,
            ArithFn::VonMangoldt => von_mangoldt(f)? as i128,
            ArithFn::Divisor(k) => divisor_k(f, *k)? as i128,
            ArithFn::Rho(chi) => f_rho(chi, f)? as i128,
            ArithFn::Tuple(ns) => f_tuple(ns, f)? as i128,
            ArithFn::FPrime(h, ns) => f_prime(h, ns, f)? as i128,
            ArithFn::FPrime2(h, ns) => f_prime2(h, ns, f)? as i128,
        })
    }

    pub fn tag(&self) -> String {
        match self {
            ArithFn::Mobius => "mobius".into(),
            ArithFn::VonMangoldt => "vonmangoldt".into(),
            ArithFn::Divisor(k) => format!("d{k}"),
            ArithFn::Rho(chi) => match chi.irreducible_label() {
                Some(p) => format!("rho{p}"),
                None => format!("rho{:?}", chi.values()),
            },
            ArithFn::Tuple(ns) => format!("F{ns:?}"),
            ArithFn::FPrime(h, ns) => format!("F'[{}]{ns:?}", h.to_coeff_string()),
            ArithFn::FPrime2(h, ns) => format!("F''[{}]{ns:?}", h.to_coeff_string()),
        }
    }
}

pub(crate) fn check_progression(n: usize, g: &Poly) -> Result<()> {
    if g.is_zero() || !g.is_monic() {
        return Err(Error::NotMonic);
    }
    if g.deg() == 0 {
        return Err(Error::Precondition("modulus must have degree >= 1".into()));
    }
    if n < g.deg() {
        return Err(Error::Precondition(format!("need n >= m, got n = {n}, m = {}", g.deg())));
    }
    if !is_squarefree(g) {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

pub fn is_squarefree(g: &Poly) -> bool {
    g.gcd(&g.derivative()).is_one()
}

/// Monic squarefree polynomials of degree m, in enumeration order.
pub fn squarefree_moduli(field: &FieldRef, m: usize) -> Vec<Poly> {
    MonicSet::all(field, m).iter().filter(is_squarefree).collect()
}

fn sum_over(set: &MonicSet, func: &ArithFn) -> Result<i128> {
    let parts = crate::par::map_chunks(set.len() as usize, 1024, |r| {
        set.range(r.start as u64..r.end as u64).map(|f| func.eval(&f)).sum::<Result<i128>>()
    });
    parts.into_iter().sum()
}

/// sum of F(f) over f in M_n with f = a mod g.
pub fn progression_sum(func: &ArithFn, n: usize, g: &Poly, a: &Poly) -> Result<i128> {
    check_progression(n, g)?;
    sum_over(&MonicSet::residue(n, g, a)?, func)
}

/// (1/phi(g)) sum of F(f) over f in M_n coprime to g.
pub fn coprime_mean(func: &ArithFn, n: usize, g: &Poly) -> Result<BigRational> {
    check_progression(n, g)?;
    let total = sum_over(&MonicSet::coprime(n, g), func)?;
    let phi = crate::enumerate::phi(g);
    Ok(BigRational::new(BigInt::from(total), BigInt::from(phi)))
}

/// Rounds a nonnegative bound up past accumulated floating error.
pub(crate) fn round_up(x: f64) -> f64 {
    x * (1.0 + 1e-12) + f64::MIN_POSITIVE
}
