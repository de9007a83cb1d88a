//! Torus traces on V_rho and V_rho^d, the constants C1 and C2, the alternative
//! C2 formulas through Young-subgroup invariants, M_rho(w), and closed forms
//! for the sign, tensor-power and exterior-algebra families.

use super::character::{named_rep, young_invariant_dim, RepKind, VirtualCharacter};
use super::multipoly::MultiPoly;
use super::partition::{check_degree, class_table, factorial, partitions_with_len, Partition};
use super::binomial;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// tr(Diag(x_1..x_{m-1}) | V_rho) where V_rho = ((C^{m-1})^{tensor n} ⊗ rho ⊗ sgn)^{S_n}.
pub fn trace_v(rho: &VirtualCharacter, m: u32) -> Result<MultiPoly> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    let n = rho.n();
    check_degree(n)?;
    let t = class_table(n);
    let nv = m as usize - 1;
    let twisted = rho.tensor_sign();
    let terms = crate::par::map_range(t.classes.len(), |i| {
        let c = twisted.values()[i];
        if c == 0 || (nv == 0 && n > 0) {
            return MultiPoly::zero(nv);
        }
        MultiPoly::power_sum_product(nv, t.classes[i].parts()).scale(&(BigInt::from(c) * BigInt::from(t.sizes[i])))
    });
    let mut acc = MultiPoly::zero(nv);
    for p in &terms {
        acc.add_scaled(p, &BigInt::one());
    }
    acc.div_exact(&BigInt::from(t.order))
}

/// tr(Diag(x_1..x_m) | V_rho^d) where
/// V_rho^d = ((C^m)^{tensor (n-d)} ⊗ rho ⊗ sgn_{S_{n-d}})^{S_{n-d} x S_d}.
pub fn trace_vd(rho: &VirtualCharacter, d: u32, m: u32) -> Result<MultiPoly> {
    let n = rho.n();
    if d > n {
        return Err(Error::Precondition(format!("d = {d} exceeds n = {n}")));
    }
    check_degree(n)?;
    let nv = m as usize;
    let ta = class_table(n - d);
    let tb = class_table(d);
    let mut acc = MultiPoly::zero(nv);
    for (ia, alpha) in ta.classes.iter().enumerate() {
        let mut inner = BigInt::zero();
        for (ib, beta) in tb.classes.iter().enumerate() {
            let v = rho.value(&alpha.union(beta));
            if v != 0 {
                inner += BigInt::from(v) * BigInt::from(tb.sizes[ib]);
            }
        }
        if inner.is_zero() {
            continue;
        }
        let w = inner * BigInt::from(ta.sizes[ia]) * BigInt::from(alpha.sign());
        acc.add_scaled(&MultiPoly::power_sum_product(nv, alpha.parts()), &w);
    }
    acc.div_exact(&(BigInt::from(ta.order) * BigInt::from(tb.order)))
}

pub fn dim_vd(rho: &VirtualCharacter, d: u32, m: u32) -> Result<BigInt> {
    Ok(trace_vd(rho, d, m)?.eval_ones())
}

pub fn dim_v(rho: &VirtualCharacter, m: u32) -> Result<BigInt> {
    Ok(trace_v(rho, m)?.eval_ones())
}

fn check_nm(rho: &VirtualCharacter, m: u32) -> Result<()> {
    if rho.n() == 0 || m == 0 {
        return Err(Error::Precondition("need n >= 1 and m >= 1".into()));
    }
    Ok(())
}

/// C1(rho) = sum_d (-1)^d d^m tr(V^d)/dx_1..dx_m at 1, minus
/// sum_{d >= m} (-1)^{d-m} C(d, m) dim V^d.
pub fn c1(rho: &VirtualCharacter, m: u32) -> Result<BigInt> {
    check_nm(rho, m)?;
    let n = rho.n();
    let per_d = crate::par::map_range(n as usize + 1, |d| trace_vd(rho, d as u32, m));
    let mut total = BigInt::zero();
    for (d, tr) in per_d.into_iter().enumerate() {
        let tr = tr?;
        let s = if d % 2 == 0 { 1 } else { -1 };
        total += tr.mixed_partial_at_ones() * s;
        if d as u32 >= m {
            let s = if (d as u32 - m).is_multiple_of(2) { 1 } else { -1 };
            total -= binomial(d as i64, m as i64) * tr.eval_ones() * s;
        }
    }
    Ok(total)
}

/// C2(rho) = d^{m-1} tr(V_rho)/dx_1..dx_{m-1} at 1.
pub fn c2(rho: &VirtualCharacter, m: u32) -> Result<BigInt> {
    check_nm(rho, m)?;
    Ok(trace_v(rho, m)?.mixed_partial_at_ones())
}

fn compositions(n: u32, k: usize, min: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, left: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in min..=rem {
            cur.push(e);
            rec(rem - e, left - 1, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, min, &mut Vec::new(), &mut out);
    out
}

/// C2 as the sum over e in N^{m-1} with sum n of
/// (prod e_i) dim (rho ⊗ sgn)^{prod S_{e_i}}.
pub fn c2_via_e_formula(rho: &VirtualCharacter, m: u32) -> Result<BigInt> {
    check_nm(rho, m)?;
    let twisted = rho.tensor_sign();
    let mut total = BigInt::zero();
    // tuples with a zero entry contribute nothing
    for e in compositions(rho.n(), m as usize - 1, 1) {
        let weight: BigInt = e.iter().map(|&x| BigInt::from(x)).product();
        total += weight * young_invariant_dim(&twisted, &e)?;
    }
    Ok(total)
}

/// C2 grouped by the part-multiplicity function w with sum w(k) = m - 1.
pub fn c2_via_w_formula(rho: &VirtualCharacter, m: u32) -> Result<BigInt> {
    check_nm(rho, m)?;
    let twisted = rho.tensor_sign();
    let mut total = BigInt::zero();
    for w in partitions_with_len(rho.n(), m as usize - 1) {
        let mult = w.multiplicities();
        let mut coef = BigInt::from(factorial(m - 1));
        for (k, &c) in mult.iter().enumerate().skip(1) {
            coef /= BigInt::from(factorial(c));
            coef *= BigInt::from(k).pow(c);
        }
        total += coef * young_invariant_dim(&twisted, w.parts())?;
    }
    Ok(total)
}

/// M_rho(w) = (-1)^n dim (rho ⊗ sgn)^{prod_k S_k^{w(k)}}, with w given as the
/// partition having w(k) parts equal to k.
pub fn m_rho(rho: &VirtualCharacter, w: &Partition) -> Result<i64> {
    if w.n() != rho.n() {
        return Err(Error::Precondition(format!("sum of k w(k) is {} but n = {}", w.n(), rho.n())));
    }
    let dim = young_invariant_dim(&rho.tensor_sign(), w.parts())?;
    Ok(if rho.n().is_multiple_of(2) { dim } else { -dim })
}

/// Representation families with closed-form constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// rho = sgn, whose factorization function is (-1)^n mu.
    Mobius,
    /// rho = (C^k)^{tensor n}, whose factorization function is d_k.
    Divisor(u32),
    /// rho = sum of all exterior powers of std, tied to the von Mangoldt function.
    VonMangoldt,
}

impl Family {
    pub fn rep(&self, n: u32) -> Result<VirtualCharacter> {
        match self {
            Family::Mobius => named_rep(&RepKind::Sign, n),
            Family::Divisor(k) => named_rep(&RepKind::TensorPower(*k), n),
            Family::VonMangoldt => named_rep(&RepKind::WedgeSum, n),
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "mobius" | "mu" => Ok(Family::Mobius),
            "vonmangoldt" | "lambda" => Ok(Family::VonMangoldt),
            _ => {
                let k = s
                    .strip_prefix("divisor:")
                    .or_else(|| s.strip_prefix("d"))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))?;
                Ok(Family::Divisor(k))
            }
        }
    }
}

/// Closed forms (C1, C2), valid for m >= 2 and n >= m.
pub fn closed_form_constants(family: Family, n: u32, m: u32) -> Result<(BigInt, BigInt)> {
    if m < 2 || n < m {
        return Err(Error::Precondition(format!("closed forms need m >= 2 and n >= m (n={n}, m={m})")));
    }
    let (n, m) = (n as i64, m as i64);
    Ok(match family {
        Family::Mobius => (binomial(n + m - 2, 2 * m - 2), binomial(n + m - 2, 2 * m - 3)),
        Family::Divisor(k) => {
            let k = k as i64;
            let c1 = (BigInt::from(k).pow(m as u32) - binomial(m + k - 1, m)) * binomial(m * k - m - k, n - m);
            let c2 = BigInt::from(k).pow(m as u32 - 1) * binomial(m * k - k - m + 1, n + 1 - m);
            (c1, c2)
        }
        Family::VonMangoldt => {
            let c2 = BigInt::from(2).pow(m as u32 - 2) * binomial(n + m - 2, 2 * m - 3);
            let c1 = (0..=m - 2)
                .map(|r| BigInt::from(2).pow((m - 2 - r) as u32) * binomial(n + m - 2 - r, 2 * m - 2 - r))
                .sum();
            (c1, c2)
        }
    })
}

/// The larger binomial expressions sometimes quoted for the von Mangoldt
/// family, (sum_r 2^{m-1-r} C(n+m-r, 2m-r) / 2, 2^{m-1} C(n+m, 2m-1) / 2).
/// They dominate the exact constants and serve as a coarser upper bound.
pub fn von_mangoldt_loose_constants(n: u32, m: u32) -> (BigInt, BigInt) {
    let (n, m) = (n as i64, m as i64);
    let c2 = BigInt::from(2).pow((m - 1).max(0) as u32) * binomial(n + m, 2 * m - 1) / 2;
    let c1: BigInt = (0..=m - 2)
        .map(|r| BigInt::from(2).pow((m - 1 - r) as u32) * binomial(n + m - r, 2 * m - r))
        .sum::<BigInt>()
        / 2;
    (c1, c2)
}

/// [u^n] of c u^s / ((1+u)^a (1-u)^b) for a in {0, 1}.
fn series_coeff(c: i64, s: u32, a: u32, b: u32, n: u32) -> BigInt {
    if n < s {
        return BigInt::zero();
    }
    let j = (n - s) as i64;
    let tail = |i: i64| binomial(i + b as i64 - 1, b as i64 - 1);
    let total: BigInt = if a == 0 {
        tail(j)
    } else {
        (0..=j).map(|i| if (j - i) % 2 == 0 { tail(i) } else { -tail(i) }).sum()
    };
    total * c
}

/// Von Mangoldt constants by coefficient extraction from the generating
/// functions of the torus traces, independent of the closed binomial sums.
pub fn von_mangoldt_series_constants(n: u32, m: u32) -> (BigInt, BigInt) {
    let pow2 = 1i64 << (m - 1);
    let alt_sum = series_coeff(pow2, m, 1, 2 * m - 1, n);
    let binom_sum = series_coeff(1, m, 1, m, n);
    let c2 = series_coeff(pow2 / 2, m - 1, 0, 2 * m - 2, n);
    (alt_sum - binom_sum, c2)
}

/// (alpha + 1)^{x + y} / alpha^x * ((alpha + 1) e / alpha)^a, an upper bound for
/// C(a + b + x + y, a + x) when alpha b <= a.
pub fn binomial_bound(a: u64, b: u64, x: i64, y: i64, alpha: f64) -> Result<f64> {
    let (af, bf) = (a as f64, b as f64);
    if !(alpha > 0.0) || alpha * bf > af * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!("need alpha > 0 and alpha*b <= a (a={a}, b={b}, alpha={alpha})")));
    }
    let ax = a as i64 + x;
    if ax < 0 || a as i64 + b as i64 + x + y < ax {
        return Err(Error::Precondition("need a+b+x+y >= a+x >= 0".into()));
    }
    let log = (x + y) as f64 * (alpha + 1.0).ln() - x as f64 * alpha.ln()
        + af * ((alpha + 1.0).ln() + 1.0 - alpha.ln());
    Ok(log.exp())
}
