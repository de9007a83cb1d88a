use crate::arithfun::divisors;
use crate::dirichlet::{gammas, UnitGroup};
use crate::error::Result;
use crate::factor::factor;
use crate::poly::Poly;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Fourier transform of the Fejer kernel: max(0, 1 - |x| / lambda).
pub fn fejer_hat(x: f64, lambda: f64) -> f64 {
    (1.0 - x.abs() / lambda).max(0.0)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// psi(x) = lambda sinc^2(lambda x).
pub fn fejer(x: f64, lambda: f64) -> f64 {
    lambda * sinc(lambda * x).powi(2)
}

/// sum_k psi(x + m k), summed in real space. When lambda m = p / r is
/// rational with small r, the sum over each class k = s mod r is the
/// classical sum of 1/(y + P j)^2 with P = m r, giving
/// sum_s lambda sinc^2(lambda y_s) / sinc^2(y_s / P) with y_s reduced mod P.
/// Otherwise the sum is truncated and the second value bounds the tail.
pub fn fejer_periodized(x: f64, m: f64, lambda: f64) -> (f64, f64) {
    for r in 1..=10_000u32 {
        let t = lambda * m * r as f64;
        if (t - t.round()).abs() < 1e-9 * t.max(1.0) {
            let p = m * r as f64;
            let mut total = 0.0;
            for s in 0..r {
                let y = x + m * s as f64;
                let yr = y - p * (y / p + 0.5).floor();
                total += lambda * sinc(lambda * yr).powi(2) / sinc(yr / p).powi(2);
            }
            return (total, 0.0);
        }
    }
    let k_max = 200_000i64;
    let mut total = 0.0;
    for k in -k_max..=k_max {
        total += fejer(x + m * k as f64, lambda);
    }
    let edge = m * k_max as f64 - x.abs();
    (total, 2.0 / (PI * PI * lambda * m * (edge - m)))
}

/// The Poisson-summation side: -sum_{0 < |n| < lambda m} (q^{-|n|/2}/m)
/// psi_hat(n/m) S_n^{sgn n} + count (m-1)/m psi_hat(0), where sums[n-1] is
/// S_n = sum over the characters of sum_{f in M_n, (f,g)=1} Lambda(f) chi(f)
/// and S_{-n} is its conjugate.
pub fn ol_decomposition(q: u32, m: usize, lambda: f64, count: u64, sums: &[Complex64]) -> f64 {
    let mf = m as f64;
    let mut total = count as f64 * (mf - 1.0) / mf * fejer_hat(0.0, lambda);
    for (i, s) in sums.iter().enumerate() {
        let n = (i + 1) as f64;
        let w = (q as f64).powf(-n / 2.0) / mf * fejer_hat(n / mf, lambda);
        total -= w * (s + s.conj()).re;
    }
    total
}

/// One degree of the progression-sum form of the odd primitive Lambda sum:
/// (q-1) times the character path against the exact integer path.
#[derive(Clone, Debug, Serialize)]
pub struct OlIdentityRow {
    pub n: usize,
    pub character_path: [f64; 2],
    pub integer_path: i128,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub q: u32,
    pub m: usize,
    pub g: String,
    pub lambda: f64,
    /// Number of odd primitive characters.
    pub count: u64,
    pub zero_side: f64,
    pub decomposition_side: f64,
    /// psi_hat(0) times count.
    pub main_term: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub tail_bound: f64,
    pub ol_identity: Vec<OlIdentityRow>,
    pub no_odd_primitive: bool,
    pub lambda_above_1_07: bool,
    pub lambda_at_least_2: bool,
    /// q > (lambda + 1)^4 e^4 / 4.
    pub q_large_enough: bool,
}

/// Sum over f in M_n with f = alpha mod h of Lambda(f), from the
/// histogram mod g, for each constant alpha (index = field element).
fn constant_class_sums(gr: &UnitGroup, h: &Poly, hist: &[i128]) -> Vec<i128> {
    let q = gr.field().q() as usize;
    let mut out = vec![0i128; q];
    for (b, &v) in hist.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let r = gr.ring().poly(b).rem(h).expect("nonzero");
        if r.deg() == 0 && !r.is_zero() {
            out[r.coeff(0) as usize] += v;
        }
    }
    out
}

fn ol_identity_integer(gr: &UnitGroup, n: usize, hist: &[i128]) -> Result<i128> {
    let g = gr.modulus();
    let field = gr.field();
    let q = field.q() as i128;
    let primes = gr.primes();
    // Lambda(f) for f in M_n sharing a factor with g: f = pi^j, pi | g.
    let bad: Vec<(Poly, i128)> = primes
        .iter()
        .filter(|p| n.is_multiple_of(p.deg()))
        .map(|p| (p.pow((n / p.deg()) as u64), p.deg() as i128))
        .collect();
    let mut total = 0i128;
    for h in divisors(g)? {
        if h.is_one() {
            continue;
        }
        let omega = factor(&g.exact_div(&h))?.factors.len();
        let mu = if omega % 2 == 0 { 1 } else { -1 };
        let phi_h = crate::enumerate::phi(&h) as i128;
        let good = constant_class_sums(gr, &h, hist);
        let mut inner = 0i128;
        for alpha in 1..field.q() {
            let w = if alpha == 1 { q - 2 } else { -1 };
            let mut s = good[alpha as usize];
            for (f, lam) in &bad {
                let r = f.rem(&h)?;
                if r.deg() == 0 && r.coeff(0) == alpha && !r.is_zero() {
                    s -= lam;
                }
            }
            inner += w * s;
        }
        total += phi_h * mu * inner;
    }
    Ok(total)
}

/// Both sides of the one-level density identity for the Fejer kernel with
/// support [-lambda, lambda], summed over odd primitive characters mod g.
pub fn one_level_density(g: &Poly, lambda: f64) -> Result<DensityReport> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(crate::Error::Precondition("lambda must be positive".into()));
    }
    let gr = UnitGroup::new(g)?;
    let q = gr.field().q();
    let m = gr.m();
    let mf = m as f64;
    let chars: Vec<_> = gr.primitive_characters().filter(|c| c.is_odd()).collect();
    let count = chars.len() as u64;
    let nmax = ((lambda * mf).ceil() as usize).saturating_sub(1).max(1);
    let hist = gr.lambda_histograms(nmax);

    let mut zero_side = 0.0;
    let mut tail_bound = 0.0;
    let lq = (q as f64).ln();
    for chi in &chars {
        for gamma in gammas(chi)? {
            let (v, t) = fejer_periodized(mf * lq * gamma / (2.0 * PI), mf, lambda);
            zero_side += v;
            tail_bound += t;
        }
    }
    let sums: Vec<Complex64> = (1..=nmax)
        .map(|n| {
            chars
                .iter()
                .map(|chi| {
                    hist[n]
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v != 0)
                        .map(|(b, &v)| chi.value_index(b) * v as f64)
                        .sum::<Complex64>()
                })
                .sum()
        })
        .collect();
    let decomposition_side = ol_decomposition(q, m, lambda, count, &sums);
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let int = ol_identity_integer(&gr, n, &hist[n])?;
        let c = sums[n - 1] * (q as f64 - 1.0);
        let scale = 1e-6 * (1.0 + c.norm());
        rows.push(OlIdentityRow {
            n,
            character_path: [c.re, c.im],
            integer_path: int,
            exact: (c.re - int as f64).abs() < scale && c.im.abs() < scale,
        });
    }
    let tolerance = 1e-6 * (mf * count as f64).max(1.0) + tail_bound;
    Ok(DensityReport {
        q,
        m,
        g: g.to_coeff_string(),
        lambda,
        count,
        zero_side,
        decomposition_side,
        main_term: count as f64 * fejer_hat(0.0, lambda),
        tolerance,
        pass: (zero_side - decomposition_side).abs() <= tolerance,
        tail_bound,
        ol_identity: rows,
        no_odd_primitive: count == 0,
        lambda_above_1_07: lambda > 1.07,
        lambda_at_least_2: lambda >= 2.0,
        q_large_enough: q as f64 > (lambda + 1.0).powi(4) * std::f64::consts::E.powi(4) / 4.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn periodization_matches_brute_force() {
        for (x, m, lambda) in [(0.3, 2.0, 2.0), (-1.7, 3.0, 1.5), (0.0, 2.0, 3.0), (2.9, 3.0, 1.25)] {
            let (closed, tail) = fejer_periodized(x, m, lambda);
            assert_eq!(tail, 0.0);
            let brute: f64 = (-400_000i64..=400_000).map(|k| fejer(x + m * k as f64, lambda)).sum();
            assert!((closed - brute).abs() < 1e-5, "{x} {m} {lambda}: {closed} vs {brute}");
        }
    }

    #[test]
    fn sides_agree() {
        for (q, gs) in [(3u64, "1,0,1"), (3, "0,1,0,1"), (5, "0,1,1")] {
            let f = make_field(q, 1).unwrap();
            let g = Poly::parse(&f, gs).unwrap();
            for lambda in [1.5, 2.0, 3.0] {
                let r = one_level_density(&g, lambda).unwrap();
                assert!(r.pass, "{r:?}");
                assert!(r.ol_identity.iter().all(|row| row.exact), "{r:?}");
            }
        }
        let f = make_field(2, 1).unwrap();
        let r = one_level_density(&Poly::parse(&f, "1,1,1").unwrap(), 2.0).unwrap();
        assert!(r.no_odd_primitive);
    }

    #[test]
    fn zeroed_sums_leave_the_main_term() {
        let v = ol_decomposition(3, 2, 2.0, 4, &[Complex64::new(0.0, 0.0); 3]);
        assert!((v - 4.0 * 0.5).abs() < 1e-15);
        let w: f64 = (1..3).map(|a| if a == 1 { 1.0 - 1.0 / 2.0 } else { -1.0 / 2.0 }).sum();
        assert_eq!(w, 0.0);
    }
}
