use super::{l_poly, UnitGroup};
use crate::arithfun::{divisor_k, divisors};
use crate::error::{Error, Result};
use crate::factor::factor;
use crate::poly::Poly;
use crate::residue::ResidueRing;
use num_complex::Complex64;
use serde::Serialize;

/// M(g, a) evaluated along the character path and along the d_k-sum path.
#[derive(Clone, Copy, Debug)]
pub struct MomentPaths {
    pub direct: Complex64,
    pub identity: Complex64,
}

fn u_of(q: u32, s: Complex64) -> Complex64 {
    (-s * (q as f64).ln()).exp()
}

fn check_s(s: Complex64) -> Result<()> {
    if s.re < 0.5 {
        return Err(Error::Precondition("Re s must be at least 1/2".into()));
    }
    Ok(())
}

/// Per-degree d_k sums over residues mod g, for degrees 0..=k(m-1).
struct DkSums {
    ring: ResidueRing,
    phi: f64,
    units: Vec<usize>,
    hist: Vec<Vec<i128>>,
}

impl DkSums {
    fn new(g: &Poly, k: u32) -> Result<DkSums> {
        let ring = ResidueRing::new(g)?;
        let units: Vec<usize> = (0..ring.size()).filter(|&i| ring.poly(i).gcd(g).is_one()).collect();
        let nmax = k as usize * (g.deg() - 1);
        let hist = ring.divisor_histograms(k, nmax);
        Ok(DkSums { phi: units.len() as f64, ring, units, hist })
    }

    /// Coefficient of u^n in M(g, a).
    fn coeff(&self, n: usize, a_idx: usize) -> i128 {
        let h = &self.hist[n];
        let cop: i128 = self.units.iter().map(|&b| h[b]).sum();
        self.phi as i128 * h[a_idx] - cop
    }

    fn eval(&self, a_idx: usize, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (0..self.hist.len()).rev() {
            acc = acc * u + self.coeff(n, a_idx) as f64;
        }
        acc
    }
}

/// Everything in M(g, a) that does not depend on a: for each primitive chi
/// mod h | g, its weight L(s, chi)^k prod_{pi | g/h} (1 - chi(pi) u^deg pi)^k.
struct MomentTable {
    g: Poly,
    u: Complex64,
    weighted: Vec<(super::DirichletCharacter, Complex64)>,
    sums: DkSums,
}

impl MomentTable {
    fn new(g: &Poly, s: Complex64, k: u32) -> Result<MomentTable> {
        check_s(s)?;
        if k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        let u = u_of(g.field().q(), s);
        let mut weighted = Vec::new();
        for h in divisors(g)? {
            if h.is_one() {
                continue;
            }
            let gr = UnitGroup::new(&h)?;
            let rest: Vec<Poly> = factor(&g.exact_div(&h))?.factors.into_iter().map(|(p, _)| p).collect();
            for chi in gr.primitive_characters() {
                let l = l_poly(&chi)?.eval(u).powu(k);
                let euler: Complex64 = rest
                    .iter()
                    .map(|p| (Complex64::new(1.0, 0.0) - chi.value(p) * u.powu(p.deg() as u32)).powu(k))
                    .product();
                weighted.push((chi, l * euler));
            }
        }
        Ok(MomentTable { g: g.clone(), u, weighted, sums: DkSums::new(g, k)? })
    }

    fn paths(&self, a: &Poly) -> Result<MomentPaths> {
        if !a.gcd(&self.g).is_one() {
            return Err(Error::NotInvertible);
        }
        let direct = self.weighted.iter().map(|(chi, w)| chi.value(a).conj() * w).sum();
        let identity = self.sums.eval(self.sums.ring.index(a), self.u);
        Ok(MomentPaths { direct, identity })
    }
}

/// M(g, a) = sum_{h | g, h != 1} sum_{chi primitive mod h} conj(chi(a)) L(s, chi)^k
/// prod_{pi | g/h} (1 - chi(pi) q^{-s deg pi})^k, along both paths.
pub fn moment_m(g: &Poly, a: &Poly, s: Complex64, k: u32) -> Result<MomentPaths> {
    if !a.gcd(g).is_one() {
        return Err(Error::NotInvertible);
    }
    MomentTable::new(g, s, k)?.paths(a)
}

/// The cancellation of the f = a term and the explicit error bound.
#[derive(Clone, Debug, Serialize)]
pub struct Moments1Report {
    pub q: u32,
    pub m: usize,
    pub k: u32,
    pub a: String,
    pub value: [f64; 2],
    pub main_term: [f64; 2],
    pub error: f64,
    pub bound: f64,
    pub pass: bool,
    /// |direct - identity| between the two evaluation paths.
    pub path_deviation: f64,
}

/// |M(g,a) - phi(g) q^{-s deg a} d_k(a)| against
/// phi(g) (2^{1-k} + q^{1/2}/(k 2^{k-2})) q^{-m/2} k^m 2^{m(k-1)} + C(m+k-1, k) q^{(m-1)/2}.
/// The main term is present only when the reduced residue a is monic.
pub fn moments1_check(g: &Poly, a: &Poly, s: Complex64, k: u32) -> Result<Moments1Report> {
    let table = MomentTable::new(g, s, k)?;
    moments1_report(&table, a, k)
}

/// The moments bound for every unit a mod g, sharing the character data.
pub fn moments1_all(g: &Poly, s: Complex64, k: u32) -> Result<Vec<Moments1Report>> {
    let table = MomentTable::new(g, s, k)?;
    let units = crate::enumerate::units_mod(g);
    crate::par::map_slice(&units, |a| moments1_report(&table, a, k)).into_iter().collect()
}

fn moments1_report(table: &MomentTable, a: &Poly, k: u32) -> Result<Moments1Report> {
    let g = &table.g;
    let a = a.rem(g)?;
    let paths = table.paths(&a)?;
    let u = table.u;
    let q = g.field().q();
    let m = g.deg();
    let phi = crate::enumerate::phi(g) as f64;
    let main = if !a.is_zero() && a.is_monic() {
        u.powu(a.deg() as u32) * phi * divisor_k(&a, k)? as f64
    } else {
        Complex64::new(0.0, 0.0)
    };
    let error = (paths.identity - main).norm();
    let (qf, kf, mf) = (q as f64, k as f64, m as i32);
    let first = phi
        * (2f64.powi(1 - k as i32) + qf.sqrt() / (kf * 2f64.powi(k as i32 - 2)))
        * qf.powf(-(mf as f64) / 2.0)
        * kf.powi(mf)
        * 2f64.powi(mf * (k as i32 - 1));
    let binom = num_traits::ToPrimitive::to_f64(&crate::symrep::binomial(m as i64 + k as i64 - 1, k as i64)).unwrap_or(f64::INFINITY);
    let bound = (first + binom * qf.powf((mf as f64 - 1.0) / 2.0)) * (1.0 + 1e-12);
    Ok(Moments1Report {
        q,
        m,
        k,
        a: a.to_coeff_string(),
        value: [paths.identity.re, paths.identity.im],
        main_term: [main.re, main.im],
        error,
        bound,
        pass: error <= bound,
        path_deviation: (paths.direct - paths.identity).norm(),
    })
}

/// Sum of L(s, chi)^k over primitive chi mod g, directly and through the
/// Moebius sieve over g' | g with v running over divisors of (g/g')^k.
#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveMoment {
    pub direct: [f64; 2],
    pub sieve: [f64; 2],
    pub count: u64,
    pub deviation: Option<f64>,
}

pub fn moment_primitive_sum(g: &Poly, s: Complex64, k: u32) -> Result<PrimitiveMoment> {
    check_s(s)?;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let gr = UnitGroup::new(g)?;
    let u = u_of(g.field().q(), s);
    let mut count = 0u64;
    let mut direct = Complex64::new(0.0, 0.0);
    for chi in gr.primitive_characters() {
        count += 1;
        direct += l_poly(&chi)?.eval(u).powu(k);
    }
    let mut sieve = Complex64::new(0.0, 0.0);
    for gp in divisors(g)? {
        if gp.is_one() {
            continue;
        }
        let quot = g.exact_div(&gp);
        let primes: Vec<Poly> = factor(&quot)?.factors.into_iter().map(|(p, _)| p).collect();
        let mu = if primes.len().is_multiple_of(2) { 1.0 } else { -1.0 };
        let sums = DkSums::new(&gp, k)?;
        let mut j = vec![0u32; primes.len()];
        loop {
            let mut coef = 1.0;
            let mut deg = 0u32;
            let mut v = Poly::one(g.field());
            for (p, &e) in primes.iter().zip(&j) {
                coef *= if e % 2 == 0 { 1.0 } else { -1.0 };
                coef *= num_traits::ToPrimitive::to_f64(&crate::symrep::binomial(k as i64, e as i64)).unwrap_or(0.0);
                deg += e * p.deg() as u32;
                v = v.mul(&p.pow(e as u64));
            }
            let vbar = v.inv_mod(&gp)?;
            sieve += mu * coef * u.powu(deg) * sums.eval(sums.ring.index(&vbar), u);
            let mut i = 0;
            while i < j.len() && j[i] == k {
                j[i] = 0;
                i += 1;
            }
            if i == j.len() {
                break;
            }
            j[i] += 1;
        }
    }
    let deviation = (count > 0).then(|| (direct / count as f64 - 1.0).norm());
    Ok(PrimitiveMoment { direct: [direct.re, direct.im], sieve: [sieve.re, sieve.im], count, deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn two_paths_agree() {
        let half = Complex64::new(0.5, 0.0);
        for (q, gs) in [(3u64, "0,1"), (3, "1,0,1"), (3, "0,1,1"), (5, "0,1,1"), (3, "0,2,0,1")] {
            let f = make_field(q, 1).unwrap();
            let g = Poly::parse(&f, gs).unwrap();
            for k in 1..=3 {
                for a in crate::enumerate::units_mod(&g) {
                    let p = moment_m(&g, &a, half, k).unwrap();
                    assert!((p.direct - p.identity).norm() < 1e-8, "q={q} g={gs} k={k} a={a}: {p:?}");
                }
                let pm = moment_primitive_sum(&g, Complex64::new(0.5, 1.3), k).unwrap();
                let d = Complex64::new(pm.direct[0], pm.direct[1]);
                let s = Complex64::new(pm.sieve[0], pm.sieve[1]);
                assert!((d - s).norm() < 1e-7, "q={q} g={gs} k={k}: {pm:?}");
                assert_eq!(pm.count, UnitGroup::new(&g).unwrap().primitive_count());
            }
        }
    }

    #[test]
    fn support_ends_at_k_times_m_minus_one() {
        let f = make_field(3, 1).unwrap();
        let g = Poly::parse(&f, "1,0,1").unwrap();
        let k = 2;
        let ring = ResidueRing::new(&g).unwrap();
        let hist = ring.divisor_histograms(k, 4);
        let sums = DkSums { phi: 8.0, units: (1..9).collect(), hist, ring };
        for a in 1..9 {
            assert_eq!(sums.coeff(3, a), 0);
            assert_eq!(sums.coeff(4, a), 0);
        }
    }

    #[test]
    fn moments1_bound_holds() {
        for (q, gs) in [(3u64, "1,0,1"), (3, "0,1,1"), (5, "0,1,0,1")] {
            let f = make_field(q, 1).unwrap();
            let g = Poly::parse(&f, gs).unwrap();
            for k in 2..=3 {
                for a in crate::enumerate::units_mod(&g) {
                    let r = moments1_check(&g, &a, Complex64::new(0.5, 0.0), k).unwrap();
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }
}
