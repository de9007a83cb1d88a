use super::{DirichletCharacter, UnitGroup};
use crate::error::{Error, Result};
use crate::poly::Poly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Coefficients below this modulus are treated as zero when trimming. Every
/// nonzero leading coefficient is a product of inverse roots, each of
/// modulus 1 or q^(1/2).
const ZERO_COEFF: f64 = 1e-6;

/// L(u, chi) = sum_{n < m} c_n u^n for nontrivial chi, together with the
/// coefficient of u^m, which vanishes by orthogonality.
#[derive(Clone, Debug)]
pub struct LPolynomial {
    pub coeffs: Vec<Complex64>,
    pub extra: Complex64,
    pub q: u32,
    pub exponents: Vec<u64>,
}

impl LPolynomial {
    /// Degree after trimming numerically zero top coefficients.
    pub fn degree(&self) -> usize {
        (0..self.coeffs.len()).rev().find(|&i| self.coeffs[i].norm() > ZERO_COEFF).unwrap_or(0)
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// Inverse roots alpha_j with L = prod (1 - alpha_j u): the roots of the
    /// reversed (monic, since c_0 = 1) polynomial.
    pub fn inverse_roots(&self) -> Vec<Complex64> {
        let d = self.degree();
        let rev: Vec<Complex64> = (0..=d).map(|i| self.coeffs[d - i]).collect();
        polynomial_roots(&rev)
    }

    /// Roots in u.
    pub fn roots(&self) -> Vec<Complex64> {
        self.inverse_roots().into_iter().map(|a| a.inv()).collect()
    }

    /// Coefficients as [re, im] pairs.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coeffs.iter().map(|c| [c.re, c.im]).collect()
    }
}

fn horner(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &c in p.iter().rev() {
        dv = dv * x + v;
        v = v * x + c;
    }
    (v, dv)
}

/// Roots of sum p_i x^i with p_d = 1: companion-matrix eigenvalues, then a
/// few Newton steps against the original coefficients.
fn polynomial_roots(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = p[d];
    let mut comp = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -p[i] / lead;
    }
    let mut roots: Vec<Complex64> = match comp.clone().eigenvalues() {
        Some(ev) => ev.iter().copied().collect(),
        None => aberth(p),
    };
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let (v, dv) = horner(p, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() < 1e-16 * r.norm().max(1.0) {
                break;
            }
        }
    }
    snap_clusters(p, &mut roots);
    roots.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    roots
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

/// A root of multiplicity k comes back from floating point as k roots spread
/// over about eps^(1/k). Their centroid is accurate to eps and is a simple
/// root of the (k-1)-th derivative, so polish it there.
fn snap_clusters(p: &[Complex64], roots: &mut [Complex64]) {
    let d = roots.len();
    let mut label: Vec<usize> = (0..d).collect();
    for i in 0..d {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-4 * roots[i].norm().max(1.0) {
                let (a, b) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == a {
                        *l = b;
                    }
                }
            }
        }
    }
    for c in 0..d {
        let members: Vec<usize> = (0..d).filter(|&i| label[i] == c).collect();
        let k = members.len();
        if k < 2 {
            continue;
        }
        let mut z = members.iter().map(|&i| roots[i]).sum::<Complex64>() / k as f64;
        let mut dp = p.to_vec();
        for _ in 1..k {
            dp = derivative(&dp);
        }
        for _ in 0..6 {
            let (v, dv) = horner(&dp, z);
            let step = v / dv;
            if !step.is_finite() {
                break;
            }
            z -= step;
        }
        // a genuine multiple root annihilates p and its first k-1 derivatives
        let mut genuine = z.is_finite();
        let mut dj = p.to_vec();
        for _ in 0..k {
            let scale: f64 = dj.iter().enumerate().map(|(i, c)| c.norm() * z.norm().powi(i as i32)).sum();
            genuine &= horner(&dj, z).0.norm() <= 1e-7 * scale.max(1.0);
            dj = derivative(&dj);
        }
        if genuine {
            for &i in &members {
                roots[i] = z;
            }
        }
    }
}

/// Aberth iteration; used if the Schur form does not converge.
fn aberth(p: &[Complex64]) -> Vec<Complex64> {
    let d = p.len() - 1;
    let radius = 1.0 + p[..d].iter().map(|c| (c / p[d]).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d).map(|j| Complex64::from_polar(radius * 0.5, TAU * (j as f64 + 0.25) / d as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = horner(p, z[i]);
            let ratio = v / dv;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// The L-polynomial of a nontrivial character, from character sums over the
/// monic polynomials of each degree n <= m coprime to g.
pub fn l_poly(chi: &DirichletCharacter) -> Result<LPolynomial> {
    if chi.is_trivial() {
        return Err(Error::Precondition("L_poly is undefined for the trivial character".into()));
    }
    let gr = chi.group();
    let m = gr.m();
    let sums: Vec<Complex64> = (0..=m)
        .map(|n| {
            let h = gr.coprime_histogram(n);
            h.iter().enumerate().filter(|(_, &c)| c != 0).map(|(b, &c)| chi.value_index(b) * c as f64).sum()
        })
        .collect();
    Ok(LPolynomial {
        coeffs: sums[..m].to_vec(),
        extra: sums[m],
        q: gr.field().q(),
        exponents: chi.exponents().to_vec(),
    })
}

pub fn l_roots(chi: &DirichletCharacter) -> Result<Vec<Complex64>> {
    Ok(l_poly(chi)?.roots())
}

/// gamma_j with alpha_j = |alpha_j| e^{i gamma_j log q}, in [0, 2 pi / log q).
pub fn gammas(chi: &DirichletCharacter) -> Result<Vec<f64>> {
    let lq = (chi.group().field().q() as f64).ln();
    let mut out: Vec<f64> = l_poly(chi)?
        .inverse_roots()
        .into_iter()
        .map(|a| {
            let t = a.arg().rem_euclid(TAU);
            (if t >= TAU { 0.0 } else { t }) / lq
        })
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Both sides of the explicit formula for the n-th power sum of the zeros:
/// the zero side q^{-|n|/2} sum_j alpha_j^n (conjugated for n < 0) and the
/// prime side -q^{-|n|/2} sum_{f in M_|n|, (f,g)=1} Lambda(f) chi^{sgn n}(f).
pub fn vonmangoldt_power_sum(chi: &DirichletCharacter, n: i64) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Err(Error::Precondition("n must be nonzero".into()));
    }
    let lp = l_poly(chi)?;
    let q = chi.group().field().q() as f64;
    let k = n.unsigned_abs() as usize;
    let scale = q.powf(-(k as f64) / 2.0);
    let mut zero: Complex64 = lp.inverse_roots().iter().map(|a| a.powu(k as u32)).sum::<Complex64>() * scale;
    let lam = chi.group().lambda_histograms(k);
    let mut sum: Complex64 = lam[k]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(b, &c)| chi.value_index(b) * c as f64)
        .sum::<Complex64>()
        * (-scale);
    if n < 0 {
        zero = zero.conj();
        sum = sum.conj();
    }
    Ok((zero, sum))
}

/// ((q-2)/(q-1)) (prod_{pi | g} (q^deg pi - 2) - (-1)^omega(g)), exact.
pub fn odd_primitive_count_formula(g: &Poly) -> Result<i128> {
    let gr = UnitGroup::new(g)?;
    let q = gr.field().q() as i128;
    let prod: i128 = gr.orders().iter().map(|&o| o as i128 - 1).product();
    let sign = if gr.primes().len() % 2 == 0 { 1 } else { -1 };
    let num = (q - 2) * (prod - sign);
    debug_assert_eq!(num % (q - 1), 0);
    Ok(num / (q - 1))
}

/// The variant with prod q^{deg pi - 2} in place of prod (q^deg pi - 2),
/// evaluated as a real number for comparison.
pub fn odd_primitive_count_printed(g: &Poly) -> Result<f64> {
    let gr = UnitGroup::new(g)?;
    let q = gr.field().q() as f64;
    let prod: f64 = gr.primes().iter().map(|p| q.powi(p.deg() as i32 - 2)).product();
    let sign = if gr.primes().len() % 2 == 0 { 1.0 } else { -1.0 };
    Ok((q - 2.0) / (q - 1.0) * prod - (q - 2.0) / (q - 1.0) * sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn group(q: u64, g: &str) -> std::sync::Arc<UnitGroup> {
        let f = make_field(q, 1).unwrap();
        UnitGroup::new(&Poly::parse(&f, g).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let gr = group(3, "0,1");
        let chi = gr.characters().find(|c| !c.is_trivial()).unwrap();
        let lp = l_poly(&chi).unwrap();
        assert_eq!(lp.degree(), 0);
        assert!((lp.coeffs[0] - 1.0).norm() < 1e-12);
        assert!(lp.extra.norm() < 1e-12);

        let gr = group(2, "1,1,1");
        for chi in gr.characters().filter(|c| !c.is_trivial()) {
            let lp = l_poly(&chi).unwrap();
            assert!((lp.coeffs[1] + 1.0).norm() < 1e-12);
            let r = lp.roots();
            assert_eq!(r.len(), 1);
            assert!((r[0] - 1.0).norm() < 1e-12);
            assert!(chi.is_even());
        }

        let gr = group(3, "1,0,1");
        let mut odd = 0;
        for chi in gr.primitive_characters().filter(|c| c.is_odd()) {
            odd += 1;
            let lp = l_poly(&chi).unwrap();
            assert!((lp.coeffs[1].norm() - 3f64.sqrt()).abs() < 1e-12);
            for r in lp.roots() {
                assert!((r.norm() - 3f64.powf(-0.5)).abs() < 1e-12);
            }
            let (z, s) = vonmangoldt_power_sum(&chi, 1).unwrap();
            let f = gr.field();
            let c1: Complex64 = (0..3).map(|c| chi.value(&Poly::linear(f, c))).sum();
            assert!((z + c1 * 3f64.powf(-0.5)).norm() < 1e-12);
            assert!((z - s).norm() < 1e-10);
        }
        assert_eq!(odd, 4);
    }

    #[test]
    fn transfer_identity_and_conjugation() {
        for (q, g) in [(3, "1,0,1"), (3, "0,1,1"), (5, "1,1,0,1"), (2, "1,1,0,1")] {
            let gr = group(q, g);
            let m = gr.m() as f64;
            for chi in gr.characters().filter(|c| !c.is_trivial()) {
                for n in 1..=6i64 {
                    let (z, s) = vonmangoldt_power_sum(&chi, n).unwrap();
                    let (zn, sn) = vonmangoldt_power_sum(&chi, -n).unwrap();
                    assert!((z - s).norm() < 1e-8 * m, "q={q} g={g} {chi:?} n={n}: {z} vs {s}");
                    assert!((zn - z.conj()).norm() < 1e-12 && (sn - s.conj()).norm() < 1e-12);
                    if chi.is_primitive() {
                        assert!(z.norm() <= m - 1.0 + 1e-9 || chi.is_even());
                    }
                }
            }
        }
    }

    #[test]
    fn odd_primitive_counts() {
        for (q, g) in [(3u64, "1,0,1"), (3, "0,1,1"), (5, "0,1,0,1"), (5, "2,0,1"), (4, "0,1")] {
            let f = if q == 4 { make_field(2, 2).unwrap() } else { make_field(q, 1).unwrap() };
            let g = Poly::parse(&f, g).unwrap();
            let gr = UnitGroup::new(&g).unwrap();
            let counted = gr.primitive_characters().filter(|c| c.is_odd()).count() as i128;
            assert_eq!(counted, odd_primitive_count_formula(&g).unwrap(), "{g}");
        }
    }
}
