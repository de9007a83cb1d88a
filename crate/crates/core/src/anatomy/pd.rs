//! Poisson-Dirichlet(1) samples via uniform stick breaking, the entropy of
//! the resulting partition, and the integer chain that dominates it.

use crate::arithfun::Eft;
use crate::error::{Error, Result};
use crate::field::FieldRef;
use crate::poly::Poly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::E;

/// (4 + e) e^(4 + e), the normalizer of the stationary law.
fn z_const() -> f64 {
    (4.0 + E) * (4.0 + E).exp()
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

fn h2(x: f64) -> f64 {
    -xlogx(x) - xlogx(1.0 - x)
}

/// Independent stream for trajectory `i` under a common seed.
pub fn trajectory_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

/// A truncated stick-breaking sample.
#[derive(Clone, Debug, Serialize)]
pub struct PdSample {
    /// Pieces p(1), p(2), ... in breaking order.
    pub pieces: Vec<f64>,
    /// Mass not yet broken off.
    pub remainder: f64,
    /// Entropy with the remainder kept as a single piece, a lower bound for
    /// the full entropy.
    pub entropy_lo: f64,
    /// Upper bound on the full entropy.
    pub entropy_hi: f64,
}

impl PdSample {
    pub fn entropy(&self) -> f64 {
        0.5 * (self.entropy_lo + self.entropy_hi)
    }
}

/// Stick breaking with the given x_i: p(m) = (1 - x_m) prod_{i<m} x_i.
/// The remainder is bracketed by splitting it into at most ceil(1/eps) parts.
pub fn pd_from_sticks(xs: &[f64], eps: f64) -> PdSample {
    let mut w = 1.0;
    let mut h = 0.0;
    let mut pieces = Vec::with_capacity(xs.len());
    for &x in xs {
        pieces.push(w * (1.0 - x));
        h += w * h2(x);
        w *= x;
    }
    // grouping rule: sum of w h2(x) is the entropy with the remainder lumped
    let entropy_lo = h;
    let entropy_hi = entropy_lo + w * (1.0 / eps).ceil().ln();
    PdSample { pieces, remainder: w, entropy_lo, entropy_hi }
}

/// Breaks sticks until the remaining mass drops below `eps`.
pub fn pd_sample<R: Rng>(rng: &mut R, eps: f64) -> Result<PdSample> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mut xs = Vec::new();
    let mut w = 1.0;
    while w >= eps {
        let x: f64 = rng.random();
        xs.push(x);
        w *= x;
    }
    Ok(pd_from_sticks(&xs, eps))
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

const CHUNK: usize = 4096;

#[derive(Clone, Debug, Serialize)]
pub struct PdMoments {
    pub trials: u64,
    pub mean: f64,
    pub variance: f64,
    /// Largest entropy bracket width seen.
    pub max_bracket: f64,
}

/// Monte Carlo mean and variance of the PD(1) entropy.
pub fn pd_moments(trials: u64, seed: u64) -> Result<PdMoments> {
    if trials < 2 {
        return Err(Error::Precondition("need at least two trials".into()));
    }
    let parts = crate::par::map_chunks(trials as usize, CHUNK, |r| {
        let (mut s, mut s2, mut br) = (Kahan::default(), Kahan::default(), 0.0f64);
        for i in r {
            let p = pd_sample(&mut trajectory_rng(seed, i as u64), 1e-12).expect("valid eps");
            let h = p.entropy();
            s.add(h);
            s2.add(h * h);
            br = br.max(p.entropy_hi - p.entropy_lo);
        }
        (s.sum, s2.sum, br)
    });
    let (mut s, mut s2, mut br) = (Kahan::default(), Kahan::default(), 0.0f64);
    for (a, b, c) in parts {
        s.add(a);
        s2.add(b);
        br = br.max(c);
    }
    let n = trials as f64;
    let mean = s.sum / n;
    let variance = (s2.sum - n * mean * mean) / (n - 1.0);
    Ok(PdMoments { trials, mean, variance, max_bracket: br })
}

/// Midpoint entropies of `trials` independent samples, in trajectory order.
pub fn pd_entropies(trials: u64, seed: u64) -> Vec<f64> {
    crate::par::map_range(trials as usize, |i| {
        pd_sample(&mut trajectory_rng(seed, i as u64), 1e-12).expect("valid eps").entropy()
    })
}

/// L^(9/2) e^(2L) / (L^L sqrt(2 pi) (4 + e) e^(4 + e)), for L > 7.
pub fn dp_bound(l: f64) -> Result<f64> {
    if !(l > 7.0) || !l.is_finite() {
        return Err(Error::Precondition(format!("tail bound needs L > 7, got {l}")));
    }
    let log = 4.5 * l.ln() + 2.0 * l - l * l.ln() - (2.0 * std::f64::consts::PI).sqrt().ln() - z_const().ln();
    Ok(log.exp())
}

#[derive(Clone, Debug, Serialize)]
pub struct TailEstimate {
    pub l: f64,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    /// Wilson interval at 99% confidence.
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound: Option<f64>,
    /// The lower confidence limit does not exceed the bound.
    pub pass: Option<bool>,
}

fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Estimates P(e^H > L) for H the PD(1) entropy. A trajectory counts as a
/// hit only if its entropy lower bracket already exceeds log L.
pub fn pd_tail_mc(l: f64, trials: u64, seed: u64) -> Result<TailEstimate> {
    if !(l > 0.0) || trials == 0 {
        return Err(Error::Precondition("need L > 0 and at least one trial".into()));
    }
    let target = l.ln();
    let hits: u64 = crate::par::map_chunks(trials as usize, CHUNK, |r| {
        r.filter(|&i| {
            let p = pd_sample(&mut trajectory_rng(seed, i as u64), 1e-12).expect("valid eps");
            p.entropy_lo > target
        })
        .count() as u64
    })
    .into_iter()
    .sum();
    let (ci_low, ci_high) = wilson(hits, trials, 2.5758);
    let bound = dp_bound(l).ok();
    Ok(TailEstimate {
        l,
        trials,
        hits,
        estimate: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        bound,
        pass: bound.map(|b| ci_low <= b),
    })
}

/// One step of the dominating chain on {4, 5, ...}.
pub fn chain_step(n: u64, y: f64) -> Result<u64> {
    if n < 4 {
        return Err(Error::Precondition(format!("chain state {n} below 4")));
    }
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Precondition(format!("y = {y} outside [0, 1]")));
    }
    let nf = n as f64;
    Ok(if y > 1.0 - E / nf {
        n + 1
    } else if y > 1.0 - 4.0 / nf {
        n
    } else {
        (n - 1).max(4)
    })
}

/// Entropy after prepending a piece of mass 1 - y to a partition of
/// entropy H rescaled by y.
pub fn entropy_update(h: f64, y: f64) -> f64 {
    -xlogx(1.0 - y) - xlogx(y) + y * h
}

/// Stationary law pi(N) = N e^N / ((N - 4)! (4 + e) e^(4 + e)).
pub fn pi_stationary(n: u64) -> Result<f64> {
    if n < 4 {
        return Err(Error::Precondition(format!("chain state {n} below 4")));
    }
    let log_fact: f64 = (2..=n - 4).map(|k| (k as f64).ln()).sum();
    Ok(((n as f64).ln() + n as f64 - log_fact - z_const().ln()).exp())
}

/// C^5 e^C / (C! (4 + e) e^(4 + e)), bounding the stationary tail from C on.
pub fn tail_sum_bound(c: u64) -> Result<f64> {
    if c < 8 {
        return Err(Error::Precondition(format!("tail bound needs C >= 8, got {c}")));
    }
    let cf = c as f64;
    let log_fact: f64 = (2..=c).map(|k| (k as f64).ln()).sum();
    Ok((5.0 * cf.ln() + cf - log_fact - z_const().ln()).exp())
}

/// The three entropy-increase inequalities at (H, y). `None` means the
/// hypothesis of that inequality does not hold.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EntropyChecks {
    pub h_new: f64,
    pub at_most_plus_one: bool,
    pub no_increase: Option<bool>,
    pub decrease: Option<bool>,
}

impl EntropyChecks {
    pub fn all_hold(&self) -> bool {
        self.at_most_plus_one && self.no_increase.unwrap_or(true) && self.decrease.unwrap_or(true)
    }
}

pub fn entropy_increase_properties(h: f64, y: f64) -> EntropyChecks {
    let tol = 1e-12;
    let hn = entropy_update(h, y);
    let (a, b) = (hn.exp(), h.exp());
    let le = |x: f64, y: f64| x <= y * (1.0 + tol) + tol;
    EntropyChecks {
        h_new: hn,
        at_most_plus_one: le(a, b + 1.0),
        no_increase: (y <= 1.0 - (1.0 - h).exp()).then(|| le(a, b)),
        decrease: (y <= 1.0 - 4.0 * (-h).exp()).then(|| le(a, b - 1.0)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    pub trajectories: u64,
    pub steps: u64,
    pub violations: u64,
    pub max_ratio: f64,
}

/// Runs the entropy recursion and the integer chain on shared uniforms,
/// starting from a PD sample and N_0 = max(4, ceil(e^H_0)), and checks
/// e^H_n <= N_n at every step.
pub fn coupling_check(trajectories: u64, steps: u64, seed: u64) -> Result<CouplingReport> {
    let parts = crate::par::map_chunks(trajectories as usize, 1024, |r| {
        let mut viol = 0u64;
        let mut worst = 0.0f64;
        for i in r {
            let mut rng = trajectory_rng(seed, i as u64);
            let mut h = pd_sample(&mut rng, 1e-12).expect("valid eps").entropy_lo;
            let mut n = (h.exp().ceil() as u64).max(4);
            for _ in 0..steps {
                let y: f64 = rng.random();
                h = entropy_update(h, y);
                n = chain_step(n, y).expect("valid state");
                let ratio = h.exp() / n as f64;
                worst = worst.max(ratio);
                if ratio > 1.0 + 1e-9 {
                    viol += 1;
                }
            }
        }
        (viol, worst)
    });
    let (violations, max_ratio) = parts.into_iter().fold((0, 0.0f64), |(v, m), (a, b)| (v + a, m.max(b)));
    Ok(CouplingReport { trajectories, steps, violations, max_ratio })
}

/// Empirical total-variation distance between the chain started at 4
/// after `steps` steps and the stationary law.
pub fn chain_tv_to_stationary(steps: u64, trajectories: u64, seed: u64) -> Result<f64> {
    let finals: Vec<u64> = crate::par::map_range(trajectories as usize, |i| {
        let mut rng = trajectory_rng(seed, i as u64);
        let mut n = 4u64;
        for _ in 0..steps {
            n = chain_step(n, rng.random()).expect("valid state");
        }
        n
    });
    let top = finals.iter().copied().max().unwrap_or(4).max(60);
    let mut hist = vec![0u64; (top + 1) as usize];
    for n in finals {
        hist[n as usize] += 1;
    }
    let t = trajectories as f64;
    let mut tv = 0.0;
    for n in 4..=top {
        tv += (hist[n as usize] as f64 / t - pi_stationary(n)?).abs();
    }
    let tail: f64 = 1.0 - (4..=top).map(|n| pi_stationary(n).unwrap()).sum::<f64>();
    Ok(0.5 * (tv + tail.max(0.0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct KsReport {
    pub q: u32,
    /// (n, two-sample KS statistic) pairs.
    pub rows: Vec<(usize, f64)>,
    pub decreasing: bool,
}

fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

/// KS distance between the entropy of the factorization type of random
/// monic f of degree n and PD(1) entropy samples, for each n.
pub fn ks_entropy_convergence(field: &FieldRef, ns: &[usize], samples: u64, seed: u64) -> Result<KsReport> {
    let mut pd: Vec<f64> = crate::par::map_range(samples as usize, |i| {
        pd_sample(&mut trajectory_rng(seed ^ 0x5eed, i as u64), 1e-12).expect("valid eps").entropy()
    });
    let mut rows = Vec::new();
    for &n in ns {
        let q = field.q();
        let mut hs: Vec<f64> = crate::par::map_range(samples as usize, |i| {
            let mut rng = trajectory_rng(seed.wrapping_add(n as u64), i as u64);
            let mut coeffs: Vec<u32> = (0..n).map(|_| rng.random_range(0..q)).collect();
            coeffs.push(1);
            let f = Poly::new(field, coeffs);
            Eft::of(&f).expect("monic").entropy()
        });
        rows.push((n, ks_statistic(&mut hs, &mut pd)));
    }
    let decreasing = rows.first().zip(rows.last()).is_some_and(|(a, b)| b.1 < a.1);
    Ok(KsReport { q: field.q(), rows, decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_law() {
        assert!((pi_stationary(4).unwrap() - 0.03929).abs() < 5e-6);
        let total: f64 = (4..400).map(|n| pi_stationary(n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for n in 4..200 {
            let l = E / n as f64 * pi_stationary(n).unwrap();
            let r = (1.0 - 4.0 / (n + 1) as f64) * pi_stationary(n + 1).unwrap();
            assert!((l - r).abs() <= 1e-12 * l.max(1e-300));
        }
        assert!((dp_bound(8.0).unwrap() - 0.4404).abs() < 5e-4);
        assert!(dp_bound(7.0).is_err() && tail_sum_bound(7).is_err());
    }

    #[test]
    fn entropy_update_examples() {
        assert_eq!(entropy_update(1.7, 1.0), 1.7);
        assert!((entropy_update(0.0, 0.5).exp() - 2.0).abs() < 1e-12);
        let c = entropy_increase_properties(0.0, 0.5);
        assert!(c.at_most_plus_one);
    }

    #[test]
    fn degenerate_sticks() {
        let s = pd_from_sticks(&[1e-300], 1e-12);
        assert!((s.pieces[0] - 1.0).abs() < 1e-12 && s.entropy_hi < 1e-9);
    }

    #[test]
    fn chain_moves() {
        assert_eq!(chain_step(10, 0.9).unwrap(), 11);
        assert_eq!(chain_step(10, 0.65).unwrap(), 10);
        assert_eq!(chain_step(10, 0.5).unwrap(), 9);
        assert!(chain_step(3, 0.5).is_err());
        assert!(chain_step(5, 1.5).is_err());
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson(30, 1000, 2.5758);
        assert!(lo < 0.03 && 0.03 < hi);
    }
}
