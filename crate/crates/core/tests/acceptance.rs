//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

use ffprog::anatomy::{
    coupling_check, eft_measure, eft_measure_indicator, pd_moments, pd_tail_mc, pi_stationary, tail_sum_bound,
};
use ffprog::arithfun::{
    divisor_k, eft_indicator, eft_indicator_direct, f_prime2, f_rho_eft, mobius, partition_sieve_check, von_mangoldt,
    Eft, PrimeData,
};
use ffprog::bounds::{one_level_density, squarefree_moduli, verify_main_grid, GridConfig};
use ffprog::dirichlet::{l_roots, moment_primitive_sum, moments1_all, odd_primitive_count_formula, vonmangoldt_power_sum, UnitGroup};
use ffprog::enumerate::{units_mod, MonicSet};
use ffprog::field::{make_field, FieldRef};
use ffprog::poly::Poly;
use ffprog::symrep::{
    binomial, binomial_bound, c1, c2, c2_via_e_formula, c2_via_w_formula, character_table, closed_form_constants,
    induce_product, named_rep, partitions, trace_v, trace_vd, von_mangoldt_series_constants, Family, RepKind,
    VirtualCharacter,
};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u64) -> FieldRef {
    let (p, k) = match q {
        4 => (2, 2),
        _ => (q, 1),
    };
    make_field(p, k).unwrap()
}

fn main_bound_suite() -> Outcome {
    let cfg = GridConfig { qs: vec![2, 3, 5], nmax: 7, nmax_for: vec![(2, 8)], mmax: 3 };
    let s = verify_main_grid(&cfg).map_err(|e| e.to_string())?;
    ensure(s.failures.is_empty(), || format!("{} failures, first {:?}", s.failures.len(), s.failures.first()))?;
    ensure(s.nonconstant_large_part == 0, || format!("{} nonconstant large-part sums", s.nonconstant_large_part))?;
    Ok(format!(
        "{} progression sums over {} (q, n, g) cases, zero failures, max error/bound {:.3}",
        s.checked, s.moduli, s.max_ratio
    ))
}

/// Reps of S_j used on each side of the induction identity.
fn small_reps(j: u32) -> Vec<VirtualCharacter> {
    if j <= 4 {
        character_table(j).unwrap().to_vec()
    } else {
        [RepKind::Trivial, RepKind::Sign, RepKind::Standard, RepKind::Wedge(2)]
            .iter()
            .map(|k| named_rep(k, j).unwrap())
            .collect()
    }
}

struct InductionCase {
    n1: u32,
    left: VirtualCharacter,
    right: VirtualCharacter,
    induced: VirtualCharacter,
}

fn eft_of_exps(pd: &PrimeData, exps: &[u32]) -> Eft {
    Eft::new(pd.degrees.iter().zip(exps).filter(|(_, &e)| e > 0).map(|(&d, &e)| (d, e)).collect()).unwrap()
}

/// (eft of d, eft of f/d, deg d) for every monic divisor d of f.
fn divisor_types(pd: &PrimeData) -> Vec<(Eft, Eft, u32)> {
    let mut out = Vec::new();
    let mut e = vec![0u32; pd.exps.len()];
    loop {
        let rest: Vec<u32> = pd.exps.iter().zip(&e).map(|(a, b)| a - b).collect();
        let deg = pd.degrees.iter().zip(&e).map(|(d, x)| d * x).sum();
        out.push((eft_of_exps(pd, &e), eft_of_exps(pd, &rest), deg));
        let mut i = 0;
        while i < e.len() && e[i] == pd.exps[i] {
            e[i] = 0;
            i += 1;
        }
        if i == e.len() {
            return out;
        }
        e[i] += 1;
    }
}

fn identity_suite() -> Outcome {
    let mut checked = 0u64;
    for q in [2u64, 3] {
        let fq = field(q);
        for n in 1..=8u32 {
            let sgn = VirtualCharacter::sign(n);
            let tensors: Vec<_> = (1..=3).map(|k| named_rep(&RepKind::TensorPower(k), n).unwrap()).collect();
            let wedges: Vec<_> = (0..n).map(|i| named_rep(&RepKind::Wedge(i), n).unwrap()).collect();
            let mut cases = Vec::new();
            for n1 in 1..n {
                for left in small_reps(n1) {
                    for right in small_reps(n - n1) {
                        let induced = induce_product(&left, &right);
                        cases.push(InductionCase { n1, left: left.clone(), right, induced });
                    }
                }
            }
            let set = MonicSet::all(&fq, n as usize);
            let results = ffprog::par::map_chunks(set.len() as usize, 64, |r| -> Result<u64, String> {
                let mut c = 0u64;
                for i in r {
                    let f = set.get(i as u64);
                    let w = Eft::of(&f).unwrap();
                    let fr = |chi: &VirtualCharacter, w: &Eft| f_rho_eft(chi, w).unwrap() as i128;
                    let sign = if n % 2 == 0 { 1 } else { -1 };
                    ensure(fr(&sgn, &w) == sign * mobius(&f).unwrap() as i128, || format!("sign rep at {f:?}"))?;
                    for (k, t) in tensors.iter().enumerate() {
                        ensure(fr(t, &w) == divisor_k(&f, k as u32 + 1).unwrap() as i128, || {
                            format!("d_{} at {f:?}", k + 1)
                        })?;
                    }
                    let alt: i128 = wedges.iter().enumerate().map(|(i, x)| if i % 2 == 0 { fr(x, &w) } else { -fr(x, &w) }).sum();
                    ensure(alt == von_mangoldt(&f).unwrap() as i128, || format!("alternating wedge at {f:?}"))?;
                    let pd = PrimeData::of(&f).unwrap();
                    let divs = divisor_types(&pd);
                    for case in &cases {
                        let conv: i128 = divs
                            .iter()
                            .filter(|(_, _, d)| *d == case.n1)
                            .map(|(a, b, _)| fr(&case.left, a) * fr(&case.right, b))
                            .sum();
                        ensure(conv == fr(&case.induced, &w), || format!("induction identity n1={} at {f:?}", case.n1))?;
                    }
                    c += 4 + cases.len() as u64 + 1;
                }
                Ok(c)
            });
            for r in results {
                checked += r?;
            }
        }
    }
    Ok(format!("{checked} exact identity evaluations over all monic f of degree <= 8, q in {{2, 3}}"))
}

fn constants_suite() -> Outcome {
    let mut checked = 0;
    for n in 1..=8u32 {
        for m in 2..=n.min(4) {
            for fam in [Family::Mobius, Family::Divisor(1), Family::Divisor(2), Family::Divisor(3), Family::VonMangoldt] {
                let rho = fam.rep(n).unwrap();
                let got = (c1(&rho, m).unwrap(), c2(&rho, m).unwrap());
                let want = closed_form_constants(fam, n, m).unwrap();
                ensure(got == want, || format!("{fam:?} n={n} m={m}: {got:?} vs {want:?}"))?;
                checked += 1;
            }
            let vm = Family::VonMangoldt.rep(n).unwrap();
            ensure(von_mangoldt_series_constants(n, m) == (c1(&vm, m).unwrap(), c2(&vm, m).unwrap()), || {
                format!("von Mangoldt series n={n} m={m}")
            })?;
        }
        for (mu, chi) in partitions(n).iter().zip(character_table(n).unwrap().iter()) {
            for m in 1..=4u32 {
                let c = c2(chi, m).unwrap();
                ensure(c == c2_via_e_formula(chi, m).unwrap(), || format!("e-formula {mu} m={m}"))?;
                ensure(c == c2_via_w_formula(chi, m).unwrap(), || format!("w-formula {mu} m={m}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} exact constant comparisons, n <= 8, m <= 4"))
}

fn vanishing_suite() -> Outcome {
    let (mut zero_traces, mut zero_dims) = (0, 0);
    for n in 1..=8u32 {
        for (mu, chi) in partitions(n).iter().zip(character_table(n).unwrap().iter()) {
            for m in 1..=4u32 {
                if mu.parts()[0] >= m {
                    ensure(trace_v(chi, m).unwrap().is_zero(), || format!("trace_V nonzero for {mu}, m={m}"))?;
                    zero_traces += 1;
                } else {
                    for d in m..=n {
                        ensure(trace_vd(chi, d, m).unwrap().eval_ones().is_zero(), || {
                            format!("dim V^{d} nonzero for {mu}, m={m}")
                        })?;
                        zero_dims += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{zero_traces} vanishing traces and {zero_dims} vanishing dimensions"))
}

fn rh_suite() -> Outcome {
    let (mut chars, mut roots, mut worst) = (0u64, 0u64, 0.0f64);
    for q in [3u64, 5] {
        let fq = field(q);
        let target = (q as f64).powf(-0.5);
        for m in 1..=4 {
            for g in squarefree_moduli(&fq, m) {
                let gr = UnitGroup::new(&g).map_err(|e| e.to_string())?;
                let odd: Vec<_> = gr.primitive_characters().filter(|c| c.is_odd()).collect();
                let expected = odd_primitive_count_formula(&g).unwrap();
                ensure(odd.len() as i128 == expected, || format!("odd primitive count mod {g:?}"))?;
                let devs = ffprog::par::map_slice(&odd, |chi| -> Result<(usize, f64), String> {
                    let r = l_roots(chi).map_err(|e| e.to_string())?;
                    ensure(r.len() == m - 1, || format!("L-degree {} mod {g:?}", r.len()))?;
                    Ok((r.len(), r.iter().map(|u| (u.norm() - target).abs()).fold(0.0, f64::max)))
                });
                for d in devs {
                    let (k, dev) = d?;
                    chars += 1;
                    roots += k as u64;
                    worst = worst.max(dev);
                }
            }
        }
    }
    ensure(worst <= 1e-9, || format!("root modulus deviation {worst:e}"))?;
    Ok(format!("{chars} odd primitive characters, {roots} roots, max | |u| - q^(-1/2) | = {worst:.1e}"))
}

fn density_suite() -> Outcome {
    let (mut transfers, mut reports, mut worst) = (0u64, 0u64, 0.0f64);
    for q in [3u64, 5] {
        let fq = field(q);
        for m in 1..=3 {
            for g in squarefree_moduli(&fq, m) {
                let gr = UnitGroup::new(&g).map_err(|e| e.to_string())?;
                for chi in gr.primitive_characters().filter(|c| c.is_odd()) {
                    for n in (-6i64..=6).filter(|&n| n != 0) {
                        let (z, s) = vonmangoldt_power_sum(&chi, n).map_err(|e| e.to_string())?;
                        let dev = (z - s).norm() / (m as f64).max(1.0);
                        worst = worst.max(dev);
                        ensure(dev <= 1e-6, || format!("transfer mod {g:?} n={n}: {z} vs {s}"))?;
                        transfers += 1;
                    }
                }
                for lambda in [1.5, 2.0, 3.0] {
                    let r = one_level_density(&g, lambda).map_err(|e| e.to_string())?;
                    ensure(r.pass, || format!("decomposition mod {g:?} lambda={lambda}: {} vs {}", r.zero_side, r.decomposition_side))?;
                    ensure(r.ol_identity.iter().all(|row| row.exact), || format!("ol identity mod {g:?}"))?;
                    reports += 1;
                }
            }
        }
    }
    Ok(format!("{transfers} transfer identities (max scaled deviation {worst:.1e}), {reports} decompositions"))
}

fn moments_suite() -> Outcome {
    let s = Complex64::new(0.5, 0.0);
    let (mut checked, mut sieves, mut worst) = (0u64, 0u64, 0.0f64);
    for q in [3u64, 5] {
        let fq = field(q);
        for m in 1..=3 {
            for g in squarefree_moduli(&fq, m) {
                for k in [2u32, 3] {
                    for r in moments1_all(&g, s, k).map_err(|e| e.to_string())? {
                        ensure(r.pass, || format!("moments bound mod {g:?} a={} k={k}: {} > {}", r.a, r.error, r.bound))?;
                        let scale = r.value[0].hypot(r.value[1]).max(1.0);
                        ensure(r.path_deviation <= 1e-8 * scale, || format!("moment paths differ mod {g:?} a={}", r.a))?;
                        checked += 1;
                    }
                    let p = moment_primitive_sum(&g, s, k).map_err(|e| e.to_string())?;
                    let d = Complex64::new(p.direct[0], p.direct[1]);
                    let v = Complex64::new(p.sieve[0], p.sieve[1]);
                    let dev = (d - v).norm() / d.norm().max(1.0);
                    worst = worst.max(dev);
                    ensure(dev <= 1e-7, || format!("sieve mod {g:?} k={k}: {d} vs {v}"))?;
                    sieves += 1;
                }
            }
        }
    }
    Ok(format!("{checked} moment bounds hold; {sieves} sieve comparisons, max deviation {worst:.1e}"))
}

fn compositions(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_len {
            return;
        }
        for x in 1..=rem {
            cur.push(x);
            rec(rem - x, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_len, &mut Vec::new(), &mut out);
    out
}

fn sieve_suite() -> Outcome {
    let (mut sieve_checks, mut indicator_checks) = (0u64, 0u64);
    for q in [2u64, 3] {
        let fq = field(q);
        let hs = [Poly::one(&fq), Poly::parse(&fq, "0,1").unwrap()];
        for n in 1..=6u32 {
            let tuples = compositions(n, 3);
            let types = Eft::all(n);
            let set = MonicSet::all(&fq, n as usize);
            let results = ffprog::par::map_chunks(set.len() as usize, 16, |r| -> Result<(u64, u64), String> {
                let (mut a, mut b) = (0u64, 0u64);
                for i in r {
                    let f = set.get(i as u64);
                    for h in &hs {
                        for ns in &tuples {
                            let lhs = f_prime2(h, ns, &f).unwrap() as i128;
                            let rhs = partition_sieve_check(h, ns, &f).unwrap();
                            ensure(lhs == rhs, || format!("partition sieve {ns:?} h={h:?} f={f:?}: {lhs} vs {rhs}"))?;
                            a += 1;
                        }
                    }
                    for w in &types {
                        let x = eft_indicator(w, &f).map_err(|e| e.to_string())?;
                        ensure(x == eft_indicator_direct(w, &f).unwrap(), || format!("indicator {w} at {f:?}"))?;
                        b += 1;
                    }
                }
                Ok((a, b))
            });
            for r in results {
                let (a, b) = r?;
                sieve_checks += a;
                indicator_checks += b;
            }
        }
    }
    Ok(format!("{sieve_checks} partition-sieve and {indicator_checks} indicator identities exact"))
}

fn pd_suite() -> Outcome {
    let mom = pd_moments(1_000_000, 42).map_err(|e| e.to_string())?;
    ensure((mom.mean - 1.0).abs() <= 0.005, || format!("mean {}", mom.mean))?;
    ensure((mom.variance - 0.1775).abs() <= 0.005, || format!("variance {}", mom.variance))?;
    for n in 4..=200u64 {
        let l = std::f64::consts::E / n as f64 * pi_stationary(n).unwrap();
        let r = (1.0 - 4.0 / (n + 1) as f64) * pi_stationary(n + 1).unwrap();
        ensure((l - r).abs() <= 1e-12 * l, || format!("detailed balance at N={n}"))?;
    }
    for c in 8..=20u64 {
        let tail: f64 = (c..c + 500).map(|n| pi_stationary(n).unwrap()).sum();
        let b = tail_sum_bound(c).unwrap();
        ensure(tail <= b, || format!("stationary tail at C={c}: {tail} > {b}"))?;
    }
    let mut tails = Vec::new();
    for l in [8.0, 10.0, 12.0] {
        let t = pd_tail_mc(l, 1_000_000, 7).map_err(|e| e.to_string())?;
        ensure(t.pass == Some(true), || format!("tail at L={l}: {t:?}"))?;
        tails.push(format!("L={l}: {:.2e} <= {:.3}", t.estimate, t.bound.unwrap()));
    }
    let c = coupling_check(100_000, 200, 11).map_err(|e| e.to_string())?;
    ensure(c.violations == 0, || format!("{} coupling violations", c.violations))?;
    Ok(format!(
        "mean {:.4}, variance {:.4}, tails [{}], coupling max e^H/N {:.4} over {} steps",
        mom.mean,
        mom.variance,
        tails.join(", "),
        c.max_ratio,
        c.trajectories * c.steps
    ))
}

fn tv_suite() -> Outcome {
    let fq = field(3);
    let mut checked = 0;
    for m in 1..=2 {
        for g in squarefree_moduli(&fq, m) {
            for n in m.max(1)..=6 {
                let direct = eft_measure(n, &g, None).map_err(|e| e.to_string())?;
                ensure(direct == eft_measure_indicator(n, &g, None).unwrap(), || format!("coprime n={n} g={g:?}"))?;
                checked += 1;
                for a in units_mod(&g) {
                    let direct = eft_measure(n, &g, Some(&a)).map_err(|e| e.to_string())?;
                    let ind = eft_measure_indicator(n, &g, Some(&a)).map_err(|e| e.to_string())?;
                    ensure(direct == ind, || format!("class a={a:?} n={n} g={g:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} measures equal as exact rationals"))
}

fn binomial_suite() -> Outcome {
    let mut checked = 0;
    for a in 0..=30u64 {
        for b in 0..=30u64 {
            let mut alphas = vec![0.5, 2.0];
            if b > 0 && a > 0 {
                alphas.push(a as f64 / b as f64);
            }
            for &alpha in &alphas {
                if alpha * b as f64 > a as f64 * (1.0 + 1e-12) {
                    continue;
                }
                for x in -5..=5i64 {
                    for y in -5..=5i64 {
                        let Ok(bound) = binomial_bound(a, b, x, y, alpha) else { continue };
                        let top = a as i64 + b as i64 + x + y;
                        let c = binomial(top, a as i64 + x).to_f64().unwrap();
                        ensure(c <= bound * (1.0 + 1e-12), || format!("a={a} b={b} x={x} y={y} alpha={alpha}: {c} > {bound}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} grid points"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("main bound suite", main_bound_suite),
        ("identity suite", identity_suite),
        ("constants cross-checks", constants_suite),
        ("vanishing identities", vanishing_suite),
        ("roots of L-polynomials", rh_suite),
        ("transfer and one-level density", density_suite),
        ("moments", moments_suite),
        ("sieve exactness", sieve_suite),
        ("Poisson-Dirichlet and chain", pd_suite),
        ("TV oracle equivalence", tv_suite),
        ("binomial bound", binomial_suite),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|k| k != i + 1) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
