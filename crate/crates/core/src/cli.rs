//! Command-line surface. Every subcommand prints one JSON report (or a CSV
//! projection of it) carrying `"schema": 1`.
//!
//! Exit codes: 0 success, 1 an asserted inequality or identity failed,
//! 2 the arguments did not parse, 3 a precondition was violated.

use crate::anatomy::{eft_tv_report, pd_entropies, pd_tail_mc};
use crate::arithfun::Eft;
use crate::bounds::{one_level_density, reports_for, ProgressionReport};
use crate::dirichlet::{l_poly, moment_primitive_sum, moments1_all, UnitGroup};
use crate::error::Error;
use crate::factor::factor;
use crate::field::{parse_field, FieldRef};
use crate::poly::Poly;
use crate::symrep::{c1, c2, character_table, parse_rep, partitions};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fmt::Write as _;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[command(name = "ffprog", version, about = "Exact statistics of polynomials over finite fields in residue classes")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "FFPROG_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Command {
    /// Factor a monic polynomial.
    Factor {
        #[arg(long)]
        field: String,
        /// Coefficients from the constant term up, e.g. "0,1,0,0,1".
        #[arg(long)]
        poly: String,
    },
    /// C1 and C2 of a representation of S_n for moduli of degree m.
    Constants {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// e.g. "sgn", "tensor:2", "irrep:3,1", "std + 2*triv".
        #[arg(long)]
        rho: String,
    },
    /// Check the progression bound for every unit residue.
    VerifyBound {
        #[arg(long)]
        field: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        nmin: Option<usize>,
        /// A representation, or "all-irreps" for every irreducible of S_n.
        #[arg(long, default_value = "all-irreps")]
        rho: String,
        /// Include passing reports as well as failures.
        #[arg(long)]
        full: bool,
    },
    /// L-polynomials, inverse roots and zero ordinates.
    Lfunc {
        #[arg(long)]
        field: String,
        #[arg(long)]
        g: String,
        /// Character exponents, one per prime factor; default: every primitive character.
        #[arg(long)]
        chi: Option<String>,
    },
    /// Both sides of the one-level density identity for the Fejer kernel.
    Density {
        #[arg(long)]
        field: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2.0)]
        lambda: f64,
    },
    /// Moments of L-functions in residue classes and the primitive sieve.
    Moments {
        #[arg(long)]
        field: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
    },
    /// Total-variation distances between factorization-type measures.
    EftTv {
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: String,
    },
    /// Monte Carlo tail of the Poisson-Dirichlet entropy.
    PdTail {
        #[arg(long = "L")]
        l: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Histogram bins for CSV output.
        #[arg(long, default_value_t = 50)]
        bins: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Factor { .. } => "factor",
            Command::Constants { .. } => "constants",
            Command::VerifyBound { .. } => "verify-bound",
            Command::Lfunc { .. } => "lfunc",
            Command::Density { .. } => "density",
            Command::Moments { .. } => "moments",
            Command::EftTv { .. } => "eft-tv",
            Command::PdTail { .. } => "pd-tail",
        }
    }
}

enum Failure {
    Parse(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Parse(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

/// A finished report: JSON body, optional CSV projection, and whether every
/// asserted check passed.
struct Report {
    body: Value,
    csv: Option<String>,
    ok: bool,
}

fn big_json(v: &BigInt) -> Value {
    v.to_i64().map(Value::from).unwrap_or_else(|| Value::String(v.to_string()))
}

fn cpair(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn poly(field: &FieldRef, s: &str) -> Result<Poly, Failure> {
    Ok(Poly::parse(field, s)?)
}

fn cmd_factor(field: &str, p: &str) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let x = poly(&f, p)?;
    let fac = factor(&x)?;
    let factors: Vec<Value> = fac
        .factors
        .iter()
        .map(|(p, e)| json!({ "poly": p.to_coeff_string(), "display": p.to_string(), "degree": p.deg(), "exponent": e }))
        .collect();
    let body = json!({
        "field": f.name(),
        "poly": x.to_coeff_string(),
        "display": x.to_string(),
        "factors": factors,
        "eft": Eft::of_factorization(&fac).to_string(),
    });
    Ok(Report { body, csv: None, ok: true })
}

fn cmd_constants(n: u32, m: u32, rho: &str) -> Result<Report, Failure> {
    let chi = parse_rep(rho, n)?;
    let body = json!({ "n": n, "m": m, "rho": rho, "C1": big_json(&c1(&chi, m)?), "C2": big_json(&c2(&chi, m)?) });
    Ok(Report { body, csv: None, ok: true })
}

fn report_csv(rows: &[ProgressionReport]) -> String {
    let mut out = String::from("q,n,m,g,a,function,sum,mean,error,bound,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},\"{}\",\"{}\",\"{}\",{},{},{},{},{}",
            r.q, r.n, r.m, r.g, r.a, r.function, r.sum, r.mean, r.error, r.bound, r.pass
        );
    }
    out
}

fn cmd_verify_bound(field: &str, g: &str, nmin: Option<usize>, nmax: usize, rho: &str, full: bool) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let g = poly(&f, g)?;
    let m = g.deg();
    let mut all = Vec::new();
    for n in nmin.unwrap_or(m).max(m).max(1)..=nmax {
        let reps: Vec<(String, crate::symrep::VirtualCharacter)> = if rho == "all-irreps" {
            partitions(n as u32).into_iter().map(|p| p.to_string()).zip(character_table(n as u32)?.iter().cloned()).collect()
        } else {
            vec![(rho.to_string(), parse_rep(rho, n as u32)?)]
        };
        all.extend(reports_for(&g, n, &reps)?);
    }
    let failures: Vec<&ProgressionReport> = all.iter().filter(|r| !r.pass).collect();
    let ok = failures.is_empty();
    let listed: Vec<&ProgressionReport> = if full { all.iter().collect() } else { failures.clone() };
    let body = json!({
        "field": f.name(),
        "g": g.to_coeff_string(),
        "rho": rho,
        "checked": all.len(),
        "failures": failures.len(),
        "all_pass": ok,
        "reports": listed,
    });
    Ok(Report { body, csv: Some(report_csv(&all)), ok })
}

fn cmd_lfunc(field: &str, g: &str, chi: Option<&str>) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let g = poly(&f, g)?;
    let gr = UnitGroup::new(&g)?;
    let chars: Vec<_> = match chi {
        Some(s) => {
            let e: Vec<u64> = s
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Failure::Parse(format!("bad exponent list '{s}'"))))
                .collect::<Result<_, _>>()?;
            vec![gr.character(e)?]
        }
        None => gr.primitive_characters().collect(),
    };
    let q = f.q() as f64;
    let mut ok = true;
    let mut rows = Vec::new();
    let mut csv = String::from("exponents,parity,primitive,root_re,root_im,modulus\n");
    for c in &chars {
        if c.is_trivial() {
            return Err(Failure::Precondition("the trivial character has no L-polynomial".into()));
        }
        let lp = l_poly(c)?;
        let roots = lp.roots();
        let gammas = crate::dirichlet::gammas(c)?;
        let rh = roots.iter().all(|u| (u.norm() - q.powf(-0.5)).abs() <= 1e-9);
        let checked = c.is_primitive() && c.is_odd();
        if checked && !rh {
            ok = false;
        }
        let exps: Vec<String> = c.exponents().iter().map(|e| e.to_string()).collect();
        let parity = if c.is_odd() { "odd" } else { "even" };
        for u in &roots {
            let _ = writeln!(csv, "\"{}\",{},{},{},{},{}", exps.join(","), parity, c.is_primitive(), u.re, u.im, u.norm());
        }
        rows.push(json!({
            "exponents": c.exponents(),
            "parity": parity,
            "primitive": c.is_primitive(),
            "coefficients": lp.to_pairs(),
            "degree": lp.degree(),
            "roots": roots.iter().map(|&u| cpair(u)).collect::<Vec<_>>(),
            "root_moduli": roots.iter().map(|u| u.norm()).collect::<Vec<_>>(),
            "gammas": gammas,
            "rh_checked": checked,
            "rh_pass": rh,
        }));
    }
    let body = json!({ "field": f.name(), "g": g.to_coeff_string(), "characters": rows, "all_pass": ok });
    Ok(Report { body, csv: Some(csv), ok })
}

fn cmd_density(field: &str, g: &str, lambda: f64) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let r = one_level_density(&poly(&f, g)?, lambda)?;
    let ok = r.pass && r.ol_identity.iter().all(|x| x.exact);
    Ok(Report { body: serde_json::to_value(&r).expect("serializable"), csv: None, ok })
}

fn cmd_moments(field: &str, g: &str, k: u32, sigma: f64, t: f64) -> Result<Report, Failure> {
    let f = parse_field(field)?;
    let g = poly(&f, g)?;
    let s = Complex64::new(sigma, t);
    let rows = moments1_all(&g, s, k)?;
    let prim = moment_primitive_sum(&g, s, k)?;
    let scale = prim.direct[0].hypot(prim.direct[1]).max(1.0);
    let sieve_dev = (prim.direct[0] - prim.sieve[0]).hypot(prim.direct[1] - prim.sieve[1]);
    let sieve_ok = sieve_dev <= 1e-7 * scale;
    let paths_ok = rows.iter().all(|r| r.path_deviation <= 1e-8 * r.value[0].hypot(r.value[1]).max(1.0));
    let ok = sieve_ok && paths_ok && rows.iter().all(|r| r.pass);
    let mut csv = String::from("a,value_re,value_im,error,bound,pass\n");
    for r in &rows {
        let _ = writeln!(csv, "\"{}\",{},{},{},{},{}", r.a, r.value[0], r.value[1], r.error, r.bound, r.pass);
    }
    let body = json!({
        "field": f.name(),
        "g": g.to_coeff_string(),
        "k": k,
        "s": [sigma, t],
        "residues": rows,
        "primitive": prim,
        "sieve_deviation": sieve_dev,
        "all_pass": ok,
    });
    Ok(Report { body, csv: Some(csv), ok })
}

fn cmd_eft_tv(q: Option<&str>, field: Option<&str>, n: usize, g: &str) -> Result<Report, Failure> {
    let spec = field.or(q).ok_or_else(|| Failure::Parse("one of --q or --field is required".into()))?;
    let f = parse_field(spec)?;
    let r = eft_tv_report(n, &poly(&f, g)?)?;
    let mut csv = String::from("a,tv,tv_float\n");
    for row in &r.rows {
        let _ = writeln!(csv, "\"{}\",{},{}", row.a, row.tv, row.tv_f64);
    }
    let ok = r.average_matches;
    Ok(Report { body: serde_json::to_value(&r).expect("serializable"), csv: Some(csv), ok })
}

fn cmd_pd_tail(l: f64, trials: u64, seed: u64, bins: usize, want_csv: bool) -> Result<Report, Failure> {
    let r = pd_tail_mc(l, trials, seed)?;
    let ok = r.pass != Some(false);
    let csv = if want_csv {
        let bins = bins.max(1);
        let hs = pd_entropies(trials, seed);
        let top = hs.iter().copied().fold(0.0f64, f64::max).max(1e-12);
        let width = top / bins as f64;
        let mut counts = vec![0u64; bins];
        for h in hs {
            counts[((h / width) as usize).min(bins - 1)] += 1;
        }
        let mut out = String::from("bin_low,bin_high,count\n");
        for (i, c) in counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", i as f64 * width, (i + 1) as f64 * width, c);
        }
        Some(out)
    } else {
        None
    };
    Ok(Report { body: serde_json::to_value(&r).expect("serializable"), csv, ok })
}

fn execute(cfg: &RunConfig) -> Result<Report, Failure> {
    let csv = cfg.format == Format::Csv;
    match &cfg.command {
        Command::Factor { field, poly } => cmd_factor(field, poly),
        Command::Constants { n, m, rho } => cmd_constants(*n, *m, rho),
        Command::VerifyBound { field, g, nmax, nmin, rho, full } => cmd_verify_bound(field, g, *nmin, *nmax, rho, *full),
        Command::Lfunc { field, g, chi } => cmd_lfunc(field, g, chi.as_deref()),
        Command::Density { field, g, lambda } => cmd_density(field, g, *lambda),
        Command::Moments { field, g, k, sigma, t } => cmd_moments(field, g, *k, *sigma, *t),
        Command::EftTv { q, field, n, g } => cmd_eft_tv(q.as_deref(), field.as_deref(), *n, g),
        Command::PdTail { l, trials, seed, bins } => cmd_pd_tail(*l, *trials, *seed, *bins, csv),
    }
}

fn with_header(command: &str, mut body: Value) -> Value {
    if let Value::Object(map) = &mut body {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("command".into(), json!(command));
    }
    body
}

fn failure_record(command: &str, kind: &str, message: &str) -> String {
    let v = json!({ "schema": SCHEMA, "command": command, "error": { "kind": kind, "message": message } });
    serde_json::to_string_pretty(&v).expect("serializable") + "\n"
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code together with what would be written to standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (2, failure_record("", "parse", e.to_string().trim())),
            };
        }
    };
    let name = cfg.command.name();
    let result = crate::par::with_threads(cfg.threads.unwrap_or(0), || execute(&cfg));
    let (code, text) = match result {
        Err(Failure::Parse(m)) => (2, failure_record(name, "parse", &m)),
        Err(Failure::Precondition(m)) => (3, failure_record(name, "precondition", &m)),
        Ok(r) => {
            let code = if r.ok { 0 } else { 1 };
            match (cfg.format, r.csv) {
                (Format::Csv, Some(csv)) => (code, csv),
                (Format::Csv, None) => {
                    return (2, failure_record(name, "parse", &format!("{name} has no CSV projection")));
                }
                (Format::Json, _) => {
                    let mut body = with_header(name, r.body);
                    if !r.ok {
                        if let Value::Object(map) = &mut body {
                            map.insert("error".into(), json!({ "kind": "assertion", "message": "a checked inequality failed" }));
                        }
                    }
                    (code, serde_json::to_string_pretty(&body).expect("serializable") + "\n")
                }
            }
        }
    };
    match &cfg.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => (code, String::new()),
            Err(e) => (3, failure_record(name, "precondition", &format!("cannot write {path}: {e}"))),
        },
        None => (code, text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn constants_example() {
        let (code, out) = run(["ffprog", "constants", "--n", "4", "--m", "2", "--rho", "sgn"]);
        assert_eq!(code, 0);
        let v = parse(&out);
        assert_eq!(v["C1"], 6);
        assert_eq!(v["C2"], 4);
        assert_eq!(v["schema"], 1);
    }

    #[test]
    fn factor_example() {
        let (code, out) = run(["ffprog", "factor", "--field", "2^1", "--poly", "0,1,0,0,1"]);
        assert_eq!(code, 0);
        let v = parse(&out);
        let polys: Vec<&str> = v["factors"].as_array().unwrap().iter().map(|f| f["poly"].as_str().unwrap()).collect();
        assert_eq!(polys, ["0,1", "1,1", "1,1,1"]);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["ffprog", "constants", "--n", "x"]).0, 2);
        assert_eq!(run(["ffprog", "factor", "--field", "4^1", "--poly", "1"]).0, 3);
        assert_eq!(run(["ffprog", "lfunc", "--field", "3", "--g", "0,0,1"]).0, 3);
        assert_eq!(run(["ffprog", "constants", "--n", "3", "--m", "2", "--rho", "bogus"]).0, 2);
    }

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig::try_parse_from(["ffprog", "--threads", "2", "pd-tail", "--L", "8", "--seed", "3"]).unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), cfg);
    }
}
