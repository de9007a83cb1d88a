//! Extended factorization types: the multiset of (degree, multiplicity)
//! pairs of the prime factorization.

use crate::error::{Error, Result};
use crate::factor::{factor, Factorization};
use crate::poly::Poly;
use std::fmt;

/// A sorted multiset of (d, l) pairs: one pair per distinct prime of degree d
/// occurring with multiplicity l.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Eft {
    pairs: Vec<(u32, u32)>,
}

impl Eft {
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Result<Eft> {
        if pairs.iter().any(|&(d, l)| d == 0 || l == 0) {
            return Err(Error::Precondition("EFT pairs need d >= 1 and l >= 1".into()));
        }
        pairs.sort_unstable();
        Ok(Eft { pairs })
    }

    pub fn of_factorization(fac: &Factorization) -> Eft {
        Eft { pairs: fac.degree_pairs() }
    }

    /// The factorization type of a monic f.
    pub fn of(f: &Poly) -> Result<Eft> {
        Ok(Self::of_factorization(&factor(f)?))
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// Total weight sum d * l.
    pub fn n(&self) -> u32 {
        self.pairs.iter().map(|&(d, l)| d * l).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, l)| l == 1)
    }

    /// The pairs with l >= 2.
    pub fn squareful_part(&self) -> Eft {
        Eft { pairs: self.pairs.iter().copied().filter(|&(_, l)| l >= 2).collect() }
    }

    /// Degrees d of the pairs (d, 1).
    pub fn simple_degrees(&self) -> Vec<u32> {
        self.pairs.iter().filter(|&&(_, l)| l == 1).map(|&(d, _)| d).collect()
    }

    /// Normalized entropy sum l (d/n) log(n/d).
    pub fn entropy(&self) -> f64 {
        let n = self.n() as f64;
        self.pairs.iter().map(|&(d, l)| l as f64 * (d as f64 / n) * (n / d as f64).ln()).sum()
    }

    /// Every EFT of total weight n.
    pub fn all(n: u32) -> Vec<Eft> {
        fn rec(rem: u32, min: (u32, u32), cur: &mut Vec<(u32, u32)>, out: &mut Vec<Eft>) {
            if rem == 0 {
                out.push(Eft { pairs: cur.clone() });
                return;
            }
            for d in min.0..=rem {
                let lmin = if d == min.0 { min.1 } else { 1 };
                for l in lmin..=rem / d {
                    cur.push((d, l));
                    rec(rem - d * l, (d, l), cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(n, (1, 1), &mut Vec::new(), &mut out);
        out
    }

    /// Parses "1^2·3^1", also accepting '*' or '.' as separators; a bare "d"
    /// means "d^1" and "()" is the empty type.
    pub fn parse(s: &str) -> Result<Eft> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Eft::default());
        }
        let mut pairs = Vec::new();
        for tok in s.split(['·', '*', '.']).filter(|t| !t.trim().is_empty()) {
            let (d, l) = tok.split_once('^').unwrap_or((tok, "1"));
            let d: u32 = d.trim().parse().map_err(|_| Error::Parse(format!("bad EFT factor '{tok}'")))?;
            let l: u32 = l.trim().parse().map_err(|_| Error::Parse(format!("bad EFT factor '{tok}'")))?;
            pairs.push((d, l));
        }
        Eft::new(pairs).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Eft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.pairs.iter().map(|(d, l)| format!("{d}^{l}")).collect();
        write!(f, "{}", s.join("·"))
    }
}

impl fmt::Debug for Eft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
