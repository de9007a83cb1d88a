//! Integer partitions, used both as cycle types and as irreducible labels.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest n accepted by the representation-theoretic operations.
pub const MAX_DEGREE: u32 = 14;

/// A weakly decreasing list of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: Vec::new() }
    }

    /// The partition with `mult[k-1]` parts equal to k.
    pub fn from_multiplicities(mult: &[u32]) -> Partition {
        let mut parts = Vec::new();
        for (i, &c) in mult.iter().enumerate() {
            parts.extend(std::iter::repeat_n(i as u32 + 1, c as usize));
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn n(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `mult[k]` is the number of parts equal to k (index 0 unused).
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.parts.first().copied().unwrap_or(0) as usize + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// Number of parts equal to k.
    pub fn count(&self, k: u32) -> u32 {
        self.parts.iter().filter(|&&p| p == k).count() as u32
    }

    /// Size of the centralizer of a permutation of this cycle type.
    pub fn z(&self) -> u128 {
        let mut z: u128 = 1;
        for (k, &c) in self.multiplicities().iter().enumerate().skip(1) {
            for j in 1..=c as u128 {
                z *= k as u128 * j;
            }
        }
        z
    }

    /// Sign of a permutation with this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.n() as usize - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Multiset union of the parts.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut p = self.parts.clone();
        p.extend_from_slice(&other.parts);
        Partition::new(p)
    }

    pub fn conjugate(&self) -> Partition {
        let top = self.parts.first().copied().unwrap_or(0);
        Partition::new((1..=top).map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Dimension of the irreducible labelled by this partition.
    pub fn hook_dimension(&self) -> u128 {
        let conj = self.conjugate();
        let mut hooks: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row as usize - j - 1;
                let leg = conj.parts[j] as usize - i - 1;
                hooks *= (arm + leg + 1) as u128;
            }
        }
        factorial(self.n()) / hooks
    }

    /// Parses "3,1,1" or the exponent form "3,1^2"; "" and "0" give the empty partition.
    pub fn parse(s: &str) -> Result<Partition> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for tok in s.split([',', ' ']).filter(|t| !t.is_empty()) {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e),
                None => (tok, "1"),
            };
            let b: u32 = base.trim().parse().map_err(|_| Error::Parse(format!("bad part '{tok}'")))?;
            let e: usize = exp.trim().parse().map_err(|_| Error::Parse(format!("bad exponent '{tok}'")))?;
            if b == 0 {
                return Err(Error::Parse("parts must be positive".into()));
            }
            parts.extend(std::iter::repeat_n(b, e));
        }
        Ok(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// All partitions of n, starting from (n) and descending lexicographically.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partitions of n with exactly k parts.
pub fn partitions_with_len(n: u32, k: usize) -> Vec<Partition> {
    partitions(n).into_iter().filter(|p| p.len() == k).collect()
}

/// Conjugacy-class data of S_n.
pub struct ClassTable {
    pub n: u32,
    pub classes: Vec<Partition>,
    pub z: Vec<u128>,
    /// n!/z, the number of permutations in each class.
    pub sizes: Vec<u128>,
    pub order: u128,
    index: HashMap<Partition, usize>,
}

impl ClassTable {
    pub fn index_of(&self, p: &Partition) -> usize {
        self.index[p]
    }
}

/// Cached class table for S_n.
pub fn class_table(n: u32) -> Arc<ClassTable> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ClassTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let classes = partitions(n);
    let z: Vec<u128> = classes.iter().map(|p| p.z()).collect();
    let order = factorial(n);
    let sizes = z.iter().map(|&z| order / z).collect();
    let index = classes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let t = Arc::new(ClassTable { n, classes, z, sizes, order, index });
    cache.lock().unwrap().insert(n, t.clone());
    t
}

pub(crate) fn check_degree(n: u32) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::TooLarge(format!("symmetric group degree {n} exceeds {MAX_DEGREE}")));
    }
    Ok(())
}
