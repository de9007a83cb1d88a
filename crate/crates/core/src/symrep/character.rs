//! Integer-valued class functions on S_n, irreducible characters by the
//! Murnaghan–Nakayama rule, and builders for the representations used by the
//! factorization functions.

use super::partition::{check_degree, class_table, partitions, ClassTable, Partition};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// A class function of S_n with integer values, stored densely in the order
/// of [`class_table`].
#[derive(Clone, PartialEq, Eq)]
pub struct VirtualCharacter {
    n: u32,
    values: Vec<i64>,
}

impl VirtualCharacter {
    pub fn from_fn(n: u32, f: impl Fn(&Partition) -> i64) -> VirtualCharacter {
        let t = class_table(n);
        VirtualCharacter { n, values: t.classes.iter().map(f).collect() }
    }

    pub fn zero(n: u32) -> VirtualCharacter {
        Self::from_fn(n, |_| 0)
    }

    pub fn trivial(n: u32) -> VirtualCharacter {
        Self::from_fn(n, |_| 1)
    }

    pub fn sign(n: u32) -> VirtualCharacter {
        Self::from_fn(n, |l| l.sign())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn table(&self) -> Arc<ClassTable> {
        class_table(self.n)
    }

    pub fn value(&self, cycle_type: &Partition) -> i64 {
        self.values[class_table(self.n).index_of(cycle_type)]
    }

    pub fn dim(&self) -> i64 {
        *self.values.last().expect("at least one class")
    }

    fn same_degree(&self, other: &Self) {
        assert_eq!(self.n, other.n, "characters of different symmetric groups");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_degree(other);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        VirtualCharacter { n: self.n, values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Self {
        VirtualCharacter { n: self.n, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Pointwise product (tensor product of representations).
    pub fn tensor(&self, other: &Self) -> Self {
        self.same_degree(other);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        VirtualCharacter { n: self.n, values }
    }

    pub fn tensor_sign(&self) -> Self {
        let t = class_table(self.n);
        let values = self.values.iter().zip(&t.classes).map(|(v, l)| v * l.sign()).collect();
        VirtualCharacter { n: self.n, values }
    }

    /// (1/n!) sum over S_n of self * other, exactly.
    pub fn inner(&self, other: &Self) -> BigRational {
        self.same_degree(other);
        let t = class_table(self.n);
        let mut num = BigInt::zero();
        for i in 0..self.values.len() {
            num += BigInt::from(self.values[i]) * BigInt::from(other.values[i]) * BigInt::from(t.sizes[i]);
        }
        BigRational::new(num, BigInt::from(t.order))
    }

    /// The inner product, required to be an integer.
    pub fn multiplicity(&self, other: &Self) -> Result<i64> {
        let r = self.inner(other);
        if !r.is_integer() {
            return Err(Error::NonIntegral(format!("inner product {r}")));
        }
        r.to_integer().to_i64().ok_or_else(|| Error::TooLarge("inner product".into()))
    }

    /// Multiplicities of the irreducible constituents (nonzero ones only).
    pub fn decompose(&self) -> Result<Vec<(Partition, i64)>> {
        let table = character_table(self.n)?;
        let mut out = Vec::new();
        for (mu, chi) in partitions(self.n).into_iter().zip(table.iter()) {
            let c = self.multiplicity(chi)?;
            if c != 0 {
                out.push((mu, c));
            }
        }
        Ok(out)
    }

    /// The label, when this is the character of an irreducible.
    pub fn irreducible_label(&self) -> Option<Partition> {
        if !self.inner(self).is_one() || self.dim() <= 0 {
            return None;
        }
        self.decompose().ok()?.into_iter().next().map(|(mu, _)| mu)
    }

    /// True when every irreducible multiplicity is nonnegative.
    pub fn is_genuine(&self) -> bool {
        self.decompose().map(|d| d.iter().all(|(_, c)| *c >= 0)).unwrap_or(false)
    }
}

impl fmt::Debug for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = class_table(self.n);
        let parts: Vec<String> = t.classes.iter().zip(&self.values).map(|(l, v)| format!("{l}:{v}")).collect();
        write!(f, "chi[{}]", parts.join(" "))
    }
}

/// Murnaghan–Nakayama on beta-sets. `beta` is strictly decreasing; `nu` is the
/// remaining cycle type, consumed from the largest part.
fn mn(beta: &[u32], nu: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), i64>) -> i64 {
    let Some((&r, rest)) = nu.split_first() else {
        return 1;
    };
    let key = (beta.to_vec(), nu.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0;
    for i in 0..beta.len() {
        let b = beta[i];
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let crossed = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb: Vec<u32> = beta.to_vec();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let v = mn(&nb, rest, memo);
        total += if crossed % 2 == 0 { v } else { -v };
    }
    memo.insert(key, total);
    total
}

fn beta_set(mu: &Partition) -> Vec<u32> {
    let l = mu.len() as u32;
    mu.parts().iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect()
}

/// Irreducible characters of S_n, in the order of [`partitions`].
pub fn character_table(n: u32) -> Result<Arc<Vec<VirtualCharacter>>> {
    check_degree(n)?;
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<VirtualCharacter>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let mut memo = HashMap::new();
    let classes = class_table(n);
    let table: Vec<VirtualCharacter> = partitions(n)
        .iter()
        .map(|mu| {
            let beta = beta_set(mu);
            let values = classes.classes.iter().map(|nu| mn(&beta, nu.parts(), &mut memo)).collect();
            VirtualCharacter { n, values }
        })
        .collect();
    let t = Arc::new(table);
    cache.lock().unwrap().insert(n, t.clone());
    Ok(t)
}

/// The irreducible character labelled by mu.
pub fn irreducible_character(mu: &Partition) -> Result<VirtualCharacter> {
    let n = mu.n();
    let table = character_table(n)?;
    let idx = partitions(n).iter().position(|p| p == mu).expect("partition of n");
    Ok(table[idx].clone())
}

/// Coefficients of sum_i x^i chi_{wedge^i std}(lambda), i = 0..n-1.
fn wedge_std_poly(l: &Partition, n: u32) -> Vec<i64> {
    // product over cycles of (1 - (-x)^c), then divide by (1 + x)
    let mut p = vec![0i64; n as usize + 1];
    p[0] = 1;
    for &c in l.parts() {
        let c = c as usize;
        let s = if c.is_multiple_of(2) { -1 } else { 1 };
        for j in (c..=n as usize).rev() {
            p[j] += s * p[j - c];
        }
    }
    let mut q = vec![0i64; n.max(1) as usize];
    let mut carry = 0i64;
    for j in 0..n as usize {
        q[j] = p[j] - carry;
        carry = q[j];
    }
    q
}

/// The representations with built-in builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepKind {
    Trivial,
    Sign,
    /// The (n-1)-dimensional standard representation.
    Standard,
    /// The n-dimensional permutation representation.
    Permutation,
    /// The regular representation.
    Regular,
    /// An exterior power of the standard representation.
    Wedge(u32),
    /// The direct sum of all exterior powers of the standard representation.
    WedgeSum,
    /// (C^k)^{tensor n} with S_n permuting the factors.
    TensorPower(u32),
    /// Permutation character on the cosets of the Young subgroup of a composition.
    Young(Vec<u32>),
    Irreducible(Partition),
}

/// Character of a named representation of S_n.
pub fn named_rep(kind: &RepKind, n: u32) -> Result<VirtualCharacter> {
    check_degree(n)?;
    Ok(match kind {
        RepKind::Trivial => VirtualCharacter::trivial(n),
        RepKind::Sign => VirtualCharacter::sign(n),
        RepKind::Permutation => VirtualCharacter::from_fn(n, |l| l.count(1) as i64),
        RepKind::Standard => VirtualCharacter::from_fn(n, |l| l.count(1) as i64 - 1),
        RepKind::Regular => {
            let id = Partition::new(vec![1; n as usize]);
            let order = class_table(n).order as i64;
            VirtualCharacter::from_fn(n, |l| if *l == id { order } else { 0 })
        }
        RepKind::Wedge(i) => {
            if n == 0 || *i >= n {
                VirtualCharacter::zero(n)
            } else {
                VirtualCharacter::from_fn(n, |l| wedge_std_poly(l, n)[*i as usize])
            }
        }
        RepKind::WedgeSum => VirtualCharacter::from_fn(n, |l| wedge_std_poly(l, n).iter().sum()),
        RepKind::TensorPower(k) => VirtualCharacter::from_fn(n, |l| (*k as i64).pow(l.len() as u32)),
        RepKind::Young(comp) => {
            if comp.iter().sum::<u32>() != n {
                return Err(Error::Precondition(format!("composition {comp:?} does not sum to {n}")));
            }
            young_permutation_character(comp)
        }
        RepKind::Irreducible(mu) => {
            if mu.n() != n {
                return Err(Error::Precondition(format!("{mu} is not a partition of {n}")));
            }
            irreducible_character(mu)?
        }
    })
}

/// Character of Ind_{S_a x S_b}^{S_{a+b}} of an outer tensor product.
pub fn induce_product(a: &VirtualCharacter, b: &VirtualCharacter) -> VirtualCharacter {
    let (na, nb) = (a.n, b.n);
    let ta = class_table(na);
    let tb = class_table(nb);
    VirtualCharacter::from_fn(na + nb, |lambda| {
        let z = lambda.z() as i128;
        let mut total: i128 = 0;
        for_each_split(lambda, na, &mut |alpha, beta| {
            let ia = ta.index_of(alpha);
            let ib = tb.index_of(beta);
            let w = z / (ta.z[ia] as i128 * tb.z[ib] as i128);
            total += w * a.values[ia] as i128 * b.values[ib] as i128;
        });
        total as i64
    })
}

/// Calls `f(alpha, beta)` for each way of writing lambda as a multiset union
/// with |alpha| = k.
pub fn for_each_split(lambda: &Partition, k: u32, f: &mut impl FnMut(&Partition, &Partition)) {
    let mult = lambda.multiplicities();
    let distinct: Vec<(u32, u32)> =
        mult.iter().enumerate().filter(|(_, &c)| c > 0).map(|(p, &c)| (p as u32, c)).collect();
    fn rec(
        distinct: &[(u32, u32)],
        i: usize,
        rem: u32,
        take: &mut Vec<u32>,
        f: &mut impl FnMut(&Partition, &Partition),
    ) {
        if i == distinct.len() {
            if rem == 0 {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (j, &(p, c)) in distinct.iter().enumerate() {
                    a.extend(std::iter::repeat_n(p, take[j] as usize));
                    b.extend(std::iter::repeat_n(p, (c - take[j]) as usize));
                }
                f(&Partition::new(a), &Partition::new(b));
            }
            return;
        }
        let (p, c) = distinct[i];
        for t in 0..=c.min(rem / p) {
            take.push(t);
            rec(distinct, i + 1, rem - t * p, take, f);
            take.pop();
        }
    }
    rec(&distinct, 0, k, &mut Vec::new(), f);
}

/// Permutation character of S_n on the cosets of the Young subgroup
/// S_{e_1} x ... x S_{e_r}.
pub fn young_permutation_character(comp: &[u32]) -> VirtualCharacter {
    let mut parts: Vec<u32> = comp.iter().copied().filter(|&e| e > 0).collect();
    parts.sort_unstable();
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, VirtualCharacter>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().unwrap().get(&parts) {
        return c.clone();
    }
    let chi = parts
        .iter()
        .fold(VirtualCharacter::trivial(0), |acc, &e| induce_product(&acc, &VirtualCharacter::trivial(e)));
    cache.lock().unwrap().insert(parts, chi.clone());
    chi
}

/// Dimension of the invariants of chi under the Young subgroup of `comp`.
pub fn young_invariant_dim(chi: &VirtualCharacter, comp: &[u32]) -> Result<i64> {
    if comp.iter().sum::<u32>() != chi.n {
        return Err(Error::Precondition(format!("composition {comp:?} does not sum to {}", chi.n)));
    }
    chi.multiplicity(&young_permutation_character(comp))
}

/// Parses a representation description for S_n: a '+'-separated sum of
/// terms, each an optional integer multiplier "k*" followed by one of
/// `triv`, `sgn`, `std`, `perm`, `reg`, `wedge:i`, `wedgesum`, `tensor:k`,
/// `young:a,b,..`, `irrep:a,b,..`, optionally followed by `*sgn`.
pub fn parse_rep(s: &str, n: u32) -> Result<VirtualCharacter> {
    let mut total = VirtualCharacter::zero(n);
    if s.trim().is_empty() {
        return Err(Error::Parse("empty representation".into()));
    }
    for term in s.split('+') {
        let mut term = term.trim();
        let mut coef = 1i64;
        if let Some((c, rest)) = term.split_once('*') {
            if let Ok(c) = c.trim().parse::<i64>() {
                coef = c;
                term = rest.trim();
            }
        }
        let mut twist = false;
        if let Some(base) = term.strip_suffix("*sgn") {
            twist = true;
            term = base.trim();
        }
        let (name, arg) = match term.split_once(':') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (term, None),
        };
        let num = |a: Option<&str>| -> Result<u32> {
            a.ok_or_else(|| Error::Parse(format!("'{name}' needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter in '{term}'")))
        };
        let kind = match name {
            "triv" | "trivial" => RepKind::Trivial,
            "sgn" | "sign" => RepKind::Sign,
            "std" | "standard" => RepKind::Standard,
            "perm" => RepKind::Permutation,
            "reg" | "regular" => RepKind::Regular,
            "wedge" => RepKind::Wedge(num(arg)?),
            "wedgesum" => RepKind::WedgeSum,
            "tensor" => RepKind::TensorPower(num(arg)?),
            "young" | "ind" => {
                let p = Partition::parse(arg.unwrap_or(""))?;
                RepKind::Young(p.parts().to_vec())
            }
            "irrep" => RepKind::Irreducible(Partition::parse(arg.unwrap_or(""))?),
            _ => return Err(Error::Parse(format!("unknown representation '{name}'"))),
        };
        let mut chi = named_rep(&kind, n)?;
        if twist {
            chi = chi.tensor_sign();
        }
        total = total.add(&chi.scale(coef));
    }
    Ok(total)
}
