//! Symmetric-group characters and the bound constants C1, C2 and M_rho(w).

pub mod partition;
pub mod character;
pub mod multipoly;
pub mod constants;

pub use character::{
    character_table, induce_product, irreducible_character, named_rep, parse_rep, RepKind, VirtualCharacter,
};
pub use constants::{
    binomial_bound, c1, c2, c2_via_e_formula, c2_via_w_formula, closed_form_constants, dim_v, dim_vd, m_rho, trace_v,
    trace_vd, von_mangoldt_loose_constants, von_mangoldt_series_constants, Family,
};
pub use multipoly::MultiPoly;
pub use partition::{partitions, Partition};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// C(n, k) as a big integer; zero when k < 0, n < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
