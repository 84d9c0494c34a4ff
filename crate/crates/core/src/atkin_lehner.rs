//! Traces of Atkin-Lehner operators `W_T` on `S_k^new(N)` in the two cases
//! with a known closed form, plus the `S`-minimal trace helper.
//!
//! For levels `N = M prod_{p|T} p^(2r_p+1)` (T >= 5 odd squarefree,
//! gcd(M, T) = 1, r_3 = 1 if 3 | T) the implemented cases are:
//!
//! * `M = 1`, `N != 27`:
//!   `tr W_T = (-1)^(k/2) b_{T,0} h(-T) prod_{p|T} (p-1) p^(r_p-1)`
//! * `T = p >= 5` prime, any `M` coprime to `p`:
//!   `tr W_p = (-1)^(k/2) (p-1) p^(r-1) b_{p,v2(M)} kappa_{-p}(M') h(-p)`
//!
//! where `M'` is the odd part of `M`, `h` is the imaginary quadratic class
//! number, and the constants `b_{T,e}` come from the table in [`b_const`].
//! No closed form is implemented for composite `T` with `M > 1`; callers
//! must supply the trace externally in that case.
//!
//! The `r_p`-dependence is exactly `(p-1) p^(r_p-1)` per prime: raising a
//! conductor exponent by one scales the trace by `p`, a ratio the tests pin
//! down directly.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::{kappa, legendre, rat, rat_int, rat_to_i64, FactoredInt, Rat};
use crate::class_number::h_minus;
use crate::error::{Error, Result};

/// The constants `b_{T,e}` (T odd), as exact rationals:
///
/// ```text
///   e    | T=1 mod 4 | T=3 mod 8 | T=7 mod 8
///   0    |    1/2    |     2     |     1
///   1,2  |   -1/2    |    -1     |     0
///   3    |    1/2    |    -3     |     0
///   4    |     0     |     3     |    -1
///   >=5  |     0     |     0     |     0
/// ```
///
/// Any `e >= 5` is clamped to the last row.
///
/// Each column is, up to one global constant, the Moebius combination
/// `L(e) = N_e - 2 N_(e-1) + N_(e-2)` of the counts `N_j` of 2-adic
/// lattice chains of level 2^j fixed by a square root of `-T`.  Those
/// counts are `N = (2, 2, 0, 0, ...)` when `-T = 3 mod 4` (ramified at 2),
/// `(4, 6, 6, 0, ...)` when `-T = 5 mod 8` (unramified), and
/// `(2, 4, 6, 8, 8, 8, ...)` when `-T = 1 mod 8` (split, counted modulo
/// the translation action of the centralizer).  The chain enumeration in
/// `tests/b_table_oracle.rs` re-derives every entry from these counts;
/// note the table must be integral in the columns where `h(-T)` can be
/// odd, since each trace is divisible by `(p-1) p^(r-1)`.
pub fn b_const(t: u64, e: u32) -> Result<Rat> {
    if t % 2 == 0 {
        return Err(Error::invalid(format!("b_const requires odd T, got {t}")));
    }
    let col = match t % 8 {
        1 | 5 => 0,
        3 => 1,
        _ => 2, // 7 mod 8
    };
    let row = match e {
        0 => 0,
        1 | 2 => 1,
        3 => 2,
        4 => 3,
        _ => 4,
    };
    const TABLE: [[(i64, i64); 3]; 5] = [
        [(1, 2), (2, 1), (1, 1)],
        [(-1, 2), (-1, 1), (0, 1)],
        [(1, 2), (-3, 1), (0, 1)],
        [(0, 1), (3, 1), (-1, 1)],
        [(0, 1), (0, 1), (0, 1)],
    ];
    let (num, den) = TABLE[row][col];
    Ok(rat(num, den))
}

/// Validation shared by the trace routines: `T >= 5` odd squarefree, the
/// exponent map covers exactly the primes of `T` with `r_p >= 1`, and
/// `r_3 = 1` when `3 | T`.
fn check_level_shape(k: u64, t: u64, r: &BTreeMap<u64, u32>) -> Result<FactoredInt> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "weight must be even and at least 4, got {k}"
        )));
    }
    if t % 2 == 0 {
        return Err(Error::invalid(format!("T must be odd, got {t}")));
    }
    if t < 5 {
        return Err(Error::invalid(format!("T must be at least 5, got {t}")));
    }
    let tf = FactoredInt::factor(t)?;
    if !tf.is_squarefree() {
        return Err(Error::invalid(format!("T must be squarefree, got {t}")));
    }
    let t_primes: Vec<u64> = tf.factors().iter().map(|&(p, _)| p).collect();
    if r.keys().copied().collect::<Vec<_>>() != t_primes {
        return Err(Error::invalid(
            "conductor exponents must be given for exactly the primes dividing T",
        ));
    }
    for (&p, &rp) in r {
        if rp < 1 {
            return Err(Error::invalid(format!("r_{p} must be at least 1")));
        }
        if p == 3 && rp != 1 {
            return Err(Error::invalid("r_3 must equal 1 when 3 divides T"));
        }
    }
    Ok(tf)
}

fn sign_of_weight(k: u64) -> i64 {
    if (k / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product `prod_{p|T} (p-1) p^(r_p-1)` as an exact integer.
pub(crate) fn eigenvalue_denominator(r: &BTreeMap<u64, u32>) -> BigInt {
    let mut acc = BigInt::from(1);
    for (&p, &rp) in r {
        acc *= BigInt::from(p - 1) * BigInt::from(p).pow(rp - 1);
    }
    acc
}

/// `tr(W_T | S_k^new(N))` for `N = prod_{p|T} p^(2r_p+1)` (the `M = 1`
/// case).  Requires `N != 27`.
pub fn trace_wt_m1(k: u64, t: u64, r: &BTreeMap<u64, u32>) -> Result<i64> {
    check_level_shape(k, t, r)?;
    let level: u128 = r
        .iter()
        .map(|(&p, &rp)| (p as u128).pow(2 * rp + 1))
        .product();
    if level == 27 {
        return Err(Error::invalid(
            "level 27 is excluded from this trace formula",
        ));
    }
    let value = rat_int(sign_of_weight(k))
        * b_const(t, 0)?
        * rat_int(h_minus(t)? as i64)
        * Rat::from_integer(eigenvalue_denominator(r));
    rat_to_i64(&value, "tr(W_T), M = 1")
}

/// `tr(W_p | S_k^new(N))` for `N = M p^(2r+1)` with `p >= 5` prime and
/// `gcd(M, p) = 1`.
pub fn trace_wt_prime(k: u64, p: u64, rp: u32, m: &FactoredInt) -> Result<i64> {
    let mut r = BTreeMap::new();
    r.insert(p, rp);
    check_level_shape(k, p, &r)?;
    if m.value() % p == 0 {
        return Err(Error::invalid(format!(
            "M = {m} must be coprime to p = {p}"
        )));
    }
    let value = rat_int(sign_of_weight(k))
        * Rat::from_integer(eigenvalue_denominator(&r))
        * b_const(p, m.v2())?
        * rat_int(kappa(p, &m.odd_part())?)
        * rat_int(h_minus(p)? as i64);
    rat_to_i64(&value, "tr(W_p), T prime")
}

/// `tr(W_T | S_k^new(N))` for `N = M prod p^(2r_p+1)`, dispatching to the
/// explicit `M = 1` and prime-`T` cases.  Outside those, an externally
/// supplied `override_trace` is returned verbatim; with no override the
/// call fails with [`Error::TraceUnavailable`].
pub fn trace_wt(
    k: u64,
    m: &FactoredInt,
    t: u64,
    r: &BTreeMap<u64, u32>,
    override_trace: Option<i64>,
) -> Result<i64> {
    let tf = check_level_shape(k, t, r)?;
    if m.is_one() {
        return trace_wt_m1(k, t, r);
    }
    if tf.factors().len() == 1 {
        let (p, _) = tf.factors()[0];
        return trace_wt_prime(k, p, r[&p], m);
    }
    override_trace.ok_or(Error::TraceUnavailable)
}

/// Trace on the `S`-minimal subspace for `S = p` prime, from the trace on
/// the full newspace:
///
/// ```text
/// tr(W | S-min) = tr(W | new) - (-1/p) (dim_new - dim_smin)
/// ```
///
/// (forms that are not `p`-minimal are `W_p`-eigenvectors with eigenvalue
/// `(-1/p)`).
pub fn smin_trace(trace_new: i64, p: u64, dim_new: u64, dim_smin: u64) -> Result<i64> {
    if dim_smin > dim_new {
        return Err(Error::invalid(format!(
            "S-minimal dimension {dim_smin} exceeds newspace dimension {dim_new}"
        )));
    }
    let sym = legendre(-1, p)? as i64;
    Ok(trace_new - sym * (dim_new - dim_smin) as i64)
}
