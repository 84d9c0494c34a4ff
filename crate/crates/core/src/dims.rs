//! Dimensions of `S_k(Gamma_0(N))` and `S_k^new(N)` for even `k >= 4` and
//! trivial nebentypus.
//!
//! The cusp-form dimension is the standard formula
//!
//! ```text
//! dim S_k(Gamma_0(N)) = (k-1)/12 * psi(N) - nu_inf(N)/2
//!                       + c2(k) * eps2(N) + c3(k) * eps3(N)
//! ```
//!
//! with `psi(N) = [SL_2(Z) : Gamma_0(N)]`, `nu_inf(N) = sum_{d|N}
//! phi(gcd(d, N/d))` the number of cusps, `eps2`/`eps3` the counts of
//! elliptic points of order 2 and 3, and `c2(k) = floor(k/4) - (k-1)/4`,
//! `c3(k) = floor(k/3) - (k-1)/3`.  The new-space dimension is the Moebius
//! convolution `dim S_k^new(N) = sum_{d|N} kernel(d) dim S_k(Gamma_0(N/d))`
//! against the multiplicative kernel `p -> -2, p^2 -> 1, p^(>=3) -> 0`.
//!
//! All intermediate arithmetic is exact rational; integrality of the result
//! is asserted, which catches any misapplied elliptic/cusp bookkeeping.
//! Weight 2 is deliberately out of range (the downstream trace formula
//! requires `k > 2`), which also keeps `g - 1 < 0` corrections out of scope.

use crate::arith::{
    euler_phi, kronecker_at_prime, newspace_kernel, psi_index, rat, rat_int, rat_to_u64,
    FactoredInt, Rat,
};
use crate::error::{Error, Result};

fn check_weight(k: u64) -> Result<()> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "weight must be even and at least 4, got {k}"
        )));
    }
    Ok(())
}

/// Number of cusps of `Gamma_0(N)`.
fn nu_infinity(n: &FactoredInt) -> u64 {
    n.divisors()
        .iter()
        .map(|d| {
            let q = n.quotient(d).expect("divisor");
            let g: Vec<(u64, u32)> = d
                .factors()
                .iter()
                .filter_map(|&(p, a)| {
                    let b = q
                        .factors()
                        .iter()
                        .find(|&&(pq, _)| pq == p)
                        .map_or(0, |&(_, e)| e);
                    let m = a.min(b);
                    (m > 0).then_some((p, m))
                })
                .collect();
            euler_phi(&FactoredInt::from_factors(g).expect("valid gcd factorization"))
        })
        .sum()
}

/// Elliptic points of order 2: zero when `4 | N`, otherwise the product of
/// `1 + (-4/p)` over primes dividing `N`.
fn eps2(n: &FactoredInt) -> u64 {
    if n.value() % 4 == 0 {
        return 0;
    }
    n.factors()
        .iter()
        .map(|&(p, _)| (1 + kronecker_at_prime(-4, p) as i64) as u64)
        .product()
}

/// Elliptic points of order 3: zero when `9 | N`, otherwise the product of
/// `1 + (-3/p)`.
fn eps3(n: &FactoredInt) -> u64 {
    if n.value() % 9 == 0 {
        return 0;
    }
    n.factors()
        .iter()
        .map(|&(p, _)| (1 + kronecker_at_prime(-3, p) as i64) as u64)
        .product()
}

fn c2(k: u64) -> Rat {
    rat_int(k as i64 / 4) - rat(k as i64 - 1, 4)
}

fn c3(k: u64) -> Rat {
    rat_int(k as i64 / 3) - rat(k as i64 - 1, 3)
}

/// `dim S_k(Gamma_0(N))` for even `k >= 4`.
pub fn dim_cusp(k: u64, n: &FactoredInt) -> Result<u64> {
    check_weight(k)?;
    let dim = rat(k as i64 - 1, 12) * rat_int(psi_index(n) as i64) - rat(nu_infinity(n) as i64, 2)
        + c2(k) * rat_int(eps2(n) as i64)
        + c3(k) * rat_int(eps3(n) as i64);
    rat_to_u64(&dim, &format!("dim S_{k}(Gamma_0({n}))"))
}

/// `dim S_k^new(N)` for even `k >= 4`.
pub fn dim_new(k: u64, n: &FactoredInt) -> Result<u64> {
    check_weight(k)?;
    let mut acc: i64 = 0;
    for d in n.divisors() {
        let w = newspace_kernel(&d);
        if w == 0 {
            continue;
        }
        let m = n.quotient(&d)?;
        acc += w * dim_cusp(k, &m)? as i64;
    }
    if acc < 0 {
        return Err(Error::internal(format!(
            "dim S_{k}^new({n}) came out negative: {acc}"
        )));
    }
    Ok(acc as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fi(n: u64) -> FactoredInt {
        FactoredInt::factor(n).unwrap()
    }

    #[test]
    fn dim_cusp_examples() {
        assert_eq!(dim_cusp(4, &fi(11)).unwrap(), 2);
        assert_eq!(dim_cusp(4, &fi(1331)).unwrap(), 352);
        assert_eq!(dim_cusp(4, &fi(3125)).unwrap(), 913);
    }

    #[test]
    fn dim_cusp_level_one() {
        // Classical values: first cusp form of level 1 is Delta in weight 12.
        assert_eq!(dim_cusp(4, &fi(1)).unwrap(), 0);
        assert_eq!(dim_cusp(10, &fi(1)).unwrap(), 0);
        assert_eq!(dim_cusp(12, &fi(1)).unwrap(), 1);
    }

    #[test]
    fn dim_new_examples() {
        assert_eq!(dim_new(4, &fi(1331)).unwrap(), 300);
        assert_eq!(dim_new(4, &fi(3125)).unwrap(), 600);
        assert_eq!(dim_new(4, &fi(1)).unwrap(), 0);
    }

    #[test]
    fn rejects_weight_2_and_odd_weights() {
        assert!(dim_cusp(2, &fi(11)).is_err());
        assert!(dim_cusp(5, &fi(11)).is_err());
        assert!(dim_new(3, &fi(11)).is_err());
    }

    // Old/new decomposition round-trip:
    //   dim S_k(N) = sum_{d | N} sigma_0(N/d) dim S_k^new(d).
    #[test]
    fn old_new_round_trip_small() {
        for k in [4u64, 6, 8, 10] {
            for n in 1..=300u64 {
                let fn_ = fi(n);
                let lhs = dim_cusp(k, &fn_).unwrap();
                let mut rhs = 0u64;
                for d in fn_.divisors() {
                    let q = fn_.quotient(&d).unwrap();
                    let sigma0 = q.divisors().len() as u64;
                    rhs += sigma0 * dim_new(k, &d).unwrap();
                }
                assert_eq!(lhs, rhs, "k={k} N={n}");
            }
        }
    }

    #[test]
    fn monotone_under_divisibility() {
        for k in [4u64, 6, 8, 10] {
            for n in 1..=200u64 {
                let big = fi(n);
                for d in big.divisors() {
                    assert!(
                        dim_cusp(k, &d).unwrap() <= dim_cusp(k, &big).unwrap(),
                        "k={k} {} | {n}",
                        d.value()
                    );
                }
            }
        }
    }
}
