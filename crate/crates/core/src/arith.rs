//! Factored integers, quadratic residue symbols, and the multiplicative
//! functions used by the dimension and trace formulas.
//!
//! All functions here are multiplicative and are evaluated from an explicit
//! prime factorization, so coprime multiplicativity holds by construction;
//! the tests check it anyway by random sampling.  Inputs are desk scale
//! (levels up to ~10^12), so factorization is deterministic trial division.
//! Downstream dimension arithmetic is done in [`Rat`] (arbitrary-precision
//! rationals, always in lowest terms with positive denominator).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Exact rational number; numerator and denominator are arbitrary-precision,
/// stored in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Convenience constructor for `n / d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Extract an exact `i64` from a rational that must be integral.
pub fn rat_to_i64(x: &Rat, what: &str) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::internal(format!("{what} is not an integer: {x}")));
    }
    x.numer()
        .to_i64()
        .ok_or_else(|| Error::internal(format!("{what} exceeds i64 range: {x}")))
}

/// Extract an exact nonnegative `u64` from a rational.
pub fn rat_to_u64(x: &Rat, what: &str) -> Result<u64> {
    if !x.is_integer() {
        return Err(Error::internal(format!("{what} is not an integer: {x}")));
    }
    if x.numer().is_negative() {
        return Err(Error::internal(format!("{what} is negative: {x}")));
    }
    x.numer()
        .to_u64()
        .ok_or_else(|| Error::internal(format!("{what} exceeds u64 range: {x}")))
}

/// A positive integer together with its prime factorization.
///
/// Invariants: the primes are strictly increasing, every exponent is at
/// least 1, and the product of `p^e` equals `value`.  `1` is represented by
/// the empty factor list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInt {
    /// Factor `n` by trial division.  Rejects `n = 0`.
    pub fn factor(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cannot factor 0; inputs must be positive"));
        }
        let mut m = n;
        let mut factors = Vec::new();
        let mut d: u64 = 2;
        while d * d <= m {
            if m % d == 0 {
                let mut e = 0u32;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                factors.push((d, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(FactoredInt { value: n, factors })
    }

    /// Build from an explicit factorization; validates the invariants.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut value: u64 = 1;
        let mut last = 1u64;
        for &(p, e) in &factors {
            if p <= last {
                return Err(Error::invalid("primes must be strictly increasing"));
            }
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            if e == 0 {
                return Err(Error::invalid("exponents must be at least 1"));
            }
            last = p;
            for _ in 0..e {
                value = value
                    .checked_mul(p)
                    .ok_or_else(|| Error::invalid("value overflows u64"))?;
            }
        }
        Ok(FactoredInt { value, factors })
    }

    pub fn one() -> Self {
        FactoredInt {
            value: 1,
            factors: Vec::new(),
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn is_odd(&self) -> bool {
        self.value % 2 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_coprime_to(&self, other: &FactoredInt) -> bool {
        self.factors
            .iter()
            .all(|&(p, _)| other.factors.iter().all(|&(q, _)| p != q))
    }

    /// 2-adic valuation of the value.
    pub fn v2(&self) -> u32 {
        self.factors
            .iter()
            .find(|&&(p, _)| p == 2)
            .map_or(0, |&(_, e)| e)
    }

    /// The odd part (value with all factors of 2 removed).
    pub fn odd_part(&self) -> FactoredInt {
        let factors: Vec<_> = self
            .factors
            .iter()
            .copied()
            .filter(|&(p, _)| p != 2)
            .collect();
        let value = factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1);
        FactoredInt { value, factors }
    }

    /// Product with a coprime factored integer.
    pub fn mul_coprime(&self, other: &FactoredInt) -> Result<FactoredInt> {
        if !self.is_coprime_to(other) {
            return Err(Error::invalid("factors are not coprime"));
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        factors.sort_unstable();
        FactoredInt::from_factors(factors)
    }

    /// All divisors, each with its factorization, in increasing order.
    pub fn divisors(&self) -> Vec<FactoredInt> {
        let mut divs = vec![FactoredInt::one()];
        for &(p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut pk: u64 = 1;
                for a in 0..=e {
                    let mut factors = d.factors.clone();
                    if a > 0 {
                        factors.push((p, a));
                    }
                    next.push(FactoredInt {
                        value: d.value * pk,
                        factors,
                    });
                    if a < e {
                        pk *= p;
                    }
                }
            }
            divs = next;
        }
        divs.sort_by_key(|d| d.value);
        divs
    }

    /// The complementary divisor `self / d`; `d` must divide `self`.
    pub fn quotient(&self, d: &FactoredInt) -> Result<FactoredInt> {
        let mut factors = Vec::new();
        for &(p, e) in &self.factors {
            let ed = d
                .factors
                .iter()
                .find(|&&(q, _)| q == p)
                .map_or(0, |&(_, a)| a);
            if ed > e {
                return Err(Error::invalid("not a divisor"));
            }
            if e - ed > 0 {
                factors.push((p, e - ed));
            }
        }
        if d.factors
            .iter()
            .any(|&(q, _)| !self.factors.iter().any(|&(p, _)| p == q))
        {
            return Err(Error::invalid("not a divisor"));
        }
        let value = self.value / d.value;
        Ok(FactoredInt { value, factors })
    }
}

impl std::fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic primality test by trial division (inputs are desk scale).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Legendre symbol `(a / p)` for an odd prime `p`, by Euler's criterion:
/// `(a/p) = a^((p-1)/2) mod p`.  Returns 0 exactly when `p | a`.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!(
            "Legendre symbol requires an odd prime modulus, got {p}"
        )));
    }
    let a_mod = a.rem_euclid(p as i64) as u64;
    if a_mod == 0 {
        return Ok(0);
    }
    let r = mod_pow(a_mod, (p - 1) / 2, p);
    Ok(if r == 1 { 1 } else { -1 })
}

/// Kronecker symbol `(d / p)` at a prime `p`, for fundamental `d`.
/// Only the cases needed by the elliptic-point counts (`d = -4, -3`) and
/// odd `p` are exercised; at `p = 2` it is the usual mod-8 rule.
pub fn kronecker_at_prime(d: i64, p: u64) -> i8 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0, // d even
        };
    }
    legendre(d, p).expect("odd prime")
}

/// Index `[SL_2(Z) : Gamma_0(N)]`; multiplicative with
/// `psi(p^a) = p^a + p^(a-1)`.
pub fn psi_index(n: &FactoredInt) -> u64 {
    let mut acc: u128 = 1;
    for &(p, e) in n.factors() {
        let pa = (p as u128).pow(e);
        acc *= pa + pa / p as u128;
    }
    u64::try_from(acc).expect("psi(N) fits in u64 at desk scale")
}

/// The newspace density function: multiplicative with
///
/// ```text
/// psi_new(p)   = p - 1
/// psi_new(p^2) = p^2 - p - 1
/// psi_new(p^a) = p^(a-3) (p - 1)(p^2 - 1)    for a >= 3
/// ```
///
/// and `psi_new(1) = 1` (empty product).  Always integer-valued, returned
/// as a [`Rat`] since it enters rational main-term arithmetic.
pub fn psi_new(m: &FactoredInt) -> Rat {
    let mut acc = BigInt::one();
    for &(p, e) in m.factors() {
        let p = BigInt::from(p);
        let local = match e {
            1 => &p - 1,
            2 => &p * &p - &p - 1,
            _ => p.pow(e - 3) * (&p - 1) * (&p * &p - 1),
        };
        acc *= local;
    }
    Rat::from_integer(acc)
}

/// The multiplicative function `kappa_{-p}`, defined on odd prime powers by
///
/// ```text
/// kappa_{-p}(l)   = (-p / l) - 1
/// kappa_{-p}(l^2) = -(-p / l)
/// kappa_{-p}(l^m) = 0            for m >= 3
/// ```
///
/// with `kappa_{-p}(1) = 1`.  Rejects even arguments and `p = 2`.
pub fn kappa(p: u64, mprime: &FactoredInt) -> Result<i64> {
    if p == 2 {
        return Err(Error::invalid("kappa_{-p} requires odd prime p"));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("kappa_{{-p}}: {p} is not prime")));
    }
    if !mprime.is_odd() {
        return Err(Error::invalid(
            "kappa_{-p} is only defined on odd arguments",
        ));
    }
    let mut acc: i64 = 1;
    for &(l, m) in mprime.factors() {
        let sym = legendre(-(p as i64), l)? as i64;
        acc *= match m {
            1 => sym - 1,
            2 => -sym,
            _ => 0,
        };
    }
    Ok(acc)
}

/// Newspace Moebius-type convolution kernel: multiplicative with
/// `p -> -2`, `p^2 -> 1`, `p^m -> 0` for `m >= 3`.
pub fn newspace_kernel(d: &FactoredInt) -> i64 {
    let mut acc: i64 = 1;
    for &(_, e) in d.factors() {
        acc *= match e {
            1 => -2,
            2 => 1,
            _ => 0,
        };
    }
    acc
}

/// Euler's totient.
pub fn euler_phi(n: &FactoredInt) -> u64 {
    let mut acc: u64 = 1;
    for &(p, e) in n.factors() {
        acc *= (p - 1) * p.pow(e - 1);
    }
    acc
}
