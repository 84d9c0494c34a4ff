//! Class numbers of imaginary quadratic fields by exhaustive enumeration of
//! reduced binary quadratic forms.
//!
//! `h(-T)` here always means the class number of the field `Q(sqrt(-T))`,
//! so squarefree `T` is first converted to the fundamental discriminant
//! (`-T` when `T = 3 mod 4`, else `-4T`).  A primitive form `(a, b, c)` of
//! discriminant `D = b^2 - 4ac < 0` is reduced when `|b| <= a <= c`, with
//! `b >= 0` if `|b| = a` or `a = c`; each class contains exactly one reduced
//! form, and every reduced form satisfies `a <= sqrt(|D|/3)`, so the count
//! below is exhaustive.

use crate::arith::FactoredInt;
use crate::error::{Error, Result};

/// A negative quadratic discriminant (`D < 0`, `D = 0 or 1 mod 4`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::invalid(format!(
                "discriminant must be negative, got {d}"
            )));
        }
        if d.rem_euclid(4) > 1 {
            return Err(Error::invalid(format!(
                "discriminant must be 0 or 1 mod 4, got {d}"
            )));
        }
        Ok(Discriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// Discriminant of `Q(sqrt(-T))` for squarefree `T >= 1`.
pub fn field_discriminant(t: u64) -> Result<Discriminant> {
    let f = FactoredInt::factor(t)?;
    if !f.is_squarefree() {
        return Err(Error::invalid(format!("T must be squarefree, got {t}")));
    }
    let t = t as i64;
    Discriminant::new(if t.rem_euclid(4) == 3 { -t } else { -4 * t })
}

/// Number of classes of primitive forms of discriminant `D`, counted by
/// enumerating reduced representatives.
pub fn class_number(d: Discriminant) -> u64 {
    let disc = d.value();
    let bound = isqrt(disc.unsigned_abs() / 3) as i64;
    let mut count = 0u64;
    for a in 1..=bound.max(1) {
        for b in -a..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if gcd3(a.unsigned_abs(), b.unsigned_abs(), c.unsigned_abs()) != 1 {
                continue;
            }
            // One representative per class: drop b < 0 on the boundary.
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            count += 1;
        }
    }
    count
}

/// `h(-T)`: class number of `Q(sqrt(-T))` for squarefree `T`.
pub fn h_minus(t: u64) -> Result<u64> {
    Ok(class_number(field_discriminant(t)?))
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    gcd(gcd(a, b), c)
}
