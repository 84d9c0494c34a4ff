//! Brute-force verification of the local unit-group structure by explicit
//! arithmetic in finite quotients of the ring of integers of a ramified
//! quadratic extension `E = Q_p(sqrt(t p))`.
//!
//! Everything here is deliberately enumerative: groups are built by listing
//! ring elements and partitioning them into cosets, so the structural
//! claims consumed by [`crate::census`] (orders, cyclicity, primitive
//! character counts, index computations) are checked against nothing but
//! finite arithmetic.

use std::collections::BTreeMap;

use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Hard cap on the number of ring units any single enumeration may touch.
pub const ENUMERATION_GUARD: u64 = 1_000_000;

/// The quotient `O_E / P^depth` for `E = Q_p(sqrt(t p))`, with `P` the
/// maximal ideal of `O_E`.
///
/// Since `pi = sqrt(t p)` uniformizes `E` and `O_E = Z_p + Z_p pi`, the
/// ideal `P^l` is `p^ceil(l/2) Z_p + p^floor(l/2) pi Z_p`, so elements of
/// the quotient are pairs `(a, b)` with `a` mod `p^ceil(depth/2)` and `b`
/// mod `p^floor(depth/2)`, representing `a + b pi`.  Multiplication is
///
/// ```text
/// (a + b pi)(c + d pi) = (a c + t p b d) + (a d + b c) pi.
/// ```
///
/// The carry `t p b d` is well defined: it only needs `b d` modulo
/// `p^(ceil(depth/2) - 1)`, and `floor(depth/2) >= ceil(depth/2) - 1`.
/// Likewise `a d + b c` needs `a, c` only mod `p^floor(depth/2)`, which the
/// stored residues determine.  An element is a unit iff `p` does not
/// divide `a`.
#[derive(Debug, Clone)]
pub struct RamifiedQuotientRing {
    p: u64,
    t: u64,
    depth: u32,
    mod_a: u64,
    mod_b: u64,
}

/// Ring element `a + b pi` with `0 <= a < mod_a`, `0 <= b < mod_b`.
pub type RingElt = (u64, u64);

impl RamifiedQuotientRing {
    pub fn new(p: u64, t: u64, depth: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::invalid(format!("p must be an odd prime, got {p}")));
        }
        if t % p == 0 {
            return Err(Error::invalid(format!(
                "t = {t} must be a unit mod p = {p}"
            )));
        }
        if depth < 1 {
            return Err(Error::invalid("depth must be at least 1"));
        }
        let half_up = depth.div_ceil(2);
        let half_down = depth / 2;
        let mod_a = p
            .checked_pow(half_up)
            .ok_or_else(|| Error::invalid("modulus overflows u64"))?;
        let mod_b = p
            .checked_pow(half_down)
            .ok_or_else(|| Error::invalid("modulus overflows u64"))?;
        let units = (mod_a - mod_a / p) as u128 * mod_b as u128;
        if units > ENUMERATION_GUARD as u128 {
            return Err(Error::SizeGuard {
                size: units as u64,
                guard: ENUMERATION_GUARD,
            });
        }
        Ok(RamifiedQuotientRing {
            p,
            t: t % mod_a,
            depth,
            mod_a,
            mod_b,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn one(&self) -> RingElt {
        (1 % self.mod_a, 0)
    }

    pub fn is_unit(&self, x: RingElt) -> bool {
        x.0 % self.p != 0
    }

    pub fn unit_count(&self) -> u64 {
        (self.mod_a - self.mod_a / self.p) * self.mod_b
    }

    pub fn mul(&self, x: RingElt, y: RingElt) -> RingElt {
        let (a, b) = (x.0 as u128, x.1 as u128);
        let (c, d) = (y.0 as u128, y.1 as u128);
        let tp = self.t as u128 * self.p as u128;
        let aa =
            (a * c + tp % self.mod_a as u128 * (b * d % self.mod_a as u128)) % self.mod_a as u128;
        let bb = (a * d + b * c) % self.mod_b as u128;
        (aa as u64, bb as u64)
    }

    pub fn pow(&self, x: RingElt, mut e: u64) -> RingElt {
        let mut acc = self.one();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All units `(a, b)`, `a` coprime to `p`.
    pub fn units(&self) -> impl Iterator<Item = RingElt> + '_ {
        (0..self.mod_a)
            .filter(move |a| a % self.p != 0)
            .flat_map(move |a| (0..self.mod_b).map(move |b| (a, b)))
    }

    fn flat_index(&self, x: RingElt) -> usize {
        (x.0 * self.mod_b + x.1) as usize
    }
}

/// Cosets of the scalar subgroup (the image of `Z_p^x`) inside the unit
/// group of a [`RamifiedQuotientRing`]; i.e. the group
/// `O_E^x / Z_p^x U_E^depth` with explicit representatives.
#[derive(Debug, Clone)]
pub struct QuotientGroup {
    ring: RamifiedQuotientRing,
    reps: Vec<RingElt>,
    coset_of: Vec<u32>,
    identity: u32,
}

const UNASSIGNED: u32 = u32::MAX;

fn scalar_cosets(ring: RamifiedQuotientRing) -> QuotientGroup {
    let scalars: Vec<u64> = (1..ring.mod_a).filter(|s| s % ring.p != 0).collect();
    let mut coset_of = vec![UNASSIGNED; (ring.mod_a * ring.mod_b) as usize];
    let mut reps: Vec<RingElt> = Vec::new();
    for x in ring.units() {
        if coset_of[ring.flat_index(x)] != UNASSIGNED {
            continue;
        }
        let id = reps.len() as u32;
        reps.push(x);
        for &s in &scalars {
            let y = (s * x.0 % ring.mod_a, s * x.1 % ring.mod_b);
            coset_of[ring.flat_index(y)] = id;
        }
    }
    let identity = coset_of[ring.flat_index(ring.one())];
    QuotientGroup {
        ring,
        reps,
        coset_of,
        identity,
    }
}

impl QuotientGroup {
    pub fn order(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn p(&self) -> u64 {
        self.ring.p
    }

    fn coset(&self, x: RingElt) -> u32 {
        self.coset_of[self.ring.flat_index(x)]
    }

    /// Order of the coset of `x` in the quotient; always a power of `p`
    /// here (the quotient is a `p`-group), found by repeated `p`-th powers.
    pub fn element_order(&self, x: RingElt) -> u64 {
        let mut y = x;
        let mut ord = 1u64;
        while self.coset(y) != self.identity {
            y = self.ring.pow(y, self.ring.p);
            ord *= self.ring.p;
        }
        ord
    }

    /// True iff some element attains the full group order.
    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        self.reps.iter().any(|&x| self.element_order(x) == n)
    }

    /// Number of characters of the dual group of maximal order, i.e. (for
    /// a cyclic group) the number of elements of full order.  Rejects
    /// non-cyclic groups, where "primitive" needs more data than an order.
    pub fn count_primitive_characters(&self) -> Result<u64> {
        if !self.is_cyclic() {
            return Err(Error::invalid(
                "primitive character count requires a cyclic quotient",
            ));
        }
        let n = self.order();
        Ok(self
            .reps
            .iter()
            .filter(|&&x| self.element_order(x) == n)
            .count() as u64)
    }
}

/// Build `O_E^x / Z_p^x U_E^(2r)` for `E = Q_p(sqrt(t p))` by enumerating
/// the units of `O_E / P^(2r)` and partitioning them into scalar cosets.
/// The order is verified to equal `p^r` as part of construction.
pub fn build_quotient(p: u64, r: u32, t: u64) -> Result<QuotientGroup> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let ring = RamifiedQuotientRing::new(p, t, 2 * r)?;
    let g = scalar_cosets(ring);
    let expected = p.pow(r);
    if g.order() != expected {
        return Err(Error::internal(format!(
            "quotient order {} differs from p^r = {expected}",
            g.order()
        )));
    }
    Ok(g)
}

/// One verified identity in an [`IndexReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCheck {
    pub label: String,
    pub expected: u64,
    pub actual: u64,
}

impl IndexCheck {
    pub fn pass(&self) -> bool {
        self.expected == self.actual
    }
}

/// Result of [`verify_index`]: each line compares an enumerated quantity
/// with its predicted closed form.
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub p: u64,
    pub r: u32,
    pub t: u64,
    pub checks: Vec<IndexCheck>,
}

impl IndexReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(IndexCheck::pass)
    }
}

/// Verify the index bookkeeping behind the character counts at depth `r`:
///
/// * `|O_E^x / Z_p^x U_E^r| = p^s` with `s = floor(r/2)`, by enumeration;
/// * each depth-`r` character therefore has `p^s` unit extensions and
///   `2 p^s` extensions to `E^x` (two choices on a uniformizer);
/// * totalized over the `phi(p^ceil(r/2))` unit classes `t` and the sign
///   choice, this recovers `2 p^(r-1) (p-1)`, the number of supercuspidals
///   of conductor `p^(2r+1)` with fixed central character.
pub fn verify_index(p: u64, r: u32, t: u64) -> Result<IndexReport> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    let ring = RamifiedQuotientRing::new(p, t, r)?;
    let enumerated_units = ring.units().count() as u64;
    let g = scalar_cosets(ring);
    let s = r / 2;
    let s_up = r.div_ceil(2);

    let index = g.order();
    let t_classes = (1..p.pow(s_up)).filter(|x| x % p != 0).count() as u64;

    let checks = vec![
        IndexCheck {
            label: format!("unit count of O_E/P^{r}"),
            expected: (p - 1) * p.pow(r - 1),
            actual: enumerated_units,
        },
        IndexCheck {
            label: format!("index [O_E^x : Z_p^x U_E^{r}]"),
            expected: p.pow(s),
            actual: index,
        },
        IndexCheck {
            label: "extensions to E^x of one depth-r character".into(),
            expected: 2 * p.pow(s),
            actual: 2 * index,
        },
        IndexCheck {
            label: "total supercuspidal count over all unit classes".into(),
            expected: crate::census::count_supercuspidals(p, r)?,
            actual: 2 * index * t_classes,
        },
    ];

    Ok(IndexReport { p, r, t, checks })
}

/// Convenience: the two unit classes mod `p` (a quadratic residue and a
/// non-residue), for running oracle comparisons across both ramified
/// extensions.
pub fn unit_class_representatives(p: u64) -> Result<(u64, u64)> {
    if p == 2 || !is_prime(p) {
        return Err(Error::invalid(format!("p must be an odd prime, got {p}")));
    }
    let qnr = (2..p)
        .find(|&t| crate::arith::legendre(t as i64, p).expect("odd prime") == -1)
        .expect("a non-residue exists for every odd prime");
    Ok((1, qnr))
}

/// Summary of one oracle run, for report rendering.
#[derive(Debug, Clone)]
pub struct OracleSummary {
    pub p: u64,
    pub r: u32,
    pub t: u64,
    pub t_is_residue: bool,
    pub order: u64,
    pub cyclic: bool,
    pub primitive_characters: Option<u64>,
    pub one_plus_pi_order: u64,
}

/// Build the quotient and collect its headline facts.
pub fn summarize(p: u64, r: u32, t: u64) -> Result<OracleSummary> {
    let g = build_quotient(p, r, t)?;
    let cyclic = g.is_cyclic();
    Ok(OracleSummary {
        p,
        r,
        t,
        t_is_residue: crate::arith::legendre(t as i64, p)? == 1,
        order: g.order(),
        cyclic,
        primitive_characters: if cyclic {
            Some(g.count_primitive_characters()?)
        } else {
            None
        },
        one_plus_pi_order: g.element_order((1, 1)),
    })
}

/// Run the oracle for both unit classes of `t` and return the summaries
/// keyed by `t`.
pub fn summarize_both_classes(p: u64, r: u32) -> Result<BTreeMap<u64, OracleSummary>> {
    let (qr, qnr) = unit_class_representatives(p)?;
    let mut out = BTreeMap::new();
    out.insert(qr, summarize(p, r, qr)?);
    out.insert(qnr, summarize(p, r, qnr)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_multiplication_basics() {
        let ring = RamifiedQuotientRing::new(5, 1, 2).unwrap();
        // (1 + pi)^2 = 1 + 5 + 2 pi = 6 + 2 pi = (1, 2) mod (5, 5).
        assert_eq!(ring.mul((1, 1), (1, 1)), (1, 2));
        assert_eq!(ring.pow((1, 1), 2), (1, 2));
        assert!(ring.is_unit((1, 1)));
        assert!(!ring.is_unit((0, 1)));
        assert_eq!(ring.unit_count(), 20);
        assert_eq!(ring.units().count(), 20);
    }

    #[test]
    fn guard_rejects_oversized_enumerations() {
        assert!(matches!(
            build_quotient(101, 3, 1),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn orders_match_p_to_the_r() {
        for (p, r) in [
            (5u64, 1u32),
            (5, 2),
            (3, 1),
            (3, 2),
            (7, 1),
            (7, 2),
            (11, 1),
        ] {
            for t in [
                unit_class_representatives(p).unwrap().0,
                unit_class_representatives(p).unwrap().1,
            ] {
                let g = build_quotient(p, r, t).unwrap();
                assert_eq!(g.order(), p.pow(r), "p={p} r={r} t={t}");
            }
        }
    }

    #[test]
    fn cyclic_for_p_at_least_5() {
        for (p, r) in [
            (5u64, 1u32),
            (5, 2),
            (5, 3),
            (7, 1),
            (7, 2),
            (11, 1),
            (13, 1),
        ] {
            let (qr, qnr) = unit_class_representatives(p).unwrap();
            for t in [qr, qnr] {
                let g = build_quotient(p, r, t).unwrap();
                assert!(g.is_cyclic(), "p={p} r={r} t={t}");
                // 1 + pi generates.
                assert_eq!(g.element_order((1, 1)), g.order(), "p={p} r={r} t={t}");
            }
        }
    }

    // At p = 3 and r >= 2 the two ramified extensions genuinely differ:
    // over Q_3(sqrt 3) the quotient is cyclic of order 9, while over
    // Q_3(sqrt 6) every element kills itself by the cube map, giving the
    // non-cyclic (Z/3)^2.  The independent route below re-derives the
    // group law on normalized representatives 1 + c pi, where
    // c o d = (c + d)/(1 + 3 t c d) mod 9.
    #[test]
    fn p3_r2_cyclicity_depends_on_the_extension() {
        let g1 = build_quotient(3, 2, 1).unwrap();
        assert_eq!(g1.order(), 9);
        assert!(g1.is_cyclic());
        assert_eq!(g1.element_order((1, 1)), 9);

        let g2 = build_quotient(3, 2, 2).unwrap();
        assert_eq!(g2.order(), 9);
        assert!(!g2.is_cyclic());
        for &x in &g2.reps {
            assert!(g2.element_order(x) <= 3);
        }

        // Independent cross-check via normalized representatives.
        for t in [1u64, 2] {
            let inv = |x: u64| (1..9u64).find(|&y| x * y % 9 == 1).unwrap();
            let op = |c: u64, d: u64| (c + d) % 9 * inv((1 + 3 * t * c * d) % 9) % 9;
            let order = |c: u64| {
                let mut acc = c;
                let mut n = 1;
                while acc != 0 {
                    acc = op(acc, c);
                    n += 1;
                }
                n
            };
            let max_order = (0..9u64).map(order).max().unwrap();
            let g = build_quotient(3, 2, t).unwrap();
            assert_eq!(max_order == 9, g.is_cyclic(), "t={t}");
        }
    }

    #[test]
    fn p3_r1_is_cyclic_for_both_classes() {
        for t in [1u64, 2] {
            let g = build_quotient(3, 1, t).unwrap();
            assert_eq!(g.order(), 3);
            assert!(g.is_cyclic());
        }
    }

    #[test]
    fn primitive_character_counts() {
        assert_eq!(
            build_quotient(5, 2, 1)
                .unwrap()
                .count_primitive_characters()
                .unwrap(),
            20
        );
        assert_eq!(
            build_quotient(5, 1, 1)
                .unwrap()
                .count_primitive_characters()
                .unwrap(),
            4
        );
        assert_eq!(
            build_quotient(11, 1, 1)
                .unwrap()
                .count_primitive_characters()
                .unwrap(),
            10
        );
        // Non-cyclic input is rejected.
        assert!(build_quotient(3, 2, 2)
            .unwrap()
            .count_primitive_characters()
            .is_err());
    }

    #[test]
    fn primitive_count_links_to_census() {
        for (p, r) in [(5u64, 1u32), (5, 2), (7, 1), (11, 1), (13, 1)] {
            let got = build_quotient(p, r, 1)
                .unwrap()
                .count_primitive_characters()
                .unwrap();
            assert_eq!(got, (p - 1) * p.pow(r - 1));
            assert_eq!(got, crate::census::count_supercuspidals(p, r).unwrap() / 2);
            assert_eq!(got, 2 * crate::census::orbit_size(p, r).unwrap());
        }
    }

    #[test]
    fn index_reports() {
        for (p, r, expect) in [(5u64, 2u32, 5u64), (5, 3, 5), (7, 4, 49)] {
            let report = verify_index(p, r, 1).unwrap();
            assert!(report.all_pass(), "{report:?}");
            assert_eq!(report.checks[1].actual, expect);
        }
        // Index is independent of the unit class.
        for (p, r) in [(5u64, 2u32), (7, 3), (3, 2), (11, 2)] {
            let (qr, qnr) = unit_class_representatives(p).unwrap();
            let a = verify_index(p, r, qr).unwrap();
            let b = verify_index(p, r, qnr).unwrap();
            assert!(a.all_pass() && b.all_pass());
            assert_eq!(a.checks[1].actual, b.checks[1].actual);
        }
    }

    #[test]
    fn independence_of_unit_class_for_p_at_least_5() {
        for (p, r) in [
            (5u64, 1u32),
            (5, 2),
            (7, 1),
            (7, 2),
            (11, 1),
            (13, 1),
            (13, 2),
        ] {
            let both = summarize_both_classes(p, r).unwrap();
            let views: Vec<_> = both
                .values()
                .map(|s| (s.order, s.cyclic, s.primitive_characters))
                .collect();
            assert_eq!(views[0], views[1], "p={p} r={r}");
        }
    }
}
