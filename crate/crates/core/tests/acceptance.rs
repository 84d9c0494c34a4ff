//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them).  Every tolerance is exact; all
//! expected values are either pinned small integers or identities checked
//! against an independently computed side.

use std::collections::BTreeSet;

use newform_census::arith::{psi_new, rat, FactoredInt, Rat};
use newform_census::atkin_lehner::trace_wt_m1;
use newform_census::census::{
    count_supercuspidals, dim_orbit_class, dim_prescribed, enumerate_prescriptions, formal_degree,
    DimBreakdown,
};
use newform_census::class_number::{class_number, h_minus, Discriminant};
use newform_census::dims::dim_new;
use newform_census::local_oracle::{build_quotient, summarize_both_classes};

fn fi(n: u64) -> FactoredInt {
    FactoredInt::factor(n).unwrap()
}

/// One sweep point: a weight, an auxiliary level, conductor parameters,
/// and everything computed from them.
struct SweepPoint {
    k: u64,
    m: u64,
    conductors: Vec<(u64, u32)>,
    breakdowns: Vec<DimBreakdown>,
    dim_new: u64,
    trace: i64,
}

fn m_values() -> Vec<u64> {
    let mut set: BTreeSet<u64> = [1u64, 2, 3, 4, 8, 9, 16, 32].into();
    for l in [3u64, 7, 11] {
        for a in 0..=5u32 {
            set.insert(l << a);
        }
    }
    set.into_iter().collect()
}

fn sweep_points() -> Vec<SweepPoint> {
    let t_r_m1: &[&[(u64, u32)]] = &[
        &[(5, 1)],
        &[(5, 2)],
        &[(7, 1)],
        &[(7, 2)],
        &[(11, 1)],
        &[(11, 2)],
        &[(13, 1)],
        &[(5, 1), (7, 1)], // T = 35
    ];
    let mut points = Vec::new();
    for k in [4u64, 6, 8, 10] {
        for conductors in t_r_m1 {
            points.push(build_point(k, 1, conductors));
        }
        // Prime T with nontrivial M.
        for &(p, r) in &[
            (5u64, 1u32),
            (5, 2),
            (7, 1),
            (7, 2),
            (11, 1),
            (11, 2),
            (13, 1),
        ] {
            for m in m_values() {
                if m == 1 || m % p == 0 {
                    continue;
                }
                points.push(build_point(k, m, &[(p, r)]));
            }
        }
    }
    points
}

fn build_point(k: u64, m: u64, conductors: &[(u64, u32)]) -> SweepPoint {
    let m_f = fi(m);
    let prescriptions = enumerate_prescriptions(k, &m_f, conductors).unwrap();
    let breakdowns: Vec<DimBreakdown> = prescriptions
        .iter()
        .map(|p| dim_prescribed(p, None).unwrap())
        .collect();
    let level = prescriptions[0].level().unwrap();
    SweepPoint {
        k,
        m,
        conductors: conductors.to_vec(),
        dim_new: dim_new(k, &level).unwrap(),
        trace: breakdowns[0].trace_used,
        breakdowns,
    }
}

#[test]
fn c01_level_1331_reproduction() {
    let mut dims: Vec<u64> = Vec::new();
    for sigma in [1i8, -1] {
        for eps in [1i8, -1] {
            dims.push(dim_orbit_class(4, 11, 1, sigma, eps).unwrap());
        }
    }
    dims.sort_unstable();
    assert_eq!(dims, vec![65, 75, 75, 85]);
    assert_eq!(dims.iter().sum::<u64>(), 300);
    assert_eq!(dim_new(4, &fi(1331)).unwrap(), 300);
    println!("PASS 01 level-1331 reproduction: orbit dims {{65,75,75,85}}, sum 300");
}

#[test]
fn c02_level_3125_reproduction() {
    let mut dims: Vec<u64> = Vec::new();
    for sigma in [1i8, -1] {
        for eps in [1i8, -1] {
            dims.push(dim_orbit_class(4, 5, 2, sigma, eps).unwrap());
        }
    }
    dims.sort_unstable();
    assert_eq!(dims, vec![140, 150, 150, 160]);
    assert_eq!(dims.iter().sum::<u64>(), 600);
    assert_eq!(dim_new(4, &fi(3125)).unwrap(), 600);
    println!("PASS 02 level-3125 reproduction: orbit dims {{140,150,150,160}}, sum 600");
}

#[test]
fn c03_trace_identity_sweep() {
    let points = sweep_points();
    for pt in &points {
        let signed: i64 = pt
            .breakdowns
            .iter()
            .map(|b| b.eps_product as i64 * b.dim_orbit as i64)
            .sum();
        assert_eq!(
            signed, pt.trace,
            "trace identity fails at k={} M={} conductors={:?}",
            pt.k, pt.m, pt.conductors
        );
    }
    println!("PASS 03 trace identity: {} sweep points", points.len());
}

#[test]
fn c04_decomposition_identity_sweep() {
    let points = sweep_points();
    for pt in &points {
        let total: u64 = pt.breakdowns.iter().map(|b| b.dim_orbit).sum();
        assert_eq!(
            total, pt.dim_new,
            "decomposition fails at k={} M={} conductors={:?}",
            pt.k, pt.m, pt.conductors
        );
    }
    println!(
        "PASS 04 decomposition identity: {} sweep points",
        points.len()
    );
}

#[test]
fn c05_orbit_dimension_divisibility() {
    let points = sweep_points();
    let mut checked = 0u64;
    for pt in &points {
        let mult: u64 = pt
            .conductors
            .iter()
            .map(|&(p, r)| (p - 1) / 2 * p.pow(r - 1))
            .product();
        for b in &pt.breakdowns {
            assert_eq!(
                b.dim_orbit % mult,
                0,
                "divisibility fails at k={} M={} conductors={:?}",
                pt.k,
                pt.m,
                pt.conductors
            );
            checked += 1;
        }
    }
    println!("PASS 05 divisibility of orbit dimensions: {checked} values");
}

#[test]
fn c06_formal_degree_main_term() {
    let points = sweep_points();
    for pt in &points {
        let mut expect: Rat = rat(pt.k as i64 - 1, 12) * psi_new(&fi(pt.m));
        for &(p, r) in &pt.conductors {
            expect *= formal_degree(p, 2 * r + 1).unwrap();
        }
        for b in &pt.breakdowns {
            assert_eq!(
                b.main_term, expect,
                "main term mismatch at k={} M={} conductors={:?}",
                pt.k, pt.m, pt.conductors
            );
        }
    }
    println!("PASS 06 main term equals weight factor times formal degrees");
}

#[test]
fn c07_conductor_scaling_regression() {
    for p in [5u64, 7, 11] {
        for r in [2u32, 3] {
            let hi = trace_wt_m1(4, p, &[(p, r)].into()).unwrap();
            let lo = trace_wt_m1(4, p, &[(p, 1)].into()).unwrap();
            assert_eq!(
                hi,
                lo * (p as i64).pow(r - 1),
                "trace ratio must be p^(r-1) at p={p} r={r}"
            );
        }
    }
    println!("PASS 07 trace scales by p^(r-1) in the conductor exponent");
}

#[test]
fn c08_local_oracle() {
    // Cyclic cases with orders and primitive-character counts, for both
    // unit classes.
    for (p, r) in [(5u64, 1u32), (5, 2), (7, 1), (11, 1), (13, 2)] {
        let both = summarize_both_classes(p, r).unwrap();
        let views: Vec<_> = both
            .values()
            .map(|s| (s.order, s.cyclic, s.primitive_characters))
            .collect();
        assert_eq!(views[0], views[1], "unit-class dependence at p={p} r={r}");
        for s in both.values() {
            assert_eq!(s.order, p.pow(r));
            assert!(s.cyclic);
            assert_eq!(s.primitive_characters, Some((p - 1) * p.pow(r - 1)));
            assert_eq!(s.one_plus_pi_order, s.order, "1 + pi generates");
            assert_eq!(
                2 * s.primitive_characters.unwrap(),
                count_supercuspidals(p, r).unwrap()
            );
        }
    }

    // p = 3, r = 2: order 9 for both ramified extensions.  Enumeration
    // shows the non-cyclic quotient occurs for the non-residue class
    // (E = Q_3(sqrt 6)), while the residue class (E = Q_3(sqrt 3)) gives a
    // cyclic group of order 9; cyclicity is NOT independent of the unit
    // class at p = 3.
    let g_qnr = build_quotient(3, 2, 2).unwrap();
    assert_eq!(g_qnr.order(), 9);
    assert!(!g_qnr.is_cyclic(), "Q_3(sqrt 6): order 9, not cyclic");
    let g_qr = build_quotient(3, 2, 1).unwrap();
    assert_eq!(g_qr.order(), 9);
    assert!(
        g_qr.is_cyclic(),
        "Q_3(sqrt 3): enumeration gives cyclic Z/9"
    );

    println!(
        "PASS 08 local oracle: cyclic orders p^r with counts (p-1)p^(r-1) for p >= 5 \
         (both unit classes); p=3,r=2 has order 9 with non-cyclicity at the \
         non-residue class only"
    );
}

#[test]
fn c09_class_numbers() {
    assert_eq!(h_minus(11).unwrap(), 1);
    assert_eq!(h_minus(5).unwrap(), 2);
    assert_eq!(class_number(Discriminant::new(-23).unwrap()), 3);
    for p in (5..500u64).filter(|&p| newform_census::arith::is_prime(p)) {
        let h = h_minus(p).unwrap();
        assert!(h < 2 * p, "h(-{p}) = {h} >= 2p");
    }
    println!("PASS 09 class numbers: h(-11)=1, h(Q(sqrt -5))=2, h(-23)=3, h(-p) < 2p for p < 500");
}

#[test]
fn c10_three_value_property() {
    let points = sweep_points();
    for pt in &points {
        let mut dims: Vec<u64> = pt.breakdowns.iter().map(|b| b.dim).collect();
        dims.sort_unstable();
        dims.dedup();
        assert!(
            dims.len() <= 3,
            "more than three per-representation dimensions at k={} M={} conductors={:?}: {dims:?}",
            pt.k,
            pt.m,
            pt.conductors
        );
        if dims.len() == 3 {
            assert_eq!(
                dims[2] - dims[1],
                dims[1] - dims[0],
                "not of the shape I-E, I, I+E at k={} M={} conductors={:?}",
                pt.k,
                pt.m,
                pt.conductors
            );
        }
    }
    println!(
        "PASS 10 three-value property over {} sweep points",
        points.len()
    );
}
