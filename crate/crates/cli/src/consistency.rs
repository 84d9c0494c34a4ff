//! The fixture-backed consistency suite: identity sweeps over desk-scale
//! ranges, fanned out to a worker pool, with output order fixed by input
//! order.

use std::collections::BTreeSet;
use std::collections::HashMap;

use newform_census::arith::{psi_new, rat, FactoredInt};
use newform_census::atkin_lehner::trace_wt_m1;
use newform_census::census::{
    decomposition_sum, dim_prescribed, enumerate_prescriptions, formal_degree, trace_sum,
};
use newform_census::class_number::h_minus;
use newform_census::dims::{dim_cusp, dim_new};
use newform_census::local_oracle::{build_quotient, summarize_both_classes};
use newform_census::Result;
use rayon::prelude::*;

/// (weight, auxiliary level M, conductor parameters per prime of T).
type SweepCase = (u64, u64, Vec<(u64, u32)>);
/// (dim, dim_orbit, eps_product, main_term) per orbit class.
type ClassData = Vec<(u64, u64, i8, newform_census::arith::Rat)>;

pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone)]
pub struct SweepRanges {
    pub weights: Vec<u64>,
    pub m_values: Vec<u64>,
    pub nmax: u64,
}

impl SweepRanges {
    pub fn standard(weights: Vec<u64>, nmax: u64) -> Self {
        let mut m: BTreeSet<u64> = [1u64, 2, 3, 4, 8, 9, 16, 32].into();
        for l in [3u64, 7, 11] {
            for a in 0..=5u32 {
                m.insert(l << a);
            }
        }
        SweepRanges {
            weights,
            m_values: m.into_iter().collect(),
            nmax,
        }
    }

    pub fn quick() -> Self {
        SweepRanges {
            weights: vec![4],
            m_values: vec![1, 2, 3, 9],
            nmax: 150,
        }
    }
}

fn sweep_cases(r: &SweepRanges) -> Vec<SweepCase> {
    let t_r: &[&[(u64, u32)]] = &[
        &[(5, 1)],
        &[(5, 2)],
        &[(7, 1)],
        &[(7, 2)],
        &[(11, 1)],
        &[(11, 2)],
        &[(13, 1)],
        &[(5, 1), (7, 1)],
    ];
    let mut cases = Vec::new();
    for &k in &r.weights {
        for c in t_r {
            cases.push((k, 1, c.to_vec()));
        }
        for &(p, rr) in &[
            (5u64, 1u32),
            (5, 2),
            (7, 1),
            (7, 2),
            (11, 1),
            (11, 2),
            (13, 1),
        ] {
            for &m in &r.m_values {
                if m == 1 || m % p == 0 {
                    continue;
                }
                cases.push((k, m, vec![(p, rr)]));
            }
        }
    }
    cases
}

pub fn run_all(ranges: &SweepRanges, fixtures_text: &str) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    // Fixture replay.
    let fixtures = crate::fixtures::parse_fixtures(fixtures_text)?;
    let mut failures = Vec::new();
    for f in &fixtures {
        failures.extend(crate::fixtures::replay(f)?);
    }
    out.push(CheckResult {
        name: "fixture-replay",
        cases: fixtures.len(),
        failures,
    });

    let cases = sweep_cases(ranges);
    let n_cases = cases.len();

    // Decomposition: orbit dims sum to the newspace dimension.
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(k, m, cond)| {
            let m = FactoredInt::factor(*m).ok()?;
            match decomposition_sum(*k, &m, cond, None) {
                Ok((sum, expect)) if sum == expect => None,
                Ok((sum, expect)) => {
                    Some(format!("k={k} M={} {cond:?}: {sum} != {expect}", m.value()))
                }
                Err(e) => Some(format!("k={k} M={} {cond:?}: {e}", m.value())),
            }
        })
        .collect();
    out.push(CheckResult {
        name: "orbit-decomposition",
        cases: n_cases,
        failures,
    });

    // Atkin-Lehner trace identity.
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(k, m, cond)| {
            let m = FactoredInt::factor(*m).ok()?;
            match trace_sum(*k, &m, cond, None) {
                Ok((sum, expect)) if sum == expect => None,
                Ok((sum, expect)) => {
                    Some(format!("k={k} M={} {cond:?}: {sum} != {expect}", m.value()))
                }
                Err(e) => Some(format!("k={k} M={} {cond:?}: {e}", m.value())),
            }
        })
        .collect();
    out.push(CheckResult {
        name: "atkin-lehner-trace",
        cases: n_cases,
        failures,
    });

    // Divisibility, three-value shape, and main-term factorization share
    // the per-class breakdowns.
    let per_class: Vec<(String, Result<ClassData>)> = cases
        .par_iter()
        .map(|(k, m, cond)| {
            let label = format!("k={k} M={m} {cond:?}");
            let m = FactoredInt::factor(*m).expect("valid M");
            let data = enumerate_prescriptions(*k, &m, cond).and_then(|ps| {
                ps.iter()
                    .map(|p| {
                        dim_prescribed(p, None)
                            .map(|b| (b.dim, b.dim_orbit, b.eps_product, b.main_term))
                    })
                    .collect()
            });
            (label, data)
        })
        .collect();

    let mut div_failures = Vec::new();
    let mut shape_failures = Vec::new();
    let mut main_failures = Vec::new();
    for ((k, m, cond), (label, data)) in cases.iter().zip(&per_class) {
        let data = match data {
            Ok(d) => d,
            Err(e) => {
                div_failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let mult: u64 = cond
            .iter()
            .map(|&(p, r)| (p - 1) / 2 * p.pow(r - 1))
            .product();
        for (_, orbit, _, _) in data {
            if orbit % mult != 0 {
                div_failures.push(format!("{label}: {orbit} not divisible by {mult}"));
            }
        }
        let mut dims: Vec<u64> = data.iter().map(|d| d.0).collect();
        dims.sort_unstable();
        dims.dedup();
        let arithmetic =
            dims.len() <= 2 || (dims.len() == 3 && dims[2] - dims[1] == dims[1] - dims[0]);
        if !arithmetic || dims.len() > 3 {
            shape_failures.push(format!("{label}: dims {dims:?}"));
        }
        let mf = FactoredInt::factor(*m).expect("valid M");
        let mut expect = rat(*k as i64 - 1, 12) * psi_new(&mf);
        for &(p, r) in cond {
            expect *= formal_degree(p, 2 * r + 1).expect("valid conductor");
        }
        for (_, _, _, main) in data {
            if *main != expect {
                main_failures.push(format!("{label}: main {main} != {expect}"));
            }
        }
    }
    out.push(CheckResult {
        name: "orbit-divisibility",
        cases: n_cases,
        failures: div_failures,
    });
    out.push(CheckResult {
        name: "three-value-shape",
        cases: n_cases,
        failures: shape_failures,
    });
    out.push(CheckResult {
        name: "formal-degree-main-term",
        cases: n_cases,
        failures: main_failures,
    });

    // Conductor-exponent scaling of the trace.
    let mut failures = Vec::new();
    let mut scaling_cases = 0;
    for p in [5u64, 7, 11] {
        for r in [2u32, 3] {
            scaling_cases += 1;
            let hi = trace_wt_m1(4, p, &[(p, r)].into())?;
            let lo = trace_wt_m1(4, p, &[(p, 1)].into())?;
            if hi != lo * (p as i64).pow(r - 1) {
                failures.push(format!("p={p} r={r}: {hi} != {lo} * p^(r-1)"));
            }
        }
    }
    out.push(CheckResult {
        name: "conductor-scaling",
        cases: scaling_cases,
        failures,
    });

    // Local oracle spot checks.
    let mut failures = Vec::new();
    for (p, r) in [
        (5u64, 1u32),
        (5, 2),
        (7, 1),
        (11, 1),
        (13, 1),
        (13, 2),
        (3, 1),
    ] {
        let both = summarize_both_classes(p, r)?;
        let views: Vec<_> = both
            .values()
            .map(|s| (s.order, s.cyclic, s.primitive_characters))
            .collect();
        if views[0] != views[1] {
            failures.push(format!("p={p} r={r}: unit classes disagree"));
        }
        for s in both.values() {
            if s.order != p.pow(r) || !s.cyclic {
                failures.push(format!(
                    "p={p} r={r} t={}: order {} cyclic {}",
                    s.t, s.order, s.cyclic
                ));
            }
            if p >= 5 && s.primitive_characters != Some((p - 1) * p.pow(r - 1)) {
                failures.push(format!(
                    "p={p} r={r} t={}: primitive count {:?}",
                    s.t, s.primitive_characters
                ));
            }
        }
    }
    let g = build_quotient(3, 2, 2)?;
    if g.order() != 9 || g.is_cyclic() {
        failures.push("p=3 r=2 t=2: expected non-cyclic of order 9".into());
    }
    let g = build_quotient(3, 2, 1)?;
    if g.order() != 9 || !g.is_cyclic() {
        failures.push("p=3 r=2 t=1: expected cyclic of order 9".into());
    }
    out.push(CheckResult {
        name: "local-oracle",
        cases: 9,
        failures,
    });

    // Class numbers.
    let mut failures = Vec::new();
    for (t, expect) in [(11u64, 1u64), (5, 2), (23, 3)] {
        let h = h_minus(t)?;
        if h != expect {
            failures.push(format!("h(-{t}) = {h}, expected {expect}"));
        }
    }
    let mut class_cases = 3;
    for p in (5..500u64).filter(|&p| newform_census::arith::is_prime(p)) {
        class_cases += 1;
        let h = h_minus(p)?;
        if h >= 2 * p {
            failures.push(format!("h(-{p}) = {h} >= 2p"));
        }
    }
    out.push(CheckResult {
        name: "class-numbers",
        cases: class_cases,
        failures,
    });

    // Classical old/new round trip up to nmax.
    let failures: Vec<String> = ranges
        .weights
        .par_iter()
        .flat_map(|&k| {
            let mut memo: HashMap<u64, u64> = HashMap::new();
            let mut fails = Vec::new();
            for n in 1..=ranges.nmax {
                let fn_ = FactoredInt::factor(n).expect("positive");
                let lhs = match dim_cusp(k, &fn_) {
                    Ok(v) => v,
                    Err(e) => {
                        fails.push(format!("k={k} N={n}: {e}"));
                        continue;
                    }
                };
                let mut rhs = 0u64;
                for d in fn_.divisors() {
                    let q = fn_.quotient(&d).expect("divisor");
                    let sigma0 = q.divisors().len() as u64;
                    let nd = *memo
                        .entry(d.value())
                        .or_insert_with(|| dim_new(k, &d).expect("valid"));
                    rhs += sigma0 * nd;
                }
                if lhs != rhs {
                    fails.push(format!("k={k} N={n}: {lhs} != {rhs}"));
                }
            }
            fails
        })
        .collect();
    out.push(CheckResult {
        name: "classical-dims-roundtrip",
        cases: ranges.weights.len() * ranges.nmax as usize,
        failures,
    });

    Ok(out)
}
