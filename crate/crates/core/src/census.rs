//! Local-component bookkeeping and the dimension formulas for newform
//! spaces with prescribed ramified supercuspidal components.
//!
//! A ramified supercuspidal of `PGL_2(Q_p)` with conductor `p^(2r+1)` is
//! dihedrally induced from one of the two ramified quadratic extensions
//! `E = Q_p(sqrt(u p))`, and for `p >= 5` its Galois orbit is classified by
//! the pair (unit class of `u`, root number).  A [`LocalSCDatum`] records
//! exactly these invariants: the prime, the conductor parameter `r`, the
//! Legendre class `sigma` of the unit, and the root number `eps`.
//!
//! For a global prescription (weight `k`, auxiliary level `M`, one datum
//! per prime of `T`) the dimension of the prescribed subspace is
//!
//! ```text
//! dim = (k-1)/12 psi_new(M) prod_{p|T} (p^2-1)/2 p^(r_p-1)
//!       + Delta * eps_product * tr(W_T | S_k^new(N)) / prod_{p|T} (p-1) p^(r_p-1)
//! ```
//!
//! where `Delta = 1` exactly when every local extension equals
//! `Q_p(sqrt(-T))`, a condition that reduces to the Legendre-symbol test
//! `sigma_p = (-T/p / p)` at each prime.  The main term is the product of
//! the local formal degrees with the weight and `M` densities, so the bias
//! term is the only part sensitive to the choice of components.
//!
//! Per-representation dimensions multiply by the Galois orbit size
//! `(p-1) p^(r-1) / 2` per prime to give orbit-level (Galois-invariant
//! subspace) dimensions; both are exposed.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::{legendre, psi_new, rat, rat_int, rat_to_u64, FactoredInt, Rat};
use crate::atkin_lehner::{b_const, eigenvalue_denominator, trace_wt};
use crate::class_number::h_minus;
use crate::dims;
use crate::error::{Error, Result};

/// Galois-orbit invariants of one ramified supercuspidal local component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSCDatum {
    p: u64,
    r: u32,
    sigma: i8,
    eps: i8,
}

fn check_sign(s: i8, what: &str) -> Result<()> {
    if s != 1 && s != -1 {
        return Err(Error::invalid(format!("{what} must be +1 or -1, got {s}")));
    }
    Ok(())
}

impl LocalSCDatum {
    /// `p` must be an odd prime, with `p >= 5` or `p = 3, r = 1`; `sigma`
    /// is the Legendre class of the unit `u` with `E_p = Q_p(sqrt(u p))`,
    /// and `eps` the local root number.
    pub fn new(p: u64, r: u32, sigma: i8, eps: i8) -> Result<Self> {
        if !crate::arith::is_prime(p) || p == 2 {
            return Err(Error::invalid(format!("local prime must be odd, got {p}")));
        }
        if r < 1 {
            return Err(Error::invalid("conductor parameter r must be at least 1"));
        }
        if p == 3 && r != 1 {
            return Err(Error::invalid(
                "p = 3 components are supported only with r = 1",
            ));
        }
        check_sign(sigma, "sigma")?;
        check_sign(eps, "eps")?;
        Ok(LocalSCDatum { p, r, sigma, eps })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Conductor exponent `2r + 1`.
    pub fn conductor_exponent(&self) -> u32 {
        2 * self.r + 1
    }

    pub fn sigma(&self) -> i8 {
        self.sigma
    }

    pub fn eps(&self) -> i8 {
        self.eps
    }
}

/// The unique other representation class with the same inertial type:
/// same `(p, r, sigma)`, opposite root number (an unramified quadratic
/// twist flips the sign).
pub fn type_partner(d: &LocalSCDatum) -> LocalSCDatum {
    LocalSCDatum { eps: -d.eps, ..*d }
}

/// A global prescription: weight, auxiliary level `M`, and one local datum
/// for each prime of `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prescription {
    k: u64,
    m: FactoredInt,
    locals: BTreeMap<u64, LocalSCDatum>,
}

impl Prescription {
    /// Validates every hypothesis eagerly: `k >= 4` even; the local primes
    /// are distinct and odd with `T = prod p >= 5`; `gcd(M, T) = 1`.
    pub fn new(k: u64, m: FactoredInt, locals: Vec<LocalSCDatum>) -> Result<Self> {
        if k < 4 || k % 2 != 0 {
            return Err(Error::invalid(format!(
                "weight must be even and at least 4, got {k}"
            )));
        }
        if locals.is_empty() {
            return Err(Error::invalid("at least one local component is required"));
        }
        let mut map = BTreeMap::new();
        for d in locals {
            if map.insert(d.p, d).is_some() {
                return Err(Error::invalid(format!(
                    "duplicate local component at p = {}",
                    d.p
                )));
            }
        }
        let mut t: u64 = 1;
        for &p in map.keys() {
            t = t
                .checked_mul(p)
                .ok_or_else(|| Error::invalid("T overflows u64"))?;
        }
        if t == 3 {
            return Err(Error::invalid(
                "T = 3 alone is not supported: the four conductor-27 local classes \
                 give subspace dimensions of the shape 1, 2, 2, 2, which no \
                 main-plus-bias formula of this kind can produce",
            ));
        }
        if t < 5 {
            return Err(Error::invalid(format!("T must be at least 5, got {t}")));
        }
        for &p in map.keys() {
            if m.value() % p == 0 {
                return Err(Error::invalid(format!(
                    "M = {} must be coprime to T = {t}",
                    m.value()
                )));
            }
        }
        Ok(Prescription { k, m, locals: map })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn m(&self) -> &FactoredInt {
        &self.m
    }

    pub fn locals(&self) -> impl Iterator<Item = &LocalSCDatum> {
        self.locals.values()
    }

    pub fn t(&self) -> u64 {
        self.locals.keys().product()
    }

    pub fn r_map(&self) -> BTreeMap<u64, u32> {
        self.locals.iter().map(|(&p, d)| (p, d.r)).collect()
    }

    /// The level `N = M prod_{p|T} p^(2r_p+1)`, with factorization.
    pub fn level(&self) -> Result<FactoredInt> {
        let t_part = FactoredInt::from_factors(
            self.locals.iter().map(|(&p, d)| (p, 2 * d.r + 1)).collect(),
        )?;
        self.m.mul_coprime(&t_part)
    }

    pub fn eps_product(&self) -> i8 {
        let mut s = 1i8;
        for d in self.locals.values() {
            s *= d.eps;
        }
        s
    }
}

/// Output of a dimension computation, split into the exact pieces of the
/// formula.  The invariant `dim = main_term + delta * eps_product *
/// secondary` holds as exact rationals, and `dim_orbit = dim *
/// orbit_multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimBreakdown {
    pub main_term: Rat,
    pub delta: u8,
    pub eps_product: i8,
    pub trace_used: i64,
    pub secondary: Rat,
    pub dim: u64,
    pub orbit_multiplicity: u64,
    pub dim_orbit: u64,
}

/// Formal degree of a supercuspidal of `GL_2` over a `q`-adic field with
/// conductor exponent `c`, relative to the measure giving the maximal
/// compact total mass 1:
///
/// ```text
/// d = (q^2 - 1)/2 * q^(r-1)   if c = 2r + 1
/// d = (q - 1) * q^(r-1)       if c = 2r
/// ```
pub fn formal_degree(q: u64, c: u32) -> Result<Rat> {
    if !crate::arith::is_prime(q) {
        return Err(Error::invalid(format!("{q} is not prime")));
    }
    if c < 2 {
        return Err(Error::invalid(format!(
            "conductor exponent must be at least 2, got {c}"
        )));
    }
    let q_int = BigInt::from(q);
    Ok(if c % 2 == 1 {
        let r = (c - 1) / 2;
        Rat::new((&q_int * &q_int - 1) * q_int.pow(r - 1), BigInt::from(2))
    } else {
        let r = c / 2;
        Rat::from_integer((&q_int - 1) * q_int.pow(r - 1))
    })
}

/// Number of supercuspidal representations of conductor `q^(2r+1)` with a
/// fixed central character: `2 q^(r-1) (q - 1)`.
pub fn count_supercuspidals(q: u64, r: u32) -> Result<u64> {
    if !crate::arith::is_prime(q) {
        return Err(Error::invalid(format!("{q} is not prime")));
    }
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    2u64.checked_mul(q.pow(r - 1))
        .and_then(|x| x.checked_mul(q - 1))
        .ok_or_else(|| Error::invalid("count overflows u64"))
}

/// Size of one local Galois orbit of conductor `p^(2r+1)` for `p >= 5`:
/// `(p-1) p^(r-1) / 2`, i.e. a quarter of all such supercuspidals.
pub fn orbit_size(p: u64, r: u32) -> Result<u64> {
    if p < 5 {
        return Err(Error::invalid(format!(
            "orbit size formula requires p >= 5, got {p}"
        )));
    }
    if !crate::arith::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    Ok((p - 1) / 2 * p.pow(r - 1))
}

/// Orbit multiplicity of one local component: `(p-1) p^(r-1) / 2`, which is
/// [`orbit_size`] for `p >= 5` and 1 for the `p = 3, r = 1` components
/// (there the four classes are singletons).
fn local_orbit_multiplicity(d: &LocalSCDatum) -> u64 {
    (d.p - 1) / 2 * d.p.pow(d.r - 1)
}

/// Product of local orbit multiplicities over the prescription.
pub fn orbit_multiplicity(pres: &Prescription) -> u64 {
    pres.locals().map(local_orbit_multiplicity).product()
}

/// Indicator that every local extension is `Q_p(sqrt(-T))`, i.e.
/// `sigma_p = (-T/p / p)` for every `p | T` (as integers, `-T/p` means
/// `-(T/p)`; it is coprime to `p` since `T` is squarefree).
pub fn delta_indicator(pres: &Prescription) -> u8 {
    let t = pres.t();
    let all_match = pres.locals.iter().all(|(&p, d)| {
        let a = -((t / p) as i64);
        legendre(a, p).expect("odd prime") == d.sigma
    });
    u8::from(all_match)
}

/// Global root number `(-1)^(k/2) prod_p eps_p` shared by all newforms in
/// the prescribed subspace.
pub fn global_root_number(pres: &Prescription) -> i8 {
    let sign = if (pres.k / 2) % 2 == 0 { 1 } else { -1 };
    sign * pres.eps_product()
}

fn weight_factor(k: u64) -> Rat {
    rat(k as i64 - 1, 12)
}

/// Main term `(k-1)/12 psi_new(M) prod_{p|T} (p^2-1)/2 p^(r_p-1)`; equals
/// the same expression with formal degrees in place of the explicit local
/// factors.
fn main_term(k: u64, m: &FactoredInt, locals: &BTreeMap<u64, LocalSCDatum>) -> Result<Rat> {
    let mut acc = weight_factor(k) * psi_new(m);
    for d in locals.values() {
        acc *= formal_degree(d.p, d.conductor_exponent())?;
    }
    Ok(acc)
}

/// Dimension of the subspace of `S_k^new(N)` spanned by newforms with the
/// prescribed local components (per representation), together with the
/// orbit-level dimension.  `trace_override` supplies `tr(W_T)` when neither
/// explicit trace case applies.
pub fn dim_prescribed(pres: &Prescription, trace_override: Option<i64>) -> Result<DimBreakdown> {
    let trace = trace_wt(pres.k, &pres.m, pres.t(), &pres.r_map(), trace_override)?;
    let main = main_term(pres.k, &pres.m, &pres.locals)?;
    let secondary = Rat::new(BigInt::from(trace), eigenvalue_denominator(&pres.r_map()));
    let delta = delta_indicator(pres);
    let eps_product = pres.eps_product();

    let total = &main + rat_int(delta as i64) * rat_int(eps_product as i64) * &secondary;
    let dim = rat_to_u64(&total, "prescribed dimension")?;
    let mult = orbit_multiplicity(pres);
    let dim_orbit = dim
        .checked_mul(mult)
        .ok_or_else(|| Error::internal("orbit dimension overflows u64"))?;

    Ok(DimBreakdown {
        main_term: main,
        delta,
        eps_product,
        trace_used: trace,
        secondary,
        dim,
        orbit_multiplicity: mult,
        dim_orbit,
    })
}

/// Dimension of the Galois-invariant subspace of `S_k^new(p^(2r+1))` cut
/// out by one local orbit class `(sigma, eps)`, by the closed form
///
/// ```text
/// (k-1)/12 ((p-1)/2)^2 (p+1) p^(2(r-1))
///   + (-1)^(k/2) eps Delta b_{p,0} (p-1) p^(r-1)/2 h(-p)
/// ```
///
/// This is an independent route: it must agree with `dim_prescribed`
/// times [`orbit_size`], and the tests assert that it does.
pub fn dim_orbit_class(k: u64, p: u64, r: u32, sigma: i8, eps: i8) -> Result<u64> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::invalid(format!(
            "weight must be even and at least 4, got {k}"
        )));
    }
    check_sign(sigma, "sigma")?;
    check_sign(eps, "eps")?;
    let half_orbit = orbit_size(p, r)?; // also validates p >= 5 prime, r >= 1
    let p_int = BigInt::from(p);
    let main = weight_factor(k)
        * Rat::new((&p_int - 1) * (&p_int - 1) * (&p_int + 1), BigInt::from(4))
        * Rat::from_integer(p_int.pow(2 * (r - 1)));
    let delta = u8::from(legendre(-1, p)? == sigma);
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let bias = rat_int(sign * eps as i64 * delta as i64)
        * b_const(p, 0)?
        * rat_int(half_orbit as i64)
        * rat_int(h_minus(p)? as i64);
    rat_to_u64(&(main + bias), "orbit-class dimension")
}

/// Outcome of the mixed main-term formula: either the main term applies,
/// or neither vanishing hypothesis holds and the formula is silent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedMainTerm {
    /// Per-representation dimension, and the value scaled by the Galois
    /// orbit multiplicities of the odd-conductor components.
    Applies { dim: u64, dim_orbit: u64 },
    /// Neither hypothesis holds; the bias term need not vanish and no
    /// closed form is available here.
    HypothesisNotMet,
}

/// Main-term dimension for a level `N = M prod_{p|S} p^(2r_p) prod_{p|T}
/// p^(2r_p+1)` with prescribed supercuspidals at all of `S` and `T`,
/// valid when either (i) some `p | T` has `sigma_p != (-T/p / p)` or
/// (ii) some odd `p | S` has `(-T/p) = +1`:
///
/// ```text
/// (k-1)/12 psi_new(M) prod_{p|T} (p^2-1)/2 p^(r_p-1) prod_{p|S} (p-1) p^(r_p-1)
/// ```
pub fn dim_mixed_main_term(
    k: u64,
    m: &FactoredInt,
    s_locals: &BTreeMap<u64, u32>,
    t_locals: &BTreeMap<u64, LocalSCDatum>,
) -> Result<MixedMainTerm> {
    let pres = Prescription::new(k, m.clone(), t_locals.values().copied().collect())?;
    let t = pres.t();
    for (&p, &rp) in s_locals {
        if !crate::arith::is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if rp < 1 {
            return Err(Error::invalid(format!("r_{p} must be at least 1")));
        }
        if t % p == 0 || m.value() % p == 0 {
            return Err(Error::invalid(
                "S must be coprime to both M and T".to_string(),
            ));
        }
    }

    let hyp_t = delta_indicator(&pres) == 0;
    let mut hyp_s = false;
    for &p in s_locals.keys() {
        if p % 2 == 1 && legendre(-(t as i64), p)? == 1 {
            hyp_s = true;
            break;
        }
    }
    if !hyp_t && !hyp_s {
        return Ok(MixedMainTerm::HypothesisNotMet);
    }

    let mut total = main_term(k, m, &pres.locals)?;
    for (&p, &rp) in s_locals {
        total *= formal_degree(p, 2 * rp)?;
    }
    let dim = rat_to_u64(&total, "mixed main term")?;
    let mult = orbit_multiplicity(&pres);
    let dim_orbit = dim
        .checked_mul(mult)
        .ok_or_else(|| Error::internal("orbit dimension overflows u64"))?;
    Ok(MixedMainTerm::Applies { dim, dim_orbit })
}

/// Dimension formula extended to prescribed depth-zero (conductor `p^2`)
/// supercuspidals at the primes of `S`, for `N = M prod_{p|T} p^(2r_p+1)
/// prod_{p|S} p^2` with `T = 1 mod S`:
///
/// ```text
/// (k-1)/12 psi_new(M) prod_{p|T} (p^2-1)/2 p^(r_p-1) prod_{p|S} (p-1)
///   + Delta_ST eps_ST tr(W_ST | S-minimal)
///       / [ prod_{p|T} (p-1) p^(r_p-1) prod_{odd p|S} (p-1)/2 ]
/// ```
///
/// `Delta_ST` extends the `Delta` of the `T`-part by vanishing when some
/// `p | S` is `1 mod 4`, or when `T = 3 mod 4` and `S` is even; outside
/// those stated vanishing cases it is taken to equal `Delta(pi_T)`.
/// The `S`-minimal trace must be supplied (see
/// [`crate::atkin_lehner::smin_trace`] for the prime-`S` reduction); with
/// empty `S` this reduces exactly to [`dim_prescribed`].
pub fn dim_depth_zero(
    pres: &Prescription,
    s_eps: &BTreeMap<u64, i8>,
    smin_trace: Option<i64>,
) -> Result<DimBreakdown> {
    if s_eps.is_empty() {
        return dim_prescribed(pres, smin_trace);
    }
    let t = pres.t();
    for (&p, &eps) in s_eps {
        if !crate::arith::is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        check_sign(eps, "depth-zero eps")?;
        if t % p == 0 || pres.m.value() % p == 0 {
            return Err(Error::invalid(
                "S must be coprime to both M and T".to_string(),
            ));
        }
        if t % p != 1 {
            return Err(Error::invalid(format!(
                "T = {t} must be congruent to 1 mod every prime of S (fails at {p})"
            )));
        }
    }
    let trace = smin_trace.ok_or(Error::TraceRequired)?;

    let mut main = main_term(pres.k, &pres.m, &pres.locals)?;
    for &p in s_eps.keys() {
        main *= rat_int(p as i64 - 1);
    }

    let mut divisor = eigenvalue_denominator(&pres.r_map());
    for &p in s_eps.keys() {
        if p % 2 == 1 {
            divisor *= BigInt::from((p - 1) / 2);
        }
    }
    let secondary = Rat::new(BigInt::from(trace), divisor);

    let mut delta = delta_indicator(pres);
    if s_eps.keys().any(|&p| p % 4 == 1) {
        delta = 0;
    }
    if t % 4 == 3 && s_eps.contains_key(&2) {
        delta = 0;
    }
    let mut eps_product = pres.eps_product();
    for &e in s_eps.values() {
        eps_product *= e;
    }

    let total = &main + rat_int(delta as i64) * rat_int(eps_product as i64) * &secondary;
    let dim = rat_to_u64(&total, "depth-zero dimension")?;
    let mult = orbit_multiplicity(pres);
    let dim_orbit = dim
        .checked_mul(mult)
        .ok_or_else(|| Error::internal("orbit dimension overflows u64"))?;

    Ok(DimBreakdown {
        main_term: main,
        delta,
        eps_product,
        trace_used: trace,
        secondary,
        dim,
        orbit_multiplicity: mult,
        dim_orbit,
    })
}

/// All `4^omega(T)` prescriptions sharing `(k, M)` and the given conductor
/// parameters, in lexicographic order of the `(sigma, eps)` choices.
pub fn enumerate_prescriptions(
    k: u64,
    m: &FactoredInt,
    conductors: &[(u64, u32)],
) -> Result<Vec<Prescription>> {
    let n = conductors.len();
    let mut out = Vec::with_capacity(4usize.pow(n as u32));
    for mask in 0..4u32.pow(n as u32) {
        let mut code = mask;
        let mut locals = Vec::with_capacity(n);
        for &(p, r) in conductors {
            let sigma = if code % 2 == 0 { 1 } else { -1 };
            let eps = if (code / 2) % 2 == 0 { 1 } else { -1 };
            code /= 4;
            locals.push(LocalSCDatum::new(p, r, sigma, eps)?);
        }
        out.push(Prescription::new(k, m.clone(), locals)?);
    }
    Ok(out)
}

/// Decomposition check: the orbit-level dimensions over all classes must
/// sum to `dim S_k^new(N)`.  Returns `(sum, dim_new)`.
pub fn decomposition_sum(
    k: u64,
    m: &FactoredInt,
    conductors: &[(u64, u32)],
    trace_override: Option<i64>,
) -> Result<(u64, u64)> {
    let mut sum = 0u64;
    let mut level = None;
    for pres in enumerate_prescriptions(k, m, conductors)? {
        let b = dim_prescribed(&pres, trace_override)?;
        sum += b.dim_orbit;
        level.get_or_insert(pres.level()?);
    }
    let n = level.ok_or_else(|| Error::invalid("empty T".to_string()))?;
    Ok((sum, dims::dim_new(k, &n)?))
}

/// Trace check: the eps-signed orbit-level dimensions over all classes
/// must sum to `tr(W_T | S_k^new(N))`.  Returns `(signed sum, trace)`.
pub fn trace_sum(
    k: u64,
    m: &FactoredInt,
    conductors: &[(u64, u32)],
    trace_override: Option<i64>,
) -> Result<(i64, i64)> {
    let mut sum = 0i64;
    let mut trace = None;
    for pres in enumerate_prescriptions(k, m, conductors)? {
        let b = dim_prescribed(&pres, trace_override)?;
        sum += b.eps_product as i64 * b.dim_orbit as i64;
        trace.get_or_insert(b.trace_used);
    }
    let t = trace.ok_or_else(|| Error::invalid("empty T".to_string()))?;
    Ok((sum, t))
}
