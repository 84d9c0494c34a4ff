//! Parsing of local-component specifications from the command line.
//!
//! A component is written `p:r:E:eps`, where `E` names the ramified
//! quadratic extension `Q_p(sqrt(u p))` either intrinsically by the
//! Legendre class of `u` (`qr` / `qnr`) or relative to the bias condition
//! (`mT` for `E = Q_p(sqrt(-T))`, `other` for the opposite class), and
//! `eps` is `+1` or `-1`.

use newform_census::arith::legendre;
use newform_census::census::LocalSCDatum;
use newform_census::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EClass {
    Residue,
    NonResidue,
    MatchesMinusT,
    Other,
}

#[derive(Debug, Clone, Copy)]
pub struct LocalSpec {
    pub p: u64,
    pub r: u32,
    pub e_class: EClass,
    pub eps: i8,
}

fn parse_sign(s: &str) -> Result<i8> {
    match s {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        _ => Err(Error::invalid(format!("sign must be +1 or -1, got {s:?}"))),
    }
}

pub fn parse_local_spec(s: &str) -> Result<LocalSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        return Err(Error::invalid(format!(
            "local component must be p:r:E:eps, got {s:?}"
        )));
    }
    let p: u64 = parts[0]
        .parse()
        .map_err(|_| Error::invalid(format!("bad prime {:?}", parts[0])))?;
    let r: u32 = parts[1]
        .parse()
        .map_err(|_| Error::invalid(format!("bad conductor parameter {:?}", parts[1])))?;
    let e_class = match parts[2] {
        "qr" => EClass::Residue,
        "qnr" => EClass::NonResidue,
        "mT" | "mt" => EClass::MatchesMinusT,
        "other" => EClass::Other,
        other => {
            return Err(Error::invalid(format!(
                "E must be one of mT, other, qr, qnr; got {other:?}"
            )))
        }
    };
    let eps = parse_sign(parts[3])?;
    Ok(LocalSpec { p, r, e_class, eps })
}

/// Resolve the `mT`/`other` aliases against `T = prod p` and build the
/// validated data.
pub fn resolve_locals(specs: &[LocalSpec]) -> Result<Vec<LocalSCDatum>> {
    let mut t: u64 = 1;
    for s in specs {
        if s.p == 2 || !newform_census::arith::is_prime(s.p) {
            return Err(Error::invalid(format!(
                "local prime must be an odd prime, got {}",
                s.p
            )));
        }
        t = t
            .checked_mul(s.p)
            .ok_or_else(|| Error::invalid("T overflows u64"))?;
    }
    specs
        .iter()
        .map(|s| {
            let sigma = match s.e_class {
                EClass::Residue => 1,
                EClass::NonResidue => -1,
                EClass::MatchesMinusT | EClass::Other => {
                    let m = legendre(-((t / s.p) as i64), s.p)?;
                    if s.e_class == EClass::MatchesMinusT {
                        m
                    } else {
                        -m
                    }
                }
            };
            LocalSCDatum::new(s.p, s.r, sigma, s.eps)
        })
        .collect()
}

pub fn parse_p_sign(s: &str) -> Result<(u64, i8)> {
    let (p, sign) = s
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("expected p:eps, got {s:?}")))?;
    let p: u64 = p
        .parse()
        .map_err(|_| Error::invalid(format!("bad prime {p:?}")))?;
    Ok((p, parse_sign(sign)?))
}

pub fn parse_p_r(s: &str) -> Result<(u64, u32)> {
    let (p, r) = s
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("expected p:r, got {s:?}")))?;
    let p: u64 = p
        .parse()
        .map_err(|_| Error::invalid(format!("bad prime {p:?}")))?;
    let r: u32 = r
        .parse()
        .map_err(|_| Error::invalid(format!("bad exponent {r:?}")))?;
    Ok((p, r))
}
