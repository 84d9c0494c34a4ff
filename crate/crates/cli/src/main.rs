//! Command-line frontend: exact newform-census computations with
//! machine-readable output.
//!
//! Exit codes: 0 success; 1 validation error (a named hypothesis was
//! violated); 2 formula not applicable (an Atkin-Lehner trace must be
//! supplied, or a vanishing hypothesis is not met); 3 internal invariant
//! violation (an exactness assertion failed).

mod consistency;
mod fixtures;
mod locals;
mod output;

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use newform_census::arith::{legendre, FactoredInt};
use newform_census::atkin_lehner;
use newform_census::census::{self, dim_prescribed, global_root_number, Prescription};
use newform_census::class_number::{class_number, field_discriminant, Discriminant};
use newform_census::dims;
use newform_census::local_oracle;
use newform_census::{Error, Result};
use serde_json::{Map, Value};

use output::{breakdown_json, breakdown_rows, emit_kv, format_sign, print_csv, print_json, Format};

#[derive(Parser)]
#[command(
    name = "newform-census",
    about = "Dimensions of newform spaces with prescribed ramified supercuspidal components",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the subspace with the prescribed local components.
    DimPrescribed {
        #[arg(long)]
        k: u64,
        /// Auxiliary level M, coprime to the local primes.
        #[arg(long, alias = "M", default_value_t = 1)]
        m: u64,
        /// Local component p:r:E:eps with E in {mT, other, qr, qnr}.
        #[arg(long = "local", required = true)]
        locals: Vec<String>,
        /// Externally supplied tr(W_T) for cases without a closed form.
        #[arg(long, allow_negative_numbers = true)]
        trace_override: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// All 4^omega(T) orbit classes with per-representation and
    /// orbit-level dimensions; the footer checks the decomposition.
    OrbitTable {
        #[arg(long)]
        k: u64,
        #[arg(long, alias = "M", default_value_t = 1)]
        m: u64,
        /// Squarefree odd T >= 5.
        #[arg(long, alias = "T")]
        t: u64,
        /// Conductor parameter applied to every prime of T.
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Per-prime override p:r (repeatable).
        #[arg(long = "rp")]
        rp: Vec<String>,
        #[arg(long, allow_negative_numbers = true)]
        trace_override: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Trace of the Atkin-Lehner operator W_T on the newspace.
    Trace {
        #[arg(long)]
        k: u64,
        #[arg(long, alias = "T")]
        t: u64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long = "rp")]
        rp: Vec<String>,
        #[arg(long, alias = "M", default_value_t = 1)]
        m: u64,
        /// Externally supplied trace for the unimplemented cases.
        #[arg(long = "override", allow_negative_numbers = true)]
        override_trace: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Class number of Q(sqrt(-T)) (or of a given discriminant).
    ClassNumber {
        /// Squarefree positive T.
        #[arg(long, alias = "T", conflicts_with = "disc")]
        t: Option<u64>,
        /// Negative discriminant, 0 or 1 mod 4.
        #[arg(long, allow_negative_numbers = true)]
        disc: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Dimensions of S_k(Gamma_0(N)) and S_k^new(N).
    DimNewspace {
        #[arg(long)]
        k: u64,
        #[arg(long, alias = "N")]
        n: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Enumerate the local unit-group quotient for both ramified
    /// extensions and verify the index bookkeeping.
    LocalOracle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        /// Restrict to one unit class representative.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run the identity suites and fixture replay; nonzero exit on any
    /// failure.
    Consistency {
        /// Comma-separated weights.
        #[arg(long, default_value = "4,6,8,10")]
        k: String,
        /// Upper bound for the classical-dimension round trip.
        #[arg(long, default_value_t = 500)]
        nmax: u64,
        /// Small ranges for a fast smoke run.
        #[arg(long)]
        quick: bool,
        /// External fixture file (defaults to the built-in set).
        #[arg(long)]
        fixtures: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Dimension with additional prescribed depth-zero components at S.
    DepthZero {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long = "local", required = true)]
        locals: Vec<String>,
        /// Depth-zero component p:eps (repeatable); requires T = 1 mod p.
        #[arg(long = "s-local")]
        s_locals: Vec<String>,
        /// tr(W_ST) on the S-minimal subspace.
        #[arg(long, allow_negative_numbers = true)]
        smin_trace: Option<i64>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InvalidInput(_) | Error::SizeGuard { .. } => 1,
                Error::TraceUnavailable | Error::TraceRequired => 2,
                Error::Internal(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::DimPrescribed {
            k,
            m,
            locals,
            trace_override,
            format,
        } => {
            let pres = build_prescription(k, m, &locals)?;
            let b = dim_prescribed(&pres, trace_override)?;
            let mut rows = vec![
                ("k", k.to_string()),
                ("m", m.to_string()),
                ("t", pres.t().to_string()),
                ("level", pres.level()?.value().to_string()),
            ];
            rows.extend(breakdown_rows(&b));
            rows.push(("global_root_number", format_sign(global_root_number(&pres))));

            let mut j = Map::new();
            j.insert("command".into(), "dim-prescribed".into());
            j.insert("k".into(), Value::from(k));
            j.insert("m".into(), Value::from(m));
            j.insert("t".into(), Value::from(pres.t()));
            j.insert("level".into(), Value::from(pres.level()?.value()));
            j.insert("locals".into(), locals_json(&pres));
            breakdown_json(&b, &mut j);
            j.insert(
                "global_root_number".into(),
                Value::from(global_root_number(&pres)),
            );
            emit_kv(format, &rows, &Value::Object(j));
            Ok(ExitCode::SUCCESS)
        }

        Command::OrbitTable {
            k,
            m,
            t,
            r,
            rp,
            trace_override,
            format,
        } => {
            let conductors = conductor_map(t, r, &rp)?;
            let m_f = FactoredInt::factor(m)?;
            let prescriptions = census::enumerate_prescriptions(k, &m_f, &conductors)?;
            let level = prescriptions[0].level()?;
            let dim_new = dims::dim_new(k, &level)?;

            let mut rows: Vec<Vec<String>> = Vec::new();
            let mut jrows: Vec<Value> = Vec::new();
            let mut total = 0u64;
            for pres in &prescriptions {
                let b = dim_prescribed(pres, trace_override)?;
                total += b.dim_orbit;
                let sigmas: Vec<String> = pres
                    .locals()
                    .map(|d| format!("{}:{}", d.p(), if d.sigma() == 1 { "qr" } else { "qnr" }))
                    .collect();
                let epss: Vec<String> = pres
                    .locals()
                    .map(|d| format!("{}:{}", d.p(), format_sign(d.eps())))
                    .collect();
                rows.push(vec![
                    sigmas.join(","),
                    epss.join(","),
                    b.delta.to_string(),
                    b.dim.to_string(),
                    b.orbit_multiplicity.to_string(),
                    b.dim_orbit.to_string(),
                ]);
                let mut jr = Map::new();
                jr.insert("e_class".into(), Value::from(sigmas.join(",")));
                jr.insert("eps".into(), Value::from(epss.join(",")));
                jr.insert("delta".into(), Value::from(b.delta));
                jr.insert("dim".into(), Value::from(b.dim));
                jr.insert(
                    "orbit_multiplicity".into(),
                    Value::from(b.orbit_multiplicity),
                );
                jr.insert("dim_orbit".into(), Value::from(b.dim_orbit));
                jrows.push(Value::Object(jr));
            }

            let header = ["e_class", "eps", "delta", "dim", "orbit_mult", "dim_orbit"];
            match format {
                Format::Table => {
                    println!(
                        "k={k} M={m} T={t} level={} classes={}",
                        level.value(),
                        rows.len()
                    );
                    let widths: Vec<usize> = header
                        .iter()
                        .enumerate()
                        .map(|(i, h)| {
                            rows.iter()
                                .map(|r| r[i].len())
                                .max()
                                .unwrap_or(0)
                                .max(h.len())
                        })
                        .collect();
                    let fmt_row = |cells: Vec<String>| {
                        cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:<w$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                    };
                    println!(
                        "{}",
                        fmt_row(header.iter().map(|s| s.to_string()).collect())
                    );
                    for row in &rows {
                        println!("{}", fmt_row(row.clone()));
                    }
                    println!("sum(dim_orbit) = {total}, dim S_k^new = {dim_new}");
                }
                Format::Csv => {
                    let mut all = rows.clone();
                    all.push(vec![
                        "TOTAL".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        total.to_string(),
                    ]);
                    print_csv(&header, &all);
                }
                Format::Json => {
                    let mut j = Map::new();
                    j.insert("command".into(), "orbit-table".into());
                    j.insert("k".into(), Value::from(k));
                    j.insert("m".into(), Value::from(m));
                    j.insert("t".into(), Value::from(t));
                    j.insert("level".into(), Value::from(level.value()));
                    j.insert("rows".into(), Value::Array(jrows));
                    j.insert("sum_dim_orbit".into(), Value::from(total));
                    j.insert("dim_new".into(), Value::from(dim_new));
                    j.insert("consistent".into(), Value::from(total == dim_new));
                    print_json(&Value::Object(j));
                }
            }
            if total != dim_new {
                return Err(Error::internal(format!(
                    "orbit dimensions sum to {total}, newspace has dimension {dim_new}"
                )));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Trace {
            k,
            t,
            r,
            rp,
            m,
            override_trace,
            format,
        } => {
            let conductors = conductor_map(t, r, &rp)?;
            let m_f = FactoredInt::factor(m)?;
            let rmap: BTreeMap<u64, u32> = conductors.iter().copied().collect();
            let trace = atkin_lehner::trace_wt(k, &m_f, t, &rmap, override_trace)?;
            let route = if m_f.is_one() {
                "m1"
            } else if conductors.len() == 1 {
                "prime"
            } else {
                "override"
            };
            let level: u64 = m * conductors
                .iter()
                .map(|&(p, r)| p.pow(2 * r + 1))
                .product::<u64>();
            let rows = vec![
                ("k", k.to_string()),
                ("t", t.to_string()),
                ("m", m.to_string()),
                ("level", level.to_string()),
                ("trace", trace.to_string()),
                ("route", route.to_string()),
            ];
            let mut j = Map::new();
            j.insert("command".into(), "trace".into());
            j.insert("k".into(), Value::from(k));
            j.insert("t".into(), Value::from(t));
            j.insert("m".into(), Value::from(m));
            j.insert("level".into(), Value::from(level));
            j.insert("trace".into(), Value::from(trace));
            j.insert("route".into(), Value::from(route));
            emit_kv(format, &rows, &Value::Object(j));
            Ok(ExitCode::SUCCESS)
        }

        Command::ClassNumber { t, disc, format } => {
            let (d, label) = match (t, disc) {
                (Some(t), None) => (field_discriminant(t)?, format!("Q(sqrt(-{t}))")),
                (None, Some(d)) => (Discriminant::new(d)?, format!("discriminant {d}")),
                _ => return Err(Error::invalid("exactly one of --t and --disc is required")),
            };
            let h = class_number(d);
            let rows = vec![
                ("field", label.clone()),
                ("discriminant", d.value().to_string()),
                ("class_number", h.to_string()),
            ];
            let mut j = Map::new();
            j.insert("command".into(), "class-number".into());
            j.insert("field".into(), Value::from(label));
            j.insert("discriminant".into(), Value::from(d.value()));
            j.insert("class_number".into(), Value::from(h));
            emit_kv(format, &rows, &Value::Object(j));
            Ok(ExitCode::SUCCESS)
        }

        Command::DimNewspace { k, n, format } => {
            let nf = FactoredInt::factor(n)?;
            let cusp = dims::dim_cusp(k, &nf)?;
            let new = dims::dim_new(k, &nf)?;
            let rows = vec![
                ("k", k.to_string()),
                ("n", n.to_string()),
                ("dim_cusp", cusp.to_string()),
                ("dim_new", new.to_string()),
            ];
            let mut j = Map::new();
            j.insert("command".into(), "dim-newspace".into());
            j.insert("k".into(), Value::from(k));
            j.insert("n".into(), Value::from(n));
            j.insert("dim_cusp".into(), Value::from(cusp));
            j.insert("dim_new".into(), Value::from(new));
            emit_kv(format, &rows, &Value::Object(j));
            Ok(ExitCode::SUCCESS)
        }

        Command::LocalOracle { p, r, t, format } => run_local_oracle(p, r, t, format),

        Command::Consistency {
            k,
            nmax,
            quick,
            fixtures,
            format,
        } => {
            let ranges = if quick {
                consistency::SweepRanges::quick()
            } else {
                let weights: Vec<u64> = k
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::invalid(format!("bad weight {s:?}")))
                    })
                    .collect::<Result<_>>()?;
                consistency::SweepRanges::standard(weights, nmax)
            };
            let text = match &fixtures {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?,
                None => fixtures::BUILTIN_FIXTURES.to_string(),
            };
            let results = consistency::run_all(&ranges, &text)?;
            let all_ok = results.iter().all(|r| r.ok());
            match format {
                Format::Table => {
                    for r in &results {
                        let status = if r.ok() { "ok" } else { "FAIL" };
                        println!("{status:<4} {:<26} cases={}", r.name, r.cases);
                        for f in &r.failures {
                            println!("     {f}");
                        }
                    }
                    println!(
                        "{}",
                        if all_ok {
                            "all checks passed"
                        } else {
                            "FAILURES"
                        }
                    );
                }
                Format::Json | Format::Csv => {
                    let mut checks = Vec::new();
                    let mut rows = Vec::new();
                    for r in &results {
                        let mut jr = Map::new();
                        jr.insert("name".into(), Value::from(r.name));
                        jr.insert("cases".into(), Value::from(r.cases as u64));
                        jr.insert("ok".into(), Value::from(r.ok()));
                        jr.insert(
                            "failures".into(),
                            Value::Array(
                                r.failures.iter().map(|f| Value::from(f.as_str())).collect(),
                            ),
                        );
                        checks.push(Value::Object(jr));
                        rows.push(vec![
                            r.name.to_string(),
                            r.cases.to_string(),
                            if r.ok() { "ok".into() } else { "FAIL".into() },
                            r.failures.len().to_string(),
                        ]);
                    }
                    if format == Format::Json {
                        let mut j = Map::new();
                        j.insert("command".into(), "consistency".into());
                        j.insert("checks".into(), Value::Array(checks));
                        j.insert("ok".into(), Value::from(all_ok));
                        print_json(&Value::Object(j));
                    } else {
                        print_csv(&["check", "cases", "status", "failures"], &rows);
                    }
                }
            }
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::internal(
                    "consistency failures (see report)".to_string(),
                ))
            }
        }

        Command::DepthZero {
            k,
            m,
            locals,
            s_locals,
            smin_trace,
            format,
        } => {
            let pres = build_prescription(k, m, &locals)?;
            let s_eps: BTreeMap<u64, i8> = s_locals
                .iter()
                .map(|s| locals::parse_p_sign(s))
                .collect::<Result<_>>()?;
            let b = census::dim_depth_zero(&pres, &s_eps, smin_trace)?;
            let note = "bias term follows the literal depth-zero extension of the \
                        Delta indicator at the primes of S";
            let s_str = if s_eps.is_empty() {
                "(empty)".to_string()
            } else {
                s_eps
                    .iter()
                    .map(|(&p, &e)| format!("{p}:{}", format_sign(e)))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            let mut rows = vec![
                ("k", k.to_string()),
                ("m", m.to_string()),
                ("t", pres.t().to_string()),
                ("s", s_str.clone()),
            ];
            rows.extend(breakdown_rows(&b));
            rows.push(("note", note.to_string()));
            let mut j = Map::new();
            j.insert("command".into(), "depth-zero".into());
            j.insert("k".into(), Value::from(k));
            j.insert("m".into(), Value::from(m));
            j.insert("t".into(), Value::from(pres.t()));
            j.insert("s".into(), Value::from(s_str));
            breakdown_json(&b, &mut j);
            j.insert("note".into(), Value::from(note));
            emit_kv(format, &rows, &Value::Object(j));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_prescription(k: u64, m: u64, locals: &[String]) -> Result<Prescription> {
    let specs: Vec<locals::LocalSpec> = locals
        .iter()
        .map(|s| locals::parse_local_spec(s))
        .collect::<Result<_>>()?;
    let data = locals::resolve_locals(&specs)?;
    Prescription::new(k, FactoredInt::factor(m)?, data)
}

fn conductor_map(t: u64, r: u32, rp: &[String]) -> Result<Vec<(u64, u32)>> {
    let tf = FactoredInt::factor(t)?;
    let overrides: BTreeMap<u64, u32> = rp
        .iter()
        .map(|s| locals::parse_p_r(s))
        .collect::<Result<_>>()?;
    for &p in overrides.keys() {
        if t % p != 0 {
            return Err(Error::invalid(format!(
                "--rp prime {p} does not divide T = {t}"
            )));
        }
    }
    Ok(tf
        .factors()
        .iter()
        .map(|&(p, _)| (p, *overrides.get(&p).unwrap_or(&r)))
        .collect())
}

fn locals_json(pres: &Prescription) -> Value {
    Value::Array(
        pres.locals()
            .map(|d| {
                let mut j = Map::new();
                j.insert("p".into(), Value::from(d.p()));
                j.insert("r".into(), Value::from(d.r()));
                j.insert(
                    "sigma".into(),
                    Value::from(if d.sigma() == 1 { "qr" } else { "qnr" }),
                );
                let t = pres.t();
                let matches =
                    legendre(-((t / d.p()) as i64), d.p()).expect("odd prime") == d.sigma();
                j.insert("matches_minus_t".into(), Value::from(matches));
                j.insert("eps".into(), Value::from(d.eps()));
                Value::Object(j)
            })
            .collect(),
    )
}

fn run_local_oracle(p: u64, r: u32, t: Option<u64>, format: Format) -> Result<ExitCode> {
    let summaries = match t {
        Some(t) => vec![local_oracle::summarize(p, r, t)?],
        None => local_oracle::summarize_both_classes(p, r)?
            .into_values()
            .collect(),
    };
    let reports: Vec<_> = summaries
        .iter()
        .map(|s| local_oracle::verify_index(p, r, s.t))
        .collect::<Result<Vec<_>>>()?;

    match format {
        Format::Table => {
            println!("p={p} r={r}");
            for s in &summaries {
                let class = if s.t_is_residue {
                    "residue"
                } else {
                    "nonresidue"
                };
                let prim = s
                    .primitive_characters
                    .map_or(String::from("-"), |c| c.to_string());
                println!(
                    "t={} ({class}): order {}, cyclic: {}, primitive characters: {prim}, \
                     order of 1+pi: {}",
                    s.t, s.order, s.cyclic, s.one_plus_pi_order
                );
            }
            for rep in &reports {
                for c in &rep.checks {
                    let status = if c.pass() { "ok" } else { "FAIL" };
                    println!(
                        "index t={}: [{status}] {} = {} (expected {})",
                        rep.t, c.label, c.actual, c.expected
                    );
                }
            }
        }
        Format::Json | Format::Csv => {
            let mut classes = Vec::new();
            let mut rows = Vec::new();
            for (s, rep) in summaries.iter().zip(&reports) {
                let mut j = Map::new();
                j.insert("t".into(), Value::from(s.t));
                j.insert("t_is_residue".into(), Value::from(s.t_is_residue));
                j.insert("order".into(), Value::from(s.order));
                j.insert("cyclic".into(), Value::from(s.cyclic));
                j.insert(
                    "primitive_characters".into(),
                    s.primitive_characters.map_or(Value::Null, Value::from),
                );
                j.insert("one_plus_pi_order".into(), Value::from(s.one_plus_pi_order));
                j.insert("index_checks_pass".into(), Value::from(rep.all_pass()));
                classes.push(Value::Object(j));
                rows.push(vec![
                    s.t.to_string(),
                    s.order.to_string(),
                    s.cyclic.to_string(),
                    s.primitive_characters
                        .map_or(String::new(), |c| c.to_string()),
                    rep.all_pass().to_string(),
                ]);
            }
            if format == Format::Json {
                let mut j = Map::new();
                j.insert("command".into(), "local-oracle".into());
                j.insert("p".into(), Value::from(p));
                j.insert("r".into(), Value::from(r));
                j.insert("classes".into(), Value::Array(classes));
                print_json(&Value::Object(j));
            } else {
                print_csv(
                    &["t", "order", "cyclic", "primitive_characters", "index_ok"],
                    &rows,
                );
            }
        }
    }
    if reports.iter().any(|r| !r.all_pass()) {
        return Err(Error::internal("index verification failed".to_string()));
    }
    Ok(ExitCode::SUCCESS)
}
