//! Output rendering: human tables, canonical JSON, RFC-4180 CSV.
//!
//! JSON is canonical: key order is emission order (no reordering on
//! parse/serialize round trips), every numeric field is an integer, and
//! rationals are `{"num": .., "den": ..}` objects.  No floating point
//! appears anywhere.

use newform_census::arith::Rat;
use newform_census::census::DimBreakdown;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub fn rat_value(x: &Rat) -> Value {
    let mut m = Map::new();
    m.insert(
        "num".into(),
        Value::from(x.numer().to_i64().expect("numerator fits i64")),
    );
    m.insert(
        "den".into(),
        Value::from(x.denom().to_i64().expect("denominator fits i64")),
    );
    Value::Object(m)
}

pub fn rat_display(x: &Rat) -> String {
    x.to_string()
}

/// Canonical single-line JSON with trailing newline.
pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

pub fn kv_table(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

/// One header row plus data rows, RFC-4180 quoting.
pub fn print_csv(header: &[&str], rows: &[Vec<String>]) {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(header).expect("csv header");
    for row in rows {
        w.write_record(row).expect("csv row");
    }
    w.flush().expect("csv flush");
}

/// Key-value output in the chosen format (single-row CSV).
pub fn emit_kv(format: Format, rows: &[(&str, String)], json: &Value) {
    match format {
        Format::Table => kv_table(rows),
        Format::Json => print_json(json),
        Format::Csv => {
            let header: Vec<&str> = rows.iter().map(|(k, _)| *k).collect();
            let data: Vec<String> = rows.iter().map(|(_, v)| v.clone()).collect();
            print_csv(&header, &[data]);
        }
    }
}

/// The common part of a rendered [`DimBreakdown`].
pub fn breakdown_rows(b: &DimBreakdown) -> Vec<(&'static str, String)> {
    vec![
        ("main_term", rat_display(&b.main_term)),
        ("delta", b.delta.to_string()),
        ("eps_product", format_sign(b.eps_product)),
        ("trace_used", b.trace_used.to_string()),
        ("secondary", rat_display(&b.secondary)),
        ("dim", b.dim.to_string()),
        ("orbit_multiplicity", b.orbit_multiplicity.to_string()),
        ("dim_orbit", b.dim_orbit.to_string()),
    ]
}

pub fn breakdown_json(b: &DimBreakdown, into: &mut Map<String, Value>) {
    into.insert("main_term".into(), rat_value(&b.main_term));
    into.insert("delta".into(), Value::from(b.delta));
    into.insert("eps_product".into(), Value::from(b.eps_product));
    into.insert("trace_used".into(), Value::from(b.trace_used));
    into.insert("secondary".into(), rat_value(&b.secondary));
    into.insert("dim".into(), Value::from(b.dim));
    into.insert(
        "orbit_multiplicity".into(),
        Value::from(b.orbit_multiplicity),
    );
    into.insert("dim_orbit".into(), Value::from(b.dim_orbit));
}

pub fn format_sign(s: i8) -> String {
    if s >= 0 {
        format!("+{s}")
    } else {
        s.to_string()
    }
}
