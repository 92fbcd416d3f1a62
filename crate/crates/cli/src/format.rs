use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use subharnack::verify::BoundReport;

/// Formats like C's `%.17g`: enough digits to round-trip any f64.
pub fn g17(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        trim_zeros(format!("{v:.*}", (16 - exp) as usize))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Pretty JSON whose floats use [`g17`].
struct G17Formatter(PrettyFormatter<'static>);

impl Formatter for G17Formatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(g17(v).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, G17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub const CSV_COLUMNS: [&str; 13] = [
    "check",
    "alpha",
    "kappa",
    "p",
    "t",
    "x",
    "y",
    "f",
    "lhs",
    "rhs",
    "slack",
    "valid_domain",
    "method",
];

fn opt(v: Option<f64>) -> String {
    v.map(g17).unwrap_or_default()
}

fn point(p: &Option<subharnack::semigroup::Point>) -> String {
    p.as_ref()
        .map(|p| {
            p.coords()
                .iter()
                .map(|c| g17(*c))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default()
}

pub fn reports_csv(entries: &[BoundReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory csv");
    for e in entries {
        w.write_record([
            e.check.clone(),
            opt(e.alpha),
            opt(e.kappa),
            opt(e.p),
            opt(e.t),
            point(&e.x),
            point(&e.y),
            e.f.clone().unwrap_or_default(),
            g17(e.lhs),
            g17(e.rhs),
            g17(e.slack),
            e.valid_domain.to_string(),
            e.method.as_str().to_string(),
        ])
        .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv of UTF-8 fields")
}

/// Two-column name/value table.
pub fn pairs_csv(rows: &[(&str, f64)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "value"]).expect("in-memory csv");
    for (k, v) in rows {
        w.write_record([k.to_string(), g17(*v)])
            .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv of UTF-8 fields")
}
