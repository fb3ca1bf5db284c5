//! Report model and the three renderers.
//!
//! A report is a list of sections, each either `key = value` fields or a
//! table. Rendering is a pure function of the report, so identical inputs
//! always give identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" | "text" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown output format `{other}` (expected table, csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as u64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

impl Value {
    fn plain(&self) -> String {
        match self {
            Value::Num(x) => fmt_g12(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => "n/a".to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Num(x) if x.is_finite() => fmt_g12(*x),
            Value::Num(_) | Value::Missing => "null".to_string(),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serializes"),
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros removed, exponent form
/// outside `[1e-4, 1e12)`.
pub fn fmt_g12(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Fields(Vec<(String, Value)>),
    Table { header: Vec<String>, rows: Vec<Vec<Value>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub body: Body,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub sections: Vec<Section>,
}

/// Builder for a `key = value` section.
pub struct Fields(Vec<(String, Value)>);

impl Fields {
    pub fn new() -> Self {
        Fields(Vec::new())
    }

    pub fn add(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.0.push((key.to_string(), value.into()));
    }
}

impl Report {
    pub fn fields(mut self, name: &str, fields: Fields) -> Self {
        self.sections.push(Section {
            name: name.to_string(),
            body: Body::Fields(fields.0),
        });
        self
    }

    pub fn table(mut self, name: &str, header: &[&str], rows: Vec<Vec<Value>>) -> Self {
        self.sections.push(Section {
            name: name.to_string(),
            body: Body::Table {
                header: header.iter().map(|h| h.to_string()).collect(),
                rows,
            },
        });
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "[{}]", s.name);
            match &s.body {
                Body::Fields(fields) => {
                    let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, v) in fields {
                        let _ = writeln!(out, "{k:<width$} = {}", v.plain());
                    }
                }
                Body::Table { header, rows } => {
                    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(Value::plain).collect()).collect();
                    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
                    for row in &cells {
                        for (w, c) in widths.iter_mut().zip(row) {
                            *w = (*w).max(c.len());
                        }
                    }
                    let line = |row: &[String]| {
                        row.iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:<w$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                            .trim_end()
                            .to_string()
                    };
                    let _ = writeln!(out, "{}", line(header));
                    for row in &cells {
                        let _ = writeln!(out, "{}", line(row));
                    }
                }
            }
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let titled = self.sections.len() > 1;
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            if titled {
                let _ = writeln!(out, "# {}", s.name);
            }
            match &s.body {
                Body::Fields(fields) => {
                    out.push_str("key,value\n");
                    for (k, v) in fields {
                        let _ = writeln!(out, "{},{}", csv_cell(k), csv_cell(&v.plain()));
                    }
                }
                Body::Table { header, rows } => {
                    let _ = writeln!(
                        out,
                        "{}",
                        header.iter().map(|h| csv_cell(h)).collect::<Vec<_>>().join(",")
                    );
                    for row in rows {
                        let _ = writeln!(
                            out,
                            "{}",
                            row.iter().map(|v| csv_cell(&v.plain())).collect::<Vec<_>>().join(",")
                        );
                    }
                }
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let key = |k: &str| serde_json::to_string(k).expect("string serializes");
        let mut out = String::from("{\n");
        for (i, s) in self.sections.iter().enumerate() {
            let _ = write!(out, "  {}: ", key(&s.name));
            match &s.body {
                Body::Fields(fields) => {
                    out.push_str("{\n");
                    for (j, (k, v)) in fields.iter().enumerate() {
                        let comma = if j + 1 < fields.len() { "," } else { "" };
                        let _ = writeln!(out, "    {}: {}{comma}", key(k), v.json());
                    }
                    out.push_str("  }");
                }
                Body::Table { header, rows } => {
                    out.push_str("[\n");
                    for (j, row) in rows.iter().enumerate() {
                        let obj = header
                            .iter()
                            .zip(row)
                            .map(|(h, v)| format!("{}: {}", key(h), v.json()))
                            .collect::<Vec<_>>()
                            .join(", ");
                        let comma = if j + 1 < rows.len() { "," } else { "" };
                        let _ = writeln!(out, "    {{{obj}}}{comma}");
                    }
                    out.push_str("  ]");
                }
            }
            out.push_str(if i + 1 < self.sections.len() { ",\n" } else { "\n" });
        }
        out.push_str("}\n");
        out
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_printf() {
        let cases = [
            (0.5, "0.5"),
            (1.0, "1"),
            (-2.0, "-2"),
            (0.25, "0.25"),
            (1.0 / 3.0, "0.333333333333"),
            (3.0f64.sqrt() * 0.375, "0.649519052838"),
            (1.2345678901234e-5, "1.23456789012e-05"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (9.99999999999951, "10"),
            (2.07e-4, "0.000207"),
            (6.02214076e23, "6.02214076e+23"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g12(x), want, "{x:e}");
        }
        assert_eq!(fmt_g12(f64::INFINITY), "inf");
        assert_eq!(fmt_g12(f64::NAN), "nan");
    }

    #[test]
    fn renders_each_format() {
        let r = Report::default()
            .fields("a", Fields::new().add("x", 0.5).add("ok", true).add("note", "p, q"))
            .table("t", &["dp", "dq"], vec![vec![1.0.into(), 0.25.into()]]);
        assert_eq!(
            r.render(Format::Table),
            "[a]\nx    = 0.5\nok   = true\nnote = p, q\n\n[t]\ndp  dq\n1   0.25\n"
        );
        assert_eq!(
            r.render(Format::Csv),
            "# a\nkey,value\nx,0.5\nok,true\nnote,\"p, q\"\n\n# t\ndp,dq\n1,0.25\n"
        );
        assert_eq!(
            r.render(Format::Json),
            "{\n  \"a\": {\n    \"x\": 0.5,\n    \"ok\": true,\n    \"note\": \"p, q\"\n  },\n  \"t\": [\n    {\"dp\": 1, \"dq\": 0.25}\n  ]\n}\n"
        );
    }

    #[test]
    fn json_is_parseable() {
        let r = Report::default().fields("s", Fields::new().add("inf", f64::INFINITY).add("m", Value::Missing));
        let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert!(v["s"]["inf"].is_null());
    }
}
