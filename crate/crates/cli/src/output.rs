//! Tabular output in CSV or JSON with 12 significant digits.

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// below 1e-4 and from 1e12 up.
pub fn fmt_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => fmt_sig(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Num(x) if x.is_finite() => {
            fmt_sig(*x).parse::<f64>().ok().and_then(Number::from_f64).map_or(Value::Null, Value::Number)
        }
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Int(i) => Value::from(*i),
        Cell::Text(s) => Value::from(s.as_str()),
    }
}

pub fn render_csv(table: &Table) -> String {
    let mut out = table.columns.join(",");
    out.push('\n');
    for row in &table.rows {
        let fields: Vec<String> = row.iter().map(csv_field).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(table: &Table) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> =
                table.columns.iter().zip(row).map(|(k, v)| (k.to_string(), json_value(v))).collect();
            Value::Object(obj)
        })
        .collect();
    let mut top = Map::new();
    top.insert("schema".into(), Value::from(1));
    top.insert("command".into(), Value::from(table.command));
    top.insert("rows".into(), Value::Array(rows));
    let mut s = serde_json::to_string_pretty(&Value::Object(top)).expect("json");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-3.7338479312345678), "-3.73384793123");
        assert_eq!(fmt_sig(0.333359787164812), "0.333359787165");
        assert_eq!(fmt_sig(1.5e-5), "1.5e-05");
        assert_eq!(fmt_sig(1.234e-12), "1.234e-12");
        assert_eq!(fmt_sig(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(26.31113), "26.31113");
        assert_eq!(fmt_sig(999999999999.5), "1e+12");
        assert_eq!(fmt_sig(f64::NAN), "nan");
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn csv_and_json_carry_same_numbers() {
        let mut t = Table::new("demo", &["i", "x", "tag", "gap"]);
        t.push(vec![Cell::from(0usize), Cell::from(std::f64::consts::PI), "a,b".into(), Cell::Empty]);
        let csv = render_csv(&t);
        assert_eq!(csv, "i,x,tag,gap\n0,3.14159265359,\"a,b\",\n");
        let json: Value = serde_json::from_str(&render_json(&t)).unwrap();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["rows"][0]["x"].as_f64().unwrap(), 3.14159265359);
        assert!(json["rows"][0]["gap"].is_null());
        let keys: Vec<&String> = json["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["i", "x", "tag", "gap"]);
    }
}
