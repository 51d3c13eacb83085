use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use spinshift::verify::CheckResult;

/// 17 significant digits so reruns can be compared byte for byte; non-finite
/// values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x == 0.0 {
        // keeps -0.0 and 0.0 textually identical
        return Value::Number(Number::from(0));
    }
    Number::from_str(&format!("{x:.16e}"))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Text form of a number for CSV cells, same precision as JSON.
pub fn cell(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

pub fn check_json(c: &CheckResult) -> Value {
    json!({
        "name": c.name,
        "passed": c.passed,
        "value": num(c.value),
        "tolerance": num(c.tolerance),
        "detail": c.detail,
    })
}

pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub results: Vec<Value>,
    pub checks: Vec<CheckResult>,
    /// Header and rows for the CSV rendering.
    pub table: (Vec<&'static str>, Vec<Vec<String>>),
}

impl Report {
    pub fn new(command: &'static str, config: Map<String, Value>) -> Self {
        Report {
            command,
            config,
            results: Vec::new(),
            checks: Vec::new(),
            table: (Vec::new(), Vec::new()),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let value = json!({
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "checks": self.checks.iter().map(check_json).collect::<Vec<_>>(),
            "version": env!("CARGO_PKG_VERSION"),
        });
        let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let (header, rows) = &self.table;
        let mut out = String::new();
        let _ = writeln!(out, "{}", header.join(","));
        for row in rows {
            let _ = writeln!(out, "{}", row.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
        }
        out
    }
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(-3.0).to_string(), "-3.0000000000000000e+0");
        assert_eq!(num(-0.0).to_string(), "0");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(cell(f64::INFINITY), "");
    }

    #[test]
    fn csv_quotes_awkward_fields() {
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("plain"), "plain");
    }
}
