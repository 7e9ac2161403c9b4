//! Command reports rendered as aligned text or as flat `key=value` lines.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Vector(Vec<f64>),
    /// Rendered 1-based.
    Indices(Vec<usize>),
    List(Vec<String>),
}

/// Ordered key/value rows for one command invocation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    rows: Vec<(String, Value)>,
}

/// Fixed 17-significant-digit form used by the machine format.
pub fn machine_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.push("command", Value::Text(command.to_string()));
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.rows.push((key.into(), value));
        self
    }

    pub fn real(&mut self, key: impl Into<String>, x: f64) -> &mut Self {
        self.push(key, Value::Real(x))
    }

    pub fn vector(&mut self, key: impl Into<String>, x: &[f64]) -> &mut Self {
        self.push(key, Value::Vector(x.to_vec()))
    }

    pub fn text(&mut self, key: impl Into<String>, s: impl Into<String>) -> &mut Self {
        self.push(key, Value::Text(s.into()))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.rows.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn rows(&self) -> &[(String, Value)] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Machine => self.render_machine(),
        }
    }

    fn render_text(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.rows {
            let shown = match v {
                Value::Real(x) => format!("{x}"),
                Value::Int(i) => i.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Text(s) => s.clone(),
                Value::Vector(x) => {
                    let parts: Vec<String> = x.iter().map(|c| format!("{c}")).collect();
                    format!("({})", parts.join(", "))
                }
                Value::Indices(ix) => {
                    let parts: Vec<String> = ix.iter().map(|i| (i + 1).to_string()).collect();
                    format!("{{{}}}", parts.join(", "))
                }
                Value::List(items) if items.is_empty() => "-".to_string(),
                Value::List(items) => items.join(", "),
            };
            let _ = writeln!(out, "{k:<width$}  {shown}");
        }
        out
    }

    fn render_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.rows {
            let shown = match v {
                Value::Real(x) => machine_real(*x),
                Value::Int(i) => i.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Text(s) => s.clone(),
                Value::Vector(x) => x
                    .iter()
                    .map(|c| machine_real(*c))
                    .collect::<Vec<_>>()
                    .join(","),
                Value::Indices(ix) => ix
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                Value::List(items) => items.join(","),
            };
            let _ = writeln!(out, "{k}={shown}");
        }
        out
    }
}

/// Parses the machine format back into `(key, raw value)` pairs.
pub fn parse_machine(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_reals_have_17_digits() {
        assert_eq!(machine_real(0.5), "5.0000000000000000e-1");
        assert_eq!(machine_real(0.1), "1.0000000000000001e-1");
        assert_eq!(machine_real(-8.0), "-8.0000000000000000e0");
        for x in [0.1, 1.0 / 3.0, 2f64.sqrt(), -1e-300, 6.02e23] {
            assert_eq!(machine_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn renders_both_formats() {
        let mut r = Report::new("alpha");
        r.real("value", 1.0)
            .vector("z", &[0.0, 0.5])
            .push("support", Value::Indices(vec![1]))
            .push("flags", Value::List(vec![]))
            .push("certified", Value::Bool(true));
        assert_eq!(
            r.render(Format::Text),
            "command    alpha\nvalue      1\nz          (0, 0.5)\nsupport    {2}\nflags      -\ncertified  true\n"
        );
        let m = r.render(Format::Machine);
        assert_eq!(
            m,
            "command=alpha\nvalue=1.0000000000000000e0\nz=0.0000000000000000e0,5.0000000000000000e-1\nsupport=2\nflags=\ncertified=true\n"
        );
        assert_eq!(
            parse_machine(&m)[2],
            (
                "z".into(),
                "0.0000000000000000e0,5.0000000000000000e-1".into()
            )
        );
    }
}
