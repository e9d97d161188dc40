use crate::Failure;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Shortest representation that parses back to the same `f64`; empty for NaN.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { text: format!("{}\n", header.join(",")) }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn row_opt(&mut self, values: &[Option<f64>]) {
        let cells: Vec<String> = values.iter().map(|v| v.map(num).unwrap_or_default()).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush())
        }
    };
    res.map_err(|e| Failure::Numeric(format!("write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 123456789.123, -0.0, std::f64::consts::PI] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::NAN), "");
    }

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["a", "b"]);
        c.row(&[1.0, 0.5]);
        c.row_opt(&[None, Some(2.0)]);
        assert_eq!(c.finish(), "a,b\n1.0,0.5\n,2.0\n");
    }
}
