//! Deterministic serialization: JSON with 17-significant-digit floats
//! (round-trip exact for doubles) and fixed-schema CSV.

use std::io::Write;

use serde_json::ser::Formatter;
use serde_json::Value;

/// serde_json formatter that writes every f64 with 17 significant digits.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Fixed-width float for CSV cells: 17 significant digits.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_json_string(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    serde::Serialize::serialize(value, &mut ser).expect("JSON serialization");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Write to the path or stdout.
pub fn emit(output: &Option<String>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(Into::into),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_exactly() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 2.0f64.powi(-40), 0.1 + 0.2] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_numbers_use_scientific_form() {
        let v = json!({"a": 0.5, "b": [1.0, 2.0]});
        let s = to_json_string(&v);
        assert!(s.contains("5.0000000000000000e-1"), "{s}");
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["a"].as_f64(), Some(0.5));
    }
}
