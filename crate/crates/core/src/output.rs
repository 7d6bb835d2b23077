//! Result persistence: CSV with a `#` metadata block, or JSON.

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    /// `json` for a `.json` extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}` (expected csv or json)")),
        }
    }
}

/// A result that can be laid out as a CSV table.
pub trait Tabular {
    fn header(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;
}

/// `x` with 6 significant digits, `.` as the decimal separator.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let text = format!("{x:.decimals$}");
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

pub fn render_csv<T: Tabular>(result: &T, metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    for (key, value) in metadata {
        let _ = writeln!(out, "# {key}: {value}");
    }
    out.push_str(&result.header().join(","));
    out.push('\n');
    for row in result.rows() {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json<T: Serialize>(result: &T) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("results serialize to JSON");
    text.push('\n');
    text
}

/// Writes `result` to `path`. Identical inputs give identical bytes.
pub fn write_results<T: Tabular + Serialize>(
    result: &T,
    path: &Path,
    format: OutputFormat,
    metadata: &[(String, String)],
) -> io::Result<()> {
    let text = match format {
        OutputFormat::Csv => render_csv(result, metadata),
        OutputFormat::Json => render_json(result),
    };
    std::fs::write(path, text)
}

/// Serializes a `BigRational` as `"p/q"` text.
pub mod ratio_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

pub mod opt_ratio_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|text| text.parse().map_err(D::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Table {
        rows: Vec<(u32, f64)>,
    }

    impl Tabular for Table {
        fn header(&self) -> Vec<&'static str> {
            vec!["id", "value"]
        }
        fn rows(&self) -> Vec<Vec<String>> {
            self.rows.iter().map(|(i, v)| vec![i.to_string(), sig6(*v)]).collect()
        }
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.135335283), "0.135335");
        assert_eq!(sig6(-3.4120230), "-3.41202");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(123456789.0), "123456789");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.00435497), "0.00435497");
        assert_eq!(sig6(1.5e-9), "1.50000e-9");
    }

    #[test]
    fn csv_layout() {
        let t = Table { rows: vec![(1, 0.5)] };
        let meta = vec![("seed".to_string(), "7".to_string())];
        assert_eq!(render_csv(&t, &meta), "# seed: 7\nid,value\n1,0.5\n");
        let empty = Table { rows: vec![] };
        assert_eq!(render_csv(&empty, &[]), "id,value\n");
    }

    #[test]
    fn json_round_trip_and_stability() {
        let t = Table { rows: vec![(1, 0.25), (2, 0.75)] };
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        write_results(&t, &a, OutputFormat::Json, &[]).unwrap();
        write_results(&t, &b, OutputFormat::Json, &[]).unwrap();
        let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ta, tb);
        let back: Table = serde_json::from_slice(&ta).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn format_selection() {
        assert_eq!(OutputFormat::from_path(Path::new("x.JSON")), OutputFormat::Json);
        assert_eq!(OutputFormat::from_path(Path::new("x.csv")), OutputFormat::Csv);
        assert_eq!("json".parse::<OutputFormat>().unwrap(), OutputFormat::Json);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
