//! Tabular output with `#`-prefixed metadata, as CSV or JSON.
//!
//! Floats are written with 17 significant digits in CSV and shortest
//! round-trip form in JSON; both parse back to identical values. The
//! missing-value sentinel is `NA` in CSV and `null` in JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Number, Value as Json};

use crate::error::CliError;

pub const MISSING: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn opt(value: Option<f64>) -> Self {
        value.map_or(Cell::Missing, Cell::Num)
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => MISSING.to_string(),
        }
    }

    fn from_csv_field(field: &str) -> Self {
        if field == MISSING {
            return Cell::Missing;
        }
        let numeric_text = !field.is_empty()
            && field
                .bytes()
                .all(|b| b.is_ascii_digit() || b == b'-' || b == b'+');
        if numeric_text {
            if let Ok(i) = field.parse() {
                return Cell::Int(i);
            }
        }
        match field {
            "inf" | "-inf" | "NaN" => Cell::Num(field.parse().unwrap_or(f64::NAN)),
            _ if field.contains('e') && field.parse::<f64>().is_ok() => {
                Cell::Num(field.parse().unwrap_or(f64::NAN))
            }
            _ => Cell::Text(field.to_string()),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Num(x) => {
                Number::from_f64(*x).map_or_else(|| Json::String(x.to_string()), Json::Number)
            }
            Cell::Int(i) => json!(i),
            Cell::Text(s) => Json::String(s.clone()),
            Cell::Missing => Json::Null,
        }
    }

    fn from_json(v: &Json) -> Result<Self, CliError> {
        Ok(match v {
            Json::Null => Cell::Missing,
            Json::Number(n) if n.is_i64() => Cell::Int(n.as_i64().unwrap_or_default()),
            Json::Number(n) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
            Json::String(s) if matches!(s.as_str(), "inf" | "-inf" | "NaN") => {
                Cell::Num(s.parse().unwrap_or(f64::NAN))
            }
            Json::String(s) => Cell::Text(s.clone()),
            other => return Err(CliError::Parse(format!("unexpected JSON cell {other}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Copy, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a column, `None` where the cell is not numeric.
    pub fn numbers(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column(name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self, CliError> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?);
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut metadata = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (k, v) = line[1..]
                .trim_start()
                .split_once(": ")
                .ok_or_else(|| CliError::Parse(format!("malformed metadata line {line:?}")))?;
            metadata.insert(k.to_string(), v.to_string());
        }
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(Cell::from_csv_field).collect());
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let metadata: Map<String, Json> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Json::String(v.clone())))
            .collect();
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|r| Json::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({ "metadata": metadata, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Json = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let bad = |what: &str| CliError::Parse(format!("JSON table lacks {what}"));
        let metadata = doc["metadata"]
            .as_object()
            .ok_or_else(|| bad("metadata"))?
            .iter()
            .map(|(k, v)| {
                Ok((
                    k.clone(),
                    v.as_str()
                        .ok_or_else(|| bad("string metadata"))?
                        .to_string(),
                ))
            })
            .collect::<Result<_, CliError>>()?;
        let columns = doc["columns"]
            .as_array()
            .ok_or_else(|| bad("columns"))?
            .iter()
            .map(|c| {
                c.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| bad("string columns"))
            })
            .collect::<Result<_, _>>()?;
        let rows = doc["rows"]
            .as_array()
            .ok_or_else(|| bad("rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("row arrays"))?
                    .iter()
                    .map(Cell::from_json)
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["n", "x", "label", "maybe"]);
        t.meta("command", "demo").meta("grid", "0:1:3");
        t.push(vec![
            Cell::Int(3),
            Cell::Num(0.1),
            Cell::Text("set1".into()),
            Cell::Missing,
        ]);
        t.push(vec![
            Cell::Int(-4),
            Cell::Num(f64::INFINITY),
            Cell::Text("SQL".into()),
            Cell::Num(1.0 / 3.0),
        ]);
        t.push(vec![
            Cell::Int(0),
            Cell::Num(-2.5e-300),
            Cell::Text("a b".into()),
            Cell::Num(0.0),
        ]);
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let text = t.to_csv().unwrap();
        assert!(text.starts_with(
            "# command: demo\n# grid: 0:1:3\nn,x,label,maybe\n3,1.0000000000000001e-1,set1,NA\n"
        ));
        assert_eq!(Table::from_csv(&text).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let text = t.to_json().unwrap();
        assert!(text.contains("null"));
        assert_eq!(Table::from_json(&text).unwrap(), t);
    }

    #[test]
    fn numeric_helpers() {
        let t = sample();
        assert_eq!(t.numbers("maybe").unwrap()[0], None);
        assert_eq!(t.numbers("n").unwrap()[1], Some(-4.0));
        assert!(t.numbers("missing").is_none());
    }
}
