use serde_json::Value;
use waring_core::report::{csv_line, fmt_f64};

/// What a subcommand hands back: the JSON document plus, where the report
/// has a fixed tabular schema, its CSV header and rows.
pub struct Report {
    pub json: Value,
    pub table: Option<(String, Vec<String>)>,
    /// Replaces the key/value listing in pretty mode.
    pub pretty: Option<String>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            table: None,
            pretty: None,
        }
    }

    pub fn with_table(mut self, header: &str, rows: Vec<String>) -> Self {
        self.table = Some((header.to_string(), rows));
        self
    }

    pub fn with_pretty(mut self, text: String) -> Self {
        self.pretty = Some(text);
        self
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("serializable report");
        s.push('\n');
        s
    }

    pub fn render_csv(&self) -> String {
        let (header, rows) = match &self.table {
            Some((h, r)) => (h.clone(), r.clone()),
            None => {
                let mut cells = Vec::new();
                flatten(&self.json, String::new(), &mut cells);
                let header = csv_line(cells.iter().map(|(k, _)| k.as_str()));
                let row = csv_line(cells.iter().map(|(_, v)| v.as_str()));
                (header, vec![row])
            }
        };
        let mut out = header;
        out.push('\n');
        for r in rows {
            out.push_str(&r);
            out.push('\n');
        }
        out
    }

    pub fn render_pretty(&self) -> String {
        if let Some(p) = &self.pretty {
            return format!("{p}\n");
        }
        let mut cells = Vec::new();
        flatten(&self.json, String::new(), &mut cells);
        let width = cells.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        cells
            .iter()
            .map(|(k, v)| format!("{k:<width$}  {v}\n"))
            .collect()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().expect("f64")),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Dotted keys for objects. Arrays of scalars join with `;`, arrays of
/// objects are kept as compact JSON.
fn flatten(v: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(child, key, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push((prefix, items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(_) => out.push((prefix, v.to_string())),
        _ => out.push((prefix, scalar(v))),
    }
}
