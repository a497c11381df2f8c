//! Plain tables and their text, CSV and JSON renderings.

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub caption: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, caption: &str, headers: &[&str]) -> Self {
        Self {
            name: name.into(),
            caption: caption.into(),
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        json!({ "name": self.name, "caption": self.caption, "headers": self.headers, "rows": self.rows })
    }

    fn render_text(&self, out: &mut String) {
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| {
                self.rows
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.headers[j].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> =
                cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            padded.join("  ").trim_end().to_string()
        };
        out.push_str(&format!("== {} ==\n", self.caption));
        out.push_str(&line(&self.headers));
        out.push('\n');
        out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
    }

    fn render_csv(&self, out: &mut String) {
        out.push_str(&format!("# {}\n", self.name));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
    }
}

/// What a command produces: tables for humans and spreadsheets, and a
/// structured document for machines.
#[derive(Debug, Clone)]
pub struct Document {
    pub tables: Vec<Table>,
    pub json: Option<Value>,
}

impl Document {
    pub fn tables(tables: Vec<Table>) -> Self {
        Self { tables, json: None }
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    t.render_text(&mut out);
                }
            }
            Format::Csv => {
                for (i, t) in self.tables.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    t.render_csv(&mut out);
                }
            }
            Format::Json => {
                let v = self.json.clone().unwrap_or_else(|| {
                    json!({ "tables": self.tables.iter().map(Table::to_json).collect::<Vec<_>>() })
                });
                out = serde_json::to_string_pretty(&v).expect("serializable");
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Document {
        let mut t = Table::new("t", "A table", &["a", "long header"]);
        t.push(vec!["1/2".into(), "x, y".into()]);
        Document::tables(vec![t])
    }

    #[test]
    fn text_columns_align() {
        let s = sample().render(Format::Text);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "== A table ==");
        assert_eq!(lines[1], "a    long header");
        assert_eq!(lines[3], "1/2  x, y");
    }

    #[test]
    fn csv_quotes_commas() {
        let s = sample().render(Format::Csv);
        assert!(s.contains("1/2,\"x, y\""));
    }

    #[test]
    fn json_lists_rows() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["tables"][0]["rows"][0][0], "1/2");
    }
}
