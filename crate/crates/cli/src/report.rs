use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "yes" } else { "no" }.to_string())
    }
}

pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: ToString>(name: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.into_iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Two-column `quantity,value` table.
    pub fn summary(name: &str) -> Self {
        Self::new(name, ["quantity", "value"])
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn item(&mut self, quantity: &str, value: impl Into<Cell>) {
        self.push(vec![quantity.into(), value.into()]);
    }
}

#[derive(Default)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl Report {
    pub fn add(&mut self, table: Table) {
        self.tables.push(table);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    /// JSON document.
    Doc,
}

fn text(cell: &Cell, dp: usize) -> String {
    match cell {
        Cell::Num(x) => format!("{x:.dp$}"),
        Cell::Int(n) => n.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn value(cell: &Cell, dp: usize) -> Value {
    match cell {
        // round through the printed form so both formats agree digit for digit
        Cell::Num(x) if x.is_finite() => text(cell, dp).parse::<f64>().map_or(Value::Null, |v| json!(v)),
        Cell::Num(_) | Cell::Empty => Value::Null,
        Cell::Int(n) => json!(n),
        Cell::Text(s) => json!(s),
    }
}

/// CSV output: a lone table is written bare; several tables are each
/// introduced by a `# name` line and separated by a blank line.
pub fn render(report: &Report, format: Format, dp: usize) -> String {
    match format {
        Format::Csv => {
            let single = report.tables.len() == 1;
            let mut parts = Vec::new();
            for t in &report.tables {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.columns).expect("write to memory");
                for row in &t.rows {
                    w.write_record(row.iter().map(|c| text(c, dp))).expect("write to memory");
                }
                let body = String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8");
                parts.push(if single { body } else { format!("# {}\n{body}", t.name) });
            }
            parts.join("\n")
        }
        Format::Doc => {
            let tables: Vec<Value> = report
                .tables
                .iter()
                .map(|t| {
                    let rows: Vec<Value> =
                        t.rows.iter().map(|r| Value::Array(r.iter().map(|c| value(c, dp)).collect())).collect();
                    json!({ "name": t.name, "columns": t.columns, "rows": rows })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({ "tables": tables })).expect("serializable");
            s.push('\n');
            s
        }
    }
}
