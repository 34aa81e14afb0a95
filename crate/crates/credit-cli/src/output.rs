//! Column-oriented report rendering: JSON (array of objects), CSV
//! ('.' decimal, header row, fixed column order) and aligned text tables.

use serde_json::{json, Value};

#[derive(Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
}

impl Cell {
    pub fn text(s: &str) -> Self {
        Cell::Text(s.to_string())
    }

    pub fn num(x: f64) -> Self {
        Cell::Num(x)
    }

    fn to_display(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(x) => format!("{x:.6}"),
        }
    }

    fn to_value(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Num(x) => json!(x),
        }
    }
}

pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert!(cells.len() <= self.columns.len());
        self.rows.push(cells);
    }

    pub fn to_json(&self) -> String {
        let objects: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    obj.insert(name.clone(), cell.to_value());
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&objects).expect("static schema");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|c| {
                    let s = c.to_display();
                    if s.contains(',') || s.contains('"') {
                        format!("\"{}\"", s.replace('"', "\"\""))
                    } else {
                        s
                    }
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::to_display).collect())
            .collect();
        for row in &rendered {
            for (i, s) in row.iter().enumerate() {
                widths[i] = widths[i].max(s.len());
            }
        }
        let mut out = String::new();
        let fmt_line = |cells: &[String], out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, s)| format!("{:>width$}", s, width = widths[i]))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        };
        fmt_line(&self.columns, &mut out);
        for row in &rendered {
            fmt_line(row, &mut out);
        }
        out
    }
}
