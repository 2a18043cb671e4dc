// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Tabular output: fixed column order (grid axes, observables in
//! alphabetical order, diagnostics, `err`), floats with 17 significant digits
//! and empty cells for anything not computed.

use std::io::Write;

use nessie_core::Statistics;
use serde_json::{Map, Value};

use crate::evaluate::{PointValues, Quantity, QuantitySet};
use crate::setup::Axis;
use crate::sweep::Row;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn num(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }

    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    /// An array of objects keyed by column name, `null` for empty cells.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.clone(), v.to_json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Diagnostic {
    Balance,
    Branch,
    I3Spread,
    MinEig,
    Residual,
}

impl Diagnostic {
    fn name(self) -> &'static str {
        match self {
            Diagnostic::Balance => "balance",
            Diagnostic::Branch => "branch",
            Diagnostic::I3Spread => "i3_spread",
            Diagnostic::MinEig => "min_eig",
            Diagnostic::Residual => "residual",
        }
    }

    fn cell(self, v: &PointValues) -> Cell {
        match self {
            Diagnostic::Balance => Cell::num(v.balance),
            Diagnostic::Branch => v
                .branch
                .map_or(Cell::Empty, |b| Cell::Text(b.as_str().to_string())),
            Diagnostic::I3Spread => Cell::num(v.i3_spread),
            Diagnostic::MinEig => Cell::num(v.min_eig),
            Diagnostic::Residual => Cell::num(v.residual),
        }
    }
}

fn diagnostics_for(quantities: &QuantitySet) -> Vec<Diagnostic> {
    let mut d = vec![Diagnostic::MinEig, Diagnostic::Residual];
    if quantities.contains(&Quantity::I2) {
        d.push(Diagnostic::Branch);
    }
    if quantities.contains(&Quantity::I3) {
        d.push(Diagnostic::I3Spread);
    }
    if [Quantity::Current1, Quantity::Current2, Quantity::Sigma]
        .iter()
        .any(|q| quantities.contains(q))
    {
        d.push(Diagnostic::Balance);
    }
    d.sort();
    d
}

fn ordered_quantities(quantities: &QuantitySet, statistics: Statistics) -> Vec<Quantity> {
    let mut q: Vec<Quantity> = quantities.iter().copied().collect();
    q.sort_by_key(|q| q.column(statistics));
    q
}

/// Table of observables over grid rows.
pub fn observable_table(axes: &[Axis], quantities: &QuantitySet, statistics: Statistics, rows: &[Row]) -> Table {
    let qs = ordered_quantities(quantities, statistics);
    let diags = diagnostics_for(quantities);
    let mut columns: Vec<String> = axes.iter().map(|a| a.name().to_string()).collect();
    columns.extend(qs.iter().map(|q| q.column(statistics).to_string()));
    columns.extend(diags.iter().map(|d| d.name().to_string()));
    columns.push("err".to_string());

    let mut table = Table::new(columns);
    for row in rows {
        let mut cells: Vec<Cell> = row.coords.iter().map(|&x| Cell::Num(x)).collect();
        match &row.outcome {
            Ok(v) => {
                cells.extend(qs.iter().map(|&q| Cell::num(v.get(q))));
                cells.extend(diags.iter().map(|d| d.cell(v)));
                cells.push(Cell::Text(v.error_text()));
            }
            Err(e) => {
                cells.extend(std::iter::repeat_n(Cell::Empty, qs.len() + diags.len()));
                cells.push(Cell::Text(e.clone()));
            }
        }
        table.push(cells);
    }
    table
}
