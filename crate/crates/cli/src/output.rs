//! Dataset serialisation.
//!
//! CSV: `#`-prefixed metadata lines, a header row, then one line per grid
//! point; failed points (when enabled) follow as `# error` comments.
//! JSON: a single object with `metadata`, `rows` (objects keyed by column)
//! and `errors`.

use std::fmt::Write as _;

use friction_phase::experiments::{Dataset, Metadata};
use serde::ser::{Serialize, SerializeMap, SerializeSeq, Serializer};

use crate::number::format_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn render(data: &Dataset, format: Format) -> String {
    match format {
        Format::Csv => to_csv(data),
        Format::Json => to_json(data),
    }
}

pub fn to_csv(data: &Dataset) -> String {
    let mut out = String::new();
    let m = &data.metadata;
    let _ = writeln!(out, "# name = {}", m.name);
    let _ = writeln!(out, "# target = {}", m.target);
    let _ = writeln!(out, "# version = {}", m.version);
    let _ = writeln!(out, "# quadrature = {}", m.quadrature);
    for (k, v) in &m.fixed {
        let _ = writeln!(out, "# fixed {k} = {}", format_f64(*v));
    }
    for (k, v) in &m.axes {
        let _ = writeln!(out, "# axis {k} = {v}");
    }
    for note in &m.notes {
        let _ = writeln!(out, "# note = {note}");
    }
    if let Some(ts) = &m.timestamp {
        let _ = writeln!(out, "# timestamp = {ts}");
    }
    out.push_str(&data.columns.join(","));
    out.push('\n');
    for row in &data.rows {
        let cells: Vec<String> = row.iter().map(|x| format_f64(*x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for e in &data.errors {
        let cells: Vec<String> = e.coordinates.iter().map(|x| format_f64(*x)).collect();
        let _ = writeln!(
            out,
            "# error row={} at {}: {}",
            e.index,
            cells.join(","),
            e.message
        );
    }
    out
}

struct Pairs<'a, V>(&'a [(String, V)]);

impl<V: Serialize> Serialize for Pairs<'_, V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct MetaView<'a>(&'a Metadata, &'a [String]);

impl Serialize for MetaView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("name", &m.name)?;
        map.serialize_entry("target", m.target.name())?;
        map.serialize_entry("version", &m.version)?;
        map.serialize_entry("quadrature", &m.quadrature)?;
        map.serialize_entry("fixed", &Pairs(&m.fixed))?;
        map.serialize_entry("axes", &Pairs(&m.axes))?;
        map.serialize_entry("notes", &m.notes)?;
        map.serialize_entry("columns", self.1)?;
        if let Some(ts) = &m.timestamp {
            map.serialize_entry("timestamp", ts)?;
        }
        map.end()
    }
}

struct Row<'a>(&'a [String], &'a [f64]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Rows<'a>(&'a Dataset);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Row(&self.0.columns, row))?;
        }
        seq.end()
    }
}

#[derive(serde::Serialize)]
struct ErrorView<'a> {
    row: usize,
    coordinates: &'a [f64],
    message: &'a str,
}

struct DatasetView<'a>(&'a Dataset);

impl Serialize for DatasetView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let d = self.0;
        let errors: Vec<ErrorView> = d
            .errors
            .iter()
            .map(|e| ErrorView {
                row: e.index,
                coordinates: &e.coordinates,
                message: &e.message,
            })
            .collect();
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("metadata", &MetaView(&d.metadata, &d.columns))?;
        map.serialize_entry("rows", &Rows(d))?;
        map.serialize_entry("errors", &errors)?;
        map.end()
    }
}

pub fn to_json(data: &Dataset) -> String {
    let mut s = serde_json::to_string_pretty(&DatasetView(data)).expect("dataset serialises");
    s.push('\n');
    s
}
