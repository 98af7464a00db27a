use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{ModelError, Result};
use crate::format::number;
use crate::model::SurfaceGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceFormat {
    /// gnuplot "nonuniform matrix" layout: a header row of `i_a` values,
    /// then one row per `i_n` value.
    GridText,
    /// `i_a,i_n,flops` rows, `i_n`-major.
    Csv,
}

impl FromStr for SurfaceFormat {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid-text" | "grid" => Ok(SurfaceFormat::GridText),
            "csv" => Ok(SurfaceFormat::Csv),
            other => Err(ModelError::UnknownFormat(other.to_owned())),
        }
    }
}

pub fn export_surface(surface: &SurfaceGrid, format: SurfaceFormat) -> Result<String> {
    match format {
        SurfaceFormat::GridText => Ok(grid_text(surface)),
        SurfaceFormat::Csv => Ok(csv_text(surface)),
    }
}

fn grid_text(surface: &SurfaceGrid) -> String {
    let mut out = String::new();
    out.push_str("# attainable FLOP/s\n");
    out.push_str("# first row: number of i_a columns, then i_a [FLOP/memory byte]\n");
    out.push_str("# other rows: i_n [FLOP/network byte], then FLOP/s for each i_a\n");
    let _ = write!(out, "{}", surface.i_a_values().len());
    for &a in surface.i_a_values() {
        let _ = write!(out, " {}", number(a));
    }
    out.push('\n');
    for (&n, row) in surface.i_n_values().iter().zip(surface.flops()) {
        out.push_str(&number(n));
        for &f in row {
            let _ = write!(out, " {}", number(f));
        }
        out.push('\n');
    }
    out
}

fn csv_text(surface: &SurfaceGrid) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // writing to a Vec cannot fail
    writer
        .write_record(["i_a", "i_n", "flops"])
        .expect("in-memory write");
    for (&n, row) in surface.i_n_values().iter().zip(surface.flops()) {
        for (&a, &f) in surface.i_a_values().iter().zip(row) {
            writer
                .write_record([number(a), number(n), number(f)])
                .expect("in-memory write");
        }
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("ascii output")
}
