use std::fmt;
use std::str::FromStr;

use relkit_core::relations::Relation;
use relkit_core::tuples::Index;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Tsv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!(
                "unknown format {other:?}; expected table, csv or tsv"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Tsv => "tsv",
        })
    }
}

/// Cell text for every tuple, in the relation's canonical tuple order.
fn rows(rel: &Relation, columns: &[Index]) -> Vec<Vec<String>> {
    rel.extent()
        .iter()
        .map(|t| {
            columns
                .iter()
                .map(|i| t.get(i).map(|a| a.payload.to_string()).unwrap_or_default())
                .collect()
        })
        .collect()
}

fn delimited(header: &[String], rows: &[Vec<String>], delimiter: u8) -> String {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("fields are UTF-8")
}

fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        format!(" {} \n", padded.join(" | "))
    };
    let mut out = line(header);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(w + 2)).collect();
    out.push_str(&rule.join("+"));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r));
    }
    let n = rows.len();
    out.push_str(&format!("({n} {})\n", if n == 1 { "row" } else { "rows" }));
    out
}

/// Renders `rel` with the given column order. Rows follow the canonical
/// tuple order, so the output depends on the relation alone.
pub fn render(rel: &Relation, columns: &[Index], format: Format) -> String {
    let header: Vec<String> = columns.iter().map(|i| i.to_string()).collect();
    let rows = rows(rel, columns);
    match format {
        Format::Table => table(&header, &rows),
        Format::Csv => delimited(&header, &rows, b','),
        Format::Tsv => delimited(&header, &rows, b'\t'),
    }
}
