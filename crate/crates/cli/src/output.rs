//! Human, TSV and JSON renderings of command reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Json,
    Tsv,
}

/// A report that can be shown as rows as well as JSON.
pub trait Tabular: Serialize {
    /// Header and rows. The default flattens the JSON form to key/value pairs.
    fn table(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut rows = Vec::new();
        flatten(
            "",
            &serde_json::to_value(self).expect("reports serialize"),
            &mut rows,
        );
        (
            vec!["field".into(), "value".into()],
            rows.into_iter().map(|(k, v)| vec![k, v]).collect(),
        )
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_owned()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(xs) => xs
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        Value::Null => out.push((prefix.to_owned(), "-".into())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

pub fn render<T: Tabular>(report: &T, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Tsv => {
            let (header, rows) = report.table();
            std::iter::once(header)
                .chain(rows)
                .map(|r| r.join("\t") + "\n")
                .collect()
        }
        Format::Human => {
            let (header, rows) = report.table();
            let widths: Vec<usize> = (0..header.len())
                .map(|i| {
                    std::iter::once(&header)
                        .chain(&rows)
                        .map(|r| r[i].chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |r: &Vec<String>| {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                cells.join("  ").trim_end().to_owned() + "\n"
            };
            std::iter::once(&header).chain(&rows).map(line).collect()
        }
    }
}
