//! JSON, CSV and text renderings of a correlator table.

use num_traits::Zero;
use serde::Serialize;

use super::residual::ResidualReport;
use super::table::{render_insertions, IndexSet, spin_selection_filter, Caps, CorrelatorTable, Insertion};
use crate::error::Result;
use crate::exact_series::{fmt_rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
struct Entry<'a> {
    g: u32,
    insertions: &'a [Insertion],
    value: String,
}

#[derive(Serialize)]
struct Document<'a> {
    h: u32,
    caps: Caps,
    correlators: Vec<Entry<'a>>,
    residual_report: Option<&'a ResidualReport>,
}

/// Renders the table. Zero entries are omitted unless `include_zeros`.
pub fn render_table(
    table: &CorrelatorTable,
    residuals: Option<&ResidualReport>,
    format: Format,
    include_zeros: bool,
) -> Result<String> {
    let rows: Vec<(u32, Vec<Insertion>, String)> = table
        .sorted_entries()
        .into_iter()
        .filter(|(_, _, v)| include_zeros || !v.is_zero())
        .map(|(g, ins, v)| (g, ins, fmt_rat(v)))
        .collect();
    Ok(match format {
        Format::Json => {
            let doc = Document {
                h: table.h,
                caps: table.caps,
                correlators: rows
                    .iter()
                    .map(|(g, ins, v)| Entry { g: *g, insertions: ins, value: v.clone() })
                    .collect(),
                residual_report: residuals,
            };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("g,insertions,value\n");
            for (g, ins, v) in &rows {
                let parts: Vec<String> = ins.iter().map(|x| format!("{}:{}", x.i, x.k)).collect();
                s.push_str(&format!("{g},{},{v}\n", parts.join(" ")));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (g, ins, v) in &rows {
                s.push_str(&format!("{}_{g} = {v}\n", render_insertions(ins)));
            }
            s
        }
    })
}

/// Entries rejected by [`spin_selection_filter`] and whether the solver
/// agreed they vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpinFilterReport {
    pub filtered: usize,
    /// Filtered entries the solver found nonzero.
    pub disagreements: Vec<String>,
}

/// Sets every entry failing the filter to zero, recording disagreements.
pub fn apply_spin_filter(table: &mut CorrelatorTable) -> SpinFilterReport {
    let mut report = SpinFilterReport::default();
    let h = table.h;
    let keys: Vec<(u32, IndexSet)> = table.iter().map(|(g, k, _)| (g, k.clone())).collect();
    for (g, key) in keys {
        let ins = table.insertions(&key);
        if spin_selection_filter(g, &ins, h) {
            continue;
        }
        report.filtered += 1;
        let v = table.get(g, &key).cloned().unwrap_or_default();
        if !v.is_zero() {
            report.disagreements.push(format!("{}_{g} = {}", render_insertions(&ins), fmt_rat(&v)));
        }
        table.insert(g, key, Rational::zero());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_series::{int, rat};

    fn small() -> CorrelatorTable {
        let mut t = CorrelatorTable::new(2, Caps { g_max: 1, weight_max: 3 });
        t.insert_insertions(0, &[Insertion { i: 1, k: 0 }; 3], int(1));
        t.insert_insertions(1, &[Insertion { i: 1, k: 1 }], rat(1, 24));
        t.insert_insertions(1, &[Insertion { i: 1, k: 0 }], int(0));
        t
    }

    #[test]
    fn csv_and_text() {
        let t = small();
        assert_eq!(
            render_table(&t, None, Format::Csv, false).unwrap(),
            "g,insertions,value\n0,1:0 1:0 1:0,1\n1,1:1,1/24\n"
        );
        assert_eq!(
            render_table(&t, None, Format::Text, true).unwrap(),
            "<v1psi^0 v1psi^0 v1psi^0>_0 = 1\n<v1psi^0>_1 = 0\n<v1psi^1>_1 = 1/24\n"
        );
    }

    #[test]
    fn json_schema() {
        let s = render_table(&small(), None, Format::Json, false).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["h"], 2);
        assert_eq!(v["caps"]["g_max"], 1);
        assert_eq!(v["correlators"][1]["insertions"][0]["k"], 1);
        assert_eq!(v["correlators"][1]["value"], "1/24");
        assert!(v["residual_report"].is_null());
    }
}
