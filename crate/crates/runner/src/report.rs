//! The summary table: one row per family with its mechanism, witness and verdict.

use serde::Serialize;

use crate::pipeline::CaseOutcome;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub id: String,
    pub description: String,
    pub mechanism: String,
    pub witness: String,
    pub formula: String,
    pub verdict: String,
    pub status: String,
}

impl From<&CaseOutcome> for Row {
    fn from(o: &CaseOutcome) -> Self {
        Row {
            id: o.id.clone(),
            description: o.description.clone(),
            mechanism: o.mechanism.as_str().to_string(),
            witness: o.witness.join(", "),
            formula: o.formula.clone(),
            verdict: o.verdict.as_str().to_string(),
            status: o.status().as_str().to_string(),
        }
    }
}

pub fn rows(outcomes: &[CaseOutcome]) -> Vec<Row> {
    outcomes.iter().map(Row::from).collect()
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown table; formulas are left out to keep the table readable.
pub fn markdown(rows: &[Row]) -> String {
    let mut s = String::from("| id | description | mechanism | witness | verdict | status |\n");
    s.push_str("|---|---|---|---|---|---|\n");
    for r in rows {
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} |\n",
            cell(&r.id),
            cell(&r.description),
            r.mechanism,
            cell(&r.witness),
            r.verdict,
            r.status
        ));
    }
    s
}
