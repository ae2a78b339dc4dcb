//! Report documents and their JSON and text renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::VerifyConfig;
use crate::exactnum::QSqrt2;
use crate::fields::{operator_table, NodeField, OperatorTable, TableVariant};
use crate::fock::{FockModel, Sector};
use crate::lattice::TypeData;
use crate::verifier::{table_diff, Adjudication, Counts, InstanceRecord, LevelReport, Relation, Status, SuiteReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Top-level report; field order is the JSON key order.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument<C: Serialize, S: Serialize> {
    pub config: C,
    pub instances: Vec<TaggedRecord>,
    pub summary: S,
    pub version: &'static str,
}

impl<C: Serialize, S: Serialize> ReportDocument<C, S> {
    pub fn new(config: C, instances: Vec<TaggedRecord>, summary: S) -> Self {
        ReportDocument { config, instances, summary, version: VERSION }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaggedRecord {
    pub variant: TableVariant,
    #[serde(flatten)]
    pub record: InstanceRecord,
}

pub fn tagged(reports: &[SuiteReport]) -> Vec<TaggedRecord> {
    reports
        .iter()
        .flat_map(|r| r.records.iter().map(|rec| TaggedRecord { variant: r.variant, record: rec.clone() }))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantSummary {
    pub variant: TableVariant,
    pub level: LevelReport,
    pub states: std::collections::BTreeMap<String, usize>,
    pub counts: std::collections::BTreeMap<Relation, Counts>,
    pub totals: Counts,
    pub passed: bool,
}

impl VariantSummary {
    pub fn of(r: &SuiteReport) -> Self {
        VariantSummary {
            variant: r.variant,
            level: r.level.clone(),
            states: r.states.clone(),
            counts: r.counts.clone(),
            totals: r.total(),
            passed: r.all_pass() && r.level.consistent,
        }
    }
}

/// Where the two table variants differ, as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub entry: String,
    pub paper_literal: String,
    pub systematic: String,
}

pub fn variant_diffs(td: &TypeData) -> Vec<DiffEntry> {
    let lit = operator_table(td, TableVariant::PaperLiteral);
    let sys = operator_table(td, TableVariant::Systematic);
    table_diff(&lit, &sys)
        .into_iter()
        .map(|(i, k)| DiffEntry {
            entry: k.label(i),
            paper_literal: lit.nodes[i].get(k).to_string(),
            systematic: sys.nodes[i].get(k).to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub variants: Vec<VariantSummary>,
    pub diffs: Vec<DiffEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjudication: Option<Adjudication>,
    pub notes: Vec<String>,
}

/// Notes on conventions that shape the numbers in a report.
pub fn notes(td: &TypeData, sector: Sector, model: FockModel, zero_mode_cap: usize) -> Vec<String> {
    let mut out = Vec::new();
    if sector == Sector::R {
        out.push(format!(
            "zero-mode polarization: plain zero modes b(0) act as creation operators and starred zero modes b*(0) \
             annihilate the vacuum; swept states carry at most {zero_mode_cap} zero modes"
        ));
    }
    out.push(match model {
        FockModel::Irreducible => "module: quotient by the states containing cbar oscillators (cbar pairs to zero \
                                   with every generator, so its components act as zero)"
            .to_string(),
        FockModel::Full => "module: full Fock space including cbar oscillators".to_string(),
    });
    if let Some(c) = td.rank_caveat {
        out.push(format!("rank caveat: {c}"));
    }
    out
}

fn opt_scalar(v: &Option<QSqrt2>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn render_level(l: &LevelReport) -> String {
    let nodes: Vec<String> = l.per_node.iter().map(opt_scalar).collect();
    format!(
        "level {} (per node: {}){}",
        opt_scalar(&l.global),
        nodes.join(", "),
        if l.consistent { "" } else { ", INCONSISTENT" }
    )
}

fn render_record(out: &mut String, r: &InstanceRecord) {
    let i = &r.instance;
    let sign =
        i.sign.map_or(String::new(), |s| if s == crate::verifier::Sign::Plus { " +".into() } else { " -".into() });
    let _ = write!(out, "    {}{} nodes {:?} modes {:?}: ", i.relation, sign, i.nodes, i.modes);
    match r.status {
        Status::Unrealizable => {
            let _ = writeln!(out, "unrealizable ({})", r.note.as_deref().unwrap_or(""));
        }
        _ => {
            let _ = writeln!(out, "{} of {} states fail", r.failures, r.states_checked);
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "      state #{} = {}", w.state_index, w.state);
                let _ = writeln!(out, "      lhs - rhs = {}", w.difference);
            }
        }
    }
}

const TEXT_FAILURE_LIMIT: usize = 12;

pub fn render_text(title: &str, reports: &[SuiteReport], s: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    for (r, v) in reports.iter().zip(&s.variants) {
        let _ = writeln!(out, "{}: {}", v.variant, render_level(&v.level));
        let states: Vec<String> = v.states.iter().map(|(k, n)| format!("{k} {n}")).collect();
        if !states.is_empty() {
            let _ = writeln!(out, "  states: {}", states.join(", "));
        }
        for (rel, c) in &v.counts {
            let _ = writeln!(
                out,
                "  {rel}: {} instances, {} passed, {} failed, {} unrealizable, {} state checks",
                c.instances, c.passed, c.failed, c.unrealizable, c.state_checks
            );
        }
        let bad: Vec<&InstanceRecord> = r.records.iter().filter(|x| x.status != Status::Pass).collect();
        if !bad.is_empty() {
            let _ = writeln!(out, "  not passing ({}):", bad.len());
            for x in bad.iter().take(TEXT_FAILURE_LIMIT) {
                render_record(&mut out, x);
            }
            if bad.len() > TEXT_FAILURE_LIMIT {
                let _ = writeln!(out, "    ... {} more in the JSON report", bad.len() - TEXT_FAILURE_LIMIT);
            }
        }
    }
    if !s.diffs.is_empty() {
        let _ = writeln!(out, "variant diffs:");
        for d in &s.diffs {
            let _ = writeln!(out, "  {}: paper-literal {} | systematic {}", d.entry, d.paper_literal, d.systematic);
        }
    }
    if let Some(a) = &s.adjudication {
        let _ = writeln!(out, "adjudication:");
        for d in &a.diffs {
            let sub = d.substitution_failures.map_or("n/a".to_string(), |n| n.to_string());
            let _ = writeln!(
                out,
                "  {}: operator-equal {}, paper-literal instances affected {}, failures with only this entry swapped {}",
                d.entry, d.operator_equal, d.literal_instances_affected, sub
            );
        }
        let _ = writeln!(out, "verdict: {}", a.verdict);
    }
    for n in &s.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "result: {}", if s.passed { "PASS" } else { "FAIL" });
    out
}

/// Static description of a type and its tables.
#[derive(Clone, Debug, Serialize)]
pub struct TablesSummary {
    pub name: String,
    pub simple_roots: Vec<String>,
    pub beta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_bar: Option<String>,
    pub alpha_max: String,
    pub d: Vec<QSqrt2>,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<String>,
    pub tables: Vec<TableDump>,
    pub diffs: Vec<DiffEntry>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDump {
    pub variant: TableVariant,
    pub nodes: Vec<Vec<(String, String)>>,
    pub roots: Vec<String>,
}

pub fn tables_summary(td: &TypeData, tables: &[OperatorTable]) -> TablesSummary {
    TablesSummary {
        name: td.name(),
        simple_roots: td.simple_roots.iter().map(|r| r.to_string()).collect(),
        beta: td.beta.to_string(),
        beta_bar: td.beta_bar.as_ref().map(|b| b.to_string()),
        alpha_max: td.alpha_max.to_string(),
        d: td.d.clone(),
        cartan: td.cartan.clone(),
        positive_roots: td.positive_roots.iter().map(|r| r.to_string()).collect(),
        tables: tables
            .iter()
            .map(|t| TableDump {
                variant: t.variant,
                nodes: t
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(i, n)| NodeField::ALL.iter().map(|&k| (k.label(i), n.get(k).to_string())).collect())
                    .collect(),
                roots: t.roots.iter().map(|f| format!("{} = {}", f.label, f)).collect(),
            })
            .collect(),
        diffs: variant_diffs(td),
        notes: td.rank_caveat.map(|c| vec![format!("rank caveat: {c}")]).unwrap_or_default(),
    }
}

pub fn render_tables(t: &TablesSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", t.name);
    for (i, r) in t.simple_roots.iter().enumerate() {
        let _ = writeln!(out, "  a{i} = {r}");
    }
    let _ = writeln!(out, "  beta = {}", t.beta);
    if let Some(b) = &t.beta_bar {
        let _ = writeln!(out, "  betabar = {b}");
    }
    let _ = writeln!(out, "  alpha_max = {}", t.alpha_max);
    let d: Vec<String> = t.d.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(out, "  d = ({})", d.join(", "));
    let _ = writeln!(out, "  cartan:");
    for row in &t.cartan {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
        let _ = writeln!(out, "   {}", cells.join(""));
    }
    let _ = writeln!(out, "  positive roots: {}", t.positive_roots.join("; "));
    for tab in &t.tables {
        let _ = writeln!(out, "{} table:", tab.variant);
        for node in &tab.nodes {
            for (label, text) in node {
                let _ = writeln!(out, "  {label} = {text}");
            }
        }
        for r in &tab.roots {
            let _ = writeln!(out, "  {r}");
        }
    }
    if t.diffs.is_empty() {
        let _ = writeln!(out, "variant diffs: none");
    } else {
        let _ = writeln!(out, "variant diffs:");
        for d in &t.diffs {
            let _ = writeln!(out, "  {}: paper-literal {} | systematic {}", d.entry, d.paper_literal, d.systematic);
        }
    }
    for n in &t.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

/// Config echo for `bracket`.
#[derive(Clone, Debug, Serialize)]
pub struct BracketConfig<'a> {
    #[serde(flatten)]
    pub base: &'a VerifyConfig,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketSummary {
    pub left: String,
    pub right: String,
    pub delta_part: String,
    pub ddelta_part: QSqrt2,
    /// `[X_m, Y_n] = C_{m+n} + m δ_{m+n,0} D`.
    pub mode_form: String,
}

pub fn render_bracket(b: &BracketSummary) -> String {
    format!(
        "[{}, {}]\n  delta part: {}\n  d/dw delta part: {}\n  modes: {}\n",
        b.left, b.right, b.delta_part, b.ddelta_part, b.mode_form
    )
}
