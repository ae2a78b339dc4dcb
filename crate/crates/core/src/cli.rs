//! The `toroidal` command line.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{parse_config, OutputFormat, Overrides, VerifyConfig};
use crate::error::{Error, Result};
use crate::fields::{operator_table, FieldRef, TableVariant};
use crate::lattice::{build_type, TypeData};
use crate::report::{self, BracketConfig, BracketSummary, ReportDocument, Summary, VariantSummary};
use crate::verifier::{adjudicate_tables, Engine, Relation};
use crate::wick::wick_bracket;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "toroidal", version, about = "Exact checks of bosonic toroidal Lie algebra realizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// TOML file with default settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print roots, Cartan matrix, d-vector and operator tables.
    Tables(Common),
    /// Check the relations over the bounded sweep.
    Verify(Common),
    /// Solve the central level at every node.
    Level(Common),
    /// Symbolic bracket of two table fields.
    Bracket {
        #[command(flatten)]
        common: Common,
        /// e.g. X(a0), X(-a1), a2, h(e1-e2).
        left: String,
        right: String,
    },
    /// Run both table variants and itemize where they differ.
    Adjudicate(Common),
}

struct Output {
    text: String,
    json: String,
    code: i32,
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_PASS
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = match resolve(&cli.command) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e}\n\nRun `toroidal --help` for usage.");
            return EXIT_USAGE;
        }
    };
    match execute(&cli.command, &cfg) {
        Ok(o) => {
            let body = match cfg.output {
                OutputFormat::Text => o.text,
                OutputFormat::Json => o.json,
            };
            let written = match &cfg.out_path {
                Some(p) => {
                    std::fs::write(p, &body).map_err(|source| Error::Io { path: p.display().to_string(), source })
                }
                None => out.write_all(body.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point used by the binary.
pub fn cli_main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn resolve(cmd: &Command) -> Result<VerifyConfig> {
    let common = match cmd {
        Command::Tables(c) | Command::Verify(c) | Command::Level(c) | Command::Adjudicate(c) => c,
        Command::Bracket { common, .. } => common,
    };
    let mut flags = common.flags.clone();
    if matches!(cmd, Command::Tables(_) | Command::Adjudicate(_)) && flags.variant.is_none() {
        // Both variants unless the file or the flags narrow it.
        let file_has_variant = match &common.config {
            Some(p) => Overrides::from_file(p)?.variant.is_some(),
            None => false,
        };
        if !file_has_variant {
            flags.variant = Some("both".into());
        }
    }
    parse_config(common.config.as_deref(), flags)
}

fn title(td: &TypeData, cfg: &VerifyConfig) -> String {
    format!("{} (n={}), {} sector, {} module", td.name(), td.rank, cfg.sector, cfg.model)
}

fn execute(cmd: &Command, cfg: &VerifyConfig) -> Result<Output> {
    let td = build_type(cfg.algebra, cfg.rank)?;
    let notes = report::notes(&td, cfg.sector, cfg.model, cfg.zero_mode_cap);
    match cmd {
        Command::Tables(_) => {
            let tables: Vec<_> = cfg.variant.variants().into_iter().map(|v| operator_table(&td, v)).collect();
            let summary = report::tables_summary(&td, &tables);
            Ok(Output {
                text: report::render_tables(&summary),
                json: ReportDocument::new(cfg, vec![], summary).to_json(),
                code: EXIT_PASS,
            })
        }
        Command::Verify(_) | Command::Level(_) => {
            let level_only = matches!(cmd, Command::Level(_));
            let relations = if level_only { [Relation::R0].into_iter().collect() } else { cfg.relations.clone() };
            let mut reports = Vec::new();
            for v in cfg.variant.variants() {
                let engine = Engine::new(&td, v, cfg.sector, cfg.model)?;
                reports.push(engine.run_suite(&cfg.bounds(), &relations, cfg.workers));
            }
            let variants: Vec<VariantSummary> = reports.iter().map(VariantSummary::of).collect();
            let passed = if level_only {
                variants.iter().all(|v| v.level.consistent)
            } else {
                variants.iter().all(|v| v.passed)
            };
            let summary = Summary { passed, variants, diffs: report::variant_diffs(&td), adjudication: None, notes };
            let mut text = String::new();
            if level_only {
                for v in &summary.variants {
                    let lam = v.level.global.as_ref().map_or("none".to_string(), |x| x.to_string());
                    if summary.variants.len() == 1 {
                        text.push_str(&format!("{lam}\n"));
                    } else {
                        text.push_str(&format!("{}: {lam}\n", v.variant));
                    }
                }
            }
            text.push_str(&report::render_text(&title(&td, cfg), &reports, &summary));
            Ok(Output {
                text,
                json: ReportDocument::new(cfg, report::tagged(&reports), summary).to_json(),
                code: if passed { EXIT_PASS } else { EXIT_FAIL },
            })
        }
        Command::Adjudicate(_) => {
            let (adj, reports) =
                adjudicate_tables(&td, cfg.sector, cfg.model, &cfg.bounds(), &cfg.relations, cfg.workers)?;
            let passed = adj.variants.iter().any(|v| v.passes_all && v.level.consistent);
            let summary = Summary {
                passed,
                variants: reports.iter().map(VariantSummary::of).collect(),
                diffs: report::variant_diffs(&td),
                adjudication: Some(adj),
                notes,
            };
            Ok(Output {
                text: report::render_text(&title(&td, cfg), &reports, &summary),
                json: ReportDocument::new(cfg, report::tagged(&reports), summary).to_json(),
                code: if passed { EXIT_PASS } else { EXIT_FAIL },
            })
        }
        Command::Bracket { left, right, .. } => {
            let variant = match cfg.variant.variants().as_slice() {
                [v] => *v,
                _ => TableVariant::Systematic,
            };
            let table = operator_table(&td, variant);
            let l: FieldRef = left.parse()?;
            let r: FieldRef = right.parse()?;
            let f = table.field(&l)?;
            let g = table.field(&r)?;
            let br = wick_bracket(f, g);
            let summary = BracketSummary {
                left: format!("{l} = {f}"),
                right: format!("{r} = {g}"),
                delta_part: br.delta_part.to_string(),
                ddelta_part: br.ddelta_part.clone(),
                mode_form: format!("[{l}_m, {r}_n] = ({})_(m+n) + m delta(m+n,0) ({})", br.delta_part, br.ddelta_part),
            };
            let echo = BracketConfig { base: cfg, left: l.to_string(), right: r.to_string() };
            Ok(Output {
                text: report::render_bracket(&summary),
                json: ReportDocument::new(echo, vec![], summary).to_json(),
                code: EXIT_PASS,
            })
        }
    }
}
