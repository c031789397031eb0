//! `engel`: sinks of single elements, and catalog-wide checks and reports.
//!
//! Exit status: 0 when every check passes, 1 when a mathematical check
//! fails, 2 on usage, input or configuration errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use engel_core::checks::CheckId;
use engel_core::harness::{render, run, Format, Report, RunConfig};
use engel_core::rank::{rank, RankConfig};
use engel_core::{catalog, sinks, Error, Permutation};

#[derive(Parser)]
#[command(name = "engel", version, about = "Engel sinks, ranks and nilpotent residuals of finite permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the minimal Engel sink of one element.
    Sink {
        /// Group file, or a name such as S4, D5, C2^3, SL2(5), Q16, C7:C3, A<b>(r=2).
        #[arg(long)]
        group: String,
        /// Element in 1-based cycle notation, e.g. "(1 2)(3 4)".
        #[arg(long)]
        element: String,
    },
    /// Run the identity checks over a catalog (all four unless --lemmas is given); exits 1 on any failure.
    Verify(RunArgs),
    /// Tabulate order, solubility, Fitting height, rank(G), r* and rank of the nilpotent residual.
    Report(RunArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML file with the same keys as these flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// default, nilpotent, examples, a group name, a group file or a directory of .group files.
    #[arg(long)]
    catalog: Option<String>,
    /// Largest group order kept from the catalog [default: 2000].
    #[arg(long)]
    max_order: Option<u64>,
    /// Comma-separated subset of kovacs,lprod,lf2,l0.
    #[arg(long, value_delimiter = ',')]
    lemmas: Option<Vec<String>>,
    /// Seed for sampled checks and audits [default: 42].
    #[arg(long)]
    seed: Option<u64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "ENGEL_THREADS")]
    threads: Option<usize>,
    /// Largest order whose elements are listed and tabulated [default: 20000].
    #[arg(long)]
    enumeration_threshold: Option<usize>,
    /// Subgroup classes enumerated before a rank is reported as a lower bound [default: 50000].
    #[arg(long)]
    lattice_cap: Option<usize>,
    /// (P, g) pairs sampled per group for l0 [default: 500].
    #[arg(long)]
    l0_pairs: Option<usize>,
    /// Add a per-group timing column; the output is then no longer reproducible.
    #[arg(long)]
    timing: bool,
    /// Check l0 against trivial sink subgroups, to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt_oracle: bool,
}

impl RunArgs {
    fn into_config(self) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = self.catalog {
            cfg.catalog = v;
        }
        if let Some(v) = self.max_order {
            cfg.max_order = v;
        }
        if let Some(list) = self.lemmas {
            cfg.lemmas = list
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<CheckId>())
                .collect::<Result<_, _>>()?;
            cfg.lemmas.sort();
            cfg.lemmas.dedup();
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.format {
            cfg.format = v.parse::<Format>()?;
        }
        if let Some(v) = self.out {
            cfg.out = Some(v);
        }
        if let Some(v) = self.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = self.enumeration_threshold {
            cfg.enumeration_threshold = v;
        }
        if let Some(v) = self.lattice_cap {
            cfg.lattice_cap = v;
        }
        if let Some(v) = self.l0_pairs {
            cfg.l0_pairs = v;
        }
        cfg.timing |= self.timing;
        cfg.corrupt_oracle |= self.corrupt_oracle;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Failure kinds mapped to exit codes.
enum Failure {
    Check(String),
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            // internal consistency audits are mathematical failures
            Some(Error::Internal(msg)) => Failure::Check(msg.clone()),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e).context("writing to standard output"),
        _ => Ok(()),
    }
}

fn cmd_sink(group: &str, element: &str) -> Result<(), Failure> {
    let entry = catalog::build_named(group).with_context(|| format!("loading group {group:?}"))?;
    let g = &entry.group;
    let x = Permutation::parse_cycles(element, g.degree()).with_context(|| format!("parsing element {element:?}"))?;
    let report = sinks::minimal_sink(g, &x)?;
    let sink_rank = rank(&report.sink_subgroup, RankConfig::default())?;
    let t = g.table()?;
    let elems: Vec<String> = report.sink.iter().map(|&e| t.element(e).to_string()).collect();
    let sink_rank = sinks::RankValue {
        rank: sink_rank.rank,
        exact: sink_rank.exact,
    };
    emit(&format!(
        "group: {} (order {})\nelement: {x}\nsink size: {}\nsink: {}\nsink subgroup order: {}\nsink rank: {}\nmax tail: {}\n",
        entry.label,
        g.order(),
        report.sink.len(),
        elems.join(" "),
        report.sink_subgroup.order(),
        sink_rank.display(),
        report.max_tail
    ))?;
    Ok(())
}

fn execute(cfg: &RunConfig) -> Result<Report, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("starting worker threads")?;
    let report = pool.install(|| run(cfg))?;
    let text = render(&report, cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => emit(&text)?,
    }
    Ok(report)
}

fn cmd_verify(args: RunArgs) -> Result<(), Failure> {
    let mut cfg = args.into_config()?;
    if cfg.lemmas.is_empty() {
        cfg.lemmas = CheckId::ALL.to_vec();
    }
    let report = execute(&cfg)?;
    let t = &report.totals;
    eprintln!(
        "{} groups: {} passed, {} failed, {} skipped",
        t.groups, t.passed, t.failed, t.skipped
    );
    for (label, id, witness) in report.failures() {
        eprintln!("FAIL {label} {id}: {witness}");
    }
    if report.has_failures() {
        return Err(Failure::Check(format!("{} check(s) failed", t.failed)));
    }
    Ok(())
}

fn cmd_report(args: RunArgs) -> Result<(), Failure> {
    let cfg = args.into_config()?;
    let report = execute(&cfg)?;
    if report.has_failures() {
        return Err(Failure::Check(format!("{} check(s) failed", report.totals.failed)));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sink { group, element } => cmd_sink(&group, &element),
        Command::Verify(args) => cmd_verify(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let args = RunArgs {
            lemmas: Some(vec!["l0".into(), "kovacs".into(), "l0".into()]),
            max_order: Some(100),
            format: Some("json".into()),
            ..RunArgs::default()
        };
        let cfg = args.into_config().unwrap();
        assert_eq!(cfg.lemmas, vec![CheckId::Kovacs, CheckId::L0]);
        assert_eq!(cfg.max_order, 100);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn bad_values_are_usage_errors() {
        let args = RunArgs {
            lemmas: Some(vec!["l7".into()]),
            ..RunArgs::default()
        };
        assert!(args.into_config().is_err());
        let args = RunArgs {
            lattice_cap: Some(0),
            ..RunArgs::default()
        };
        assert!(args.into_config().is_err());
    }

    #[test]
    fn config_file_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "max-order = 50\nseed = 7\nformat = \"json\"\n").unwrap();
        let args = RunArgs {
            config: Some(path),
            seed: Some(9),
            ..RunArgs::default()
        };
        let cfg = args.into_config().unwrap();
        assert_eq!((cfg.max_order, cfg.seed, cfg.format), (50, 9, Format::Json));
        assert!(cfg.lemmas.is_empty());
    }
}
