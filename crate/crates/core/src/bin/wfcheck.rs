//! Command-line front end: termination checks, decompositions, and the
//! combinatorial table generators, all with reproducible text output.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};

use wfcheck::certificate::{Certificate, LargenessCertificate};
use wfcheck::error::Error;
use wfcheck::invariant::{self, Conclusion};
use wfcheck::largeness::{self, LargenessMode};
use wfcheck::program;
use wfcheck::ramsey;
use wfcheck::relation::TransitionSystem;
use wfcheck::report::{Report, Section};
use wfcheck::{hierarchy, io, FghBudget, RunConfig};

#[derive(Parser)]
#[command(
    name = "wfcheck",
    version,
    about = "finite-relation termination toolkit"
)]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Globals {
    /// Maximum number of states in any relation.
    #[arg(long, default_value_t = 10_000)]
    states_cap: usize,
    /// Maximum number of edges (also bounds transitive closures).
    #[arg(long, default_value_t = 100_000)]
    edges_cap: usize,
    /// Node budget for backtracking and partition searches.
    #[arg(long, default_value_t = 2_000_000)]
    search_cap: u64,
    /// Bit budget for fast-growing-hierarchy values.
    #[arg(long, default_value_t = 1 << 16)]
    fgh_bits: u64,
    /// Step budget for fast-growing-hierarchy evaluation.
    #[arg(long, default_value_t = 1_000_000)]
    fgh_steps: u64,
    /// Seed for randomized helpers (fixed default for reproducibility).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit flat `key value` records instead of sectioned text.
    #[arg(long)]
    records: bool,
}

impl Globals {
    fn config(&self) -> RunConfig {
        RunConfig {
            states_cap: self.states_cap,
            edges_cap: self.edges_cap,
            search_cap: self.search_cap,
            fgh: FghBudget::new(self.fgh_bits, self.fgh_steps),
            seed: self.seed,
            ..RunConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a disjunctively well-founded transition invariant.
    ///
    /// INPUT is a relation file or a program file (detected by content);
    /// PARTS are relation files forming the candidate invariant.
    /// Exit codes: 0 terminating, 1 invalid invariant, 2 nonterminating,
    /// 3 usage or parse error.
    Check {
        input: PathBuf,
        parts: Vec<PathBuf>,
        /// State cap for program exploration.
        #[arg(long, default_value_t = 2_000)]
        sim_states: usize,
        /// Depth cap for program exploration.
        #[arg(long, default_value_t = 200)]
        sim_depth: usize,
        /// Initial states for relation inputs (defaults to the whole
        /// domain).
        #[arg(long)]
        initial: Vec<u64>,
    },
    /// Decompose an F_k-bounded relation into F_0-bounded parts.
    Decompose {
        relation: PathBuf,
        #[arg(long)]
        k: u32,
        /// Use the H-bounded construction (no determinism required).
        #[arg(long)]
        h_variant: bool,
        /// Write each part as a relation file into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Evaluate F_n(x) under the configured budget.
    Fgh {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: u64,
    },
    /// WW_m(x): least y with (x, y] m-w-dense, scanned up to --cap.
    Ww {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        cap: u64,
    },
    /// HH_m(x): least y with (x, y] m-dense, scanned up to --cap.
    Hh {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        cap: u64,
    },
    /// Check k-largeness of the set in FILE.
    Large {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        set: PathBuf,
        /// Lead with the interval pre-pass only semantics.
        #[arg(long)]
        intervals: bool,
    },
    /// Check m-density of the interval (a, b].
    Dense {
        #[arg(long)]
        m: u32,
        /// The two endpoints a b of the half-open interval (a, b].
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        interval: Vec<u64>,
        #[arg(long)]
        weak: bool,
    },
    /// Largest homogeneous set (default) or longest weakly homogeneous
    /// sequence (--weak) of a coloring file.
    Ramsey {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        weak: bool,
    },
}

fn main() -> ExitCode {
    // Usage errors exit with 3, keeping 2 for nonterminating verdicts;
    // --help and --version still exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.globals.config();
    match run(cli.cmd, &cfg, cli.globals.records) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn run(cmd: Cmd, cfg: &RunConfig, records: bool) -> Result<ExitCode, Error> {
    match cmd {
        Cmd::Check {
            input,
            parts,
            sim_states,
            sim_depth,
            initial,
        } => cmd_check(
            &input, &parts, sim_states, sim_depth, &initial, cfg, records,
        ),
        Cmd::Decompose {
            relation,
            k,
            h_variant,
            out_dir,
        } => cmd_decompose(&relation, k, h_variant, out_dir.as_deref(), cfg, records),
        Cmd::Fgh { n, x } => {
            let v = hierarchy::fgh_u64(n, x, &cfg.fgh)?;
            let mut report = Report::new();
            report.push(Section::Table, "value", v);
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ww { m, x, cap } => {
            let v = largeness::ww(m, x, cap, cfg)?;
            let mut report = Report::new();
            report.push(Section::Table, "value", v);
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Hh { m, x, cap } => {
            let v = largeness::hh(m, x, cap, cfg)?;
            let mut report = Report::new();
            report.push(Section::Table, "value", v);
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Large { k, set, intervals } => {
            let elements: BTreeSet<u64> = io::read_set(&set)?.into_iter().collect();
            let mode = if intervals {
                LargenessMode::Intervals
            } else {
                LargenessMode::Exhaustive
            };
            let outcome = largeness::is_k_large(&elements, k, mode, cfg)?;
            let mut report = Report::new();
            report.push(Section::Verdict, "large", outcome.is_some());
            if let Some(cert) = outcome {
                push_largeness(&mut report, "certificate", &cert);
            }
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dense { m, interval, weak } => {
            let (a, b) = (interval[0], interval[1]);
            if b <= a {
                return Err(Error::Parse(format!("empty interval ({a}, {b}]")));
            }
            let set: BTreeSet<u64> = (a + 1..=b).collect();
            let outcome = largeness::is_m_dense(&set, m, weak, cfg)?;
            let mut report = Report::new();
            report.push(Section::Verdict, "dense", outcome.is_some());
            report.push(Section::Verdict, "weak", weak);
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Ramsey { file, weak } => {
            let coloring = io::read_coloring(&file)?;
            let witness = if weak {
                ramsey::longest_weakly_homogeneous_sequence(&coloring)
            } else {
                ramsey::largest_homogeneous_set(&coloring, cfg)?
            };
            let mut report = Report::new();
            report.push(Section::Verdict, "size", witness.members.len());
            report.push(Section::Verdict, "color", witness.color);
            report.push(
                Section::Certificates,
                "members",
                witness
                    .members
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            );
            print!("{}", report.render(records));
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// A program file has rules; a relation file has a domain header.
fn looks_like_program(src: &str) -> bool {
    src.lines()
        .any(|l| l.contains("->") || l.trim_start().starts_with("init"))
}

fn cmd_check(
    input: &Path,
    part_paths: &[PathBuf],
    sim_states: usize,
    sim_depth: usize,
    initial: &[u64],
    cfg: &RunConfig,
    records: bool,
) -> Result<ExitCode, Error> {
    let src = std::fs::read_to_string(input)?;
    let mut report = Report::new();
    let ts = if looks_like_program(&src) {
        let prog = program::parse_program(&src)?;
        let sim = program::simulate_program(&prog, sim_states, sim_depth, cfg)?;
        report.push(Section::Verdict, "truncated", sim.truncated);
        report.push(
            Section::States,
            "encoding",
            "cantor pairing over zigzagged values, variables sorted by name",
        );
        for (id, vals) in &sim.states {
            report.push(
                Section::States,
                format!("state.{id}"),
                program::render_valuation(&sim.vars, vals),
            );
        }
        sim.system
    } else {
        let r = io::parse_relation(&src, cfg)?;
        let init: Vec<u64> = if initial.is_empty() {
            r.domain().iter().copied().collect()
        } else {
            initial.to_vec()
        };
        TransitionSystem::new(r, init)?
    };

    let parts: Vec<_> = part_paths
        .iter()
        .map(|p| io::read_relation(p, cfg))
        .collect::<Result<_, _>>()?;
    let verdict = invariant::check_invariant(&ts, &parts, cfg)?;

    let conclusion = match verdict.conclusion {
        Conclusion::Terminating => "terminating",
        Conclusion::InvalidInvariant => "invalid-invariant",
        Conclusion::NonterminatingWitness => "nonterminating",
    };
    report.push(Section::Verdict, "conclusion", conclusion);
    report.push(Section::Covering, "ok", verdict.covering_ok);
    if let Some((x, y)) = verdict.uncovered {
        report.push(Section::Covering, "uncovered", format!("{x} {y}"));
    }
    for (i, d) in verdict.disjunct_reports.iter().enumerate() {
        report.push(
            Section::Disjuncts,
            format!("disjunct.{i}.well_founded"),
            d.well_founded,
        );
        if let Certificate::Cycle(cycle) = &d.certificate {
            report.push(
                Section::Disjuncts,
                format!("disjunct.{i}.cycle"),
                join(cycle),
            );
        }
    }
    if let Some(cycle) = &verdict.nonterminating_cycle {
        report.push(Section::Certificates, "cycle", join(cycle));
    }
    if let Some(lengths) = &verdict.longest_computations {
        for (s, l) in lengths {
            report.push(Section::Certificates, format!("longest.{s}"), l);
        }
    }
    print!("{}", report.render(records));
    Ok(match verdict.conclusion {
        Conclusion::Terminating => ExitCode::SUCCESS,
        Conclusion::InvalidInvariant => ExitCode::from(1),
        Conclusion::NonterminatingWitness => ExitCode::from(2),
    })
}

fn cmd_decompose(
    relation: &Path,
    k: u32,
    h_variant: bool,
    out_dir: Option<&Path>,
    cfg: &RunConfig,
    records: bool,
) -> Result<ExitCode, Error> {
    let r = io::read_relation(relation, cfg)?;
    let d = if h_variant {
        invariant::decompose_h_bounded(&r, k, cfg)?
    } else {
        invariant::decompose_bounded(&r, k, cfg)?
    };
    let mut report = Report::new();
    report.push(Section::Verdict, "parts", d.levels.len() + 1);
    report.push(Section::Verdict, "h_variant", h_variant);
    report.push(
        Section::Disjuncts,
        "part.descending.edges",
        d.descending.edges().len(),
    );
    for (i, l) in d.levels.iter().enumerate() {
        report.push(
            Section::Disjuncts,
            format!("part.{i}.edges"),
            l.edges().len(),
        );
    }
    for (i, rank) in d.rank_table.ranks.iter().enumerate() {
        for (x, v) in rank {
            report.push(Section::Table, format!("rank.{i}.{x}"), v);
        }
    }
    for ((x, y), v) in &d.rank_table.distance {
        report.push(Section::Table, format!("distance.{x}.{y}"), v);
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        io::write_relation(dir.join("part_desc.rel"), &d.descending)?;
        for (i, l) in d.levels.iter().enumerate() {
            io::write_relation(dir.join(format!("part_{i}.rel")), l)?;
        }
    }
    print!("{}", report.render(records));
    Ok(ExitCode::SUCCESS)
}

fn push_largeness(report: &mut Report, prefix: &str, cert: &LargenessCertificate) {
    report.push(
        Section::Certificates,
        format!("{prefix}.set"),
        join(&cert.set),
    );
    report.push(Section::Certificates, format!("{prefix}.level"), cert.level);
    for (i, child) in cert.children.iter().enumerate() {
        push_largeness(report, &format!("{prefix}.{i}"), child);
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}
