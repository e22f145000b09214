//! Command-line front end.
//!
//! Subcommands load their inputs from the versioned JSON files in
//! [`crate::files`], run one pipeline, and emit a [`RunReport`] — human text
//! by default, `--json` for the structured form. Optional flags add
//! cross-checks by independent methods; the process exits nonzero if any
//! check disagrees, so scripted runs can rely on the exit code.
//!
//! Seeds and enumeration caps resolve as: explicit flag, then environment
//! variable (`ALTSPAN_SEED`, `ALTSPAN_CAP_WORDS`, `ALTSPAN_CAP_WALKS`,
//! `ALTSPAN_CAP_TREES`), then the built-in default.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::acq;
use crate::compile::machine_to_grammar;
use crate::error::Error;
use crate::estimator::{estimate_count, estimate_count_upto};
use crate::files;
use crate::grammar::{count_words, count_words_upto, is_unambiguous_upto, to_cnf, Grammar};
use crate::machine::normalize::{binarize, enforce_budget, enforced_space_bound, is_binarized};
use crate::machine::run::{count_trees_limited, span_limited, RunBounds};
use crate::machine::Machine;
use crate::report::RunReport;
use crate::wfwalks;
use crate::DEFAULT_CAP;

pub const SEED_ENV: &str = "ALTSPAN_SEED";
pub const CAP_WORDS_ENV: &str = "ALTSPAN_CAP_WORDS";
pub const CAP_WALKS_ENV: &str = "ALTSPAN_CAP_WALKS";
pub const CAP_TREES_ENV: &str = "ALTSPAN_CAP_TREES";

#[derive(Debug, Parser)]
#[command(
    name = "altspan",
    about = "Count distinct outputs of alternating transducers, grammars, queries, and walks",
    version
)]
pub struct Cli {
    /// Emit the run report as JSON instead of human text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run, normalize, or compile a machine file.
    Machine {
        #[command(subcommand)]
        cmd: MachineCmd,
    },
    /// Count, convert, or sample a grammar file.
    Cfg {
        #[command(subcommand)]
        cmd: CfgCmd,
    },
    /// Count distinct well-formed walk strings in a labeled graph.
    Wfwalks(WfwalksArgs),
    /// Count distinct answers of an acyclic conjunctive query.
    Acq(AcqArgs),
}

#[derive(Debug, Subcommand)]
pub enum MachineCmd {
    /// Count distinct output forests within space and tree-size budgets.
    Span {
        #[arg(long)]
        machine: PathBuf,
        /// Input string (validated against the machine's input alphabet).
        #[arg(long, default_value = "")]
        input: String,
        /// Work-tape cell budget.
        #[arg(long)]
        space: usize,
        /// Accepting-tree node budget.
        #[arg(long)]
        tree_size: usize,
        /// Also count accepting trees (≥ the span).
        #[arg(long)]
        count_trees: bool,
        /// Cap on enumerated accepting trees.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Rewrite to binary universal branching; optionally build in a
    /// principal-step budget.
    Normalize {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Also enforce this principal-step budget in the rewrite.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Compile a binarized machine to a grammar over bracket tokens whose
    /// words mirror output forests.
    Compile {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        /// Work-tape cell budget of the source machine.
        #[arg(long)]
        space: usize,
        /// Accepting-tree node budget, built into the compiled grammar.
        #[arg(long)]
        tree_size: usize,
        #[arg(long)]
        output: PathBuf,
        /// Also count the compiled grammar's words (length ≤ 3·tree-size).
        #[arg(long)]
        count: bool,
        /// Cap on enumerated words for --count.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CfgCmd {
    /// |L_n|: distinct words of exactly the given length.
    Count {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// |L_≤n|: distinct words up to the given length, with per-length sums.
    Upto {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Sampling estimate of |L_n| (or |L_≤n| with --upto).
    Estimate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        upto: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Cross-check against exact enumeration (agree within 4 standard
        /// errors).
        #[arg(long)]
        check: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Convert to Chomsky normal form and write the result.
    Cnf {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Decide whether every word up to the given length has at most one
    /// parse.
    Ambig {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct WfwalksArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Opening/closing pairs file; omitted means every label is neutral.
    #[arg(long)]
    pub oc: Option<PathBuf>,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Walk length (number of edges).
    #[arg(long)]
    pub length: usize,
    /// Sum the per-length counts for all lengths up to --length.
    #[arg(long)]
    pub upto: bool,
    /// Cross-check against brute-force walk enumeration.
    #[arg(long)]
    pub oracle: bool,
    /// Cross-check against the compiled machine's span.
    #[arg(long)]
    pub machine_check: bool,
    /// Comparison mode: count walks whose string parses with nothing after
    /// a closed bracket pair (brute force only; excludes --machine-check).
    #[arg(long)]
    pub strict: bool,
    /// Cap on stored strings (recursion) and visited walk prefixes (oracle).
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AcqArgs {
    #[arg(long)]
    pub db: PathBuf,
    #[arg(long)]
    pub query: PathBuf,
    /// Optional explicit join tree to validate and use; derived when absent.
    #[arg(long)]
    pub join_tree: Option<PathBuf>,
    /// Cross-check against the naive cartesian-product join.
    #[arg(long)]
    pub oracle: bool,
}

fn env_number<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Error> {
    match std::env::var(name) {
        Ok(raw) => raw.parse::<T>().map(Some).map_err(|_| {
            Error::validation(format!("{name}: expected a number, found `{raw}`"))
        }),
        Err(_) => Ok(None),
    }
}

fn resolve_cap(flag: Option<usize>, env_name: &str) -> Result<usize, Error> {
    Ok(flag.or(env_number(env_name)?).unwrap_or(DEFAULT_CAP))
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Error> {
    Ok(flag.or(env_number(SEED_ENV)?).unwrap_or(0))
}

/// Run one parsed command to a finished report.
pub fn run(cli: &Cli) -> Result<RunReport, Error> {
    let mut report = match &cli.command {
        Command::Machine { cmd } => run_machine(cmd)?,
        Command::Cfg { cmd } => run_cfg(cmd)?,
        Command::Wfwalks(args) => run_wfwalks(args)?,
        Command::Acq(args) => run_acq(args)?,
    };
    report.finish();
    Ok(report)
}

fn load_machine_into(report: &mut RunReport, path: &Path) -> Result<Machine, Error> {
    report.add_input(path)?;
    files::load_machine(path)
}

fn load_grammar_into(report: &mut RunReport, path: &Path) -> Result<Grammar, Error> {
    report.add_input(path)?;
    files::load_grammar(path)
}

fn run_machine(cmd: &MachineCmd) -> Result<RunReport, Error> {
    match cmd {
        MachineCmd::Span {
            machine,
            input,
            space,
            tree_size,
            count_trees,
            cap,
        } => {
            let mut report = RunReport::new("machine span");
            let m = load_machine_into(&mut report, machine)?;
            let cap = resolve_cap(*cap, CAP_TREES_ENV)?;
            let bounds = RunBounds::new(*space, *tree_size)?;
            let span = span_limited(&m, input, bounds, Some(cap))?;
            report.set_count(span);
            if *count_trees {
                let trees = count_trees_limited(&m, input, bounds, Some(cap))?;
                report.note(format!("accepting trees: {trees}"));
            }
            Ok(report)
        }
        MachineCmd::Normalize {
            machine,
            output,
            budget,
        } => {
            let mut report = RunReport::new("machine normalize");
            let m = load_machine_into(&mut report, machine)?;
            let mut result = binarize(&m)?;
            let mut text = format!(
                "binarized: {} states -> {}",
                m.states().len(),
                result.states().len()
            );
            if let Some(budget) = budget {
                result = enforce_budget(&result, *budget)?;
                text = format!(
                    "{text}; budget {budget} enforced: {} states",
                    result.states().len()
                );
            }
            files::save_machine(output, &result)?;
            report.set_text(format!("{text}; wrote {}", output.display()));
            Ok(report)
        }
        MachineCmd::Compile {
            machine,
            input,
            space,
            tree_size,
            output,
            count,
            cap,
        } => {
            let mut report = RunReport::new("machine compile");
            let m = load_machine_into(&mut report, machine)?;
            if !is_binarized(&m) {
                return Err(Error::validation(
                    "machine is not binarized; run `altspan machine normalize` first",
                ));
            }
            let enforced = enforce_budget(&m, *tree_size)?;
            let g = machine_to_grammar(&enforced, input, enforced_space_bound(*space, *tree_size))?;
            files::save_grammar(output, &g)?;
            report.set_text(format!(
                "compiled {} nonterminals, {} rules; wrote {}",
                g.nonterminal_count(),
                g.rules().len(),
                output.display()
            ));
            if *count {
                let cap = resolve_cap(*cap, CAP_WORDS_ENV)?;
                let per_len = count_words_upto(&g, 3 * *tree_size, cap)?;
                let total: usize = per_len.iter().sum();
                report.note(format!(
                    "distinct words up to length {}: {total}",
                    3 * *tree_size
                ));
            }
            Ok(report)
        }
    }
}

fn run_cfg(cmd: &CfgCmd) -> Result<RunReport, Error> {
    match cmd {
        CfgCmd::Count {
            grammar,
            length,
            cap,
        } => {
            let mut report = RunReport::new("cfg count");
            let g = load_grammar_into(&mut report, grammar)?;
            let cap = resolve_cap(*cap, CAP_WORDS_ENV)?;
            report.set_count(count_words(&g, *length, cap)?);
            Ok(report)
        }
        CfgCmd::Upto {
            grammar,
            length,
            cap,
        } => {
            let mut report = RunReport::new("cfg upto");
            let g = load_grammar_into(&mut report, grammar)?;
            let cap = resolve_cap(*cap, CAP_WORDS_ENV)?;
            let per_len = count_words_upto(&g, *length, cap)?;
            report.set_count(per_len.iter().sum::<usize>());
            report.note(format!("per-length: {per_len:?}"));
            Ok(report)
        }
        CfgCmd::Estimate {
            grammar,
            length,
            upto,
            samples,
            seed,
            check,
            cap,
        } => {
            let mut report = RunReport::new("cfg estimate");
            let g = load_grammar_into(&mut report, grammar)?;
            let seed = resolve_seed(*seed)?;
            let est = if *upto {
                estimate_count_upto(&g, *length, *samples, seed)?
            } else {
                estimate_count(&g, *length, *samples, seed)?
            };
            report.set_estimate(&est);
            if *check {
                let cap = resolve_cap(*cap, CAP_WORDS_ENV)?;
                let exact = if *upto {
                    count_words_upto(&g, *length, cap)?.iter().sum::<usize>()
                } else {
                    count_words(&g, *length, cap)?
                };
                // Statistical agreement: within 4 standard errors, with a
                // tiny absolute slack for the zero-variance case.
                let agree = (est.value - exact as f64).abs() <= 4.0 * est.std_error + 1e-9;
                report.check("exact enumeration (±4σ)", exact, agree);
            }
            Ok(report)
        }
        CfgCmd::Cnf { grammar, output } => {
            let mut report = RunReport::new("cfg cnf");
            let g = load_grammar_into(&mut report, grammar)?;
            let cnf = to_cnf(&g)?;
            files::save_grammar(output, &cnf)?;
            report.set_text(format!(
                "normal form: {} nonterminals, {} rules; wrote {}",
                cnf.nonterminal_count(),
                cnf.rules().len(),
                output.display()
            ));
            Ok(report)
        }
        CfgCmd::Ambig {
            grammar,
            length,
            cap,
        } => {
            let mut report = RunReport::new("cfg ambig");
            let g = load_grammar_into(&mut report, grammar)?;
            let cap = resolve_cap(*cap, CAP_WORDS_ENV)?;
            let unambiguous = is_unambiguous_upto(&g, *length, cap)?;
            report.set_text(if unambiguous {
                format!("unambiguous for all words of length <= {length}")
            } else {
                format!("ambiguous within length {length}")
            });
            Ok(report)
        }
    }
}

fn run_wfwalks(args: &WfwalksArgs) -> Result<RunReport, Error> {
    let mut report = RunReport::new("wfwalks");
    report.add_input(&args.graph)?;
    let g = files::load_graph(&args.graph)?;
    let oc = match &args.oc {
        Some(path) => {
            report.add_input(path)?;
            files::load_oc(path)?
        }
        None => wfwalks::OcRelation::default(),
    };
    let strings_cap = resolve_cap(args.cap, CAP_WORDS_ENV)?;
    let walks_cap = resolve_cap(args.cap, CAP_WALKS_ENV)?;
    let lengths: Vec<usize> = if args.upto {
        (0..=args.length).collect()
    } else {
        vec![args.length]
    };

    if args.strict {
        if args.machine_check {
            return Err(Error::validation(
                "--strict is brute-force only and cannot be combined with --machine-check",
            ));
        }
        let mut total = 0usize;
        for &len in &lengths {
            total += wfwalks::oracle_walk_strings_with(
                &g,
                &oc,
                &args.from,
                &args.to,
                len,
                walks_cap,
                wfwalks::WfVariant::Strict,
            )?
            .len();
        }
        report.set_count(total);
        report.note("strict variant: nothing may follow a closed bracket pair");
        return Ok(report);
    }

    let mut total = 0usize;
    for &len in &lengths {
        total += wfwalks::walk_span(&g, &oc, &args.from, &args.to, len, strings_cap)?;
    }
    report.set_count(total);

    if args.oracle {
        let mut oracle_total = 0usize;
        for &len in &lengths {
            oracle_total +=
                wfwalks::oracle_walk_strings(&g, &oc, &args.from, &args.to, len, walks_cap)?
                    .len();
        }
        report.check_count("walk enumeration oracle", oracle_total);
    }
    if args.machine_check {
        let trees_cap = resolve_cap(args.cap, CAP_TREES_ENV)?;
        let mut machine_total = 0usize;
        for &len in &lengths {
            let inst = wfwalks::machine_for_query(&g, &oc, &args.from, &args.to, len)?;
            machine_total +=
                span_limited(&inst.machine, &inst.input, inst.bounds, Some(trees_cap))?;
        }
        report.check_count("compiled machine span", machine_total);
    }
    Ok(report)
}

fn run_acq(args: &AcqArgs) -> Result<RunReport, Error> {
    let mut report = RunReport::new("acq");
    report.add_input(&args.db)?;
    report.add_input(&args.query)?;
    let db = files::load_database(&args.db)?;
    let q = files::load_query(&args.query)?;
    q.validate(&db)?;
    let tree = if let Some(path) = &args.join_tree {
        report.add_input(path)?;
        let tree = files::load_join_tree(path)?;
        acq::validate_join_tree(&q, &tree)?;
        report.note("supplied join tree validated");
        tree
    } else {
        acq::join_tree(&q)?
    };
    report.set_count(acq::answer_span_with(&db, &q, &tree)?);
    if args.oracle {
        report.check_count("cartesian-product join", acq::oracle_answers(&db, &q)?.len());
    }
    Ok(report)
}

/// Full entry point for the binary: parse, run, print, choose the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Clap renders its own help/version/usage output.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.human());
            }
            if report.all_agree() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
