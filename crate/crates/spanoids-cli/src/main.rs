//! Command line front end for the spanoids library.
//!
//! Every subcommand is deterministic: identical invocations produce
//! byte-identical output. Randomized commands take a single 64-bit
//! `--seed` (default 0); a command that fans out over several runs
//! gives run r the seed `seed + r`, and every stage within one run
//! shares that run's seed, so adding runs never perturbs earlier ones.
//! Element indices are 1-based on the command line and in all output;
//! rationals print as `p/q` in lowest terms.
//!
//! Exit codes: 0 success, 1 domain violation (including a reported
//! inconsistency or a failed reproduction), 2 capacity, budget, or
//! retry exhaustion, 3 I/O, file-parse, or usage error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use spanoids::code::{
    build_cover_plan, check_consistent, code_dimension, max_consistent_code,
    sample_small_alphabet_code, Code, CodeDimension,
};
use spanoids::cover::lp_cover;
use spanoids::entropy::{lp_entropy, EntropyMode};
use spanoids::error::{Error, Result};
use spanoids::family::frankl_max_frequency;
use spanoids::io::{load_code, load_family, load_spanoid, render_spanoid, save_code, save_spanoid};
use spanoids::lcs::{
    hadamard_spanoid, random_qlcs, spanning_set_2lcs, spanning_set_qlcs, LcsInstance,
};
use spanoids::lp::{format_rat, LpError, Rat};
use spanoids::product::{product, ProductKind};
use spanoids::rank::rank;
use spanoids::represent::{set_representation, Flavor};
use spanoids::spread::{graph_process_run, SpreadSampler};
use spanoids::repro;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "spanoids",
    version,
    about = "Spanoid analysis: spans, rank, LP relaxations, codes, products, and correction experiments",
    long_about = "Spanoid analysis: spans, rank, LP relaxations, codes, products, and \
correction experiments.\n\nAll output is deterministic; randomized commands derive \
everything from --seed (default 0), and multi-run commands give run r the seed \
`seed + r`. Elements are 1-based in files, flags, and output. Exit codes: 0 success, \
1 domain violation, 2 capacity or budget exhaustion, 3 I/O or parse error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the span of a set of elements
    Span {
        /// Spanoid file
        spanoid: PathBuf,
        /// Comma-separated 1-based elements (defaults to the empty set)
        #[arg(long, value_delimiter = ',', value_name = "ELEMS")]
        set: Vec<u32>,
    },
    /// Exact rank with a minimum spanning witness
    Rank {
        /// Spanoid file
        spanoid: PathBuf,
    },
    /// Enumerate all closed sets as a family file
    ClosedSets {
        /// Spanoid file
        spanoid: PathBuf,
        /// Write the family here instead of stdout
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Enumerate all open sets as a family file
    OpenSets {
        /// Spanoid file
        spanoid: PathBuf,
        /// Write the family here instead of stdout
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Set representation over the closed sets, with its intersection dimension
    Represent {
        /// Spanoid file
        spanoid: PathBuf,
    },
    /// Most frequent element across the nonempty members of a union-closed family
    Frankl {
        /// Family file
        family: PathBuf,
    },
    /// Linear-programming relaxations
    Lp {
        #[command(subcommand)]
        which: LpCommand,
    },
    /// Consistent-code operations
    Code {
        #[command(subcommand)]
        which: CodeCommand,
    },
    /// Combine two spanoids
    Product {
        /// Construction to apply
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Left spanoid file
        a: PathBuf,
        /// Right spanoid file
        b: PathBuf,
        /// Write the product here instead of stdout
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Correction-instance construction and experiments
    Lcs {
        #[command(subcommand)]
        which: LcsCommand,
    },
    /// Reproduction of the recorded results
    Paper {
        #[command(subcommand)]
        which: PaperCommand,
    },
}

#[derive(Subcommand)]
enum LpCommand {
    /// Exact optimum of the covering relaxation
    Cover {
        /// Spanoid file
        spanoid: PathBuf,
    },
    /// Exact optimum of the entropy relaxation
    Entropy {
        /// Spanoid file
        spanoid: PathBuf,
        /// Constraint family to solve (both have the same optimum)
        #[arg(long, value_enum, default_value_t = ModeArg::Elemental)]
        mode: ModeArg,
    },
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Check a code against a spanoid's rules
    Check {
        /// Spanoid file
        spanoid: PathBuf,
        /// Code file
        code: PathBuf,
    },
    /// Build the covering-LP code plan; optionally materialize it
    BuildCover {
        /// Spanoid file
        spanoid: PathBuf,
        /// Materialize the plan and write the code here
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Sample a small-alphabet consistent code
    SampleSmall {
        /// Spanoid file
        spanoid: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sampling attempts before giving up
        #[arg(long, default_value_t = 100)]
        retries: u32,
        /// Write the sampled code here
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Exhaustive search for a maximum consistent code
    MaxSearch {
        /// Spanoid file
        spanoid: PathBuf,
        /// Alphabet size
        #[arg(long)]
        alphabet: u32,
        /// Search node budget
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Write the maximum code here
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LcsCommand {
    /// Check an instance against the correction-instance contract
    Validate {
        #[command(flatten)]
        pick: InstancePick,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a random q-query instance
    Random {
        /// Ground-set size
        n: usize,
        /// Query arity (at least 3)
        q: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the underlying spanoid here
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Build the xor-pair instance on 2^k - 1 elements
    Hadamard {
        /// Bit width (2..=20)
        k: u32,
        /// Write the underlying spanoid here
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Search for a small verified spanning set
    SpanningSet {
        #[command(flatten)]
        pick: InstancePick,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Search attempts per run before giving up
        #[arg(long, default_value_t = 100)]
        retries: u32,
        /// Number of runs; run r uses seed + r
        #[arg(long, default_value_t = 1)]
        runs: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Simulate the accumulating random-graph process and report source counts
    GraphProcess {
        #[command(flatten)]
        pick: SamplerPick,
        /// Steps to simulate (default: ceil((4/alpha) ln n))
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

#[derive(Subcommand)]
enum PaperCommand {
    /// Recompute the recorded results and print a pass/fail table
    Repro,
}

/// Built-in instance selector shared by the experiment commands.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InstancePick {
    /// Xor-pair instance with the given bit width
    #[arg(long, value_name = "K")]
    hadamard: Option<u32>,
    /// Random q-query instance: ground size and arity
    #[arg(long, num_args = 2, value_names = ["N", "Q"])]
    random: Option<Vec<u32>>,
}

impl InstancePick {
    fn build(&self, seed: u64) -> Result<LcsInstance> {
        match (self.hadamard, &self.random) {
            (Some(k), _) => hadamard_spanoid(k),
            (_, Some(nq)) => random_qlcs(nq[0] as usize, nq[1], seed),
            _ => unreachable!("clap enforces the group"),
        }
    }
}

/// Sampler selector for the graph process.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct SamplerPick {
    /// Cyclic window sampler: ground size and window width
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    windows: Option<Vec<usize>>,
    /// Correction round of the xor-pair instance with the given bit width
    #[arg(long, value_name = "K")]
    hadamard: Option<u32>,
    /// Correction round of a random q-query instance: ground size and arity
    #[arg(long, num_args = 2, value_names = ["N", "Q"])]
    random: Option<Vec<u32>>,
}

impl SamplerPick {
    fn build(&self, seed: u64) -> Result<SpreadSampler> {
        if let Some(nk) = &self.windows {
            return SpreadSampler::fixed_windows(nk[0], nk[1]);
        }
        if let Some(k) = self.hadamard {
            return SpreadSampler::two_query(&hadamard_spanoid(k)?);
        }
        let nq = self.random.as_ref().expect("clap enforces the group");
        SpreadSampler::q_query(&random_qlcs(nq[0] as usize, nq[1], seed)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dot,
    Tensor,
    Semidirect,
}

impl From<KindArg> for ProductKind {
    fn from(k: KindArg) -> ProductKind {
        match k {
            KindArg::Dot => ProductKind::Dot,
            KindArg::Tensor => ProductKind::Tensor,
            KindArg::Semidirect => ProductKind::Semidirect,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Elemental,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    JsonLines,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli.command) {
        Ok((output, status)) => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(output.as_bytes()).and_then(|_| stdout.flush());
            if let Err(e) = written {
                // a closed pipe downstream is not our failure
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                eprintln!("error: {e}");
                std::process::exit(3);
            }
            std::process::exit(status);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Parse { .. } => 3,
        Error::Capacity { .. }
        | Error::Budget { .. }
        | Error::RetriesExhausted { .. }
        | Error::Lp(LpError::PivotLimit(_)) => 2,
        _ => 1,
    }
}

/// 1-based space-separated element list.
fn elems(iter: impl IntoIterator<Item = u32>) -> String {
    let mut out = String::new();
    for e in iter {
        if !out.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "{}", e + 1);
    }
    out
}

fn dimension_line(d: &CodeDimension) -> String {
    match d {
        CodeDimension::Exact(r) => format!("dimension {}", format_rat(r)),
        CodeDimension::Approx(f) => format!("dimension approx {f:.6}"),
    }
}

fn emit_family(
    out: &mut String,
    fam: &spanoids::family::SetFamily,
    output: Option<&PathBuf>,
) -> Result<()> {
    match output {
        Some(path) => spanoids::io::save_family(path, fam),
        None => {
            out.push_str(&spanoids::io::render_family(fam));
            Ok(())
        }
    }
}

fn code_summary(out: &mut String, code: &Code) -> Result<()> {
    let _ = writeln!(out, "words {}", code.len());
    let _ = writeln!(out, "alphabet {}", code.alphabet_size());
    let _ = writeln!(out, "{}", dimension_line(&code_dimension(code)?));
    Ok(())
}

fn save_code_to(out: &mut String, code: &Code, output: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = output {
        save_code(path, code)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn instance_summary(inst: &LcsInstance) -> String {
    format!(
        "n {}\nq {}\ndelta {}\nsubsets per element {}",
        inst.ground_size(),
        inst.queries(),
        format_rat(inst.delta()),
        inst.matchings().first().map_or(0, Vec::len)
    )
}

fn save_instance_spanoid(
    out: &mut String,
    inst: &LcsInstance,
    output: Option<&PathBuf>,
) -> Result<()> {
    if let Some(path) = output {
        save_spanoid(path, inst.spanoid())?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

struct SpanningRow {
    n: usize,
    q: u32,
    delta: Rat,
    seed: u64,
    set: Vec<u32>,
    verified: bool,
}

fn emit_spanning_rows(out: &mut String, rows: &[SpanningRow], format: FormatArg) {
    match format {
        FormatArg::Text => {
            for row in rows {
                let _ = writeln!(
                    out,
                    "n {} q {} delta {} seed {} set_size {} verified {}",
                    row.n,
                    row.q,
                    format_rat(&row.delta),
                    row.seed,
                    row.set.len(),
                    row.verified
                );
                let _ = writeln!(out, "set {}", elems(row.set.iter().copied()));
            }
        }
        FormatArg::Csv => {
            out.push_str("n,q,delta,seed,set_size,verified\n");
            for row in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    row.n,
                    row.q,
                    format_rat(&row.delta),
                    row.seed,
                    row.set.len(),
                    row.verified
                );
            }
        }
        FormatArg::JsonLines => {
            for row in rows {
                let _ = writeln!(
                    out,
                    "{{\"n\":{},\"q\":{},\"delta\":\"{}\",\"seed\":{},\"set_size\":{},\"verified\":{}}}",
                    row.n,
                    row.q,
                    format_rat(&row.delta),
                    row.seed,
                    row.set.len(),
                    row.verified
                );
            }
        }
    }
}

fn emit_process_rows(out: &mut String, counts: &[usize], format: FormatArg) {
    match format {
        FormatArg::Text => {
            for (step, sources) in counts.iter().enumerate() {
                let _ = writeln!(out, "step {} sources {}", step + 1, sources);
            }
        }
        FormatArg::Csv => {
            out.push_str("step,sources\n");
            for (step, sources) in counts.iter().enumerate() {
                let _ = writeln!(out, "{},{}", step + 1, sources);
            }
        }
        FormatArg::JsonLines => {
            for (step, sources) in counts.iter().enumerate() {
                let _ = writeln!(out, "{{\"step\":{},\"sources\":{}}}", step + 1, sources);
            }
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Span { spanoid, set } => {
            let sp = load_spanoid(&spanoid)?;
            let zero_based = one_based_to_zero(&set, sp.ground_size())?;
            let span = sp.span_of(&zero_based)?;
            println!("{}", elems(span.iter()));
            Ok(0)
        }
        Command::Rank { spanoid } => {
            let sp = load_spanoid(&spanoid)?;
            let cert = rank(&sp)?;
            println!("rank {}", cert.rank);
            println!("witness {}", elems(cert.witness.iter()));
            Ok(0)
        }
        Command::ClosedSets { spanoid, output } => {
            let sp = load_spanoid(&spanoid)?;
            emit_family(&sp.closed_sets()?, output.as_ref())?;
            Ok(0)
        }
        Command::OpenSets { spanoid, output } => {
            let sp = load_spanoid(&spanoid)?;
            emit_family(&sp.open_sets()?, output.as_ref())?;
            Ok(0)
        }
        Command::Represent { spanoid } => {
            let sp = load_spanoid(&spanoid)?;
            let rep = set_representation(&sp)?;
            let flavor = match rep.flavor() {
                Flavor::Intersection => "intersection",
                Flavor::Union => "union",
            };
            println!("flavor {flavor}");
            println!("universe {}", rep.universe());
            for (i, set) in rep.sets().iter().enumerate() {
                println!("element {}: {}", i + 1, elems(set.iter()));
            }
            println!("idim {}", rep.intersection_dimension()?);
            Ok(0)
        }
        Command::Frankl { family } => {
            let fam = load_family(&family)?;
            let (element, count) = frankl_max_frequency(&fam)?;
            println!("element {} count {}", element + 1, count);
            Ok(0)
        }
        Command::Lp { which } => match which {
            LpCommand::Cover { spanoid } => {
                let sp = load_spanoid(&spanoid)?;
                println!("{}", format_rat(&lp_cover(&sp)?));
                Ok(0)
            }
            LpCommand::Entropy { spanoid, mode } => {
                let sp = load_spanoid(&spanoid)?;
                let mode = match mode {
                    ModeArg::Full => EntropyMode::Full,
                    ModeArg::Elemental => EntropyMode::Elemental,
                };
                let (value, _) = lp_entropy(&sp, mode)?;
                println!("{}", format_rat(&value));
                Ok(0)
            }
        },
        Command::Code { which } => run_code(which),
        Command::Product { kind, a, b, output } => {
            let left = load_spanoid(&a)?;
            let right = load_spanoid(&b)?;
            let prod = product(kind.into(), &left, &right)?.into_spanoid();
            match output {
                Some(path) => {
                    save_spanoid(&path, &prod)?;
                    println!(
                        "n {} rules {} -> {}",
                        prod.ground_size(),
                        prod.rules().len(),
                        path.display()
                    );
                }
                None => print!("{}", render_spanoid(&prod)),
            }
            Ok(0)
        }
        Command::Lcs { which } => run_lcs(which),
        Command::Paper { which } => match which {
            PaperCommand::Repro => {
                let reports = repro::run_all();
                print!("{}", repro::render_table(&reports));
                Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 })
            }
        },
    }
}

fn run_code(which: CodeCommand) -> Result<i32> {
    match which {
        CodeCommand::Check { spanoid, code } => {
            let sp = load_spanoid(&spanoid)?;
            let code = load_code(&code)?;
            match check_consistent(&sp, &code)? {
                None => {
                    println!("consistent");
                    Ok(0)
                }
                Some(v) => {
                    println!(
                        "inconsistent: rule {} -> {} broken by words {} and {}",
                        elems(v.rule.premise().iter().copied()),
                        v.rule.conclusion() + 1,
                        symbols(&v.words.0),
                        symbols(&v.words.1),
                    );
                    Ok(1)
                }
            }
        }
        CodeCommand::BuildCover { spanoid, output } => {
            let sp = load_spanoid(&spanoid)?;
            let plan = build_cover_plan(&sp)?;
            println!("universe {}", plan.universe_size());
            println!("symbol width {}", plan.symbol_width());
            println!("dimension {}", format_rat(plan.dimension()));
            if let Some(path) = output {
                let code = plan.materialize()?;
                save_code(&path, &code)?;
                println!("wrote {} words to {}", code.len(), path.display());
            }
            Ok(0)
        }
        CodeCommand::SampleSmall {
            spanoid,
            seed,
            retries,
            output,
        } => {
            let sp = load_spanoid(&spanoid)?;
            let code = sample_small_alphabet_code(&sp, seed, retries)?;
            print_code_summary(&code)?;
            save_or_print_code(&code, output.as_ref())?;
            Ok(0)
        }
        CodeCommand::MaxSearch {
            spanoid,
            alphabet,
            budget,
            output,
        } => {
            let sp = load_spanoid(&spanoid)?;
            let code = max_consistent_code(&sp, alphabet, budget)?;
            print_code_summary(&code)?;
            save_or_print_code(&code, output.as_ref())?;
            Ok(0)
        }
    }
}

fn run_lcs(which: LcsCommand) -> Result<i32> {
    match which {
        LcsCommand::Validate { pick, seed } => {
            let inst = pick.build(seed)?;
            println!("{}", instance_summary(&inst));
            match inst.validate() {
                None => {
                    println!("valid");
                    Ok(0)
                }
                Some(v) => {
                    println!("invalid: {v}");
                    Ok(1)
                }
            }
        }
        LcsCommand::Random { n, q, seed, output } => {
            let inst = random_qlcs(n, q, seed)?;
            println!("{}", instance_summary(&inst));
            save_instance_spanoid(&inst, output.as_ref())?;
            Ok(0)
        }
        LcsCommand::Hadamard { k, output } => {
            let inst = hadamard_spanoid(k)?;
            println!("{}", instance_summary(&inst));
            save_instance_spanoid(&inst, output.as_ref())?;
            Ok(0)
        }
        LcsCommand::SpanningSet {
            pick,
            seed,
            retries,
            runs,
            format,
        } => {
            let mut rows = Vec::new();
            for r in 0..runs {
                let run_seed = seed.wrapping_add(r);
                let inst = pick.build(run_seed)?;
                let found = if inst.queries() == 2 {
                    spanning_set_2lcs(&inst, run_seed, retries)?
                } else {
                    spanning_set_qlcs(&inst, run_seed, retries)?
                };
                let verified = inst.spanoid().span_of(&found.set)?.is_full();
                rows.push(SpanningRow {
                    n: inst.ground_size(),
                    q: inst.queries(),
                    delta: inst.delta().clone(),
                    seed: run_seed,
                    set: found.set,
                    verified,
                });
            }
            emit_spanning_rows(&rows, format);
            Ok(0)
        }
        LcsCommand::GraphProcess {
            pick,
            steps,
            seed,
            format,
        } => {
            let sampler = pick.build(seed)?;
            let t = match steps {
                Some(t) => t,
                None => default_steps(&sampler)?,
            };
            if t == 0 {
                return Err(Error::RangeViolation {
                    what: "step count",
                    value: 0,
                    min: 1,
                    max: usize::MAX,
                });
            }
            let counts = graph_process_run(&sampler, t, seed);
            emit_process_rows(&counts, format);
            Ok(0)
        }
    }
}

/// The step horizon matching the source-count bound: ceil((4/alpha) ln n).
fn default_steps(sampler: &SpreadSampler) -> Result<usize> {
    let alpha = sampler.alpha().to_f64().unwrap_or(0.0);
    if alpha <= 0.0 {
        return Err(Error::RangeViolation {
            what: "step count (required when the sampler's alpha is zero)",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let n = sampler.vertex_count() as f64;
    Ok((4.0 / alpha * n.ln()).ceil() as usize)
}

fn one_based_to_zero(set: &[u32], n: usize) -> Result<Vec<u32>> {
    set.iter()
        .map(|&e| {
            if e == 0 || e as usize > n {
                Err(Error::RangeViolation {
                    what: "set element",
                    value: e as usize,
                    min: 1,
                    max: n,
                })
            } else {
                Ok(e - 1)
            }
        })
        .collect()
}

fn symbols(word: &[u32]) -> String {
    let mut out = String::new();
    for &s in word {
        if !out.is_empty() {
            out.push(' ');
        }
        let _ = write!(out, "{s}");
    }
    out
}
