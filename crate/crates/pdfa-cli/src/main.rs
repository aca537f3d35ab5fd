use std::path::PathBuf;
use std::process::exit;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pdfa::bench::{run_experiment, write_csv, Algo};
use pdfa::lpstar::{run_lpstar, LpstarVariant};
use pdfa::quant::QuantLearner;
use pdfa::randgen::{random_pdfa, GenConfig};
use pdfa::teacher::{eq_quantized, eq_tolerance, PdfaTeacher, Teacher};
use pdfa::{Error, Pdfa, Result};

/// Learn, generate, compare and benchmark probabilistic deterministic
/// finite automata.
#[derive(Parser)]
#[command(name = "pdfa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random PDFA and write it as JSON.
    Gen(GenArgs),
    /// Learn a hidden target PDFA through membership and equivalence
    /// queries.
    Learn(LearnArgs),
    /// Compare two PDFA up to quantization or tolerance.
    Compare(CompareArgs),
    /// Run one of the benchmark experiments and write a CSV of trials.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Nominal (desired reachable) state count.
    #[arg(long)]
    states: usize,
    /// Alphabet size; symbols are "0", "1", ....
    #[arg(long = "alphabet-size")]
    alphabet_size: usize,
    /// Draw states' distributions from a shared pool of this size.
    #[arg(long)]
    dists: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSON path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LearnArgs {
    /// Learning algorithm: quant, lpstar or lpstar-col.
    #[arg(long)]
    algo: Algo,
    /// Quantization parameter (required by quant).
    #[arg(long)]
    kappa: Option<u32>,
    /// Row-comparison tolerance (required by lpstar and lpstar-col).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Target PDFA (JSON).
    #[arg(long)]
    target: PathBuf,
    /// Where to write the learned hypothesis (JSON).
    #[arg(long)]
    out: PathBuf,
    /// Also write a Graphviz rendering of the hypothesis.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CompareMode {
    /// Compare quantized distributions per state pair.
    #[arg(long)]
    kappa: Option<u32>,
    /// Compare distributions with an L∞ tolerance per state pair.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    /// First PDFA (JSON).
    #[arg(long)]
    a: PathBuf,
    /// Second PDFA (JSON).
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    mode: CompareMode,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment number, 1 through 5.
    #[arg(long)]
    experiment: u8,
    /// Use the full-size parameter grids instead of the desk-scale ones.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Run trials one after another instead of on the thread pool.
    #[arg(long)]
    serial: bool,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        exit(if e.is_contract_violation() { 2 } else { 1 });
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => {
            let mut cfg = GenConfig::new(args.states, args.alphabet_size, args.seed);
            if let Some(d) = args.dists {
                cfg = cfg.with_shared_dists(d);
            }
            let pdfa = random_pdfa(&cfg)?;
            pdfa.write_json(&args.out)?;
            println!(
                "wrote {} ({} states, nominal {})",
                args.out.display(),
                pdfa.num_states(),
                args.states
            );
            Ok(())
        }
        Command::Learn(args) => {
            let target = Pdfa::read_json(&args.target)?;
            let mut teacher = PdfaTeacher::new(target);
            let start = Instant::now();
            let (hyp, structure) = match args.algo {
                Algo::Quant => {
                    let kappa = args.kappa.ok_or_else(|| {
                        Error::Config("--kappa is required for --algo quant".into())
                    })?;
                    let mut learner = QuantLearner::new(&mut teacher, kappa)?;
                    let out = learner.run()?;
                    let size = out.structure_size();
                    (out.pdfa, size)
                }
                Algo::Lpstar | Algo::LpstarCol => {
                    let tolerance = args.tolerance.ok_or_else(|| {
                        Error::Config(format!(
                            "--tolerance is required for --algo {}",
                            args.algo
                        ))
                    })?;
                    let variant = if args.algo == Algo::Lpstar {
                        LpstarVariant::RowExpansion
                    } else {
                        LpstarVariant::ColumnExpansion
                    };
                    let out = run_lpstar(&mut teacher, tolerance, variant)?;
                    let size = out.structure_size();
                    (out.pdfa, size)
                }
            };
            let elapsed = start.elapsed().as_secs_f64() * 1000.0;
            hyp.write_json(&args.out)?;
            if let Some(dot) = &args.dot {
                std::fs::write(dot, pdfa::dot::to_dot(&hyp))?;
            }
            println!(
                "learned {} states in {elapsed:.1} ms ({} MQ, {} EQ, structure size {structure})",
                hyp.num_states(),
                teacher.mq_count(),
                teacher.eq_count()
            );
            println!("wrote {}", args.out.display());
            Ok(())
        }
        Command::Compare(args) => {
            let a = Pdfa::read_json(&args.a)?;
            let b = Pdfa::read_json(&args.b)?;
            let outcome = match (args.mode.kappa, args.mode.tolerance) {
                (Some(kappa), None) => eq_quantized(&a, &b, kappa)?,
                (None, Some(t)) => eq_tolerance(&a, &b, t)?,
                _ => unreachable!("clap enforces exactly one mode"),
            };
            match outcome {
                None => println!("equivalent"),
                Some(ce) => println!("counterexample: {}", ce.format(a.alphabet())),
            }
            Ok(())
        }
        Command::Bench(args) => {
            let records = run_experiment(args.experiment, args.full, args.seed, !args.serial)?;
            write_csv(&args.out, &records)?;
            println!("wrote {} trials to {}", records.len(), args.out.display());
            Ok(())
        }
    }
}
