use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;

use limitgen::fixtures;
use limitgen::generate::{breadth_error, km_membership_generate, km_subset_generate, KmState};
use limitgen::harness::{estimate_curve, fit_exponential, gnuplot_script, Algorithm, ErrorMode, ExperimentConfig};
use limitgen::identify::LabeledIdentifier;
use limitgen::mop::{mop_decide, DecideMode, FixtureMachine};
use limitgen::reductions::{identify_via_breadth_generator, identify_via_unambiguous, GeneratorTrainer};
use limitgen::sampling::{adversarial_enumeration, parse_elems, trial_rng, Schedule, Stream, ValidDistribution};
use limitgen::{Elem, LabeledSample, Result, Sample};

#[derive(Parser)]
#[command(name = "limitgen", version, about = "Identification and generation in the limit, simulated")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the fixture collections and their ground truth.
    Fixtures,
    /// Print each step of an algorithm on one presentation.
    Trace {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        algo: String,
        /// Comma-separated elements; drawn from the fixture target when absent.
        #[arg(long)]
        sample: Option<String>,
        /// `canonical`, `delayed:d` or `explicit:a,b,...`; i.i.d. draws when absent.
        #[arg(long)]
        schedule: Option<Schedule>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Window for the per-step breadth check of generators.
        #[arg(long, default_value_t = 200)]
        window: usize,
    },
    /// Estimate an error curve and write it as CSV.
    Curve {
        #[arg(long)]
        fixture: String,
        #[arg(long)]
        algo: String,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script here.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
        /// `identify`, `generate-consistency`, `generate-breadth` or `unambiguous`.
        #[arg(long)]
        mode: Option<ErrorMode>,
        #[arg(long, default_value_t = 200)]
        window: usize,
    },
    /// Run a generator-to-identifier reduction along the canonical enumeration.
    Reduce {
        #[arg(long, value_enum)]
        mode: ReduceMode,
        /// `cheat:z` or `km-bob`.
        #[arg(long)]
        trainer: String,
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 20)]
        t_max: usize,
    },
    /// Decide support membership for a token machine.
    Mop {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        string: String,
        /// Accept prefixes of support elements.
        #[arg(long)]
        prefix: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMode {
    Breadth,
    Unambiguous,
}

fn seed_or_fresh(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::thread_rng().gen();
        eprintln!("seed: {s}");
        s
    })
}

fn fixtures_cmd() -> Result<()> {
    println!("name\ttarget\tidentifiable\ttrivial\tsize\thorizon");
    for c in fixtures::all() {
        let m = c.meta();
        let size = c.size().map_or("inf".to_string(), |k| k.to_string());
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            c.name(),
            m.target,
            m.known_identifiable,
            m.known_trivial_for_generation,
            size,
            m.index_horizon
        );
    }
    Ok(())
}

fn trace_cmd(
    fixture: &str,
    algo: &str,
    sample: Option<&str>,
    schedule: Option<&Schedule>,
    steps: Option<usize>,
    seed: Option<u64>,
    window: usize,
) -> Result<()> {
    let c = fixtures::by_name(fixture)?;
    let algorithm: Algorithm = algo.parse()?;
    let k = c.target_language();
    let given = sample.map(parse_elems).transpose()?;
    let steps = steps.unwrap_or_else(|| given.as_ref().map_or(20, Vec::len).max(c.size().unwrap_or(0)));
    let seed = seed_or_fresh(seed);
    let stream: Vec<Elem> = match (&given, schedule) {
        (Some(xs), _) => xs.clone(),
        (None, Some(sch)) => adversarial_enumeration(&k, sch)?.take(steps).collect(),
        (None, None) => Stream::iid(ValidDistribution::for_fixture(&c), seed).take_sample(steps)?.items().to_vec(),
    };
    let mut rng = trial_rng(seed, steps, 0);
    let mut km = KmState::default();
    for t in 1..=steps {
        let s = Sample::new(stream[..t.min(stream.len())].to_vec());
        let x = stream.get(t - 1).map_or("-".to_string(), |x| x.to_string());
        let out = match algorithm {
            Algorithm::KmSubset => km_subset_generate(&c, &s, t).map(|y| format!("emit={y}")),
            Algorithm::KmMembership => km_membership_generate(&c, &s, t, &mut km).map(|y| format!("emit={y}")),
            a if a.is_generator() => a.generator(&c, &s).and_then(|g| {
                let y = g.sample(&mut rng)?;
                Ok(format!("emit={y} breadth_err={}", breadth_error(&k, &g, &s, window)))
            }),
            a if a.is_labeled() => {
                let labeled = LabeledSample::new(s.iter().map(|x| (x, k.contains(x))).collect())?;
                a.identify_labeled(&c, &labeled).map(|i| format!("guess={i}"))
            }
            a => a.identify_positive(&c, &s).map(|i| format!("guess={i}")),
        };
        match out {
            Ok(o) => println!("t={t} x={x} {o}"),
            Err(e) => println!("t={t} x={x} error={e}"),
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn curve_cmd(
    fixture: &str,
    algo: &str,
    n_max: usize,
    trials: usize,
    seed: Option<u64>,
    out: Option<&PathBuf>,
    gnuplot: Option<&PathBuf>,
    mode: Option<ErrorMode>,
    window: usize,
) -> Result<()> {
    let algorithm: Algorithm = algo.parse()?;
    let mut cfg = ExperimentConfig::new(fixture, algorithm)
        .grid(1..=n_max)
        .trials(trials)
        .seed(seed_or_fresh(seed))
        .mode(mode.unwrap_or_else(|| ErrorMode::default_for(algorithm)));
    cfg.window = window;
    let curve = estimate_curve(&cfg)?;
    let csv = curve.to_csv();
    match out {
        Some(p) => fs::write(p, &csv).map_err(io_err)?,
        None => print!("{csv}"),
    }
    if let Some(g) = gnuplot {
        let csv_path = out.map_or("curve.csv".to_string(), |p| p.display().to_string());
        fs::write(g, gnuplot_script(&csv_path, &format!("{fixture} / {algo}"))).map_err(io_err)?;
    }
    match fit_exponential(&curve) {
        Ok(f) => eprintln!("fit: C={:.4} c={:.4} residual={:.4} rows={}", f.big_c, f.c, f.residual, f.used_rows),
        Err(e) => eprintln!("fit: {e}"),
    }
    Ok(())
}

fn reduce_cmd(mode: ReduceMode, trainer: &str, fixture: &str, t_max: usize) -> Result<()> {
    let c = fixtures::by_name(fixture)?;
    let trainer = GeneratorTrainer::by_name(trainer)?;
    let stream: Vec<Elem> = adversarial_enumeration(&c.target_language(), &Schedule::Canonical)?
        .take(t_max)
        .collect();
    for t in 1..=t_max {
        let guess = match mode {
            ReduceMode::Breadth => {
                identify_via_breadth_generator(&c, &trainer, &LabeledIdentifier::GoldPosNeg, &stream, t, true)
            }
            ReduceMode::Unambiguous => identify_via_unambiguous(&c, &trainer, &stream, t),
        };
        match guess {
            Ok(i) => println!("t={t} guess={i} correct={}", c.equality_oracle(i)),
            Err(e) => println!("t={t} error={e}"),
        }
    }
    Ok(())
}

fn mop_cmd(machine: &str, s: &str, prefix: bool) -> Result<()> {
    let m = FixtureMachine::by_name(machine)?;
    let mode = if prefix { DecideMode::Prefix } else { DecideMode::Complete };
    let v = mop_decide(&m, s, mode)?;
    if v.answer {
        println!("Yes");
        if let Some(w) = v.witness {
            let steps: Vec<String> = w
                .iter()
                .map(|bits| match bits.as_slice() {
                    [] => "ε".to_string(),
                    bits => bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                })
                .collect();
            println!("witness: [{}]", steps.join(","));
        }
    } else {
        println!("No");
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> limitgen::Error {
    limitgen::Error::Config(e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fixtures => fixtures_cmd(),
        Command::Trace {
            fixture,
            algo,
            sample,
            schedule,
            steps,
            seed,
            window,
        } => trace_cmd(&fixture, &algo, sample.as_deref(), schedule.as_ref(), steps, seed, window),
        Command::Curve {
            fixture,
            algo,
            n_max,
            trials,
            seed,
            out,
            gnuplot,
            mode,
            window,
        } => curve_cmd(&fixture, &algo, n_max, trials, seed, out.as_ref(), gnuplot.as_ref(), mode, window),
        Command::Reduce {
            mode,
            trainer,
            fixture,
            t_max,
        } => reduce_cmd(mode, &trainer, &fixture, t_max),
        Command::Mop { machine, string, prefix } => mop_cmd(&machine, &string, prefix),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
