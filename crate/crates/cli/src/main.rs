use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prodlab_core::groups::HSymbolic;
use prodlab_core::lab::{
    perm_cycle_demo, run_experiment, tap_witness_for_h, unbounded_witness, zigzag_divergence_demo,
    BasisSequence, ExperimentSpec, GroupId, HModel, HSequence, SequenceKind, TapOutcome,
    UnboundedOutcome,
};
use prodlab_core::seminorms::{delta, eta, mu, AbsValue, WordSeminorm};
use prodlab_core::suites::{run_suites, Mutant};
use prodlab_core::{Error, Word};

/// Multiplier-twisted infinite products in topological groups.
#[derive(Debug, Parser)]
#[command(name = "prodlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment config and emit its trace.
    Run(RunArgs),
    /// Reproduce the zig-zag and permutation cycle computations.
    #[command(subcommand)]
    Demo(Demo),
    /// Search for divergence witnesses.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Evaluate word seminorms.
    #[command(subcommand)]
    Seminorm(SeminormCmd),
    /// Run the seeded property suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    config: PathBuf,
    /// Write the trace here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    /// Exit 1 unless the verdict has this name.
    #[arg(long)]
    expect: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// eta of the coordinates 2l+1 of the zig-zag rearranged product.
    Zigzag {
        #[arg(long, default_value_t = 10)]
        lmax: u64,
        /// Print the coordinate words too.
        #[arg(long)]
        words: bool,
    },
    /// pi_n = b_0 ... b_n in cycle notation.
    PermCycle {
        #[arg(long, default_value_t = 5)]
        n: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Found,
    NotFound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HSeq {
    Gy,
    GyPairs,
}

#[derive(Debug, Subcommand)]
enum WitnessCmd {
    /// Unbounded-seminorm witness for the weight and sequence of a config.
    Unbounded {
        config: PathBuf,
        /// Largest exponent tried where the weight is omega.
        #[arg(long, default_value_t = 4096)]
        z_cap: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
    },
    /// Case analysis and thin-set witness for a sequence in H.
    TapH {
        #[arg(long, default_value_t = 31)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = HSeq::Gy)]
        sequence: HSeq,
        #[arg(long, default_value_t = 40)]
        terms: u64,
        #[arg(long, default_value_t = 40)]
        window: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum SeminormCmd {
    /// mu, eta and delta of a word such as `0^2.1^-3`.
    Eval {
        word: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    cases: u64,
    /// Inject a known defect; the run must then fail.
    #[arg(long)]
    mutant: Option<Mutant>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config { .. } | Error::ParseWord { .. } | Error::InvalidExperiment(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn negative(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read_config(path: &PathBuf) -> Result<ExperimentSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    ExperimentSpec::from_toml(&text).map_err(|e| match e {
        Error::Config { line, message } => usage(format!("{}:{line}: {message}", path.display())),
        other => usage(format!("{}: {other}", path.display())),
    })
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| negative(format!("write failed: {e}")))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn run(args: RunArgs, out: &mut impl Write) -> Result<(), Failure> {
    let spec = read_config(&args.config)?;
    let trace = run_experiment(&spec)?;
    let text = if args.json {
        trace.to_json() + "\n"
    } else {
        trace.to_text()
    };
    match &args.out {
        Some(path) => fs::write(path, &text).map_err(|e| negative(format!("{}: {e}", path.display())))?,
        None => emit(out, &text)?,
    }
    match args.expect {
        Some(want) if want != trace.verdict.name() => {
            Err(negative(format!("verdict {} where {want} was expected", trace.verdict.name())))
        }
        _ => Ok(()),
    }
}

fn demo(cmd: Demo, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        Demo::Zigzag { lmax, words } => {
            let rows = zigzag_divergence_demo(lmax);
            let mut text = String::from("l eta ext expected ok\n");
            for r in &rows {
                text += &format!("{} {} {} {} {}", r.l, r.eta, r.extrema, 2 * r.l + 2, r.holds());
                if words {
                    text += &format!(" {}", r.word);
                }
                text.push('\n');
            }
            emit(out, &text)?;
            if rows.iter().all(|r| r.holds()) {
                Ok(())
            } else {
                Err(negative("eta(a(2l+1)) differs from 2l+2"))
            }
        }
        Demo::PermCycle { n } => {
            let rows = perm_cycle_demo(n);
            let text: String = rows
                .iter()
                .map(|r| format!("n={} pi={} cycle={}\n", r.n, r.pi, r.is_cycle))
                .collect();
            emit(out, &text)?;
            if rows.iter().all(|r| r.is_cycle) {
                Ok(())
            } else {
                Err(negative("some pi_n is not the expected cycle"))
            }
        }
    }
}

fn h_elements(kind: SequenceKind, terms: u64) -> Vec<HSymbolic> {
    (0..terms).map(|n| HModel::symbolic(kind, n)).collect()
}

fn witness(cmd: WitnessCmd, out: &mut impl Write) -> Result<(), Failure> {
    match cmd {
        WitnessCmd::Unbounded {
            config,
            z_cap,
            json: as_json,
            expect,
        } => {
            let spec = read_config(&config)?;
            let depth = spec.depth as usize;
            let outcome = match (spec.group, spec.sequence) {
                (GroupId::Bounded, SequenceKind::Basis) => {
                    let seq = BasisSequence {
                        terms: spec.horizon,
                        window: spec.window.max(spec.horizon),
                    };
                    unbounded_witness(&spec.weight, &seq, &AbsValue, depth, z_cap)?
                }
                (GroupId::H, kind @ (SequenceKind::Gy | SequenceKind::GyPairs)) => {
                    let seq = HSequence::new(h_elements(kind, spec.horizon), spec.window);
                    unbounded_witness(&spec.weight, &seq, &WordSeminorm::Eta, depth, z_cap)?
                }
                (g, s) => {
                    return Err(usage(format!(
                        "witness search needs the bounded basis or an H sequence, not {g}/{s:?}"
                    )))
                }
            };
            let text = if as_json {
                json(&outcome)
            } else {
                match &outcome {
                    UnboundedOutcome::Found(w) => {
                        let mut t = format!("found depth={} nu={} g={}\n", w.depth(), w.nu, w.weight);
                        for m in 0..w.indices.len() {
                            t += &format!(
                                "m={} n={} z={} i={}\n",
                                m, w.indices[m], w.multipliers[m], w.coords[m]
                            );
                        }
                        t
                    }
                    UnboundedOutcome::NotFound { level, bound, uniform } => format!(
                        "not-found level={level} weight-bound={bound} term-bound={uniform}\n"
                    ),
                }
            };
            emit(out, &text)?;
            let found = matches!(outcome, UnboundedOutcome::Found(_));
            match expect {
                Some(Expectation::Found) if !found => Err(negative("no witness where one was expected")),
                Some(Expectation::NotFound) if found => Err(negative("witness found where none was expected")),
                _ => Ok(()),
            }
        }
        WitnessCmd::TapH {
            depth,
            sequence,
            terms,
            window,
            json: as_json,
        } => {
            let kind = match sequence {
                HSeq::Gy => SequenceKind::Gy,
                HSeq::GyPairs => SequenceKind::GyPairs,
            };
            let outcome = tap_witness_for_h(&h_elements(kind, terms), depth, window)?;
            let text = if as_json {
                json(&outcome)
            } else {
                match &outcome {
                    TapOutcome::LongCore {
                        term,
                        coordinate,
                        core,
                        witness,
                        note,
                    } => {
                        let mut t = format!(
                            "case=long-core term={term} coordinate={coordinate} core={core} note={note}\n"
                        );
                        if let Some(w) = witness {
                            for m in 0..w.indices.len() {
                                t += &format!(
                                    "m={} n={} z={} i={}\n",
                                    m, w.indices[m], w.multipliers[m], w.coords[m]
                                );
                            }
                        }
                        t
                    }
                    TapOutcome::NotNull { t, count, of } => {
                        format!("case=not-null t={t} count={count} of={of}\n")
                    }
                    TapOutcome::Thin {
                        witness, report, ..
                    } => {
                        let mut t = format!("case=thin depth={depth} checked={}\n", report.passed());
                        for (m, v) in &report.values {
                            t += &format!(
                                "m={m} n={} z={} i={} eta={v}\n",
                                witness.indices[*m], witness.multipliers[*m], witness.coords[*m]
                            );
                        }
                        t
                    }
                }
            };
            emit(out, &text)
        }
    }
}

#[derive(Serialize)]
struct SeminormValues {
    word: String,
    eta: usize,
    mu: Vec<(u64, String)>,
    delta: Vec<(u64, String)>,
}

fn seminorm(cmd: SeminormCmd, out: &mut impl Write) -> Result<(), Failure> {
    let SeminormCmd::Eval { word, json: as_json } = cmd;
    let w: Word = word.parse()?;
    let letters: std::collections::BTreeSet<_> = w.letters().collect();
    let values = SeminormValues {
        word: w.to_string(),
        eta: eta(&w),
        mu: letters.iter().map(|&x| (x.0, mu(x, &w).to_string())).collect(),
        delta: letters.iter().map(|&x| (x.0, delta(x.0, &w).to_string())).collect(),
    };
    let text = if as_json {
        json(&values)
    } else {
        let mut t = format!("word={}\neta={}\n", values.word, values.eta);
        for ((x, m), (_, d)) in values.mu.iter().zip(&values.delta) {
            t += &format!("letter={x} mu={m} delta={d}\n");
        }
        t
    };
    emit(out, &text)
}

fn selftest(args: SelftestArgs, out: &mut impl Write) -> Result<(), Failure> {
    let results = run_suites(args.seed, args.cases, args.mutant);
    let mut text = format!(
        "selftest seed={} cases={}{}\n",
        args.seed,
        args.cases,
        args.mutant.map_or(String::new(), |m| format!(" mutant={m}"))
    );
    for r in &results {
        text += &format!("{r}\n");
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    text += &format!("{}\n", if failed == 0 { "PASS" } else { "FAIL" });
    emit(out, &text)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(negative(format!("{failed} suites reported violations")))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Run(args) => run(args, &mut out),
        Command::Demo(cmd) => demo(cmd, &mut out),
        Command::Witness(cmd) => witness(cmd, &mut out),
        Command::Seminorm(cmd) => seminorm(cmd, &mut out),
        Command::Selftest(args) => selftest(args, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("prodlab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
