use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_rational::Ratio;
use tclean::catalog::{build, Kind};
use tclean::circuit::{from_text, to_text, validate, Circuit};
use tclean::golden::check_goldens;
use tclean::resources::{count, crossover, hybrid_cutoff, AdderFamily, CostModel, Cutoff};
use tclean::rewrite::{compile_oracle, lower_ccx, replace_pairs, LowerMode};
use tclean::verify::{verify_kind, VerifyOptions};

#[derive(Parser)]
#[command(name = "tclean", version, about = "Temporary-AND circuit construction and T-count accounting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the circuit text of a named construction.
    Build {
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        carry_out: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the resource report of a circuit file.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a construction against its semantics by simulation.
    ///
    /// `--kind goldens --in DIR` checks a corpus directory instead.
    Verify {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        carry_out: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Replace compute/uncompute Toffoli pairs with temporary ANDs.
    Rewrite {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print before, paired-lowering baseline and after reports.
        #[arg(long)]
        report: bool,
    },
    /// Compile a Boolean expression into a phase oracle.
    Oracle {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: bool,
    },
    /// Adder crossover and hybrid cutoff under the cost model.
    Crossover {
        #[arg(long, default_value = "960")]
        t_volume: String,
        #[arg(long, default_value = "1")]
        idle_factor: String,
    },
}

/// Bad input rather than a failed check.
#[derive(Debug)]
struct Usage(anyhow::Error);

enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes to standard output; a closed pipe ends the process quietly.
fn say(text: &str) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

macro_rules! sayln {
    ($($arg:tt)*) => {
        say(&format!("{}\n", format_args!($($arg)*)))
    };
}

fn usage<T>(r: Result<T>) -> Result<T, Usage> {
    r.map_err(Usage)
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let c = from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
    validate(&c).with_context(|| format!("validating {}", path.display()))?;
    Ok(c)
}

fn emit_circuit(c: &Circuit, out: &Option<PathBuf>) -> Result<()> {
    let text = to_text(c);
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            say(&text);
            Ok(())
        }
    }
}

fn print_report(prefix: &str, c: &Circuit, as_comment: bool) -> Result<()> {
    for line in count(c)?.to_kv().lines() {
        let lead = if as_comment { "# " } else { "" };
        sayln!("{lead}{prefix}{line}");
    }
    Ok(())
}

fn width(kind: Kind, n: Option<usize>, carry_out: bool) -> Result<usize> {
    if carry_out && !kind.uses_carry() {
        bail!("--carry-out does not apply to --kind {kind}");
    }
    match n {
        Some(n) => Ok(n),
        None if !kind.uses_width() => Ok(1),
        None => bail!("--n is required for --kind {kind}"),
    }
}

/// Parses `960`, `1.5` or `7/2` as an exact positive rational.
fn parse_ratio(s: &str) -> Result<Ratio<i128>> {
    let bad = || anyhow!("`{s}` is not a positive number");
    let r = if let Some((p, q)) = s.split_once('/') {
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p.trim().parse().map_err(|_| bad())?, q)
    } else if let Some((whole, frac)) = s.split_once('.') {
        let scale = 10i128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        let digits: i128 = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        Ratio::new(digits, scale)
    } else {
        Ratio::from_integer(s.parse().map_err(|_| bad())?)
    };
    if r <= Ratio::from_integer(0) {
        return Err(bad());
    }
    Ok(r)
}

fn run(command: Command) -> Result<Outcome, Usage> {
    match command {
        Command::Build { kind, n, carry_out, out } => {
            let c = usage(width(kind, n, carry_out).and_then(|n| Ok(build(kind, n, carry_out)?)))?;
            usage(emit_circuit(&c, &out))?;
        }
        Command::Count { input } => {
            let c = usage(read_circuit(&input))?;
            usage(print_report("", &c, false))?;
        }
        Command::Verify { kind, n, carry_out, seed, trials, input } => {
            let opts = VerifyOptions { seed, trials, ..Default::default() };
            if kind == "goldens" {
                let dir = usage(input.ok_or_else(|| anyhow!("--kind goldens needs --in DIR")))?;
                let outcomes = usage(check_goldens(&dir, &opts).map_err(Into::into))?;
                let ok = outcomes.iter().all(|o| o.passed());
                for o in &outcomes {
                    sayln!("{o}");
                }
                sayln!("status={}", if ok { "pass" } else { "fail" });
                return Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed });
            }
            let kind: Kind = usage(kind.parse().map_err(|e| anyhow!("{e}")))?;
            let n = usage(width(kind, n, carry_out))?;
            let checks = usage(verify_kind(kind, n, carry_out, &opts).map_err(Into::into))?;
            let ok = checks.iter().all(|c| c.passed);
            for c in &checks {
                sayln!("{c}");
            }
            sayln!("status={}", if ok { "pass" } else { "fail" });
            return Ok(if ok { Outcome::Ok } else { Outcome::CheckFailed });
        }
        Command::Rewrite { input, out, report } => {
            let c = usage(read_circuit(&input))?;
            let rewritten = replace_pairs(&c);
            usage(emit_circuit(&rewritten, &out))?;
            if report {
                let comment = out.is_none();
                usage(print_report("before.", &c, comment))?;
                usage(print_report("paired4.", &lower_ccx(&c, LowerMode::Paired4), comment))?;
                usage(print_report("after.", &rewritten, comment))?;
            }
        }
        Command::Oracle { expr, out, report } => {
            let c = usage(compile_oracle(&expr).map_err(Into::into))?;
            usage(emit_circuit(&c, &out))?;
            if report {
                usage(print_report("", &c, out.is_none()))?;
            }
        }
        Command::Crossover { t_volume, idle_factor } => {
            let model = CostModel::<Ratio<i128>>::default()
                .with_t_state_volume(usage(parse_ratio(&t_volume))?)
                .with_idle_factor(usage(parse_ratio(&idle_factor))?);
            usage(model.validate().map_err(Into::into))?;
            let x = crossover(
                |n| model.effective_t_closed(AdderFamily::TemporaryAnd, n),
                |n| model.effective_t_closed(AdderFamily::Cuccaro, n),
                1 << 40,
            );
            match x {
                Ok(x) => sayln!("crossover={}", x.reported()),
                Err(_) => sayln!("crossover=none"),
            }
            match usage(hybrid_cutoff(&model).map_err(Into::into))? {
                Cutoff::At(d) => sayln!("hybrid_cutoff={d}"),
                Cutoff::Unbounded => sayln!("hybrid_cutoff=unbounded"),
            }
        }
    }
    Ok(Outcome::Ok)
}
