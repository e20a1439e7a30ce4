//! Golden corpus: `corpus/<name>/{circuit.qc, report.txt, semantics.txt, build_cmd.txt}`.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::catalog::{build, Kind};
use crate::circuit::{from_text, to_text, validate, Circuit};
use crate::gadgets::GadgetError;
use crate::resources::count;
use crate::rewrite::{compile_oracle, OracleError};
use crate::verify::{verify, Semantics, VerifyOptions};

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("bad build command `{0}`")]
    Command(String),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A reproducible way to regenerate a corpus circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildCommand {
    Build { kind: Kind, n: usize, carry_out: bool },
    Oracle(String),
}

impl BuildCommand {
    pub fn circuit(&self) -> Result<Circuit, GoldenError> {
        Ok(match self {
            BuildCommand::Build { kind, n, carry_out } => build(*kind, *n, *carry_out)?,
            BuildCommand::Oracle(e) => compile_oracle(e)?,
        })
    }

    pub fn semantics(&self) -> Semantics {
        match self {
            BuildCommand::Build { kind, n, carry_out } => kind.semantics(*n, *carry_out),
            BuildCommand::Oracle(e) => Semantics::PhaseOracle(e.clone()),
        }
    }

    /// Parses the `tclean build ...` and `tclean oracle --expr "..."` forms.
    pub fn parse(line: &str) -> Result<Self, GoldenError> {
        let line = line.trim();
        let bad = || GoldenError::Command(line.to_string());
        let rest = line.strip_prefix("tclean ").ok_or_else(bad)?.trim_start();
        if let Some(expr) = rest.strip_prefix("oracle --expr ") {
            let expr = expr.trim().strip_prefix('"').and_then(|e| e.strip_suffix('"')).ok_or_else(bad)?;
            return Ok(BuildCommand::Oracle(expr.to_string()));
        }
        let mut words = rest.strip_prefix("build ").ok_or_else(bad)?.split_whitespace();
        let (mut kind, mut n, mut carry_out) = (None, None, false);
        while let Some(w) = words.next() {
            match w {
                "--kind" => kind = Some(words.next().ok_or_else(bad)?.parse::<Kind>().map_err(|_| bad())?),
                "--n" => n = Some(words.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?),
                "--carry-out" => carry_out = true,
                _ => return Err(bad()),
            }
        }
        let kind = kind.ok_or_else(bad)?;
        let n = match n {
            Some(n) => n,
            None if !kind.uses_width() => 1,
            None => return Err(bad()),
        };
        Ok(BuildCommand::Build { kind, n, carry_out })
    }
}

impl fmt::Display for BuildCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildCommand::Build { kind, n, carry_out } => {
                write!(f, "tclean build --kind {kind}")?;
                if kind.uses_width() {
                    write!(f, " --n {n}")?;
                }
                if *carry_out {
                    f.write_str(" --carry-out")?;
                }
                Ok(())
            }
            BuildCommand::Oracle(e) => write!(f, "tclean oracle --expr \"{e}\""),
        }
    }
}

/// The four files of one corpus entry, as strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenEntry {
    pub circuit: String,
    pub report: String,
    pub semantics: String,
    pub build_cmd: String,
}

impl GoldenEntry {
    pub fn generate(cmd: &BuildCommand) -> Result<Self, GoldenError> {
        let c = cmd.circuit()?;
        let report = count(&c).map_err(GadgetError::from)?.to_kv();
        Ok(Self {
            circuit: to_text(&c),
            report,
            semantics: format!("{}\n", cmd.semantics()),
            build_cmd: format!("{cmd}\n"),
        })
    }

    pub fn write(&self, dir: &Path) -> Result<(), GoldenError> {
        fs::create_dir_all(dir).map_err(|source| GoldenError::Io { path: dir.into(), source })?;
        for (file, body) in self.files() {
            let path = dir.join(file);
            fs::write(&path, body).map_err(|source| GoldenError::Io { path, source })?;
        }
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self, GoldenError> {
        let read = |file: &str| {
            let path = dir.join(file);
            fs::read_to_string(&path).map_err(|source| GoldenError::Io { path, source })
        };
        Ok(Self {
            circuit: read("circuit.qc")?,
            report: read("report.txt")?,
            semantics: read("semantics.txt")?,
            build_cmd: read("build_cmd.txt")?,
        })
    }

    fn files(&self) -> [(&'static str, &str); 4] {
        [
            ("circuit.qc", &self.circuit),
            ("report.txt", &self.report),
            ("semantics.txt", &self.semantics),
            ("build_cmd.txt", &self.build_cmd),
        ]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoldenOutcome {
    pub name: String,
    pub mismatches: Vec<String>,
}

impl GoldenOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for GoldenOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "golden={} status=pass", self.name);
        }
        write!(f, "golden={} status=fail", self.name)?;
        for m in &self.mismatches {
            write!(f, "\n  {}: {m}", self.name)?;
        }
        Ok(())
    }
}

fn first_difference(a: &str, b: &str) -> usize {
    a.lines().zip(b.lines()).position(|(x, y)| x != y).unwrap_or_else(|| a.lines().count().min(b.lines().count()))
        + 1
}

/// Checks one entry directory. Problems with the files themselves are
/// reported as mismatches rather than errors.
pub fn check_entry(dir: &Path, opts: &VerifyOptions) -> GoldenOutcome {
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut mismatches = Vec::new();
    let mut add = |m: String| mismatches.push(m);
    match GoldenEntry::read(dir) {
        Err(e) => add(e.to_string()),
        Ok(stored) => check_stored(&stored, opts, &mut add),
    }
    GoldenOutcome { name, mismatches }
}

fn check_stored(stored: &GoldenEntry, opts: &VerifyOptions, add: &mut impl FnMut(String)) {
    match BuildCommand::parse(&stored.build_cmd).and_then(|cmd| GoldenEntry::generate(&cmd)) {
        Err(e) => add(format!("build_cmd.txt: {e}")),
        Ok(fresh) => {
            for ((file, want), (_, got)) in fresh.files().iter().zip(stored.files()) {
                if want != &got {
                    add(format!("{file} differs from regenerated output at line {}", first_difference(want, got)));
                }
            }
        }
    }

    let circuit = match from_text(&stored.circuit) {
        Ok(c) => c,
        Err(e) => return add(format!("circuit.qc: {e}")),
    };
    if let Err(e) = validate(&circuit) {
        return add(format!("circuit.qc: {e}"));
    }
    match count(&circuit) {
        Ok(r) if r.to_kv() != stored.report => add("report.txt does not match the stored circuit".into()),
        Ok(_) => {}
        Err(e) => add(format!("circuit.qc: {e}")),
    }
    let sem = match stored.semantics.parse::<Semantics>() {
        Ok(s) => s,
        Err(e) => return add(format!("semantics.txt: {e}")),
    };
    match verify(&circuit, &sem, opts) {
        Ok(checks) => {
            for c in checks.into_iter().filter(|c| !c.passed) {
                add(format!("semantics {sem}: {c}"));
            }
        }
        Err(e) => add(format!("semantics {sem}: {e}")),
    }
}

/// Checks every entry under `corpus`, in name order.
pub fn check_goldens(corpus: &Path, opts: &VerifyOptions) -> Result<Vec<GoldenOutcome>, GoldenError> {
    let io = |source| GoldenError::Io { path: corpus.into(), source };
    let mut dirs: Vec<PathBuf> = fs::read_dir(corpus)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs.iter().map(|d| check_entry(d, opts)).collect())
}

/// Entries shipped in the repository corpus.
pub fn standard_entries() -> Vec<(String, BuildCommand)> {
    let b = |kind, n, carry_out| BuildCommand::Build { kind, n, carry_out };
    let mut v = vec![
        ("and-compute".to_string(), b(Kind::And, 1, false)),
        ("and-uncompute".into(), b(Kind::AndUncompute, 1, false)),
        ("canonical-pair".into(), b(Kind::ToffoliPair, 1, false)),
    ];
    for n in 1..=6 {
        v.push((format!("gidney-adder-n{n}"), b(Kind::GidneyAdder, n, false)));
    }
    v.extend([
        ("gidney-adder-n4-carry".to_string(), b(Kind::GidneyAdder, 4, true)),
        ("cuccaro-adder-n3".into(), b(Kind::CuccaroAdder, 3, false)),
        ("controlled-adder-n3".into(), b(Kind::ControlledAdder, 3, false)),
        ("out-of-place-adder-n3".into(), b(Kind::OutOfPlaceAdder, 3, true)),
        ("mcx-k4".into(), b(Kind::Mcx, 4, false)),
        ("hamming-n5".into(), b(Kind::Hamming, 5, false)),
        ("phase-gradient-n3".into(), b(Kind::PhaseGradient, 3, false)),
        ("oracle-and-or".into(), BuildCommand::Oracle("x0 & (x1 | x2)".into())),
        ("oracle-mixed".into(), BuildCommand::Oracle("!(x0 ^ x1) | x2 & x3".into())),
    ]);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_round_trip() {
        for (_, cmd) in standard_entries() {
            assert_eq!(BuildCommand::parse(&cmd.to_string()).unwrap(), cmd);
        }
        assert!(BuildCommand::parse("tclean build --kind gidney-adder").is_err());
        assert!(BuildCommand::parse("tclean build --kind nope --n 2").is_err());
        assert!(BuildCommand::parse("make adder").is_err());
    }

    #[test]
    fn corrupted_entry_is_reported() {
        let dir = std::env::temp_dir().join(format!("tclean-golden-{}", std::process::id()));
        let entry = dir.join("gidney-adder-n2");
        let mut g = GoldenEntry::generate(&BuildCommand::Build { kind: Kind::GidneyAdder, n: 2, carry_out: false }).unwrap();
        g.write(&entry).unwrap();
        let opts = VerifyOptions { trials: 2, ..Default::default() };
        assert!(check_goldens(&dir, &opts).unwrap().iter().all(GoldenOutcome::passed));

        g.circuit = g.circuit.replace("tdg", "t");
        g.write(&entry).unwrap();
        let out = check_goldens(&dir, &opts).unwrap();
        assert!(!out[0].passed());
        assert!(out[0].to_string().contains("circuit.qc differs"), "{}", out[0]);
        fs::remove_dir_all(&dir).unwrap();
    }
}
