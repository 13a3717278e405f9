//! Command-line front end. Every command prints one JSON document.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::geometry::Geometry;
use crate::invariants;
use crate::jumping;
use crate::matrix::{self, Matrix};
use crate::models::Model;
use crate::moduli::{self, stream_rng};
use crate::monads;
use crate::pencil::{self, Pencil};
use crate::serial::{ModelJson, MonadJson, NetJson, SampleDocument, FORMAT};
use crate::hilbert;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for a failed check.
pub const EXIT_FAILED: i32 = 1;
/// Exit code for a bad configuration.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fano-instantons", version, about = "Monads and nets of quadrics for instanton bundles on Fano threefolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a monad (and its net, where applicable).
    Sample(Target),
    /// Check a sampled monad fiberwise.
    Validate(Validate),
    /// The DD invariant of a quadric monad.
    Dd(Source),
    /// Tangent and orbit dimensions over independent trials.
    Delta(Delta),
    /// Jumping lines (quadric) or jumping conics (v22).
    Jumping(Source),
    /// The apolar quartic of a v22 model.
    Apolar(Apolar),
    /// Wall's semistability test for a v22 net over a tiny field.
    Semistable(Semistable),
    /// Branch sextic of a pencil of quadrics in P^5.
    Pencil(PencilArgs),
    /// Compare the monad and instanton Hilbert polynomials.
    Chi(Chi),
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    #[arg(long)]
    pub geometry: Geometry,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Source {
    /// A document written by `sample`.
    #[arg(long, conflicts_with_all = ["geometry", "k"])]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    pub geometry: Option<Geometry>,
    #[arg(long, required_unless_present = "input")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Validate {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 200)]
    pub npoints: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Delta {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args)]
pub struct Apolar {
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Semistable {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct PencilArgs {
    /// Six integers: the pencil `I, diag(d)`. Random when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub diagonal: Option<Vec<i64>>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct Chi {
    #[arg(long)]
    pub geometry: Geometry,
    #[arg(long)]
    pub k: usize,
}

/// Error from a command, with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidField(_) | Error::Unsupported(_) | Error::Serde(_) | Error::Dimension(_) => {
                EXIT_CONFIG
            }
            _ => EXIT_FAILED,
        };
        CliError { code, message: e.to_string() }
    }
}

/// A finished command: its document and whether its check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub passed: bool,
}

impl Outcome {
    pub fn code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }
}

fn odd_prime(p: u64) -> Result<PrimeField, CliError> {
    let f = PrimeField::new(p).map_err(CliError::from)?;
    if !f.is_odd() {
        return Err(CliError::config(format!("prime must be odd, got {p}")));
    }
    Ok(f)
}

fn envelope(command: &str, body: impl Serialize) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(body).map_err(|e| CliError::from(Error::from(e)))?;
    if let Value::Object(map) = &mut v {
        map.insert("format".into(), json!(FORMAT));
        map.insert("command".into(), json!(command));
    }
    Ok(v)
}

/// Samples the monad (and net) for `(geometry, k)`: stream 0 of the seed
/// builds the model, stream 1 draws the sample.
pub fn sample_document(geometry: Geometry, k: usize, field: PrimeField, seed: u64) -> crate::Result<SampleDocument> {
    geometry.check_k(k)?;
    let model = Model::build(geometry, field, &mut stream_rng(seed, 0))?;
    let mut rng = stream_rng(seed, 1);
    let (monad, net, rejected) = match &model {
        Model::Quadric(_) => (monads::sample_quadric_monad(k, field, &mut rng)?, None, Vec::new()),
        Model::V5(v5) => {
            let s = monads::sample_v5_net(k, v5, &mut rng)?;
            (monads::net_to_monad(&field, &s.net)?, Some(s.net), s.rejected_pencils)
        }
        Model::V22(v22) => {
            let s = monads::sample_v22_net(k, v22, &mut rng)?;
            (monads::net_to_monad(&field, &s.net)?, Some(s.net), s.rejected_pencils)
        }
    };
    Ok(SampleDocument {
        format: FORMAT,
        geometry,
        k,
        prime: field.modulus(),
        seed,
        model: ModelJson::from_model(&model, Some(seed)),
        monad: MonadJson::from_monad(&monad),
        net: net.map(|n| NetJson::from_net(&n, &field)),
        rejected_pencils: rejected,
    })
}

fn load_source(src: &Source) -> Result<SampleDocument, CliError> {
    match &src.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            Ok(SampleDocument::from_json(&text)?)
        }
        None => {
            let geometry = src.geometry.ok_or_else(|| CliError::config("--geometry is required"))?;
            let k = src.k.ok_or_else(|| CliError::config("--k is required"))?;
            geometry.check_k(k)?;
            Ok(sample_document(geometry, k, odd_prime(src.prime)?, src.seed)?)
        }
    }
}

fn random_pencil<R: Rng + ?Sized>(f: &PrimeField, rng: &mut R) -> crate::Result<Pencil> {
    let sym = |rng: &mut R| {
        let m = matrix::random(f, 6, 6, rng);
        matrix::add(f, &m, &m.transpose())
    };
    loop {
        if let Ok(p) = Pencil::new(f, sym(rng), sym(rng)) {
            return Ok(p);
        }
    }
}

/// Runs one command.
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Sample(t) => {
            let doc = sample_document(t.geometry, t.k, odd_prime(t.prime)?, t.seed)?;
            let document = serde_json::to_value(&doc).map_err(|e| CliError::from(Error::from(e)))?;
            Ok(Outcome { document, passed: true })
        }
        Command::Validate(v) => {
            let doc = load_source(&v.source)?;
            let (model, monad, _) = doc.load()?;
            let mut rng = stream_rng(doc.seed, 2);
            let report = monads::validate_monad(&monad, &model, v.npoints, &mut rng)?;
            let passed = report.passed;
            Ok(Outcome { document: envelope("validate", report)?, passed })
        }
        Command::Dd(src) => {
            let doc = load_source(src)?;
            let (model, monad, _) = doc.load()?;
            let Model::Quadric(q) = &model else {
                return Err(CliError::config("dd is defined for quadric monads"));
            };
            let dd = invariants::dd_invariant(&monad.field, &monad.a, &monad.d, &q.spin)?;
            let body = json!({
                "geometry": monad.geometry,
                "k": monad.k,
                "prime": monad.field.modulus(),
                "dd": dd,
                "zero": dd == 0,
            });
            Ok(Outcome { document: envelope("dd", body)?, passed: true })
        }
        Command::Delta(d) => {
            let t = &d.target;
            t.geometry.check_k(t.k)?;
            let report = moduli::delta_check(t.geometry, t.k, d.trials, odd_prime(t.prime)?, t.seed)?;
            let passed = report.passed;
            Ok(Outcome { document: envelope("delta", report)?, passed })
        }
        Command::Jumping(src) => {
            let doc = load_source(src)?;
            let (_, monad, net) = doc.load()?;
            let report = match (monad.geometry, net) {
                (Geometry::Quadric, _) => jumping::jumping_lines_report(&monad)?,
                (Geometry::V22, Some(net)) => jumping::jumping_conics_report(&monad.field, &net)?,
                _ => return Err(CliError::config("jumping needs a quadric monad or a v22 net")),
            };
            let passed = report.identity_holds && report.generic_splitting;
            Ok(Outcome { document: envelope("jumping", report)?, passed })
        }
        Command::Apolar(a) => {
            let f = odd_prime(a.prime)?;
            let model = Model::build(Geometry::V22, f, &mut stream_rng(a.seed, 0))?;
            let quartic = invariants::apolar_quartic(&f, model.grams())?;
            let body = json!({
                "prime": f.modulus(),
                "seed": a.seed,
                "B_gram_matrices": ModelJson::from_model(&model, Some(a.seed)).b_gram_matrices,
                "quartic": quartic.to_json(),
            });
            Ok(Outcome { document: envelope("apolar", body)?, passed: quartic.degree() == Some(4) })
        }
        Command::Semistable(s) => {
            let f = odd_prime(s.prime)?;
            if f.modulus() != 3 {
                return Err(CliError::config("semistable enumerates over F_3; use --prime 3"));
            }
            Geometry::V22.check_k(s.k)?;
            let doc = sample_document(Geometry::V22, s.k, f, s.seed)?;
            let (_, _, net) = doc.load()?;
            let net = net.expect("v22 documents carry the net");
            let witness = invariants::wall_semistable(&f, &net)?;
            let passed = witness.is_semistable();
            let body = json!({
                "k": s.k,
                "seed": s.seed,
                "net": NetJson::from_net(&net, &f),
                "witness": witness,
            });
            Ok(Outcome { document: envelope("semistable", body)?, passed })
        }
        Command::Pencil(p) => {
            let f = odd_prime(p.prime)?;
            let pencil = match &p.diagonal {
                Some(d) => {
                    let d: [i64; 6] = d
                        .as_slice()
                        .try_into()
                        .map_err(|_| CliError::config("--diagonal takes six integers"))?;
                    pencil::diagonal_pencil(&f, &d)?
                }
                None => random_pencil(&f, &mut stream_rng(p.seed, 0))?,
            };
            let report = pencil::sextic_report(&f, &pencil);
            let rows = |m: &Matrix<u64>| (0..6).map(|r| m.row(r).to_vec()).collect::<Vec<_>>();
            let body = json!({
                "Q1": rows(pencil.q1()),
                "Q2": rows(pencil.q2()),
                "sextic": report,
            });
            Ok(Outcome { document: envelope("pencil", body)?, passed: true })
        }
        Command::Chi(c) => {
            let range = match c.geometry {
                Geometry::Quadric => 2..=9,
                Geometry::V5 => 2..=6,
                Geometry::V22 => {
                    return Err(CliError::config("chi compares monad and instanton only on quadric and v5"))
                }
            };
            if !range.contains(&c.k) {
                return Err(CliError::config(format!(
                    "k = {} for {}; supported range is {}..={}",
                    c.k,
                    c.geometry,
                    range.start(),
                    range.end()
                )));
            }
            let check = hilbert::chi_check(c.geometry, c.k)?;
            let passed = check.identical;
            Ok(Outcome { document: envelope("chi", check)?, passed })
        }
    }
}

/// Parses `args`, runs the command and writes its document. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.document).expect("serializable") + "\n";
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => outcome.code(),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    EXIT_CONFIG
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("fano-instantons").chain(args.iter().copied())).unwrap();
        execute(&cli.command).unwrap()
    }

    #[test]
    fn delta_reports_expected_value() {
        let o = run_ok(&["delta", "--geometry", "quadric", "--k", "3", "--trials", "5", "--seed", "1"]);
        assert!(o.passed);
        for t in o.document["trials"].as_array().unwrap() {
            assert_eq!(t["delta"], 12);
        }
    }

    #[test]
    fn output_is_deterministic() {
        let a = run_ok(&["sample", "--geometry", "v22", "--k", "2", "--seed", "4"]);
        let b = run_ok(&["sample", "--geometry", "v22", "--k", "2", "--seed", "4"]);
        assert_eq!(a, b);
    }

    #[test]
    fn bad_configs_exit_two() {
        let cli = Cli::try_parse_from(["x", "delta", "--geometry", "v5", "--k", "7"]).unwrap();
        let e = execute(&cli.command).unwrap_err();
        assert_eq!(e.code, EXIT_CONFIG);
        assert!(e.message.contains("2..=4"));
        let cli = Cli::try_parse_from(["x", "sample", "--geometry", "quadric", "--k", "3", "--prime", "32004"]).unwrap();
        assert_eq!(execute(&cli.command).unwrap_err().code, EXIT_CONFIG);
        assert_eq!(run(["x", "frobnicate"]), EXIT_CONFIG);
    }

    #[test]
    fn chi_and_pencil() {
        assert!(run_ok(&["chi", "--geometry", "v5", "--k", "6"]).passed);
        let o = run_ok(&["pencil", "--diagonal", "0,1,2,3,4,5"]);
        assert_eq!(o.document["sextic"]["smooth"], true);
        let o = run_ok(&["pencil", "--diagonal", "0,0,1,2,3,4"]);
        assert_eq!(o.document["sextic"]["smooth"], false);
    }
}
