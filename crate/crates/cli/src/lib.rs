//! The `theta` command: lifts, nonvanishing, invariants, packets,
//! enumeration and the self-test, all speaking the JSON dialect of
//! [`theta_core::wire`].

use std::fs;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use theta_core::oracle::{consistency_suite, enumerate_lds, EnumerationSpec, SuiteLimits};
use theta_core::wire::{
    invariants_json, rep_json, signature_json, tempered_lift_json, Param, ParamDocument,
    SPEC_VERSION,
};
use theta_core::{
    aq_normalize, atobe_invariants, lds_from_packet, nonvanishing, tempered_packet_members,
    theta_lift_lds, theta_lift_tempered, Convention, HalfInt, LdsParam, PacketDatum, Signature,
    TemperedParam, ThetaError,
};

#[derive(Parser, Debug)]
#[command(
    name = "theta",
    version,
    about = "Theta lifts for real unitary dual pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Explicit theta lift of an lds, tempered or aq parameter.
    Lift {
        /// Parameter document (`-` for stdin).
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        target: Signature,
    },
    /// Whether the theta lift to the target is nonzero.
    Nonvanish {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        target: Signature,
    },
    /// Invariants deciding nonvanishing, for `k0` in {-1, 0}.
    Invariants {
        #[arg(long = "in")]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        k0: i64,
    },
    /// Members of an L-packet on one signature.
    Packet {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        signature: Signature,
    },
    /// Every (limit of) discrete series of dimension `n` with `|λ| ≤ bound`.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: HalfInt,
    },
    /// Runs the consistency suite and reports violations.
    Selftest {
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value = "7/2")]
        bound: HalfInt,
    },
}

#[derive(Debug)]
enum Failure {
    Malformed(String),
    Theta(ThetaError),
}

impl From<ThetaError> for Failure {
    fn from(e: ThetaError) -> Self {
        Failure::Theta(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Malformed(_) => 2,
            Failure::Theta(ThetaError::InvalidParam(_)) => 3,
            Failure::Theta(ThetaError::InternalInconsistency(_)) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Malformed(m) => m.clone(),
            Failure::Theta(e) => e.to_string(),
        }
    }
}

/// Exit status and output of one command.
struct Outcome {
    document: Value,
    status: i32,
}

impl From<Value> for Outcome {
    fn from(document: Value) -> Self {
        Self {
            document,
            status: 0,
        }
    }
}

fn read_document(path: &str) -> Result<ParamDocument, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Malformed(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("{path}: {e}")))
}

/// A tempered parameter from an lds, tempered or discrete-series aq document.
fn tempered_of(param: Param) -> Result<TemperedParam, Failure> {
    match param {
        Param::Lds(lds) => Ok(TemperedParam::from_lds(lds)),
        Param::Tempered(pi) => Ok(pi),
        Param::Aq(rep) => {
            let lds = LdsParam::from_rep(&aq_normalize(&rep)?).map_err(|_| {
                ThetaError::InvalidParam(format!("{rep} is not a (limit of) discrete series"))
            })?;
            Ok(TemperedParam::from_lds(lds))
        }
        Param::Packet(..) => Err(ThetaError::InvalidParam(
            "expected a representation, got a packet document".into(),
        )
        .into()),
    }
}

fn versioned(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("spec_version".into(), json!(SPEC_VERSION));
    }
    v
}

fn lift(doc: &ParamDocument, target: Signature) -> Result<Value, Failure> {
    let conv = doc.convention();
    let pi = tempered_of(doc.decode()?)?;
    let body = if pi.d() == 0 {
        theta_lift_lds(pi.lds(), target, conv)?.map(|rep| rep_json(&rep))
    } else {
        theta_lift_tempered(&pi, target, conv)?.map(|l| tempered_lift_json(&l))
    };
    Ok(versioned(match body {
        Some(mut v) => {
            v["vanishes"] = json!(false);
            v
        }
        None => json!({ "vanishes": true }),
    }))
}

fn packet(doc: &ParamDocument, signature: Signature) -> Result<Value, Failure> {
    let conv = doc.convention();
    let Param::Packet(phi, eta_given) = doc.decode()? else {
        return Err(
            ThetaError::InvalidParam("packet expects a document of kind packet".into()).into(),
        );
    };
    let members: Vec<TemperedParam> = if eta_given {
        selected_member(&phi, signature)?.into_iter().collect()
    } else {
        tempered_packet_members(&phi)?
            .into_iter()
            .filter(|(s, _)| *s == signature)
            .map(|(_, m)| m)
            .collect()
    };
    let docs: Vec<Value> = members
        .iter()
        .map(|m| {
            let doc = if m.d() == 0 {
                ParamDocument::lds(m.lds(), conv)
            } else {
                ParamDocument::tempered(m, conv)
            };
            serde_json::to_value(doc).expect("documents serialize")
        })
        .collect();
    Ok(versioned(
        json!({ "signature": signature_json(signature), "members": docs }),
    ))
}

fn selected_member(
    phi: &PacketDatum,
    signature: Signature,
) -> Result<Option<TemperedParam>, Failure> {
    let d = phi.pairs.len();
    if signature.dim() != phi.dim() || signature.p < d || signature.q < d {
        return Ok(None);
    }
    let inner = Signature::new(signature.p - d, signature.q - d);
    match lds_from_packet(&phi.selfdual_part(), inner)? {
        Some(lds) => Ok(Some(TemperedParam::new(phi.pairs.clone(), lds)?)),
        None => Ok(None),
    }
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Lift { input, target } => Ok(lift(&read_document(&input)?, target)?.into()),
        Command::Nonvanish { input, target } => {
            let doc = read_document(&input)?;
            let pi = tempered_of(doc.decode()?)?;
            let nonzero = nonvanishing(&pi, target, doc.convention())?;
            Ok(versioned(json!({ "nonzero": nonzero })).into())
        }
        Command::Invariants { input, k0 } => {
            let doc = read_document(&input)?;
            let pi = tempered_of(doc.decode()?)?;
            Ok(invariants_json(&atobe_invariants(&pi, k0, doc.convention())?).into())
        }
        Command::Packet { input, signature } => {
            Ok(packet(&read_document(&input)?, signature)?.into())
        }
        Command::Enumerate { n, bound } => {
            if bound <= HalfInt::ZERO {
                return Err(ThetaError::InvalidParam("bound must be positive".into()).into());
            }
            let parity = (n % 2) as i64;
            let conv = Convention::new(parity, parity);
            let docs: Vec<Value> = enumerate_lds(&EnumerationSpec::new(n, bound))
                .iter()
                .map(|(_, lds)| {
                    serde_json::to_value(ParamDocument::lds(lds, conv))
                        .expect("documents serialize")
                })
                .collect();
            Ok(Value::Array(docs).into())
        }
        Command::Selftest { nmax, bound } => {
            if bound <= HalfInt::ZERO {
                return Err(ThetaError::InvalidParam("bound must be positive".into()).into());
            }
            let report = consistency_suite(&SuiteLimits {
                nmax,
                lambda_bound: bound,
                ..SuiteLimits::default()
            });
            let status = if report.violations.is_empty() { 0 } else { 1 };
            Ok(Outcome {
                document: report.to_json(),
                status,
            })
        }
    }
}

/// Runs `theta` with `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.document).expect("values serialize");
            let _ = writeln!(stdout, "{text}");
            outcome.status
        }
        Err(failure) => {
            let _ = writeln!(stderr, "theta: {}", failure.message());
            failure.exit_code()
        }
    }
}
