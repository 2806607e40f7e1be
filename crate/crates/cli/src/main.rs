use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qopmat::io;
use qopmat::tomography::{default_basis, predicted_s_error};
use qopmat::{
    check_physical, process_fidelity, reconstruct, run_circuit, simulate_dataset, BasisKind, ChannelRepr,
    OperatorBasis, ProductBasis, QopError,
};

/// Convert, verify, compose and tomograph quantum channels on qudits.
///
/// Exit status is 0 on success, 1 when the input is well-formed but fails
/// validation, and 2 on I/O or parse failures.
#[derive(Parser, Debug)]
#[command(name = "qopmat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a canonical operator basis as JSON.
    Basis {
        #[arg(long)]
        d: usize,
        /// transition, weyl or gellmann.
        #[arg(long, default_value = "gellmann")]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a channel file to another representation and/or basis.
    Convert {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Basis kind for every qudit, or a path to a basis file. Defaults to
        /// the input's basis, or gellmann for Kraus input.
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a physicality report for a channel file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Extract Kraus operators from a channel file.
    Kraus {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply the lifted S-matrices of a circuit file.
    Compose {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        basis: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Process fidelity of channel `a` against the ideal (rank-one) channel `b`.
    Fidelity {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Simulate a tomography dataset, or reconstruct a channel from one.
    Tomo {
        #[arg(long, required_unless_present = "reconstruct", conflicts_with = "reconstruct")]
        channel: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dataset file to reconstruct from.
        #[arg(long)]
        reconstruct: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Chi,
    Smatrix,
    Kraus,
}

fn emit(out: Option<&Path>, value: &Value) -> qopmat::Result<()> {
    match out {
        Some(path) => io::write_json_file(path, value),
        None => {
            print!("{}", io::to_canonical_string(value));
            Ok(())
        }
    }
}

fn resolve_basis(spec: &str, d: usize) -> qopmat::Result<Arc<OperatorBasis>> {
    match spec.parse::<BasisKind>() {
        Ok(BasisKind::Custom) | Err(_) if Path::new(spec).exists() => {
            let b = io::basis_from_json(&io::read_json_file(Path::new(spec))?)?;
            if b.d() != d {
                return Err(QopError::DimensionMismatch(format!("basis file has d = {}, channel has d = {d}", b.d())));
            }
            Ok(Arc::new(b))
        }
        Ok(kind) if kind != BasisKind::Custom => Ok(Arc::new(OperatorBasis::canonical(kind, d)?)),
        _ => Err(QopError::InvalidArgument(format!(
            "unknown basis {spec:?}; use transition, weyl, gellmann or a basis file"
        ))),
    }
}

fn target_register(repr: &ChannelRepr, basis: Option<&str>) -> qopmat::Result<ProductBasis> {
    match (basis, repr.basis()) {
        (Some(spec), _) => ProductBasis::uniform(resolve_basis(spec, repr.d())?, repr.n()),
        (None, Some(own)) => Ok(own.clone()),
        (None, None) => ProductBasis::canonical(BasisKind::GellMann, repr.d(), repr.n()),
    }
}

fn run(cli: Cli) -> qopmat::Result<()> {
    match cli.command {
        Command::Basis { d, kind, out } => {
            let kind: BasisKind = kind.parse()?;
            let basis = OperatorBasis::canonical(kind, d)?;
            emit(out.as_deref(), &io::basis_to_json(&basis))
        }
        Command::Convert { input, to, basis, out } => {
            let repr = io::read_channel(&input)?;
            let converted: ChannelRepr = match to {
                Target::Chi => repr.to_chi(&target_register(&repr, basis.as_deref())?)?.into(),
                Target::Smatrix => repr.to_s(&target_register(&repr, basis.as_deref())?)?.into(),
                Target::Kraus => repr.to_kraus()?.into(),
            };
            emit(out.as_deref(), &io::channel_to_json(&converted))
        }
        Command::Verify { input } => {
            let report = check_physical(&io::read_channel(&input)?)?;
            let value = serde_json::to_value(report).expect("report serializes");
            emit(None, &value)
        }
        Command::Kraus { input, out } => {
            let kraus = io::read_channel(&input)?.to_kraus()?;
            emit(out.as_deref(), &io::channel_to_json(&kraus.into()))
        }
        Command::Compose { circuit, basis, out } => {
            let loaded = io::read_circuit(&circuit)?;
            let d = loaded.spec.d;
            let per_qudit = resolve_basis(basis.as_deref().unwrap_or("gellmann"), d)?;
            let register = ProductBasis::uniform(per_qudit, loaded.spec.wires.len())?;
            let s = run_circuit(&loaded.spec, &loaded.channels, &register)?;
            emit(out.as_deref(), &io::channel_to_json(&s.into()))
        }
        Command::Fidelity { a, b } => {
            let a = io::read_channel(&a)?;
            let b = io::read_channel(&b)?;
            let register = target_register(&a, None)?;
            let f = process_fidelity(&a.to_chi(&register)?, &b.to_chi(&register)?)?;
            println!("{f}");
            Ok(())
        }
        Command::Tomo { channel, sigma, seed, reconstruct: dataset, out } => {
            if let Some(path) = dataset {
                let ds = io::dataset_from_json(&io::read_json_file(&path)?)?;
                let rec = reconstruct(&ds)?;
                if let Some(out) = out.as_deref() {
                    io::write_channel(out, &rec.chi.clone().into())?;
                }
                let summary = json!({
                    "report": serde_json::to_value(&rec.report).expect("report serializes"),
                    "predicted_s_error": predicted_s_error(ds.d, ds.n, ds.sigma),
                });
                emit(None, &summary)
            } else {
                let path = channel.expect("clap enforces --channel");
                let repr = io::read_channel(&path)?;
                let ds = simulate_dataset(&repr, &default_basis(repr.d())?, sigma, seed)?;
                emit(out.as_deref(), &io::dataset_to_json(&ds))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qopmat: {e}");
            if e.is_input_failure() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
