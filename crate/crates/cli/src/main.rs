use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use umlf::diagnostic::has_errors;
use umlf::dsl::{self, render_errors};
use umlf::instantiate::{self, InstantiationSpec, ObligationError};
use umlf::transform::{self, Binding};
use umlf::{Diagnostic, Model};

mod style;
mod wizard;

use style::Style;

/// Variation-point modeling for object-oriented frameworks.
#[derive(Parser)]
#[command(name = "umlf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check tag placement and well-formedness rules.
    Validate { model: PathBuf },
    /// List variation points with their binding time.
    Points { model: PathBuf },
    /// Apply implementation models to eliminate variable methods and
    /// extensible classes.
    Transform {
        model: PathBuf,
        #[arg(long)]
        bindings: PathBuf,
        /// Output model; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write one skeleton file per class.
    Generate {
        model: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build an application model from a framework.
    Instantiate(InstantiateArgs),
    /// Verify an instantiation spec without building the model.
    Check {
        framework: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct InstantiateArgs {
    framework: PathBuf,
    #[arg(long, group = "source")]
    spec: Option<PathBuf>,
    /// Ask for the spec on standard input, one answer per line.
    #[arg(long, group = "source")]
    interactive: bool,
    /// Where the wizard saves the spec it builds.
    #[arg(long, requires = "interactive")]
    emit_spec: Option<PathBuf>,
    /// Output model; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Rejected,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    match run(cli.command, style) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{} {e:#}", style.error("error:"));
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, style: Style) -> Result<Status> {
    match command {
        Command::Validate { model } => {
            let Some(m) = load_model(&model)? else {
                return Ok(Status::Rejected);
            };
            let diags = umlf::validate(&m);
            print!("{}", style.diagnostics(&diags));
            Ok(status(&diags))
        }
        Command::Points { model } => {
            let Some(m) = load_model(&model)? else {
                return Ok(Status::Rejected);
            };
            match umlf::classify_variation_points(&m) {
                Ok(points) => {
                    for vp in points {
                        println!("{vp}");
                    }
                    Ok(Status::Ok)
                }
                Err(e) => {
                    eprintln!("{} {e}", style.error("error:"));
                    Ok(Status::Rejected)
                }
            }
        }
        Command::Transform {
            model,
            bindings,
            output,
        } => {
            let Some(m) = load_model(&model)? else {
                return Ok(Status::Rejected);
            };
            let Some(b) = load_bindings(&bindings)? else {
                return Ok(Status::Rejected);
            };
            match transform::transform_all(&m, &b) {
                Ok(out) => {
                    write_output(output.as_deref(), &dsl::print(&out))?;
                    Ok(Status::Ok)
                }
                Err(e) => {
                    eprintln!("{} {e}", style.error("error:"));
                    Ok(Status::Rejected)
                }
            }
        }
        Command::Generate { model, output } => {
            let Some(m) = load_model(&model)? else {
                return Ok(Status::Rejected);
            };
            match umlf::codegen::generate(&m) {
                Ok(files) => {
                    std::fs::create_dir_all(&output)
                        .with_context(|| format!("creating {}", output.display()))?;
                    for (name, text) in files.iter() {
                        let path = output.join(name);
                        std::fs::write(&path, text)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    Ok(Status::Ok)
                }
                Err(e) => {
                    eprint!("{}", style.diagnostics(&e.0));
                    Ok(Status::Rejected)
                }
            }
        }
        Command::Instantiate(args) => {
            let Some(fw) = load_model(&args.framework)? else {
                return Ok(Status::Rejected);
            };
            let spec = match &args.spec {
                Some(path) => match load_spec(path)? {
                    Some(spec) => spec,
                    None => return Ok(Status::Rejected),
                },
                None => {
                    let stdin = std::io::stdin();
                    let spec = match wizard::run(&fw, &mut stdin.lock(), &mut std::io::stdout()) {
                        Ok(spec) => spec,
                        Err(e) if e.is::<ObligationError>() => {
                            eprintln!("{} {e}", style.error("error:"));
                            return Ok(Status::Rejected);
                        }
                        Err(e) => return Err(e),
                    };
                    let text = instantiate::print_spec(&spec);
                    if let Some(path) = &args.emit_spec {
                        std::fs::write(path, &text)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    // Take the same path a replay of the emitted spec takes.
                    instantiate::parse_spec(&text)
                        .map_err(|e| anyhow::anyhow!("wizard produced an unreadable spec: {e:?}"))?
                }
            };
            match instantiate::instantiate(&fw, &spec) {
                Ok(out) => {
                    let warnings = instantiate::verify_instance(&fw, &spec);
                    eprint!("{}", style.diagnostics(&warnings));
                    write_output(args.output.as_deref(), &dsl::print(&out))?;
                    Ok(Status::Ok)
                }
                Err(diags) => {
                    eprint!("{}", style.diagnostics(&diags));
                    Ok(Status::Rejected)
                }
            }
        }
        Command::Check { framework, spec } => {
            let Some(fw) = load_model(&framework)? else {
                return Ok(Status::Rejected);
            };
            let Some(spec) = load_spec(&spec)? else {
                return Ok(Status::Rejected);
            };
            let report = instantiate::verify_report(&fw, &spec);
            print!("{}", style.diagnostics(&report.diagnostics));
            for name in &report.runtime_capable {
                println!("note: {name} is dynamic and may be completed at runtime");
            }
            Ok(status(&report.diagnostics))
        }
    }
}

fn status(diags: &[Diagnostic]) -> Status {
    if has_errors(diags) {
        Status::Rejected
    } else {
        Status::Ok
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parse failures are reported on stderr and yield `None`.
fn load_model(path: &Path) -> Result<Option<Model>> {
    let src = read(path)?;
    Ok(report(path, dsl::parse(&src)))
}

fn load_bindings(path: &Path) -> Result<Option<Vec<Binding>>> {
    let src = read(path)?;
    Ok(report(path, transform::parse_bindings(&src)))
}

fn load_spec(path: &Path) -> Result<Option<InstantiationSpec>> {
    let src = read(path)?;
    Ok(report(path, instantiate::parse_spec(&src)))
}

fn report<T>(path: &Path, parsed: Result<T, Vec<dsl::ParseError>>) -> Option<T> {
    match parsed {
        Ok(v) => Some(v),
        Err(errors) => {
            eprint!("{}", render_errors(&path.display().to_string(), &errors));
            None
        }
    }
}
