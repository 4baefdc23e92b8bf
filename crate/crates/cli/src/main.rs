use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use morita::annular::{build_algebra, verify_wha};
use morita::dualdata::assemble_dual;
use morita::invertibility::{check_invertible, check_mpo_injectivity};
use morita::io;
use morita::repdecomp::DEFAULT_SEED;
use morita::skeletal::{verify_pentagons, verify_unitarity, BimoduleData};
use morita::vecg::{gen_vecg, Cocycle, FiniteGroup};

/// Skeletal data of fusion, module and bimodule categories.
#[derive(Parser)]
#[command(name = "morita", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Override the tolerance stored in the file.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check pentagons and unitarity (exit 0 pass, 1 fail).
    Validate {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Write F0 and F1 of Vec_G acting on Vec.
    GenVecg {
        /// Bundled name (Z<n>, Z2xZ2, S3, S4, D4, Q8) or a group JSON file.
        #[arg(long)]
        group: String,
        /// Cocycle JSON file; trivial when omitted.
        #[arg(long)]
        cocycle: Option<PathBuf>,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Assemble the dual category and the bimodule associators.
    ComputeDual {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Decomposition seed; MORITA_SEED takes precedence.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Decide invertibility (exit 0 invertible, 2 not invertible).
    CheckInvertible {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check the weak Hopf algebra axioms of the annular algebra (exit 0 pass, 1 fail).
    VerifyWha {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Matrix-element orthogonality and the MPO identity (exit 0 both pass, 2 otherwise).
    CheckMpo {
        #[arg(default_value = "-")]
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(path: &Path, text: &str) -> Result<()> {
    if path == Path::new("-") {
        std::io::stdout().write_all(text.as_bytes())?;
        Ok(())
    } else {
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

fn load(path: &Path, common: &Common) -> Result<BimoduleData> {
    let text = read_input(path)?;
    let mut data = io::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    if let Some(t) = common.tolerance {
        if !(t.is_finite() && t > 0.0) {
            bail!("tolerance must be positive, got {t}");
        }
        data.tolerance = t;
    }
    Ok(data)
}

fn seed(flag: Option<u64>) -> Result<u64> {
    match std::env::var("MORITA_SEED") {
        Ok(v) => v.trim().parse().with_context(|| format!("MORITA_SEED={v:?} is not an integer")),
        Err(_) => Ok(flag.unwrap_or(DEFAULT_SEED)),
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { file, common } => {
            let data = load(&file, &common)?;
            let pent = verify_pentagons(&data)?;
            let unit = verify_unitarity(&data);
            let pass = pent.pass && unit.pass;
            if common.json {
                print_json(&serde_json::json!({ "pentagons": pent, "unitarity": unit, "pass": pass }))?;
            } else {
                for f in &pent.families {
                    println!("pentagon {:<5} {:.3e} over {} instances", f.name, f.residual, f.instances);
                    if f.residual >= pent.tolerance {
                        println!("  worst at {}", f.witness.as_deref().unwrap_or("?"));
                    }
                }
                for name in &pent.skipped {
                    println!("pentagon {name:<5} skipped");
                }
                for f in &unit.families {
                    println!("unitary  {:<5} {:.3e} over {} blocks", f.name, f.residual, f.instances);
                    if f.residual >= unit.tolerance {
                        println!("  worst block {}", f.witness.as_deref().unwrap_or("?"));
                    }
                }
                for b in &unit.nonsquare {
                    println!("non-square block {b}");
                }
                println!("{} (tolerance {:e})", verdict_word(pass), data.tolerance);
            }
            Ok(u8::from(!pass))
        }
        Command::GenVecg {
            group,
            cocycle,
            output,
            common,
        } => {
            let g = match FiniteGroup::by_name(&group) {
                Ok(g) => g,
                Err(_) if Path::new(&group).exists() => io::group_from_json(&read_input(Path::new(&group))?)
                    .with_context(|| format!("loading group {group}"))?,
                Err(e) => return Err(e.into()),
            };
            let phi = match cocycle {
                Some(p) => io::cocycle_from_json(&g, &read_input(&p)?)
                    .with_context(|| format!("loading cocycle {}", p.display()))?,
                None => Cocycle::trivial(g.order()),
            };
            let mut data = BimoduleData::from_module(gen_vecg(&g, &phi)?);
            if let Some(t) = common.tolerance {
                data.tolerance = t;
            }
            write_output(&output, &io::to_json(&data))?;
            Ok(0)
        }
        Command::ComputeDual {
            file,
            output,
            seed: flag,
            common,
        } => {
            let data = load(&file, &common)?;
            let mut dual = assemble_dual(&data.module, seed(flag)?)?;
            dual.tolerance = data.tolerance;
            write_output(&output, &io::to_json(&dual))?;
            Ok(0)
        }
        Command::CheckInvertible { file, common } => {
            let data = load(&file, &common)?;
            let v = check_invertible(&data, data.tolerance)?;
            if common.json {
                print_json(&v)?;
            } else {
                println!("FPdim C = {}, FPdim D = {}", v.fpdim_c, v.fpdim_d);
                println!("gram residual {:.3e}", v.gram_residual);
                if v.invertible {
                    println!("invertible");
                } else {
                    println!("not invertible");
                    for m in &v.failure_modes {
                        println!("  {m}");
                    }
                }
                if !v.definitive {
                    println!("note: F3 absent, only necessary conditions were checked");
                }
            }
            Ok(if v.invertible { 0 } else { 2 })
        }
        Command::VerifyWha { file, common } => {
            let data = load(&file, &common)?;
            let alg = build_algebra(&data.module)?;
            let report = verify_wha(&alg.maps, data.tolerance);
            if common.json {
                print_json(&report)?;
            } else {
                println!("annular algebra of dimension {}", report.dim);
                for a in &report.axioms {
                    let tag = if a.fatal { "" } else { " (informative)" };
                    println!("{:<32} {:.3e}{tag}", a.name, a.residual);
                }
                if let Some(f) = &report.first_failure {
                    println!("first failure: {f}");
                }
                println!("{} (tolerance {:e})", verdict_word(report.pass), report.tolerance);
            }
            Ok(u8::from(!report.pass))
        }
        Command::CheckMpo { file, common } => {
            let data = load(&file, &common)?;
            let r = check_mpo_injectivity(&data, data.tolerance)?;
            if common.json {
                print_json(&r)?;
            } else {
                println!("matrix-element orthogonality {:.3e} {}", r.reduced.residual, verdict_word(r.reduced.pass));
                println!("MPO identity                 {:.3e} {}", r.full.residual, verdict_word(r.full.pass));
                println!("agree: {}", r.agree);
            }
            Ok(if r.full.pass && r.reduced.pass { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
