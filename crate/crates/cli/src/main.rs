//! `hk`: command-line front end for exact Iwahori-Hecke algebra computation.
//!
//! Every command reads and writes canonical JSON (UTF-8, one newline-terminated
//! document). Exit codes: 0 success / suite pass, 1 verification failure
//! (with a witness report on stdout), 2 input error.

use clap::{Parser, Subcommand, ValueEnum};
use hecke_core::json;
use hecke_core::modules::{
    induce, jacquet_module_right, principal_series, reeder_check, restrict_levi,
    JantzenSetup,
};
use hecke_core::parabolic::{ParabolicCtx, StarKind};
use hecke_core::rootdata::LeviSet;
use hecke_core::suites::{convention_suite, run_suite, suite_names, SuiteConfig};
use hecke_core::{CoreError, HeckeElt, RootDatum};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "hk",
    about = "Exact computation in Iwahori-Hecke algebras (Bernstein presentation)",
    version
)]
struct Cli {
    /// Write the JSON output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum StarMap {
    Im,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecomposeKind {
    R,
    Levi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationFlag {
    /// The globally consistent assignment (star_b, formulas as written)
    Auto,
    /// star_b with the formulas as written
    AsWritten,
    /// star_im (the mirrored reading)
    Mirrored,
}

impl OrientationFlag {
    fn star(self) -> StarKind {
        match self {
            Self::Auto | Self::AsWritten => StarKind::B,
            Self::Mirrored => StarKind::Im,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Show a root datum or list the presets
    Datum {
        #[command(subcommand)]
        action: DatumAction,
    },
    /// Multiply two elements
    Mul {
        #[arg(long)]
        datum: String,
        /// JSON files (`-` for stdin)
        a: String,
        b: String,
    },
    /// Apply an opposition anti-map
    Star {
        #[arg(long)]
        datum: String,
        #[arg(long, value_enum)]
        map: StarMap,
        input: String,
    },
    /// Iwahori-Matsumoto basis element in Bernstein coordinates
    Im {
        #[arg(long)]
        datum: String,
        /// extended affine Weyl element as JSON `{"mu":[..],"w":[..]}`
        input: String,
    },
    /// Decompose an element over R or over a parabolic subalgebra
    Decompose {
        #[arg(long)]
        datum: String,
        #[arg(long, value_enum)]
        kind: DecomposeKind,
        /// Levi as comma-separated 1-based indices (empty/none/full)
        #[arg(long, default_value = "none")]
        levi: String,
        #[arg(long, value_enum, default_value = "left")]
        side: Side,
        input: String,
    },
    /// Principal series module of the Levi subalgebra
    Ps {
        #[arg(long)]
        datum: String,
        #[arg(long, default_value = "full")]
        levi: String,
        /// character values, one field element per lattice coordinate
        #[arg(long)]
        chi: String,
    },
    /// Parabolic induction of a module along a Levi
    Induce {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        levi: String,
        input: String,
    },
    /// Restrict a module to a smaller Levi (plain Jacquet restriction), or
    /// compute the twisted Jacquet module with --twisted
    Restrict {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        levi: String,
        /// Use the twisted right-module Jacquet action for the conjugate Levi
        #[arg(long)]
        twisted: bool,
        input: String,
    },
    /// Build and verify the Reeder map for a character
    Reeder {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        chi: String,
        #[arg(long, value_enum, default_value = "auto")]
        orientation: OrientationFlag,
    },
    /// Build and verify the Jantzen map for a Levi principal series
    Jantzen {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        levi: String,
        #[arg(long)]
        chi: String,
        #[arg(long, value_enum, default_value = "auto")]
        orientation: OrientationFlag,
    },
    /// Run seeded verification suites
    Check {
        /// comma-separated suite names, or `all`
        suites: String,
        /// comma-separated presets (default: all six)
        #[arg(long)]
        datum: Option<String>,
        /// 64-bit seed (falls back to HK_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DatumAction {
    List,
    Show {
        #[arg(long)]
        datum: String,
    },
}

fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_datum(name: &str) -> Result<Arc<RootDatum>, CoreError> {
    RootDatum::preset(name)
}

fn load_elt(datum: &Arc<RootDatum>, path: &str) -> anyhow::Result<HeckeElt> {
    let text = read_input(path)?;
    let parsed: json::EltJson = serde_json::from_str(&text)
        .map_err(|e| CoreError::Parse(format!("element JSON: {}", e)))?;
    Ok(json::elt_from_json(datum, &parsed)?)
}

fn load_levi(datum: &Arc<RootDatum>, flag: &str) -> Result<LeviSet, CoreError> {
    json::parse_levi_flag(datum, flag)
}

/// exit code 2 for anything that is an input problem
fn is_input_error(e: &anyhow::Error) -> bool {
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::Degenerate(_)) => false,
        Some(_) => true,
        None => true,
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let mut exit = 0;
    let output: serde_json::Value = match cli.command {
        Command::Datum { action } => match action {
            DatumAction::List => serde_json::json!({
                "presets": RootDatum::preset_names(),
                "note": "direct sums are accepted as e.g. A1xA1 or GL2+G2",
            }),
            DatumAction::Show { datum } => {
                serde_json::to_value(json::datum_to_json(load_datum(&datum)?.as_ref()))?
            }
        },
        Command::Mul { datum, a, b } => {
            let rd = load_datum(&datum)?;
            let x = load_elt(&rd, &a)?;
            let y = load_elt(&rd, &b)?;
            serde_json::to_value(json::elt_to_json(&x.mul(&y)))?
        }
        Command::Star { datum, map, input } => {
            let rd = load_datum(&datum)?;
            let h = load_elt(&rd, &input)?;
            let out = match map {
                StarMap::Im => hecke_core::hecke::star_im(&h),
                StarMap::B => hecke_core::hecke::star_b(&h),
            };
            serde_json::to_value(json::elt_to_json(&out))?
        }
        Command::Im { datum, input } => {
            let rd = load_datum(&datum)?;
            let text = read_input(&input)?;
            let parsed: json::ExtJson = serde_json::from_str(&text)
                .map_err(|e| CoreError::Parse(format!("extended element JSON: {}", e)))?;
            let x = json::ext_from_json(&rd, &parsed)?;
            serde_json::to_value(json::elt_to_json(&hecke_core::hecke::im_element(&rd, &x)))?
        }
        Command::Decompose { datum, kind, levi, side, input } => {
            let rd = load_datum(&datum)?;
            let h = load_elt(&rd, &input)?;
            match kind {
                DecomposeKind::R => {
                    // R-coefficients grouped by the finite part
                    let dec = h.decompose_r();
                    let mut out = serde_json::Map::new();
                    for (w, r) in dec {
                        let terms: Vec<serde_json::Value> = r
                            .iter()
                            .map(|(mu, c)| {
                                serde_json::json!({"mu": mu, "coeff": c.coeff_pairs()})
                            })
                            .collect();
                        out.insert(json::rep_key(&rd, w), serde_json::Value::Array(terms));
                    }
                    serde_json::Value::Object(out)
                }
                DecomposeKind::Levi => {
                    let l = load_levi(&rd, &levi)?;
                    let ctx = ParabolicCtx::new(&rd, l)?;
                    let parts = match side {
                        Side::Left => ctx
                            .decompose_left(&h)
                            .into_iter()
                            .map(|(w, omega)| {
                                Ok((w, ctx.embed(&omega)?))
                            })
                            .collect::<Result<std::collections::BTreeMap<_, _>, CoreError>>()?,
                        Side::Right => ctx
                            .decompose_right(&h)?
                            .into_iter()
                            .map(|(w, omega)| Ok((w, ctx.embed_conj(&omega)?)))
                            .collect::<Result<std::collections::BTreeMap<_, _>, CoreError>>()?,
                    };
                    serde_json::to_value(json::decomposition_to_json(&rd, &parts))?
                }
            }
        }
        Command::Ps { datum, levi, chi } => {
            let rd = load_datum(&datum)?;
            let l = load_levi(&rd, &levi)?;
            let chi = json::chi_from_flag(&rd, &chi)?;
            let ps = principal_series(&rd, &chi, &l)?;
            serde_json::to_value(json::module_to_json(&ps))?
        }
        Command::Induce { datum, levi, input } => {
            let rd = load_datum(&datum)?;
            let l = load_levi(&rd, &levi)?;
            let ctx = ParabolicCtx::new(&rd, l)?;
            let text = read_input(&input)?;
            let parsed: json::ModuleJson = serde_json::from_str(&text)
                .map_err(|e| CoreError::Parse(format!("module JSON: {}", e)))?;
            let v = json::module_from_json(&rd, &parsed)?;
            serde_json::to_value(json::module_to_json(&induce(&ctx, &v)?))?
        }
        Command::Restrict { datum, levi, twisted, input } => {
            let rd = load_datum(&datum)?;
            let l = load_levi(&rd, &levi)?;
            let text = read_input(&input)?;
            let parsed: json::ModuleJson = serde_json::from_str(&text)
                .map_err(|e| CoreError::Parse(format!("module JSON: {}", e)))?;
            let v = json::module_from_json(&rd, &parsed)?;
            let out = if twisted {
                let ctx = ParabolicCtx::new(&rd, l)?;
                jacquet_module_right(&v, &ctx)?
            } else {
                restrict_levi(&v, &l)?
            };
            serde_json::to_value(json::module_to_json(&out))?
        }
        Command::Reeder { datum, chi, orientation } => {
            let rd = load_datum(&datum)?;
            let chi = json::chi_from_flag(&rd, &chi)?;
            let map = reeder_check(&rd, &chi, orientation.star(), &[])?;
            if !map.all_verified() {
                exit = 1;
            }
            serde_json::to_value(json::map_to_json(&map))?
        }
        Command::Jantzen { datum, levi, chi, orientation } => {
            let rd = load_datum(&datum)?;
            let l = load_levi(&rd, &levi)?;
            let ctx = ParabolicCtx::new(&rd, l.clone())?;
            let chi = json::chi_from_flag(&rd, &chi)?;
            let v = principal_series(&rd, &chi, &l)?;
            let setup = JantzenSetup::new(&ctx, v, orientation.star())?;
            let map = setup.check(&[])?;
            if !map.all_verified() {
                exit = 1;
            }
            serde_json::to_value(json::map_to_json(&map))?
        }
        Command::Check { suites, datum, seed, samples } => {
            let seed = seed
                .or_else(|| std::env::var("HK_SEED").ok().and_then(|s| s.parse().ok()))
                .unwrap_or(0);
            let mut cfg = SuiteConfig { seed, ..SuiteConfig::default() };
            if let Some(datum) = datum {
                cfg.presets = datum.split(',').map(|s| s.trim().to_string()).collect();
                for p in &cfg.presets {
                    load_datum(p)?; // validate early for exit code 2
                }
            }
            if let Some(n) = samples {
                cfg.assoc_triples = n;
                cfg.star_pairs = n;
                cfg.freeness_samples = n;
                cfg.paropp_samples = n;
            }
            let names: Vec<String> = if suites == "all" {
                suite_names().iter().map(|s| s.to_string()).collect()
            } else {
                suites.split(',').map(|s| s.trim().to_string()).collect()
            };
            let mut reports = Vec::new();
            let mut conventions = None;
            for name in &names {
                if name == "conventions" {
                    let (report, conv) = convention_suite(&cfg);
                    if !report.passed {
                        exit = 1;
                    }
                    reports.push(report);
                    conventions = Some(conv);
                } else {
                    let report = run_suite(name, &cfg)?;
                    if !report.passed {
                        exit = 1;
                    }
                    reports.push(report);
                }
            }
            let mut doc = serde_json::json!({
                "seed": seed,
                "suites": reports,
                "passed": exit == 0,
            });
            if let Some(conv) = conventions {
                doc["conventions"] = serde_json::to_value(conv)?;
            }
            doc
        }
    };
    let mut text = serde_json::to_string(&output)?;
    text.push('\n');
    match cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{}", text),
    }
    Ok(exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            if is_input_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
