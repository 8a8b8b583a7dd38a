use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prymgraph::modforms::{cusp_dim, eichler_shimura_dim, eisenstein_dim, first_nonzero_cusp_weight, CurveData};
use prymgraph::{
    build_gluing, build_elliptic_pair_gluing, enumerate_prym_structures_with, enumerate_strata, nontaut_bound,
    normal_bundle_c1, pullback_boundary_class, repro, specializations, stratum_factors, validate_graph,
    validate_harmonic, validate_prym_in, Error, GluingParams, HarmonicMorphism, PrymStructure, StratumDescriptor,
    ValidationReport, Variant, WeightedGraph,
};

#[derive(Parser)]
#[command(name = "prymgraph", version, about = "Prym structures on stable graphs and their boundary strata")]
struct Cli {
    /// Worker threads for enumerations.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Latex,
}

#[derive(Subcommand)]
enum Command {
    /// Check a weighted graph (JSON file, `-` for stdin).
    ValidateGraph { input: PathBuf },
    /// Check a harmonic morphism of the given degree.
    ValidateHarmonic {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Check a Prym structure.
    ValidatePrym { input: PathBuf },
    /// List the Prym structures over a base graph.
    EnumerateCovers {
        input: PathBuf,
        /// Treat `ram:` legs as ramification points.
        #[arg(long)]
        ramified: bool,
        /// Keep the order of leg fibres.
        #[arg(long)]
        ordered_fibers: bool,
    },
    /// List boundary strata of the m-pointed space.
    EnumerateStrata {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        legs: u32,
        #[arg(long, default_value_t = 1)]
        max_codim: usize,
    },
    /// List specializations of a Prym structure.
    Specialize {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_extra: usize,
    },
    /// Pull the class of the second stratum back along the first.
    Pullback { first: PathBuf, second: PathBuf },
    /// First Chern class of the normal bundle of a gluing map.
    NormalBundle { input: PathBuf },
    /// Build one of the catalogued gluing maps.
    BuildGluing(GluingArgs),
    /// Number of points from which non-tautological classes exist.
    Bounds {
        #[arg(long)]
        genus: i64,
    },
    /// Dimensions of spaces of modular forms.
    Modforms(ModformArgs),
    /// Rerun every published value.
    Repro,
}

#[derive(Args)]
struct GluingArgs {
    /// Kind 1 to 6, or 0 for the two-elliptic gluing (uses g and m).
    #[arg(long)]
    kind: u8,
    #[arg(long, default_value_t = 2)]
    g: u32,
    #[arg(long, default_value_t = 0)]
    i: u32,
    #[arg(long, default_value_t = 0)]
    r1: u32,
    #[arg(long, default_value_t = 0)]
    r2: u32,
    #[arg(long, default_value_t = 0)]
    x: u32,
    #[arg(long, default_value_t = 0)]
    r: u32,
    #[arg(long, default_value_t = 0)]
    m: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    #[value(name = "gamma1-2")]
    Gamma12,
    #[value(name = "sl2z")]
    Sl2z,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Cusp,
    Eisenstein,
    EichlerShimura,
    FirstWeight,
}

#[derive(Args)]
struct ModformArgs {
    #[arg(long, value_enum, conflicts_with_all = ["genus", "eps2", "eps3", "cusps"])]
    level: Option<Level>,
    #[arg(long, default_value_t = 0)]
    genus: u32,
    #[arg(long, default_value_t = 0)]
    eps2: u32,
    #[arg(long, default_value_t = 0)]
    eps3: u32,
    #[arg(long, default_value_t = 1)]
    cusps: u32,
    #[arg(long)]
    weight: Option<i64>,
    #[arg(long, value_enum, default_value_t = What::Cusp)]
    what: What,
}

/// Exit status with the message printed on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_) | Error::Parameter(_) | Error::BadWeight(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut s = String::new();
    if path == Path::new("-") {
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn json_error(path: &Path, e: serde_json::Error) -> Failure {
    usage(format!(
        "{}: invalid JSON at line {} column {}: {e}",
        path.display(),
        e.line(),
        e.column()
    ))
}

fn read_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| json_error(path, e))
}

/// A bare morphism, or any object carrying one under `morphism`.
fn read_morphism(path: &Path) -> Result<HarmonicMorphism, Failure> {
    let value: serde_json::Value = serde_json::from_str(&read_input(path)?).map_err(|e| json_error(path, e))?;
    let inner = match value.get("morphism") {
        Some(m) => m.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_structure(path: &Path) -> Result<PrymStructure, Failure> {
    Ok(PrymStructure::from_morphism(read_morphism(path)?)?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output")
}

fn report_output(report: &ValidationReport, format: Format) -> (String, u8) {
    let text = match format {
        Format::Json => json(report),
        _ => report.to_string(),
    };
    (text, if report.is_valid() { 0 } else { 1 })
}

fn structure_row(p: &PrymStructure) -> String {
    let c = &p.classification;
    let src = p.source();
    format!(
        "{:>5} {:>6} {:>4} {:>4} {:>4}  exc={:?} ram={:?} tr={:?} ntr={:?}",
        p.codimension(),
        src.graph_genus().map(|g| g.to_string()).unwrap_or_else(|_| "?".into()),
        src.vertex_count(),
        src.edge_count(),
        p.automorphisms(),
        c.exceptional,
        c.ramified,
        c.trivial,
        c.nontrivial
    )
}

fn structure_table(list: &[PrymStructure]) -> String {
    let mut out = vec![format!("{:>5} {:>6} {:>4} {:>4} {:>4}  classes", "codim", "genus'", "V'", "E'", "aut")];
    out.extend(list.iter().map(structure_row));
    out.push(format!("{} structures", list.len()));
    out.join("\n")
}

fn factor_name(f: &prymgraph::StratumFactor) -> String {
    match f.kind {
        prymgraph::FactorKind::PrymPointed => format!("R'({};{})", f.genus, f.n),
        prymgraph::FactorKind::Curve => format!("M({},{})", f.genus, f.n),
        prymgraph::FactorKind::PrymRamified => format!("R'({},{};{})", f.genus, f.two_r, f.m),
    }
}

fn strata_table(list: &[StratumDescriptor]) -> String {
    let mut out = vec![format!("{:>5} {:>4} {:>4} {:>4}  factors", "codim", "dim", "E", "aut")];
    for d in list {
        let factors: Vec<String> = d.factors.iter().map(factor_name).collect();
        out.push(format!(
            "{:>5} {:>4} {:>4} {:>4}  {}",
            d.codimension,
            d.dimension,
            d.structure.target().edge_count(),
            d.automorphisms,
            factors.join(" x ")
        ));
    }
    out.push(format!("{} strata", list.len()));
    out.join("\n")
}

fn curve_data(a: &ModformArgs) -> CurveData {
    match a.level {
        Some(Level::Gamma12) => CurveData::GAMMA1_2,
        Some(Level::Sl2z) => CurveData::SL2Z,
        None => CurveData {
            genus: a.genus,
            eps2: a.eps2,
            eps3: a.eps3,
            eps_inf: a.cusps,
        },
    }
}

fn modforms(a: &ModformArgs) -> Result<String, Failure> {
    let data = curve_data(a);
    let weight = || a.weight.ok_or_else(|| usage("--weight is required".into()));
    let value = match a.what {
        What::Cusp => cusp_dim(&data, weight()?)? as i64,
        What::Eisenstein => eisenstein_dim(&data, weight()?)? as i64,
        What::EichlerShimura => {
            if data != CurveData::GAMMA1_2 {
                return Err(usage("eichler-shimura is only available for --level gamma1-2".into()));
            }
            eichler_shimura_dim(weight()?)? as i64
        }
        What::FirstWeight => first_nonzero_cusp_weight(&data)?,
    };
    Ok(value.to_string())
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let format = cli.format;
    let out = match &cli.command {
        Command::ValidateGraph { input } => return Ok(report_output(&validate_graph(&read_graph(input)?), format)),
        Command::ValidateHarmonic { input, degree } => {
            return Ok(report_output(&validate_harmonic(&read_morphism(input)?, *degree), format))
        }
        Command::ValidatePrym { input } => {
            let phi = read_morphism(input)?;
            let variant = Variant::detect(&phi.target);
            return Ok(report_output(&validate_prym_in(&phi, variant), format));
        }
        Command::EnumerateCovers {
            input,
            ramified,
            ordered_fibers,
        } => {
            let g = read_graph(input)?;
            let variant = if *ramified {
                Variant::Ramified
            } else {
                Variant::Unramified
            };
            let list = enumerate_prym_structures_with(&g, variant, *ordered_fibers)?;
            match format {
                Format::Json => json(&list),
                _ => structure_table(&list),
            }
        }
        Command::EnumerateStrata {
            genus,
            legs,
            max_codim,
        } => {
            let list = enumerate_strata(*genus, *legs, *max_codim)?;
            match format {
                Format::Json => json(&list),
                _ => strata_table(&list),
            }
        }
        Command::Specialize { input, max_extra } => {
            let list = specializations(&read_structure(input)?, *max_extra)?;
            match format {
                Format::Json => json(&list),
                _ => structure_table(&list),
            }
        }
        Command::Pullback { first, second } => {
            let r = pullback_boundary_class(&read_structure(first)?, &read_structure(second)?)?;
            match format {
                Format::Json => json(&r),
                Format::Latex => r.to_latex(),
                Format::Table => {
                    let mut out = vec![format!("{:>5} {:>5} {:>4}  expression", "codim", "rel", "aut")];
                    for t in &r.terms {
                        out.push(format!(
                            "{:>5} {:>5} {:>4}  {}",
                            t.pair.codimension, t.relative_codimension, t.pair.automorphisms, t.expression
                        ));
                    }
                    out.push(format!("{} terms", r.terms.len()));
                    out.join("\n")
                }
            }
        }
        Command::NormalBundle { input } => {
            let c1 = normal_bundle_c1(&read_structure(input)?)?;
            match format {
                Format::Json => json(&c1),
                Format::Latex => c1.to_latex(),
                Format::Table => c1.to_string(),
            }
        }
        Command::BuildGluing(a) => {
            let s = if a.kind == 0 {
                build_elliptic_pair_gluing(a.g, a.m)?
            } else {
                let p = GluingParams {
                    g: a.g,
                    i: a.i,
                    r1: a.r1,
                    r2: a.r2,
                    x: a.x,
                    r: a.r,
                    m: a.m,
                };
                build_gluing(a.kind, &p)?
            };
            match format {
                Format::Json => json(&s),
                _ => {
                    let d = stratum_factors(&s)?;
                    let factors: Vec<String> = d.factors.iter().map(factor_name).collect();
                    format!("{}\nfactors: {}", structure_table(std::slice::from_ref(&s)), factors.join(" x "))
                }
            }
        }
        Command::Bounds { genus } => nontaut_bound(*genus)?.to_string(),
        Command::Modforms(a) => modforms(a)?,
        Command::Repro => {
            let checks = repro::run();
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut lines: Vec<String> = checks.iter().map(|c| c.line()).collect();
            lines.push(format!("{} passed, {failed} failed", checks.len() - failed));
            return Ok((lines.join("\n"), if failed == 0 { 0 } else { 1 }));
        }
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!("prymgraph: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok((text, code)) => {
            println!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("prymgraph: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
