mod emit;
mod manifest;
mod reference;
mod repro;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use pisot_spectra::{base_catalog, BaseSpec};

use crate::manifest::OutputDir;

/// Environment variable overriding the default output directory.
const OUT_ENV: &str = "PISOT_SPECTRA_OUT";
const DEFAULT_OUT: &str = "pisot-spectra-out";

const EXIT_FAILURE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "pisot-spectra", version, about = "Spectra of Pisot-cyclotomic numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Base name (tau, tau2, lambda, delta, kappa, mu) or approximate value.
    #[arg(long, global = true)]
    base: Option<String>,
    /// Cyclotomic order n of the alphabet.
    #[arg(long, global = true)]
    order: Option<u32>,
    #[arg(long, global = true)]
    radius: Option<f64>,
    #[arg(long, global = true)]
    depth: Option<u32>,
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Bits for the high-precision embedding printed by `bases`.
    #[arg(long, global = true, default_value_t = 128)]
    precision: usize,
    /// Output directory [default: $PISOT_SPECTRA_OUT or ./pisot-spectra-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads [default: available parallelism].
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the catalog of quadratic and cubic Pisot-cyclotomic numbers.
    Bases,
    /// Recompute a reference table and compare cell by cell.
    Repro {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=5))]
        table: u8,
    },
    /// Write data and figures for one case.
    Emit {
        #[arg(value_enum)]
        kind: emit::Kind,
        /// IFS drawn by `emit attractor`.
        #[arg(long, value_enum, default_value_t = emit::IfsChoice::Inverse)]
        ifs: emit::IfsChoice,
        /// Color tiling cells by tile class.
        #[arg(long)]
        classify: bool,
    },
}

/// Invalid command-line input detected after parsing.
#[derive(Debug)]
pub struct InvalidArgs(pub String);

impl fmt::Display for InvalidArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidArgs {}

/// Reproduction finished but some cells disagree.
#[derive(Debug)]
struct Mismatch(usize);

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cell(s) differ from the reference values", self.0)
    }
}

impl std::error::Error for Mismatch {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatch>().is_some() {
        return EXIT_MISMATCH;
    }
    if err.downcast_ref::<InvalidArgs>().is_some() {
        return EXIT_INVALID;
    }
    match err.downcast_ref::<pisot_spectra::Error>() {
        Some(e) if e.is_budget() => EXIT_BUDGET,
        Some(pisot_spectra::Error::Incomplete(_)) => EXIT_BUDGET,
        Some(
            pisot_spectra::Error::InvalidArgument(_)
            | pisot_spectra::Error::UnknownBase { .. }
            | pisot_spectra::Error::UnsupportedOrder(_)
            | pisot_spectra::Error::OrderMismatch { .. }
            | pisot_spectra::Error::NotCoprime { .. },
        ) => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    if let Some(t) = g.threads {
        if t == 0 {
            bail!(InvalidArgs("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out_dir = g
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    match &cli.command {
        Command::Bases => bases(g, &out_dir),
        Command::Repro { table } => repro(*table, g, &out_dir),
        Command::Emit { kind, ifs, classify } => {
            let base = selected_case(g)?.ok_or_else(|| InvalidArgs("emit needs --base and --order".into()))?;
            let mut out = OutputDir::create(&out_dir, &format!("emit {}", kind_name(*kind)), Some(case_key(&base)))?;
            let params = emit::Params { radius: g.radius, depth: g.depth, budget: g.budget, ifs: *ifs, classify: *classify };
            if let Some(r) = g.radius {
                if !(r > 0.0 && r.is_finite()) {
                    bail!(InvalidArgs(format!("--radius {r} must be positive")));
                }
            }
            emit::run(*kind, &base, &params, &mut out)?;
            out.finish()?;
            Ok(())
        }
    }
}

fn kind_name(kind: emit::Kind) -> String {
    use clap::ValueEnum;
    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn case_key(b: &BaseSpec) -> (String, u32) {
    (b.name.clone().unwrap_or_else(|| b.case_id()), b.order.get())
}

fn selected_case(g: &Global) -> Result<Option<BaseSpec>> {
    match (&g.base, g.order) {
        (None, None) => Ok(None),
        (Some(name), Some(order)) => Ok(Some(BaseSpec::lookup(name, order)?)),
        _ => bail!(InvalidArgs("--base and --order go together".into())),
    }
}

fn bases(g: &Global, out_dir: &PathBuf) -> Result<()> {
    let catalog = base_catalog();
    let mut out = OutputDir::create(out_dir, "bases", None)?;
    out.param("precision", g.precision);
    println!("{:>5}  {:<7}  {:>12}  {:<28}  {:<5}  value ({} bits)", "order", "name", "approx", "minimal polynomial", "unit", g.precision);
    for b in &catalog {
        let precise = b.beta.embed_with_precision(g.precision)?;
        println!(
            "{:>5}  {:<7}  {:>12.9}  {:<28}  {:<5}  {}",
            b.order.get(),
            b.label(),
            b.approx,
            poly_string(&b.min_poly),
            if b.is_unit { "yes" } else { "no" },
            precise.re
        );
    }
    let js = pisot_spectra::io::catalog_json(&catalog)?;
    out.write("catalog.json", &(js + "\n"))?;
    out.finish()?;
    Ok(())
}

/// `x³−2x²−x+1` style rendering, leading coefficient first.
fn poly_string(coeffs: &[i64]) -> String {
    let deg = coeffs.len().saturating_sub(1);
    let mut s = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let p = deg - i;
        let sign = if c < 0 { "−" } else if s.is_empty() { "" } else { "+" };
        let mag = c.unsigned_abs();
        let num = if mag == 1 && p > 0 { String::new() } else { mag.to_string() };
        let var = match p {
            0 => String::new(),
            1 => "x".into(),
            2 => "x²".into(),
            3 => "x³".into(),
            _ => format!("x^{p}"),
        };
        s.push_str(&format!("{sign}{num}{var}"));
    }
    s
}

fn repro(table: u8, g: &Global, out_dir: &PathBuf) -> Result<()> {
    let case = selected_case(g)?;
    let mut out = OutputDir::create(out_dir, &format!("repro {table}"), case.as_ref().map(case_key))?;
    if let Some(d) = g.depth {
        out.param("depth", d);
    }
    if let Some(b) = g.budget {
        out.param("budget", b);
    }
    let opts = repro::Options { filter: case.as_ref().map(case_key), depth: g.depth, budget: g.budget };
    let cells = repro::table(table, &opts)?;
    print!("{}", repro::render(table, &cells));
    out.write_json(&format!("table{table}.json"), &cells)?;
    out.finish()?;
    let failed = cells.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        bail!(Mismatch(failed));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_rendering() {
        assert_eq!(poly_string(&[1, -2, -2]), "x²−2x−2");
        assert_eq!(poly_string(&[1, -2, -1, 1]), "x³−2x²−x+1");
        assert_eq!(poly_string(&[1, -1, -1]), "x²−x−1");
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
