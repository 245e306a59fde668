use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ginv::blocks::{GinvResult, IndexSet};
use ginv::families;
use ginv::harness::{emit_table, run_experiment, ExperimentConfig, GenSpec, Method, TableFormat};
use ginv::io::{read_matrix, write_matrix};
use ginv::lp::{build_p1, build_p123, build_p13, build_p1_sym, export_lp, simplex_solve, SimplexOptions};
use ginv::search::{
    ah_symmetric_ginv, general_reflexive_ginv, ha_symmetric_ginv, init_general, sym_reflexive_ginv, PivotStrategy,
};
use ginv::verify::{ah_certificate, check_properties, sym_certificate};
use ginv::{DenseMatrix, Error, SearchConfig, ToleranceConfig};

#[derive(Parser)]
#[command(name = "ginv", version, about = "Sparse reflexive generalized inverses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sym,
    Ah,
    Ha,
    General,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pivot {
    First,
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    P1,
    P1sym,
    P13,
    P123,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    Sym,
    Ah,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Markdown,
    Json,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Swap acceptance slack: a swap must improve |det| by more than 1+epsilon.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Pivot::First)]
    pivot: Pivot,
    /// Cap on accepted swaps (default: ten times the column count).
    #[arg(long)]
    max_sweeps: Option<usize>,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            epsilon: self.epsilon,
            max_sweeps: self.max_sweeps,
            pivot_strategy: match self.pivot {
                Pivot::First => PivotStrategy::FirstImproving,
                Pivot::Best => PivotStrategy::BestImproving,
            },
            tol: ToleranceConfig::default(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Block generalized inverse from determinant local search.
    Ginv {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Minimum 1-norm generalized inverse by linear programming.
    Lp {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the model in LP format.
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long)]
        max_iterations: Option<usize>,
    },
    /// Property report for a candidate H, optionally with a dual certificate.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_enum)]
        certificate: Option<CertKind>,
    },
    /// Write a closed-form instance and a JSON sidecar of its known values.
    Family {
        #[arg(long)]
        name: String,
        /// Comma-separated key=value pairs, e.g. r=4,delta_l=0.001.
        #[arg(long, default_value = "")]
        params: String,
        /// Matrix path; the sidecar goes next to it with a .json extension.
        #[arg(long)]
        output: PathBuf,
    },
    /// Random instances through the chosen methods, as a table.
    Bench {
        /// m,n,r
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated: local_search_ah, local_search_sym, lp_p1, lp_p13, lp_p123.
        #[arg(long, default_value = "local_search_ah,lp_p123")]
        methods: String,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Generate symmetric instances (needs m = n).
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn parse_params(s: &str) -> Result<BTreeMap<String, f64>, Error> {
    let mut out = BTreeMap::new();
    for pair in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidParams(format!("expected key=value, got {pair:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad value for {k}")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn parse_spec(s: &str) -> Result<(usize, usize, usize), Error> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::InvalidSpec(format!("expected m,n,r, got {s:?}")))?;
    match parts[..] {
        [m, n, r] => Ok((m, n, r)),
        _ => Err(Error::InvalidSpec(format!("expected m,n,r, got {s:?}"))),
    }
}

fn summary(res: &GinvResult) -> serde_json::Value {
    json!({
        "kind": res.kind,
        "rows": res.s,
        "cols": res.t,
        "one_norm": res.one_norm,
        "nnz": res.nnz,
        "swaps": res.trace.len(),
        "sweep_limit_exceeded": res.sweep_limit_exceeded,
    })
}

fn nonzero_set(indices: Vec<usize>, universe: usize) -> Result<IndexSet, Error> {
    IndexSet::new(indices, universe)
}

fn certify(a: &DenseMatrix, h: &DenseMatrix, kind: Option<CertKind>) -> Result<serde_json::Value, Error> {
    let tol = ToleranceConfig::default();
    let report = check_properties(a, h, &tol)?;
    let mut out = json!({ "properties": report, "one_norm": h.one_norm(), "nnz": h.nnz(tol.nnz_tol) });
    if let Some(kind) = kind {
        let support = h.nonzero_rows(tol.nnz_tol);
        let cert = match kind {
            CertKind::Sym => sym_certificate(a, &nonzero_set(support, a.rows())?, &tol)?,
            CertKind::Ah => {
                let t = nonzero_set(support, a.cols())?;
                let (s, _) = init_general(&a.select_cols(t.indices()), &tol)?;
                ah_certificate(a, &s, &t, &tol)?
            }
        };
        out["certificate"] = json!({
            "dual_objective": cert.dual_objective,
            "feasibility_scale": cert.feasibility_scale,
            "implied_lower_bound": cert.implied_lower_bound,
            "certified_ratio": h.one_norm() * cert.feasibility_scale / cert.dual_objective,
        });
    }
    Ok(out)
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("json")
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Ginv {
            mode,
            input,
            output,
            search,
        } => {
            let a = read_matrix(&input)?;
            let cfg = search.config();
            let res = match mode {
                Mode::Sym => sym_reflexive_ginv(&a, &cfg)?,
                Mode::Ah => ah_symmetric_ginv(&a, &cfg)?,
                Mode::Ha => ha_symmetric_ginv(&a, &cfg)?,
                Mode::General => general_reflexive_ginv(&a, &cfg)?,
            };
            if let Some(path) = output {
                write_matrix(&path, &res.h)?;
            }
            println!("{}", summary(&res));
        }
        Command::Lp {
            model,
            input,
            output,
            export,
            max_iterations,
        } => {
            let a = read_matrix(&input)?;
            let tol = ToleranceConfig::default();
            let lp = match model {
                Model::P1 => build_p1(&a, &tol)?,
                Model::P1sym => build_p1_sym(&a, &tol)?,
                Model::P13 => build_p13(&a, &tol)?,
                Model::P123 => {
                    let hhat = ah_symmetric_ginv(&a, &SearchConfig::default())?;
                    build_p123(&a, &hhat, &tol)?
                }
            };
            if let Some(path) = export {
                std::fs::write(&path, export_lp(&lp)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            let sol = simplex_solve(&lp, &SimplexOptions { max_iterations })?;
            if let Some(path) = output {
                write_matrix(&path, &sol.h)?;
            }
            println!(
                "{}",
                json!({
                    "model": lp.kind.name(),
                    "objective": sol.objective_value,
                    "nnz": sol.h.nnz(tol.nnz_tol),
                    "iterations": sol.iterations,
                    "rows": lp.num_rows(),
                })
            );
        }
        Command::Certify { input, h, certificate } => {
            let a = read_matrix(&input)?;
            let h = read_matrix(&h)?;
            println!("{}", serde_json::to_string_pretty(&certify(&a, &h, certificate)?).expect("json"));
        }
        Command::Family { name, params, output } => {
            let inst = families::by_name(&name, &parse_params(&params)?)?;
            write_matrix(&output, &inst.a)?;
            let sidecar = json!({
                "name": inst.name,
                "known_values": inst.known_values,
                "params": inst.params,
                "known_h": inst.known_h,
            });
            let path = sidecar_path(&output);
            std::fs::write(&path, serde_json::to_string_pretty(&sidecar).expect("json"))
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Command::Bench {
            spec,
            count,
            seed,
            methods,
            format,
            symmetric,
            search,
        } => {
            let (m, n, r) = parse_spec(&spec)?;
            let methods: Vec<Method> = methods
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(Method::parse)
                .collect::<Result<_, _>>()?;
            let mut specs = GenSpec::batch(m, n, r, count, seed);
            for s in &mut specs {
                s.symmetric = symmetric;
                s.validate()?;
            }
            let cfg = ExperimentConfig {
                search: search.config(),
                ..ExperimentConfig::default()
            };
            cfg.search.validate()?;
            let records = run_experiment(&specs, &methods, &cfg);
            let format = match format {
                Format::Csv => TableFormat::Csv,
                Format::Markdown => TableFormat::Markdown,
                Format::Json => TableFormat::Json,
            };
            print!("{}", emit_table(&records, format));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
