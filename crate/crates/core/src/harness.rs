//! Seeded random instances with prescribed singular values, batch
//! experiments comparing the local searches against the LP baselines, and
//! table output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{column_block, symmetric_block, GinvResult};
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_columns, DenseMatrix};
use crate::lp::{build_p1, build_p123, build_p13, simplex_solve, LpModel, SimplexOptions};
use crate::search::{ah_symmetric_ginv, init_general, init_principal, sym_reflexive_ginv, SearchConfig};
use crate::verify::{ah_certificate, sym_certificate};

/// Random `m × n` instance of rank `r` with singular values
/// `big_m·ρ, big_m·ρ², …, big_m·ρʳ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    #[serde(default = "default_big_m")]
    pub big_m: f64,
    /// `None` means `(1/big_m)^(2/(r+1))`.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Use the same orthonormal factor on both sides, giving a symmetric
    /// positive semidefinite matrix (needs `m == n`).
    #[serde(default)]
    pub symmetric: bool,
}

fn default_big_m() -> f64 {
    2.0
}

impl GenSpec {
    pub fn new(m: usize, n: usize, r: usize, seed: u64) -> Self {
        GenSpec {
            m,
            n,
            r,
            seed,
            big_m: default_big_m(),
            rho: None,
            symmetric: false,
        }
    }

    pub fn symmetric(n: usize, r: usize, seed: u64) -> Self {
        GenSpec {
            symmetric: true,
            ..Self::new(n, n, r, seed)
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
            .unwrap_or_else(|| (1.0 / self.big_m).powf(2.0 / (self.r as f64 + 1.0)))
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let rho = self.rho();
        (1..=self.r).map(|k| self.big_m * rho.powi(k as i32)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.r == 0 || self.r > self.m.min(self.n) {
            return Err(Error::InvalidSpec(format!(
                "rank {} must be in 1..={}",
                self.r,
                self.m.min(self.n)
            )));
        }
        if !(self.big_m > 0.0) || !self.big_m.is_finite() {
            return Err(Error::InvalidSpec(format!("scale must be positive, got {}", self.big_m)));
        }
        let rho = self.rho();
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidSpec(format!("rho must lie in (0,1), got {rho}")));
        }
        if self.symmetric && self.m != self.n {
            return Err(Error::InvalidSpec("symmetric instances must be square".into()));
        }
        Ok(())
    }

    /// `count` specs with seeds `seed_base, seed_base + 1, …`.
    pub fn batch(m: usize, n: usize, r: usize, count: usize, seed_base: u64) -> Vec<GenSpec> {
        (0..count as u64)
            .map(|i| GenSpec::new(m, n, r, seed_base.wrapping_add(i)))
            .collect()
    }
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

pub fn gen_instance(spec: &GenSpec) -> Result<DenseMatrix> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let u = orthonormal_columns(&gaussian(&mut rng, spec.m, spec.r));
    let v = if spec.symmetric {
        u.clone()
    } else {
        orthonormal_columns(&gaussian(&mut rng, spec.n, spec.r))
    };
    let sigma = spec.singular_values();
    let us = DenseMatrix::from_fn(spec.m, spec.r, |i, k| u.get(i, k) * sigma[k]);
    us.matmul(&v.transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    LocalSearchAh,
    LocalSearchSym,
    LpP1,
    LpP13,
    LpP123,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::LocalSearchAh => "local_search_ah",
            Method::LocalSearchSym => "local_search_sym",
            Method::LpP1 => "lp_p1",
            Method::LpP13 => "lp_p13",
            Method::LpP123 => "lp_p123",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        [
            Method::LocalSearchAh,
            Method::LocalSearchSym,
            Method::LpP1,
            Method::LpP13,
            Method::LpP123,
        ]
        .into_iter()
        .find(|m| m.name() == s)
        .ok_or_else(|| Error::InvalidParams(format!("unknown method {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Instance,
    Mean,
    Std,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub kind: RowKind,
    pub spec: GenSpec,
    pub method: Method,
    pub one_norm: f64,
    pub nnz: f64,
    pub swaps: f64,
    /// 1-norm of the starting block for local searches; equals `one_norm`
    /// for LP methods.
    pub init_one_norm: f64,
    pub wall_time_s: f64,
    pub certified_ratio: Option<f64>,
    /// Set when the method failed on this instance; the numeric fields are
    /// then zero.
    pub error: Option<String>,
}

impl ExperimentRecord {
    /// `(‖H⁰‖₁ − ‖H‖₁)/‖H⁰‖₁`.
    pub fn relative_decrease(&self) -> f64 {
        if self.init_one_norm > 0.0 {
            (self.init_one_norm - self.one_norm) / self.init_one_norm
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub search: SearchConfig,
    pub simplex: SimplexOptions,
    /// Skip certificate construction for local-search records.
    pub skip_certificates: bool,
}

struct Outcome {
    one_norm: f64,
    nnz: usize,
    swaps: usize,
    init_one_norm: f64,
    certified_ratio: Option<f64>,
}

fn lp_outcome(model: LpModel, cfg: &ExperimentConfig) -> Result<Outcome> {
    let sol = simplex_solve(&model, &cfg.simplex)?;
    let one_norm = sol.h.one_norm();
    Ok(Outcome {
        one_norm,
        nnz: sol.h.nnz(cfg.search.tol.nnz_tol),
        swaps: 0,
        init_one_norm: one_norm,
        certified_ratio: None,
    })
}

fn search_outcome(res: GinvResult, init_one_norm: f64, ratio: Option<f64>, cfg: &ExperimentConfig) -> Outcome {
    Outcome {
        one_norm: res.one_norm,
        nnz: res.h.nnz(cfg.search.tol.nnz_tol),
        swaps: res.trace.len(),
        init_one_norm,
        certified_ratio: ratio,
    }
}

fn run_one(a: &DenseMatrix, method: Method, cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol = &cfg.search.tol;
    match method {
        Method::LocalSearchAh => {
            let (_, t0) = init_general(a, tol)?;
            let init = column_block(a, &t0, tol)?.one_norm;
            let res = ah_symmetric_ginv(a, &cfg.search)?;
            let ratio = if cfg.skip_certificates {
                None
            } else {
                let s = res.anchor_rows.clone().expect("ah pipeline records its rows");
                Some(ah_certificate(a, &s, &res.t, tol)?.certified_ratio)
            };
            Ok(search_outcome(res, init, ratio, cfg))
        }
        Method::LocalSearchSym => {
            let s0 = init_principal(a, tol)?;
            let init = symmetric_block(a, &s0, tol)?.one_norm;
            let res = sym_reflexive_ginv(a, &cfg.search)?;
            let ratio = if cfg.skip_certificates {
                None
            } else {
                Some(sym_certificate(a, &res.s, tol)?.certified_ratio)
            };
            Ok(search_outcome(res, init, ratio, cfg))
        }
        Method::LpP1 => lp_outcome(build_p1(a, tol)?, cfg),
        Method::LpP13 => lp_outcome(build_p13(a, tol)?, cfg),
        Method::LpP123 => {
            let hhat = ah_symmetric_ginv(a, &cfg.search)?;
            lp_outcome(build_p123(a, &hhat, tol)?, cfg)
        }
    }
}

fn record(spec: &GenSpec, a: &Result<DenseMatrix>, method: Method, cfg: &ExperimentConfig) -> ExperimentRecord {
    let start = Instant::now();
    let outcome = a.as_ref().map_err(Clone::clone).and_then(|a| run_one(a, method, cfg));
    let wall_time_s = start.elapsed().as_secs_f64();
    let mut rec = ExperimentRecord {
        kind: RowKind::Instance,
        spec: spec.clone(),
        method,
        one_norm: 0.0,
        nnz: 0.0,
        swaps: 0.0,
        init_one_norm: 0.0,
        wall_time_s,
        certified_ratio: None,
        error: None,
    };
    match outcome {
        Ok(o) => {
            rec.one_norm = o.one_norm;
            rec.nnz = o.nnz as f64;
            rec.swaps = o.swaps as f64;
            rec.init_one_norm = o.init_one_norm;
            rec.certified_ratio = o.certified_ratio;
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

/// Thread cap from `GINV_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("GINV_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs every method on every instance, in parallel across instances.
///
/// Instance records come first, in input order (instance-major), followed
/// by a mean and a std row for each `(m, n, r, method)` group. Failed
/// records are kept, with their error, and left out of the aggregates.
pub fn run_experiment(specs: &[GenSpec], methods: &[Method], cfg: &ExperimentConfig) -> Vec<ExperimentRecord> {
    let work = || -> Vec<ExperimentRecord> {
        specs
            .par_iter()
            .flat_map_iter(|spec| {
                let a = gen_instance(spec);
                methods
                    .iter()
                    .map(|&m| record(spec, &a, m, cfg))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let mut records = match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    let aggregates = aggregate(&records);
    records.extend(aggregates);
    records
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

/// Mean and sample standard deviation per `(m, n, r, method)` group over
/// successful instance records, groups in order of first appearance.
pub fn aggregate(records: &[ExperimentRecord]) -> Vec<ExperimentRecord> {
    let mut order: Vec<(usize, usize, usize, Method)> = Vec::new();
    let mut groups: BTreeMap<(usize, usize, usize, Method), Vec<&ExperimentRecord>> = BTreeMap::new();
    for rec in records {
        if rec.kind != RowKind::Instance || rec.error.is_some() {
            continue;
        }
        let key = (rec.spec.m, rec.spec.n, rec.spec.r, rec.method);
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(rec);
    }
    let mut out = Vec::new();
    for key in order {
        let group = &groups[&key];
        let col = |f: fn(&ExperimentRecord) -> f64| mean_std(&group.iter().map(|r| f(r)).collect::<Vec<_>>());
        let stats = [
            col(|r| r.one_norm),
            col(|r| r.nnz),
            col(|r| r.swaps),
            col(|r| r.init_one_norm),
            col(|r| r.wall_time_s),
        ];
        let ratios: Vec<f64> = group.iter().filter_map(|r| r.certified_ratio).collect();
        let ratio = (ratios.len() == group.len()).then(|| mean_std(&ratios));
        for (kind, pick) in [(RowKind::Mean, 0), (RowKind::Std, 1)] {
            let get = |s: (f64, f64)| if pick == 0 { s.0 } else { s.1 };
            out.push(ExperimentRecord {
                kind,
                spec: group[0].spec.clone(),
                method: key.3,
                one_norm: get(stats[0]),
                nnz: get(stats[1]),
                swaps: get(stats[2]),
                init_one_norm: get(stats[3]),
                wall_time_s: get(stats[4]),
                certified_ratio: ratio.map(get),
                error: None,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Csv,
    Markdown,
    Json,
}

const COLUMNS: [&str; 13] = [
    "row",
    "m",
    "n",
    "r",
    "seed",
    "method",
    "one_norm",
    "nnz",
    "swaps",
    "init_one_norm",
    "wall_time_s",
    "certified_ratio",
    "error",
];

fn kind_label(k: RowKind) -> &'static str {
    match k {
        RowKind::Instance => "instance",
        RowKind::Mean => "mean",
        RowKind::Std => "std",
    }
}

fn cells(rec: &ExperimentRecord, fmt: impl Fn(f64) -> String) -> Vec<String> {
    vec![
        kind_label(rec.kind).to_string(),
        rec.spec.m.to_string(),
        rec.spec.n.to_string(),
        rec.spec.r.to_string(),
        rec.spec.seed.to_string(),
        rec.method.name().to_string(),
        fmt(rec.one_norm),
        fmt(rec.nnz),
        fmt(rec.swaps),
        fmt(rec.init_one_norm),
        fmt(rec.wall_time_s),
        rec.certified_ratio.map(&fmt).unwrap_or_default(),
        rec.error.clone().unwrap_or_default(),
    ]
}

pub fn emit_table(records: &[ExperimentRecord], format: TableFormat) -> String {
    match format {
        TableFormat::Json => serde_json::to_string_pretty(records).expect("records serialize"),
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for rec in records {
                w.write_record(cells(rec, |v| v.to_string())).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
        }
        TableFormat::Markdown => {
            let mut out = String::new();
            let _ = writeln!(out, "| {} |", COLUMNS.join(" | "));
            let _ = writeln!(out, "|{}", "---|".repeat(COLUMNS.len()));
            for rec in records {
                let row = cells(rec, |v| format!("{v:.2}"));
                let row: Vec<String> = row.into_iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(out, "| {} |", row.join(" | "));
            }
            out
        }
    }
}
