//! Command-line front end: config ingestion, sweeps and reports as
//! deterministic CSV.
//!
//! Subcommands: `gdof`, `rate`, `bounds`, `verify`, `outage`, `compare`,
//! `gauss-rate`. Reruns with identical flags (including `--seed`) produce
//! byte-identical output. Exit codes: 0 success, 1 invariant breach,
//! 2 invalid input.

use crate::config::{Cell, ImacConfig, SymmetricConfig};
use crate::error::Error;
use crate::gauss::{self, GaussConfig};
use crate::ld;
use crate::ltd;
use crate::oracle;
use crate::rat::Rat;
use crate::rng::DEFAULT_SEED;
use std::collections::BTreeMap;
use std::io::Write;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parsed invocation: command, channel parameters, sweep grids and knobs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub command: String,
    pub model: String,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub ni: Option<u32>,
    pub full: Option<(u32, u32, u32, u32, u32, u32)>,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub power: Option<f64>,
    pub delta: f64,
    pub samples: u64,
    pub seed: u64,
    pub overpack: u32,
    pub raw_allocation: bool,
    pub out: Option<String>,
}

const KNOWN_KEYS: &[&str] = &[
    "model", "n1", "n2", "ni", "n11", "n12", "n21", "n22", "i21", "i12", "alpha", "beta", "power",
    "delta", "samples", "seed", "overpack", "raw", "out", "config",
];

fn parse_kv(args: &[String]) -> Result<BTreeMap<String, String>, Error> {
    let mut map = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        let Some(key) = a.strip_prefix("--") else {
            return Err(Error::invalid_input(format!("unexpected argument '{a}'")));
        };
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::invalid_input(format!("unknown flag --{key}")));
        }
        if key == "raw" {
            map.insert(key.to_string(), "true".to_string());
            i += 1;
            continue;
        }
        let Some(value) = args.get(i + 1) else {
            return Err(Error::invalid_input(format!("--{key} needs a value")));
        };
        map.insert(key.to_string(), value.clone());
        i += 2;
    }
    Ok(map)
}

/// Flat key-value config files; unknown keys are errors, not warnings.
fn load_config_file(path: &str) -> Result<BTreeMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid_input(format!("cannot read {path}: {e}")))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::invalid_input(format!(
                "{path}:{}: expected key = value",
                lineno + 1
            )));
        };
        let k = k.trim();
        if !KNOWN_KEYS.contains(&k) || k == "config" {
            return Err(Error::invalid_input(format!(
                "{path}:{}: unknown key '{k}'",
                lineno + 1
            )));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, Error> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::invalid_input(format!("bad value for {key}: '{v}'"))),
    }
}

fn get_list(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<f64>, Error> {
    match map.get(key) {
        None => Ok(Vec::new()),
        Some(v) => v
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid_input(format!("bad value in {key}: '{p}'")))
            })
            .collect(),
    }
}

impl RunSpec {
    pub fn parse(command: &str, args: &[String]) -> Result<RunSpec, Error> {
        let mut map = parse_kv(args)?;
        if let Some(path) = map.get("config").cloned() {
            let file = load_config_file(&path)?;
            for (k, v) in file {
                map.entry(k).or_insert(v);
            }
        }
        let alphas = get_list(&map, "alpha")?;
        let betas = get_list(&map, "beta")?;
        for a in &alphas {
            if *a < 0.0 {
                return Err(Error::invalid_input("alpha must be non-negative"));
            }
        }
        let grids_sorted = |g: &[f64]| g.windows(2).all(|w| w[0] < w[1]);
        if !grids_sorted(&alphas) || !grids_sorted(&betas) {
            return Err(Error::invalid_input("grids must be strictly increasing"));
        }
        let full = match (
            get::<u32>(&map, "n11")?,
            get::<u32>(&map, "n12")?,
            get::<u32>(&map, "n21")?,
            get::<u32>(&map, "n22")?,
            get::<u32>(&map, "i21")?,
            get::<u32>(&map, "i12")?,
        ) {
            (Some(a), Some(b), Some(c), Some(d), Some(e), Some(f)) => Some((a, b, c, d, e, f)),
            (None, None, None, None, None, None) => None,
            _ => {
                return Err(Error::invalid_input(
                    "asymmetric configs need all of n11, n12, n21, n22, i21, i12",
                ))
            }
        };
        Ok(RunSpec {
            command: command.to_string(),
            model: map.get("model").cloned().unwrap_or_else(|| "ltd".into()),
            n1: get(&map, "n1")?,
            n2: get(&map, "n2")?,
            ni: get(&map, "ni")?,
            full,
            alphas,
            betas,
            power: get(&map, "power")?,
            delta: get::<f64>(&map, "delta")?.unwrap_or(0.5),
            samples: get::<u64>(&map, "samples")?.unwrap_or(10_000),
            seed: get::<u64>(&map, "seed")?.unwrap_or(DEFAULT_SEED),
            overpack: get::<u32>(&map, "overpack")?.unwrap_or(0),
            raw_allocation: map.contains_key("raw"),
            out: map.get("out").cloned(),
        })
    }

    fn symmetric(&self) -> Result<SymmetricConfig, Error> {
        match (self.n1, self.n2, self.ni) {
            (Some(n1), n2, Some(ni)) => SymmetricConfig::checked(n1, n2.unwrap_or(n1), ni),
            _ => Err(Error::invalid_input(
                "need --n1 and --ni (and optionally --n2)",
            )),
        }
    }

    fn imac(&self) -> Result<ImacConfig, Error> {
        if let Some((n11, n12, n21, n22, i21, i12)) = self.full {
            ImacConfig::new(n11, n12, n21, n22, i21, i12)
        } else {
            Ok(self.symmetric()?.to_full())
        }
    }

    fn config_hash(&self) -> u64 {
        let canon = format!(
            "{} model={} n1={:?} n2={:?} ni={:?} full={:?} alpha={:?} beta={:?} power={:?} delta={} samples={} seed={} overpack={}",
            self.command,
            self.model,
            self.n1,
            self.n2,
            self.ni,
            self.full,
            self.alphas,
            self.betas,
            self.power,
            self.delta,
            self.samples,
            self.seed,
            self.overpack,
        );
        fnv1a(canon.as_bytes())
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Rates are emitted with six decimals; exact integers print without
/// decimals.
pub fn fmt_bits(v: f64) -> String {
    if v.is_infinite() {
        return "inf".to_string();
    }
    if (v - v.round()).abs() < 1e-9 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v:.6}")
    }
}

fn fmt_rat(r: Rat) -> String {
    if r.is_integer() {
        format!("{}", r.num())
    } else {
        fmt_bits(r.to_f64())
    }
}

struct Report {
    lines: Vec<String>,
}

impl Report {
    fn new(spec: &RunSpec) -> Report {
        Report {
            lines: vec![
                format!("# imac {TOOL_VERSION}"),
                format!(
                    "# command={} model={} delta={} samples={} seed={} config_hash={:016x}",
                    spec.command,
                    spec.model,
                    spec.delta,
                    spec.samples,
                    spec.seed,
                    spec.config_hash()
                ),
            ],
        }
    }

    fn header(&mut self, cols: &str) {
        self.lines.push(cols.to_string());
    }

    fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    fn emit(self, spec: &RunSpec) -> Result<(), Error> {
        let text = self.lines.join("\n") + "\n";
        match &spec.out {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::invalid_input(format!("cannot write {path}: {e}"))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::invalid_input(format!("stdout: {e}"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Normalized bound branches at ratio `alpha` with weak-user strength `beta`.
fn gdof_point(alpha: f64, beta: f64) -> ([f64; 5], f64) {
    let gap = (1.0 - alpha).max(0.0);
    let d = [
        2.0 * gap.max(alpha) + gap.min(alpha),
        (2.0 / 3.0) * (2.0 * 1f64.max(alpha) + gap),
        2.0,
        (2.0 * beta).max(2.0 * gap).max(2.0 * alpha),
        1f64.max(alpha) + beta.max(gap),
    ];
    let min = d.iter().copied().fold(f64::INFINITY, f64::min);
    (d, min)
}

fn cmd_gdof(spec: &RunSpec) -> Result<i32, Error> {
    let alphas = if spec.alphas.is_empty() {
        (0..=50).map(|i| i as f64 * 0.05).collect()
    } else {
        spec.alphas.clone()
    };
    if alphas.is_empty() {
        return Err(Error::invalid_input("empty alpha grid"));
    }
    let betas = if spec.betas.is_empty() {
        vec![1.0]
    } else {
        spec.betas.clone()
    };
    let mut rep = Report::new(spec);
    rep.header("alpha,beta,d1,d2,d3,d4,d5,gdof,active");
    for &beta in &betas {
        for &alpha in &alphas {
            let (d, min) = gdof_point(alpha, beta);
            let active = d.iter().position(|&v| (v - min).abs() < 1e-12).unwrap() + 1;
            let mut fields: Vec<String> = vec![fmt_bits(alpha), fmt_bits(beta)];
            fields.extend(d.iter().map(|&v| fmt_bits(v)));
            fields.push(fmt_bits(min));
            fields.push(format!("D{active}"));
            rep.row(&fields);
        }
    }
    rep.emit(spec)?;
    Ok(0)
}

fn cmd_rate(spec: &RunSpec) -> Result<i32, Error> {
    let mut rep = Report::new(spec);
    match spec.model.as_str() {
        "ld" => {
            let cfg = spec.imac()?;
            let ach = ld::ld_achievable_sum_rate(&cfg)?;
            let ub = ld::ld_upper_bound(&cfg)?;
            rep.header("n11,n12,n21,n22,i21,i12,subcase1,subcase2,achievable,upper_bound");
            rep.row(&[
                cfg.n11.to_string(),
                cfg.n12.to_string(),
                cfg.n21.to_string(),
                cfg.n22.to_string(),
                cfg.i21.to_string(),
                cfg.i12.to_string(),
                format!("{:?}", ld::ld_subcase(&cfg, Cell::One)),
                format!("{:?}", ld::ld_subcase(&cfg, Cell::Two)),
                ach.to_string(),
                fmt_rat(ub),
            ]);
        }
        "ltd" => {
            let cfg = spec.symmetric()?;
            let report = ltd::gap_report(&cfg, spec.delta)?;
            rep.header("n1,n2,ni,regime,raw,guaranteed,bound,gap,guarantee");
            rep.row(&[
                cfg.n1.to_string(),
                cfg.n2.to_string(),
                cfg.ni.to_string(),
                report.regime.to_string(),
                report.achievable_raw.to_string(),
                fmt_bits(report.achievable_guaranteed),
                fmt_rat(report.bound),
                fmt_bits(report.gap),
                fmt_bits(report.guarantee),
            ]);
            if !report.within_guarantee() {
                rep.emit(spec)?;
                return Ok(1);
            }
        }
        other => {
            return Err(Error::invalid_input(format!(
                "--model {other} not supported by rate (use ld or ltd)"
            )))
        }
    }
    rep.emit(spec)?;
    Ok(0)
}

fn cmd_bounds(spec: &RunSpec) -> Result<i32, Error> {
    let cfg = spec.symmetric()?;
    let b = ltd::upper_bounds(&cfg);
    let mut rep = Report::new(spec);
    rep.header("n1,n2,ni,d1,d2,d3,d4,d5,min,active,full_gain_bound");
    let mut fields = vec![cfg.n1.to_string(), cfg.n2.to_string(), cfg.ni.to_string()];
    fields.extend(b.d.iter().map(|&v| fmt_rat(v)));
    fields.push(fmt_rat(b.min()));
    fields.push(format!("D{}", b.active()));
    fields.push(fmt_rat(ltd::full_gain_bound(cfg.n1, cfg.ni)));
    rep.row(&fields);
    rep.emit(spec)?;
    Ok(0)
}

fn cmd_verify(spec: &RunSpec) -> Result<i32, Error> {
    if spec.model != "ltd" {
        return Err(Error::invalid_input("verify requires --model ltd"));
    }
    let cfg = spec.symmetric()?;
    let mut alloc = if spec.raw_allocation {
        ltd::allocate_best(&cfg)?
    } else {
        ltd::shave_for_decoding(&ltd::allocate_best(&cfg)?, &cfg, spec.delta)?
    };
    if spec.overpack > 0 {
        for split in &mut alloc.cells {
            split.rc1 += spec.overpack as u64;
        }
    }
    let check = ltd::check_decoding(&alloc, &cfg, spec.delta);
    let mut rep = Report::new(spec);
    rep.header("record,cell,name,value,value2,value3");
    for (i, cell) in alloc.cells.iter().enumerate() {
        rep.row(&[
            "allocation".into(),
            (i + 1).to_string(),
            "rc1/rc2/rp1/rp2".into(),
            cell.rc1.to_string(),
            format!("{}/{}", cell.rc2, cell.rp1),
            cell.rp2.to_string(),
        ]);
    }
    for c in &check.conditions {
        rep.row(&[
            "condition".into(),
            (c.cell.index() + 1).to_string(),
            format!("{}#{}", check.variant, c.index),
            fmt_bits(c.lhs),
            fmt_bits(c.rhs),
            fmt_bits(c.margin()),
        ]);
    }
    let mut breach = !check.pass();
    // Only run the Monte Carlo when the allocation fits the signal lengths
    // (an overpacked allocation may not).
    let outage_ok = if spec.overpack == 0 {
        let est = oracle::outage_fraction(&cfg.to_full(), &alloc.levels, spec.samples, spec.seed)?;
        let tol = spec.delta + 5.0 * (spec.delta / spec.samples as f64).sqrt();
        rep.row(&[
            "outage".into(),
            "-".into(),
            "fraction".into(),
            fmt_bits(est.fraction()),
            fmt_bits(spec.delta),
            fmt_bits(tol),
        ]);
        est.fraction() <= tol
    } else {
        true
    };
    breach |= !outage_ok;
    rep.row(&[
        "verdict".into(),
        "-".into(),
        "pass".into(),
        (!breach).to_string(),
        String::new(),
        String::new(),
    ]);
    rep.emit(spec)?;
    Ok(if breach { 1 } else { 0 })
}

fn cmd_outage(spec: &RunSpec) -> Result<i32, Error> {
    let cfg = spec.symmetric()?;
    let alloc = if spec.raw_allocation {
        ltd::allocate_best(&cfg)?
    } else {
        ltd::shave_for_decoding(&ltd::allocate_best(&cfg)?, &cfg, spec.delta)?
    };
    let est = oracle::outage_fraction(&cfg.to_full(), &alloc.levels, spec.samples, spec.seed)?;
    let mut rep = Report::new(spec);
    rep.header("n1,n2,ni,delta,samples,seed,depth,failures,fraction");
    rep.row(&[
        cfg.n1.to_string(),
        cfg.n2.to_string(),
        cfg.ni.to_string(),
        fmt_bits(spec.delta),
        est.samples.to_string(),
        est.seed.to_string(),
        est.depth.to_string(),
        est.failures.to_string(),
        fmt_bits(est.fraction()),
    ]);
    rep.emit(spec)?;
    Ok(0)
}

fn cmd_compare(spec: &RunSpec) -> Result<i32, Error> {
    let mut rep = Report::new(spec);
    rep.header("n1,n2,ni,ld_achievable,ltd_achievable,upper_bound,gap_ld,gap_ltd");
    let mut configs = Vec::new();
    match (spec.n1, spec.ni) {
        (Some(n1), Some(ni)) => {
            configs.push(SymmetricConfig::checked(n1, spec.n2.unwrap_or(n1), ni)?);
        }
        // Sweep mode: interference levels from an alpha grid. Rows outside
        // the weak regime are skipped (the linear rate is undefined there).
        (Some(n1), None) if !spec.alphas.is_empty() => {
            for &alpha in &spec.alphas {
                let ni = (alpha * n1 as f64).round() as u32;
                let cfg = SymmetricConfig::checked(n1, spec.n2.unwrap_or(n1), ni)?;
                if cfg.to_full().is_weak_strict() {
                    configs.push(cfg);
                }
            }
        }
        _ => {}
    }
    if configs.is_empty() {
        return Err(Error::invalid_input(
            "compare needs --n1 and --ni (or --n1 with an --alpha grid in the weak regime)",
        ));
    }
    for cfg in configs {
        let full = cfg.to_full();
        let ld_ach = ld::ld_achievable_sum_rate(&full)?;
        let ltd_alloc = ltd::allocate_best(&cfg)?;
        let bound = ltd::upper_bounds(&cfg).min();
        rep.row(&[
            cfg.n1.to_string(),
            cfg.n2.to_string(),
            cfg.ni.to_string(),
            ld_ach.to_string(),
            ltd_alloc.sum_rate().to_string(),
            fmt_rat(bound),
            fmt_bits(bound.to_f64() - ld_ach as f64),
            fmt_bits(bound.to_f64() - ltd_alloc.sum_rate() as f64),
        ]);
    }
    rep.emit(spec)?;
    Ok(0)
}

fn cmd_gauss_rate(spec: &RunSpec) -> Result<i32, Error> {
    let power = spec
        .power
        .ok_or_else(|| Error::invalid_input("gauss-rate needs --power (log2 of P)"))?;
    let alpha = *spec
        .alphas
        .first()
        .ok_or_else(|| Error::invalid_input("gauss-rate needs --alpha"))?;
    let beta = spec.betas.first().copied().unwrap_or(1.0);
    let cfg = GaussConfig::symmetric(power, alpha, beta)?;
    let rate = gauss::achievable_sum_rate(&cfg)?;
    let upper = gauss::gaussian_upper_bound(&cfg)?;
    let mut rep = Report::new(spec);
    rep.header(
        "log2_power,alpha,beta,raw,closed_form,outer_code,upper_bound,l1,l2,odd_layers,relaxed",
    );
    let streams = rate.per_layer.len() as u32;
    rep.row(&[
        fmt_bits(power),
        fmt_bits(alpha),
        fmt_bits(beta),
        fmt_bits(rate.raw),
        fmt_bits(rate.closed_form),
        fmt_bits(gauss::outer_code_adjust_sum(rate.raw, streams)),
        fmt_bits(upper),
        rate.l_floor[0].to_string(),
        rate.l_floor[1].to_string(),
        rate.odd_layer_count.to_string(),
        rate.relaxed_regime.to_string(),
    ]);
    rep.emit(spec)?;
    Ok(if rate.raw <= upper { 0 } else { 1 })
}

/// Entry point shared by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let Some(command) = args.first() else {
        eprintln!("{USAGE}");
        return 2;
    };
    let rest = &args[1..];
    let result = RunSpec::parse(command, rest).and_then(|spec| match command.as_str() {
        "gdof" => cmd_gdof(&spec),
        "rate" => cmd_rate(&spec),
        "bounds" => cmd_bounds(&spec),
        "verify" => cmd_verify(&spec),
        "outage" => cmd_outage(&spec),
        "compare" => cmd_compare(&spec),
        "gauss-rate" => cmd_gauss_rate(&spec),
        other => Err(Error::invalid_input(format!("unknown command '{other}'"))),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::Domain(_) | Error::Regime(_) => 2,
                _ => 2,
            }
        }
    }
}

pub const USAGE: &str = "\
usage: imac <command> [flags]

commands:
  gdof        normalized bound curve over an interference-ratio grid
  rate        achievable rate for one configuration (--model ld|ltd)
  bounds      the five sum-rate bounds and their minimum
  verify      allocate, check decoding conditions, estimate outage
  outage      Monte Carlo outage fraction for the scheme allocation
  compare     linear vs lower-triangular achievable rates and the bound
  gauss-rate  Gaussian layered-scheme rates and upper bound

flags:
  --n1 --n2 --ni            symmetric coarse gains
  --n11 --n12 --n21 --n22 --i21 --i12   asymmetric coarse gains
  --alpha --beta --power    exponent parameterization (lists allowed)
  --model ld|ltd            deterministic model selector
  --delta <f>               outage budget (default 0.5)
  --samples <n>             Monte Carlo samples (default 10000)
  --seed <n>                RNG seed (recorded in every output)
  --overpack <bits>         verify only: inflate rc1 to force a failure
  --raw                     skip the decoding-slack shave
  --config <path>           flat key=value file; unknown keys are errors
  --out <path>              write CSV to a file instead of stdout
";
