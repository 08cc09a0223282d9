use std::fs::File;
use std::io::{BufWriter, Write};

use fvrecon::config::load_config;
use fvrecon::diagnostics::ReferenceSolution;
use fvrecon::experiments::{cached_reference, parse_epsilon_policy, shu_osher_reference_config};
use fvrecon::physics::{conservative_to_primitive, Conserved};
use fvrecon::{
    preset, run as run_config, EpsilonPolicy, Error, InitialCondition, LimiterScheme, Model,
    Result, RunConfig, SchemeSpec, SlopePair, SwitchMode,
};

use crate::table::{Cell, Table};
use crate::{
    ConvergenceArgs, Format, LimiterArgs, Output, ReferenceArgs, RunArgs, RunProduct, SectionArgs,
    Setup, SurfaceArgs,
};

fn config_error(m: impl Into<String>) -> Error {
    Error::Config(m.into())
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| config_error(format!("--{flag}: cannot parse `{}`", s.trim())))
        })
        .collect()
}

fn parse_pair(flag: &str, text: &str) -> Result<(f64, f64)> {
    match parse_list::<f64>(flag, text)?.as_slice() {
        [a, b] if a.is_finite() && b.is_finite() => Ok((*a, *b)),
        _ => Err(config_error(format!("--{flag} needs two numbers A,B"))),
    }
}

fn parse_scheme(text: &str) -> Result<SchemeSpec> {
    text.parse().map_err(|e: Error| config_error(e.to_string()))
}

/// `--eps` fixes epsilon for the WENO variants that take one directly.
fn with_fixed_eps(scheme: SchemeSpec, eps: f64) -> SchemeSpec {
    match scheme {
        SchemeSpec::WenoJs { .. } => SchemeSpec::WenoJs { epsilon: eps },
        SchemeSpec::WenoYc { .. } => SchemeSpec::WenoYc {
            epsilon: Some(EpsilonPolicy::Fixed(eps)),
        },
        other => other,
    }
}

/// The configuration named by `--preset` or `--config` with the command-line
/// overrides applied.
pub fn build_config(setup: &Setup) -> Result<RunConfig> {
    let mut cfg = match (&setup.preset, &setup.config) {
        (Some(name), None) => preset(name).map_err(|e| config_error(e.to_string()))?,
        (None, Some(path)) => load_config(path)?,
        _ => return Err(config_error("give --preset or --config")),
    };
    if let Some(s) = &setup.scheme {
        cfg.scheme = parse_scheme(s)?;
    }
    if let Some(n) = setup.n {
        cfg.n_cells = n;
        cfg.n_list = vec![n];
    }
    if let Some(v) = setup.cfl {
        cfg.cfl = v;
    }
    if let Some(v) = setup.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = setup.alpha {
        cfg.alpha = v;
    }
    if let Some(text) = &setup.eps_policy {
        cfg.yc_epsilon = parse_epsilon_policy(text)?;
    }
    if let Some(e) = setup.eps {
        cfg.yc_epsilon = EpsilonPolicy::Fixed(e);
        cfg.scheme = with_fixed_eps(cfg.scheme, e);
    }
    if let Some(text) = &setup.error_range {
        cfg.error_range = Some(parse_pair("error-range", text)?);
    }
    cfg.validate()?;
    cfg.resolved_scheme()
        .map_err(|e| config_error(e.to_string()))?;
    Ok(cfg)
}

fn write_table(table: &Table, output: &Output) -> Result<()> {
    let mut sink: Box<dyn Write> = match &output.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let written = match output.format {
        Format::Csv => table.write_csv(&mut sink),
        Format::Json => serde_json::to_writer_pretty(&mut sink, &table.to_json())
            .map_err(std::io::Error::from)
            .and_then(|()| writeln!(sink)),
    }
    .and_then(|()| sink.flush());
    match written {
        // A reader such as `head` that stops early is not an error.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

/// Final cell averages; Euler states are written as primitive variables.
pub fn solution_table(cfg: &RunConfig, field: &fvrecon::CellField) -> Result<Table> {
    let grid = field.grid();
    match cfg.model {
        Model::Advection(_) => {
            let mut t = Table::new(["x", "u"]);
            for (x, u) in grid.centers().into_iter().zip(field.interior(0)) {
                t.push(vec![x.into(), (*u).into()]);
            }
            Ok(t)
        }
        Model::Euler(e) => {
            let mut t = Table::new(["x", "rho", "v", "p"]);
            for i in 0..grid.n_cells {
                let u = Conserved::new(field.get(0, i), field.get(1, i), field.get(2, i));
                let w = conservative_to_primitive(u, e.gamma())?;
                t.push(vec![
                    grid.center(i).into(),
                    w.density.into(),
                    w.velocity.into(),
                    w.pressure.into(),
                ]);
            }
            Ok(t)
        }
    }
}

pub fn run(args: &RunArgs) -> Result<()> {
    let mut cfg = build_config(&args.setup)?;
    cfg.record_tv = args.out == RunProduct::Tv;
    let out = run_config(&cfg)?;
    let table = match args.out {
        RunProduct::Solution => solution_table(&cfg, &out.field)?,
        RunProduct::Tv => {
            let mut t = Table::new(["t", "tv"]);
            for &(time, tv) in &out.tv_history {
                t.push(vec![time.into(), tv.into()]);
            }
            t
        }
    };
    write_table(&table, &args.output)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<()> {
    let cfg = build_config(&args.setup)?;
    let schemes: Vec<SchemeSpec> = match &args.schemes {
        Some(text) => text
            .split(',')
            .map(|s| parse_scheme(s.trim()))
            .collect::<Result<_>>()?,
        None if args.setup.scheme.is_none() && !cfg.schemes.is_empty() => cfg.schemes.clone(),
        None => vec![cfg.scheme],
    };
    let schemes: Vec<SchemeSpec> = match args.setup.eps {
        Some(e) => schemes.into_iter().map(|s| with_fixed_eps(s, e)).collect(),
        None => schemes,
    };
    let n_list: Vec<usize> = match &args.n_list {
        Some(text) => parse_list("n-list", text)?,
        None => cfg.n_list.clone(),
    };
    for &s in &schemes {
        for &n in &n_list {
            let c = cfg.with_scheme(s).with_n(n);
            c.validate()?;
            c.resolved_scheme()
                .map_err(|e| config_error(e.to_string()))?;
        }
    }
    let reference = match &args.reference {
        Some(path) if cfg.ic == InitialCondition::ShuOsher => {
            Some(cached_reference(&shu_osher_reference_config(), path)?)
        }
        Some(path) => Some(ReferenceSolution::load(path, None)?),
        None => None,
    };

    let rows = fvrecon::experiments::sweep(&cfg, &schemes, &n_list, reference.as_ref());
    let mut table = Table::new([
        "scheme",
        "n",
        "dx",
        "l1",
        "linf",
        "order_l1",
        "order_linf",
        "tv",
    ]);
    let mut failures = Vec::new();
    for row in rows {
        match row.result {
            Ok(r) => {
                let e = r.report;
                table.push(vec![
                    Cell::Text(e.scheme),
                    Cell::Int(e.n),
                    e.dx.into(),
                    e.l1.into(),
                    e.linf.into(),
                    e.order_l1.into(),
                    e.order_linf.into(),
                    e.tv.into(),
                ]);
            }
            Err(e) => failures.push((row.scheme, row.n, e)),
        }
    }
    write_table(&table, &args.output)?;
    // Every failed run is reported; the last one also sets the exit status.
    let last = failures.pop();
    for (scheme, n, e) in &failures {
        let mut d = crate::diagnostic(e);
        d["scheme"] = scheme.to_string().into();
        d["n"] = (*n).into();
        eprintln!("{d}");
    }
    match last {
        Some((_, _, e)) => Err(e),
        None => Ok(()),
    }
}

fn resolve_limiter(args: &LimiterArgs) -> Result<LimiterScheme> {
    let mut spec = parse_scheme(&args.scheme)?;
    let policy = match args.eps {
        Some(e) => {
            spec = with_fixed_eps(spec, e);
            EpsilonPolicy::Fixed(e)
        }
        None => parse_epsilon_policy(&args.eps_policy)?,
    };
    spec.resolve(args.dx, args.alpha, policy, SwitchMode::Sharp)
        .map_err(|e| config_error(e.to_string()))
}

fn samples(flag: &str, range: (f64, f64), points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(config_error(format!("--{flag} needs at least 2 points")));
    }
    let (a, b) = range;
    Ok((0..points)
        .map(|k| a + (b - a) * k as f64 / (points - 1) as f64)
        .collect())
}

pub fn surface(args: &SurfaceArgs) -> Result<()> {
    let scheme = resolve_limiter(&args.limiter)?;
    let axis = samples(
        "points",
        parse_pair("range", &args.limiter.range)?,
        args.limiter.points.unwrap_or(201),
    )?;
    let mut table = Table::new(["delta_minus", "delta_plus", "H"]);
    for &dm in &axis {
        for &dp in &axis {
            table.push(vec![
                dm.into(),
                dp.into(),
                scheme.h(SlopePair::new(dm, dp)).into(),
            ]);
        }
    }
    write_table(&table, &args.output)
}

/// One `H` column per fixed `delta_plus`; a single value gives the plain
/// `delta_minus,H` layout.
pub fn section(args: &SectionArgs) -> Result<()> {
    let scheme = resolve_limiter(&args.limiter)?;
    let fixed: Vec<f64> = parse_list("delta-plus", &args.delta_plus)?;
    if fixed.iter().any(|v| !v.is_finite()) {
        return Err(config_error("--delta-plus values must be finite"));
    }
    let axis = samples(
        "points",
        parse_pair("range", &args.limiter.range)?,
        args.limiter.points.unwrap_or(401),
    )?;
    let mut columns = vec!["delta_minus".to_string()];
    if let [_] = fixed.as_slice() {
        columns.push("H".into());
    } else {
        columns.extend(fixed.iter().map(|dp| format!("H[{dp}]")));
    }
    let mut table = Table::new(columns);
    for &dm in &axis {
        let mut row = vec![Cell::Num(dm)];
        row.extend(
            fixed
                .iter()
                .map(|&dp| Cell::Num(scheme.h(SlopePair::new(dm, dp)))),
        );
        table.push(row);
    }
    write_table(&table, &args.output)
}

pub fn reference(args: &ReferenceArgs) -> Result<()> {
    if args.force && args.output.exists() {
        std::fs::remove_file(&args.output)?;
    }
    cached_reference(&shu_osher_reference_config(), &args.output)?;
    Ok(())
}
