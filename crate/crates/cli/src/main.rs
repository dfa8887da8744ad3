use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::process::ExitCode;

use blochmap::{
    crossover_report, sweep, CurvePoint, Family, GramParams, MeasScheme, QuadratureSpec, ScenarioRequest, Scheme,
    SweepParameter, C64,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blochmap", version, about = "Average fidelities of nonlinear qubit transformations")]
struct Cli {
    #[command(subcommand)]
    family: FamilyCmd,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Piecewise phase rotation: the polar band below delta is rotated
    /// by -beta about the z axis, the band above by +beta.
    Rotation(RotationArgs),
    /// Partial orthogonal-complement map: polar caps of width delta are
    /// sent to their antipodes, the equatorial band is left alone.
    Orthog(OrthogArgs),
    /// Partial polar shift: states with theta below delta are shifted
    /// by -alpha in theta, the rest are left alone.
    General(GeneralArgs),
    /// Linear baseline: the whole sphere is rotated by -alpha in theta.
    Baseline(BaselineArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Schemes to evaluate, comma separated. Measurement schemes:
    /// rho1, rho2, rho3, sigma1, sigma2. Quantum: quantum_optimal, or
    /// quantum_fixed:x,y,zre,zim for a fixed Gram point.
    #[arg(long, default_value = "quantum_optimal")]
    schemes: String,
    /// Quadrature nodes per axis.
    #[arg(long, default_value_t = 64)]
    quad_order: usize,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct RotationArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Band boundary delta in [0, pi].
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Sweep delta over lo:hi:n.
    #[arg(long)]
    sweep_delta: Option<String>,
    /// Rotation angle beta.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Sweep beta over lo:hi:n.
    #[arg(long)]
    sweep_beta: Option<String>,
}

#[derive(Args)]
struct OrthogArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Cap width delta in [0, pi/2].
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Sweep delta over lo:hi:n.
    #[arg(long)]
    sweep_delta: Option<String>,
    /// Report the strategy switch locations instead of a curve.
    #[arg(long)]
    crossovers: bool,
}

#[derive(Args)]
struct GeneralArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Region boundary delta in [0, pi].
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Sweep delta over lo:hi:n.
    #[arg(long)]
    sweep_delta: Option<String>,
    /// Shift angle alpha in [0, pi].
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Sweep alpha over lo:hi:n.
    #[arg(long)]
    sweep_alpha: Option<String>,
    /// Add the universal cos^2(alpha/2) column for comparison.
    #[arg(long)]
    compare_universal: bool,
    /// Report the strategy switch locations instead of a curve.
    #[arg(long)]
    crossovers: bool,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Shift angle alpha.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Sweep alpha over lo:hi:n.
    #[arg(long)]
    sweep_alpha: Option<String>,
}

/// Exit 2: the command line itself is invalid. Exit 1: the computation
/// failed.
enum CliError {
    Usage(String),
    Numeric(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_range(flag: &str, spec: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || usage(format!("--{flag} expects lo:hi:n, got '{spec}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !lo.is_finite() || !hi.is_finite() || hi < lo || n < 2 {
        return Err(usage(format!("--{flag} needs finite lo <= hi and n >= 2, got '{spec}'")));
    }
    Ok((lo, hi, n))
}

fn parse_schemes(spec: &str) -> Result<Vec<Scheme>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let scheme = match part {
            "rho1" => Scheme::Measurement(MeasScheme::Rho1),
            "rho2" => Scheme::Measurement(MeasScheme::Rho2),
            "rho3" => Scheme::Measurement(MeasScheme::Rho3),
            "sigma1" => Scheme::Measurement(MeasScheme::Sigma1),
            "sigma2" => Scheme::Measurement(MeasScheme::Sigma2),
            "quantum_optimal" => Scheme::QuantumOptimal,
            other => {
                if let Some(params) = other.strip_prefix("quantum_fixed:") {
                    let vals: Vec<f64> = params
                        .split(',')
                        .map(|v| v.parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| usage(format!("--schemes: bad quantum_fixed parameters '{params}'")))?;
                    if vals.len() != 4 {
                        return Err(usage("--schemes: quantum_fixed needs x,y,zre,zim".to_string()));
                    }
                    let g = GramParams::new(vals[0], vals[1], C64::new(vals[2], vals[3]))
                        .map_err(|e| usage(format!("--schemes: {e}")))?;
                    Scheme::QuantumFixed(g)
                } else {
                    return Err(usage(format!("--schemes: unknown scheme '{other}'")));
                }
            }
        };
        out.push(scheme);
    }
    if out.is_empty() {
        return Err(usage("--schemes: no schemes given".to_string()));
    }
    Ok(out)
}

fn check_range(flag: &str, value: f64, lo: f64, hi: f64) -> Result<(), CliError> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(usage(format!("--{flag} must lie in [{lo}, {hi}], got {value}")))
    }
}

fn fmt(v: f64) -> String {
    format!("{:.11e}", v)
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn curve_table(points: &[CurvePoint], abscissa_name: &str, universal: Option<&[f64]>) -> Table {
    let mut header = vec![abscissa_name.to_string()];
    if let Some(first) = points.first() {
        for (label, _) in &first.fidelities {
            header.push((*label).to_string());
        }
        if first.optimum.is_some() {
            for col in ["opt_x", "opt_y", "opt_z_re", "opt_z_im", "chi", "regime"] {
                header.push(col.to_string());
            }
        }
    }
    if universal.is_some() {
        header.push("universal".to_string());
    }
    let mut rows = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let mut row = vec![fmt(p.abscissa)];
        for (_, v) in &p.fidelities {
            row.push(fmt(*v));
        }
        if let Some(opt) = &p.optimum {
            row.push(fmt(opt.best.x));
            row.push(fmt(opt.best.y));
            row.push(fmt(opt.best.z.re));
            row.push(fmt(opt.best.z.im));
            row.push(fmt(opt.chi));
            row.push(opt.regime.label().to_string());
        }
        if let Some(u) = universal {
            row.push(fmt(u[i]));
        }
        rows.push(row);
    }
    Table { header, rows }
}

fn render(table: &Table, format: &str) -> Result<String, CliError> {
    match format {
        "csv" => {
            let mut out = String::new();
            out.push_str(&table.header.join(","));
            out.push('\n');
            for row in &table.rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        "json" => {
            let objs: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = table
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| {
                            let val = v
                                .parse::<f64>()
                                .map(|f| serde_json::json!(f))
                                .unwrap_or_else(|_| serde_json::json!(v));
                            (k.clone(), val)
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&objs).expect("json render")))
        }
        other => Err(usage(format!("--format must be csv or json, got '{other}'"))),
    }
}

fn emit(common: &CommonArgs, text: &str) -> Result<(), CliError> {
    match &common.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Numeric(format!("cannot write {path}: {e}"))),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Numeric(format!("stdout: {e}")))
        }
    }
}

fn build_request(family: Family, common: &CommonArgs) -> Result<ScenarioRequest, CliError> {
    if common.quad_order < 4 {
        return Err(usage(format!("--quad-order must be at least 4, got {}", common.quad_order)));
    }
    Ok(ScenarioRequest {
        family,
        delta: None,
        beta: None,
        alpha: None,
        schemes: parse_schemes(&common.schemes)?,
        quad: QuadratureSpec::uniform(common.quad_order).map_err(numeric)?,
    })
}

fn numeric(e: blochmap::Error) -> CliError {
    CliError::Numeric(e.to_string())
}

fn run_points(
    template: &ScenarioRequest,
    parameter: SweepParameter,
    fixed: Option<f64>,
    range: Option<(f64, f64, usize)>,
) -> Result<Vec<CurvePoint>, CliError> {
    match range {
        Some((lo, hi, n)) => sweep(template, parameter, lo, hi, n).map_err(numeric),
        None => {
            let v = fixed.expect("caller validated the fixed value");
            let mut req = template.clone();
            match parameter {
                SweepParameter::Delta => req.delta = Some(v),
                SweepParameter::Beta => req.beta = Some(v),
                SweepParameter::Alpha => req.alpha = Some(v),
            }
            let mut point = blochmap::run(&req).map_err(numeric)?;
            point.abscissa = v;
            Ok(vec![point])
        }
    }
}

fn crossover_table(req: &ScenarioRequest) -> Result<Table, CliError> {
    let report = crossover_report(req).map_err(numeric)?;
    Ok(Table {
        header: vec!["pair".to_string(), "location".to_string()],
        rows: report.into_iter().map(|c| vec![c.pair, fmt(c.location)]).collect(),
    })
}

fn run_rotation(args: &RotationArgs) -> Result<(), CliError> {
    let mut req = build_request(Family::Rotation, &args.common)?;
    let sweep_d = args.sweep_delta.as_deref().map(|s| parse_range("sweep-delta", s)).transpose()?;
    let sweep_b = args.sweep_beta.as_deref().map(|s| parse_range("sweep-beta", s)).transpose()?;
    if sweep_d.is_some() && sweep_b.is_some() {
        return Err(usage("--sweep-delta and --sweep-beta cannot be combined".to_string()));
    }
    if let Some(d) = args.delta {
        check_range("delta", d, 0.0, PI)?;
    }
    if let Some((lo, hi, _)) = sweep_d {
        check_range("sweep-delta", lo, 0.0, PI)?;
        check_range("sweep-delta", hi, 0.0, PI)?;
    }
    req.delta = args.delta;
    req.beta = args.beta;
    let (points, name) = if sweep_b.is_some() {
        if args.delta.is_none() {
            return Err(usage("--delta is required when sweeping beta".to_string()));
        }
        (run_points(&req, SweepParameter::Beta, args.beta, sweep_b)?, "beta")
    } else {
        if args.beta.is_none() {
            return Err(usage("--beta is required for the rotation family".to_string()));
        }
        if args.delta.is_none() && sweep_d.is_none() {
            return Err(usage("provide --delta or --sweep-delta".to_string()));
        }
        (run_points(&req, SweepParameter::Delta, args.delta, sweep_d)?, "delta")
    };
    let text = render(&curve_table(&points, name, None), &args.common.format)?;
    emit(&args.common, &text)
}

fn run_orthog(args: &OrthogArgs) -> Result<(), CliError> {
    let mut req = build_request(Family::Orthog, &args.common)?;
    if args.crossovers {
        let table = crossover_table(&req)?;
        let text = render(&table, &args.common.format)?;
        return emit(&args.common, &text);
    }
    let sweep_d = args.sweep_delta.as_deref().map(|s| parse_range("sweep-delta", s)).transpose()?;
    if let Some(d) = args.delta {
        check_range("delta", d, 0.0, PI / 2.0)?;
    }
    if let Some((lo, hi, _)) = sweep_d {
        check_range("sweep-delta", lo, 0.0, PI / 2.0)?;
        check_range("sweep-delta", hi, 0.0, PI / 2.0)?;
    }
    if args.delta.is_none() && sweep_d.is_none() {
        return Err(usage("provide --delta or --sweep-delta".to_string()));
    }
    req.delta = args.delta;
    let points = run_points(&req, SweepParameter::Delta, args.delta, sweep_d)?;
    let text = render(&curve_table(&points, "delta", None), &args.common.format)?;
    emit(&args.common, &text)
}

fn run_general(args: &GeneralArgs) -> Result<(), CliError> {
    let mut req = build_request(Family::General, &args.common)?;
    if let Some(a) = args.alpha {
        check_range("alpha", a, 0.0, PI)?;
    }
    if let Some(d) = args.delta {
        check_range("delta", d, 0.0, PI)?;
    }
    req.delta = args.delta;
    req.alpha = args.alpha;
    if args.crossovers {
        if args.alpha.is_none() {
            return Err(usage("--alpha is required with --crossovers".to_string()));
        }
        let table = crossover_table(&req)?;
        let text = render(&table, &args.common.format)?;
        return emit(&args.common, &text);
    }
    let sweep_d = args.sweep_delta.as_deref().map(|s| parse_range("sweep-delta", s)).transpose()?;
    let sweep_a = args.sweep_alpha.as_deref().map(|s| parse_range("sweep-alpha", s)).transpose()?;
    if sweep_d.is_some() && sweep_a.is_some() {
        return Err(usage("--sweep-delta and --sweep-alpha cannot be combined".to_string()));
    }
    let (points, name, alphas) = if sweep_a.is_some() || (args.alpha.is_some() && sweep_d.is_none() && args.delta.is_none()) {
        if args.delta.is_none() {
            return Err(usage("--delta is required when sweeping alpha".to_string()));
        }
        if args.alpha.is_none() && sweep_a.is_none() {
            return Err(usage("provide --alpha or --sweep-alpha".to_string()));
        }
        let pts = run_points(&req, SweepParameter::Alpha, args.alpha, sweep_a)?;
        let alphas: Vec<f64> = pts.iter().map(|p| p.abscissa).collect();
        (pts, "alpha", alphas)
    } else {
        if args.alpha.is_none() {
            return Err(usage("--alpha is required for the general family".to_string()));
        }
        if args.delta.is_none() && sweep_d.is_none() {
            return Err(usage("provide --delta or --sweep-delta".to_string()));
        }
        let pts = run_points(&req, SweepParameter::Delta, args.delta, sweep_d)?;
        let a = args.alpha.unwrap();
        let alphas = vec![a; pts.len()];
        (pts, "delta", alphas)
    };
    let universal: Option<Vec<f64>> = args
        .compare_universal
        .then(|| alphas.iter().map(|a| (a / 2.0).cos().powi(2)).collect());
    let text = render(&curve_table(&points, name, universal.as_deref()), &args.common.format)?;
    emit(&args.common, &text)
}

fn run_baseline(args: &BaselineArgs) -> Result<(), CliError> {
    let mut req = build_request(Family::LinearBaseline, &args.common)?;
    let sweep_a = args.sweep_alpha.as_deref().map(|s| parse_range("sweep-alpha", s)).transpose()?;
    if args.alpha.is_none() && sweep_a.is_none() {
        return Err(usage("provide --alpha or --sweep-alpha".to_string()));
    }
    req.alpha = args.alpha;
    let points = run_points(&req, SweepParameter::Alpha, args.alpha, sweep_a)?;
    let text = render(&curve_table(&points, "alpha", None), &args.common.format)?;
    emit(&args.common, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.family {
        FamilyCmd::Rotation(args) => run_rotation(args),
        FamilyCmd::Orthog(args) => run_orthog(args),
        FamilyCmd::General(args) => run_general(args),
        FamilyCmd::Baseline(args) => run_baseline(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
