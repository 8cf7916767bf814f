use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{
    Command, ConfigFile, CwstarParams, Format, Invocation, MinimizeParams, ModelArgs, Outcome,
    OutputArgs, ReconstructParams, ScanParams, SharpParams, SweepParams,
};
use crate::error::{Error, Result};
use crate::io::{
    crack_table_csv, format_exact, format_sig, graph_csv, minimizer_csv, read_field, scan_csv,
    sharp_summary_csv, sweep_csv, write_field, write_json, write_text, FieldFile,
};
use crate::limits::{crack_scan, gamma_sweep_i, gamma_sweep_v};
use crate::material::MaterialModel;
use crate::regularized::{minimize, Functional, Init, Problem, SolveSettings, Start};
use crate::sharp::{bracket_argument, build_sharp_minimizer, crack_count, reconstruct_deformation, Variant};

const CWSTAR_TOL: f64 = 1e-12;
const SWEEP_EPSILONS: [f64; 4] = [0.08, 0.04, 0.02, 0.01];
const SWEEP_INTERVALS: i64 = 1000;
const SWEEP_MAX_ITERATIONS: i64 = 10_000;
const SWEEP_TOLERANCE: f64 = 1e-5;

struct Context {
    model: MaterialModel,
    out_dir: PathBuf,
    formats: Vec<Format>,
    strict: bool,
}

impl Context {
    fn wants(&self, format: Format) -> bool {
        self.formats.contains(&format)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    fn prepare(&self) -> Result<()> {
        std::fs::create_dir_all(&self.out_dir)?;
        Ok(())
    }
}

fn setup<P>(inv: Invocation<P>, section: &str) -> Result<(Context, P)>
where
    P: Args + Serialize + DeserializeOwned,
{
    let file = match &inv.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let model: ModelArgs = file.merged("model", &inv.model)?;
    let output: OutputArgs = file.merged("output", &inv.output)?;
    let params: P = file.merged(section, &inv.params)?;
    let ctx = Context {
        model: model.resolve()?,
        out_dir: output.out_dir.unwrap_or_else(|| PathBuf::from(".")),
        formats: output.formats.unwrap_or_else(|| vec![Format::Csv, Format::Json]),
        strict: output.strict.unwrap_or(false),
    };
    Ok((ctx, params))
}

fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn required<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| config(format!("missing required value `{key}`")))
}

fn positive(value: f64, key: &str) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(config(format!("`{key}` must be positive, got {value}")))
    }
}

fn non_negative(value: f64, key: &str) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(config(format!("`{key}` must be non-negative, got {value}")))
    }
}

fn count(value: i64, key: &str, min: i64) -> Result<usize> {
    if value >= min {
        Ok(value as usize)
    } else {
        Err(config(format!("`{key}` must be at least {min}, got {value}")))
    }
}

fn tag(functional: Functional) -> &'static str {
    match functional {
        Functional::E => "I",
        Functional::V => "V",
    }
}

pub(super) fn execute(command: Command, out: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Cwstar(inv) => cwstar(inv, out),
        Command::Sharp(inv) => sharp(inv, out),
        Command::Minimize(inv) => run_minimize(inv, out),
        Command::Scan(inv) => scan(inv, out),
        Command::Sweep(inv) => sweep(inv, out),
        Command::Reconstruct(inv) => reconstruct(inv, out),
    }
}

fn done(ctx: &Context, files: Vec<PathBuf>, all_converged: bool) -> Outcome {
    Outcome {
        files,
        all_converged,
        strict: ctx.strict,
    }
}

fn cwstar(inv: Invocation<CwstarParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "cwstar")?;
    let tol = positive(p.abs_tol.unwrap_or(CWSTAR_TOL), "abs_tol")?;
    let q = ctx.model.c_wstar(tol)?;
    writeln!(out, "model {}", ctx.model.name())?;
    writeln!(out, "c_wstar {}", format_exact(q.value))?;
    writeln!(out, "error_estimate {:e}", q.error_estimate)?;
    Ok(done(&ctx, vec![], true))
}

#[derive(Serialize)]
struct SharpSummary<'a> {
    lambda: f64,
    mu: f64,
    model: &'a str,
    c_wstar: f64,
    x: f64,
    n: usize,
    minimizers: &'a [crate::sharp::SharpMinimizer],
    graphs: Vec<crate::sharp::DeformationGraph>,
}

fn sharp(inv: Invocation<SharpParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "sharp")?;
    let lambda = positive(required(p.lambda, "lambda")?, "lambda")?;
    let mu = non_negative(p.mu.unwrap_or(0.0), "mu")?;
    let c = ctx.model.c_wstar(CWSTAR_TOL)?.value;
    let n = crack_count(c, mu, lambda)?;
    let x = bracket_argument(c, mu, lambda)?;
    let minimizers = Variant::BOTH
        .iter()
        .map(|&v| build_sharp_minimizer(n, lambda, v, c, mu))
        .collect::<Result<Vec<_>>>()?;
    let graphs = minimizers
        .iter()
        .map(|m| reconstruct_deformation(&m.field))
        .collect::<Result<Vec<_>>>()?;

    writeln!(out, "lambda {} mu {} x {} n {}", format_sig(lambda), format_sig(mu), format_sig(x), n)?;
    for m in &minimizers {
        writeln!(
            out,
            "variant {} energy {} cracks {} opening {}",
            m.variant,
            format_sig(m.energy),
            m.cracks.len(),
            format_sig(m.total_opening())
        )?;
    }

    ctx.prepare()?;
    let stem = format!("sharp_lambda{}_mu{}", format_exact(lambda), format_exact(mu));
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let path = ctx.path(&format!("{stem}.csv"));
        write_text(&path, &sharp_summary_csv(lambda, mu, x, &minimizers)?)?;
        files.push(path);
        let path = ctx.path(&format!("{stem}_cracks.csv"));
        write_text(&path, &crack_table_csv(&minimizers)?)?;
        files.push(path);
        for (m, g) in minimizers.iter().zip(&graphs) {
            let path = ctx.path(&format!("{stem}_variant{}_graph.csv", m.variant));
            write_text(&path, &graph_csv(g)?)?;
            files.push(path);
        }
    }
    for m in &minimizers {
        let path = ctx.path(&format!("{stem}_variant{}.field", m.variant));
        write_field(&path, &FieldFile::SharpDeformation(m.field.clone()))?;
        files.push(path);
    }
    if ctx.wants(Format::Json) {
        let path = ctx.path(&format!("{stem}.json"));
        let summary = SharpSummary {
            lambda,
            mu,
            model: ctx.model.name(),
            c_wstar: c,
            x,
            n,
            minimizers: &minimizers,
            graphs,
        };
        write_json(&path, &summary)?;
        files.push(path);
    }
    Ok(done(&ctx, files, true))
}

fn parse_start(text: &str) -> Result<Option<Start>> {
    let bad = || config(format!("unknown start {text:?}"));
    match text {
        "multistart" => Ok(None),
        "homogeneous" => Ok(Some(Start::Homogeneous)),
        _ => {
            if let Some(rest) = text.strip_prefix("random-") {
                let index = rest.parse().map_err(|_| bad())?;
                return Ok(Some(Start::Random { index }));
            }
            let rest = text.strip_prefix("sharp-n").ok_or_else(bad)?;
            let (n, variant) = rest.split_once('-').ok_or_else(bad)?;
            Ok(Some(Start::Sharp {
                n: n.parse().map_err(|_| bad())?,
                variant: variant.parse()?,
            }))
        }
    }
}

#[derive(Serialize)]
struct MinimizeSummary<'a> {
    functional: Functional,
    lambda: f64,
    mu: f64,
    epsilon: f64,
    intervals: usize,
    model: &'a str,
    seed: u64,
    tolerance: f64,
    max_iterations: usize,
    energy: f64,
    rescaled_energy: f64,
    transition_count: usize,
    iterations: usize,
    converged: bool,
    projected_gradient_norm: f64,
    start: &'a str,
}

fn run_minimize(inv: Invocation<MinimizeParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "minimize")?;
    let functional: Functional = required(p.functional.as_deref(), "functional")?.parse()?;
    let lambda = positive(required(p.lambda, "lambda")?, "lambda")?;
    let epsilon = positive(required(p.epsilon, "epsilon")?, "epsilon")?;
    let mu = match (p.mu, p.k) {
        (Some(_), Some(_)) => return Err(config("give either `mu` or `k`, not both")),
        (Some(mu), None) => non_negative(mu, "mu")?,
        (None, Some(k)) => non_negative(k, "k")? / epsilon,
        (None, None) => 0.0,
    };
    let defaults = SolveSettings::default();
    let settings = SolveSettings {
        epsilon,
        mu,
        intervals: count(p.intervals.unwrap_or(defaults.intervals as i64), "intervals", 16)?,
        max_iterations: count(
            p.max_iterations.unwrap_or(defaults.max_iterations as i64),
            "max_iterations",
            0,
        )?,
        tolerance: positive(p.tolerance.unwrap_or(defaults.tolerance), "tolerance")?,
        seed: p.seed.unwrap_or(defaults.seed),
        random_starts: count(
            p.random_starts.unwrap_or(defaults.random_starts as i64),
            "random_starts",
            0,
        )?,
        ..defaults
    };
    let problem = Problem::new(functional, lambda, ctx.model.clone())?;
    let init = match (&p.init, p.start.as_deref().map(parse_start).transpose()?.flatten()) {
        (Some(_), Some(_)) => return Err(config("give either `init` or `start`, not both")),
        (Some(path), None) => match read_field(path)? {
            FieldFile::Grid(f) => Init::Start(Start::Field(f)),
            other => {
                return Err(config(format!(
                    "initial guess must be a grid field, got {}",
                    other.kind_name()
                )))
            }
        },
        (None, Some(start)) => Init::Start(start),
        (None, None) => Init::Multistart(vec![]),
    };
    let result = minimize(&problem, &settings, &init)?;

    writeln!(
        out,
        "functional {} lambda {} epsilon {} mu {}",
        functional,
        format_sig(lambda),
        format_sig(epsilon),
        format_sig(mu)
    )?;
    writeln!(
        out,
        "energy {} rescaled {} transitions {} iterations {} converged {} start {}",
        format_sig(result.energy),
        format_sig(result.rescaled_energy),
        result.transition_count,
        result.iterations,
        result.converged,
        result.start
    )?;

    ctx.prepare()?;
    let stem = format!(
        "minimize_{}_lambda{}_mu{}_eps{}",
        tag(functional),
        format_exact(lambda),
        format_exact(mu),
        format_exact(epsilon)
    );
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let path = ctx.path(&format!("{stem}.csv"));
        write_text(&path, &minimizer_csv(&result.field)?)?;
        files.push(path);
    }
    let path = ctx.path(&format!("{stem}.field"));
    write_field(&path, &FieldFile::Grid(result.field.clone()))?;
    files.push(path);
    if ctx.wants(Format::Json) {
        let path = ctx.path(&format!("{stem}.json"));
        let summary = MinimizeSummary {
            functional,
            lambda,
            mu,
            epsilon,
            intervals: settings.intervals,
            model: ctx.model.name(),
            seed: settings.seed,
            tolerance: settings.tolerance,
            max_iterations: settings.max_iterations,
            energy: result.energy,
            rescaled_energy: result.rescaled_energy,
            transition_count: result.transition_count,
            iterations: result.iterations,
            converged: result.converged,
            projected_gradient_norm: result.projected_gradient_norm,
            start: &result.start,
        };
        write_json(&path, &summary)?;
        files.push(path);
    }
    Ok(done(&ctx, files, result.converged))
}

fn scan(inv: Invocation<ScanParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "scan")?;
    let mu = non_negative(p.mu.unwrap_or(200.0), "mu")?;
    let start = p.lambda_min.unwrap_or(1.01);
    let end = p.lambda_max.unwrap_or(1.99);
    let step = p.step.unwrap_or(0.01);
    let report = crack_scan(start, end, step, mu, &ctx.model)?;

    writeln!(out, "mu {} model {} loads {}", format_sig(mu), ctx.model.name(), report.rows.len())?;
    let mut prev = None;
    for row in &report.rows {
        if prev != Some(row.n) {
            writeln!(out, "from lambda {} n {}", format_sig(row.lambda), row.n)?;
            prev = Some(row.n);
        }
    }

    ctx.prepare()?;
    let stem = format!("scan_mu{}", format_exact(mu));
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let path = ctx.path(&format!("{stem}.csv"));
        write_text(&path, &scan_csv(&report)?)?;
        files.push(path);
    }
    if ctx.wants(Format::Json) {
        let path = ctx.path(&format!("{stem}.json"));
        write_json(&path, &report)?;
        files.push(path);
    }
    Ok(done(&ctx, files, true))
}

fn sweep(inv: Invocation<SweepParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "sweep")?;
    let functional: Functional = p.functional.as_deref().unwrap_or("I").parse()?;
    let lambda = positive(required(p.lambda, "lambda")?, "lambda")?;
    let mu = non_negative(p.mu.unwrap_or(0.0), "mu")?;
    if functional == Functional::E && mu != 0.0 {
        return Err(config("the I sweep has no foundation; drop `mu`"));
    }
    let epsilons = p.epsilons.unwrap_or_else(|| SWEEP_EPSILONS.to_vec());
    for &e in &epsilons {
        positive(e, "epsilons")?;
    }
    let defaults = SolveSettings::default();
    let settings = SolveSettings {
        mu,
        intervals: count(p.intervals.unwrap_or(SWEEP_INTERVALS), "intervals", 16)?,
        max_iterations: count(p.max_iterations.unwrap_or(SWEEP_MAX_ITERATIONS), "max_iterations", 0)?,
        tolerance: positive(p.tolerance.unwrap_or(SWEEP_TOLERANCE), "tolerance")?,
        seed: p.seed.unwrap_or(defaults.seed),
        random_starts: count(
            p.random_starts.unwrap_or(defaults.random_starts as i64),
            "random_starts",
            0,
        )?,
        ..defaults
    };
    let report = match functional {
        Functional::E => gamma_sweep_i(lambda, &ctx.model, &epsilons, &settings)?,
        Functional::V => gamma_sweep_v(lambda, mu, &ctx.model, &epsilons, &settings)?,
    };

    writeln!(
        out,
        "{} sweep lambda {} mu {} limit {}",
        tag(functional),
        format_sig(lambda),
        format_sig(mu),
        format_sig(report.metadata.limit_energy)
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "epsilon {} rescaled {} transitions {} l1 {} converged {}{}",
            format_sig(r.epsilon),
            format_sig(r.rescaled_energy),
            r.transition_count,
            format_sig(r.l1_distance_to_sharp),
            r.converged,
            if r.suspect { " suspect" } else { "" }
        )?;
    }

    ctx.prepare()?;
    let stem = format!(
        "sweep_{}_lambda{}_mu{}",
        tag(functional),
        format_exact(lambda),
        format_exact(mu)
    );
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let path = ctx.path(&format!("{stem}.csv"));
        write_text(&path, &sweep_csv(&report)?)?;
        files.push(path);
    }
    if ctx.wants(Format::Json) {
        let path = ctx.path(&format!("{stem}.json"));
        write_json(&path, &report)?;
        files.push(path);
    }
    if let Some(last) = report.minimizers.last() {
        let path = ctx.path(&format!("{stem}_final.field"));
        write_field(&path, &FieldFile::Grid(last.clone()))?;
        files.push(path);
    }
    Ok(done(&ctx, files, report.all_converged()))
}

fn reconstruct(inv: Invocation<ReconstructParams>, out: &mut dyn Write) -> Result<Outcome> {
    let (ctx, p) = setup(inv, "reconstruct")?;
    let input = required(p.input, "input")?;
    let field = match read_field(&input)? {
        FieldFile::SharpDeformation(f) => f,
        other => {
            return Err(Error::Domain(format!(
                "reconstruction needs a sharp_deformation field, got {}",
                other.kind_name()
            )))
        }
    };
    let graph = reconstruct_deformation(&field)?;
    for piece in &graph.pieces {
        writeln!(
            out,
            "piece x [{}, {}] f [{}, {}]",
            format_sig(piece.x_start),
            format_sig(piece.x_end),
            format_sig(piece.f_start),
            format_sig(piece.f_end)
        )?;
    }
    for jump in &graph.jumps {
        writeln!(
            out,
            "jump x {} from {} to {}",
            format_sig(jump.x),
            format_sig(jump.lower),
            format_sig(jump.upper)
        )?;
    }

    ctx.prepare()?;
    let stem = format!("reconstruct_{}", file_stem(&input));
    let mut files = Vec::new();
    if ctx.wants(Format::Csv) {
        let path = ctx.path(&format!("{stem}.csv"));
        write_text(&path, &graph_csv(&graph)?)?;
        files.push(path);
    }
    if ctx.wants(Format::Json) {
        let path = ctx.path(&format!("{stem}.json"));
        write_json(&path, &graph)?;
        files.push(path);
    }
    Ok(done(&ctx, files, true))
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_names_parse() {
        assert_eq!(parse_start("multistart").unwrap(), None);
        assert_eq!(parse_start("homogeneous").unwrap(), Some(Start::Homogeneous));
        assert_eq!(parse_start("random-3").unwrap(), Some(Start::Random { index: 3 }));
        assert_eq!(
            parse_start("sharp-n4-B").unwrap(),
            Some(Start::Sharp { n: 4, variant: Variant::B })
        );
        for bad in ["sharp", "sharp-nx-A", "sharp-n2-C", "random-", "best"] {
            assert!(parse_start(bad).is_err(), "{bad}");
        }
    }
}
