use crate::complex::parse_complex;
use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::raster::{
    encode_image, encode_meta, render_dynamical_with, render_parameter_with, Palette, PlaneSpec, RasterGrid, ENGINE,
};
use blaschke_core::structure::{classify_with, locate_regions, DEFAULT_REGION_BUDGET};
use blaschke_experiments::verify::REFERENCE_LAMBDAS;
use blaschke_experiments::{detect_rings, find_case, verify_all, Case, CaseOptions, VerifyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Parser)]
#[command(name = "blaschke", version, about = "Explore the singularly perturbed Blaschke family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render the dynamical plane of one map to PPM (+ JSON metadata).
    RenderDyn(RenderDyn),
    /// Render the λ-plane for a fixed `a` to PPM (+ JSON metadata).
    RenderParam(RenderParam),
    /// Classify the orbit of one point and print its fate as JSON.
    Classify(Classify),
    /// Search for a parameter realising case a, b or c.
    FindCase(FindCase),
    /// Scan a polar λ-grid for ring bands around λ = 0.
    DetectRings(DetectRings),
    /// Run the acceptance suite and print the JSON report.
    Verify(Verify),
    /// Serve the HTTP API.
    Serve(Serve),
}

fn complex(s: &str) -> Result<Complex, String> {
    parse_complex(s)
}

#[derive(Debug, Args)]
pub struct View {
    #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0")]
    pub center: Complex,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    pub res: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PaletteArg::Escape)]
    pub palette: PaletteArg,
    /// Rendering threads; defaults to all cores.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PaletteArg {
    Escape,
    Classes,
}

impl From<PaletteArg> for Palette {
    fn from(p: PaletteArg) -> Self {
        match p {
            PaletteArg::Escape => Palette::Escape,
            PaletteArg::Classes => Palette::Classes,
        }
    }
}

#[derive(Debug, Args)]
pub struct RenderDyn {
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub lambda: Complex,
    #[command(flatten)]
    pub view: View,
}

#[derive(Debug, Args)]
pub struct RenderParam {
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex,
    #[command(flatten)]
    pub view: View,
}

#[derive(Debug, Args)]
pub struct Classify {
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub lambda: Complex,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub z: Complex,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: u32,
    /// Include the orbit points.
    #[arg(long)]
    pub orbit: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CaseArg {
    A,
    B,
    C,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::A => Case::A,
            CaseArg::B => Case::B,
            CaseArg::C => Case::C,
        }
    }
}

#[derive(Debug, Args)]
pub struct FindCase {
    #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.5i")]
    pub a: Complex,
    #[arg(long, value_enum)]
    pub case: CaseArg,
    /// Starting λ; defaults to the reference parameter of the case.
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub start: Option<Complex>,
    #[arg(long, default_value_t = 1024)]
    pub res: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: u32,
}

#[derive(Debug, Args)]
pub struct DetectRings {
    #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.5i")]
    pub a: Complex,
    #[arg(long, default_value_t = 7e-5)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 48)]
    pub radii: usize,
    #[arg(long, default_value_t = 96)]
    pub angles: usize,
}

#[derive(Debug, Args)]
pub struct Verify {
    /// Comma-separated criteria to run.
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub res: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Serve {
    /// Listening port; BLASCHKE_PORT takes precedence.
    #[arg(long, default_value_t = DEFAULT_PORT)]
    pub port: u16,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] blaschke_core::Error),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Engine(blaschke_core::Error::InvalidParams(_) | blaschke_core::Error::InvalidPlane(_)) => {
                EXIT_USAGE
            }
            _ => EXIT_DOMAIN,
        }
    }
}

fn provenance(command: &str, params: Value, seed: Option<u64>) -> Value {
    json!({"engine": ENGINE, "command": command, "params": params, "seed": seed})
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable report"));
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))
}

fn emit_raster(command: &str, grid: &RasterGrid, view: &View, params: Value) -> Result<(), CliError> {
    write(&view.out, &encode_image(grid, view.palette.into()))?;
    if let Some(meta) = &view.meta {
        write(meta, &encode_meta(grid)?)?;
    }
    print_json(&json!({
        "provenance": provenance(command, params, None),
        "image": view.out,
        "meta": view.meta,
        "classes": grid.classes,
        "ambiguousPx": grid.ambiguous_count(),
        "failedPx": grid.failed_count(),
    }));
    Ok(())
}

fn view_params(v: &View, width: f64) -> Value {
    json!({"center": v.center, "width": width, "res": v.res, "maxIter": v.max_iter})
}

fn render_dyn(cmd: &RenderDyn) -> Result<(), CliError> {
    let p = MapParams::perturbed(cmd.a, cmd.lambda)?;
    let width = cmd.view.width.unwrap_or(3.0);
    let spec = PlaneSpec::dynamical(p, cmd.view.center, width, cmd.view.res, cmd.view.max_iter);
    let grid = render_dynamical_with(&spec, cmd.view.workers)?;
    let mut params = view_params(&cmd.view, width);
    params["a"] = json!(cmd.a);
    params["lambda"] = json!(cmd.lambda);
    emit_raster("render-dyn", &grid, &cmd.view, params)
}

fn render_param(cmd: &RenderParam) -> Result<(), CliError> {
    let width = cmd.view.width.unwrap_or(1.4e-4);
    let spec = PlaneSpec::parameter(cmd.a, cmd.view.center, width, cmd.view.res, cmd.view.max_iter);
    let grid = render_parameter_with(&spec, cmd.view.workers)?;
    let mut params = view_params(&cmd.view, width);
    params["a"] = json!(cmd.a);
    emit_raster("render-param", &grid, &cmd.view, params)
}

fn classify(cmd: &Classify) -> Result<(), CliError> {
    let p = MapParams::perturbed(cmd.a, cmd.lambda)?;
    let reg = locate_regions(&p, DEFAULT_REGION_BUDGET)?;
    let fate = classify_with(cmd.z, &reg, cmd.max_iter, cmd.orbit);
    let mut out = serde_json::to_value(&fate).expect("serializable fate");
    out["label"] = json!(fate.label());
    out["provenance"] = provenance(
        "classify",
        json!({"a": cmd.a, "lambda": cmd.lambda, "z": cmd.z, "maxIter": cmd.max_iter}),
        None,
    );
    print_json(&out);
    Ok(())
}

fn find(cmd: &FindCase) -> Result<(), CliError> {
    let case: Case = cmd.case.into();
    let start = cmd.start.unwrap_or(match case {
        Case::A => REFERENCE_LAMBDAS[0],
        Case::B => REFERENCE_LAMBDAS[1],
        Case::C => REFERENCE_LAMBDAS[2],
    });
    let opts = CaseOptions {
        resolution: cmd.res,
        max_iter: cmd.max_iter,
    };
    let out = find_case(cmd.a, case, start, &opts)?;
    let found = out.report.is_some();
    let mut v = serde_json::to_value(&out).expect("serializable search");
    v["provenance"] = provenance(
        "find-case",
        json!({"a": cmd.a, "case": case, "start": start, "res": cmd.res, "maxIter": cmd.max_iter}),
        None,
    );
    print_json(&v);
    if found {
        Ok(())
    } else {
        Err(CliError::Domain(format!("no case-{case:?} parameter found within the search budget").to_lowercase()))
    }
}

fn rings(cmd: &DetectRings) -> Result<(), CliError> {
    if !(cmd.rho_max > 0.0) || cmd.radii == 0 || cmd.angles == 0 {
        return Err(CliError::Usage("detect-rings needs rho-max > 0 and a non-empty grid".into()));
    }
    let scan = detect_rings(cmd.a, cmd.rho_max, cmd.radii, cmd.angles);
    let mut v = serde_json::to_value(&scan).expect("serializable scan");
    v["provenance"] = provenance(
        "detect-rings",
        json!({"a": cmd.a, "rhoMax": cmd.rho_max, "radii": cmd.radii, "angles": cmd.angles}),
        None,
    );
    print_json(&v);
    Ok(())
}

fn verify(cmd: &Verify) -> Result<(), CliError> {
    let mut cfg = VerifyConfig {
        only: cmd.only.clone(),
        ..Default::default()
    };
    if let Some(seed) = cmd.seed {
        cfg.seed = seed;
    }
    if let Some(res) = cmd.res {
        cfg.resolution = res;
    }
    if let Some(w) = cmd.workers {
        cfg.workers = w;
    }
    let report = verify_all(&cfg);
    let ok = report.iter().all(|r| r.status != blaschke_experiments::Status::Fail);
    print_json(&json!({
        "provenance": provenance("verify", serde_json::to_value(&cfg).expect("config"), Some(cfg.seed)),
        "results": report,
        "passed": ok,
    }));
    if ok {
        Ok(())
    } else {
        Err(CliError::Domain("some acceptance criteria failed".into()))
    }
}

/// Port from `BLASCHKE_PORT` when set, else the flag.
pub fn resolve_port(flag: u16, env: Option<&str>) -> Result<u16, CliError> {
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("BLASCHKE_PORT must be a port number, got {s:?}"))),
        None => Ok(flag),
    }
}

fn serve(cmd: &Serve) -> Result<(), CliError> {
    let env = std::env::var("BLASCHKE_PORT").ok();
    let port = resolve_port(cmd.port, env.as_deref())?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Domain(e.to_string()))?;
    rt.block_on(crate::server::serve(port))
        .map_err(|e| CliError::Domain(format!("server on port {port}: {e}")))
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::RenderDyn(c) => render_dyn(c),
        Command::RenderParam(c) => render_param(c),
        Command::Classify(c) => classify(c),
        Command::FindCase(c) => find(c),
        Command::DetectRings(c) => rings(c),
        Command::Verify(c) => verify(c),
        Command::Serve(c) => serve(c),
    }
}

/// Parses `argv`, runs the command and maps the outcome to an exit code.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
