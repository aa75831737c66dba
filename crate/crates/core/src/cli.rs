//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 domain or
//! numerical error.

use std::ffi::OsString;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::curves::{curve_vs_circle, planar_killing_curve, spatial_killing_curve, OmegaSpec, PlanarKillingCurveKind, Polyline3};
use crate::diffgeo::{curvatures, fundamental_forms, jet, JetConfig};
use crate::error::GeomError;
use crate::export::{json_number, write_csv, write_obj, write_report_json, MeshData};
use crate::geom::{angle_between, Angle};
use crate::killing::KillingField;
use crate::surfaces::{
    catenoid, default_catenoid_domain, default_halfplane_domain, default_logspiral_domain, default_rotational_domain,
    dini_surface, halfplane, logspiral_cylinder, rotational_surface, DiniParams, Domain, ParamSurface, Profile,
};
use crate::verify::{classify_surface, surface_angle_report, surface_summary, FamilyLabel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "constant-angle", version, about = "Constant-angle curves and surfaces for Killing fields of E3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a constant-angle curve and write it as CSV.
    Curve(CurveArgs),
    /// Generate a surface and write it as an OBJ mesh.
    Surface(SurfaceCmd),
    /// Angle statistics of a surface against a Killing field.
    Verify(CheckCmd),
    /// Classify a surface into one of the constant-angle families.
    Classify(CheckCmd),
    /// Angle, curvature and classification report as JSON.
    Report(CheckCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    Circle,
    Line,
    Logspiral,
    Spatial,
    VsCircle,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CurveArgs {
    #[arg(long, value_enum)]
    kind: CurveKind,
    #[arg(long, value_parser = parse_real)]
    theta: Option<f64>,
    #[arg(long, value_parser = parse_real, default_value = "1")]
    r0: f64,
    #[arg(long, value_parser = parse_real, default_value = "0")]
    phi0: f64,
    #[arg(long, value_parser = parse_real, default_value = "0")]
    direction: f64,
    /// `constant:W`, `affine:M,N` or `arccos`.
    #[arg(long, value_parser = parse_omega, default_value = "constant:0")]
    omega: OmegaArg,
    /// Angle function of the reference circle, same grammar as `--omega`.
    #[arg(long, value_parser = parse_omega, default_value = "affine:1,0")]
    sigma: OmegaArg,
    #[arg(long, value_parser = parse_real)]
    s0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    s1: Option<f64>,
    #[arg(long, default_value_t = 1001)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Halfplane,
    Rotational,
    Catenoid,
    LogspiralCylinder,
    Dini,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Plane,
    Cone,
    Paraboloid,
    Catenoid,
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_parser = parse_real)]
    theta: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    c: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    phi0: Option<f64>,
    /// Catenoid waist radius, cone slope or paraboloid coefficient.
    #[arg(long, value_parser = parse_real)]
    scale: Option<f64>,
    #[arg(long, value_enum, default_value = "cone")]
    profile: ProfileArg,
    #[arg(long, value_parser = parse_real)]
    u0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    u1: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    v0: Option<f64>,
    #[arg(long, value_parser = parse_real)]
    v1: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SurfaceCmd {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, default_value_t = 64)]
    nu: usize,
    #[arg(long, default_value_t = 64)]
    nv: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CheckCmd {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Killing field: `dx`, `dy`, `dz`, `rotZ`, `rotX`, `rotY` or six coefficients.
    #[arg(long, default_value = "rotZ")]
    field: KillingField,
    /// Sample grid `NUxNV`.
    #[arg(long, value_parser = parse_grid, default_value = "32x32")]
    grid: (usize, usize),
    /// Use finite-difference jets even when closed forms exist.
    #[arg(long)]
    fd: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct OmegaArg(OmegaSpec);

/// Reals, plus the tokens `pi`, `pi/2`, `pi/3`, `pi/4`, `pi/6` with an
/// optional leading minus.
fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let named = match body {
        "pi" => Some(PI),
        "pi/2" => Some(PI / 2.0),
        "pi/3" => Some(PI / 3.0),
        "pi/4" => Some(PI / 4.0),
        "pi/6" => Some(PI / 6.0),
        _ => None,
    };
    let x = match named {
        Some(v) => sign * v,
        None => t.parse::<f64>().map_err(|_| format!("'{s}' is not a real number"))?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_omega(s: &str) -> Result<OmegaArg, String> {
    let (head, tail) = s.split_once(':').unwrap_or((s, ""));
    let nums = || -> Result<Vec<f64>, String> { tail.split(',').map(parse_real).collect() };
    let spec = match (head, nums()) {
        ("arccos", _) if tail.is_empty() => OmegaSpec::ArcCos,
        ("constant", Ok(v)) if v.len() == 1 => OmegaSpec::Constant(v[0]),
        ("affine", Ok(v)) if v.len() == 2 => OmegaSpec::Affine { m: v[0], n: v[1] },
        _ => return Err(format!("'{s}' is not one of constant:W, affine:M,N, arccos")),
    };
    Ok(OmegaArg(spec))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("'{s}' is not a grid of the form NUxNV");
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

enum CliError {
    Usage(String),
    Geom(GeomError),
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Geom(GeomError::Io(_)) => EXIT_IO,
            CliError::Geom(_) => EXIT_DOMAIN,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Geom(e) => write!(f, "error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Curve(a) => run_curve(&a),
        Command::Surface(a) => run_surface(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Classify(a) => run_classify(&a),
        Command::Report(a) => run_report(&a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}

fn theta_in_band(theta: Option<f64>) -> CliResult<Option<Angle>> {
    match theta {
        None => Ok(None),
        Some(t) if (0.0..=FRAC_PI_2).contains(&t) => Ok(Some(Angle::new(t)?)),
        Some(t) => Err(CliError::Usage(format!("--theta {t} outside [0, pi/2]"))),
    }
}

fn require<T>(value: Option<T>, flag: &str, what: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{what} requires {flag}")))
}

fn run_curve(a: &CurveArgs) -> CliResult<()> {
    let theta = theta_in_band(a.theta)?;
    let range = |lo: f64, hi: f64| (a.s0.unwrap_or(lo), a.s1.unwrap_or(hi));
    let curve: Polyline3 = match a.kind {
        CurveKind::Circle => {
            let (s0, s1) = range(0.0, 2.0 * PI * a.r0);
            planar_killing_curve(PlanarKillingCurveKind::Circle { r0: a.r0 }, s0, s1, a.n)?
        }
        CurveKind::Line => {
            let (s0, s1) = range(0.1, 2.0);
            planar_killing_curve(PlanarKillingCurveKind::Line { direction: a.direction }, s0, s1, a.n)?
        }
        CurveKind::Logspiral => {
            let theta = require(theta, "--theta", "a logarithmic spiral")?;
            let (s0, s1) = range(0.1, 5.0);
            planar_killing_curve(PlanarKillingCurveKind::LogSpiral { theta, phi0: a.phi0 }, s0, s1, a.n)?
        }
        CurveKind::Spatial => {
            let theta = require(theta, "--theta", "a spatial curve")?;
            let (s0, s1) = range(0.0, 2.0 * PI);
            spatial_killing_curve(&a.omega.0, theta, a.r0, s0, s1, a.n)?
        }
        CurveKind::VsCircle => {
            let theta = require(theta, "--theta", "a curve against the circle")?;
            let (s0, s1) = range(0.0, 2.0 * PI);
            let sigma = a.sigma.0.clone();
            curve_vs_circle(move |s| sigma.eval(s), theta, s0, s1, a.n)?
        }
    };
    write_csv(&curve, &a.out)?;
    Ok(())
}

fn build_surface(a: &SurfaceArgs) -> CliResult<ParamSurface> {
    let theta = theta_in_band(a.theta)?.map(Angle::radians);
    let domain = |d: Domain| {
        Domain::new(a.u0.unwrap_or(d.u0), a.u1.unwrap_or(d.u1), a.v0.unwrap_or(d.v0), a.v1.unwrap_or(d.v1))
    };
    Ok(match a.family {
        FamilyArg::Halfplane => halfplane(a.phi0.unwrap_or(0.0), domain(default_halfplane_domain()))?,
        FamilyArg::Rotational => {
            let k = a.scale.unwrap_or(1.0);
            let (profile, d) = match a.profile {
                ProfileArg::Plane => (Profile::plane(), default_rotational_domain()),
                ProfileArg::Cone => (Profile::cone(k), default_rotational_domain()),
                ProfileArg::Paraboloid => (Profile::paraboloid(k), default_rotational_domain()),
                ProfileArg::Catenoid => (Profile::catenoid(k), Domain::new(1.1 * k, 3.0 * k, 0.0, 2.0 * PI)),
            };
            rotational_surface(profile, domain(d))?
        }
        FamilyArg::Catenoid => {
            let k = a.scale.unwrap_or(1.0);
            catenoid(k, domain(default_catenoid_domain(k)))?
        }
        FamilyArg::LogspiralCylinder => {
            let theta = require(theta, "--theta", "logspiral-cylinder")?;
            logspiral_cylinder(theta, a.c.unwrap_or(1.0), domain(default_logspiral_domain()))?
        }
        FamilyArg::Dini => {
            let theta = require(theta, "--theta", "dini")?;
            let c = require(a.c, "--c", "dini")?;
            let params = DiniParams::new(theta, c)?;
            dini_surface(theta, c, domain(params.default_domain()))?
        }
    })
}

fn run_surface(a: &SurfaceCmd) -> CliResult<()> {
    if a.nu < 2 || a.nv < 2 {
        return Err(CliError::Usage(format!("mesh grid {}x{} needs at least 2x2 vertices", a.nu, a.nv)));
    }
    let s = build_surface(&a.surface)?;
    let d = s.domain();
    let params: Vec<(f64, f64)> = d
        .u_nodes(a.nu)
        .into_iter()
        .flat_map(|u| d.v_nodes(a.nv).into_iter().map(move |v| (u, v)))
        .collect();
    let cfg = JetConfig::default();
    let field = KillingField::rot_z();
    let (mut k, mut h, mut ang) = (Vec::new(), Vec::new(), Vec::new());
    for &(u, v) in &params {
        // vertices where the jet is unavailable get NaN channels
        let forms = jet(&s, u, v, &cfg).and_then(|j| fundamental_forms(&j));
        let curv = forms.as_ref().ok().and_then(|f| curvatures(f).ok());
        k.push(curv.map_or(f64::NAN, |c| c.gaussian));
        h.push(curv.map_or(f64::NAN, |c| c.mean));
        let angle = forms
            .ok()
            .and_then(|f| angle_between(field.eval(s.point(u, v)), f.normal).ok())
            .map_or(f64::NAN, |x| x.folded().radians());
        ang.push(angle);
    }
    let mesh = MeshData::grid(s.grid_points(a.nu, a.nv), a.nu, a.nv)?
        .with_channel("K", k)?
        .with_channel("H", h)?
        .with_channel("angle", ang)?;
    write_obj(&mesh, &a.out)?;
    Ok(())
}

fn jet_config(a: &CheckCmd) -> JetConfig {
    if a.fd {
        JetConfig::finite_difference()
    } else {
        JetConfig::default()
    }
}

fn emit(a: &CheckCmd, json: Option<&Map<String, Value>>, text: &str) -> CliResult<()> {
    match (json, &a.out) {
        (Some(m), out) => write_report_json(m, out.as_deref())?,
        (None, Some(p)) => std::fs::write(p, text).map_err(GeomError::from)?,
        (None, None) => print!("{text}"),
    }
    Ok(())
}

fn run_verify(a: &CheckCmd) -> CliResult<()> {
    let s = build_surface(&a.surface)?;
    let (nu, nv) = a.grid;
    let r = surface_angle_report(&s, &a.field, nu, nv, &jet_config(a))?;
    let mut m = Map::new();
    m.insert("samples".into(), Value::from(r.samples));
    m.insert("theta_mean".into(), json_number(r.theta_mean.radians()));
    m.insert("theta_max_dev".into(), json_number(r.theta_max_dev));
    m.insert("theta_min".into(), json_number(r.theta_min));
    m.insert("theta_max".into(), json_number(r.theta_max));
    m.insert("fold_applied".into(), Value::from(r.fold_applied));
    let text = format!(
        "samples {}\ntheta_mean {:.16e}\ntheta_max_dev {:.16e}\n",
        r.samples,
        r.theta_mean.radians(),
        r.theta_max_dev
    );
    emit(a, a.json.then_some(&m), &text)
}

fn label_fields(label: &FamilyLabel) -> (Value, Value) {
    let theta = match *label {
        FamilyLabel::Halfplane => json_number(0.0),
        FamilyLabel::Rotational => json_number(FRAC_PI_2),
        FamilyLabel::LogSpiralCylinder { theta, .. } | FamilyLabel::Dini { theta, .. } => json_number(theta),
        _ => Value::Null,
    };
    (theta, label.c_hat().map_or(Value::Null, json_number))
}

fn run_classify(a: &CheckCmd) -> CliResult<()> {
    let s = build_surface(&a.surface)?;
    let (nu, nv) = a.grid;
    let label = classify_surface(&s, &a.field, nu, nv, &jet_config(a))?;
    let (theta, c) = label_fields(&label);
    let mut m = Map::new();
    m.insert("family".into(), Value::from(label.name()));
    m.insert("theta_hat".into(), theta.clone());
    m.insert("c_hat".into(), c.clone());
    let text = format!("{} theta_hat={} c_hat={}\n", label.name(), theta, c);
    emit(a, a.json.then_some(&m), &text)
}

fn run_report(a: &CheckCmd) -> CliResult<()> {
    let s = build_surface(&a.surface)?;
    let (nu, nv) = a.grid;
    let sum = surface_summary(&s, &a.field, nu, nv, &jet_config(a))?;
    let mut m = Map::new();
    m.insert("theta_mean_rad".into(), json_number(sum.angle.theta_mean.radians()));
    m.insert("theta_max_dev_rad".into(), json_number(sum.angle.theta_max_dev));
    m.insert("K_mean".into(), json_number(sum.k_mean));
    m.insert("K_stddev".into(), json_number(sum.k_stddev));
    m.insert("H_mean".into(), json_number(sum.h_mean));
    m.insert("family".into(), Value::from(sum.label.name()));
    m.insert("c_hat".into(), sum.label.c_hat().map_or(Value::Null, json_number));
    m.insert("grid_nu".into(), Value::from(nu));
    m.insert("grid_nv".into(), Value::from(nv));
    // echo of the inputs
    let sa = &a.surface;
    for (name, value) in [
        ("theta", sa.theta),
        ("c", sa.c),
        ("phi0", sa.phi0),
        ("scale", sa.scale),
        ("u0", sa.u0),
        ("u1", sa.u1),
        ("v0", sa.v0),
        ("v1", sa.v1),
    ] {
        if let Some(x) = value {
            m.insert(format!("arg_{name}"), json_number(x));
        }
    }
    m.insert("arg_field".into(), Value::from(a.field.to_string()));
    m.insert("arg_fd".into(), Value::from(a.fd));
    emit(a, Some(&m), "")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn real_tokens() {
        assert_eq!(parse_real("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_real("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_real("1.0471975512").unwrap(), 1.0471975512);
        assert!(parse_real("pi/5").is_err());
        assert!(parse_real("inf").is_err());
    }

    #[test]
    fn omega_and_grid_tokens() {
        assert!(matches!(parse_omega("affine:0.5,pi/4").unwrap().0, OmegaSpec::Affine { m, .. } if m == 0.5));
        assert!(matches!(parse_omega("arccos").unwrap().0, OmegaSpec::ArcCos));
        assert!(parse_omega("affine:1").is_err());
        assert_eq!(parse_grid("32x16").unwrap(), (32, 16));
        assert!(parse_grid("32").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["constant-angle", "bogus"]), EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("d.obj");
        let out = out.to_str().unwrap();
        let args = ["constant-angle", "surface", "--family", "dini", "--theta", "1.6", "--c", "1", "--out", out];
        assert_eq!(run(args), EXIT_USAGE);
        let args = ["constant-angle", "surface", "--family", "dini", "--theta", "1", "--out", out];
        assert_eq!(run(args), EXIT_USAGE);
    }

    #[test]
    fn domain_errors_exit_three() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("d.obj");
        let args = ["constant-angle", "surface", "--family", "dini", "--theta", "1", "--c", "-1", "--out"];
        assert_eq!(run(args.iter().copied().chain([out.to_str().unwrap()])), EXIT_DOMAIN);
    }

    #[test]
    fn io_errors_exit_one() {
        let args = ["constant-angle", "curve", "--kind", "circle", "--out", "/nonexistent-dir/x.csv"];
        assert_eq!(run(args), EXIT_IO);
    }
}
