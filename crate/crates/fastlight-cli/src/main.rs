//! Command-line driver for fast-light propagation runs.
//!
//! Three subcommands cover the library surface:
//!
//! - `dispersion` sweeps the complex wavenumber over probe detuning and
//!   reports the line-center group velocity, amplitude transmission, and
//!   propagation regime.
//! - `propagate` synthesizes a Gaussian packet at a series of snapshot
//!   times, writes one CSV per snapshot plus a peak-tracking report, and
//!   compares transmitted peaks against the vacuum reference scaled by the
//!   transmission (half of it per color for two-probe runs).
//! - `oracle` solves the exact single-pump steady state against its
//!   adiabatic closed form over three decades of pump detuning and checks
//!   that the relative error shrinks with each decade.
//!
//! Units follow the library convention: the Raman linewidth is the unit of
//! frequency and the vacuum light speed is 1. Output goes to `--out`, else
//! to `$FASTLIGHT_OUT`, else to the current directory. All numeric output
//! carries 17 significant digits, so a rerun of the same build on the same
//! config is byte-identical.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numeric non-convergence,
//! 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use fastlight::config::{scheme_params, ConfigError, ConfigMap, SCHEME_KEYS};
use fastlight::csv::field;
use fastlight::dispersion::{
    classify_regime, default_sweep_grid, group_index_at, group_velocity_at, kappa, sweep,
    transmission, write_sweep_csv,
};
use fastlight::grid::linspace;
use fastlight::num_complex::Complex64;
use fastlight::steady_state::{convergence_study, write_convergence_csv, SteadyStateError};
use fastlight::wavepacket::{
    default_z_grid, locate_peak, synthesize, write_peak_csv, write_snapshot_csv, Peak, PeakRow,
    QuadratureSpec, SpectralPacket, WavepacketError, DEFAULT_SNAPSHOT_TIMES,
};
use fastlight::SchemeParams;

const OUT_ENV: &str = "FASTLIGHT_OUT";

/// Ready-made demonstration runs; `--scenario NAME` picks one.
const BUNDLED: &[(&str, &str)] = &[
    ("fig3", include_str!("../scenarios/fig3.cfg")),
    ("fig4", include_str!("../scenarios/fig4.cfg")),
    ("vacuum", include_str!("../scenarios/vacuum.cfg")),
];

#[derive(Parser)]
#[command(
    name = "fastlight",
    version,
    about = "Superluminal pulse propagation in Raman gain media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep kappa(delta); report line-center group velocity, gain, regime
    Dispersion(DispersionArgs),
    /// Synthesize packet snapshots and track transmitted peaks
    Propagate(PropagateArgs),
    /// Exact vs adiabatic steady state over three decades of pump detuning
    Oracle(OracleArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Config file; medium keys, plus packet keys for propagate
    #[arg(long, value_name = "PATH", conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Bundled scenario: fig3, fig4, or vacuum
    #[arg(long, value_name = "NAME")]
    scenario: Option<String>,
}

#[derive(Args)]
struct OutArg {
    /// Output directory (default $FASTLIGHT_OUT, else the current directory)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DispersionArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    out: OutArg,
    /// Detuning grid (default -5:5:2001)
    #[arg(long, value_name = "MIN:MAX:COUNT", value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<(f64, f64, usize)>,
}

#[derive(Args)]
struct PropagateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    out: OutArg,
    /// Quadrature node budget (default 65536)
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
    /// Spatial grid, overriding the scenario (default: five packet widths
    /// around the flight path)
    #[arg(long, value_name = "MIN:MAX:COUNT", value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<(f64, f64, usize)>,
    /// Snapshot times, overriding the scenario's list
    //
    // One comma-joined token per occurrence; a greedy multi-value arg with
    // allow_hyphen_values would swallow the following flag.
    #[arg(
        long,
        value_name = "T1,T2,...",
        value_delimiter = ',',
        num_args = 1,
        allow_hyphen_values = true
    )]
    snapshots: Option<Vec<f64>>,
    /// Add coupled/uncoupled mode magnitude columns (two-probe runs only)
    #[arg(long)]
    with_modes: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Config file with optional keys: gain, probe_amplitude
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<WavepacketError> for CliError {
    fn from(e: WavepacketError) -> Self {
        match e {
            // A bad width is a parameter problem, not a solver failure.
            WavepacketError::NonPositiveWidth(_) => CliError::Config(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<SteadyStateError> for CliError {
    fn from(e: SteadyStateError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn check_grid(min: f64, max: f64, count: usize) -> Result<(), String> {
    if !(min.is_finite() && max.is_finite()) {
        return Err("grid bounds must be finite".into());
    }
    if min >= max {
        return Err(format!("grid needs MIN < MAX, got {min} and {max}"));
    }
    if count < 2 {
        return Err(format!("grid needs at least 2 points, got {count}"));
    }
    Ok(())
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, count] = parts.as_slice() else {
        return Err("expected MIN:MAX:COUNT".into());
    };
    let min: f64 = min.trim().parse().map_err(|e| format!("bad MIN: {e}"))?;
    let max: f64 = max.trim().parse().map_err(|e| format!("bad MAX: {e}"))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|e| format!("bad COUNT: {e}"))?;
    check_grid(min, max, count)?;
    Ok((min, max, count))
}

/// A full propagation run: medium, packet, snapshot times, spatial grid.
#[derive(Debug)]
struct Scenario {
    params: SchemeParams,
    packet: SpectralPacket,
    t_snapshots: Vec<f64>,
    z_grid: Option<(f64, f64, usize)>,
}

fn scenario_keys() -> Vec<&'static str> {
    let mut keys = SCHEME_KEYS.to_vec();
    keys.extend_from_slice(&["sigma", "z0", "t_snapshots", "z_min", "z_max", "z_count"]);
    keys
}

fn validate_times(times: &[f64]) -> Result<(), CliError> {
    if times.is_empty() {
        return Err(CliError::Config("snapshot times must be nonempty".into()));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(CliError::Config(
            "snapshot times must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(
            "snapshot times must be strictly ascending".into(),
        ));
    }
    Ok(())
}

fn parse_scenario(text: &str, origin: &str) -> Result<Scenario, CliError> {
    let wrap = |e: ConfigError| CliError::Config(format!("{origin}: {e}"));
    let map = ConfigMap::parse(text).map_err(wrap)?;
    map.ensure_known(&scenario_keys()).map_err(wrap)?;
    let params = scheme_params(&map).map_err(wrap)?;
    let sigma = map
        .require("sigma")
        .and_then(|e| e.as_f64())
        .map_err(wrap)?;
    let z0 = map.require("z0").and_then(|e| e.as_f64()).map_err(wrap)?;
    if !z0.is_finite() {
        return Err(CliError::Config(format!("{origin}: z0 must be finite")));
    }
    let packet =
        SpectralPacket::new(sigma, z0).map_err(|e| CliError::Config(format!("{origin}: {e}")))?;
    let t_snapshots = match map.get("t_snapshots") {
        Some(e) => e.as_f64_list().map_err(wrap)?,
        None => DEFAULT_SNAPSHOT_TIMES.to_vec(),
    };
    validate_times(&t_snapshots)?;
    let z_grid = match (map.get("z_min"), map.get("z_max"), map.get("z_count")) {
        (None, None, None) => None,
        (Some(min), Some(max), Some(count)) => {
            let g = (
                min.as_f64().map_err(wrap)?,
                max.as_f64().map_err(wrap)?,
                count.as_usize().map_err(wrap)?,
            );
            check_grid(g.0, g.1, g.2)
                .map_err(|detail| CliError::Config(format!("{origin}: {detail}")))?;
            Some(g)
        }
        _ => {
            return Err(CliError::Config(format!(
                "{origin}: z_min, z_max, z_count must be given together"
            )))
        }
    };
    Ok(Scenario {
        params,
        packet,
        t_snapshots,
        z_grid,
    })
}

fn bundled_scenario(name: &str) -> Result<&'static str, CliError> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<&str> = BUNDLED.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!(
                "unknown bundled scenario '{name}'; available: {}",
                names.join(", ")
            ))
        })
}

/// Returns the config text plus a label for error messages.
fn load_source(src: &SourceArgs) -> Result<(String, String), CliError> {
    match (&src.config, &src.scenario) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            Ok((text, path.display().to_string()))
        }
        (None, Some(name)) => Ok((
            bundled_scenario(name)?.to_string(),
            format!("scenario {name}"),
        )),
        (None, None) => Err(CliError::Config(
            "pass --config PATH or --scenario NAME".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

impl OutArg {
    fn resolve(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }
}

fn prepare_out(out: &OutArg) -> Result<PathBuf, CliError> {
    let dir = out.resolve();
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    Ok(dir)
}

fn write_file(dir: &Path, name: &str, buf: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    std::fs::write(&path, buf).map_err(|e| io_err(&path, e))
}

fn cmd_dispersion(args: &DispersionArgs) -> Result<(), CliError> {
    let (text, origin) = load_source(&args.source)?;
    let wrap = |e: ConfigError| CliError::Config(format!("{origin}: {e}"));
    let map = ConfigMap::parse(&text).map_err(wrap)?;
    // Scenario files carry packet keys on top of the medium keys; tolerate
    // them so the same file drives both subcommands.
    map.ensure_known(&scenario_keys()).map_err(wrap)?;
    let params = scheme_params(&map).map_err(wrap)?;
    let dir = prepare_out(&args.out)?;

    let deltas = match args.grid {
        Some((min, max, count)) => linspace(min, max, count),
        None => default_sweep_grid(),
    };
    let points = sweep(&params, &deltas);
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &params, &points).expect("writing to a Vec cannot fail");
    write_file(&dir, "dispersion.csv", &buf)?;

    println!("scheme = {}", params.scheme.name());
    println!("v_g(0) = {}", field(group_velocity_at(0.0, &params)));
    println!(
        "R = {}",
        field(transmission(kappa(0.0, &params), params.cloud_length))
    );
    println!("regime = {}", classify_regime(group_index_at(0.0, &params)));
    println!("wrote {}", dir.join("dispersion.csv").display());
    Ok(())
}

fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t}.csv")
}

/// Relative floor below which the second color counts as absent; before the
/// packet reaches the cloud only numerical dust leaks into it, and locating
/// a peak in dust is noise, not physics.
const FIELD2_FLOOR: f64 = 1e-6;

fn locate_field2_peak(
    z_axis: &[f64],
    field1: &[Complex64],
    field2: &[Complex64],
) -> Result<Option<Peak>, CliError> {
    let max1 = field1.iter().map(|e| e.norm()).fold(0.0, f64::max);
    let max2 = field2.iter().map(|e| e.norm()).fold(0.0, f64::max);
    if max2 < FIELD2_FLOOR * max1 {
        return Ok(None);
    }
    Ok(Some(locate_peak(z_axis, field2)?))
}

fn report_row(row: &PeakRow, mag2: Option<f64>, two_probe: bool, vac_scale: f64, nodes: usize) {
    let t = row.t;
    if !two_probe {
        println!(
            "t = {t}: z_vacuum = {}, z_e1 = {}, advancement = {}, peak/(R*vacuum) = {} [{nodes} nodes]",
            field(row.z_peak_vacuum),
            field(row.z_peak_field1),
            field(row.advancement),
            field(row.gain_observed / vac_scale),
        );
        return;
    }
    match (row.z_peak_field2, mag2) {
        (Some(z2), Some(m2)) => println!(
            "t = {t}: z_e1 = {}, z_e2 = {}, separation = {}, peak_e1/(0.5*R*vacuum) = {}, peak_e2/(0.5*R*vacuum) = {} [{nodes} nodes]",
            field(row.z_peak_field1),
            field(z2),
            field((row.z_peak_field1 - z2).abs()),
            field(row.gain_observed / vac_scale),
            field(m2 / vac_scale),
        ),
        _ => println!(
            "t = {t}: z_e1 = {}, advancement = {}, second color below threshold [{nodes} nodes]",
            field(row.z_peak_field1),
            field(row.advancement),
        ),
    }
}

fn cmd_propagate(args: &PropagateArgs) -> Result<(), CliError> {
    let (text, origin) = load_source(&args.source)?;
    let mut scenario = parse_scenario(&text, &origin)?;
    if let Some(times) = &args.snapshots {
        validate_times(times)?;
        scenario.t_snapshots = times.clone();
    }
    if let Some(g) = args.grid {
        scenario.z_grid = Some(g);
    }
    let dir = prepare_out(&args.out)?;

    let mut quad = QuadratureSpec::default();
    if let Some(n) = args.nodes {
        quad.max_nodes = n;
        quad.initial_nodes = quad.initial_nodes.min(n);
    }

    for w in scenario.packet.fidelity_warnings() {
        eprintln!("warning: {w}");
    }

    let params = &scenario.params;
    let packet = &scenario.packet;
    let two_probe = params.scheme.is_two_probe();
    let r = transmission(kappa(0.0, params), params.cloud_length);
    // The vacuum reference is reported scaled by the line-center
    // transmission, split evenly between the colors for two-probe runs.
    let vac_scale = if two_probe { 0.5 * r } else { r };
    let t_max = *scenario.t_snapshots.last().expect("times are nonempty");
    let z_axis = match scenario.z_grid {
        Some((min, max, count)) => linspace(min, max, count),
        None => default_z_grid(packet, t_max),
    };

    println!("scheme = {}", params.scheme.name());
    println!("v_g(0) = {}", field(group_velocity_at(0.0, params)));
    println!("R = {}", field(r));
    println!(
        "z grid [{}, {}] with {} points; quadrature budget {} nodes",
        field(z_axis[0]),
        field(*z_axis.last().expect("grid is nonempty")),
        z_axis.len(),
        quad.max_nodes
    );

    let mut rows = Vec::new();
    for &t in &scenario.t_snapshots {
        let grid = synthesize(&z_axis, t, packet, params, &quad)?;
        let mut buf = Vec::new();
        write_snapshot_csv(&mut buf, &grid, params, args.with_modes, true)
            .expect("writing to a Vec cannot fail");
        write_file(&dir, &snapshot_name(t), &buf)?;

        // The vacuum envelope translates rigidly at c with unit peak
        // amplitude, so the reference needs no synthesis.
        let z_vac = packet.z0 + t;
        let peak1 = locate_peak(&grid.z_axis, &grid.field1)?;
        let peak2 = match &grid.field2 {
            Some(f2) => locate_field2_peak(&grid.z_axis, &grid.field1, f2)?,
            None => None,
        };
        let row = PeakRow {
            t,
            z_peak_vacuum: z_vac,
            z_peak_field1: peak1.z,
            z_peak_field2: peak2.as_ref().map(|p| p.z),
            advancement: peak1.z - z_vac,
            gain_observed: peak1.magnitude,
        };
        report_row(
            &row,
            peak2.as_ref().map(|p| p.magnitude),
            two_probe,
            vac_scale,
            grid.quadrature_nodes,
        );
        rows.push(row);
    }

    let mut buf = Vec::new();
    write_peak_csv(&mut buf, &rows).expect("writing to a Vec cannot fail");
    write_file(&dir, "peaks.csv", &buf)?;
    println!(
        "wrote {} snapshot file(s) and peaks.csv to {}",
        scenario.t_snapshots.len(),
        dir.display()
    );
    Ok(())
}

const ORACLE_KEYS: &[&str] = &["gain", "probe_amplitude"];
const ORACLE_DELTA0: [f64; 3] = [1e2, 1e3, 1e4];

fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let (gain, probe) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let origin = path.display().to_string();
            let wrap = |e: ConfigError| CliError::Config(format!("{origin}: {e}"));
            let map = ConfigMap::parse(&text).map_err(wrap)?;
            map.ensure_known(ORACLE_KEYS).map_err(wrap)?;
            (
                map.get_f64("gain").map_err(wrap)?.unwrap_or(1.0),
                map.get_f64("probe_amplitude")
                    .map_err(wrap)?
                    .unwrap_or(1e-3),
            )
        }
        None => (1.0, 1e-3),
    };
    if !(gain.is_finite() && gain > 0.0) {
        return Err(CliError::Config(format!(
            "gain must be positive and finite, got {gain}"
        )));
    }
    if !(probe.is_finite() && probe != 0.0) {
        return Err(CliError::Config(format!(
            "probe_amplitude must be nonzero and finite, got {probe}"
        )));
    }
    let dir = prepare_out(&args.out)?;

    let deltas = linspace(-5.0, 5.0, 21);
    let rows = convergence_study(gain, Complex64::new(probe, 0.0), &ORACLE_DELTA0, &deltas)?;

    let mut buf = Vec::new();
    write_convergence_csv(&mut buf, &rows).expect("writing to a Vec cannot fail");
    write_file(&dir, "oracle_convergence.csv", &buf)?;
    println!("wrote {}", dir.join("oracle_convergence.csv").display());

    for row in &rows {
        println!(
            "delta0 = {}: relative_error = {}, zero_probe = {}",
            field(row.delta0),
            field(row.relative_error),
            field(row.relative_error_zero_probe),
        );
    }
    for pair in rows.windows(2) {
        println!(
            "error ratio {} / {} = {}",
            field(pair[1].delta0),
            field(pair[0].delta0),
            field(pair[1].relative_error / pair[0].relative_error),
        );
        if pair[1].relative_error >= pair[0].relative_error {
            return Err(CliError::Numeric(format!(
                "relative error failed to decrease: {} at delta0 = {} vs {} at delta0 = {}",
                field(pair[1].relative_error),
                field(pair[1].delta0),
                field(pair[0].relative_error),
                field(pair[0].delta0),
            )));
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Dispersion(args) => cmd_dispersion(args),
        Command::Propagate(args) => cmd_propagate(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                // Usage mistakes are configuration errors.
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
