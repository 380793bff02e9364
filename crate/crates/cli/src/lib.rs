//! Command-line front end: parses arguments, runs the pipeline and writes
//! CSV/JSON artifacts.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use skewmst::harmonics::ripple_metrics;
use skewmst::io::{
    fmt_f64, parse_config_with, spectrum_rows, write_field_csv, write_spectrum_csv,
    write_summary_json, ParseOptions, RunConfig,
};
use skewmst::mst::axial_force_estimate;
use skewmst::pipeline::{
    base_field, compare, evaluate, reference_config, skewed_field, tooth_force_spectrum,
    tooth_forces, torque_report, Evaluated,
};
use skewmst::skew::{discrete_skew_factor, harmonic_orders, optimal_skew_angle, skew_factor};
use skewmst::{FieldComponent, ToothForceSeries};

/// Default output directory when neither `--out-dir` nor the config sets one.
pub const OUT_DIR_ENV: &str = "SKEWMST_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "skewmst", version, about = "Skew, torque-ripple and tooth-force analysis of PMSM air-gap fields")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Print progress to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Run configuration file.
    config: PathBuf,

    /// Override a config value, e.g. `--set skew.segments=5`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,

    /// Output directory; falls back to evaluation.output_dir, then $SKEWMST_OUT_DIR, then `.`.
    #[arg(short, long)]
    out_dir: Option<PathBuf>,

    /// Check that referenced input files exist before running.
    #[arg(long)]
    eager: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the optimal skew angle, slot-harmonic orders and skew factors.
    SkewTable {
        #[arg(long)]
        poles: i64,
        #[arg(long)]
        slots: i64,
        /// Highest slot-harmonic generator g.
        #[arg(long, default_value_t = 2)]
        gmax: u32,
        /// Segment counts for discrete skew-factor columns.
        #[arg(long, value_delimiter = ',', default_values_t = [3u32])]
        segments: Vec<u32>,
        /// Skew angle in degrees (default: optimal angle).
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Write the (sliced) synthetic field map as CSV.
    Synth(RunArgs),
    /// Torque series, spectrum and peak-to-peak.
    Torque(RunArgs),
    /// Per-tooth force series.
    ToothForces(RunArgs),
    /// Space-time spectrum of tooth forces.
    Spectrum2d {
        #[command(flatten)]
        run: RunArgs,
        /// Transform an air-gap field component of slice 0 instead of tooth forces.
        #[arg(long, value_name = "COMPONENT")]
        field: Option<String>,
    },
    /// Axial force estimate from torque, rotor diameter and skew angle.
    AxialForce {
        /// Torque, N·m.
        #[arg(long)]
        torque: f64,
        /// Rotor diameter, m.
        #[arg(long)]
        diameter: f64,
        /// Skew angle, degrees.
        #[arg(long)]
        theta: f64,
    },
    /// Suppression ratios of a skewed run against a reference run.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Reference config; default is the same config without skew.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DATA;
        }
    };
    let verbose = cli.verbose;
    match pool.install(|| dispatch(cli.command, verbose)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DATA
        }
    }
}

type CliResult<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

fn load(path: &Path, run: &RunArgs) -> CliResult<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let opts = ParseOptions {
        base_dir: path.parent().map(Path::to_path_buf),
        eager: run.eager,
        overrides: run.overrides.clone(),
    };
    parse_config_with(&text, &opts).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn out_dir(run: &RunArgs, cfg: &RunConfig) -> CliResult<PathBuf> {
    let dir = run
        .out_dir
        .clone()
        .or_else(|| cfg.evaluation.output_dir.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    Ok(dir)
}

fn create(dir: &Path, name: &str) -> CliResult<std::io::BufWriter<fs::File>> {
    let path = dir.join(name);
    let f = fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(std::io::BufWriter::new(f))
}

fn write_text(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    let mut f = create(dir, name)?;
    f.write_all(text.as_bytes())?;
    f.flush()?;
    Ok(())
}

fn note(verbose: u8, msg: impl AsRef<str>) {
    if verbose > 0 {
        eprintln!("{}", msg.as_ref());
    }
}

fn dispatch(command: Command, verbose: u8) -> CliResult<()> {
    match command {
        Command::SkewTable {
            poles,
            slots,
            gmax,
            segments,
            theta,
        } => skew_table(poles, slots, gmax, &segments, theta),
        Command::Synth(run) => {
            let cfg = load(&run.config, &run)?;
            let dir = out_dir(&run, &cfg)?;
            let base = base_field(&cfg)?;
            let (field, _) = skewed_field(&cfg, &base, &cfg.skew)?;
            let bytes = write_field_csv(&field, create(&dir, "field_map.csv")?)?;
            note(verbose, format!("wrote {bytes} bytes to {}", dir.join("field_map.csv").display()));
            Ok(())
        }
        Command::Torque(run) => {
            let cfg = load(&run.config, &run)?;
            let dir = out_dir(&run, &cfg)?;
            let eval = evaluate(&cfg)?;
            write_text(&dir, "torque.csv", &torque_csv(&[("torque", &eval)]))?;
            write_text(&dir, "torque_spectrum.csv", &spectrum_csv(&[("amplitude", &eval)]))?;
            write_summary_json(&torque_report(&cfg, &eval), create(&dir, "torque_summary.json")?)?;
            let metrics = ripple_metrics(&eval.torque)?;
            println!("mean torque    {} N·m", fmt_f64(metrics.mean));
            println!("peak-to-peak   {} N·m", fmt_f64(metrics.peak_to_peak));
            note(verbose, format!("artifacts in {}", dir.display()));
            Ok(())
        }
        Command::ToothForces(run) => {
            let cfg = load(&run.config, &run)?;
            let dir = out_dir(&run, &cfg)?;
            let base = base_field(&cfg)?;
            let (field, _) = skewed_field(&cfg, &base, &cfg.skew)?;
            let forces = tooth_forces(&cfg, &field)?;
            write_text(&dir, "tooth_forces.csv", &tooth_csv(&forces))?;
            note(verbose, format!("artifacts in {}", dir.display()));
            Ok(())
        }
        Command::Spectrum2d { run, field } => {
            let cfg = load(&run.config, &run)?;
            let dir = out_dir(&run, &cfg)?;
            let base = base_field(&cfg)?;
            let (map, _) = skewed_field(&cfg, &base, &cfg.skew)?;
            let (spectrum, name) = match field {
                Some(c) => {
                    let comp: FieldComponent = c.parse()?;
                    (
                        skewmst::harmonics::field_spectrum(&map, 0, comp),
                        format!("field_spectrum_{}.csv", comp.as_str()),
                    )
                }
                None => {
                    let forces = tooth_forces(&cfg, &map)?;
                    let comp = cfg.evaluation.spectrum_component;
                    (
                        tooth_force_spectrum(&cfg, &forces),
                        format!("tooth_force_spectrum_{}.csv", comp.as_str()),
                    )
                }
            };
            write_spectrum_csv(&spectrum_rows(&spectrum), create(&dir, &name)?)?;
            note(verbose, format!("wrote {}", dir.join(name).display()));
            Ok(())
        }
        Command::AxialForce {
            torque,
            diameter,
            theta,
        } => {
            let f = axial_force_estimate(torque, diameter, theta.to_radians())?;
            println!("{}", fmt_f64(f));
            Ok(())
        }
        Command::Compare { run, reference } => {
            let cfg = load(&run.config, &run)?;
            let dir = out_dir(&run, &cfg)?;
            let (ref_cfg, ref_eval) = match reference {
                Some(path) => {
                    let rc = load(&path, &run)?;
                    let e = evaluate(&rc)?;
                    (rc, e)
                }
                None => {
                    let rc = reference_config(&cfg);
                    let e = evaluate(&rc)?;
                    (rc, e)
                }
            };
            let eval = evaluate(&cfg)?;
            let summary = compare(&ref_cfg, &ref_eval, &cfg, &eval)?;
            write_text(
                &dir,
                "compare_torque.csv",
                &torque_csv(&[("reference", &ref_eval), ("skewed", &eval)]),
            )?;
            write_text(
                &dir,
                "compare_spectrum.csv",
                &spectrum_csv(&[("reference", &ref_eval), ("skewed", &eval)]),
            )?;
            write_summary_json(&summary, create(&dir, "compare_summary.json")?)?;
            for (order, ratio) in &summary.suppression_ratio {
                let shown = ratio.map(fmt_f64).unwrap_or_else(|| "undefined".into());
                println!("suppression_ratio.{order} = {shown}");
            }
            note(verbose, format!("artifacts in {}", dir.display()));
            Ok(())
        }
    }
}

fn trim_float(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

fn skew_table(poles: i64, slots: i64, gmax: u32, segments: &[u32], theta_deg: Option<f64>) -> CliResult<()> {
    let optimal = optimal_skew_angle(poles, slots)?;
    let theta = theta_deg.map(f64::to_radians).unwrap_or(optimal);
    let orders = harmonic_orders(poles, slots, gmax)?;
    let mut out = String::new();
    writeln!(out, "# poles = {poles}, slots = {slots}")?;
    writeln!(
        out,
        "# optimal theta_skew = {} deg ({} rad)",
        trim_float(optimal.to_degrees()),
        fmt_f64(optimal)
    )?;
    writeln!(out, "# theta_skew = {} deg ({} rad)", trim_float(theta.to_degrees()), fmt_f64(theta))?;
    writeln!(out, "# orders = {orders}")?;
    let mut header = String::from("g,nu,kappa");
    for q in segments {
        write!(header, ",kappa_q{q}")?;
    }
    writeln!(out, "{header}")?;
    for h in &orders.entries {
        let nu = h.as_f64();
        write!(out, "{},{},{}", h.generator, h.order, fmt_f64(skew_factor(theta, nu)))?;
        for &q in segments {
            write!(out, ",{}", fmt_f64(discrete_skew_factor(theta, q, nu)?))?;
        }
        writeln!(out)?;
    }
    print!("{out}");
    Ok(())
}

fn torque_csv(runs: &[(&str, &Evaluated)]) -> String {
    let mut out = String::from("itime,rotor_angle");
    for (name, _) in runs {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    let first = &runs[0].1.torque;
    for (i, angle) in first.rotor_angles.iter().enumerate() {
        write!(out, "{i},{}", fmt_f64(*angle)).unwrap();
        for (_, e) in runs {
            write!(out, ",{}", fmt_f64(e.torque.values[i])).unwrap();
        }
        out.push('\n');
    }
    out
}

fn spectrum_csv(runs: &[(&str, &Evaluated)]) -> String {
    let mut out = String::from("electrical_order,mechanical_order");
    for (name, _) in runs {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    let first = &runs[0].1.spectrum;
    for k in 0..=first.max_order() {
        write!(out, "{k},{}", first.mechanical_order(k)).unwrap();
        for (_, e) in runs {
            write!(out, ",{}", fmt_f64(e.spectrum.amplitudes[k])).unwrap();
        }
        out.push('\n');
    }
    out
}

fn tooth_csv(forces: &ToothForceSeries) -> String {
    let mut out = String::from("slice,itime,tooth,Fr,Ftheta,Fz\n");
    let mut rows = |label: &str, f: &skewmst::ForceComponents| {
        for t in 0..f.time_samples() {
            for k in 0..f.tooth_count() {
                writeln!(
                    out,
                    "{label},{t},{k},{},{},{}",
                    fmt_f64(f.radial[[k, t]]),
                    fmt_f64(f.tangential[[k, t]]),
                    fmt_f64(f.axial[[k, t]])
                )
                .unwrap();
            }
        }
    };
    for (s, f) in forces.per_slice.iter().enumerate() {
        rows(&s.to_string(), f);
    }
    rows("total", &forces.total);
    out
}
