use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use log::info;
use serde::Serialize;
use sha2::{Digest, Sha256};

use ifreq::analytic;
use ifreq::equivalence::{self, RelationId, Tolerances};
use ifreq::geometric;
use ifreq::series::RealSeries;
use ifreq::signal_model::{self, SignalSpec, ThreePhaseSignal};
use ifreq::space_vector::{self, RotatingFrame};

use crate::{AnalyzeArgs, CompareArgs, GenerateArgs, GridArgs, InputArgs, EXIT_OK, EXIT_VIOLATED};

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[derive(Debug, Clone, Copy)]
struct Formats {
    csv: bool,
    json: bool,
}

fn parse_formats(list: &str) -> Result<Formats> {
    let mut f = Formats {
        csv: false,
        json: false,
    };
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "csv" => f.csv = true,
            "json" => f.json = true,
            other => bail!("unknown output format `{other}` (expected csv, json)"),
        }
    }
    if !(f.csv || f.json) {
        bail!("no output format selected");
    }
    Ok(f)
}

pub fn parse_frame(text: &str) -> Result<RotatingFrame> {
    let (kind, params) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("frame `{text}` must look like kind:params"))?;
    let values: Vec<f64> = params
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("frame parameter `{p}`"))
        })
        .collect::<Result<_>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        bail!("frame parameters must be finite");
    }
    match (kind, values.as_slice()) {
        ("angle", [a]) => Ok(RotatingFrame::Constant { angle: *a }),
        ("constant", [w]) => Ok(RotatingFrame::Ramp {
            omega: *w,
            offset: 0.0,
        }),
        ("ramp", [w, d]) => Ok(RotatingFrame::Ramp {
            omega: *w,
            offset: *d,
        }),
        _ => {
            bail!("unsupported frame `{text}` (angle:<rad>, constant:<rad/s>, ramp:<rad/s>,<rad>)")
        }
    }
}

fn read_spec(path: &Path) -> Result<(SignalSpec, String)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: SignalSpec = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing spec {}", path.display()))?;
    spec.validate()?;
    Ok((spec, digest("spec", path, &bytes)))
}

/// File name plus content hash, so provenance does not depend on where the
/// input lives.
fn digest(kind: &str, path: &Path, bytes: &[u8]) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    format!(
        "{kind} {name} sha256:{}",
        hex::encode(Sha256::digest(bytes))
    )
}

fn grid_len(grid: &GridArgs) -> Result<(f64, usize)> {
    if !(grid.sample_rate.is_finite() && grid.sample_rate > 0.0) {
        bail!("sample rate must be positive");
    }
    if !(grid.duration.is_finite() && grid.duration > 0.0) {
        bail!("duration must be positive");
    }
    let n = (grid.duration * grid.sample_rate).round() as usize;
    Ok((1.0 / grid.sample_rate, n))
}

struct Loaded {
    signal: ThreePhaseSignal,
    spec: Option<SignalSpec>,
    provenance: String,
}

fn load(input: &InputArgs) -> Result<Loaded> {
    match (&input.input, &input.spec) {
        (Some(path), None) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let signal = signal_model::read_trace(bytes.as_slice())
                .with_context(|| format!("reading trace {}", path.display()))?;
            Ok(Loaded {
                signal,
                spec: None,
                provenance: digest("trace", path, &bytes),
            })
        }
        (None, Some(path)) => {
            let (spec, provenance) = read_spec(path)?;
            let (dt, n) = grid_len(&input.grid)?;
            let signal = signal_model::generate(&spec, input.grid.t0, dt, n)?;
            Ok(Loaded {
                signal,
                spec: Some(spec),
                provenance,
            })
        }
        _ => bail!("exactly one of --input and --spec is required"),
    }
}

/// Nominal angular frequency: flag, then spec, then the median rotation
/// rate of the trajectory.
fn nominal_omega(input: &InputArgs, loaded: &Loaded) -> Result<f64> {
    if let Some(w) = input.omega_o {
        if !(w.is_finite() && w > 0.0) {
            bail!("--omega-o must be positive");
        }
        return Ok(w);
    }
    if let Some(spec) = &loaded.spec {
        return Ok(spec.omega_o);
    }
    let geo = geometric::geometric_frequency(&loaded.signal)?;
    let w = geo
        .median_omega()
        .filter(|w| *w > 0.0)
        .ok_or_else(|| anyhow!("cannot estimate the nominal frequency; pass --omega-o"))?;
    info!("estimated omega_o = {w} rad/s from the trace");
    Ok(w)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct TraceSidecar<'a> {
    spec: &'a SignalSpec,
    t0: f64,
    dt: f64,
    n_samples: usize,
    sample_rate: f64,
}

pub fn generate(args: &GenerateArgs) -> Result<u8> {
    let (spec, _) = read_spec(&args.spec)?;
    let (dt, n) = grid_len(&args.grid)?;
    let signal = signal_model::generate(&spec, args.grid.t0, dt, n)?;
    fs::create_dir_all(&args.out_dir)?;
    let mut csv = Vec::new();
    signal_model::write_trace(&signal, &mut csv)?;
    fs::write(args.out_dir.join("trace.csv"), csv)?;
    let sidecar = TraceSidecar {
        spec: &spec,
        t0: args.grid.t0,
        dt,
        n_samples: n,
        sample_rate: args.grid.sample_rate,
    };
    write(
        &args.out_dir.join("trace.json"),
        &serde_json::to_string_pretty(&sidecar)?,
    )?;
    info!("wrote {n} samples to {}", args.out_dir.display());
    Ok(EXIT_OK)
}

#[derive(Serialize, Default)]
struct ColumnStats {
    mean: Option<f64>,
    median: Option<f64>,
    min: Option<f64>,
    max: Option<f64>,
}

fn stats(values: &[Option<f64>], range: std::ops::Range<usize>) -> ColumnStats {
    let mut v: Vec<f64> = values[range].iter().flatten().copied().collect();
    if v.is_empty() {
        return ColumnStats::default();
    }
    v.sort_by(f64::total_cmp);
    ColumnStats {
        mean: Some(v.iter().sum::<f64>() / v.len() as f64),
        median: Some(v[v.len() / 2]),
        min: v.first().copied(),
        max: v.last().copied(),
    }
}

#[derive(Serialize)]
struct AnalysisSummary {
    provenance: String,
    n_samples: usize,
    t0: f64,
    dt: f64,
    frame: String,
    omega_o: f64,
    edge_margin: usize,
    zero_sequence_energy: f64,
    torsion_metric_max: Option<f64>,
    rho_h: ColumnStats,
    omega_h: ColumnStats,
    rho_m: ColumnStats,
    omega_m: ColumnStats,
    rho_geom: ColumnStats,
    omega_biv: ColumnStats,
    torsion: ColumnStats,
}

fn defined(s: &RealSeries) -> Vec<Option<f64>> {
    s.values().iter().map(|&v| Some(v)).collect()
}

pub fn analyze(args: &AnalyzeArgs) -> Result<u8> {
    let input = &args.input;
    let formats = parse_formats(&input.format)?;
    let frame = parse_frame(&input.frame)?;
    let loaded = load(input)?;
    let omega_o = nominal_omega(input, &loaded)?;
    let sig = &loaded.signal;

    let hahn = analytic::channel_icf(&sig.channel(0))?;
    let milano = space_vector::planar_frequency(sig, &frame)?;
    let geo = geometric::geometric_frequency(sig)?;
    let metric = geometric::torsion_metric(sig, &geo, Some(std::f64::consts::TAU / omega_o))?;

    let margin = hahn
        .edge_margin
        .max(milano.frequency.edge_margin)
        .max(geo.edge_margin);
    let n = sig.len();
    let range = if 2 * margin >= n {
        0..0
    } else {
        margin..n - margin
    };

    let columns = [
        defined(&hahn.rho()),
        defined(&hahn.omega()),
        defined(&milano.frequency.rho()),
        defined(&milano.frequency.omega()),
        geo.rho.clone(),
        geo.omega_biv.clone(),
        geo.torsion.clone(),
    ];

    fs::create_dir_all(&input.out_dir)?;
    if formats.csv {
        let mut out =
            String::from("t,edge,rho_h,omega_h,rho_m,omega_m,rho_geom,omega_biv,torsion\n");
        for j in 0..n {
            let _ = write!(
                out,
                "{},{}",
                num(sig.time(j)),
                u8::from(!range.contains(&j))
            );
            for col in &columns {
                let _ = write!(out, ",{}", opt_num(col[j]));
            }
            out.push('\n');
        }
        write(&input.out_dir.join("analysis.csv"), &out)?;
    }
    if formats.json {
        let [rho_h, omega_h, rho_m, omega_m, rho_geom, omega_biv, torsion] =
            columns.map(|c| stats(&c, range.clone()));
        let summary = AnalysisSummary {
            provenance: loaded.provenance.clone(),
            n_samples: n,
            t0: sig.t0(),
            dt: sig.dt(),
            frame: frame.describe(),
            omega_o,
            edge_margin: margin,
            zero_sequence_energy: space_vector::zero_sequence_energy_ratio(sig),
            torsion_metric_max: metric.max_interior,
            rho_h,
            omega_h,
            rho_m,
            omega_m,
            rho_geom,
            omega_biv,
            torsion,
        };
        write(
            &input.out_dir.join("analysis.json"),
            &serde_json::to_string_pretty(&summary)?,
        )?;
    }
    Ok(EXIT_OK)
}

pub fn compare(args: &CompareArgs) -> Result<u8> {
    let input = &args.input;
    let formats = parse_formats(&input.format)?;
    let frame = parse_frame(&input.frame)?;
    let relations = RelationId::parse_list(&args.relations).map_err(|e| anyhow!(e))?;
    let loaded = load(input)?;
    let omega_o = nominal_omega(input, &loaded)?;

    let mut tol = Tolerances::for_nominal(omega_o);
    if let Some(t) = args.tol_icf {
        tol.icf = t;
    }
    if let Some(t) = args.tol_icp {
        tol.icp = t;
    }
    if !(tol.icf > 0.0 && tol.icp > 0.0) {
        bail!("tolerances must be positive");
    }

    let reports: Vec<_> = equivalence::run_checks(&loaded.signal, &frame, &tol, &relations)?
        .into_iter()
        .map(|r| r.with_provenance(loaded.provenance.clone()))
        .collect();

    fs::create_dir_all(&input.out_dir)?;
    let text = equivalence::render_text(&reports);
    print!("{text}");
    write(&input.out_dir.join("report.txt"), &text)?;
    if formats.json {
        write(
            &input.out_dir.join("report.json"),
            &serde_json::to_string_pretty(&reports)?,
        )?;
    }
    if formats.csv {
        let sig = &loaded.signal;
        let mut out = String::from("t");
        for r in &reports {
            for c in &r.conditions {
                let _ = write!(out, ",{}.{}", r.relation, c.name);
            }
        }
        out.push('\n');
        for j in 0..sig.len() {
            out.push_str(&num(sig.time(j)));
            for r in &reports {
                for c in &r.conditions {
                    let _ = write!(out, ",{}", opt_num(c.residual[j]));
                }
            }
            out.push('\n');
        }
        write(&input.out_dir.join("residuals.csv"), &out)?;
    }

    Ok(if reports.iter().all(|r| r.holds()) {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    })
}
