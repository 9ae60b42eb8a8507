//! Command implementations behind the `equivlab` binary: closed-form
//! tables, region sweeps, binning simulations and the self-check suite.
//! The binary itself is a thin argument parser over these functions.
//!
//! Exit codes: 0 success, 1 check failure, 2 I/O, 3 resource guard,
//! 64 usage (bad flags, grids, or input data).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::binary_analytic::{
    achieving_channel_one_sided, achieving_channels_two_sided, figure4_table, write_figure4_csv,
    BssSource,
};
use crate::binning::{run_experiment, SimAux, SimConfig, SimReport};
use crate::check;
use crate::error::{Error, Result};
use crate::infomeasures::{CondChannel, JointDist, Var, VarId};
use crate::regions::{
    sweep, write_sweep_csv, AuxSystem1, Model, OptimizeOpts, SecInsSource, SourcePair,
    SweepSource,
};

/// Map an error to the binary's exit code.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 2,
        Error::Resource(_) => 3,
        Error::Input(_) | Error::Parse(_) | Error::Constraint { .. } => 64,
    }
}

/// Source descriptor: `bss:<delta>` or a path to a serialized joint
/// distribution.
#[derive(Debug, Clone)]
pub enum SourceSpec {
    Bss(f64),
    File(PathBuf),
}

impl SourceSpec {
    pub fn parse(s: &str) -> Result<SourceSpec> {
        if let Some(delta) = s.strip_prefix("bss:") {
            let delta: f64 = delta
                .parse()
                .map_err(|_| Error::parse(format!("bad crossover in `{s}`")))?;
            BssSource::new(delta)?;
            return Ok(SourceSpec::Bss(delta));
        }
        Ok(SourceSpec::File(PathBuf::from(s)))
    }

    fn read_joint(path: &Path) -> Result<JointDist> {
        let text = fs::read(path)?;
        JointDist::read_text(&text[..])
    }

    pub fn load_pair(&self) -> Result<SourcePair> {
        match self {
            SourceSpec::Bss(delta) => SourcePair::binary_symmetric(*delta),
            SourceSpec::File(path) => SourcePair::new(Self::read_joint(path)?),
        }
    }

    /// Load a source for the secure/insecure model. A plain (X, Y) source
    /// gets constant W and Z attached; a four-variable file is validated
    /// against the Markov chain Y → X → (W, Z).
    pub fn load_secins(&self) -> Result<SecInsSource> {
        match self {
            SourceSpec::Bss(delta) => {
                SecInsSource::without_side_information(&SourcePair::binary_symmetric(*delta)?)
            }
            SourceSpec::File(path) => {
                let joint = Self::read_joint(path)?;
                if joint.vars().len() == 2 {
                    SecInsSource::without_side_information(&SourcePair::new(joint)?)
                } else {
                    SecInsSource::new(joint)
                }
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            SourceSpec::Bss(delta) => format!("bss:{delta}"),
            SourceSpec::File(path) => path.display().to_string(),
        }
    }
}

/// Parse a budget grid: `start:stop:step` (stop-inclusive within 1e-12,
/// stop > start, step > 0) or a comma-separated list of values.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parse_num = |t: &str| -> Result<f64> {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::parse(format!("bad grid number `{t}`")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(format!(
                "grid `{s}` is not of the form start:stop:step"
            )));
        }
        let (start, stop, step) = (parse_num(parts[0])?, parse_num(parts[1])?, parse_num(parts[2])?);
        if step <= 0.0 {
            return Err(Error::input(format!("grid step {step} must be positive")));
        }
        if stop <= start {
            return Err(Error::input(format!(
                "empty grid: stop {stop} does not exceed start {start}"
            )));
        }
        let mut grid = Vec::new();
        let mut k = 0u32;
        loop {
            let v = start + k as f64 * step;
            if v > stop + 1e-12 {
                break;
            }
            grid.push(v);
            k += 1;
        }
        Ok(grid)
    } else {
        s.split(',').map(parse_num).collect()
    }
}

/// Write the closed-form binary comparison table.
pub fn cmd_fig4(delta: f64, grid: &[f64], out: &Path) -> Result<()> {
    let rows = figure4_table(delta, grid)?;
    let mut buf = Vec::new();
    write_figure4_csv(&mut buf, delta, &rows)?;
    fs::write(out, buf)?;
    Ok(())
}

/// Optimize a region over a budget grid and write the CSV.
#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    model: Model,
    source: &SourceSpec,
    grid: &[f64],
    seed: u64,
    starts: usize,
    rins_budget: f64,
    out: &Path,
) -> Result<()> {
    let sweep_source = match model {
        Model::SecIns => SweepSource::SecIns(source.load_secins()?),
        _ => SweepSource::Pair(source.load_pair()?),
    };
    let opts = crate::regions::SweepOpts {
        optimize: OptimizeOpts {
            starts,
            seed,
            ..OptimizeOpts::default()
        },
        rins_budget,
    };
    let points = sweep(model, &sweep_source, grid, &opts)?;
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, model, seed, &source.descriptor(), grid, &points)?;
    fs::write(out, buf)?;
    Ok(())
}

fn sim_aux(model: Model, source: &SourceSpec, src: &SourcePair, ry: f64) -> Result<SimAux> {
    match (model, source) {
        (Model::OneSided, SourceSpec::Bss(delta)) => Ok(SimAux::OneSided(
            achieving_channel_one_sided(BssSource::new(*delta)?, ry.clamp(0.0, 1.0))?,
        )),
        (Model::TwoSided, SourceSpec::Bss(delta)) => Ok(SimAux::TwoSided(
            achieving_channels_two_sided(BssSource::new(*delta)?, ry.clamp(0.0, 1.0))?,
        )),
        (Model::OneSided, SourceSpec::File(_)) => {
            // No closed-form construction for general sources: use the
            // full-rate identity helper V := Y.
            Ok(SimAux::OneSided(AuxSystem1::new(CondChannel::identity(
                VarId::new(Var::Y, src.y_card()),
                Var::V,
            )?)?))
        }
        (Model::TwoSided, SourceSpec::File(_)) => Err(Error::input(
            "two-sided simulation needs a bss:<delta> source (the quantizer \
             construction U = X ⊕ V is binary)",
        )),
        (Model::SecIns, _) => Err(Error::input(
            "the secure/insecure model has no simulator; its region is \
             evaluated analytically (see `sweep`)",
        )),
    }
}

/// Run one simulated code and append its CSV row to `out` (creating the
/// file with a header when absent).
#[allow(clippy::too_many_arguments)]
pub fn cmd_sim(
    model: Model,
    source: &SourceSpec,
    n: usize,
    margin: f64,
    eps: f64,
    seed: u64,
    trials: usize,
    ry: f64,
    out: &Path,
) -> Result<SimReport> {
    let src = source.load_pair()?;
    let aux = sim_aux(model, source, &src, ry)?;
    let cfg = SimConfig::new(n, src, aux, margin, eps, seed, trials)?;
    let report = run_experiment(&cfg)?;
    let mut text = String::new();
    if !out.exists() {
        text.push_str(SimReport::CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&report.csv_row());
    text.push('\n');
    fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(out)?
        .write_all(text.as_bytes())?;
    Ok(report)
}

/// Run the identity suites, printing one line per result.
pub fn cmd_check(seed: u64, mut out: impl Write) -> Result<bool> {
    let report = check::run_all(seed)?;
    for r in &report.results {
        writeln!(
            out,
            "{} {} — {}",
            if r.passed { "ok  " } else { "FAIL" },
            r.name,
            r.detail
        )?;
    }
    Ok(report.all_passed())
}
