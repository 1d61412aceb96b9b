//! The `octant` command line: argument model, subcommands and exit codes.
//!
//! Exit codes: 0 success, 2 invalid input or topology, 3 unsupported kink
//! sign pattern (spelling), 4 unsupported class (construct, sweep), 5 an
//! invariant check of a constructed map failed.

use crate::error::Error;
use crate::free_group::{optimal_pairing, spelling_length, Word};
use crate::homotopy::{
    classify, delta_invariant, infimum_energy, prism_bounds, spelling_lower_bound_check, ClassInput, Kind,
    OctantTopology, WrappingNumbers,
};
use crate::maps::{
    assemble_patchwork, construct, select_case, verify_spec, Patchwork, PatchworkSpec, RationalMapSpec,
    Representative, SampledMap,
};
use crate::numerics::{measure, Measurement, QuadratureGrid};
use crate::report::{field_csv, sector_svg};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED_PATTERN: i32 = 3;
pub const EXIT_UNSUPPORTED_CLASS: i32 = 4;
pub const EXIT_INVARIANT: i32 = 5;

/// Seam continuity tolerance (chordal distance).
pub const SEAM_TOL: f64 = 1e-6;
/// Tangent boundary condition tolerance.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "octant", version, about = "Homotopy classes, energy bounds and explicit representatives for tangent fields on the octant")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariants, classification, Δ(H) and the infimum energy of a class.
    Classify(CommonArgs),
    /// Spelling length of a word, or the spelling-length energy bound of a class.
    Spelling {
        #[command(flatten)]
        common: CommonArgs,
        /// A word such as "a b a' b'" (instead of class JSON).
        #[arg(long)]
        word: Option<String>,
        /// Largest preimage count D0 scanned for the base sector.
        #[arg(long, default_value_t = 1)]
        d0: u32,
    },
    /// Build a representative, integrate it and check its invariants.
    Construct(CommonArgs),
    /// Construct every class of a family at one or more ε.
    Sweep(CommonArgs),
    /// Re-check a saved PatchworkSpec or RationalMapSpec.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input JSON file.
    pub file: Option<PathBuf>,
    /// Inline input JSON.
    #[arg(long)]
    pub json: Option<String>,
    /// Chart radius ε in (0, 1/8); repeat for sweeps.
    #[arg(long)]
    pub epsilon: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub grid_level: u32,
    /// Conjugator word-length budget for the spelling search.
    #[arg(long, default_value_t = 2)]
    pub budget: u32,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report formats to write (comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<Format>,
}

/// Validated run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<Value>,
    pub epsilons: Vec<f64>,
    pub grid_level: u32,
    pub budget: u32,
    pub out: Option<PathBuf>,
    pub formats: Vec<Format>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_INVALID, e.to_string())
}

fn io_fail(e: std::io::Error) -> Failure {
    Failure::new(1, format!("i/o error: {e}"))
}

/// Exit code for a library error raised while constructing.
fn construct_code(e: &Error) -> i32 {
    match e {
        Error::InvalidTopology(_)
        | Error::InvalidWrapping(_)
        | Error::InvalidWord(_)
        | Error::InvalidSpec(_)
        | Error::OutOfRange(_) => EXIT_INVALID,
        Error::Unsupported(_) | Error::NotApplicable(_) => EXIT_UNSUPPORTED_CLASS,
        Error::Construction(_) | Error::Consistency(_) | Error::Integration(_) => EXIT_INVARIANT,
    }
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs, default_formats: &[Format]) -> std::result::Result<RunConfig, Failure> {
        let input = match (&a.json, &a.file) {
            (Some(_), Some(_)) => return Err(invalid("give either --json or an input file, not both")),
            (Some(text), None) => Some(serde_json::from_str(text).map_err(|e| invalid(format!("bad JSON: {e}")))?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
                Some(serde_json::from_str(&text).map_err(|e| invalid(format!("bad JSON in {}: {e}", path.display())))?)
            }
            (None, None) => None,
        };
        for &eps in &a.epsilon {
            if !(eps > 0.0 && eps < 0.125) {
                return Err(invalid(format!("epsilon {eps} outside (0, 1/8)")));
            }
        }
        if !(1..=5).contains(&a.grid_level) {
            return Err(invalid(format!("grid level {} outside [1, 5]", a.grid_level)));
        }
        if a.budget > 5 {
            return Err(invalid(format!("budget {} outside [0, 5]", a.budget)));
        }
        let mut formats = if a.format.is_empty() { default_formats.to_vec() } else { a.format.clone() };
        formats.dedup();
        Ok(RunConfig {
            input,
            epsilons: a.epsilon.clone(),
            grid_level: a.grid_level,
            budget: a.budget,
            out: a.out.clone(),
            formats,
        })
    }

    fn epsilon(&self) -> std::result::Result<f64, Failure> {
        match self.epsilons.as_slice() {
            [] => Ok(0.05),
            [e] => Ok(*e),
            _ => Err(invalid("this subcommand takes a single --epsilon")),
        }
    }

    fn require_input(&self) -> std::result::Result<&Value, Failure> {
        self.input.as_ref().ok_or_else(|| invalid("no input: pass --json '<class>' or a file path"))
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report") + "\n"
}

/// Write a named artifact into the output directory.
fn write_artifact(dir: &Path, name: &str, contents: &str) -> std::result::Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(io_fail)?;
    std::fs::write(dir.join(name), contents).map_err(io_fail)
}

/// Prints the summary line, then either writes the JSON report to the
/// output directory or prints it.
fn emit(cfg: &RunConfig, out: &mut dyn Write, summary: &str, name: &str, report: &Value) -> std::result::Result<(), Failure> {
    writeln!(out, "{summary}").map_err(io_fail)?;
    match &cfg.out {
        Some(dir) => {
            if cfg.wants(Format::Json) {
                write_artifact(dir, name, &pretty(report))?;
            }
        }
        None => write!(out, "{}", pretty(report)).map_err(io_fail)?,
    }
    Ok(())
}

fn class_from(value: &Value) -> std::result::Result<(OctantTopology, WrappingNumbers), Failure> {
    ClassInput::from_json(value).and_then(|c| c.resolve()).map_err(invalid)
}

/// Parse, dispatch and report; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Classify(a) => RunConfig::from_args(a, &[Format::Json]).and_then(|c| cmd_classify(&c, out)),
        Command::Spelling { common, word, d0 } => {
            RunConfig::from_args(common, &[Format::Json]).and_then(|c| cmd_spelling(&c, word.as_deref(), *d0, out))
        }
        Command::Construct(a) => {
            RunConfig::from_args(a, &[Format::Json, Format::Csv]).and_then(|c| cmd_construct(&c, out))
        }
        Command::Sweep(a) => RunConfig::from_args(a, &[Format::Json, Format::Csv]).and_then(|c| cmd_sweep(&c, out)),
        Command::Verify(a) => RunConfig::from_args(a, &[Format::Json]).and_then(|c| cmd_verify(&c, out)),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_classify(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let value = cfg.require_input()?;
    let input = ClassInput::from_json(value).map_err(invalid)?;
    if let ClassInput::Wrapping(w) = &input {
        if w.w.iter().all(|v| *v == 0) {
            // Classified, but no (e, k, Ω) has these wrapping numbers.
            let diag = input.resolve().err().map(|e| e.to_string()).unwrap_or_default();
            let report = json!({
                "wrapping": w,
                "classification": "conformal",
                "infimum_energy_units_pi": 0,
                "valid_topology": false,
                "diagnostic": diag,
                "summary": "conformal, energy=0 pi",
            });
            emit(cfg, out, "conformal, energy=0 pi", "classify.json", &report)?;
            return Ok(EXIT_INVALID);
        }
    }
    let (t, w) = input.resolve().map_err(invalid)?;
    let c = classify(&w, &t);
    let delta = delta_invariant(&w, &c).map_err(invalid)?;
    let energy = infimum_energy(&w, &c).map_err(invalid)?;
    let summary = match c.kind {
        Kind::Nonconformal => format!("nonconformal, Delta={delta}, energy={energy} pi"),
        k => format!("{k}, energy={energy} pi"),
    };
    let mut report = json!({
        "invariants": t,
        "wrapping": w,
        "classification": c.kind,
        "sigma_plus": c.sigma_plus.map(|s| s.to_string()),
        "sigma_minus": c.sigma_minus.map(|s| s.to_string()),
        "chi": c.chi,
        "delta": delta,
        "infimum_energy_units_pi": energy,
        "infimum_energy": format!("{energy} pi"),
        "summary": summary,
    });
    if let Some(lengths) = value.get("lengths") {
        let l: [f64; 3] = serde_json::from_value(lengths.clone())
            .map_err(|e| invalid(format!("lengths must be [L_x, L_y, L_z]: {e}")))?;
        let (lo, hi) = prism_bounds(energy as f64 * std::f64::consts::PI, l[0], l[1], l[2]).map_err(invalid)?;
        report["prism_bounds"] = json!({ "lengths": l, "lower": lo, "upper": hi });
    }
    emit(cfg, out, &summary, "classify.json", &report)?;
    Ok(EXIT_OK)
}

fn cmd_spelling(cfg: &RunConfig, word: Option<&str>, d0: u32, out: &mut dyn Write) -> CmdResult {
    if let Some(text) = word {
        let u = Word::parse(text).map_err(invalid)?;
        let lambda = spelling_length(&u);
        let pairing = optimal_pairing(&u);
        let pairs: Vec<String> = pairing.pairs.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
        let summary = format!("lambda={lambda}, pairing={{{}}}", pairs.join(","));
        let report = json!({
            "word": u,
            "length": u.len(),
            "lambda": lambda,
            "pairing": pairing.pairs,
            "degrees": crate::free_group::degrees(&u),
            "summary": summary,
        });
        emit(cfg, out, &summary, "spelling.json", &report)?;
        return Ok(EXIT_OK);
    }
    let (t, _) = class_from(cfg.require_input()?)?;
    let bound = match spelling_lower_bound_check(&t, d0, cfg.budget) {
        Ok(b) => b,
        Err(Error::Unsupported(m)) => return Err(Failure::new(EXIT_UNSUPPORTED_PATTERN, format!("unsupported kink sign pattern: {m}"))),
        Err(e) => return Err(Failure::new(construct_code(&e), e.to_string())),
    };
    let status = if bound.value == bound.infimum { "matches infimum" } else { "below infimum" };
    let summary = format!("bound={} pi, infimum={} pi, {status}", bound.value, bound.infimum);
    let report = json!({
        "invariants": t,
        "d0_max": d0,
        "budget": cfg.budget,
        "bound": bound,
        "summary": summary,
    });
    emit(cfg, out, &summary, "spelling.json", &report)?;
    Ok(EXIT_OK)
}

/// Pass/fail of every invariant check of a constructed map.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantChecks {
    pub seams: bool,
    pub boundary: bool,
    pub degrees: bool,
    pub coverage: Option<bool>,
    pub energy_bound: bool,
}

impl InvariantChecks {
    pub fn all(&self) -> bool {
        self.seams && self.boundary && self.degrees && self.coverage.unwrap_or(true) && self.energy_bound
    }
}

/// Measurement of a representative against its class.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructReport {
    pub input: OctantTopology,
    pub classification: Kind,
    pub epsilon: f64,
    pub grid_level: u32,
    pub infimum_energy_units_pi: i64,
    pub energy_over_pi: f64,
    /// (E − ε(H)) / ε(H); zero when ε(H) = 0.
    pub gap: f64,
    pub measured_wrapping: WrappingNumbers,
    pub target_wrapping: WrappingNumbers,
    pub checks: InvariantChecks,
    pub measurement: Measurement,
}

pub fn analyse(
    t: &OctantTopology,
    rep: &Representative,
    epsilon: f64,
    grid: &QuadratureGrid,
) -> crate::error::Result<ConstructReport> {
    let w = t.wrapping()?;
    let c = classify(&w, t);
    let infimum = infimum_energy(&w, &c)?;
    let m = measure(rep.as_sampled(), grid)?;
    let coverage = match rep {
        Representative::Patchwork(p) => Some(verify_spec(&p.spec).is_ok()),
        Representative::Rational(_) => None,
    };
    let measured = m.degrees.wrapping();
    let tol = 1e-3 * m.lemma1_bound.max(1.0);
    let checks = InvariantChecks {
        seams: m.seam_residual < SEAM_TOL,
        boundary: m.boundary.max() < BOUNDARY_TOL,
        degrees: measured == w && m.degrees.all_confident(),
        coverage,
        energy_bound: m.lemma1_bound <= m.energy.energy + tol,
    };
    let gap = if infimum == 0 { 0.0 } else { m.energy.energy_over_pi / infimum as f64 - 1.0 };
    Ok(ConstructReport {
        input: *t,
        classification: c.kind,
        epsilon,
        grid_level: grid.level,
        infimum_energy_units_pi: infimum,
        energy_over_pi: m.energy.energy_over_pi,
        gap,
        measured_wrapping: measured,
        target_wrapping: w,
        checks,
        measurement: m,
    })
}

fn summary_line(r: &ConstructReport, rep: &Representative) -> String {
    let what = match rep {
        Representative::Patchwork(p) => format!("case {} M={:?}", p.spec.case_id, p.spec.m),
        Representative::Rational(s) => format!("rational {:?}", s.orientation).to_lowercase(),
    };
    format!(
        "{what}, energy={:.6} pi, infimum={} pi, gap={:.4}%, invariants {}",
        r.energy_over_pi,
        r.infimum_energy_units_pi,
        100.0 * r.gap,
        if r.checks.all() { "pass" } else { "FAIL" }
    )
}

fn write_map_artifacts(
    cfg: &RunConfig,
    dir: &Path,
    map: &dyn SampledMap,
    patchwork: Option<&Patchwork>,
) -> std::result::Result<(), Failure> {
    if cfg.wants(Format::Csv) {
        write_artifact(dir, "field.csv", &field_csv(map, 64, 64))?;
    }
    if cfg.wants(Format::Svg) {
        write_artifact(dir, "sectors.svg", &sector_svg(map, patchwork, 96, 96))?;
    }
    Ok(())
}

fn cmd_construct(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let (t, _) = class_from(cfg.require_input()?)?;
    let epsilon = cfg.epsilon()?;
    let grid = QuadratureGrid::new(cfg.grid_level).map_err(invalid)?;
    let rep = construct(&t, epsilon).map_err(|e| Failure::new(construct_code(&e), e.to_string()))?;
    let report = analyse(&t, &rep, epsilon, &grid).map_err(|e| Failure::new(construct_code(&e), e.to_string()))?;
    let summary = summary_line(&report, &rep);
    writeln!(out, "{summary}").map_err(io_fail)?;
    let spec_json = match &rep {
        Representative::Patchwork(p) => serde_json::to_value(&p.spec),
        Representative::Rational(s) => serde_json::to_value(s),
    }
    .expect("serializable spec");
    match &cfg.out {
        Some(dir) => {
            if cfg.wants(Format::Json) {
                let name = match rep {
                    Representative::Patchwork(_) => "patchwork_spec.json",
                    Representative::Rational(_) => "rational_spec.json",
                };
                write_artifact(dir, name, &pretty(&spec_json))?;
                write_artifact(dir, "degrees.json", &pretty(&report.measurement.degrees))?;
                write_artifact(
                    dir,
                    "energy.json",
                    &pretty(&json!({
                        "energy": report.measurement.energy,
                        "infimum_energy_units_pi": report.infimum_energy_units_pi,
                        "gap": report.gap,
                        "trapped_area": report.measurement.trapped_area,
                    })),
                )?;
                write_artifact(dir, "report.json", &pretty(&report))?;
            }
            let patchwork = match &rep {
                Representative::Patchwork(p) => Some(p),
                Representative::Rational(_) => None,
            };
            write_map_artifacts(cfg, dir, rep.as_sampled(), patchwork)?;
        }
        None => write!(out, "{}", pretty(&json!({ "spec": spec_json, "report": report }))).map_err(io_fail)?,
    }
    Ok(if report.checks.all() { EXIT_OK } else { EXIT_INVARIANT })
}

/// One row of a sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub e: [i8; 3],
    pub k: [i64; 3],
    pub omega_units: i64,
    pub epsilon: f64,
    pub status: String,
    pub case_id: Option<String>,
    pub m: Option<[u32; 3]>,
    pub infimum_energy_units_pi: i64,
    pub energy_over_pi: Option<f64>,
    pub gap: Option<f64>,
    pub wrapping_ok: Option<bool>,
    pub invariants_ok: Option<bool>,
}

/// The classes of a sweep family: nonconformal classes with the given edge
/// signs and k_min ≤ k_x ≤ k_y ≤ k_z ≤ k_max, all ω, or an explicit list.
pub fn sweep_classes(spec: &Value) -> crate::error::Result<Vec<OctantTopology>> {
    if let Some(list) = spec.get("classes").and_then(|v| v.as_array()) {
        return list
            .iter()
            .map(|c| ClassInput::from_json(c).and_then(|c| c.resolve()).map(|(t, _)| t))
            .collect();
    }
    let e: [i8; 3] = match spec.get("e") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::InvalidTopology(e.to_string()))?,
        None => [1, 1, 1],
    };
    let range: [i64; 2] = match spec.get("k_range") {
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::OutOfRange(e.to_string()))?,
        None => [1, 3],
    };
    let mut out = Vec::new();
    for kx in range[0]..=range[1] {
        for ky in kx..=range[1] {
            for kz in ky..=range[1] {
                // Nonconformal classes have |Ω| < 2π(Σ|k| + 1), so this window is exhaustive.
                let reach = 8 * (kx.abs() + ky.abs() + kz.abs() + 2);
                for om in -reach..=reach {
                    let Ok(t) = OctantTopology::new(e, [kx, ky, kz], om) else { continue };
                    let Ok(w) = t.wrapping() else { continue };
                    if classify(&w, &t).kind == Kind::Nonconformal {
                        out.push(t);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn sweep_row(t: &OctantTopology, epsilon: f64, grid: &QuadratureGrid) -> SweepRow {
    let w = t.wrapping().expect("validated class");
    let c = classify(&w, t);
    let infimum = infimum_energy(&w, &c).unwrap_or(0);
    let mut row = SweepRow {
        e: t.e,
        k: t.k,
        omega_units: t.omega_units,
        epsilon,
        status: String::new(),
        case_id: None,
        m: None,
        infimum_energy_units_pi: infimum,
        energy_over_pi: None,
        gap: None,
        wrapping_ok: None,
        invariants_ok: None,
    };
    let rep = match construct(t, epsilon) {
        Ok(r) => r,
        Err(e) => {
            row.status = if construct_code(&e) == EXIT_UNSUPPORTED_CLASS {
                format!("unsupported: {e}")
            } else {
                format!("failed: {e}")
            };
            return row;
        }
    };
    if let Representative::Patchwork(p) = &rep {
        row.case_id = Some(p.spec.case_id.to_string());
        row.m = Some(p.spec.m);
    }
    match analyse(t, &rep, epsilon, grid) {
        Ok(r) => {
            row.status = "ok".into();
            row.energy_over_pi = Some(r.energy_over_pi);
            row.gap = Some(r.gap);
            row.wrapping_ok = Some(r.measured_wrapping == r.target_wrapping);
            row.invariants_ok = Some(r.checks.all());
        }
        Err(e) => row.status = format!("failed: {e}"),
    }
    row
}

fn csv_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(
        "e_x,e_y,e_z,k_x,k_y,k_z,omega_units,epsilon,case,m_x,m_y,m_z,infimum_pi,energy_pi,gap,wrapping_ok,invariants_ok,status\n",
    );
    for r in rows {
        let m = r.m.map(|m| m.map(|v| v.to_string())).unwrap_or_default();
        let status = r.status.replace('"', "'");
        s += &format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},\"{}\"\n",
            r.e[0],
            r.e[1],
            r.e[2],
            r.k[0],
            r.k[1],
            r.k[2],
            r.omega_units,
            r.epsilon,
            csv_opt(&r.case_id),
            m[0],
            m[1],
            m[2],
            r.infimum_energy_units_pi,
            r.energy_over_pi.map(|v| format!("{v:.9}")).unwrap_or_default(),
            r.gap.map(|v| format!("{v:.9}")).unwrap_or_default(),
            csv_opt(&r.wrapping_ok),
            csv_opt(&r.invariants_ok),
            status
        );
    }
    s
}

fn cmd_sweep(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let family = cfg.input.clone().unwrap_or_else(|| json!({}));
    let classes = sweep_classes(&family).map_err(invalid)?;
    let mut epsilons = cfg.epsilons.clone();
    if epsilons.is_empty() {
        epsilons = match family.get("epsilons") {
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| invalid(format!("epsilons: {e}")))?,
            None => vec![0.05, 0.025],
        };
    }
    for &eps in &epsilons {
        if !(eps > 0.0 && eps < 0.125) {
            return Err(invalid(format!("epsilon {eps} outside (0, 1/8)")));
        }
    }
    let grid = QuadratureGrid::new(cfg.grid_level).map_err(invalid)?;
    let mut rows = Vec::new();
    for t in &classes {
        for &eps in &epsilons {
            rows.push(sweep_row(t, eps, &grid));
        }
    }
    let unsupported: Vec<&SweepRow> = rows.iter().filter(|r| r.status.starts_with("unsupported")).collect();
    let failed = rows.iter().filter(|r| r.status.starts_with("failed") || r.invariants_ok == Some(false)).count();
    let summary = format!(
        "{} classes, {} runs, {} unsupported, {} failing invariants",
        classes.len(),
        rows.len(),
        unsupported.len(),
        failed
    );
    let report = json!({
        "grid_level": cfg.grid_level,
        "epsilons": epsilons,
        "rows": rows,
        "unsupported": unsupported,
        "summary": summary,
    });
    writeln!(out, "{summary}").map_err(io_fail)?;
    match &cfg.out {
        Some(dir) => {
            if cfg.wants(Format::Json) {
                write_artifact(dir, "sweep.json", &pretty(&report))?;
            }
            if cfg.wants(Format::Csv) {
                write_artifact(dir, "sweep.csv", &sweep_csv(&rows))?;
            }
        }
        None => {
            if cfg.wants(Format::Csv) {
                write!(out, "{}", sweep_csv(&rows)).map_err(io_fail)?;
            } else {
                write!(out, "{}", pretty(&report)).map_err(io_fail)?;
            }
        }
    }
    Ok(if failed > 0 {
        EXIT_INVARIANT
    } else if !unsupported.is_empty() {
        EXIT_UNSUPPORTED_CLASS
    } else {
        EXIT_OK
    })
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let value = cfg.require_input()?;
    let grid = QuadratureGrid::new(cfg.grid_level).map_err(invalid)?;
    let fail = |e: Error| Failure::new(construct_code(&e), e.to_string());
    let (t, rep, epsilon) = if value.get("case_id").is_some() {
        let spec: PatchworkSpec =
            serde_json::from_value(value.clone()).map_err(|e| invalid(format!("bad PatchworkSpec: {e}")))?;
        let p = assemble_patchwork(&spec).map_err(fail)?;
        (spec.input, Representative::Patchwork(p), spec.epsilon)
    } else if value.get("overall_sign").is_some() {
        let spec: RationalMapSpec =
            serde_json::from_value(value.clone()).map_err(|e| invalid(format!("bad RationalMapSpec: {e}")))?;
        let t = spec.invariants().map_err(invalid)?;
        (t, Representative::Rational(spec), 0.0)
    } else {
        let (t, _) = class_from(value)?;
        let eps = cfg.epsilon()?;
        let spec = select_case(&t, eps);
        let rep = match spec {
            Ok(s) => Representative::Patchwork(assemble_patchwork(&s).map_err(fail)?),
            Err(Error::NotApplicable(_)) => construct(&t, eps).map_err(fail)?,
            Err(e) => return Err(fail(e)),
        };
        (t, rep, eps)
    };
    let report = analyse(&t, &rep, epsilon, &grid).map_err(fail)?;
    let summary = summary_line(&report, &rep);
    emit(cfg, out, &summary, "verify.json", &serde_json::to_value(&report).expect("serializable report"))?;
    Ok(if report.checks.all() { EXIT_OK } else { EXIT_INVARIANT })
}
