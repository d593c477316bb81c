//! The `quatsculpt` command line.
//!
//! Every command reports failures as one line on the diagnostic stream,
//! `<kind>: <message>`, where `kind` is `verify`, `io`, `parse` or
//! `pipeline`, and exits with the matching [`ExitCode`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::blocks::cayley_graph;
use crate::error::Error;
use crate::mesh::{feature_stats, load_obj, read_stl, write_obj, write_stl, FeatureStats, Mesh};
use crate::pipeline::{
    face_contact_check, generate_sculpture, scale_for_min_feature, sphere_cloud, ContactReport,
};
use crate::projection::{default_pole, Pole};
use crate::quat::Q8Element;
use crate::seed::demo_seed;
use crate::symmetry::{seed_symmetries, symmetry_group, PointCloud4, DEFAULT_TOLERANCE};
use crate::vector::Vec4;

/// Pole inputs further than this from unit length draw a warning.
pub const POLE_WARNING_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    VerificationFailed = 1,
    IoOrParse = 2,
    Pipeline = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Generate,
    Verify,
    CheckSeed,
    Cayley,
    Stats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Obj,
    Stl,
    Json,
    Dot,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Obj => "obj",
            Format::Stl => "stl",
            Format::Json => "json",
            Format::Dot => "dot",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    /// Input file. The demo seed is used when `generate` or `check-seed`
    /// get none.
    pub seed_path: Option<PathBuf>,
    /// Output directory for `generate`, output file otherwise (stdout when
    /// absent).
    pub out_path: Option<PathBuf>,
    pub pole: Pole,
    pub tol: f64,
    pub min_feature: f64,
    pub format: Option<Format>,
    /// Fixed scale for `generate`, or the scale of a mesh given to `verify`.
    pub scale: Option<f64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            seed_path: None,
            out_path: None,
            pole: default_pole(),
            tol: DEFAULT_TOLERANCE,
            min_feature: 0.8,
            format: None,
            scale: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quatsculpt",
    version,
    about = "Build and verify sculptures with quaternion-group symmetry"
)]
struct Args {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Place a seed in the eight cells and write the projected meshes.
    Generate(Opts),
    /// Report the symmetry group of a point cloud or generated mesh.
    Verify(Opts),
    /// Check a seed for cube symmetries and matching face contacts.
    CheckSeed(Opts),
    /// Write the Cayley graph of Q8 with generators i, j, k.
    Cayley(Opts),
    /// Report shortest and longest edges of a mesh.
    Stats(Opts),
}

#[derive(Debug, clap::Args)]
struct Opts {
    /// Input file (seed or sculpture mesh, or a JSON point cloud).
    #[arg(long, visible_alias = "input", value_name = "PATH")]
    seed: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Projection pole as w,x,y,z; normalized on input.
    #[arg(long, value_name = "W,X,Y,Z", value_parser = parse_vec4)]
    pole: Option<Vec4>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = 0.8)]
    min_feature: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    scale: Option<f64>,
}

fn parse_vec4(s: &str) -> Result<Vec4, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[f64; 4]>::try_from(parts)
        .map_err(|v| format!("expected 4 comma-separated values, got {}", v.len()))
}

/// Parses arguments and runs. Usage errors exit with code 2.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitCode::IoOrParse as i32
            } else {
                0
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (command, opts) = match args.command {
        CliCommand::Generate(o) => (Command::Generate, o),
        CliCommand::Verify(o) => (Command::Verify, o),
        CliCommand::CheckSeed(o) => (Command::CheckSeed, o),
        CliCommand::Cayley(o) => (Command::Cayley, o),
        CliCommand::Stats(o) => (Command::Stats, o),
    };
    let mut config = RunConfig::new(command);
    if let Some(p) = opts.pole {
        match Pole::normalized(p) {
            Ok((pole, adjustment)) => {
                if adjustment > POLE_WARNING_THRESHOLD {
                    let _ = writeln!(
                        stderr,
                        "warning: pole normalized (length changed by {adjustment:e})"
                    );
                }
                config.pole = pole;
            }
            Err(e) => return report(Failure::Parse(format!("--pole: {e}")), stderr),
        }
    }
    config.seed_path = opts.seed;
    config.out_path = opts.out;
    config.tol = opts.tol;
    config.min_feature = opts.min_feature;
    config.format = opts.format;
    config.scale = opts.scale;
    run(&config, stdout, stderr)
}

#[derive(Debug)]
enum Failure {
    Verify(String),
    Io(String),
    Parse(String),
    Pipeline(String),
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    fn parse(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure::Parse(format!("{}: {e}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Io(e.to_string()),
            e => Failure::Pipeline(e.to_string()),
        }
    }
}

fn report(f: Failure, stderr: &mut dyn Write) -> i32 {
    let (kind, msg, code) = match f {
        Failure::Verify(m) => ("verify", m, ExitCode::VerificationFailed),
        Failure::Io(m) => ("io", m, ExitCode::IoOrParse),
        Failure::Parse(m) => ("parse", m, ExitCode::IoOrParse),
        Failure::Pipeline(m) => ("pipeline", m, ExitCode::Pipeline),
    };
    let msg = msg.replace('\n', " ");
    let _ = writeln!(stderr, "{kind}: {msg}");
    code as i32
}

/// Runs one command and returns the process exit code.
pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = if !(config.tol > 0.0 && config.tol.is_finite()) {
        Err(Failure::Parse(format!(
            "--tol must be positive, got {}",
            config.tol
        )))
    } else if !(config.min_feature > 0.0 && config.min_feature.is_finite()) {
        Err(Failure::Parse(format!(
            "--min-feature must be positive, got {}",
            config.min_feature
        )))
    } else {
        match config.command {
            Command::Generate => generate(config, stdout),
            Command::Verify => verify(config, stdout),
            Command::CheckSeed => check_seed(config, stdout),
            Command::Cayley => cayley(config, stdout),
            Command::Stats => stats(config, stdout),
        }
    };
    match result {
        Ok(()) => ExitCode::Ok as i32,
        Err(f) => report(f, stderr),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

/// Writes to `--out` when given, else to stdout.
fn emit(config: &RunConfig, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    match &config.out_path {
        Some(p) => write_file(p, bytes),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn expect_format(config: &RunConfig, allowed: &[Format]) -> Result<Format, Failure> {
    let f = config.format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.extension()).collect();
        Err(Failure::Parse(format!(
            "--format {} is not available here (use {})",
            f.extension(),
            names.join(" or ")
        )))
    }
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

/// Loads an OBJ or binary STL mesh. STL triangles are welded by exact
/// vertex equality.
fn load_mesh(path: &Path) -> Result<Mesh, Failure> {
    let bytes = read_file(path)?;
    if has_extension(path, "stl") {
        let tris = read_stl(&bytes).map_err(|e| Failure::parse(path, e))?;
        let mut index = std::collections::HashMap::new();
        let mut mesh = Mesh::default();
        for (_, corners) in tris {
            let t = corners.map(|v| {
                *index.entry(v.map(f64::to_bits)).or_insert_with(|| {
                    mesh.vertices.push(v);
                    mesh.vertices.len() - 1
                })
            });
            mesh.triangles.push(t);
        }
        if mesh.triangles.is_empty() {
            return Err(Failure::parse(path, Error::EmptyMesh));
        }
        mesh.validate().map_err(|e| Failure::parse(path, e))?;
        Ok(mesh)
    } else {
        let mesh = load_obj(&bytes).map_err(|e| Failure::parse(path, e))?;
        if mesh.triangles.is_empty() {
            return Err(Failure::parse(path, Error::EmptyMesh));
        }
        Ok(mesh)
    }
}

fn load_seed(config: &RunConfig) -> Result<Mesh, Failure> {
    match &config.seed_path {
        Some(p) => load_mesh(p),
        None => Ok(demo_seed()),
    }
}

fn require_input(config: &RunConfig) -> Result<&Path, Failure> {
    config
        .seed_path
        .as_deref()
        .ok_or_else(|| Failure::Parse("--seed is required for this command".into()))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CloudJson {
    pub points: Vec<Vec4>,
}

#[derive(Debug, Serialize)]
pub struct PartEntry {
    pub element: Q8Element,
    pub file: String,
    pub vertices: usize,
    pub triangles: usize,
    pub min_edge: f64,
}

#[derive(Debug, Serialize)]
pub struct MeshEntry {
    pub file: String,
    pub vertices: usize,
    pub triangles: usize,
}

/// Contents of `manifest.json`, written by `generate`.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub pole: Vec4,
    pub scale: f64,
    pub min_feature: f64,
    pub seed: MeshEntry,
    pub merged: MeshEntry,
    pub feature_stats: FeatureStats,
    pub parts: Vec<PartEntry>,
    pub cloud: String,
}

/// File stem for a part, e.g. `part_i`, `part_neg_i`.
pub fn part_file_stem(g: Q8Element) -> String {
    let s = g.to_string();
    match s.strip_prefix('-') {
        Some(rest) => format!("part_neg_{rest}"),
        None => format!("part_{s}"),
    }
}

fn obj_comments(label: &str, pole: &Pole, scale: f64) -> Vec<String> {
    let p = pole.point();
    vec![
        format!("quatsculpt {label}"),
        format!("pole {},{},{},{}", p[0], p[1], p[2], p[3]),
        format!("scale {scale}"),
    ]
}

/// Reads `pole` and `scale` back from the header written by `generate`.
fn obj_metadata(bytes: &[u8]) -> (Option<Vec4>, Option<f64>) {
    let text = String::from_utf8_lossy(bytes);
    let (mut pole, mut scale) = (None, None);
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim();
        if let Some(v) = body.strip_prefix("pole ") {
            pole = parse_vec4(v.trim()).ok();
        } else if let Some(v) = body.strip_prefix("scale ") {
            scale = v.trim().parse().ok();
        }
    }
    (pole, scale)
}

fn generate(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), Failure> {
    let format = expect_format(config, &[Format::Obj, Format::Stl])?;
    let seed = load_seed(config)?;
    let pole = &config.pole;
    let scale = match config.scale {
        Some(s) => s,
        None => scale_for_min_feature(&seed, pole, config.min_feature)?,
    };
    let bundle = generate_sculpture(&seed, pole, scale)?;
    let cloud = bundle.sphere_cloud(config.tol)?;
    let stats = feature_stats(&bundle.merged)?;

    let dir = config
        .out_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
    let ext = format.extension();
    let encode = |m: &Mesh, label: &str| -> Result<Vec<u8>, Failure> {
        Ok(match format {
            Format::Stl => write_stl(m)?,
            _ => write_obj(m, &obj_comments(label, pole, scale))?.into_bytes(),
        })
    };

    let mut parts = Vec::new();
    for (g, part) in &bundle.parts {
        let file = format!("{}.{ext}", part_file_stem(*g));
        write_file(&dir.join(&file), &encode(part, &format!("part {g}"))?)?;
        parts.push(PartEntry {
            element: *g,
            file,
            vertices: part.vertices.len(),
            triangles: part.triangles.len(),
            min_edge: feature_stats(part)?.min_edge,
        });
    }
    let merged_file = format!("sculpture.{ext}");
    write_file(
        &dir.join(&merged_file),
        &encode(&bundle.merged, "sculpture")?,
    )?;

    let cloud_json = CloudJson {
        points: cloud.points,
    };
    write_file(
        &dir.join("cloud.json"),
        (serde_json::to_string(&cloud_json).map_err(Error::from)? + "\n").as_bytes(),
    )?;

    let manifest = Manifest {
        pole: pole.point(),
        scale,
        min_feature: config.min_feature,
        seed: MeshEntry {
            file: config
                .seed_path
                .as_ref()
                .and_then(|p| p.file_name())
                .map_or_else(
                    || "(demo seed)".into(),
                    |n| n.to_string_lossy().into_owned(),
                ),
            vertices: seed.vertices.len(),
            triangles: seed.triangles.len(),
        },
        merged: MeshEntry {
            file: merged_file,
            vertices: bundle.merged.vertices.len(),
            triangles: bundle.merged.triangles.len(),
        },
        feature_stats: stats,
        parts,
        cloud: "cloud.json".into(),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(Error::from)? + "\n";
    write_file(&dir.join("manifest.json"), json.as_bytes())?;
    writeln!(
        stdout,
        "wrote 9 meshes, cloud.json and manifest.json to {} (scale {scale}, min edge {})",
        dir.display(),
        stats.min_edge
    )
    .map_err(|e| Failure::Io(e.to_string()))
}

fn load_cloud(config: &RunConfig) -> Result<PointCloud4, Failure> {
    let path = require_input(config)?;
    if has_extension(path, "json") {
        let bytes = read_file(path)?;
        let c: CloudJson = serde_json::from_slice(&bytes).map_err(|e| Failure::parse(path, e))?;
        return PointCloud4::new(c.points).map_err(|e| Failure::parse(path, e));
    }
    let mesh = load_mesh(path)?;
    let (pole, scale) = if has_extension(path, "obj") {
        obj_metadata(&read_file(path)?)
    } else {
        (None, None)
    };
    let pole = match pole {
        Some(p) if config.pole == default_pole() => {
            Pole::normalized(p).map_err(|e| Failure::parse(path, e))?.0
        }
        _ => config.pole,
    };
    let scale = config.scale.or(scale).unwrap_or(1.0);
    Ok(sphere_cloud(&mesh, &pole, scale, config.tol)?)
}

fn verify(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), Failure> {
    expect_format(config, &[Format::Json])?;
    let cloud = load_cloud(config)?;
    let report = symmetry_group(&cloud, config.tol)?;
    emit(config, stdout, report.to_json().as_bytes())?;
    if report.is_exactly_q8 {
        Ok(())
    } else {
        Err(Failure::Verify(format!(
            "symmetry group has {} elements, not exactly Q8",
            report.symmetries.len()
        )))
    }
}

#[derive(Debug, Serialize)]
struct SeedReport {
    vertices: usize,
    cube_symmetries: usize,
    asymmetric: bool,
    contact: ContactReport,
    passed: bool,
}

fn check_seed(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), Failure> {
    expect_format(config, &[Format::Json])?;
    let seed = load_seed(config)?;
    let syms = seed_symmetries(&seed.vertices, config.tol)?;
    let contact = face_contact_check(&seed)?;
    let asymmetric = syms.len() == 1;
    let report = SeedReport {
        vertices: seed.vertices.len(),
        cube_symmetries: syms.len(),
        asymmetric,
        passed: asymmetric && contact.passed,
        contact,
    };
    let json = serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n";
    emit(config, stdout, json.as_bytes())?;
    if !asymmetric {
        Err(Failure::Verify("seed has nontrivial symmetry".into()))
    } else if !report.contact.passed {
        let failed: Vec<String> = report
            .contact
            .axes
            .iter()
            .filter(|a| !a.passed)
            .map(|a| format!("{:?}", a.axis))
            .collect();
        Err(Failure::Verify(format!(
            "seed faces do not connect across axes {}",
            failed.join(",")
        )))
    } else {
        Ok(())
    }
}

fn cayley(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), Failure> {
    expect_format(config, &[Format::Dot])?;
    emit(config, stdout, cayley_graph().to_dot().as_bytes())
}

fn stats(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), Failure> {
    expect_format(config, &[Format::Json])?;
    let mesh = load_mesh(require_input(config)?)?;
    let stats = feature_stats(&mesh)?;
    let json = serde_json::to_string_pretty(&stats).map_err(Error::from)? + "\n";
    emit(config, stdout, json.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_parsing() {
        assert_eq!(parse_vec4("1, 0,0,0").unwrap(), [1.0, 0.0, 0.0, 0.0]);
        assert!(parse_vec4("1,0,0").is_err());
        assert!(parse_vec4("1,0,0,x").is_err());
    }

    #[test]
    fn part_stems() {
        let stems: Vec<String> = Q8Element::ALL.iter().map(|&g| part_file_stem(g)).collect();
        assert_eq!(
            stems,
            [
                "part_1",
                "part_neg_1",
                "part_i",
                "part_neg_i",
                "part_j",
                "part_neg_j",
                "part_k",
                "part_neg_k"
            ]
        );
    }

    #[test]
    fn metadata_round_trip() {
        let pole = default_pole();
        let mut text = String::new();
        for c in obj_comments("sculpture", &pole, 12.5) {
            text += &format!("# {c}\n");
        }
        assert_eq!(obj_metadata(text.as_bytes()), (Some([0.5; 4]), Some(12.5)));
    }

    #[test]
    fn unnormalized_pole_warns() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(
            ["quatsculpt", "cayley", "--pole", "1,1,1,1"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0);
        assert!(String::from_utf8(err)
            .unwrap()
            .starts_with("warning: pole normalized"));
        assert!(String::from_utf8(out).unwrap().starts_with("digraph"));
    }

    #[test]
    fn bad_format_is_a_parse_error() {
        let mut config = RunConfig::new(Command::Cayley);
        config.format = Some(Format::Stl);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(&config, &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().starts_with("parse: "));
    }
}
