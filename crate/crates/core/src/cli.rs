//! Command-line front end. [`run`] is the whole program; the `logvor` binary
//! only forwards its arguments.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog;
use crate::error::Error;
use crate::gale::{check_gale_pair, dual_slice, gale_pair, verify_type_theorem};
use crate::io::{model_to_json, parse_model, polytope_to_json, rat_strings, ModelFile};
use crate::linalg::{format_rational, parse_rational, to_f64, RatMatrix, RatVector, Rational};
use crate::logvor::{
    cell_at, degeneration_witness, positive_cocircuits, realize, vertex_functions, RealizationData,
};
use crate::manifest::RunManifest;
use crate::model::{LinearModel, PartialLinearModel, PointKind};
use crate::oracle::{self, MleOptions, Target};
use crate::partial::{
    cell_partial_face_conjecture, cell_partial_facet, cell_partial_interior, minimal_face, FacetCellResult,
    SideCertificate, SideProbe,
};
use crate::plot::{csv_header, csv_rows, export_plot, parameter_names, GridSpec};
use crate::polytope::{combinatorial_isomorphism, IsoVerdict, Polytope, DEFAULT_NODE_CAP};

#[derive(Debug, Parser)]
#[command(name = "logvor", version, about = "Logarithmic Voronoi cells of linear models")]
struct Cli {
    /// Write the JSON output (with its run manifest) to this file instead of
    /// standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the model invariants and report vertices and transversality.
    Validate {
        #[arg(long)]
        model: PathBuf,
    },
    /// List the positive co-circuits of B and their vertex functions.
    Cocircuits {
        #[arg(long)]
        model: PathBuf,
    },
    /// Cell at a parameter, e.g. --at "x=-5/324,y=1/81".
    Cell {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Also write the cell vertices as CSV.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Gale transform of B and its dual slice.
    Gale {
        #[arg(long)]
        model: PathBuf,
    },
    /// Compare the cell at an interior parameter with the dual slice.
    TypeCheck {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Cell of a partial model (the model file needs a theta block).
    PartialCell {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        facet: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Allow points on faces of codimension two or more.
        #[arg(long)]
        experimental: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Monte-Carlo check that MLEs of uniform data satisfy the cell equations.
    Tessellate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Build a model whose cells have the type of a given polytope.
    Realize {
        /// JSON with {"M": [[...]], "b": [...]} or a polytope file.
        #[arg(long)]
        polytope: PathBuf,
    },
    /// CSV of cell vertices at sampled parameters (n = 3 or 4).
    ExportPlot {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Print or write a bundled model file.
    Examples {
        #[arg(long)]
        name: Option<String>,
        /// Fixture file for models that are not bundled (m06).
        #[arg(long)]
        from: Option<PathBuf>,
    },
    /// Maximum likelihood estimate for data u.
    Mle {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// Runs the program on `args` (including the program name). Returns the exit
/// code: 0 on success, 1 on a domain error, 2 on a usage error.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let target: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "usage error: {}", msg);
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {}", e);
            1
        }
    }
}

struct Loaded {
    bytes: Vec<u8>,
    file: ModelFile,
}

fn load(path: &Path) -> CmdResult<Loaded> {
    let bytes = std::fs::read(path).map_err(Error::from)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::parse(path.display().to_string(), "file is not UTF-8"))?;
    let file = parse_model(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse { context: format!("{}: {}", path.display(), context), message },
        other => other,
    })?;
    Ok(Loaded { bytes, file })
}

fn load_valid(path: &Path) -> CmdResult<Loaded> {
    let l = load(path)?;
    l.file.model.ensure_valid()?;
    Ok(l)
}

fn load_partial(path: &Path) -> CmdResult<(Loaded, PartialLinearModel)> {
    let l = load_valid(path)?;
    let pm = l.file.partial()?;
    Ok((l, pm))
}

/// Parses `"x=-5/324,y=1/81"` or `"-5/324,1/81"`.
pub fn parse_point(s: &str, d: usize) -> std::result::Result<RatVector, String> {
    let names = parameter_names(d);
    let parts: Vec<&str> = if s.trim().is_empty() { Vec::new() } else { s.split(',').collect() };
    if parts.len() != d {
        return Err(format!("expected {} coordinates ({}), got {:?}", d, names.join(","), s));
    }
    parts
        .iter()
        .enumerate()
        .map(|(i, part)| {
            let value = match part.split_once('=') {
                Some((name, v)) => {
                    if name.trim() != names[i] {
                        return Err(format!("coordinate {} should be named {}, found {:?}", i + 1, names[i], name.trim()));
                    }
                    v
                }
                None => part,
            };
            parse_rational(value).ok_or_else(|| format!("cannot parse {:?} as a rational", value.trim()))
        })
        .collect()
}

fn parse_data(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| parse_rational(p).map(|r| to_f64(&r)).ok_or_else(|| format!("cannot parse {:?}", p.trim())))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {} entries in --u, got {}", n, v.len()));
    }
    Ok(v)
}

fn point_arg(s: &str, d: usize) -> CmdResult<RatVector> {
    parse_point(s, d).map_err(|e| Failure::Usage(format!("--at: {}", e)))
}

fn emit(cli: &Cli, stdout: &mut dyn Write, manifest: RunManifest, result: Value) -> CmdResult<()> {
    let doc = json!({ "manifest": manifest, "result": result });
    let text = crate::io::to_pretty(&doc);
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from)?,
        None => stdout.write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}

/// Writes a non-JSON artifact plus a `<path>.manifest.json` sidecar.
fn write_with_sidecar(path: &Path, contents: &[u8], manifest: &RunManifest) -> CmdResult<()> {
    std::fs::write(path, contents).map_err(Error::from)?;
    let mut side = path.as_os_str().to_owned();
    side.push(".manifest.json");
    let text = crate::io::to_pretty(&serde_json::to_value(manifest).expect("serializable"));
    std::fs::write(PathBuf::from(side), text).map_err(Error::from)?;
    Ok(())
}

fn kind_name(k: PointKind) -> &'static str {
    match k {
        PointKind::Interior => "interior",
        PointKind::BoundaryOfSimplex => "boundary-of-simplex",
        PointKind::BoundaryOfTheta => "boundary-of-theta",
    }
}

fn cell_json(cell: &Polytope) -> Value {
    json!({
        "dim": cell.dim(),
        "f_vector": cell.f_vector(),
        "polytope": polytope_to_json(cell),
    })
}

fn verdict_json(v: &IsoVerdict) -> Value {
    match v {
        IsoVerdict::Isomorphic { witness } => json!({"verdict": "isomorphic", "witness": witness}),
        IsoVerdict::NotIsomorphic => json!({"verdict": "not-isomorphic"}),
        IsoVerdict::Inconclusive { nodes } => json!({"verdict": "inconclusive", "nodes": nodes}),
    }
}

fn matrix_json(m: &RatMatrix) -> Value {
    json!(m.rows().map(rat_strings).collect::<Vec<_>>())
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CmdResult<()> {
    match &cli.command {
        Command::Validate { model } => {
            let l = load(model)?;
            let result = validate_json(&l.file);
            let valid = result["valid"].as_bool().unwrap_or(false);
            emit(cli, stdout, RunManifest::new("validate").with_input(&l.bytes), result)?;
            if valid {
                Ok(())
            } else {
                Err(Failure::Domain(Error::InvalidModel("validation failed; see the violations list".into())))
            }
        }
        Command::Cocircuits { model } => {
            let l = load_valid(model)?;
            emit(cli, stdout, RunManifest::new("cocircuits").with_input(&l.bytes), cocircuits_json(&l.file.model))
        }
        Command::Cell { model, at, plot_data } => {
            let l = load_valid(model)?;
            let m = &l.file.model;
            let x = point_arg(at, m.d())?;
            let result = cell_command_json(m, &x)?;
            let manifest = RunManifest::new("cell").with_input(&l.bytes);
            if let Some(path) = plot_data {
                let (_, cell) = cell_at(m, &x)?;
                if m.n() != 3 && m.n() != 4 {
                    return Err(Error::Unsupported("plot data needs n = 3 or 4".into()).into());
                }
                let mut csv = csv_header(m.n(), m.d());
                csv_rows(&mut csv, 0, &x, &cell);
                write_with_sidecar(path, csv.as_bytes(), &manifest)?;
            }
            emit(cli, stdout, manifest, result)
        }
        Command::Gale { model } => {
            let l = load_valid(model)?;
            let g = gale_pair(l.file.model.b())?;
            let slice = dual_slice(&g.a)?;
            let result = json!({
                "A": matrix_json(&g.a),
                "V": matrix_json(&g.v),
                "check": check_gale_pair(&g.a, &g.b),
                "dual_slice": cell_json(&slice),
            });
            emit(cli, stdout, RunManifest::new("gale").with_input(&l.bytes), result)
        }
        Command::TypeCheck { model, at } => {
            let l = load_valid(model)?;
            let x = point_arg(at, l.file.model.d())?;
            let t = verify_type_theorem(&l.file.model, &x, DEFAULT_NODE_CAP)?;
            let mut result = json!({
                "x": rat_strings(&x),
                "holds": t.holds(),
                "cell_f_vector": t.cell_f_vector,
                "slice_f_vector": t.slice_f_vector,
            });
            merge(&mut result, verdict_json(&t.verdict));
            emit(cli, stdout, RunManifest::new("type-check").with_input(&l.bytes), result)
        }
        Command::PartialCell { model, facet, at, experimental, samples, seed, tol } => {
            let (l, pm) = load_partial(model)?;
            let x = point_arg(at, pm.d())?;
            let result = partial_json(&pm, *facet, &x, *experimental, *samples, *seed, *tol)?;
            let mut manifest = RunManifest::new("partial-cell").with_input(&l.bytes);
            if *experimental {
                manifest = manifest.with_seed(*seed).with_tolerance("agreement", *tol);
            }
            emit(cli, stdout, manifest, result)
        }
        Command::Tessellate { model, samples, seed, tol } => {
            let l = load_valid(model)?;
            let report = match &l.file.theta {
                Some(_) => {
                    let pm = l.file.partial()?;
                    oracle::tessellation_check(Target::Partial(&pm), *samples, *seed, *tol)?
                }
                None => oracle::tessellation_check(Target::Full(&l.file.model), *samples, *seed, *tol)?,
            };
            let mut result = serde_json::to_value(&report).expect("serializable");
            result["threads"] = json!(oracle::thread_count());
            let manifest = RunManifest::new("tessellate")
                .with_input(&l.bytes)
                .with_seed(*seed)
                .with_tolerance("tol", *tol)
                .with_tolerance("mle", MleOptions::default().tol);
            emit(cli, stdout, manifest, result)
        }
        Command::Realize { polytope } => {
            let bytes = std::fs::read(polytope).map_err(Error::from)?;
            let text = String::from_utf8_lossy(&bytes);
            let data = parse_realization(&text)?;
            let input = data.polytope()?;
            let m = realize(&data)?;
            let cell = crate::logvor::cell_interior(&m, &vec![Rational::from_integer(0.into()); m.d()])?;
            let verdict = combinatorial_isomorphism(&cell, &input, DEFAULT_NODE_CAP);
            let result = json!({
                "model": model_to_json(&m, None),
                "input_f_vector": input.f_vector(),
                "cell_f_vector": cell.f_vector(),
                "isomorphic": verdict.is_isomorphic(),
            });
            emit(cli, stdout, RunManifest::new("realize").with_input(&bytes), result)
        }
        Command::ExportPlot { model, points } => {
            let l = load_valid(model)?;
            let csv = export_plot(&l.file.model, GridSpec { points: *points })?;
            let manifest = RunManifest::new("export-plot").with_input(&l.bytes);
            match &cli.out {
                Some(path) => write_with_sidecar(path, csv.as_bytes(), &manifest),
                None => stdout.write_all(csv.as_bytes()).map_err(|e| Error::from(e).into()),
            }
        }
        Command::Examples { name, from } => examples(cli, stdout, name.as_deref(), from.as_deref()),
        Command::Mle { model, u } => {
            let l = load_valid(model)?;
            let data = parse_data(u, l.file.model.n()).map_err(|e| Failure::Usage(format!("--u: {}", e)))?;
            let r = match &l.file.theta {
                Some(_) => oracle::mle_partial(&l.file.partial()?, &data, MleOptions::default())?,
                None => oracle::mle_full(&l.file.model, &data, MleOptions::default())?,
            };
            let manifest = RunManifest::new("mle").with_input(&l.bytes).with_tolerance("tol", MleOptions::default().tol);
            emit(cli, stdout, manifest, serde_json::to_value(&r).expect("serializable"))
        }
    }
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

fn examples(cli: &Cli, stdout: &mut dyn Write, name: Option<&str>, from: Option<&Path>) -> CmdResult<()> {
    let Some(name) = name else {
        let mut names: Vec<&str> = catalog::names().collect();
        names.push("m06");
        emit(cli, stdout, RunManifest::new("examples"), json!({ "available": names }))?;
        return Ok(());
    };
    let bytes: Vec<u8> = if name == "m06" {
        let Some(path) = from else {
            return Err(Failure::Usage(
                "the m06 model is not bundled; pass its fixture file with --from".into(),
            ));
        };
        let l = load_valid(path)?;
        l.bytes
    } else {
        catalog::source(name)?.as_bytes().to_vec()
    };
    let manifest = RunManifest::new("examples").with_input(&bytes);
    match &cli.out {
        Some(path) => write_with_sidecar(path, &bytes, &manifest),
        None => stdout.write_all(&bytes).map_err(|e| Error::from(e).into()),
    }
}

fn parse_realization(text: &str) -> CmdResult<RealizationData> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("polytope", e.to_string()))?;
    if v.get("M").is_some() {
        #[derive(serde::Deserialize)]
        struct Raw {
            #[serde(rename = "M")]
            m: Vec<Vec<crate::io::Rat>>,
            b: Vec<crate::io::Rat>,
        }
        let raw: Raw = serde_json::from_value(v).map_err(|e| Error::parse("polytope", e.to_string()))?;
        let n = raw.m.first().map_or(0, Vec::len);
        let rows: Vec<RatVector> = raw.m.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        let m = RatMatrix::from_rows(&rows, n)?;
        Ok(RealizationData::new(m, raw.b.into_iter().map(|x| x.0).collect())?)
    } else {
        let p = crate::io::parse_polytope(text)?;
        Ok(RealizationData::from_polytope(&p)?)
    }
}

pub fn validate_json(file: &ModelFile) -> Value {
    let m = &file.model;
    let violations = m.validate();
    let mut out = json!({
        "name": m.name,
        "n": m.n(),
        "d": m.d(),
        "valid": violations.is_empty(),
        "violations": violations,
    });
    if !violations.is_empty() {
        return out;
    }
    if let (Ok(theta), Ok(t)) = (m.parameter_polytope(), m.is_transversal()) {
        out["parameter_polytope"] = polytope_to_json(&theta);
        out["model_vertices"] = json!(m
            .model_vertices()
            .unwrap_or_default()
            .iter()
            .map(|v| json!({"x": rat_strings(&v.x), "p": rat_strings(&v.p), "support": v.support}))
            .collect::<Vec<_>>());
        out["transversal"] = json!(t.transversal);
        out["offenders"] = json!(t.offenders.iter().map(|v| rat_strings(&v.x)).collect::<Vec<_>>());
    }
    if file.theta.is_some() {
        match file.partial() {
            Ok(pm) => {
                out["theta"] = polytope_to_json(&pm.theta);
                out["theta_facets_on_simplex_boundary"] = json!((0..pm.theta.halfspaces().len())
                    .filter(|&f| pm.facet_on_simplex_boundary(f))
                    .collect::<Vec<_>>());
            }
            Err(e) => {
                out["valid"] = json!(false);
                out["violations"] = json!([{"invariant": "theta", "detail": e.to_string()}]);
            }
        }
    }
    out
}

pub fn cocircuits_json(m: &LinearModel) -> Value {
    let names = parameter_names(m.d());
    let raw = positive_cocircuits(m.b());
    let fs = vertex_functions(m);
    json!({
        "count": raw.len(),
        "parameters": names,
        "cocircuits": raw.iter().zip(&fs).map(|(z, f)| json!({
            "support": z.support,
            "coeffs": rat_strings(&z.coeffs),
            "normalized": rat_strings(&f.z.coeffs),
            "vertex_function": f.describe(&names),
        })).collect::<Vec<_>>(),
    })
}

pub fn cell_command_json(m: &LinearModel, x: &[Rational]) -> std::result::Result<Value, Error> {
    let (pt, cell) = cell_at(m, x)?;
    let mut out = json!({
        "x": rat_strings(x),
        "p": rat_strings(&pt.p),
        "kind": kind_name(pt.kind),
        "support": pt.support,
        "cell": cell_json(&cell),
    });
    let theta = m.parameter_polytope()?;
    if theta.vertex_index(x).is_some() {
        let w = degeneration_witness(m, &pt)?;
        out["vertex_analysis"] = json!({
            "zero_set": w.zero_set,
            "basis": w.basis,
            "dependent": w.dependent,
            "degenerate": w.is_degenerate(),
            "affected_cocircuits": w.affected.iter().map(|(k, e)| json!({"index": k, "extra_zeros": e})).collect::<Vec<_>>(),
        });
    }
    Ok(out)
}

fn probe_json(p: &SideProbe) -> Value {
    json!({
        "segment_end": rat_strings(&p.end),
        "segment_end_parameter": rat_strings(&p.end_parameter),
        "fraction_inside_face": format_rational(&p.fraction_inside),
        "meets_relative_interior": p.meets_relative_interior(),
    })
}

fn certificate_json(c: &SideCertificate) -> Value {
    json!({
        "cut_normal": rat_strings(&c.normal),
        "kept": if c.kept_below { "below" } else { "above" },
        "below": probe_json(&c.below),
        "above": probe_json(&c.above),
    })
}

pub fn facet_result_json(r: &FacetCellResult) -> Value {
    json!({
        "facet": r.facet,
        "x": rat_strings(&r.x),
        "p": rat_strings(&r.p),
        "F_cell": cell_json(&r.f_cell),
        "M_cell": cell_json(&r.m_cell),
        "Q": cell_json(&r.q),
        "Q_bar": cell_json(&r.q_bar),
        "side_certificate": certificate_json(&r.certificate),
    })
}

fn facet_index_of(pm: &PartialLinearModel, x: &[Rational]) -> Option<usize> {
    let tight: Vec<usize> = (0..pm.theta.halfspaces().len())
        .filter(|&f| num_traits::Zero::is_zero(&pm.theta.halfspaces()[f].slack(x)))
        .collect();
    if tight.len() == 1 {
        Some(tight[0])
    } else {
        None
    }
}

fn partial_json(
    pm: &PartialLinearModel,
    facet: Option<usize>,
    x: &[Rational],
    experimental: bool,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CmdResult<Value> {
    if let Some(f) = facet {
        return Ok(facet_result_json(&cell_partial_facet(pm, f, x)?));
    }
    let pt = pm.point_at(x)?;
    if pt.kind == PointKind::Interior {
        let cell = cell_partial_interior(pm, x)?;
        return Ok(json!({"x": rat_strings(x), "p": rat_strings(&pt.p), "location": "interior", "cell": cell_json(&cell)}));
    }
    let face = minimal_face(pm, x)?;
    let face_dim = crate::linalg::affine_dim(&face);
    if !experimental {
        if face_dim + 1 == pm.d() as isize {
            let f = facet_index_of(pm, x).expect("point on exactly one facet");
            return Ok(facet_result_json(&cell_partial_facet(pm, f, x)?));
        }
        return Err(Failure::Usage(format!(
            "the point lies on a face of dimension {}; pass --experimental for the conjectured cell",
            face_dim
        )));
    }
    let c = cell_partial_face_conjecture(pm, x)?;
    let agreement = oracle::conjecture_agreement(pm, &c, samples, seed, tol)?;
    Ok(json!({
        "experimental": true,
        "x": rat_strings(&c.x),
        "p": rat_strings(&c.p),
        "face_dim": c.face_dim,
        "face": c.face.iter().map(|v| rat_strings(v)).collect::<Vec<_>>(),
        "cofaces": c.cofaces.iter().map(|g| g.iter().map(|v| rat_strings(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "halves": c.halves.iter().map(|(q, cert)| json!({"Q": cell_json(q), "side_certificate": certificate_json(cert)})).collect::<Vec<_>>(),
        "candidate": cell_json(&c.candidate),
        "predicted_dim": c.predicted_dim,
        "general_position_proxy": {"criterion": "transversality of the extension", "value": c.general_position_proxy},
        "agreement": agreement,
    }))
}
