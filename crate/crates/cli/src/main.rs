//! `ckrep`: build quantum-space graphs, Pythagorean modules and their lifts,
//! check them, and classify spectra.
//!
//! Exit codes: 0 success, 1 a well-formed check failed, 2 usage or data error.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ckrep::codec::{
    format_complex, graph_from_json, graph_to_dot, graph_to_json, lift_to_json, matrix_to_value,
    module_from_json, module_to_json, parse_complex, spectrum_to_json,
};
use ckrep::graph::Graph;
use ckrep::lift::TruncatedLift;
use ckrep::matrix::{C64, ONE, ZERO};
use ckrep::module::{
    are_equivalent, intertwiner_space, is_indecomposable, is_irreducible, isolated_module,
    one_dim_module, random_module, validate_module, Equivalence, GradedMap, PythagoreanModule,
};
use ckrep::quantum::{
    lens_graph_coprime, projective_graph, sphere_even_graph, sphere_odd_graph,
    validate_quantum_graph, GraphFamily, LensParams,
};
use ckrep::spectrum::{check_hypotheses, classify, representative_module, Component};
use ckrep::Exec;

#[derive(Parser)]
#[command(
    name = "ckrep",
    version,
    about = "Graph algebras of quantum spaces: modules, lifts and spectra"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build and check graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Build and inspect Pythagorean modules.
    #[command(subcommand)]
    Module(ModuleCommand),
    /// Truncated lifted representations.
    #[command(subcommand)]
    Lift(LiftCommand),
    /// Spectrum description of a graph.
    Classify { graph: PathBuf },
    /// Representatives of spectrum components.
    #[command(subcommand)]
    Spectrum(SpectrumCommand),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    SphereOdd,
    SphereEven,
    Projective,
    Lens,
}

#[derive(Args)]
struct FamilyArgs {
    /// Number of looped vertices.
    #[arg(long)]
    n: usize,
    /// Cyclic order of the lens space.
    #[arg(long)]
    p: Option<u32>,
    /// Lens weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u32>>,
}

impl FamilyArgs {
    fn family(&self, kind: FamilyKind) -> Result<GraphFamily> {
        Ok(match kind {
            FamilyKind::SphereOdd => GraphFamily::SphereOdd { n: self.n },
            FamilyKind::SphereEven => GraphFamily::SphereEven { n: self.n },
            FamilyKind::Projective => GraphFamily::Projective { n: self.n },
            FamilyKind::Lens => {
                let p = self.p.ok_or_else(|| anyhow!("lens graphs need --p"))?;
                let weights = self
                    .weights
                    .clone()
                    .ok_or_else(|| anyhow!("lens graphs need --weights"))?;
                GraphFamily::Lens(LensParams::new(self.n, p, weights)?)
            }
        })
    }
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Construct a family graph.
    Make {
        #[arg(value_enum)]
        family: FamilyKind,
        #[command(flatten)]
        params: FamilyArgs,
        /// Write the graph JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a graph: the family structure when --family is given, the
    /// classification hypotheses otherwise.
    Check {
        graph: PathBuf,
        #[arg(long, value_enum, requires = "n")]
        family: Option<FamilyKind>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
}

#[derive(Subcommand)]
enum ModuleCommand {
    /// One-dimensional module at a vertex: the loop acts by --z, or all
    /// operators vanish when --z is omitted.
    Make {
        graph: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random module.
    Random {
        graph: PathBuf,
        /// Dimensions as `label:dim,...` (missing vertices get 0) or one
        /// number per vertex in graph order.
        #[arg(long)]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-vertex isometry residuals.
    Check {
        module: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Irreducibility and indecomposability.
    Irreducible { module: PathBuf },
    /// Basis of the intertwiner space between two modules.
    Intertwiners { source: PathBuf, target: PathBuf },
    /// Decide whether two modules are equivalent.
    Equivalent { first: PathBuf, second: PathBuf },
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long)]
    module: PathBuf,
    #[arg(long)]
    level: usize,
}

#[derive(Subcommand)]
enum LiftCommand {
    /// Basis listing, embeddings and generator matrices per level.
    Build {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residuals of the Cuntz–Krieger relations on the lift.
    Check {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Eigenvalue of the loop generator at a vertex on the class of a basis vector.
    Eigen {
        #[command(flatten)]
        lift: LiftArgs,
        #[arg(long)]
        vertex: String,
        /// Basis vector of the fiber at the vertex.
        #[arg(long, default_value_t = 0)]
        fiber: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum SpectrumCommand {
    /// Representative module of a circle (with --z) or an isolated point.
    Module {
        graph: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Status {
    Passed,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Passed) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &FsPath) -> Result<Graph> {
    graph_from_json(&read(path)?).with_context(|| format!("decoding graph {}", path.display()))
}

fn load_module(path: &FsPath) -> Result<PythagoreanModule> {
    module_from_json(&read(path)?).with_context(|| format!("decoding module {}", path.display()))
}

/// Writes `text` to `out`, or to stdout without one.
fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn report(format: Format, value: &Value, text: &str) {
    match format {
        Format::Json => println!("{value}"),
        Format::Text => println!("{text}"),
    }
}

fn vertex(g: &Graph, label: &str) -> Result<usize> {
    Ok(g.require_vertex(label)?)
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Passed
    } else {
        Status::Failed
    }
}

fn run(cli: &Cli) -> Result<Status> {
    let format = cli.format;
    match &cli.command {
        Command::Graph(cmd) => graph_command(format, cmd),
        Command::Module(cmd) => module_command(format, cmd),
        Command::Lift(cmd) => lift_command(format, cmd),
        Command::Classify { graph } => {
            let g = load_graph(graph)?;
            let spectrum = classify(&g)?;
            println!("{}", spectrum_to_json(&spectrum));
            let hypotheses = check_hypotheses(&g);
            if format == Format::Text && hypotheses.by_analogy {
                eprintln!("note: {}", hypotheses.diagnostics().join("; "));
            }
            Ok(Status::Passed)
        }
        Command::Spectrum(SpectrumCommand::Module {
            graph,
            vertex: label,
            z,
            out,
        }) => {
            let g = Arc::new(load_graph(graph)?);
            let v = vertex(&g, label)?;
            let component = match z {
                Some(z) => Component::Circle {
                    vertex: v,
                    z: parse_complex(z)?,
                },
                None => Component::Point { vertex: v },
            };
            let m = representative_module(g, component)?;
            emit(out.as_ref(), &module_to_json(&m))?;
            Ok(Status::Passed)
        }
    }
}

fn graph_command(format: Format, cmd: &GraphCommand) -> Result<Status> {
    match cmd {
        GraphCommand::Make {
            family,
            params,
            out,
            dot,
        } => {
            if params.n == 0 {
                bail!("--n must be at least 1");
            }
            let g = match params.family(*family)? {
                GraphFamily::SphereOdd { n } => sphere_odd_graph(n),
                GraphFamily::SphereEven { n } => sphere_even_graph(n),
                GraphFamily::Projective { n } => projective_graph(n),
                GraphFamily::Lens(lens) => lens_graph_coprime(&lens)?,
            };
            emit(out.as_ref(), &graph_to_json(&g))?;
            if let Some(path) = dot {
                fs::write(path, graph_to_dot(&g))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Status::Passed)
        }
        GraphCommand::Check {
            graph,
            family,
            n,
            p,
            weights,
        } => {
            let g = load_graph(graph)?;
            match family {
                Some(kind) => {
                    let args = FamilyArgs {
                        n: n.expect("clap requires --n with --family"),
                        p: *p,
                        weights: weights.clone(),
                    };
                    let structure = validate_quantum_graph(&g, &args.family(*kind)?);
                    let checks: Vec<Value> = structure
                        .checks
                        .iter()
                        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                        .collect();
                    let text = structure
                        .checks
                        .iter()
                        .map(|c| {
                            format!(
                                "{} {}: {}",
                                if c.passed { "ok  " } else { "FAIL" },
                                c.name,
                                c.detail
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n");
                    report(
                        format,
                        &json!({ "passed": structure.passed(), "checks": checks }),
                        &text,
                    );
                    Ok(status(structure.passed()))
                }
                None => {
                    let hypotheses = check_hypotheses(&g);
                    let diagnostics = hypotheses.diagnostics();
                    let mut text = format!("class: {}", hypotheses.class);
                    for d in &diagnostics {
                        text.push_str(&format!("\n{d}"));
                    }
                    report(
                        format,
                        &json!({
                            "class": hypotheses.class,
                            "by_analogy": hypotheses.by_analogy,
                            "diagnostics": diagnostics,
                        }),
                        &text,
                    );
                    Ok(status(
                        hypotheses.class != ckrep::spectrum::GraphClass::Unsupported,
                    ))
                }
            }
        }
    }
}

fn parse_dims(g: &Graph, text: &str) -> Result<Vec<usize>> {
    let mut dims = vec![0; g.vertex_count()];
    if text.contains(':') {
        for item in text.split(',') {
            let (label, d) = item
                .split_once(':')
                .ok_or_else(|| anyhow!("malformed dims entry {item:?}, expected label:dim"))?;
            dims[vertex(g, label.trim())?] = d
                .trim()
                .parse()
                .with_context(|| format!("dimension in {item:?}"))?;
        }
    } else {
        let values: Vec<usize> = text
            .split(',')
            .map(|d| d.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .context("dims must be integers")?;
        if values.len() != g.vertex_count() {
            bail!(
                "--dims lists {} values for {} vertices",
                values.len(),
                g.vertex_count()
            );
        }
        dims = values;
    }
    Ok(dims)
}

fn graded_map_value(g: &Graph, theta: &GradedMap) -> Value {
    Value::Object(
        g.vertices()
            .iter()
            .zip(&theta.blocks)
            .map(|(v, b)| (v.to_string(), matrix_to_value(b)))
            .collect(),
    )
}

fn module_command(format: Format, cmd: &ModuleCommand) -> Result<Status> {
    match cmd {
        ModuleCommand::Make {
            graph,
            vertex: label,
            z,
            out,
        } => {
            let g = Arc::new(load_graph(graph)?);
            let v = vertex(&g, label)?;
            let m = match z {
                Some(z) => one_dim_module(g, v, parse_complex(z)?)?,
                None => isolated_module(g, v)?,
            };
            emit(out.as_ref(), &module_to_json(&m))?;
            Ok(Status::Passed)
        }
        ModuleCommand::Random {
            graph,
            dims,
            seed,
            out,
        } => {
            let g = Arc::new(load_graph(graph)?);
            let dims = parse_dims(&g, dims)?;
            let m = random_module(g, &dims, *seed)?;
            emit(out.as_ref(), &module_to_json(&m))?;
            Ok(Status::Passed)
        }
        ModuleCommand::Check { module, tol } => {
            let m = load_module(module)?;
            let validation = validate_module(&m, *tol);
            let g = m.graph();
            let residuals: serde_json::Map<String, Value> = g
                .vertices()
                .iter()
                .zip(&validation.residuals)
                .map(|(v, r)| (v.to_string(), json!(r)))
                .collect();
            let mut text = String::new();
            for (v, r) in g.vertices().iter().zip(&validation.residuals) {
                match r {
                    Some(r) => text.push_str(&format!(
                        "{v}: {r:.3e}{}\n",
                        if *r > *tol { "  FAIL" } else { "" }
                    )),
                    None => text.push_str(&format!("{v}: exempt\n")),
                }
            }
            text.push_str(if validation.passed() {
                "passed"
            } else {
                "failed"
            });
            report(
                format,
                &json!({ "passed": validation.passed(), "tol": tol, "residuals": residuals }),
                &text,
            );
            Ok(status(validation.passed()))
        }
        ModuleCommand::Irreducible { module } => {
            let m = load_module(module)?;
            let irreducible = is_irreducible(&m)?;
            let indecomposable = is_indecomposable(&m)?;
            report(
                format,
                &json!({ "irreducible": irreducible, "indecomposable": indecomposable }),
                &format!("irreducible: {irreducible}\nindecomposable: {indecomposable}"),
            );
            Ok(status(irreducible))
        }
        ModuleCommand::Intertwiners { source, target } => {
            let (a, b) = (load_module(source)?, load_module(target)?);
            let space = intertwiner_space(&a, &b)?;
            let basis: Vec<Value> = space
                .basis
                .iter()
                .map(|t| graded_map_value(a.graph(), t))
                .collect();
            report(
                format,
                &json!({ "dimension": space.dim(), "basis": basis }),
                &format!("dimension: {}", space.dim()),
            );
            Ok(Status::Passed)
        }
        ModuleCommand::Equivalent { first, second } => {
            let (a, b) = (load_module(first)?, load_module(second)?);
            let verdict = are_equivalent(&a, &b)?;
            let (name, certificate, ok) = match &verdict {
                Equivalence::Equivalent(theta) => {
                    ("equivalent", graded_map_value(a.graph(), theta), true)
                }
                Equivalence::Inequivalent => ("inequivalent", Value::Null, false),
                Equivalence::Undetermined => ("undetermined", Value::Null, false),
            };
            report(
                format,
                &json!({ "verdict": name, "certificate": certificate }),
                name,
            );
            Ok(status(ok))
        }
    }
}

fn lift_command(format: Format, cmd: &LiftCommand) -> Result<Status> {
    match cmd {
        LiftCommand::Build { lift, out } => {
            let m = load_module(&lift.module)?;
            let t = TruncatedLift::new(&m, lift.level, Exec::default())?;
            emit(out.as_ref(), &lift_to_json(&t))?;
            Ok(Status::Passed)
        }
        LiftCommand::Check { lift, tol } => {
            let m = load_module(&lift.module)?;
            // Invalid modules are lifted anyway so their residuals can be reported.
            let t = TruncatedLift::new_unchecked(&m, lift.level, Exec::default());
            let r = t.ck_residuals();
            let rows = [
                ("projection_orthogonality", r.projection_orthogonality),
                ("projection_completeness", r.projection_completeness),
                ("isometry", r.isometry),
                ("range", r.range),
                ("class_relation", r.class_relation),
            ];
            let passed = r.passed(*tol);
            let mut text: String = rows
                .iter()
                .map(|(name, value)| {
                    format!(
                        "{name}: {value:.3e}{}\n",
                        if *value > *tol { "  FAIL" } else { "" }
                    )
                })
                .collect();
            text.push_str(if passed { "passed" } else { "failed" });
            let mut value: serde_json::Map<String, Value> = rows
                .iter()
                .map(|(name, v)| (name.to_string(), json!(v)))
                .collect();
            value.insert("level".into(), json!(lift.level));
            value.insert("tol".into(), json!(tol));
            value.insert("passed".into(), json!(passed));
            report(format, &Value::Object(value), &text);
            Ok(status(passed))
        }
        LiftCommand::Eigen {
            lift,
            vertex: label,
            fiber,
            tol,
        } => {
            let m = load_module(&lift.module)?;
            let v = vertex(m.graph(), label)?;
            let d = m.dim(v);
            if *fiber >= d {
                bail!("fiber {fiber} is out of range: H at vertex {label} has dimension {d}");
            }
            let xi: Vec<C64> = (0..d)
                .map(|b| if b == *fiber { ONE } else { ZERO })
                .collect();
            let t = TruncatedLift::new(&m, lift.level, Exec::default())?;
            let probe = t.loop_eigenvalue(v, &xi)?;
            let passed = probe.residual <= *tol;
            report(
                format,
                &json!({
                    "eigenvalue": [probe.value.re, probe.value.im],
                    "residual": probe.residual,
                    "is_eigenvector": passed,
                }),
                &format!(
                    "eigenvalue: {}\nresidual: {:.3e}\n{}",
                    format_complex(probe.value),
                    probe.residual,
                    if passed {
                        "eigenvector"
                    } else {
                        "not an eigenvector"
                    }
                ),
            );
            Ok(status(passed))
        }
    }
}
