//! Argument grammar and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grpgeo::coordinate::{theorem1_crosscheck, CoordinateGroup};
use grpgeo::group::{builtin, from_permutation_generators, subgroup_generate, Family, Perm};
use grpgeo::structure::{
    check_malnormal, has_ntk, is_commutative_transitive, is_conjugately_separated, is_domain,
    zero_divisor_witness, DomainMethod, ElemRef, Lattice, SubgroupClass, Witness,
};
use grpgeo::word::parse_system;
use grpgeo::zariski::{PointSet, Space};
use grpgeo::{Elem, FiniteGroup, Limits, Mode};
use serde_json::{json, Map, Value};

use crate::corpus::{Commutativity, CorpusSpec};
use crate::error::{CliError, EXIT_FAILED, EXIT_OK};
use crate::files::{read_group, write_gperm, write_gtab};
use crate::render::{point_labels, set_labels};
use crate::report::{Report, SubjectReport, VerdictRecord};
use crate::suites::{run_suites, Suite, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "grpgeo",
    version,
    about = "Algebraic geometry over finite groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Largest group order accepted.
    #[arg(long, global = true, env = "GRPGEO_MAX_ORDER", default_value_t = 128)]
    pub max_order: usize,
    /// Largest subgroup lattice enumerated.
    #[arg(
        long,
        global = true,
        env = "GRPGEO_MAX_LATTICE",
        default_value_t = 50_000
    )]
    pub max_lattice: usize,
    /// Largest point set accepted by closure and coordinate groups.
    #[arg(long, global = true, env = "GRPGEO_MAX_WIDTH", default_value_t = 4)]
    pub max_width: usize,
    /// Element-operation budget per computation.
    #[arg(
        long,
        global = true,
        env = "GRPGEO_BUDGET",
        default_value_t = 200_000_000
    )]
    pub budget: u64,
}

impl LimitArgs {
    pub fn limits(&self) -> Limits {
        Limits {
            max_order: self.max_order,
            max_lattice_order: self.max_order,
            max_lattice: self.max_lattice,
            max_width: self.max_width,
            budget: self.budget,
            ..Limits::default()
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GroupArgs {
    /// A `.gtab` or `.gperm` file.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// A built-in family, e.g. `S3`, `D8`, `Q8`, `C2xC2`.
    #[arg(long)]
    pub family: Option<Family>,
}

impl GroupArgs {
    pub fn load(&self, limits: &Limits) -> Result<(String, FiniteGroup), CliError> {
        match (&self.group, &self.family) {
            (Some(path), _) => Ok((path.display().to_string(), read_group(path, limits)?)),
            (None, Some(f)) => Ok((f.to_string(), builtin(f, limits)?)),
            (None, None) => Err(CliError::Usage(
                "one of --group or --family is required".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Number of variables.
    #[arg(short = 'n', default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value = "coefficient")]
    pub mode: Mode,
    /// Points separated by `;`, coordinates by commas, e.g. "a,b; e,a".
    #[arg(long)]
    pub points: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a group and describe or export it.
    Group {
        #[arg(long, conflicts_with_all = ["group", "family"])]
        /// Permutation generators in cycle notation, separated by `;`.
        gens: Option<String>,
        /// Degree for --gens.
        #[arg(long, requires = "gens")]
        degree: Option<usize>,
        #[arg(long)]
        group: Option<PathBuf>,
        #[arg(long)]
        family: Option<Family>,
        /// Write the group in a file format instead of describing it.
        #[arg(long, value_enum)]
        export: Option<ExportFormat>,
    },
    /// Test a structural property.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Solve a system of equations.
    Variety {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(long, default_value = "coefficient")]
        mode: Mode,
        /// Equations separated by `;`, e.g. "x1^2; [x1, a]".
        #[arg(long)]
        system: String,
    },
    /// Zariski closure of a finite point set.
    Closure(PointArgs),
    /// Irreducibility of an algebraic set, by generic point.
    Irreducible(PointArgs),
    /// Irreducible components of an algebraic set.
    Components(PointArgs),
    /// Coordinate group of a point set.
    Coord(PointArgs),
    /// Compare irreducibility, the G-domain property and embeddability.
    Theorem1(PointArgs),
    /// Run verification suites over a corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Gtab,
    /// The right regular representation on the generating set.
    Gperm,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    Domain {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value = "all")]
        method: DomainMethod,
    },
    Csa {
        #[command(flatten)]
        group: GroupArgs,
    },
    Csnk {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'k', default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    Ct {
        #[command(flatten)]
        group: GroupArgs,
    },
    Ntk {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(short = 'k', default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    Malnormal {
        #[command(flatten)]
        group: GroupArgs,
        /// Generator labels of the subgroup, separated by commas or spaces.
        #[arg(long)]
        subgroup: String,
    },
    ZeroDivisor {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run; repeat or separate with commas.
    #[arg(long = "suite", value_delimiter = ',', required = true)]
    pub suites: Vec<Suite>,
    /// Skip the built-in families.
    #[arg(long)]
    pub no_builtin: bool,
    /// Extra group files.
    #[arg(long = "group")]
    pub files: Vec<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub min_order: usize,
    #[arg(long, default_value_t = 24)]
    pub corpus_max_order: usize,
    /// Leave out A5 and the larger dihedral and dicyclic groups.
    #[arg(long)]
    pub no_extras: bool,
    #[arg(long, value_enum, default_value_t = Commutativity::Any)]
    pub commutativity: Commutativity,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub zariski_cases: usize,
    #[arg(long, default_value_t = 20)]
    pub theorem1_pairs: usize,
    #[arg(long, default_value_t = 50)]
    pub union_samples: usize,
    /// Record elapsed time per verdict; output is then not reproducible.
    #[arg(long)]
    pub timing: bool,
}

/// What a command produced.
pub struct Output {
    pub body: String,
    pub code: i32,
}

fn emit(format: Format, value: &Value, code: i32) -> Output {
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => text_of(value),
    };
    Output { body, code }
}

fn emit_report(format: Format, report: &Report, code: i32) -> Output {
    let body = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Output { body, code }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_string) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            if parts.len() == 1 {
                parts[0].clone()
            } else {
                format!("({})", parts.join(","))
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(compact).collect();
            format!("{{{}}}", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}: {}\n", compact(v)))
            .collect(),
        other => format!("{}\n", compact(other)),
    }
}

/// A report holding one subject and its verdicts.
fn single_report(
    command: &str,
    id: String,
    g: &FiniteGroup,
    verdicts: Vec<VerdictRecord>,
) -> Report {
    let config = json!({ "command": command, "provenance": g.provenance() });
    Report::new(
        config,
        vec![SubjectReport {
            id,
            order: g.order(),
            verdicts,
        }],
    )
}

/// Labels separated by commas or spaces; quote labels with spaces as `'(1 2)'`.
fn parse_labels(g: &FiniteGroup, text: &str) -> Result<Vec<Elem>, CliError> {
    Ok(grpgeo::word::parse_point(text, g)?)
}

fn load_points(
    args: &PointArgs,
    limits: &Limits,
) -> Result<(String, FiniteGroup, PointSet), CliError> {
    let (id, g) = args.group.load(limits)?;
    let points = grpgeo::word::parse_points(&args.points, args.n, &g)?;
    Ok((id, g, points.into_iter().collect()))
}

fn header(id: &str, n: usize, mode: Mode) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("group".into(), json!(id));
    m.insert("n".into(), json!(n));
    m.insert("mode".into(), json!(mode.to_string()));
    m
}

/// Right multiplication by each generator, on `1..=|G|`.
fn regular_generators(g: &FiniteGroup) -> Result<Vec<Perm>, CliError> {
    g.generating_set()
        .into_iter()
        .map(|s| {
            let images = g.elements().map(|x| g.mul(x, s).0).collect();
            Ok(Perm::from_images(images)?)
        })
        .collect()
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let limits = cli.limits.limits();
    let format = cli.format;
    match &cli.command {
        Command::Group {
            gens,
            degree,
            group,
            family,
            export,
        } => {
            let (id, g) = match (gens, degree) {
                (Some(text), Some(d)) => {
                    let perms = text
                        .split(';')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| Perm::parse_cycles(t, *d))
                        .collect::<Result<Vec<_>, _>>()?;
                    (
                        text.clone(),
                        from_permutation_generators(*d, &perms, &limits)?,
                    )
                }
                (Some(_), None) => return Err(CliError::Usage("--gens needs --degree".into())),
                _ => GroupArgs {
                    group: group.clone(),
                    family: family.clone(),
                }
                .load(&limits)?,
            };
            let body = match export {
                Some(ExportFormat::Gtab) => write_gtab(&g),
                Some(ExportFormat::Gperm) => write_gperm(g.order(), &regular_generators(&g)?),
                None => {
                    let v = json!({
                        "group": id,
                        "order": g.order(),
                        "abelian": g.is_abelian(),
                        "provenance": g.provenance(),
                        "table-hash": g.table_hash(),
                        "labels": g.labels(),
                        "generators": g.generating_set().iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
                    });
                    return Ok(emit(format, &v, EXIT_OK));
                }
            };
            Ok(Output {
                body,
                code: EXIT_OK,
            })
        }
        Command::Check(c) => check(c, &limits, format),
        Command::Variety {
            group,
            n,
            mode,
            system,
        } => {
            let (id, g) = group.load(&limits)?;
            let sys = parse_system(system, *n, *mode, &g)?;
            let space = Space::new(&g, *n, *mode, limits);
            let set = space.solution_set(&sys)?;
            let mut m = header(&id, *n, *mode);
            m.insert("system".into(), json!(system));
            m.insert("size".into(), json!(set.points.len()));
            m.insert("points".into(), json!(set_labels(&g, &set.points)));
            Ok(emit(format, &Value::Object(m), EXIT_OK))
        }
        Command::Closure(args) => {
            let (id, g, u) = load_points(args, &limits)?;
            let space = Space::new(&g, args.n, args.mode, limits);
            let c = space.algebraic_closure(&u)?;
            let mut m = header(&id, args.n, args.mode);
            m.insert("points".into(), json!(set_labels(&g, &u)));
            m.insert("algebraic".into(), json!(c == u));
            m.insert("whole-space".into(), json!(c.len() == space.size()?));
            m.insert("size".into(), json!(c.len()));
            m.insert("closure".into(), json!(set_labels(&g, &c)));
            Ok(emit(format, &Value::Object(m), EXIT_OK))
        }
        Command::Irreducible(args) => {
            let (id, g, y) = load_points(args, &limits)?;
            let space = Space::new(&g, args.n, args.mode, limits);
            let generic = space.generic_point(&y)?;
            let mut m = header(&id, args.n, args.mode);
            m.insert("points".into(), json!(set_labels(&g, &y)));
            m.insert("irreducible".into(), json!(generic.is_some()));
            m.insert(
                "generic-point".into(),
                json!(generic.as_ref().map(|p| point_labels(&g, p))),
            );
            Ok(emit(format, &Value::Object(m), EXIT_OK))
        }
        Command::Components(args) => {
            let (id, g, y) = load_points(args, &limits)?;
            let space = Space::new(&g, args.n, args.mode, limits);
            let comps = space.irreducible_components(&y)?;
            let mut m = header(&id, args.n, args.mode);
            m.insert("points".into(), json!(set_labels(&g, &y)));
            m.insert(
                "components".into(),
                Value::Array(comps.iter().map(|c| json!(set_labels(&g, c))).collect()),
            );
            Ok(emit(format, &Value::Object(m), EXIT_OK))
        }
        Command::Coord(args) => {
            let (id, g, y) = load_points(args, &limits)?;
            let space = Space::new(&g, args.n, args.mode, limits);
            let cg = CoordinateGroup::new(&space, &y)?;
            let carrier = cg.carrier();
            let mut m = header(&id, args.n, args.mode);
            m.insert("points".into(), json!(set_labels(&g, &y)));
            m.insert(
                "point-order".into(),
                json!(cg
                    .point_order()
                    .iter()
                    .map(|p| point_labels(&g, p))
                    .collect::<Vec<_>>()),
            );
            m.insert("carrier-order".into(), json!(carrier.order()));
            m.insert("abelian".into(), json!(carrier.is_abelian()));
            m.insert("table-hash".into(), json!(carrier.table_hash()));
            m.insert(
                "variables".into(),
                json!((0..args.n)
                    .map(|v| carrier.label(cg.var_image(v)).to_string())
                    .collect::<Vec<_>>()),
            );
            if args.mode == Mode::Coefficient {
                m.insert("g-domain".into(), json!(cg.is_g_domain()?));
                let e = cg.find_embedding_point(&space)?;
                m.insert(
                    "embedding-point".into(),
                    json!(e.as_ref().map(|p| point_labels(&g, p))),
                );
            }
            Ok(emit(format, &Value::Object(m), EXIT_OK))
        }
        Command::Theorem1(args) => {
            let (id, g, y) = load_points(args, &limits)?;
            let space = Space::new(&g, args.n, args.mode, limits);
            let r = theorem1_crosscheck(&space, &y)?;
            let mut m = header(&id, args.n, args.mode);
            m.insert("points".into(), json!(set_labels(&g, &y)));
            m.insert("carrier-order".into(), json!(r.carrier_order));
            m.insert("irreducible".into(), json!(r.irreducible));
            m.insert(
                "generic-point".into(),
                json!(r.generic_point.as_ref().map(|p| point_labels(&g, p))),
            );
            m.insert("g-domain".into(), json!(r.gamma_g_domain));
            m.insert(
                "embedding-point".into(),
                json!(r.embedding_point.as_ref().map(|p| point_labels(&g, p))),
            );
            m.insert("agree".into(), json!(r.agree));
            m.insert("notes".into(), json!(r.notes));
            let code = if r.agree { EXIT_OK } else { EXIT_FAILED };
            Ok(emit(format, &Value::Object(m), code))
        }
        Command::Verify(v) => {
            let corpus = CorpusSpec {
                builtin: !v.no_builtin,
                files: v.files.clone(),
                min_order: v.min_order,
                max_order: v.corpus_max_order,
                extras: !v.no_extras,
                commutativity: v.commutativity,
            };
            let subjects = corpus.resolve(&limits)?;
            let cfg = SuiteConfig {
                limits,
                seed: v.seed,
                zariski_cases: v.zariski_cases,
                theorem1_pairs: v.theorem1_pairs,
                union_samples: v.union_samples,
                timing: v.timing,
                ..SuiteConfig::default()
            };
            let report = run_suites(&subjects, &v.suites, &cfg, json!({ "corpus": corpus }));
            let code = if report.any_failed() {
                EXIT_FAILED
            } else {
                EXIT_OK
            };
            Ok(emit_report(format, &report, code))
        }
    }
}

fn check(c: &CheckCommand, limits: &Limits, format: Format) -> Result<Output, CliError> {
    let (name, (id, g), verdict) = match c {
        CheckCommand::Domain { group, method } => {
            let (id, g) = group.load(limits)?;
            let v = VerdictRecord::from_verdict(&is_domain(&g, *method)?);
            ("domain", (id, g), v)
        }
        CheckCommand::Csa { group } => {
            let (id, g) = group.load(limits)?;
            let v = VerdictRecord::from_verdict(&is_conjugately_separated(
                &Lattice::new(&g, limits)?,
                SubgroupClass::Abelian,
            ));
            ("csa", (id, g), v)
        }
        CheckCommand::Csnk { group, k } => {
            let (id, g) = group.load(limits)?;
            let lat = Lattice::new(&g, limits)?;
            let v = VerdictRecord::from_verdict(&is_conjugately_separated(
                &lat,
                SubgroupClass::NilpotentClass(*k as usize),
            ));
            drop(lat);
            ("csnk", (id, g), v)
        }
        CheckCommand::Ct { group } => {
            let (id, g) = group.load(limits)?;
            let v = VerdictRecord::from_verdict(&is_commutative_transitive(&g));
            ("ct", (id, g), v)
        }
        CheckCommand::Ntk { group, k } => {
            let (id, g) = group.load(limits)?;
            let v = VerdictRecord::from_verdict(&has_ntk(&Lattice::new(&g, limits)?, *k as usize));
            ("ntk", (id, g), v)
        }
        CheckCommand::Malnormal { group, subgroup } => {
            let (id, g) = group.load(limits)?;
            let gens = parse_labels(&g, subgroup)?;
            let h = subgroup_generate(&g, &gens);
            let v = VerdictRecord::from_verdict(&check_malnormal(&h)).details(json!({
                "order": h.order(),
                "elements": h.elements().map(|x| g.label(x).to_string()).collect::<Vec<_>>(),
            }));
            ("malnormal", (id, g), v)
        }
        CheckCommand::ZeroDivisor { group, element } => {
            let (id, g) = group.load(limits)?;
            let x = match parse_labels(&g, element)?.as_slice() {
                [x] => *x,
                _ => return Err(CliError::Usage("--element takes exactly one label".into())),
            };
            let v = match zero_divisor_witness(&g, x) {
                Some(y) => {
                    let w = Witness::ZeroDivisor {
                        x: ElemRef::new(&g, x),
                        y: ElemRef::new(&g, y),
                    };
                    let mut v = VerdictRecord::new("zero-divisor", true);
                    v.witnesses
                        .push(serde_json::to_value(w).expect("witnesses serialize"));
                    v
                }
                None => {
                    let detail = format!(
                        "no non-trivial element commutes with every conjugate of {}",
                        g.label(x)
                    );
                    let mut v = VerdictRecord::new("zero-divisor", false);
                    v.witnesses.push(
                        serde_json::to_value(Witness::Counterexample { detail })
                            .expect("witnesses serialize"),
                    );
                    v
                }
            }
            .param("element", g.label(x));
            ("zero-divisor", (id, g), v)
        }
    };
    let report = single_report(&format!("check {name}"), id, &g, vec![verdict]);
    Ok(emit_report(format, &report, EXIT_OK))
}
