//! Input parsing, command execution and report rendering for the
//! `crystal-euler` binary.
//!
//! Group specification documents are JSON:
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "kummer",
//!   "rank": 4,
//!   "action": "column",
//!   "generators": [[[-1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]],
//!   "labels": ["x"],
//!   "caps": {"order_cap": 512, "h1_cap": 1000000}
//! }
//! ```
//!
//! `action` is `column` (default; `x ↦ g x`) or `row` (`x ↦ x g`, generators
//! are transposed on load). `labels`, `caps` and `schema_version` are optional.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::assemble::{
    branch_reduced_euler, equivariant_euler_class, specialize, Specialization,
};
use crate::classify::{classify_finite_subgroups, Classification, ClassifyOptions};
use crate::cohom1::CohomologyLimits;
use crate::crystal::{character_fixed_rank, fixed_lattice, GammaElement};
use crate::error::Error;
use crate::linalg::{IntVector, IntegerMatrix};
use crate::matgroup::{close_group, subgroup_classes, ElementSet, DEFAULT_ORDER_CAP};
use crate::orderposet::build_branch_poset;

pub const SCHEMA_VERSION: u64 = 1;
pub const REPORT_VERSION: u64 = 1;

/// Parsed and validated group specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub rank: usize,
    /// Generators in the column convention (already transposed for `row`).
    pub generators: Vec<IntegerMatrix>,
    pub labels: Vec<String>,
    pub order_cap: Option<usize>,
    pub h1_cap: Option<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("non-square matrix at {path}: {message}")]
    NonSquare { path: String, message: String },
    #[error("rank mismatch at {path}: matrix is {size}x{size}, rank is {rank}")]
    RankMismatch {
        path: String,
        size: usize,
        rank: usize,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> SpecError {
    SpecError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn as_count(v: &Value, path: &str) -> Result<u64, SpecError> {
    v.as_u64()
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn parse_matrix(v: &Value, path: &str) -> Result<Vec<Vec<i64>>, SpecError> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema(path, "expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{r}]");
        let entries = row
            .as_array()
            .ok_or_else(|| schema(&rpath, "expected an array of integers"))?;
        let mut parsed = Vec::with_capacity(entries.len());
        for (c, e) in entries.iter().enumerate() {
            parsed.push(
                e.as_i64()
                    .ok_or_else(|| schema(format!("{rpath}[{c}]"), "expected an integer"))?,
            );
        }
        out.push(parsed);
    }
    Ok(out)
}

/// Parses and validates a group specification document.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, SpecError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    const KNOWN: [&str; 7] = [
        "schema_version",
        "name",
        "rank",
        "action",
        "generators",
        "labels",
        "caps",
    ];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(schema(format!("$.{k}"), "unknown field"));
    }
    if let Some(v) = obj.get("schema_version") {
        let version = as_count(v, "$.schema_version")?;
        if version != SCHEMA_VERSION {
            return Err(schema(
                "$.schema_version",
                format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
            ));
        }
    }
    let name = match obj.get("name") {
        None => String::from("unnamed"),
        Some(v) => v
            .as_str()
            .ok_or_else(|| schema("$.name", "expected a string"))?
            .to_string(),
    };
    let rank = as_count(
        obj.get("rank").ok_or_else(|| schema("$.rank", "missing field"))?,
        "$.rank",
    )? as usize;
    let transpose = match obj.get("action").map(|v| v.as_str()) {
        None | Some(Some("column")) => false,
        Some(Some("row")) => true,
        Some(_) => return Err(schema("$.action", "expected \"column\" or \"row\"")),
    };
    let gens_value = obj
        .get("generators")
        .ok_or_else(|| schema("$.generators", "missing field"))?;
    let gens_array = gens_value
        .as_array()
        .ok_or_else(|| schema("$.generators", "expected an array of matrices"))?;
    let mut generators = Vec::with_capacity(gens_array.len());
    for (i, g) in gens_array.iter().enumerate() {
        let path = format!("$.generators[{i}]");
        let rows = parse_matrix(g, &path)?;
        let size = rows.len();
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != size) {
            return Err(SpecError::NonSquare {
                path: format!("{path}[{r}]"),
                message: format!("row has {} entries, matrix has {size} rows", row.len()),
            });
        }
        if size != rank {
            return Err(SpecError::RankMismatch { path, size, rank });
        }
        let m = if size == 0 {
            IntegerMatrix::zeros(0, 0)
        } else {
            IntegerMatrix::from_rows(&rows)
        };
        generators.push(if transpose { m.transpose() } else { m });
    }
    let labels = match obj.get("labels") {
        None => (1..=generators.len()).map(|i| format!("g{i}")).collect(),
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| schema("$.labels", "expected an array of strings"))?;
            if arr.len() != generators.len() {
                return Err(schema(
                    "$.labels",
                    format!("{} labels for {} generators", arr.len(), generators.len()),
                ));
            }
            let mut labels = Vec::new();
            for (i, l) in arr.iter().enumerate() {
                let s = l
                    .as_str()
                    .ok_or_else(|| schema(format!("$.labels[{i}]"), "expected a string"))?;
                if s.is_empty() || !s.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(schema(
                        format!("$.labels[{i}]"),
                        "labels must be nonempty and alphanumeric",
                    ));
                }
                labels.push(s.to_string());
            }
            labels
        }
    };
    let (mut order_cap, mut h1_cap) = (None, None);
    if let Some(caps) = obj.get("caps") {
        let caps = caps
            .as_object()
            .ok_or_else(|| schema("$.caps", "expected an object"))?;
        for (k, v) in caps {
            match k.as_str() {
                "order_cap" => order_cap = Some(as_count(v, "$.caps.order_cap")? as usize),
                "h1_cap" => h1_cap = Some(as_count(v, "$.caps.h1_cap")?),
                _ => return Err(schema(format!("$.caps.{k}"), "unknown field")),
            }
        }
    }
    Ok(GroupSpec {
        name,
        rank,
        generators,
        labels,
        order_cap,
        h1_cap,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Classify,
    Euler,
    Specialize,
    H1,
    FixedLattice,
    Poset,
    Subgroups,
    Selftest,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub format: Format,
    pub order_cap: Option<usize>,
    pub h1_cap: Option<u64>,
    pub parallel: bool,
    /// Restricts `specialize` to one map.
    pub map: Option<Specialization>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] SpecError),
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(Error::NonUnimodular { .. } | Error::DimensionMismatch { .. }) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

/// Rendered output plus whether the command succeeded.
#[derive(Clone, Debug)]
pub struct Report {
    pub output: String,
    pub success: bool,
}

impl Report {
    fn ok(output: String) -> Self {
        Report {
            output,
            success: true,
        }
    }
}

fn ratio(q: &BigRational) -> String {
    q.to_string()
}

fn matrix_json(m: &IntegerMatrix) -> Vec<Vec<String>> {
    m.row_vectors()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_string()).collect())
        .collect()
}

fn vector_json(v: &IntVector) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn render<T: Serialize>(value: &T, format: Format, table: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => table(),
    }
}

/// Left-aligned text table.
fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    line(rule.iter().map(String::as_str).collect(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

fn limits(spec: &GroupSpec, options: &Options) -> (usize, CohomologyLimits) {
    let order_cap = options
        .order_cap
        .or(spec.order_cap)
        .unwrap_or(DEFAULT_ORDER_CAP);
    let mut lim = CohomologyLimits::default();
    if let Some(cap) = options.h1_cap.or(spec.h1_cap) {
        lim.max_classes = cap;
    }
    (order_cap, lim)
}

/// Runs the full classification for a spec.
pub fn classify_spec(spec: &GroupSpec, options: &Options) -> Result<Classification, Error> {
    let (order_cap, lim) = limits(spec, options);
    let group = close_group(spec.rank, &spec.generators, order_cap)?;
    classify_finite_subgroups(
        group,
        &ClassifyOptions {
            limits: lim,
            parallel: options.parallel,
        },
    )
}

#[derive(Serialize)]
struct GammaElementJson {
    point: Vec<Vec<String>>,
    translation: Vec<String>,
}

fn gamma_generators(cl: &Classification, class: usize) -> Vec<GammaElementJson> {
    let c = cl.class(class);
    let group = cl.group();
    group
        .small_generating_set(cl.point_subgroup(c))
        .into_iter()
        .map(|k| GammaElementJson {
            point: matrix_json(group.element(k)),
            translation: vector_json(c.representative.value(k)),
        })
        .collect()
}

#[derive(Serialize)]
struct ClassJson {
    id: usize,
    label: String,
    order: usize,
    point_class: usize,
    fixed_rank: usize,
    is_maximal: bool,
    in_omega: bool,
    flag_contractible: bool,
    covers: Vec<String>,
    cocycle_orbit: Vec<usize>,
    generators: Vec<GammaElementJson>,
}

#[derive(Serialize)]
struct ClassifyJson {
    report_version: u64,
    name: String,
    rank: usize,
    point_group_order: usize,
    vcd: usize,
    classes: Vec<ClassJson>,
}

fn classify_report(spec: &GroupSpec, cl: &Classification, format: Format) -> String {
    let classes: Vec<ClassJson> = cl
        .classes()
        .iter()
        .map(|c| ClassJson {
            id: c.class_id,
            label: c.label.clone(),
            order: c.order,
            point_class: c.point_class,
            fixed_rank: c.fixed_rank,
            is_maximal: c.is_maximal,
            in_omega: c.in_omega,
            flag_contractible: c.flag_contractible,
            covers: c.covers.iter().map(|&j| cl.class(j).label.clone()).collect(),
            cocycle_orbit: c.cocycle_orbit.clone(),
            generators: gamma_generators(cl, c.class_id),
        })
        .collect();
    let doc = ClassifyJson {
        report_version: REPORT_VERSION,
        name: spec.name.clone(),
        rank: spec.rank,
        point_group_order: cl.group().order(),
        vcd: cl.vcd(),
        classes,
    };
    render(&doc, format, || {
        let rows: Vec<Vec<String>> = doc
            .classes
            .iter()
            .map(|c| {
                vec![
                    c.label.clone(),
                    c.order.to_string(),
                    c.point_class.to_string(),
                    c.fixed_rank.to_string(),
                    yes(c.is_maximal),
                    yes(c.in_omega),
                    yes(c.flag_contractible),
                    c.covers.len().to_string(),
                ]
            })
            .collect();
        let mut s = format!(
            "{}: |K| = {}, {} classes of finite subgroups, vcd = {}\n\n",
            doc.name,
            doc.point_group_order,
            doc.classes.len(),
            doc.vcd
        );
        s.push_str(&text_table(
            &[
                "class", "order", "point", "rank", "maximal", "omega", "contractible", "above",
            ],
            &rows,
        ));
        s
    })
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

#[derive(Serialize)]
struct TermJson {
    class: String,
    order: usize,
    point_class: usize,
    coefficient: String,
}

#[derive(Serialize)]
struct MultiplicityJson {
    point_class: usize,
    order: usize,
    a_f: usize,
}

#[derive(Serialize)]
struct EulerJson {
    report_version: u64,
    name: String,
    rank: usize,
    point_group_order: usize,
    classes: usize,
    vcd: usize,
    terms: Vec<TermJson>,
    omega_multiplicities: Vec<MultiplicityJson>,
    specializations: BTreeMap<String, String>,
}

fn euler_doc(spec: &GroupSpec, cl: &Classification) -> Result<EulerJson, Error> {
    let report = equivariant_euler_class(cl)?;
    let mut specializations = BTreeMap::new();
    for map in Specialization::ALL {
        specializations.insert(map.name().to_string(), ratio(&specialize(&report.chi, cl, map)));
    }
    let orbifold = specialize(&report.chi, cl, Specialization::Orbifold);
    if !orbifold.is_zero() {
        return Err(Error::NonzeroOrbifold(orbifold.to_string()));
    }
    let terms = report
        .chi
        .terms()
        .map(|(c, q)| {
            let class = cl.class(c);
            TermJson {
                class: class.label.clone(),
                order: class.order,
                point_class: class.point_class,
                coefficient: ratio(q),
            }
        })
        .collect();
    let mut multiplicities: BTreeMap<usize, usize> = BTreeMap::new();
    for c in cl.omega_classes() {
        *multiplicities.entry(c.point_class).or_default() += 1;
    }
    Ok(EulerJson {
        report_version: REPORT_VERSION,
        name: spec.name.clone(),
        rank: spec.rank,
        point_group_order: cl.group().order(),
        classes: cl.classes().len(),
        vcd: cl.vcd(),
        terms,
        omega_multiplicities: multiplicities
            .into_iter()
            .map(|(pc, a)| MultiplicityJson {
                point_class: pc,
                order: cl.lattice().class(pc).order,
                a_f: a,
            })
            .collect(),
        specializations,
    })
}

fn euler_report(doc: &EulerJson, format: Format) -> String {
    render(doc, format, || {
        let mut s = format!("{}: chi = ", doc.name);
        if doc.terms.is_empty() {
            s.push('0');
        }
        for (i, t) in doc.terms.iter().enumerate() {
            let (sign, mag) = match t.coefficient.strip_prefix('-') {
                Some(m) => ("-", m),
                None => ("+", t.coefficient.as_str()),
            };
            if i > 0 {
                let _ = write!(s, " {sign} ");
            } else if sign == "-" {
                s.push('-');
            }
            if mag != "1" {
                s.push_str(mag);
            }
            let _ = write!(s, "[{}]", t.class);
        }
        s.push_str("\n\n");
        let rows: Vec<Vec<String>> = doc
            .specializations
            .iter()
            .map(|(k, v)| vec![k.clone(), v.clone()])
            .collect();
        s.push_str(&text_table(&["specialization", "value"], &rows));
        let _ = writeln!(s, "\nvcd = {}", doc.vcd);
        s
    })
}

fn run_with_spec(
    command: Command,
    spec: &GroupSpec,
    options: &Options,
) -> Result<Report, CliError> {
    let format = options.format;
    match command {
        Command::Subgroups => {
            let (order_cap, _) = limits(spec, options);
            let group = close_group(spec.rank, &spec.generators, order_cap)?;
            let lattice = subgroup_classes(&group);
            #[derive(Serialize)]
            struct Row {
                id: usize,
                order: usize,
                conjugates: usize,
                normalizer_order: usize,
                element_classes: usize,
                generators: Vec<Vec<Vec<String>>>,
            }
            let rows: Vec<Row> = lattice
                .classes()
                .iter()
                .map(|c| Row {
                    id: c.class_id,
                    order: c.order,
                    conjugates: c.conjugates_count,
                    normalizer_order: c.normalizer.len(),
                    element_classes: c.element_class_count,
                    generators: group
                        .small_generating_set(&c.representative)
                        .into_iter()
                        .map(|k| matrix_json(group.element(k)))
                        .collect(),
                })
                .collect();
            Ok(Report::ok(render(&rows, format, || {
                let t: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.id.to_string(),
                            r.order.to_string(),
                            r.conjugates.to_string(),
                            r.normalizer_order.to_string(),
                            r.element_classes.to_string(),
                        ]
                    })
                    .collect();
                text_table(
                    &["class", "order", "conjugates", "normalizer", "element classes"],
                    &t,
                )
            })))
        }
        Command::FixedLattice => {
            let (order_cap, _) = limits(spec, options);
            let group = close_group(spec.rank, &spec.generators, order_cap)?;
            let lattice = subgroup_classes(&group);
            #[derive(Serialize)]
            struct Row {
                point_class: usize,
                order: usize,
                rank: usize,
                character_rank: usize,
                basis: Vec<Vec<String>>,
            }
            let mut rows = Vec::new();
            for c in lattice.classes() {
                let lat = fixed_lattice(&group, &c.representative)?;
                rows.push(Row {
                    point_class: c.class_id,
                    order: c.order,
                    rank: lat.rank(),
                    character_rank: character_fixed_rank(&group, &c.representative)?,
                    basis: matrix_json(lat.basis()),
                });
            }
            Ok(Report::ok(render(&rows, format, || {
                let t: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.point_class.to_string(),
                            r.order.to_string(),
                            r.rank.to_string(),
                            r.basis
                                .iter()
                                .map(|row| format!("({})", row.join(" ")))
                                .collect::<Vec<_>>()
                                .join(" "),
                        ]
                    })
                    .collect();
                text_table(&["class", "order", "rank", "basis"], &t)
            })))
        }
        Command::H1 => {
            let cl = classify_spec(spec, options)?;
            #[derive(Serialize)]
            struct Row {
                point_class: usize,
                order: usize,
                invariants: Vec<String>,
                h1_order: usize,
                orbits: Vec<Vec<usize>>,
            }
            let rows: Vec<Row> = cl
                .lattice()
                .classes()
                .iter()
                .map(|c| {
                    let data = cl.point_data(c.class_id);
                    Row {
                        point_class: c.class_id,
                        order: c.order,
                        invariants: data
                            .h1
                            .invariants
                            .torsion_factors
                            .iter()
                            .map(ToString::to_string)
                            .collect(),
                        h1_order: data.h1.order(),
                        orbits: data.orbits.clone(),
                    }
                })
                .collect();
            Ok(Report::ok(render(&rows, format, || {
                let t: Vec<Vec<String>> = cl
                    .lattice()
                    .classes()
                    .iter()
                    .zip(&rows)
                    .map(|(c, r)| {
                        vec![
                            r.point_class.to_string(),
                            r.order.to_string(),
                            cl.point_data(c.class_id).h1.invariants.to_string(),
                            r.orbits.len().to_string(),
                        ]
                    })
                    .collect();
                text_table(&["class", "order", "H1", "orbits"], &t)
            })))
        }
        Command::Classify => {
            let cl = classify_spec(spec, options)?;
            Ok(Report::ok(classify_report(spec, &cl, format)))
        }
        Command::Euler => {
            let cl = classify_spec(spec, options)?;
            let doc = euler_doc(spec, &cl)?;
            Ok(Report::ok(euler_report(&doc, format)))
        }
        Command::Specialize => {
            let cl = classify_spec(spec, options)?;
            let report = equivariant_euler_class(&cl)?;
            let maps: Vec<Specialization> = match options.map {
                Some(m) => vec![m],
                None => Specialization::ALL.to_vec(),
            };
            let values: BTreeMap<String, String> = maps
                .iter()
                .map(|&m| (m.name().to_string(), ratio(&specialize(&report.chi, &cl, m))))
                .collect();
            Ok(Report::ok(render(&values, format, || {
                let t: Vec<Vec<String>> =
                    values.iter().map(|(k, v)| vec![k.clone(), v.clone()]).collect();
                text_table(&["specialization", "value"], &t)
            })))
        }
        Command::Poset => {
            let cl = classify_spec(spec, options)?;
            let report = equivariant_euler_class(&cl)?;
            #[derive(Serialize)]
            struct Row {
                omega: String,
                lower: String,
                lower_point_order: usize,
                conjugates_in_f: usize,
                vertices: usize,
                relations: usize,
                directed: bool,
                reduced_euler: i64,
                weight: String,
            }
            let mut rows = Vec::new();
            for block in &report.blocks {
                let omega = cl.class(block.omega_class);
                let f = cl.point_subgroup(omega);
                for t in &block.terms {
                    let poset = build_branch_poset(&t.lower, f, cl.lattice(), |i| {
                        cl.subgroup_fixed_rank(i)
                    })?;
                    rows.push(Row {
                        omega: omega.label.clone(),
                        lower: cl.class(t.lower_class).label.clone(),
                        lower_point_order: t.lower.len(),
                        conjugates_in_f: t.conjugates,
                        vertices: poset.len(),
                        relations: poset.less_than().len(),
                        directed: poset.is_directed(),
                        reduced_euler: t.reduced_euler,
                        weight: ratio(&t.weight),
                    });
                }
            }
            Ok(Report::ok(render(&rows, format, || {
                let t: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.omega.clone(),
                            r.lower.clone(),
                            r.vertices.to_string(),
                            r.relations.to_string(),
                            yes(r.directed),
                            r.reduced_euler.to_string(),
                            r.weight.clone(),
                        ]
                    })
                    .collect();
                text_table(
                    &["omega", "lower", "vertices", "relations", "directed", "e", "weight"],
                    &t,
                )
            })))
        }
        Command::Selftest => unreachable!("selftest takes no input"),
    }
}

/// Runs a command. `spec` is required for everything except `selftest`.
pub fn execute_command(
    command: Command,
    spec: Option<&GroupSpec>,
    options: &Options,
) -> Result<Report, CliError> {
    if command == Command::Selftest {
        return Ok(run_selftest(options));
    }
    let spec = spec.ok_or_else(|| SpecError::Argument("--input is required".into()))?;
    run_with_spec(command, spec, options)
}

/// Bundled example: `(name, spec document, expectations document)`.
pub const CORPUS: [(&str, &str, &str); 5] = [
    (
        "kummer",
        include_str!("../corpus/kummer.json"),
        include_str!("../corpus/kummer.expected.json"),
    ),
    (
        "c4-torus6",
        include_str!("../corpus/c4-torus6.json"),
        include_str!("../corpus/c4-torus6.expected.json"),
    ),
    (
        "c2xc2-torus6",
        include_str!("../corpus/c2xc2-torus6.json"),
        include_str!("../corpus/c2xc2-torus6.expected.json"),
    ),
    (
        "s3-plane",
        include_str!("../corpus/s3-plane.json"),
        include_str!("../corpus/s3-plane.expected.json"),
    ),
    (
        "a5-torus4",
        include_str!("../corpus/a5-torus4.json"),
        include_str!("../corpus/a5-torus4.expected.json"),
    ),
];

/// One golden comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub example: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// Evaluates a word like `x*y^2*x^-1` in the point group.
fn eval_word(cl: &Classification, spec: &GroupSpec, word: &str) -> Result<usize, String> {
    let group = cl.group();
    let mut acc = group.identity();
    let word = word.trim();
    if word.is_empty() || word == "1" {
        return Ok(acc);
    }
    for token in word.split('*') {
        let token = token.trim();
        let (label, power) = match token.split_once('^') {
            Some((l, p)) => (
                l,
                p.parse::<i64>()
                    .map_err(|_| format!("bad exponent in '{token}'"))?,
            ),
            None => (token, 1),
        };
        let gi = spec
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| format!("unknown generator label '{label}'"))?;
        let g = group
            .id_of(&spec.generators[gi])
            .expect("generators are group elements");
        let base = if power < 0 { group.inv(g) } else { g };
        for _ in 0..power.unsigned_abs() {
            acc = group.mul(acc, base);
        }
    }
    Ok(acc)
}

/// Point subgroup selected by `{"words": [...]}` or `{"order": k}` (the
/// unique point class of that order).
fn select_subgroup(cl: &Classification, spec: &GroupSpec, sel: &Value) -> Result<ElementSet, String> {
    if let Some(words) = sel.get("words").and_then(Value::as_array) {
        let mut ids = Vec::new();
        for w in words {
            ids.push(eval_word(cl, spec, w.as_str().ok_or("word must be a string")?)?);
        }
        return Ok(cl.group().generate(ids));
    }
    if let Some(order) = sel.get("order").and_then(Value::as_u64) {
        let matching: Vec<_> = cl
            .lattice()
            .classes()
            .iter()
            .filter(|c| c.order as u64 == order)
            .collect();
        return match matching.as_slice() {
            [one] => Ok(one.representative.clone()),
            [] => Err(format!("no subgroup of order {order}")),
            _ => Err(format!("several subgroup classes of order {order}")),
        };
    }
    Err(format!("bad subgroup selector {sel}"))
}

fn selftest_example(name: &str, spec_text: &str, expected_text: &str) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |check: &str, expected: String, actual: String| {
        checks.push(Check {
            example: name.to_string(),
            check: check.to_string(),
            pass: expected == actual,
            expected,
            actual,
        });
    };
    let fail = |checks: &mut Vec<Check>, what: &str, msg: String| {
        checks.push(Check {
            example: name.to_string(),
            check: what.to_string(),
            expected: "ok".into(),
            actual: msg,
            pass: false,
        });
        std::mem::take(checks)
    };
    let spec = match parse_group_spec(spec_text) {
        Ok(s) => s,
        Err(e) => return fail(&mut checks, "parse", e.to_string()),
    };
    let expected: Value = match serde_json::from_str(expected_text) {
        Ok(v) => v,
        Err(e) => return fail(&mut checks, "expectations", e.to_string()),
    };
    let started = Instant::now();
    let cl = match classify_spec(&spec, &Options::default()) {
        Ok(c) => c,
        Err(e) => return fail(&mut checks, "classify", e.to_string()),
    };
    let report = match equivariant_euler_class(&cl) {
        Ok(r) => r,
        Err(e) => return fail(&mut checks, "euler", e.to_string()),
    };
    let elapsed = started.elapsed().as_secs_f64();

    if let Some(n) = expected.get("classes").and_then(Value::as_u64) {
        push("class count", n.to_string(), cl.classes().len().to_string());
    }
    if let Some(h1s) = expected.get("h1").and_then(Value::as_array) {
        for h in h1s {
            let label = format!("H1 over {}", h["point"]);
            match select_subgroup(&cl, &spec, &h["point"]) {
                Ok(s) => {
                    let (pc, _) = cl.lattice().locate(&s).expect("selected a subgroup");
                    let inv = &cl.point_data(pc).h1.invariants;
                    let want: Vec<String> = h["torsion"]
                        .as_array()
                        .map(|a| a.iter().map(|x| x.to_string()).collect())
                        .unwrap_or_default();
                    let got: Vec<String> =
                        inv.torsion_factors.iter().map(ToString::to_string).collect();
                    push(&label, format!("{want:?}"), format!("{got:?}"));
                }
                Err(e) => push(&label, "selector".into(), e),
            }
        }
    }
    if let Some(afs) = expected.get("a_f").and_then(Value::as_array) {
        for a in afs {
            let label = format!("a_F over {}", a["point"]);
            match select_subgroup(&cl, &spec, &a["point"]) {
                Ok(s) => {
                    let (pc, _) = cl.lattice().locate(&s).expect("selected a subgroup");
                    push(&label, a["value"].to_string(), cl.omega_multiplicity(pc).to_string());
                }
                Err(e) => push(&label, "selector".into(), e),
            }
        }
    }
    if let Some(bes) = expected.get("branch_euler").and_then(Value::as_array) {
        for b in bes {
            let label = format!("e(B) lower {} upper {}", b["lower"], b["upper"]);
            let result = (|| -> Result<i64, String> {
                let upper = select_subgroup(&cl, &spec, &b["upper"])?;
                let lower = select_subgroup(&cl, &spec, &b["lower"])?;
                // pick a conjugate of the lower subgroup inside the upper one
                let (pc, _) = cl.lattice().locate(&lower).ok_or("not a subgroup")?;
                let inside = cl
                    .lattice()
                    .class(pc)
                    .members
                    .iter()
                    .map(|&i| &cl.lattice().subgroups()[i])
                    .find(|s| s.is_subset(&upper))
                    .ok_or("lower subgroup is not contained in upper")?;
                branch_reduced_euler(&cl, inside, &upper).map_err(|e| e.to_string())
            })();
            match result {
                Ok(e) => push(&label, b["value"].to_string(), e.to_string()),
                Err(e) => push(&label, "computable".into(), e),
            }
        }
    }
    if let Some(terms) = expected.get("terms").and_then(Value::as_array) {
        // aggregate by point class
        let mut actual: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (c, q) in report.chi.terms() {
            *actual
                .entry(cl.class(c).point_class)
                .or_insert_with(BigRational::zero) += q;
        }
        actual.retain(|_, q| !q.is_zero());
        let mut want: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut ok = true;
        for t in terms {
            match select_subgroup(&cl, &spec, &t["point"]) {
                Ok(s) => {
                    let (pc, _) = cl.lattice().locate(&s).expect("selected a subgroup");
                    let q: BigRational = t["coefficient"]
                        .as_str()
                        .and_then(|s| s.parse().ok())
                        .unwrap_or_else(BigRational::zero);
                    want.insert(pc, q);
                }
                Err(e) => {
                    push("chi by point class", "selector".into(), e);
                    ok = false;
                }
            }
        }
        if ok {
            let show = |m: &BTreeMap<usize, BigRational>| {
                m.iter()
                    .map(|(pc, q)| format!("{q}[K/#{pc}]"))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            push("chi by point class", show(&want), show(&actual));
        }
    }
    if let Some(exact) = expected.get("exact_terms").and_then(Value::as_array) {
        let mut want: BTreeMap<usize, BigRational> = BTreeMap::new();
        let mut ok = true;
        for t in exact {
            let gens: Result<Vec<GammaElement>, String> = t["generators"]
                .as_array()
                .map(|a| a.as_slice())
                .unwrap_or_default()
                .iter()
                .map(|g| {
                    let point = eval_word(&cl, &spec, g["word"].as_str().unwrap_or(""))?;
                    let translation: Vec<BigInt> = g["translation"]
                        .as_array()
                        .map(|a| a.iter().map(|x| BigInt::from(x.as_i64().unwrap_or(0))).collect())
                        .unwrap_or_else(|| vec![BigInt::zero(); spec.rank]);
                    Ok(GammaElement::new(point, translation))
                })
                .collect();
            let class = gens.and_then(|g| cl.locate_generated(&g).map_err(|e| e.to_string()));
            match class {
                Ok(c) => {
                    let q: BigRational = t["coefficient"]
                        .as_str()
                        .and_then(|s| s.parse().ok())
                        .unwrap_or_else(BigRational::zero);
                    want.insert(c, q);
                }
                Err(e) => {
                    push("chi by class", "selector".into(), e);
                    ok = false;
                }
            }
        }
        if ok {
            let actual: BTreeMap<usize, BigRational> =
                report.chi.terms().map(|(c, q)| (c, q.clone())).collect();
            let show = |m: &BTreeMap<usize, BigRational>| {
                m.iter()
                    .map(|(c, q)| format!("{q}[{}]", cl.class(*c).label))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            push("chi by class", show(&want), show(&actual));
        }
    }
    if let Some(specs) = expected.get("specializations").and_then(Value::as_object) {
        for (k, v) in specs {
            match k.parse::<Specialization>() {
                Ok(map) => push(
                    &format!("{map} specialization"),
                    v.as_str().unwrap_or_default().to_string(),
                    ratio(&specialize(&report.chi, &cl, map)),
                ),
                Err(e) => push(k, "known map".into(), e),
            }
        }
    }
    if let Some(limit) = expected.get("max_seconds").and_then(Value::as_f64) {
        checks.push(Check {
            example: name.to_string(),
            check: "runtime".into(),
            expected: format!("< {limit} s"),
            actual: format!("{elapsed:.3} s"),
            pass: elapsed < limit,
        });
    }
    checks
}

/// Runs every bundled example against its expectations.
pub fn selftest_checks() -> Vec<Check> {
    CORPUS
        .iter()
        .flat_map(|(name, spec, expected)| selftest_example(name, spec, expected))
        .collect()
}

fn run_selftest(options: &Options) -> Report {
    let checks = selftest_checks();
    let mut passed_examples = 0;
    for (name, _, _) in CORPUS {
        if checks.iter().filter(|c| c.example == name).all(|c| c.pass) {
            passed_examples += 1;
        }
    }
    let success = passed_examples == CORPUS.len();
    #[derive(Serialize)]
    struct Summary<'a> {
        passed: usize,
        total: usize,
        checks: &'a [Check],
    }
    let summary = Summary {
        passed: passed_examples,
        total: CORPUS.len(),
        checks: &checks,
    };
    let output = render(&summary, options.format, || {
        let rows: Vec<Vec<String>> = checks
            .iter()
            .map(|c| {
                vec![
                    if c.pass { "PASS" } else { "FAIL" }.to_string(),
                    c.example.clone(),
                    c.check.clone(),
                    c.actual.clone(),
                ]
            })
            .collect();
        let mut s = text_table(&["result", "example", "check", "value"], &rows);
        let _ = writeln!(s, "\n{passed_examples}/{} examples pass", CORPUS.len());
        s
    });
    Report { output, success }
}
