//! Command dispatch. Every command produces a JSON document (or DOT text) and
//! an exit status, or a [`CliError`].

use std::str::FromStr;

use brat_core::bratteli::{
    self, canonical_premorphism, k0_unit_divisor, mu_supernatural, odometer,
    rational_subgroup_member_stage, telescope, theta_eval_stage, tower_profile, uhf_embeds,
    verify_premorphism, DiagramError, Embedding, Exactness, MuSupernatural,
};
use brat_core::catalog::{self, Payload};
use brat_core::format::{self, FormatError};
use brat_core::ordered_group::PropertyD;
use brat_core::{dot, BratteliDiagram, OrderedGroup, SupernaturalNumber};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::{Cli, Command, Format, GroupCommand, SnCommand};

pub const DEFAULT_DEPTH: usize = 16;

#[derive(Debug)]
pub struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind, "message": self.message}})
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let kind = match e {
            FormatError::Json(_) => "malformed-json",
            FormatError::Schema(_) => "schema",
            FormatError::Supernatural(_) => "supernatural",
            FormatError::Group(_) => "invalid-group",
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        let kind = match e {
            DiagramError::Invalid(_) => "invalid-diagram",
            DiagramError::DepthBeyondDiagram { .. } | DiagramError::StageBeyondDepth { .. } => {
                "depth"
            }
            _ => "argument",
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<brat_core::ordered_group::GroupError> for CliError {
    fn from(e: brat_core::ordered_group::GroupError) -> Self {
        CliError::new("argument", e.to_string())
    }
}

impl From<brat_core::supernatural::SupernaturalError> for CliError {
    fn from(e: brat_core::supernatural::SupernaturalError) -> Self {
        CliError::new("argument", e.to_string())
    }
}

pub enum Outcome {
    Answer { stdout: String, status: u8 },
    Error(CliError),
}

type Answer = Result<(String, u8), CliError>;

fn json_answer(v: Value, yes: bool) -> Answer {
    Ok((format!("{v}\n"), if yes { 0 } else { 1 }))
}

fn ok(v: Value) -> Answer {
    json_answer(v, true)
}

enum Loaded {
    Diagram(BratteliDiagram),
    Group(OrderedGroup),
    /// A diagram file that parsed but broke a structural rule.
    InvalidDiagram(bratteli::Violation),
}

fn load(source: &str) -> Result<Loaded, CliError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return match catalog::lookup(name) {
            Some(e) => Ok(match e.payload {
                Payload::Diagram(d) => Loaded::Diagram(d),
                Payload::Group(g) => Loaded::Group(g),
            }),
            None => Err(CliError::new(
                "unknown-catalog",
                format!("no catalog entry named {name:?}"),
            )),
        };
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| CliError::new("io", format!("cannot read {source}: {e}")))?;
    let value = format::parse_json(&text)?;
    if value.get("kind").is_some() {
        return Ok(Loaded::Group(format::group_from_json(&value)?));
    }
    let raw = format::raw_diagram_from_json(&value)?;
    Ok(match raw.build() {
        Ok(d) => Loaded::Diagram(d),
        Err(v) => Loaded::InvalidDiagram(v),
    })
}

fn load_diagram(source: &str) -> Result<BratteliDiagram, CliError> {
    match load(source)? {
        Loaded::Diagram(d) => Ok(d),
        Loaded::InvalidDiagram(v) => Err(CliError::new("invalid-diagram", v.to_string())),
        Loaded::Group(_) => Err(CliError::new(
            "wrong-source",
            format!("{source} is a group, not a diagram"),
        )),
    }
}

fn load_group(source: &str) -> Result<OrderedGroup, CliError> {
    match load(source)? {
        Loaded::Group(g) => Ok(g),
        _ => Err(CliError::new(
            "wrong-source",
            format!("{source} is not a group descriptor"),
        )),
    }
}

/// Explicit depths must exist; the default is clamped to a finite diagram.
fn resolve_depth(d: &BratteliDiagram, depth: Option<usize>) -> Result<usize, CliError> {
    match depth {
        Some(k) => {
            d.check_depth(k)?;
            Ok(k)
        }
        None => Ok(d
            .max_depth()
            .map_or(DEFAULT_DEPTH, |m| m.min(DEFAULT_DEPTH))),
    }
}

fn nats(v: &[BigUint]) -> Value {
    Value::Array(v.iter().map(format::nat_to_json).collect())
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(format::int_to_json).collect())
}

fn parse_csv(text: &str) -> Result<Vec<BigInt>, CliError> {
    text.split(',')
        .map(|s| {
            BigInt::from_str(s.trim()).map_err(|_| {
                CliError::new(
                    "argument",
                    format!("expected comma-separated integers, got {text:?}"),
                )
            })
        })
        .collect()
}

fn parse_cuts(text: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| {
                CliError::new(
                    "argument",
                    format!("expected comma-separated levels, got {text:?}"),
                )
            })
        })
        .collect()
}

fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    Ok(format::parse_rational(text)?)
}

fn exactness_fields(obj: &mut serde_json::Map<String, Value>, exactness: Exactness) {
    match exactness {
        Exactness::Certified => {
            obj.insert("exactness".into(), json!("certified"));
        }
        Exactness::TruncatedAtDepth(depth) => {
            obj.insert("exactness".into(), json!("truncated-at-depth"));
            obj.insert("depth".into(), json!(depth));
        }
    }
}

fn truncated(depth: usize) -> Exactness {
    Exactness::TruncatedAtDepth(depth)
}

fn mu_json(mu: &MuSupernatural) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("mu".into(), format::sn_to_json(&mu.value));
    exactness_fields(&mut obj, mu.exactness);
    Value::Object(obj)
}

fn negative(key: &str, exactness: Exactness) -> Answer {
    let mut obj = serde_json::Map::new();
    obj.insert(key.into(), json!(false));
    exactness_fields(&mut obj, exactness);
    json_answer(Value::Object(obj), false)
}

fn render_diagram(d: &BratteliDiagram, format: Format) -> Answer {
    match format {
        Format::Json => ok(format::diagram_to_json(d)),
        Format::Dot => Ok((dot::export_dot(d, d.last_level())?, 0)),
    }
}

pub fn run(cli: Cli) -> Outcome {
    match dispatch(cli) {
        Ok((stdout, status)) => Outcome::Answer { stdout, status },
        Err(e) => Outcome::Error(e),
    }
}

fn dispatch(cli: Cli) -> Answer {
    let depth = cli.depth;
    match cli.command {
        Command::Validate(src) => validate(&src.source),
        Command::Towers(src) => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let p = tower_profile(&d, depth)?;
            ok(json!({
                "depth": depth,
                "heights": p.heights.iter().map(|h| nats(h)).collect::<Vec<_>>(),
                "gcds": nats(&p.gcds),
                "ratios": nats(&p.ratios),
            }))
        }
        Command::Odometer { src, format } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let mut o = odometer(&d, depth)?;
            if let Some(name) = d.name() {
                o = o.with_name(format!("odometer({name})"));
            }
            render_diagram(&o, format)
        }
        Command::Dot(src) => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            Ok((dot::export_dot(&d, depth)?, 0))
        }
        Command::Mu(src) => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            ok(mu_json(&mu_supernatural(&d, depth)?))
        }
        Command::Premorphism {
            src,
            verify,
            map,
            from,
        } => premorphism(&src.source, depth, verify, map.as_deref(), from.as_deref()),
        Command::Embed { src, uhf } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let m = format::parse_sn(&uhf)?;
            let answer = uhf_embeds(&m, &d, depth)?;
            let mut obj = serde_json::Map::new();
            obj.insert("embeds".into(), json!(answer.as_str()));
            if answer == Embedding::NoWithinDepth {
                obj.insert("depth".into(), json!(depth));
            }
            json_answer(Value::Object(obj), answer == Embedding::Yes)
        }
        Command::K0Divides { src, n } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            match k0_unit_divisor(&d, n, depth)? {
                Some(w) => {
                    ok(json!({"divides": true, "stage": w.stage, "vector": nats(&w.entries)}))
                }
                None => {
                    let mu = mu_supernatural(&d, depth)?;
                    let n_sn = SupernaturalNumber::from_u64(n)?;
                    let exactness = if mu.exactness.is_certified() && !n_sn.divides(&mu.value) {
                        Exactness::Certified
                    } else {
                        truncated(depth)
                    };
                    negative("divides", exactness)
                }
            }
        }
        Command::Rsub { src, stage, vector } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let g = parse_csv(&vector)?;
            match rational_subgroup_member_stage(&d, stage, &g, depth)? {
                Some((ratio, s)) => ok(json!({
                    "member": true,
                    "ratio": format::rational_to_string(&ratio),
                    "stage": s,
                })),
                None => negative("member", truncated(depth)),
            }
        }
        Command::Theta { src, x } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let x = parse_rational(&x)?;
            match theta_eval_stage(&d, &x, depth) {
                Ok((stage, v)) => ok(json!({"stage": stage, "vector": ints(&v)})),
                Err(DiagramError::OutsideRationalGroup(_)) => {
                    negative("defined", Exactness::Certified)
                }
                Err(DiagramError::DenominatorNotDivisible { .. }) => {
                    negative("defined", truncated(depth))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Divide {
            src,
            stage,
            vector,
            m,
        } => {
            let d = load_diagram(&src.source)?;
            let depth = resolve_depth(&d, depth)?;
            let g = parse_csv(&vector)?;
            match bratteli::divide_element(&d, stage, &g, m, depth)? {
                Some((s, y)) => ok(json!({"divides": true, "stage": s, "vector": ints(&y)})),
                None => negative("divides", truncated(depth)),
            }
        }
        Command::Telescope { src, cuts, format } => {
            let d = load_diagram(&src.source)?;
            let cuts = parse_cuts(&cuts)?;
            render_diagram(&telescope(&d, &cuts)?, format)
        }
        Command::Sn(cmd) => sn(cmd),
        Command::Group(cmd) => group(cmd),
        Command::Catalog { name } => catalog_cmd(name.as_deref()),
    }
}

fn validate(source: &str) -> Answer {
    match load(source)? {
        Loaded::Diagram(d) => ok(json!({
            "valid": true,
            "kind": "diagram",
            "levels": d.levels(),
            "tail": d.tail().as_str(),
        })),
        Loaded::Group(g) => {
            ok(json!({"valid": true, "kind": "group", "group": format::group_to_json(&g)}))
        }
        Loaded::InvalidDiagram(v) => json_answer(
            json!({"valid": false, "violation": format::violation_to_json(&v)}),
            false,
        ),
    }
}

fn premorphism(
    source: &str,
    depth: Option<usize>,
    verify: bool,
    map: Option<&str>,
    from: Option<&str>,
) -> Answer {
    let d = load_diagram(source)?;
    let depth = resolve_depth(&d, depth)?;
    let p = match map {
        Some(file) => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::new("io", format!("cannot read {file}: {e}")))?;
            format::premorphism_from_json(&format::parse_json(&text)?)?
        }
        None => canonical_premorphism(&d, depth)?,
    };
    if !verify {
        return ok(format::premorphism_to_json(&p));
    }
    let src = match from {
        Some(s) => load_diagram(s)?,
        None => odometer(&d, depth)?,
    };
    match verify_premorphism(&p, &src, &d, depth) {
        Ok(()) => ok(json!({"verified": true, "depth": depth})),
        Err(e) => json_answer(json!({"verified": false, "reason": e.to_string()}), false),
    }
}

fn sn(cmd: SnCommand) -> Answer {
    let parse_all = |values: &[String]| -> Result<Vec<SupernaturalNumber>, CliError> {
        values.iter().map(|v| Ok(format::parse_sn(v)?)).collect()
    };
    match cmd {
        SnCommand::Divides { a, b } => {
            let holds = format::parse_sn(&a)?.divides(&format::parse_sn(&b)?);
            json_answer(json!({"divides": holds}), holds)
        }
        SnCommand::Mul { a, b } => ok(format::sn_to_json(
            &format::parse_sn(&a)?.mul(&format::parse_sn(&b)?),
        )),
        SnCommand::Sup { values } => ok(format::sn_to_json(&SupernaturalNumber::sup(&parse_all(
            &values,
        )?)?)),
        SnCommand::Inf { values } => ok(format::sn_to_json(&SupernaturalNumber::inf(&parse_all(
            &values,
        )?)?)),
        SnCommand::Ell { n, j } => {
            ok(json!({"ell": format::nat_to_json(&format::parse_sn(&n)?.ell(j)?)}))
        }
        SnCommand::Contains { n, x } => {
            let holds = format::parse_sn(&n)?.contains(&parse_rational(&x)?);
            json_answer(json!({"member": holds}), holds)
        }
    }
}

fn group(cmd: GroupCommand) -> Answer {
    match cmd {
        GroupCommand::Propd(src) => match load_group(&src.source)?.property_d() {
            PropertyD::Holds => ok(json!({"property_d": "holds"})),
            PropertyD::Counterexample(n, m) => json_answer(
                json!({"property_d": "fails", "counterexample": [n, m]}),
                false,
            ),
        },
        GroupCommand::Maxsn(src) => match load_group(&src.source)?.max_supernatural() {
            Some(n) => ok(json!({"max_supernatural": format::sn_to_json(&n)})),
            None => json_answer(json!({"max_supernatural": null}), false),
        },
        GroupCommand::Divides { src, n } => match load_group(&src.source)?.unit_divisor(n)? {
            Some(x) => ok(json!({"divides": true, "quotient": format::element_to_json(&x)})),
            None => json_answer(json!({"divides": false}), false),
        },
        GroupCommand::Rsub { src, element } => {
            let g = load_group(&src.source)?;
            let e = format::parse_element(&g, &element)?;
            match g.rational_subgroup_member(&e)? {
                Some(w) => {
                    ok(json!({"member": true, "ratio": format::rational_to_string(&w.ratio())}))
                }
                None => json_answer(json!({"member": false}), false),
            }
        }
        GroupCommand::Theta { src, x } => {
            let g = load_group(&src.source)?;
            let x = parse_rational(&x)?;
            match g.theta(&x) {
                Ok(e) => ok(json!({"theta": format::element_to_json(&e)})),
                Err(brat_core::ordered_group::GroupError::OutsideRationalGroup(_)) => {
                    json_answer(json!({"defined": false}), false)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn catalog_cmd(name: Option<&str>) -> Answer {
    match name {
        None => {
            let entries: Vec<Value> = catalog::all()
                .iter()
                .map(|e| json!({"name": e.name, "kind": e.payload.kind(), "description": e.description}))
                .collect();
            ok(json!({"entries": entries, "families": ["uhf-<n>"]}))
        }
        Some(name) => {
            let e = catalog::lookup(name).ok_or_else(|| {
                CliError::new(
                    "unknown-catalog",
                    format!("no catalog entry named {name:?}"),
                )
            })?;
            let payload = match &e.payload {
                Payload::Diagram(d) => format::diagram_to_json(d),
                Payload::Group(g) => format::group_to_json(g),
            };
            ok(json!({
                "name": e.name,
                "kind": e.payload.kind(),
                "description": e.description,
                "payload": payload,
                "expected": e.expected.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            }))
        }
    }
}
