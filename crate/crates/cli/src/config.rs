//! JSON system configuration: a transition graph, named cylinder functions,
//! named semicrossed elements, named points and a truncation policy.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use semicross_core::algebra::SemicrossedPoly;
use semicross_core::dynamics::{
    format_word, parse_word, CylinderFunction, ItineraryStream, LassoPoint, Point, SftGraph,
    StreamKind, Word,
};
use semicross_core::extension::BiLassoPoint;
use semicross_core::representations::TruncationPolicy;

/// A configuration problem, located by file and JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.file, self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub alphabet_size: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub elements: BTreeMap<String, Vec<TermSpec>>,
    #[serde(default)]
    pub points: BTreeMap<String, PointSpec>,
    #[serde(default)]
    pub policy: TruncationPolicy,
}

/// Values keyed by window words (base-36 digits); words not listed take
/// `default` when given.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub window: usize,
    #[serde(default)]
    pub values: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<[f64; 2]>,
}

/// `U^power f`; the function `one` is always available.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub power: usize,
    pub function: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum PointSpec {
    Lasso {
        #[serde(default)]
        pre: String,
        per: String,
    },
    Stream {
        #[serde(flatten)]
        kind: StreamKind,
        #[serde(default = "default_horizon")]
        horizon: usize,
    },
    Bilasso {
        left: String,
        #[serde(default)]
        center: String,
        at: i64,
        right: String,
    },
}

fn default_horizon() -> usize {
    4096
}

#[derive(Clone, Debug)]
pub enum SystemPoint {
    OneSided(Point),
    TwoSided(BiLassoPoint),
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct System {
    pub id: String,
    pub graph: Arc<SftGraph>,
    pub functions: BTreeMap<String, CylinderFunction>,
    pub elements: BTreeMap<String, SemicrossedPoly>,
    pub points: BTreeMap<String, SystemPoint>,
    pub policy: TruncationPolicy,
}

struct Ctx<'a> {
    file: &'a str,
}

impl Ctx<'_> {
    fn err(&self, location: impl Into<String>, message: impl fmt::Display) -> ConfigError {
        ConfigError {
            file: self.file.to_string(),
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn word(&self, location: &str, text: &str) -> Result<Word, ConfigError> {
        parse_word(text).map_err(|e| self.err(location, e))
    }
}

pub fn read(path: &Path) -> Result<SystemConfig, ConfigError> {
    let file = path.display().to_string();
    let ctx = Ctx { file: &file };
    let text = std::fs::read_to_string(path).map_err(|e| ctx.err("<file>", e))?;
    serde_json::from_str(&text)
        .map_err(|e| ctx.err(format!("line {} column {}", e.line(), e.column()), e))
}

pub fn resolve(config: &SystemConfig, file: &str) -> Result<System, ConfigError> {
    let ctx = Ctx { file };
    let m = config.alphabet_size;
    let mut rows = vec![vec![false; m]; m];
    for (i, &[a, b]) in config.edges.iter().enumerate() {
        if a >= m || b >= m {
            return Err(ctx.err(
                format!("edges[{i}]"),
                format!("edge {a} -> {b} uses a symbol outside 0..{m}"),
            ));
        }
        rows[a][b] = true;
    }
    let graph = Arc::new(SftGraph::new(m, &rows).map_err(|e| ctx.err("edges", e))?);

    let mut functions = BTreeMap::new();
    functions.insert("one".to_string(), CylinderFunction::one(graph.clone()));
    for (name, spec) in &config.functions {
        let loc = format!("functions.{name}");
        if name == "one" {
            return Err(ctx.err(loc, "the name `one` is reserved"));
        }
        if spec.window == 0 {
            return Err(ctx.err(format!("{loc}.window"), "window must be at least 1"));
        }
        let mut values: BTreeMap<Word, C64> = BTreeMap::new();
        for (word, &[re, im]) in &spec.values {
            let wloc = format!("{loc}.values.{word}");
            let w = ctx.word(&wloc, word)?;
            if w.len() != spec.window {
                return Err(ctx.err(
                    wloc,
                    format!("word length must equal the window {}", spec.window),
                ));
            }
            graph.check_word(&w).map_err(|e| ctx.err(&wloc, e))?;
            values.insert(w, C64::new(re, im));
        }
        if let Some([re, im]) = spec.default {
            let count = graph.count_words(spec.window);
            if count > 1 << 20 {
                return Err(ctx.err(
                    format!("{loc}.window"),
                    format!("{count} admissible words are too many to tabulate"),
                ));
            }
            for w in graph.words(spec.window) {
                values.entry(w).or_insert(C64::new(re, im));
            }
        }
        let f = CylinderFunction::new(graph.clone(), spec.window, values)
            .map_err(|e| ctx.err(&loc, e))?;
        functions.insert(name.clone(), f);
    }

    let mut elements = BTreeMap::new();
    for (name, terms) in &config.elements {
        let mut poly = SemicrossedPoly::zero(graph.clone());
        for (i, t) in terms.iter().enumerate() {
            let f = functions.get(&t.function).ok_or_else(|| {
                ctx.err(
                    format!("elements.{name}[{i}].function"),
                    format!("unknown function {:?}", t.function),
                )
            })?;
            poly = poly.add(&SemicrossedPoly::monomial(t.power, f.clone()));
        }
        elements.insert(name.clone(), poly);
    }

    let mut points = BTreeMap::new();
    for (name, spec) in &config.points {
        let loc = format!("points.{name}");
        let point = match spec {
            PointSpec::Lasso { pre, per } => {
                let pre = ctx.word(&format!("{loc}.pre"), pre)?;
                let per = ctx.word(&format!("{loc}.per"), per)?;
                let l = LassoPoint::new(&graph, &pre, &per).map_err(|e| ctx.err(&loc, e))?;
                SystemPoint::OneSided(l.into())
            }
            PointSpec::Stream { kind, horizon } => {
                let s = ItineraryStream::new(kind.clone(), &graph, *horizon)
                    .map_err(|e| ctx.err(&loc, e))?;
                SystemPoint::OneSided(s.into())
            }
            PointSpec::Bilasso {
                left,
                center,
                at,
                right,
            } => {
                let left = ctx.word(&format!("{loc}.left"), left)?;
                let center = ctx.word(&format!("{loc}.center"), center)?;
                let right = ctx.word(&format!("{loc}.right"), right)?;
                let b = BiLassoPoint::new(&graph, &left, &center, *at, &right)
                    .map_err(|e| ctx.err(&loc, e))?;
                SystemPoint::TwoSided(b)
            }
        };
        points.insert(name.clone(), point);
    }

    let degree = elements.values().map(|e| e.degree()).max().unwrap_or(0);
    config
        .policy
        .validate(degree)
        .map_err(|e| ctx.err("policy", e))?;

    Ok(System {
        id: config.id.clone().unwrap_or_else(|| {
            Path::new(file)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "system".into())
        }),
        graph,
        functions,
        elements,
        points,
        policy: config.policy.clone(),
    })
}

/// The configuration with every function table written out, edges sorted
/// and points in canonical form.
pub fn normalized(system: &System) -> serde_json::Value {
    let functions: BTreeMap<&String, serde_json::Value> = system
        .functions
        .iter()
        .map(|(name, f)| {
            let values: BTreeMap<String, [f64; 2]> = f
                .values()
                .iter()
                .map(|(w, v)| (format_word(w), [v.re, v.im]))
                .collect();
            (
                name,
                serde_json::json!({ "window": f.window(), "values": values }),
            )
        })
        .collect();
    let elements: BTreeMap<&String, Vec<serde_json::Value>> = system
        .elements
        .iter()
        .map(|(name, e)| {
            let terms = e
                .coeffs()
                .iter()
                .map(|(n, f)| serde_json::json!({ "power": n, "window": f.window() }))
                .collect();
            (name, terms)
        })
        .collect();
    let points: BTreeMap<&String, String> = system
        .points
        .iter()
        .map(|(name, p)| (name, describe_point(p)))
        .collect();
    serde_json::json!({
        "id": system.id,
        "alphabet_size": system.graph.alphabet_size(),
        "edges": system.graph.edge_list(),
        "functions": functions,
        "elements": elements,
        "points": points,
        "policy": system.policy,
    })
}

pub fn describe_point(p: &SystemPoint) -> String {
    match p {
        SystemPoint::OneSided(Point::Lasso(l)) => l.to_string(),
        SystemPoint::OneSided(Point::Stream(s)) => {
            format!(
                "{} certified to {}",
                serde_json::to_string(s.kind()).unwrap_or_default(),
                s.certified()
            )
        }
        SystemPoint::TwoSided(b) => b.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<System, ConfigError> {
        resolve(&serde_json::from_str(text).unwrap(), "test.json")
    }

    #[test]
    fn minimal_config() {
        let s = parse(
            r#"{"alphabet_size": 2, "edges": [[0,0],[0,1],[1,0],[1,1]],
            "elements": {"U": [{"power": 1, "function": "one"}]}}"#,
        )
        .unwrap();
        assert_eq!(s.id, "test");
        assert_eq!(s.elements["U"].degree(), 1);
    }

    #[test]
    fn errors_name_the_location() {
        let e = parse(r#"{"alphabet_size": 2, "edges": [[0,0],[0,2]]}"#).unwrap_err();
        assert_eq!(e.location, "edges[1]");
        let e = parse(
            r#"{"alphabet_size": 2, "edges": [[0,1],[1,0]],
            "functions": {"f": {"window": 2, "values": {"00": [1, 0]}}}}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("functions.f.values.00"), "{e}");
        let e = parse(
            r#"{"alphabet_size": 2, "edges": [[0,1],[1,0]],
            "elements": {"F": [{"power": 0, "function": "g"}]}}"#,
        )
        .unwrap_err();
        assert_eq!(e.location, "elements.F[0].function");
    }

    #[test]
    fn points_of_every_kind() {
        let s = parse(
            r#"{"alphabet_size": 2, "edges": [[0,0],[0,1],[1,0],[1,1]],
            "points": {
                "a": {"type": "lasso", "pre": "1", "per": "0"},
                "b": {"type": "stream", "kind": "thue-morse", "horizon": 64},
                "c": {"type": "stream", "kind": "sturmian", "slope": 0.38, "intercept": 0.0},
                "d": {"type": "bilasso", "left": "0", "center": "1", "at": 0, "right": "0"}
            }}"#,
        )
        .unwrap();
        assert_eq!(s.points.len(), 4);
        assert!(matches!(s.points["d"], SystemPoint::TwoSided(_)));
    }
}
