//! Versioned JSON model files.
//!
//! Every file is an object with `"version": "v1"` and a `"kind"` naming one of
//! the schemas below. Unknown fields are rejected.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use gibbs_core::hofbauer::{HofbauerFamily, HofbauerPotential};
use gibbs_core::interval_maps::PiecewiseLinearMarkovMap;
use gibbs_core::linalg::Matrix;
use gibbs_core::{Alphabet, LocallyConstantPotential, MarkovMeasure, Sft};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Version {
    #[serde(rename = "v1")]
    V1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Sft,
    Potential,
    MarkovMap,
    HofbauerFamily,
    MarkovChain,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Sft => "sft",
            Kind::Potential => "potential",
            Kind::MarkovMap => "markov-map",
            Kind::HofbauerFamily => "hofbauer-family",
            Kind::MarkovChain => "markov-chain",
        }
    }
}

#[derive(Deserialize)]
struct Probe {
    #[allow(dead_code)]
    version: Version,
    kind: Kind,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SftFile {
    #[allow(dead_code)]
    version: Version,
    #[allow(dead_code)]
    kind: Kind,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    transitions: Vec<Vec<i64>>,
}

/// Potential table keyed by words spelled with the alphabet labels.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialFile {
    #[allow(dead_code)]
    version: Version,
    #[allow(dead_code)]
    kind: Kind,
    pub range: usize,
    pub values: BTreeMap<String, f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    #[allow(dead_code)]
    version: Version,
    #[allow(dead_code)]
    kind: Kind,
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    images: Vec<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyName {
    PowerLog,
    Cubic,
    InverseSquare,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    #[allow(dead_code)]
    version: Version,
    #[allow(dead_code)]
    kind: Kind,
    family: FamilyName,
    #[serde(default)]
    gamma: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    #[allow(dead_code)]
    version: Version,
    #[allow(dead_code)]
    kind: Kind,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    matrix: Vec<Vec<f64>>,
    #[serde(default)]
    stationary: Option<Vec<f64>>,
}

/// A validated model together with its source text.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub path: String,
    pub text: String,
    pub model: Model,
}

#[derive(Debug, Clone)]
pub enum Model {
    Sft(Sft),
    /// Resolved against an alphabet only when paired with a shift.
    Potential(PotentialFile),
    MarkovMap(PiecewiseLinearMarkovMap),
    Hofbauer(HofbauerPotential),
    MarkovChain(MarkovMeasure),
}

impl Model {
    pub fn kind(&self) -> Kind {
        match self {
            Model::Sft(_) => Kind::Sft,
            Model::Potential(_) => Kind::Potential,
            Model::MarkovMap(_) => Kind::MarkovMap,
            Model::Hofbauer(_) => Kind::HofbauerFamily,
            Model::MarkovChain(_) => Kind::MarkovChain,
        }
    }
}

fn position_error(path: &str, e: &serde_json::Error) -> CliError {
    let message = e.to_string();
    // serde_json appends " at line L column C"; keep the message itself
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    if e.is_syntax() || e.is_eof() {
        CliError::Syntax { path: path.into(), line: e.line(), column: e.column(), message }
    } else {
        CliError::Schema { path: path.into(), line: e.line(), column: e.column(), message }
    }
}

fn typed<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| position_error(path, &e))
}

fn semantic(path: &str) -> impl Fn(gibbs_core::Error) -> CliError + '_ {
    move |e| CliError::Semantic { path: path.into(), message: e.to_string() }
}

fn alphabet(path: &str, labels: Option<Vec<String>>, m: usize) -> Result<Alphabet, CliError> {
    let result = match labels {
        Some(l) if l.len() != m => {
            return Err(CliError::Semantic {
                path: path.into(),
                message: format!("alphabet has {} labels for a {m}x{m} matrix", l.len()),
            })
        }
        Some(l) => Alphabet::new(l),
        None => Alphabet::numeric(m),
    };
    result.map_err(semantic(path))
}

/// Parses model text; `path` only labels diagnostics.
pub fn parse_text(path: &str, text: &str) -> Result<Model, CliError> {
    serde_json::from_str::<serde_json::Value>(text).map_err(|e| position_error(path, &e))?;
    let probe: Probe = typed(path, text)?;
    match probe.kind {
        Kind::Sft => {
            let f: SftFile = typed(path, text)?;
            let m = f.transitions.len();
            let alpha = alphabet(path, f.alphabet, m)?;
            if f.transitions.iter().flatten().any(|&e| e != 0 && e != 1) {
                return Err(CliError::Semantic { path: path.into(), message: "transition entries must be 0/1".into() });
            }
            let rows: Vec<Vec<u8>> = f.transitions.iter().map(|r| r.iter().map(|&e| e as u8).collect()).collect();
            Ok(Model::Sft(Sft::new(alpha, &rows).map_err(semantic(path))?))
        }
        Kind::Potential => {
            let f: PotentialFile = typed(path, text)?;
            if f.range == 0 {
                return Err(CliError::Semantic { path: path.into(), message: "range must be at least 1".into() });
            }
            Ok(Model::Potential(f))
        }
        Kind::MarkovMap => {
            let f: MapFile = typed(path, text)?;
            let map = PiecewiseLinearMarkovMap::new(f.breakpoints, f.slopes, f.images).map_err(semantic(path))?;
            Ok(Model::MarkovMap(map))
        }
        Kind::HofbauerFamily => {
            let f: FamilyFile = typed(path, text)?;
            let family = match (f.family, f.gamma) {
                (FamilyName::PowerLog, Some(gamma)) => HofbauerFamily::PowerLog { gamma },
                (FamilyName::PowerLog, None) => {
                    return Err(CliError::Semantic { path: path.into(), message: "power-log family needs gamma".into() })
                }
                (FamilyName::Cubic, None) => HofbauerFamily::PowerLog { gamma: 3.0 },
                (FamilyName::InverseSquare, None) => HofbauerFamily::InverseSquare,
                (_, Some(_)) => {
                    return Err(CliError::Semantic { path: path.into(), message: "gamma applies only to power-log".into() })
                }
            };
            Ok(Model::Hofbauer(HofbauerPotential::new(family).map_err(semantic(path))?))
        }
        Kind::MarkovChain => {
            let f: ChainFile = typed(path, text)?;
            let m = f.matrix.len();
            if f.matrix.iter().any(|r| r.len() != m) {
                return Err(CliError::Semantic { path: path.into(), message: format!("matrix must be {m}x{m}") });
            }
            let alpha = alphabet(path, f.alphabet, m)?;
            let q = Matrix::from_rows(&f.matrix);
            // reject bad rows before the support is derived from them
            for (a, row) in f.matrix.iter().enumerate() {
                let s: f64 = row.iter().sum();
                if row.iter().any(|&x| !(x >= 0.0)) || (s - 1.0).abs() > gibbs_core::measures::STOCHASTIC_TOL {
                    return Err(CliError::Semantic {
                        path: path.into(),
                        message: format!("row {a} is not a probability vector (sum {s})"),
                    });
                }
            }
            let sft = Sft::from_fn(alpha, |a, b| q[(a, b)] > 0.0).map_err(semantic(path))?;
            let nu = match f.stationary {
                Some(pi) => MarkovMeasure::new(sft, pi, q),
                None => MarkovMeasure::from_chain(sft, q),
            }
            .map_err(semantic(path))?;
            Ok(Model::MarkovChain(nu))
        }
    }
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: name.clone(), message: e.to_string() })?;
    let model = parse_text(&name, &text)?;
    Ok(Loaded { path: name, text, model })
}

impl PotentialFile {
    /// The potential on `sft`, with words parsed against its labels.
    /// Entries for words the shift forbids are ignored.
    pub fn resolve(&self, path: &str, sft: &Sft) -> Result<LocallyConstantPotential, CliError> {
        let mut table = HashMap::new();
        for (spelled, &v) in &self.values {
            let word = sft.alphabet().parse_word(spelled).map_err(semantic(path))?;
            if sft.is_admissible(word.symbols()) {
                table.insert(word, v);
            }
        }
        LocallyConstantPotential::from_table(sft, self.range, &table).map_err(semantic(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(text: &str) -> i32 {
        parse_text("t.json", text).unwrap_err().exit_code()
    }

    #[test]
    fn parses_golden_mean() {
        let m = parse_text("g", r#"{"version":"v1","kind":"sft","transitions":[[1,1],[1,0]]}"#).unwrap();
        match m {
            Model::Sft(s) => assert_eq!(s.size(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_classes() {
        assert_eq!(code(r#"{"version":"v1","kind":"sft","transitions":[[1,1],[1,0]]"#), 3);
        assert_eq!(code(r#"{"version":"v1","kind":"sft","transitions":[[1,1],[1,0]],"extra":1}"#), 4);
        assert_eq!(code(r#"{"version":"v2","kind":"sft","transitions":[[1]]}"#), 4);
        assert_eq!(code(r#"{"version":"v1","kind":"graph"}"#), 4);
        assert_eq!(code(r#"{"version":"v1","kind":"sft","transitions":[[1,2],[1,0]]}"#), 5);
        let chain = r#"{"version":"v1","kind":"markov-chain","matrix":[[0.5,0.499],[0.5,0.5]]}"#;
        assert_eq!(code(chain), 5);
    }

    #[test]
    fn semantic_message_names_the_rule() {
        let e = parse_text("m.sft", r#"{"version":"v1","kind":"sft","transitions":[[1,2],[1,0]]}"#).unwrap_err();
        assert!(e.to_string().contains("transition entries must be 0/1"));
    }

    #[test]
    fn schema_errors_carry_positions() {
        let text = "{\n  \"version\": \"v1\",\n  \"kind\": \"sft\",\n  \"transitions\": [[1, 1], [1, 0]],\n  \"colour\": 3\n}";
        match parse_text("p", text).unwrap_err() {
            CliError::Schema { line, message, .. } => {
                assert_eq!(line, 5);
                assert!(message.contains("colour"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn potentials_resolve_against_labels() {
        let sft = match parse_text("s", r#"{"version":"v1","kind":"sft","alphabet":["-","+"],"transitions":[[1,1],[1,1]]}"#)
            .unwrap()
        {
            Model::Sft(s) => s,
            _ => unreachable!(),
        };
        let pot = r#"{"version":"v1","kind":"potential","range":2,"values":{"--":1,"-+":-1,"+-":-1,"++":1}}"#;
        let Model::Potential(p) = parse_text("p", pot).unwrap() else { unreachable!() };
        let phi = p.resolve("p", &sft).unwrap();
        assert_eq!(phi.value(&[0, 1]), Some(-1.0));
        let missing = r#"{"version":"v1","kind":"potential","range":2,"values":{"--":1}}"#;
        let Model::Potential(p) = parse_text("p", missing).unwrap() else { unreachable!() };
        assert_eq!(p.resolve("p", &sft).unwrap_err().exit_code(), 5);
    }
}
