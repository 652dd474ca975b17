//! Problem documents.
//!
//! A problem is a JSON object:
//!
//! ```json
//! {
//!   "theory": { "kind": "purity", "dim": 2 },
//!   "state": [[[0.9, 0], [0, 0]], [[0, 0], [0.1, 0]]],
//!   "pool": [ { "kraus": [ [[1, 0], [0, 1]] ] } ],
//!   "povms": [ { "effects": [ [[1, 0], [0, 0]], [[0, 0], [0, 1]] ] } ],
//!   "probs": [1.0],
//!   "tol": 1e-9, "max_iter": 10000, "seed": 42, "n_random": 8, "shots": 100000
//! }
//! ```
//!
//! Matrices are arrays of rows; an entry is either `[re, im]` or a bare real.
//! Theory kinds:
//!
//! - `purity`: `dim`
//! - `activity`: `energies` and optional `basis` (columns are eigenvectors),
//!   or a Hermitian `hamiltonian` matrix
//! - `pointed`: `free_state` (matrix)
//! - `basis`: `basis` (columns are the basis vectors) or `dim` for the
//!   computational basis
//!
//! The state may instead be a generator:
//! `{"generator": "random" | "maximally_mixed" | "basis", "dim": d, "seed": s, "index": k}`.
//! `random` draws `GG†/Tr` with a seed derived from `(seed, "state", index)`.
//!
//! Only `theory` and `state` are required. Errors carry a path such as
//! `$.pool[1].kraus[0][2]`.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::fec::{DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::linalg::{random_density_matrix, ComplexMatrix, SeededRng, MAX_DIM};
use crate::qcore::{DensityMatrix, Hamiltonian, KrausChannel, Povm};
use crate::theories::{hamiltonian_from_matrix, ResourceTheory, TheoryKind};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_N_RANDOM: usize = 8;
/// Upper limit on `n_random`, keeping pool construction bounded.
pub const MAX_N_RANDOM: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation error at {path}: {invariant}")]
    Validation { path: String, invariant: String },
}

impl ProblemError {
    pub fn path(&self) -> &str {
        match self {
            ProblemError::Parse { path, .. } | ProblemError::Validation { path, .. } => path,
        }
    }
}

type Parsed<T> = std::result::Result<T, ProblemError>;

fn parse_err(path: &str, message: impl Into<String>) -> ProblemError {
    ProblemError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn invalid(path: &str, e: Error) -> ProblemError {
    let invariant = match e {
        Error::InvalidState(s)
        | Error::InvalidChannel(s)
        | Error::InvalidPovm(s)
        | Error::InvalidDistribution(s)
        | Error::InvalidTheory(s) => s.to_string(),
        other => other.to_string(),
    };
    ProblemError::Validation {
        path: path.to_string(),
        invariant,
    }
}

/// A validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub theory: ResourceTheory,
    pub state: DensityMatrix,
    pub pool: Option<Vec<KrausChannel>>,
    pub povms: Vec<Povm>,
    pub probs: Option<Vec<f64>>,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub n_random: usize,
    pub shots: Option<u64>,
}

impl ProblemSpec {
    /// A problem with default settings.
    pub fn new(theory: ResourceTheory, state: DensityMatrix) -> Self {
        Self {
            theory,
            state,
            pool: None,
            povms: Vec::new(),
            probs: None,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            seed: DEFAULT_SEED,
            n_random: DEFAULT_N_RANDOM,
            shots: None,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut doc = Map::new();
        doc.insert("theory".into(), theory_to_value(&self.theory));
        doc.insert("state".into(), matrix_to_value(self.state.matrix()));
        if let Some(pool) = &self.pool {
            let channels = pool
                .iter()
                .map(|c| json!({ "kraus": c.kraus().iter().map(matrix_to_value).collect::<Vec<_>>() }))
                .collect();
            doc.insert("pool".into(), Value::Array(channels));
        }
        if !self.povms.is_empty() {
            let povms = self
                .povms
                .iter()
                .map(|m| json!({ "effects": m.effects().iter().map(matrix_to_value).collect::<Vec<_>>() }))
                .collect();
            doc.insert("povms".into(), Value::Array(povms));
        }
        if let Some(p) = &self.probs {
            doc.insert("probs".into(), json!(p));
        }
        doc.insert("tol".into(), json!(self.tol));
        doc.insert("max_iter".into(), json!(self.max_iter));
        doc.insert("seed".into(), json!(self.seed));
        doc.insert("n_random".into(), json!(self.n_random));
        if let Some(s) = self.shots {
            doc.insert("shots".into(), json!(s));
        }
        Value::Object(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &str) -> Parsed<ProblemSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    problem_from_value(&doc)
}

pub fn problem_from_value(doc: &Value) -> Parsed<ProblemSpec> {
    let obj = doc.as_object().ok_or_else(|| parse_err("$", "expected an object"))?;
    const KEYS: [&str; 10] = [
        "theory", "state", "pool", "povms", "probs", "tol", "max_iter", "seed", "n_random", "shots",
    ];
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(parse_err(&format!("$.{k}"), "unknown key"));
    }

    let theory = parse_theory(required(obj, "theory", "$")?, "$.theory")?;
    let seed = optional_u64(obj, "seed", "$")?.unwrap_or(DEFAULT_SEED);
    let state = parse_state(required(obj, "state", "$")?, "$.state", seed)?;
    if state.dim() != theory.dim() {
        return Err(invalid(
            "$.state",
            Error::DimMismatch {
                expected: theory.dim(),
                found: state.dim(),
            },
        ));
    }

    let pool = match obj.get("pool") {
        None => None,
        Some(v) => {
            let items = v.as_array().ok_or_else(|| parse_err("$.pool", "expected an array"))?;
            let mut pool = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let path = format!("$.pool[{i}]");
                let c = parse_channel(item, &path)?;
                if c.dim() != theory.dim() {
                    return Err(invalid(
                        &path,
                        Error::DimMismatch {
                            expected: theory.dim(),
                            found: c.dim(),
                        },
                    ));
                }
                pool.push(c);
            }
            if pool.is_empty() {
                return Err(invalid("$.pool", Error::EmptyPool));
            }
            Some(pool)
        }
    };

    let mut povms = Vec::new();
    if let Some(v) = obj.get("povms") {
        let items = v.as_array().ok_or_else(|| parse_err("$.povms", "expected an array"))?;
        for (i, item) in items.iter().enumerate() {
            let path = format!("$.povms[{i}]");
            let m = parse_povm(item, &path)?;
            if m.dim() != theory.dim() {
                return Err(invalid(
                    &path,
                    Error::DimMismatch {
                        expected: theory.dim(),
                        found: m.dim(),
                    },
                ));
            }
            povms.push(m);
        }
    }

    let probs = match obj.get("probs") {
        None => None,
        Some(v) => {
            let p = real_array(v, "$.probs")?;
            if p.is_empty() || p.iter().any(|x| *x < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(invalid("$.probs", Error::InvalidDistribution("probabilities must be nonnegative and sum to 1")));
            }
            Some(p)
        }
    };
    if let (Some(p), Some(pool)) = (&probs, &pool) {
        if p.len() != pool.len() {
            return Err(invalid("$.probs", Error::InvalidDistribution("one probability per pool channel")));
        }
    }

    let tol = match obj.get("tol") {
        None => DEFAULT_TOL,
        Some(v) => {
            let t = real(v, "$.tol")?;
            if t.is_nan() || t <= 0.0 {
                return Err(invalid("$.tol", Error::InvalidDistribution("tolerance must be positive")));
            }
            t
        }
    };
    let max_iter = optional_u64(obj, "max_iter", "$")?.unwrap_or(DEFAULT_MAX_ITER as u64);
    if max_iter == 0 {
        return Err(invalid("$.max_iter", Error::InvalidDistribution("max_iter must be positive")));
    }
    let n_random = optional_u64(obj, "n_random", "$")?.unwrap_or(DEFAULT_N_RANDOM as u64);
    if n_random > MAX_N_RANDOM as u64 {
        return Err(parse_err("$.n_random", format!("at most {MAX_N_RANDOM}")));
    }
    let shots = optional_u64(obj, "shots", "$")?;
    if shots == Some(0) {
        return Err(invalid("$.shots", Error::InvalidDistribution("at least one shot is required")));
    }

    Ok(ProblemSpec {
        theory,
        state,
        pool,
        povms,
        probs,
        tol,
        max_iter: max_iter as usize,
        seed,
        n_random: n_random as usize,
        shots,
    })
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Parsed<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(&format!("{path}.{key}"), "missing required key"))
}

fn optional_u64(obj: &Map<String, Value>, key: &str, path: &str) -> Parsed<Option<u64>> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| parse_err(&format!("{path}.{key}"), "expected a nonnegative integer")),
    }
}

fn real(v: &Value, path: &str) -> Parsed<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| parse_err(path, "expected a finite number"))
}

fn real_array(v: &Value, path: &str) -> Parsed<Vec<f64>> {
    let items = v.as_array().ok_or_else(|| parse_err(path, "expected an array of numbers"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| real(x, &format!("{path}[{i}]")))
        .collect()
}

fn dimension(v: &Value, path: &str) -> Parsed<usize> {
    match v.as_u64() {
        Some(d) if (1..=MAX_DIM as u64).contains(&d) => Ok(d as usize),
        _ => Err(parse_err(path, format!("expected an integer dimension in 1..={MAX_DIM}"))),
    }
}

fn complex(v: &Value, path: &str) -> Parsed<Complex64> {
    match v {
        Value::Number(_) => Ok(Complex64::new(real(v, path)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(
            real(&pair[0], &format!("{path}[0]"))?,
            real(&pair[1], &format!("{path}[1]"))?,
        )),
        _ => Err(parse_err(path, "expected a number or an [re, im] pair")),
    }
}

/// Parses a square complex matrix given as an array of rows.
pub fn parse_matrix(v: &Value, path: &str) -> Parsed<ComplexMatrix> {
    let rows = v.as_array().ok_or_else(|| parse_err(path, "expected an array of rows"))?;
    let d = rows.len();
    if d == 0 || d > MAX_DIM {
        return Err(parse_err(path, format!("matrix dimension must be in 1..={MAX_DIM}")));
    }
    let mut data = Vec::with_capacity(d * d);
    for (i, row) in rows.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = row.as_array().ok_or_else(|| parse_err(&rpath, "expected a row array"))?;
        if row.len() != d {
            return Err(parse_err(&rpath, format!("expected {d} entries for a square matrix")));
        }
        for (j, entry) in row.iter().enumerate() {
            data.push(complex(entry, &format!("{rpath}[{j}]"))?);
        }
    }
    ComplexMatrix::from_row_major(d, data).map_err(|e| invalid(path, e))
}

/// Parses a matrix from JSON text.
pub fn parse_matrix_str(text: &str) -> Parsed<ComplexMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err("$", e.to_string()))?;
    parse_matrix(&v, "$")
}

pub fn matrix_to_value(m: &ComplexMatrix) -> Value {
    let d = m.dim();
    Value::Array(
        (0..d)
            .map(|i| Value::Array(m.row(i).iter().map(|z| json!([z.re, z.im])).collect()))
            .collect(),
    )
}

fn parse_theory(v: &Value, path: &str) -> Parsed<ResourceTheory> {
    let obj = v.as_object().ok_or_else(|| parse_err(path, "expected an object"))?;
    let kind = required(obj, "kind", path)?
        .as_str()
        .ok_or_else(|| parse_err(&format!("{path}.kind"), "expected a string"))?;
    let allowed: &[&str] = match kind {
        "purity" => &["kind", "dim"],
        "activity" => &["kind", "energies", "basis", "hamiltonian"],
        "pointed" => &["kind", "free_state"],
        "basis" => &["kind", "basis", "dim"],
        other => {
            return Err(parse_err(
                &format!("{path}.kind"),
                format!("unknown theory kind {other:?}; expected purity, activity, pointed or basis"),
            ))
        }
    };
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(parse_err(&format!("{path}.{k}"), format!("unknown key for theory {kind:?}")));
    }
    match kind {
        "purity" => Ok(ResourceTheory::purity(dimension(
            required(obj, "dim", path)?,
            &format!("{path}.dim"),
        )?)),
        "activity" => {
            let h = match (obj.get("hamiltonian"), obj.get("energies")) {
                (Some(m), None) => {
                    let mpath = format!("{path}.hamiltonian");
                    let m = parse_matrix(m, &mpath)?;
                    hamiltonian_from_matrix(&m).map_err(|e| invalid(&mpath, e))?
                }
                (None, Some(e)) => {
                    let energies = real_array(e, &format!("{path}.energies"))?;
                    if energies.is_empty() || energies.len() > MAX_DIM {
                        return Err(parse_err(&format!("{path}.energies"), "expected 1 to 64 energies"));
                    }
                    let basis = match obj.get("basis") {
                        Some(b) => parse_matrix(b, &format!("{path}.basis"))?,
                        None => ComplexMatrix::identity(energies.len()),
                    };
                    Hamiltonian::new(energies, basis).map_err(|e| invalid(path, e))?
                }
                _ => return Err(parse_err(path, "activity needs exactly one of \"hamiltonian\" or \"energies\"")),
            };
            Ok(ResourceTheory::activity(h))
        }
        "pointed" => {
            let spath = format!("{path}.free_state");
            let m = parse_matrix(required(obj, "free_state", path)?, &spath)?;
            Ok(ResourceTheory::pointed(DensityMatrix::new(m).map_err(|e| invalid(&spath, e))?))
        }
        _ => match (obj.get("basis"), obj.get("dim")) {
            (Some(b), None) => {
                let bpath = format!("{path}.basis");
                ResourceTheory::basis_containing(parse_matrix(b, &bpath)?).map_err(|e| invalid(&bpath, e))
            }
            (None, Some(d)) => Ok(ResourceTheory::computational_basis(dimension(d, &format!("{path}.dim"))?)),
            _ => Err(parse_err(path, "basis needs exactly one of \"basis\" or \"dim\"")),
        },
    }
}

fn theory_to_value(t: &ResourceTheory) -> Value {
    match t.kind() {
        TheoryKind::Purity => json!({ "kind": "purity", "dim": t.dim() }),
        TheoryKind::Activity(h) => json!({
            "kind": "activity",
            "energies": h.energies(),
            "basis": matrix_to_value(h.basis()),
        }),
        TheoryKind::Pointed(s) => json!({ "kind": "pointed", "free_state": matrix_to_value(s.matrix()) }),
        TheoryKind::BasisContaining(b) => json!({ "kind": "basis", "basis": matrix_to_value(b) }),
    }
}

fn parse_state(v: &Value, path: &str, default_seed: u64) -> Parsed<DensityMatrix> {
    if let Some(obj) = v.as_object() {
        const KEYS: [&str; 4] = ["generator", "dim", "seed", "index"];
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(parse_err(&format!("{path}.{k}"), "unknown key for a state generator"));
        }
        let generator = required(obj, "generator", path)?
            .as_str()
            .ok_or_else(|| parse_err(&format!("{path}.generator"), "expected a string"))?;
        let d = dimension(required(obj, "dim", path)?, &format!("{path}.dim"))?;
        let seed = optional_u64(obj, "seed", path)?.unwrap_or(default_seed);
        let index = optional_u64(obj, "index", path)?.unwrap_or(0);
        return match generator {
            "random" => {
                let mut rng = SeededRng::derive(seed, "state", index);
                DensityMatrix::new(random_density_matrix(d, &mut rng)).map_err(|e| invalid(path, e))
            }
            "maximally_mixed" => Ok(DensityMatrix::maximally_mixed(d)),
            "basis" => {
                if index >= d as u64 {
                    return Err(parse_err(&format!("{path}.index"), "basis index out of range"));
                }
                Ok(DensityMatrix::basis_state(d, index as usize))
            }
            other => Err(parse_err(
                &format!("{path}.generator"),
                format!("unknown generator {other:?}; expected random, maximally_mixed or basis"),
            )),
        };
    }
    let m = parse_matrix(v, path)?;
    DensityMatrix::new(m).map_err(|e| invalid(path, e))
}

fn matrix_list(v: &Value, key: &str, path: &str) -> Parsed<Vec<ComplexMatrix>> {
    let obj = v.as_object().ok_or_else(|| parse_err(path, format!("expected an object with \"{key}\"")))?;
    if let Some(k) = obj.keys().find(|k| k.as_str() != key) {
        return Err(parse_err(&format!("{path}.{k}"), "unknown key"));
    }
    let lpath = format!("{path}.{key}");
    let items = required(obj, key, path)?
        .as_array()
        .ok_or_else(|| parse_err(&lpath, "expected an array of matrices"))?;
    if items.is_empty() {
        return Err(parse_err(&lpath, "expected at least one matrix"));
    }
    let list = items
        .iter()
        .enumerate()
        .map(|(i, m)| parse_matrix(m, &format!("{lpath}[{i}]")))
        .collect::<Parsed<Vec<_>>>()?;
    let d = list[0].dim();
    if let Some(i) = list.iter().position(|m| m.dim() != d) {
        return Err(invalid(
            &format!("{lpath}[{i}]"),
            Error::DimMismatch {
                expected: d,
                found: list[i].dim(),
            },
        ));
    }
    Ok(list)
}

fn parse_channel(v: &Value, path: &str) -> Parsed<KrausChannel> {
    let kraus = matrix_list(v, "kraus", path)?;
    KrausChannel::new(kraus).map_err(|e| invalid(path, e))
}

fn parse_povm(v: &Value, path: &str) -> Parsed<Povm> {
    let effects = matrix_list(v, "effects", path)?;
    Povm::new(effects).map_err(|e| invalid(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "theory": {"kind": "purity", "dim": 2},
        "state": [[[0.9, 0], [0, 0]], [[0, 0], [0.1, 0]]]
    }"#;

    #[test]
    fn minimal_document() {
        let p = parse_problem(MINIMAL).unwrap();
        assert_eq!(p.theory.dim(), 2);
        assert_eq!(p.tol, 1e-9);
        assert_eq!(p.max_iter, 10_000);
        assert_eq!(p.seed, 42);
        assert!(p.pool.is_none());
        assert!((p.state.matrix()[(0, 0)].re - 0.9).abs() < 1e-15);
    }

    #[test]
    fn bare_reals_are_accepted() {
        let p = parse_problem(r#"{"theory": {"kind": "basis", "dim": 2}, "state": [[0.5, 0.5], [0.5, 0.5]]}"#).unwrap();
        assert!((p.state.matrix()[(0, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_violation_names_invariant() {
        let doc = r#"{"theory": {"kind": "purity", "dim": 2}, "state": [[0.8, 0], [0, 0.1]]}"#;
        let err = parse_problem(doc).unwrap_err();
        assert_eq!(
            err,
            ProblemError::Validation {
                path: "$.state".into(),
                invariant: "unit trace".into()
            }
        );
    }

    #[test]
    fn incomplete_channel_names_invariant() {
        let doc = r#"{
            "theory": {"kind": "purity", "dim": 2},
            "state": [[1, 0], [0, 0]],
            "pool": [{"kraus": [[[1, 0], [0, 1]]]}, {"kraus": [[[1, 0], [0, 0]]]}]
        }"#;
        match parse_problem(doc).unwrap_err() {
            ProblemError::Validation { path, invariant } => {
                assert_eq!(path, "$.pool[1]");
                assert_eq!(invariant, "completeness");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_are_located() {
        let doc = r#"{"theory": {"kind": "purity", "dim": 2}, "state": [[1, 0], [0, "x"]]}"#;
        assert_eq!(parse_problem(doc).unwrap_err().path(), "$.state[1][1]");
        let doc = r#"{"theory": {"kind": "magic", "dim": 2}, "state": [[1, 0], [0, 0]]}"#;
        assert_eq!(parse_problem(doc).unwrap_err().path(), "$.theory.kind");
        let doc = r#"{"theory": {"kind": "purity", "dim": 2}}"#;
        assert_eq!(parse_problem(doc).unwrap_err().path(), "$.state");
        let doc = r#"{"theory": {"kind": "purity", "dim": 2}, "state": [[1, 0], [0, 0]], "extra": 1}"#;
        assert_eq!(parse_problem(doc).unwrap_err().path(), "$.extra");
        assert!(matches!(parse_problem("not json"), Err(ProblemError::Parse { .. })));
        let doc = r#"{"theory": {"kind": "purity", "dim": 3}, "state": [[1, 0], [0, 0]]}"#;
        assert!(matches!(parse_problem(doc), Err(ProblemError::Validation { .. })));
    }

    #[test]
    fn generators() {
        let doc = r#"{"theory": {"kind": "pointed", "free_state": [[1, 0], [0, 0]]},
                      "state": {"generator": "random", "dim": 2, "seed": 7, "index": 3}}"#;
        let a = parse_problem(doc).unwrap();
        let b = parse_problem(doc).unwrap();
        assert_eq!(a.state, b.state);
        let doc = r#"{"theory": {"kind": "activity", "energies": [0, 1]},
                      "state": {"generator": "basis", "dim": 2, "index": 1}}"#;
        let p = parse_problem(doc).unwrap();
        assert_eq!(p.state, DensityMatrix::basis_state(2, 1));
        let doc = r#"{"theory": {"kind": "activity", "energies": [0, 0]},
                      "state": {"generator": "maximally_mixed", "dim": 2}}"#;
        assert!(matches!(parse_problem(doc), Err(ProblemError::Validation { .. })));
    }

    #[test]
    fn roundtrip() {
        let doc = r#"{
            "theory": {"kind": "activity", "hamiltonian": [[0.5, [0, 0.5]], [[0, -0.5], 0.5]]},
            "state": {"generator": "random", "dim": 2},
            "pool": [{"kraus": [[[0.6, 0], [0, 0.6]], [[0.8, 0], [0, -0.8]]]}],
            "povms": [{"effects": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}],
            "probs": [1.0],
            "shots": 1000
        }"#;
        let p = parse_problem(doc).unwrap();
        let again = parse_problem(&p.to_json()).unwrap();
        assert_eq!(p, again);
        assert_eq!(p.to_value(), again.to_value());
    }

    #[test]
    fn matrix_parser() {
        let m = parse_matrix_str("[[1, [0, 2]], [[0, -2], 3]]").unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 2.0));
        assert!(parse_matrix_str("[]").is_err());
        assert!(parse_matrix_str("[[1, 2]]").is_err());
        assert!(parse_matrix_str("[[1, 2, 3]]").is_err());
        assert!(parse_matrix_str("[[[1, 2, 3]]]").is_err());
    }
}
