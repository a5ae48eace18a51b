//! Dispatch for the `cubic-image` command line tool. Every run produces a
//! single JSON document and an exit code: 0 for a result or verdict, 2 when
//! inconclusive, 3 for invalid input.

use std::fs;
use std::path::{Path, PathBuf};

use cubic_image::classify::{case_analysis, classify, ImageClassification, Regime, Verdict};
use cubic_image::cubic::MultilinearCubic;
use cubic_image::field::FieldDescriptor;
use cubic_image::json::{
    element_to_json, field_from_flag, field_to_json, jordan_from_json, jordan_to_json, matrix_from_json, matrix_to_json,
    poly_from_json, JsonError,
};
use cubic_image::matrix::{jordan_form, MatrixError, TargetClass};
use cubic_image::oracle::{cross_check, enumerate_image, is_linear_subspace, EnumerationMode, OracleError, SetRelation};
use cubic_image::solver::{solve_general, solve_jordan, SolveError, SolverConfig, WitnessTriple};
use cubic_image::structured::check_condition_31;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// Environment variable consulted for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "CUBIC_IMAGE_SEED";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Classify { poly: PathBuf, n: usize, field: String, regime: Option<String> },
    Solve { poly: PathBuf, target: PathBuf, field: Option<String>, n: Option<usize>, jordan: bool },
    CheckCond { field: String, n: usize },
    Oracle { poly: PathBuf, n: usize, q: u64, samples: Option<u64> },
    Jordan { target: PathBuf, field: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub max_tries: usize,
    pub fallback_tries: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let d = SolverConfig::default();
        RunConfig { command, seed: 0, max_tries: d.max_tries, fallback_tries: d.fallback_tries, output: None }
    }
}

/// The JSON document and exit code of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub document: Value,
}

impl Outcome {
    fn ok(document: Value) -> Self {
        Outcome { code: EXIT_OK, document }
    }

    fn inconclusive(code: &str, message: impl Into<String>) -> Self {
        let document = json!({"inconclusive": true, "error": {"code": code, "message": message.into(), "location": null}});
        Outcome { code: EXIT_INCONCLUSIVE, document }
    }

    fn invalid(e: JsonError) -> Self {
        Outcome { code: EXIT_INVALID, document: e.to_value() }
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("serializable");
        s.push('\n');
        s
    }
}

fn read_json(path: &Path, flag: &str) -> Result<Value, JsonError> {
    let text = fs::read_to_string(path).map_err(|e| JsonError::new("io", format!("{}: {e}", path.display()), flag))?;
    serde_json::from_str(&text).map_err(|e| JsonError::new("parse", e.to_string(), flag))
}

fn invalid_n(n: usize) -> Result<(), JsonError> {
    if n == 0 {
        return Err(JsonError::new("schema", "n must be positive", "--n"));
    }
    Ok(())
}

/// Runs one command. Output writing is left to the caller.
pub fn run(cfg: &RunConfig) -> Outcome {
    let result = match &cfg.command {
        Command::Classify { poly, n, field, regime } => run_classify(poly, *n, field, regime.as_deref()),
        Command::Solve { poly, target, field, n, jordan } => {
            run_solve(cfg, poly, target, field.as_deref(), *n, *jordan)
        }
        Command::CheckCond { field, n } => run_check_cond(field, *n),
        Command::Oracle { poly, n, q, samples } => run_oracle(cfg, poly, *n, *q, *samples),
        Command::Jordan { target, field } => run_jordan(target, field.as_deref()),
    };
    result.unwrap_or_else(Outcome::invalid)
}

/// Runs and writes the document to the configured output (stdout if none).
pub fn run_and_write(cfg: &RunConfig) -> i32 {
    let out = run(cfg);
    let text = out.render();
    match &cfg.output {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    out.code
}

fn parse_regime(s: &str) -> Result<Regime, JsonError> {
    match s {
        "Char0AlgClosed" => Ok(Regime::Char0AlgClosed),
        "Condition31Field" => Ok(Regime::Condition31Field),
        "OutOfHypotheses" => Ok(Regime::OutOfHypotheses),
        other => Err(JsonError::new("schema", format!("unknown regime \"{other}\""), "--regime")),
    }
}

pub fn classification_to_json(c: &ImageClassification) -> Value {
    json!({"verdict": c.verdict.to_string(), "regime": c.regime.to_string(), "notes": c.notes})
}

fn cases_to_json(f: &MultilinearCubic, n: usize) -> Value {
    let report = case_analysis(f, n);
    let rotations: Vec<Value> = report
        .rotations
        .iter()
        .map(|r| {
            json!({
                "rotation": r.rotation.name(),
                "i": r.case_i.is_some(),
                "omega": r.case_i.as_ref().map(element_to_json),
                "ii": r.case_ii,
                "iii": r.case_iii,
                "iv": r.case_iv,
            })
        })
        .collect();
    json!({"rotations": rotations, "working_rotation": report.working_rotation().map(|r| r.name())})
}

fn run_classify(poly: &Path, n: usize, field: &str, regime: Option<&str>) -> Result<Outcome, JsonError> {
    invalid_n(n)?;
    let field = field_from_flag(field)?;
    let f = poly_from_json(&read_json(poly, "--poly")?, Some(&field), "$")?;
    let requested = regime.map(parse_regime).transpose()?;
    let c = classify(&f, n, &field, requested);
    let mut doc = classification_to_json(&c);
    doc["cases"] = cases_to_json(&f, n);
    let code = if c.verdict == Verdict::Undetermined { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok(Outcome { code, document: doc })
}

fn witness_to_json(f: &MultilinearCubic, w: &WitnessTriple, target: &cubic_image::matrix::Matrix) -> Value {
    let verified = f.eval(&w.x, &w.y, &w.z).map(|v| v == *target).unwrap_or(false);
    json!({
        "in_image": true,
        "witness": {"X": matrix_to_json(&w.x), "Y": matrix_to_json(&w.y), "Z": matrix_to_json(&w.z)},
        "path": w.path.to_string(),
        "verified": verified,
    })
}

fn solve_error(e: SolveError) -> Result<Outcome, JsonError> {
    let code = match &e {
        SolveError::OutsideImage(reason) => {
            return Ok(Outcome::ok(json!({"in_image": false, "reason": reason})));
        }
        SolveError::Matrix(MatrixError::Field(_)) => return Err(JsonError::new("field", e.to_string(), "--target")),
        SolveError::Matrix(MatrixError::NotSquare { .. } | MatrixError::DimensionMismatch(_)) => {
            return Err(JsonError::new("schema", e.to_string(), "--target"))
        }
        SolveError::PreconditionViolated(_) => return Err(JsonError::new("precondition", e.to_string(), "--target")),
        SolveError::TargetNotInJn => "TargetNotInJn",
        SolveError::SamplerExhausted(_) => "SamplerExhausted",
        SolveError::CaseObstruction => "CaseObstruction",
        SolveError::TargetUnsplittable => "TargetUnsplittable",
        SolveError::UnsupportedSize(_) => "UnsupportedSize",
        SolveError::NotCommutatorForm => "NotCommutatorForm",
        SolveError::DegenerateD(_) => "DegenerateD",
        SolveError::NonzeroTrace => "NonzeroTrace",
        SolveError::InsufficientFieldSize => "InsufficientFieldSize",
        SolveError::Exhausted { .. } => "Exhausted",
        SolveError::VerificationFailed(_) => "VerificationFailed",
        SolveError::Matrix(_) => "MatrixError",
    };
    Ok(Outcome::inconclusive(code, e.to_string()))
}

fn run_solve(
    cfg: &RunConfig,
    poly: &Path,
    target: &Path,
    field: Option<&str>,
    n: Option<usize>,
    jordan: bool,
) -> Result<Outcome, JsonError> {
    let field = field.map(field_from_flag).transpose()?;
    let doc = read_json(target, "--target")?;
    let solver = SolverConfig { max_tries: cfg.max_tries, fallback_tries: cfg.fallback_tries, ..SolverConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let embed = |fd: &FieldDescriptor, k: &FieldDescriptor| -> Result<(), JsonError> {
        if fd.same_as(k) || fd.extends(k) {
            Ok(())
        } else {
            Err(JsonError::new("field", format!("target field {k} is not {fd} or a subfield of it"), "--target"))
        }
    };
    if jordan {
        let mut jd = jordan_from_json(&doc, field.as_ref(), "$")?;
        if let Some(fd) = &field {
            embed(fd, jd.field())?;
            if !fd.same_as(jd.field()) {
                let lift = |v: &[cubic_image::field::FieldElement]| -> Result<Vec<_>, JsonError> {
                    v.iter().map(|e| e.embed_into(fd).map_err(|e| JsonError::new("field", e.to_string(), "--target"))).collect()
                };
                let p = jd.p.as_ref().map(|p| p.embed_into(fd)).transpose().map_err(|e| JsonError::new("field", e.to_string(), "--target"))?;
                jd = cubic_image::matrix::JordanData::new(lift(&jd.d)?, lift(&jd.nu)?, p)
                    .map_err(|e| JsonError::new("schema", e.to_string(), "--target"))?;
            }
        }
        check_n(n, jd.n())?;
        let k = jd.field().clone();
        let f = poly_from_json(&read_json(poly, "--poly")?, Some(&k), "$")?;
        return match solve_jordan(&f, &jd, &mut rng, &solver) {
            Ok(w) => Ok(Outcome::ok(witness_to_json(&f, &w, &jd.target()))),
            Err(e) => solve_error(e),
        };
    }
    let mut t = matrix_from_json(&doc, field.as_ref(), "$")?;
    if let Some(fd) = &field {
        embed(fd, t.field())?;
        t = t.embed_into(fd).map_err(|e| JsonError::new("field", e.to_string(), "--target"))?;
    }
    if !t.is_square() {
        return Err(JsonError::new("schema", "target must be square", "$.entries"));
    }
    check_n(n, t.rows())?;
    let k = t.field().clone();
    let f = poly_from_json(&read_json(poly, "--poly")?, Some(&k), "$")?;
    match solve_general(&f, &t, &mut rng, &solver) {
        Ok(w) => Ok(Outcome::ok(witness_to_json(&f, &w, &t))),
        Err(e) => solve_error(e),
    }
}

fn check_n(n: Option<usize>, actual: usize) -> Result<(), JsonError> {
    match n {
        Some(n) if n != actual => Err(JsonError::new("schema", format!("--n {n} but target is {actual}x{actual}"), "--n")),
        _ => Ok(()),
    }
}

fn run_check_cond(field: &str, n: usize) -> Result<Outcome, JsonError> {
    invalid_n(n)?;
    let field = field_from_flag(field)?;
    let v = check_condition_31(&field, n);
    let mut doc = json!({"holds": v.holds, "field": field_to_json(&field), "n": n});
    if let Some(w) = v.witness {
        doc["witness"] = json!(w.iter().map(|e| e.to_string()).collect::<Vec<_>>());
    }
    Ok(Outcome::ok(doc))
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn run_oracle(cfg: &RunConfig, poly: &Path, n: usize, q: u64, samples: Option<u64>) -> Result<Outcome, JsonError> {
    invalid_n(n)?;
    let (p, k) = prime_power(q).ok_or_else(|| JsonError::new("schema", format!("{q} is not a prime power"), "--q"))?;
    let field = FieldDescriptor::finite_field(p, k, None).map_err(|e| JsonError::new("field", e.to_string(), "--q"))?;
    let f = poly_from_json(&read_json(poly, "--poly")?, Some(&field), "$")?;
    let mode = match samples {
        None => EnumerationMode::Exhaustive,
        Some(count) => EnumerationMode::Sampled { count, seed: cfg.seed },
    };
    let s = match enumerate_image(&f, n, &field, mode) {
        Ok(s) => s,
        Err(OracleError::TooLarge(m)) => return Err(JsonError::new("too_large", m, "--n")),
        Err(e) => return Err(JsonError::new("field", e.to_string(), "--poly")),
    };
    let mut doc = json!({"size": s.size(), "capacity": s.capacity(), "mode": s.mode().to_string(), "n": n, "q": q});
    if mode == EnumerationMode::Exhaustive {
        doc["is_subspace"] = json!(is_linear_subspace(&s).expect("exhaustive"));
        doc["trace_zero_contained"] = json!(s.is_trace_zero_contained());
        doc["scalar_closed"] = json!(s.is_scalar_closed());
        doc["conjugation_closed"] = json!(s.is_conjugation_closed(cfg.seed));
        let c = classify(&f, n, &field, None);
        let report = cross_check(&s, &c).expect("exhaustive");
        let relation = report.relation.map(|r| match r {
            SetRelation::Equal => "equal",
            SetRelation::StrictSubset => "strict_subset",
            SetRelation::NotContained => "not_contained",
        });
        doc["verdict_comparison"] = json!({
            "classification": classification_to_json(&c),
            "predicted": format!("{:?}", report.predicted),
            "predicted_size": report.predicted_size,
            "relation": relation,
            "binding": report.binding,
            "notes": report.notes,
        });
    }
    Ok(Outcome::ok(doc))
}

fn run_jordan(target: &Path, field: Option<&str>) -> Result<Outcome, JsonError> {
    let field = field.map(field_from_flag).transpose()?;
    let mut t = matrix_from_json(&read_json(target, "--target")?, field.as_ref(), "$")?;
    if let Some(fd) = &field {
        t = t.embed_into(fd).map_err(|e| JsonError::new("field", e.to_string(), "--target"))?;
    }
    match jordan_form(&t) {
        Ok(jd) => {
            let mut doc = jordan_to_json(&jd);
            let class = match jd.classify_target() {
                TargetClass::InJn => "InJn",
                TargetClass::SingleTwoBlock => "SingleTwoBlock",
            };
            doc["target_class"] = json!(class);
            Ok(Outcome::ok(doc))
        }
        Err(e @ MatrixError::Unsplittable(_)) => Ok(Outcome::inconclusive("Unsplittable", e.to_string())),
        Err(e) => Err(JsonError::new("schema", e.to_string(), "--target")),
    }
}
