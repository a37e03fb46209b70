//! Command implementations.
//!
//! Every command produces an ordered list of report sections plus an
//! [`Outcome`] that drives the exit code: 0 for a definite result, 2 for
//! `INCONCLUSIVE`, 1 for errors.  Recoverable resource failures (the
//! Groebner step budget from `MJ_SINGULAR_MAX_GB_STEPS`, field-extension
//! depth) downgrade a classification to `INCONCLUSIVE` instead of guessing;
//! they never change a verdict.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use mj_singular::classify::{
    classify_curve_germ, classify_surface_germ_with_bound, cone_criterion, emb_dim_at_origin,
};
use mj_singular::groebner::{groebner_basis, ideal_dimension, Dimension, MonomialOrder};
use mj_singular::jets::{jet_fiber_dim, mld_mixed_upper_bound, mld_upper_bound, MldBound};
use mj_singular::newton::{newton_nonlc_certificate, NewtonCertificate};
use mj_singular::poly::{Matrix, MultiPoly};
use mj_singular::{Budget, Error};

use crate::doc::{parse_document, InputDocument};
use crate::report::{bound_to_json, germ_to_json, obj, text};

/// How a finished command maps to an exit code.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// A definite answer: exit 0.
    Definite,
    /// The analysis ended without deciding: exit 2.
    Inconclusive,
    /// Some batch entries failed: exit 1 (single-file errors skip the
    /// report entirely and also exit 1).
    Failed,
}

/// Ordered report sections paired with the outcome.
pub type CommandResult = Result<(Vec<(&'static str, Value)>, Outcome), String>;

const INCONCLUSIVE: &str = "INCONCLUSIVE";

pub struct ClassifyOpts {
    pub order: Option<u32>,
    pub levels: Option<usize>,
    pub search_bound: usize,
    pub self_check: usize,
    pub seed: u64,
}

fn env_budget() -> Result<Budget, String> {
    match std::env::var("MJ_SINGULAR_MAX_GB_STEPS") {
        Ok(v) => {
            let steps: u64 = v
                .parse()
                .map_err(|e| format!("invalid MJ_SINGULAR_MAX_GB_STEPS '{v}': {e}"))?;
            Ok(Budget::with_steps(steps))
        }
        Err(_) => Ok(Budget::unlimited()),
    }
}

/// True for failures that mean "ran out of resources", not "wrong input".
fn recoverable(e: &Error) -> bool {
    matches!(e, Error::BudgetExhausted | Error::ExtensionTooDeep)
}

fn stop_reason(e: &Error) -> &'static str {
    match e {
        Error::BudgetExhausted => "the Groebner step budget was exhausted",
        Error::ExtensionTooDeep => {
            "a field extension tower deeper than supported would be required"
        }
        _ => "the analysis stopped",
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_document(path: &Path) -> Result<InputDocument, String> {
    let text = read_file(path)?;
    parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn input_json(file: Option<&str>, doc: &InputDocument, options: Value) -> Value {
    let mut pairs: Vec<(&str, Value)> = Vec::new();
    if let Some(f) = file {
        pairs.push(("file", text(f)));
    }
    pairs.push((
        "vars",
        Value::Array(doc.vars.iter().map(text).collect()),
    ));
    pairs.push((
        "gens",
        Value::Array(doc.gens.iter().map(text).collect()),
    ));
    pairs.push((
        "ideal_a",
        Value::Array(doc.ideal_a.iter().map(text).collect()),
    ));
    pairs.push((
        "t",
        match &doc.t {
            Some(t) => text(t),
            None => Value::Null,
        },
    ));
    pairs.push(("options", options));
    obj(pairs)
}

/// A germ section assembled by hand, for outcomes the classifier modules do
/// not produce themselves (stopped analyses, dimension >= 3).
fn synthetic_germ(
    dim: Value,
    emb_dim: Value,
    verdict: &str,
    certificate: Vec<(String, String)>,
) -> Value {
    obj(vec![
        ("dim", dim),
        ("emb_dim", emb_dim),
        ("mult", Value::Null),
        (
            "invariants",
            obj(vec![
                ("tau", Value::Null),
                ("m2", Value::Null),
                ("tau2", Value::Null),
                ("alpha", Value::Null),
                ("beta", Value::Null),
                ("ade", Value::Null),
            ]),
        ),
        ("verdict", text(verdict)),
        (
            "certificate",
            Value::Array(
                certificate
                    .into_iter()
                    .map(|(branch, evidence)| {
                        obj(vec![("branch", text(branch)), ("evidence", text(evidence))])
                    })
                    .collect(),
            ),
        ),
    ])
}

fn nonzero_gens(doc: &InputDocument) -> Result<Vec<MultiPoly>, String> {
    let gens: Vec<MultiPoly> = doc.gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Err("all generators are zero".to_string());
    }
    for g in &gens {
        if !g.constant_term().is_zero() {
            return Err("generators do not all vanish at the origin".to_string());
        }
    }
    Ok(gens)
}

fn germ_dimension(gens: &[MultiPoly], budget: &Budget) -> Result<usize, Error> {
    let basis = groebner_basis(gens, MonomialOrder::Grevlex, budget)?;
    match ideal_dimension(&basis) {
        Dimension::Dim(d) => Ok(d),
        Dimension::Empty => Err(Error::GermNotAtOrigin),
    }
}

/// The corroborating jet-level sweep; resource failures become an error
/// note instead of poisoning the verdict.
fn jets_section(gens: &[MultiPoly], dim: usize, levels: usize, budget: &Budget) -> Value {
    match mld_upper_bound(gens, dim, levels, budget) {
        Ok(bound) => bound_to_json(&bound),
        Err(ref e) if recoverable(e) => obj(vec![("error", text(stop_reason(e)))]),
        Err(e) => obj(vec![("error", text(e))]),
    }
}

fn newton_section(gens: &[MultiPoly]) -> Result<Option<Value>, String> {
    if gens.len() != 1 {
        return Ok(None);
    }
    let cert = newton_nonlc_certificate(&gens[0]).map_err(|e| e.to_string())?;
    Ok(Some(obj(vec![("certificate", text(cert))])))
}

/// The verdict token alone, for self-check repetitions.  Resource failures
/// count as `INCONCLUSIVE`.
fn verdict_only(gens: &[MultiPoly], order: u32, search_bound: usize, levels: usize) -> Result<String, String> {
    let budget = env_budget()?;
    let dim = match germ_dimension(gens, &budget) {
        Ok(d) => d,
        Err(ref e) if recoverable(e) => return Ok(INCONCLUSIVE.to_string()),
        Err(e) => return Err(e.to_string()),
    };
    let verdict = match dim {
        1 => classify_curve_germ(gens, &budget).map(|r| r.verdict.to_string()),
        2 => classify_surface_germ_with_bound(gens, order, search_bound, &budget)
            .map(|r| r.verdict.to_string()),
        d => {
            return match mld_upper_bound(gens, d, levels, &budget) {
                Ok(bound) if bound.certifies_not_log_canonical() => {
                    Ok("NOT_MJ_LOG_CANONICAL".to_string())
                }
                Ok(_) => Ok(INCONCLUSIVE.to_string()),
                Err(ref e) if recoverable(e) => Ok(INCONCLUSIVE.to_string()),
                Err(e) => Err(e.to_string()),
            };
        }
    };
    match verdict {
        Ok(v) => Ok(v),
        Err(ref e) if recoverable(e) => Ok(INCONCLUSIVE.to_string()),
        Err(e) => Err(e.to_string()),
    }
}

fn random_change(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let slices: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = Matrix::from_i64(&slices);
        if m.rank() == n {
            return m;
        }
    }
}

/// Re-classifies after random invertible linear changes of variables and
/// checks that no two definite verdicts disagree.
fn self_check_section(
    gens: &[MultiPoly],
    original: &str,
    opts: &ClassifyOpts,
    order: u32,
    levels: usize,
) -> Result<Value, String> {
    let n = gens[0].nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut verdicts: Vec<String> = Vec::new();
    for _ in 0..opts.self_check {
        let m = random_change(&mut rng, n);
        let moved: Result<Vec<MultiPoly>, Error> =
            gens.iter().map(|g| g.linear_change(&m)).collect();
        let moved = moved.map_err(|e| e.to_string())?;
        verdicts.push(verdict_only(&moved, order, opts.search_bound, levels)?);
    }
    let mut definite: Vec<&str> = Vec::new();
    for v in std::iter::once(original).chain(verdicts.iter().map(|s| s.as_str())) {
        if v != INCONCLUSIVE && !definite.contains(&v) {
            definite.push(v);
        }
    }
    let consistent = definite.len() <= 1;
    let section = obj(vec![
        ("changes", Value::from(opts.self_check as u64)),
        ("seed", Value::from(opts.seed)),
        (
            "verdicts",
            Value::Array(verdicts.iter().map(text).collect()),
        ),
        ("consistent", Value::Bool(consistent)),
    ]);
    if !consistent {
        return Err(format!(
            "self-check found inconsistent verdicts under linear changes of variables: {}",
            definite.join(" vs "),
        ));
    }
    Ok(section)
}

/// The full classification pipeline for one parsed document.
fn classify_document(
    label: &str,
    doc: &InputDocument,
    opts: &ClassifyOpts,
) -> CommandResult {
    let budget = env_budget()?;
    let order = opts.order.or(doc.order).unwrap_or(12);
    let gens = nonzero_gens(doc)?;

    let mut body: Vec<(&'static str, Value)> = Vec::new();

    let dim = match germ_dimension(&gens, &budget) {
        Ok(d) => d,
        Err(ref e) if recoverable(e) => {
            let levels = opts.levels.or(doc.levels).unwrap_or(3);
            body.push((
                "input",
                input_json(Some(label), doc, classify_options(order, levels, opts)),
            ));
            body.push((
                "germ",
                synthetic_germ(
                    Value::Null,
                    Value::Null,
                    INCONCLUSIVE,
                    vec![("analysis stopped".to_string(), stop_reason(e).to_string())],
                ),
            ));
            return Ok((body, Outcome::Inconclusive));
        }
        Err(e) => return Err(e.to_string()),
    };
    if dim == 0 {
        return Err(
            "the ideal cuts a zero-dimensional scheme at the origin; there is no germ to classify"
                .to_string(),
        );
    }
    let levels = opts.levels.or(doc.levels).unwrap_or(if dim == 1 { 5 } else { 3 });
    body.push((
        "input",
        input_json(Some(label), doc, classify_options(order, levels, opts)),
    ));

    let emb_dim = emb_dim_at_origin(&gens).map_err(|e| e.to_string())?;

    let (germ, verdict) = match dim {
        1 => match classify_curve_germ(&gens, &budget) {
            Ok(report) => {
                let v = report.verdict.to_string();
                (germ_to_json(&report), v)
            }
            Err(ref e) if recoverable(e) => (
                synthetic_germ(
                    Value::from(dim),
                    Value::from(emb_dim),
                    INCONCLUSIVE,
                    vec![("analysis stopped".to_string(), stop_reason(e).to_string())],
                ),
                INCONCLUSIVE.to_string(),
            ),
            Err(e) => return Err(e.to_string()),
        },
        2 => match classify_surface_germ_with_bound(&gens, order, opts.search_bound, &budget) {
            Ok(report) => {
                let v = report.verdict.to_string();
                (germ_to_json(&report), v)
            }
            Err(ref e) if recoverable(e) => (
                synthetic_germ(
                    Value::from(dim),
                    Value::from(emb_dim),
                    INCONCLUSIVE,
                    vec![("analysis stopped".to_string(), stop_reason(e).to_string())],
                ),
                INCONCLUSIVE.to_string(),
            ),
            Err(e) => return Err(e.to_string()),
        },
        d => {
            // No classification exists in dimension >= 3: report only the
            // necessary conditions from jets and the Newton polygon.
            let bound = match mld_upper_bound(&gens, d, levels, &budget) {
                Ok(b) => Some(b),
                Err(ref e) if recoverable(e) => None,
                Err(e) => return Err(e.to_string()),
            };
            let newton = if gens.len() == 1 {
                Some(newton_nonlc_certificate(&gens[0]).map_err(|e| e.to_string())?)
            } else {
                None
            };
            let (verdict, entry) = dim3_verdict(d, levels, bound.as_ref(), newton);
            body.push((
                "germ",
                synthetic_germ(Value::from(d), Value::from(emb_dim), verdict, vec![entry]),
            ));
            if let Some(b) = &bound {
                body.push(("jets", bound_to_json(b)));
            } else {
                body.push((
                    "jets",
                    obj(vec![("error", text("the Groebner step budget was exhausted"))]),
                ));
            }
            if let Some(cert) = newton {
                body.push(("newton", obj(vec![("certificate", text(cert))])));
            }
            let outcome = if verdict == INCONCLUSIVE {
                Outcome::Inconclusive
            } else {
                Outcome::Definite
            };
            return Ok((body, outcome));
        }
    };

    body.push(("germ", germ));
    body.push(("jets", jets_section(&gens, dim, levels, &budget)));
    if let Some(newton) = newton_section(&gens)? {
        body.push(("newton", newton));
    }
    if opts.self_check > 0 {
        body.push((
            "self_check",
            self_check_section(&gens, &verdict, opts, order, levels)?,
        ));
    }

    let outcome = if verdict == INCONCLUSIVE {
        Outcome::Inconclusive
    } else {
        Outcome::Definite
    };
    Ok((body, outcome))
}

fn classify_options(order: u32, levels: usize, opts: &ClassifyOpts) -> Value {
    obj(vec![
        ("order", Value::from(order)),
        ("levels", Value::from(levels as u64)),
        ("search_bound", Value::from(opts.search_bound as u64)),
        ("self_check", Value::from(opts.self_check as u64)),
        ("seed", Value::from(opts.seed)),
    ])
}

fn dim3_verdict(
    d: usize,
    levels: usize,
    bound: Option<&MldBound>,
    newton: Option<NewtonCertificate>,
) -> (&'static str, (String, String)) {
    if let Some(b) = bound {
        if b.certifies_not_log_canonical() {
            return (
                "NOT_MJ_LOG_CANONICAL",
                (
                    "jet-dimension certificate".to_string(),
                    format!(
                        "the discrepancy bound at jet level {} is {}",
                        b.witness.level_x, b.value,
                    ),
                ),
            );
        }
    }
    if newton == Some(NewtonCertificate::NotLogCanonical) {
        return (
            "NOT_MJ_LOG_CANONICAL",
            (
                "polygon certificate".to_string(),
                "the all-ones point lies outside the Newton polygon".to_string(),
            ),
        );
    }
    (
        INCONCLUSIVE,
        (
            "necessary conditions only".to_string(),
            format!(
                "no non-log-canonicity certificate within {levels} jet levels; \
                 no classification is available in dimension {d}",
            ),
        ),
    )
}

/// `classify` on a file, or on every file of a directory (batch mode).
pub fn classify(path: &Path, opts: &ClassifyOpts) -> CommandResult {
    if path.is_dir() {
        return classify_batch(path, opts);
    }
    let doc = load_document(path)?;
    classify_document(&path.display().to_string(), &doc, opts)
}

fn classify_batch(dir: &Path, opts: &ClassifyOpts) -> CommandResult {
    let mut files: Vec<std::path::PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("{}: directory contains no input files", dir.display()));
    }

    // Read sequentially, classify concurrently, report in name order.
    let inputs: Vec<(String, Result<InputDocument, String>)> = files
        .iter()
        .map(|p| {
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string());
            (name, load_document(p))
        })
        .collect();
    let results: Vec<(String, CommandResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|(name, doc)| {
                scope.spawn(move || match doc {
                    Ok(doc) => classify_document(name, doc, opts),
                    Err(e) => Err(e.clone()),
                })
            })
            .collect();
        inputs
            .iter()
            .map(|(name, _)| name.clone())
            .zip(handles.into_iter().map(|h| h.join().expect("classify thread")))
            .collect()
    });

    let mut reports: Vec<Value> = Vec::new();
    let mut counts = [0usize; 4];
    let mut errors = 0usize;
    let tokens = [
        "MJ_CANONICAL",
        "MJ_LOG_CANONICAL_ONLY",
        "NOT_MJ_LOG_CANONICAL",
        INCONCLUSIVE,
    ];
    for (name, result) in results {
        match result {
            Ok((body, _)) => {
                let verdict = body
                    .iter()
                    .find(|(k, _)| *k == "germ")
                    .and_then(|(_, v)| v.get("verdict"))
                    .and_then(Value::as_str)
                    .unwrap_or(INCONCLUSIVE)
                    .to_string();
                if let Some(i) = tokens.iter().position(|t| *t == verdict) {
                    counts[i] += 1;
                }
                let mut pairs: Vec<(&str, Value)> = vec![("file", text(&name))];
                pairs.extend(body);
                reports.push(obj(pairs));
            }
            Err(e) => {
                errors += 1;
                reports.push(obj(vec![("file", text(&name)), ("error", text(e))]));
            }
        }
    }

    let summary = obj(vec![
        ("files", Value::from(reports.len() as u64)),
        ("MJ_CANONICAL", Value::from(counts[0] as u64)),
        ("MJ_LOG_CANONICAL_ONLY", Value::from(counts[1] as u64)),
        ("NOT_MJ_LOG_CANONICAL", Value::from(counts[2] as u64)),
        (INCONCLUSIVE, Value::from(counts[3] as u64)),
        ("errors", Value::from(errors as u64)),
    ]);
    let body = vec![
        (
            "input",
            obj(vec![
                ("directory", text(dir.display())),
                ("files", Value::from(reports.len() as u64)),
            ]),
        ),
        ("reports", Value::Array(reports)),
        ("summary", summary),
    ];
    let outcome = if errors > 0 {
        Outcome::Failed
    } else if counts[3] > 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Definite
    };
    Ok((body, outcome))
}

/// `jet-dim`: the dimension of one jet fiber.
pub fn jet_dim(path: &Path, level: usize) -> CommandResult {
    let doc = load_document(path)?;
    let budget = env_budget()?;
    let gens = nonzero_gens(&doc)?;
    let dim = jet_fiber_dim(&gens, level, &budget).map_err(|e| e.to_string())?;
    let body = vec![
        (
            "input",
            input_json(
                Some(&path.display().to_string()),
                &doc,
                obj(vec![("level", Value::from(level as u64))]),
            ),
        ),
        ("level", Value::from(level as u64)),
        ("fiber_dim", Value::from(dim as u64)),
    ];
    Ok((body, Outcome::Definite))
}

/// `mld-bound`: the jet-level sweep, weighted when the document carries a
/// weight ideal.
pub fn mld_bound(path: &Path, levels: Option<usize>) -> CommandResult {
    let doc = load_document(path)?;
    let budget = env_budget()?;
    let gens = nonzero_gens(&doc)?;
    let levels = levels.or(doc.levels).unwrap_or(3);
    let dim = germ_dimension(&gens, &budget).map_err(|e| e.to_string())?;
    let bound = if doc.ideal_a.is_empty() {
        mld_upper_bound(&gens, dim, levels, &budget).map_err(|e| e.to_string())?
    } else {
        let t = doc
            .t
            .as_ref()
            .ok_or("a weight ideal needs an exponent: add a 't:' line")?;
        let codim = gens[0].nvars() - dim;
        mld_mixed_upper_bound(&gens, codim, &doc.ideal_a, t, levels, levels, &budget)
            .map_err(|e| e.to_string())?
    };
    let body = vec![
        (
            "input",
            input_json(
                Some(&path.display().to_string()),
                &doc,
                obj(vec![("levels", Value::from(levels as u64))]),
            ),
        ),
        ("jets", bound_to_json(&bound)),
    ];
    Ok((body, Outcome::Definite))
}

/// `newton`: the polygon certificate of a hypersurface germ.
pub fn newton(path: &Path) -> CommandResult {
    let doc = load_document(path)?;
    let gens = nonzero_gens(&doc)?;
    if gens.len() != 1 {
        return Err("the polygon certificate needs exactly one generator".to_string());
    }
    let cert = newton_nonlc_certificate(&gens[0]).map_err(|e| e.to_string())?;
    let body = vec![
        (
            "input",
            input_json(Some(&path.display().to_string()), &doc, obj(vec![])),
        ),
        ("newton", obj(vec![("certificate", text(cert))])),
    ];
    Ok((body, Outcome::Definite))
}

/// `emb-dim`: the embedding dimension at the origin.
pub fn emb_dim(path: &Path) -> CommandResult {
    let doc = load_document(path)?;
    let gens = nonzero_gens(&doc)?;
    let k = emb_dim_at_origin(&gens).map_err(|e| e.to_string())?;
    let body = vec![
        (
            "input",
            input_json(Some(&path.display().to_string()), &doc, obj(vec![])),
        ),
        ("emb_dim", Value::from(k as u64)),
    ];
    Ok((body, Outcome::Definite))
}

/// `cone`: canonicity thresholds for a cone over a projectively normal
/// smooth base.
pub fn cone(ambient: u32, cone_dim: u32, degree: u32) -> CommandResult {
    let (canonical, log_canonical) =
        cone_criterion(ambient, cone_dim, degree).map_err(|e| e.to_string())?;
    let body = vec![
        (
            "input",
            obj(vec![
                ("N", Value::from(ambient)),
                ("d", Value::from(cone_dim)),
                ("a", Value::from(degree)),
            ]),
        ),
        ("canonical", Value::Bool(canonical)),
        ("log_canonical", Value::Bool(log_canonical)),
    ];
    Ok((body, Outcome::Definite))
}
