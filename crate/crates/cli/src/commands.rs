use std::sync::Arc;

use anyhow::Result;
use evalrep_core::analysis::{
    check_nilpotent_type1, lowering_kernel, primitive_vectors, verify_relations, Level, RelationResult,
    Status, Witness,
};
use evalrep_core::drinfeld::{
    direct_condition, drinfeld_closed, drinfeld_from_module, iso_direct, iso_explicit, iso_witness,
    DrinfeldPolynomial, IsoDecision,
};
use evalrep_core::linalg::materialize;
use evalrep_core::roots::support;
use evalrep_core::{
    EvaluationModule, ModuleParams, ModuleVector, Op, Representation, SchnizerModule, Sign, WeightVector,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{config_error, ParamSpec, RunConfig, Suite};
use crate::report::{status, Outcome};
use crate::scalars::CliBackend;

/// A grid point: display label plus module parameters.
struct Point<B: CliBackend> {
    label: Value,
    text: String,
    params: ModuleParams<B>,
}

fn points<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Vec<Point<B>>> {
    if let ParamSpec::Explicit { a, b: bs, lambda } = &cfg.params {
        let field = |what: &'static str| move |e: anyhow::Error| config_error(format!("{what}: {e}"));
        let av = a.iter().map(|s| b.parse_scalar(s).map_err(field("params.a"))).collect::<Result<_>>()?;
        let bv = bs.iter().map(|s| b.parse_exponent(s).map_err(field("params.b"))).collect::<Result<_>>()?;
        let lv = lambda
            .iter()
            .map(|s| b.parse_exponent(s).map_err(field("params.lambda")))
            .collect::<Result<_>>()?;
        let params = ModuleParams::new(b.clone(), cfg.n, av, bv, lv).map_err(|e| config_error(e.to_string()))?;
        return Ok(vec![Point {
            label: json!(lambda),
            text: format!("({})", lambda.join(",")),
            params,
        }]);
    }
    cfg.weights()?
        .into_iter()
        .map(|w| {
            Ok(Point {
                label: json!(w.entries()),
                text: w.to_string(),
                params: ModuleParams::distinguished(b.clone(), &w).map_err(|e| config_error(e.to_string()))?,
            })
        })
        .collect()
}

fn spectral<B: CliBackend>(b: &B, values: &[String]) -> Result<Vec<B::Scalar>> {
    values.iter().map(|s| nonzero_scalar(b, s)).collect()
}

fn nonzero_scalar<B: CliBackend>(b: &B, s: &str) -> Result<B::Scalar> {
    let x = b.parse_scalar(s).map_err(|e| config_error(e.to_string()))?;
    if b.is_zero(&x) {
        return Err(config_error(format!("spectral parameter {s:?} is zero")));
    }
    Ok(x)
}

#[derive(Serialize)]
struct SuiteResult {
    suite: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<Sign>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    passed: bool,
    checks: Vec<RelationResult>,
}

impl SuiteResult {
    fn new(suite: Suite, checks: Vec<RelationResult>) -> Self {
        SuiteResult {
            suite: suite.name(),
            sign: None,
            a: None,
            passed: checks.iter().all(RelationResult::passed),
            checks,
        }
    }

    fn line(&self, point: &str) -> Vec<String> {
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        let tag = match (&self.sign, &self.a) {
            (Some(s), Some(a)) => format!(" sign={s} a={a}"),
            _ => String::new(),
        };
        let mut out = vec![format!(
            "{} lambda={point} {}{tag} {ok}/{}",
            status(self.passed),
            self.suite,
            self.checks.len()
        )];
        if let Some(c) = self.checks.iter().find(|c| !c.passed()) {
            let w = c.witness.as_ref();
            out.push(format!(
                "  {} at {}: {} != {}",
                c.id,
                w.map_or(String::new(), |w| format!("{:?}", w.basis)),
                w.map_or("", |w| &w.lhs),
                w.map_or("", |w| &w.rhs)
            ));
        }
        out
    }
}

fn kernel_check(id: &str, dim: usize, contains: bool) -> RelationResult {
    let ok = dim == 1 && contains;
    RelationResult {
        id: id.into(),
        status: if ok { Status::Pass } else { Status::Fail },
        witness: (!ok).then(|| Witness {
            basis: Vec::new(),
            lhs: format!("dim {dim}, contains generator: {contains}"),
            rhs: "dim 1, contains generator: true".into(),
        }),
    }
}

fn verify_point<B: CliBackend>(
    cfg: &RunConfig,
    b: &B,
    p: Point<B>,
    spectral: &[B::Scalar],
) -> Result<(Value, Vec<String>, usize, usize)> {
    let mut m = SchnizerModule::new(p.params)?;
    if let Some(g) = cfg.corrupted()? {
        m.corrupt(g);
    }
    let m = Arc::new(m);
    let mut suites = Vec::new();
    for suite in cfg.selected_suites() {
        match suite {
            Suite::Finite => suites.push(SuiteResult::new(Suite::Finite, verify_relations(&*m, Level::Finite)?)),
            Suite::Nilpotent => suites.push(SuiteResult::new(Suite::Nilpotent, check_nilpotent_type1(&*m)?)),
            Suite::Kernels => {
                let Some(low) = m.lowest_index().filter(|_| m.params().is_distinguished()) else {
                    continue;
                };
                let e = primitive_vectors(&*m, false, None)?;
                let f = lowering_kernel(&*m)?;
                suites.push(SuiteResult::new(
                    Suite::Kernels,
                    vec![
                        kernel_check("ker E = span v(0)", e.dim(), e.contains(b, &ModuleVector::basis(b, 0))),
                        kernel_check("ker F = span v(m^lambda)", f.dim(), f.contains(b, &m.basis(&low))),
                    ],
                ));
            }
            Suite::Affine => {
                if m.rank() < 2 {
                    continue;
                }
                for &sign in &cfg.signs {
                    for a in spectral {
                        let ev = EvaluationModule::new(m.clone(), sign, a.clone())?;
                        let mut r = SuiteResult::new(Suite::Affine, verify_relations(&ev, Level::Affine)?);
                        r.sign = Some(sign);
                        r.a = Some(b.render(a));
                        suites.push(r);
                    }
                }
            }
        }
    }
    let lines = suites.iter().flat_map(|s| s.line(&p.text)).collect();
    let checks = suites.iter().map(|s| s.checks.len()).sum();
    let failures = suites.iter().flat_map(|s| &s.checks).filter(|c| !c.passed()).count();
    let value = json!({"lambda": p.label, "dim": m.dim(), "suites": suites});
    Ok((value, lines, checks, failures))
}

fn collect(rows: Vec<(Value, Vec<String>, usize, usize)>) -> Outcome {
    let mut out = Outcome::default();
    for (v, lines, checks, failures) in rows {
        out.results.push(v);
        out.lines.extend(lines);
        out.checks += checks;
        out.failures += failures;
    }
    out
}

pub fn verify<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    let spectral = spectral(b, &cfg.a)?;
    let rows = points(cfg, b)?
        .into_par_iter()
        .map(|p| verify_point(cfg, b, p, &spectral))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(rows))
}

fn poly_json<B: CliBackend>(b: &B, p: &DrinfeldPolynomial<B::Scalar>) -> Value {
    let mut m = Map::new();
    m.insert("i".into(), json!(p.i));
    if let Some(r) = &p.root {
        m.insert("root".into(), json!(b.render(r)));
    }
    m.insert("coeffs".into(), json!(p.coeffs.iter().map(|c| b.render(c)).collect::<Vec<_>>()));
    Value::Object(m)
}

fn drinfeld_point<B: CliBackend>(
    cfg: &RunConfig,
    b: &B,
    lam: &WeightVector,
    spectral: &[B::Scalar],
) -> Result<(Value, Vec<String>, usize, usize)> {
    let n = lam.rank();
    let base = Arc::new(SchnizerModule::distinguished(b.clone(), lam)?);
    let mut values = Vec::new();
    let mut lines = Vec::new();
    let mut failures = 0;
    for &sign in &cfg.signs {
        for a in spectral {
            let ev = EvaluationModule::new(base.clone(), sign, a.clone())?;
            let mut closed = Vec::new();
            let mut extracted = Vec::new();
            for i in 1..=n {
                closed.push(drinfeld_closed(b, lam, a, sign, i)?);
                extracted.push(if lam.get(i) == 0 {
                    DrinfeldPolynomial::constant(b, i)
                } else {
                    drinfeld_from_module(&ev, i)?
                });
            }
            let equal = closed.iter().zip(&extracted).all(|(x, y)| x.equals(b, y));
            failures += usize::from(!equal);
            let mut m = Map::new();
            m.insert("lambda".into(), json!(lam.entries()));
            m.insert("sign".into(), json!(sign));
            m.insert("a".into(), json!(b.render(a)));
            m.insert("P".into(), Value::Array(closed.iter().map(|p| poly_json(b, p)).collect()));
            m.insert("P_module".into(), Value::Array(extracted.iter().map(|p| poly_json(b, p)).collect()));
            m.insert("equal".into(), json!(equal));
            if let Some(t) = b.tolerance_hint() {
                m.insert("tolerance".into(), json!(t));
            }
            values.push(Value::Object(m));
            let roots: Vec<String> = closed
                .iter()
                .map(|p| p.root.as_ref().map_or("-".into(), |r| b.render(r)))
                .collect();
            lines.push(format!(
                "{} lambda={lam} sign={sign} a={} roots [{}]",
                status(equal),
                b.render(a),
                roots.join(", ")
            ));
        }
    }
    let checks = values.len();
    Ok((Value::Array(values), lines, checks, failures))
}

pub fn drinfeld<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    let spectral = spectral(b, &cfg.a)?;
    let rows = cfg
        .weights()?
        .par_iter()
        .map(|lam| drinfeld_point(cfg, b, lam, &spectral))
        .collect::<Result<Vec<_>>>()?;
    let mut out = collect(rows);
    out.results = out
        .results
        .into_iter()
        .flat_map(|v| match v {
            Value::Array(xs) => xs,
            x => vec![x],
        })
        .collect();
    Ok(out)
}

fn decisions<B: CliBackend>(b: &B, lam: &WeightVector, ap: &B::Scalar, am: &B::Scalar) -> Result<[IsoDecision; 3]> {
    Ok([
        iso_direct(b, lam, ap, am),
        iso_explicit(b, lam, ap, am),
        iso_witness(b, lam, ap, am)?,
    ])
}

fn iso_pair<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    let ap = nonzero_scalar(b, cfg.a_plus.as_deref().unwrap_or("1"))?;
    let am = nonzero_scalar(b, cfg.a_minus.as_deref().unwrap_or("1"))?;
    let rows = cfg
        .weights()?
        .par_iter()
        .map(|lam| {
            let d = decisions(b, lam, &ap, &am)?;
            let agree = d.iter().all(|x| x.verdict == d[0].verdict);
            let v = json!({
                "lambda": lam.entries(),
                "a_plus": b.render(&ap),
                "a_minus": b.render(&am),
                "verdict": d[0].verdict,
                "agreement": agree,
                "iso": d,
            });
            let line = format!(
                "{} lambda={lam} a_+={} a_-={} isomorphic={}",
                status(agree),
                b.render(&ap),
                b.render(&am),
                d[0].verdict
            );
            Ok((v, vec![line], 1, usize::from(!agree)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(rows))
}

/// All `a_+ = eps^p`, `a_- = eps^q`; the operator witness runs on `q = 0`.
fn iso_sweep<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    let l = cfg.l as i64;
    let weights: Vec<_> = cfg.weights()?.into_iter().filter(|w| !w.is_zero()).collect();
    let rows = weights
        .par_iter()
        .map(|lam| {
            let mut satisfying = Vec::new();
            let mut disagreements = Vec::new();
            for p in 0..l {
                for q in 0..l {
                    let (ap, am) = (b.eps_pow_int(p), b.eps_pow_int(q));
                    let d = iso_direct(b, lam, &ap, &am).verdict;
                    let e = iso_explicit(b, lam, &ap, &am).verdict;
                    let w = if q == 0 { Some(iso_witness(b, lam, &ap, &am)?.verdict) } else { None };
                    if d != e || w.is_some_and(|w| w != d) {
                        disagreements.push(json!({"p": p, "q": q, "direct": d, "explicit": e, "witness": w}));
                    }
                    if d {
                        satisfying.push(json!([p, q]));
                    }
                }
            }
            let agree = disagreements.is_empty();
            let coincidence = support(lam).len() > 1 && !satisfying.is_empty();
            let v = json!({
                "lambda": lam.entries(),
                "condition": direct_condition(lam, cfg.l),
                "pairs": l * l,
                "witnessed": l,
                "agreement": agree,
                "coincidence": coincidence,
                "satisfying": satisfying,
                "disagreements": disagreements,
            });
            let line = format!(
                "{} lambda={lam} {} of {} pairs isomorphic{}",
                status(agree),
                satisfying.len(),
                l * l,
                if coincidence { " (coincidence)" } else { "" }
            );
            Ok((v, vec![line], (l * l + l) as usize, usize::from(!agree)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = collect(rows);
    let coincidences: Vec<&Value> = out
        .results
        .iter()
        .filter(|v| v["coincidence"] == json!(true))
        .map(|v| &v["lambda"])
        .collect();
    out.sweep = Some(json!({
        "pairs": "a_+ = eps^p, a_- = eps^q, 0 <= p, q < l; operator witness on q = 0",
        "agreement": out.failures == 0,
        "coincidences": coincidences,
    }));
    Ok(out)
}

pub fn iso<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    if cfg.sweep {
        iso_sweep(cfg, b)
    } else {
        iso_pair(cfg, b)
    }
}

pub fn dump<B: CliBackend>(cfg: &RunConfig, b: &B) -> Result<Outcome> {
    let g = cfg.dump_generator()?;
    let a = spectral(b, &cfg.a)?.remove(0);
    let sign = cfg.signs[0];
    let mut out = Outcome::default();
    for p in points(cfg, b)? {
        let m = Arc::new(SchnizerModule::new(p.params)?);
        let mat = if g.index() == 0 {
            materialize(&EvaluationModule::new(m.clone(), sign, a.clone())?, &Op::gen(g), None)?
        } else {
            materialize(&*m, &Op::gen(g), None)?
        };
        let entries: Vec<Value> = mat
            .triplets()
            .into_iter()
            .map(|(r, c, x)| json!([r, c, b.render(x)]))
            .collect();
        let mut v = Map::new();
        v.insert("lambda".into(), p.label);
        v.insert("generator".into(), json!(g.to_string()));
        if g.index() == 0 {
            v.insert("sign".into(), json!(sign));
            v.insert("a".into(), json!(b.render(&a)));
        }
        v.insert("dim".into(), json!(mat.dim));
        v.insert("nnz".into(), json!(mat.nnz()));
        out.lines.push(format!("lambda={} {g}: dim {}, {} nonzero entries", p.text, mat.dim, mat.nnz()));
        out.lines.extend(mat.triplets().into_iter().map(|(r, c, x)| format!("  [{r}, {c}] {}", b.render(x))));
        v.insert("entries".into(), Value::Array(entries));
        out.results.push(Value::Object(v));
    }
    Ok(out)
}
