use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use delta_chow::algelim::ElimOptions;
use delta_chow::chow::{
    chow_form, chow_hypersurface, differential_resultant, generalized_chow_form,
    resultant_matrix_1var, ChowOptions,
};
use delta_chow::quasivariety::{build_template, cv1_generate, support_ring, ChowIndex};
use delta_chow::verify::{numeric_fiber_check, verify_against_ideal, FiberOptions};
use delta_chow::{
    charset, BaseField, ChowForm, DiffChain, DiffPoly, Error, GenericShape, Ranking, Ring,
    RingContext, VarKind,
};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Field, GlobalOpts, PolyInput, RingArgs};

pub enum CliError {
    /// Bad invocation; exit code 2.
    Usage(String),
    /// Failure reported by the kernel; exit code 1 unless it is a usage error.
    Math(Error),
    /// Complete output of a check that did not pass; exit code 1.
    Failed(Output),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Math(e)
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

type Res<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> Res<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Charset { ring, input } => {
            let (r, rk) = build_ring(ring)?;
            let a = chain_of(&r, &rk, input)?;
            Ok(chain_output(&a))
        }
        Command::Reduce {
            ring,
            by,
            poly,
            partial,
        } => {
            let (r, rk) = build_ring(ring)?;
            let els = by
                .iter()
                .map(|s| DiffPoly::parse(&r, s))
                .collect::<Result<Vec<_>, _>>()?;
            let a = DiffChain::new(els, &rk)?;
            let f = DiffPoly::parse(&r, poly)?;
            let cert = if *partial {
                a.partial_reduce(&f)?
            } else {
                a.ritt_reduce(&f)?
            };
            let exps: Vec<Value> = cert
                .multiplier_exponents
                .iter()
                .map(|(d, e)| json!([d, e]))
                .collect();
            let text = format!(
                "remainder: {}\nmultiplier exponents (separant, initial): {:?}",
                cert.remainder, cert.multiplier_exponents
            );
            Ok(Output {
                json: json!({
                    "remainder": cert.remainder.to_text(),
                    "multiplier_exponents": exps,
                    "reduced": cert.remainder.is_zero(),
                }),
                text,
            })
        }
        Command::Chow { ring, input } => {
            let (r, rk) = build_ring(ring)?;
            let a = chain_of(&r, &rk, input)?;
            Ok(chow_output(&chow_form(&a, &options(g))?))
        }
        Command::ChowHyper { ring, poly } => {
            let (r, _) = build_ring(ring)?;
            Ok(chow_output(&chow_hypersurface(&DiffPoly::parse(
                &r, poly,
            )?)?))
        }
        Command::Gchow {
            ring,
            input,
            orders,
            degrees,
        } => {
            let (r, rk) = build_ring(ring)?;
            let ps = polys_of(&r, input)?;
            let a = if ps.is_empty() {
                DiffChain::empty(&rk)
            } else {
                charset(&ps, &rk)?
            };
            let shapes = shapes(orders, degrees)?;
            Ok(chow_output(&generalized_chow_form(
                &a,
                &shapes,
                &options(g),
            )?))
        }
        Command::Dres {
            n,
            orders,
            degrees,
            matrix,
        } => {
            let shapes = shapes(orders, degrees)?;
            let c = differential_resultant(*n, &shapes, &options(g))?;
            let mut out = chow_output(&c);
            if *matrix {
                let expected = [GenericShape::new(0, 2)?, GenericShape::new(1, 2)?];
                if *n != 1 || shapes != expected {
                    return Err(CliError::Usage(
                        "--matrix is available for --n 1 --orders 0,1 --degrees 2,2 only".into(),
                    ));
                }
                let m = resultant_matrix_1var()?;
                let q = m.quotient(&c.poly)?;
                out.json["matrix"] = json!({
                    "rows": m.row_labels,
                    "columns": m.column_labels,
                    "determinant_nterms": m.determinant.nterms(),
                    "quotient": q.to_text(),
                });
                let _ = write!(
                    out.text,
                    "\nmatrix: {}×{}, determinant {} terms, determinant / R = {}",
                    m.matrix.len(),
                    m.column_labels.len(),
                    m.determinant.nterms(),
                    q
                );
            }
            Ok(out)
        }
        Command::Verify {
            chow,
            ideal,
            fiber,
            samples,
        } => {
            let c = ChowForm::from_json(&read_json(chow)?)?;
            let a = read_chain(&read_json(ideal)?)?;
            let mut rep = verify_against_ideal(&c, &a);
            let mut json = rep.to_json();
            if *fiber {
                let opts = FiberOptions {
                    samples: *samples,
                    seed: g.seed,
                    ..Default::default()
                };
                let f = numeric_fiber_check(&c, &a, &opts)?;
                let ok = f.max_residual < 1e-9;
                json["fiber"] = json!({
                    "max_residual": f.max_residual,
                    "samples": f.samples,
                    "roots": f.roots,
                    "seed": g.seed,
                    "passed": ok,
                });
                if !ok {
                    json["passed"] = json!(false);
                }
                rep.checks.push(delta_chow::Check {
                    name: "numeric_fiber".into(),
                    status: if ok {
                        delta_chow::CheckStatus::Pass
                    } else {
                        delta_chow::CheckStatus::Fail
                    },
                    detail: format!(
                        "max residual {:e} over {} samples",
                        f.max_residual, f.samples
                    ),
                    witness: None,
                });
            }
            let mut text = String::new();
            for ch in &rep.checks {
                let _ = writeln!(
                    text,
                    "{:<7} {:<30} {}",
                    ch.status.to_string(),
                    ch.name,
                    ch.detail
                );
                if let Some(w) = &ch.witness {
                    let _ = writeln!(text, "        witness: {w}");
                }
            }
            let passed = json["passed"].as_bool().unwrap_or(false);
            let _ = write!(
                text,
                "{}",
                if passed {
                    "verified"
                } else {
                    "verification failed"
                }
            );
            if !passed {
                return Err(CliError::Failed(Output { json, text }));
            }
            Ok(Output { json, text })
        }
        Command::Quasivariety { index, support } => {
            let idx: ChowIndex = index
                .parse()
                .map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let sr = support_ring(idx)?;
            let monos = read_json(support)?;
            let list = monos.as_array().ok_or_else(|| {
                CliError::Usage("support file must hold a JSON array of monomials".into())
            })?;
            let sup = list
                .iter()
                .map(|m| {
                    let s = m
                        .as_str()
                        .ok_or_else(|| CliError::Usage("support entries must be strings".into()))?;
                    Ok(DiffPoly::parse(&sr, s)?)
                })
                .collect::<Res<Vec<_>>>()?;
            let q = cv1_generate(&build_template(idx, &sup)?)?;
            let mut text = format!("template: {}\n", q.template.poly);
            let _ = writeln!(text, "relations ({}):", q.relations.len());
            for r in &q.relations {
                let _ = writeln!(text, "  {r}");
            }
            let _ = write!(
                text,
                "excluded: V({})",
                q.excluded
                    .iter()
                    .map(DiffPoly::to_text)
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            Ok(Output {
                json: q.to_json(),
                text,
            })
        }
        Command::Dims { ring, input } => {
            let (r, rk) = build_ring(ring)?;
            let d = chain_of(&r, &rk, input)?.dim_order()?;
            Ok(Output {
                json: json!({"dim": d.dimension, "order": d.order}),
                text: format!("dim {} order {}", d.dimension, d.order),
            })
        }
        Command::Docs => Err(CliError::Usage("`docs` is handled before dispatch".into())),
    }
}

fn options(g: &GlobalOpts) -> ChowOptions {
    let deadline = g
        .deadline
        .map(|s| Instant::now() + Duration::from_secs_f64(s));
    let mut elim = ElimOptions {
        trace: g.trace,
        ..Default::default()
    }
    .with_deadline(deadline);
    if let Some(b) = g.max_basis {
        elim.limits.max_basis = b;
    }
    if let Some(t) = g.max_terms {
        elim.limits.max_poly_terms = t;
    }
    ChowOptions { elim }
}

fn base(f: Field) -> BaseField {
    match f {
        Field::Q => BaseField::RationalsQ,
        Field::Qt => BaseField::RationalFunctionsQt,
    }
}

fn make_ring(b: BaseField, main: &[String], params: &[String]) -> Res<Ring> {
    let vars = main
        .iter()
        .map(|n| (n.trim().to_string(), VarKind::Main))
        .chain(
            params
                .iter()
                .map(|n| (n.trim().to_string(), VarKind::Parameter)),
        )
        .collect();
    Ok(RingContext::new(b, vars)?)
}

fn build_ring(a: &RingArgs) -> Res<(Ring, Ranking)> {
    let r = make_ring(base(a.field), &a.ring, &a.params)?;
    let rk = Ranking::parse(&r, &a.ranking)?;
    Ok((r, rk))
}

fn polys_of(r: &Ring, input: &PolyInput) -> Res<Vec<DiffPoly>> {
    let mut texts: Vec<String> = input.polys.clone();
    if let Some(path) = &input.input {
        let s = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                texts.push(line.to_string());
            }
        }
    }
    Ok(texts
        .iter()
        .map(|s| DiffPoly::parse(r, s))
        .collect::<Result<_, _>>()?)
}

fn chain_of(r: &Ring, rk: &Ranking, input: &PolyInput) -> Res<DiffChain> {
    let ps = polys_of(r, input)?;
    if ps.is_empty() {
        return Err(CliError::Usage("no polynomials given".into()));
    }
    Ok(charset(&ps, rk)?)
}

fn shapes(orders: &[u32], degrees: &[u32]) -> Res<Vec<GenericShape>> {
    if orders.len() != degrees.len() {
        return Err(CliError::Usage(format!(
            "{} orders but {} degrees",
            orders.len(),
            degrees.len()
        )));
    }
    Ok(orders
        .iter()
        .zip(degrees)
        .map(|(&o, &d)| GenericShape::new(o, d))
        .collect::<Result<_, _>>()?)
}

fn chain_output(a: &DiffChain) -> Output {
    let ring = a.ranking().ring();
    let names: Vec<&str> = ring.vars().iter().map(|v| v.name.as_str()).collect();
    let params: Vec<&str> = ring
        .vars()
        .iter()
        .filter(|v| v.kind == VarKind::Parameter)
        .map(|v| v.name.as_str())
        .collect();
    let els: Vec<String> = a.elements().iter().map(DiffPoly::to_text).collect();
    let (dim, order, pset) = match a.dim_order() {
        Ok(d) => (json!(d.dimension), json!(d.order), json!(d.parametric_set)),
        Err(_) => (json!(ring.n_main() - a.len()), Value::Null, Value::Null),
    };
    let mut text = String::from("chain:\n");
    for e in &els {
        let _ = writeln!(text, "  {e}");
    }
    let _ = write!(
        text,
        "dimension: {dim}\norder: {order}\nparametric set: {pset}"
    );
    Output {
        json: json!({
            "base": ring.base(),
            "ring": names,
            "parameters": params,
            "ranking": a.ranking().to_string(),
            "chain": els,
            "dimension": dim,
            "order": order,
            "parametric_set": pset,
        }),
        text,
    }
}

fn read_chain(v: &Value) -> Res<DiffChain> {
    let bad = |what: &str| CliError::Usage(format!("chain JSON: missing or bad `{what}`"));
    let strings = |k: &str| -> Res<Vec<String>> {
        match v.get(k) {
            None => Ok(Vec::new()),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(k)))
                .collect(),
            Some(_) => Err(bad(k)),
        }
    };
    let names = strings("ring")?;
    let params = strings("parameters")?;
    let main: Vec<String> = names
        .iter()
        .filter(|n| !params.contains(n))
        .cloned()
        .collect();
    let b: BaseField = match v.get("base") {
        Some(b) => serde_json::from_value(b.clone()).map_err(|_| bad("base"))?,
        None => BaseField::RationalsQ,
    };
    let ring = make_ring(b, &main, &params)?;
    let rk = Ranking::parse(
        &ring,
        v.get("ranking")
            .and_then(Value::as_str)
            .unwrap_or("orderly"),
    )?;
    let els = strings("chain")?
        .iter()
        .map(|s| DiffPoly::parse(&ring, s))
        .collect::<Result<Vec<_>, _>>()?;
    if els.is_empty() {
        return Ok(DiffChain::empty(&rk));
    }
    Ok(DiffChain::new(els, &rk)?)
}

fn chow_output(c: &ChowForm) -> Output {
    let mut text = format!("{}\n", c.poly);
    let _ = write!(
        text,
        "n={} d={} h={} g={} nterms={} block_degrees={:?} block_orders={:?}",
        c.n,
        c.d,
        c.h,
        c.g,
        c.poly.nterms(),
        c.block_degrees,
        c.block_orders
    );
    for w in &c.warnings {
        let _ = write!(text, "\nwarning: {w}");
    }
    Output {
        json: c.to_json(),
        text,
    }
}

fn read_json(path: &Path) -> Res<Value> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&s)
        .map_err(|e| CliError::Usage(format!("{}: invalid JSON: {e}", path.display())))
}
