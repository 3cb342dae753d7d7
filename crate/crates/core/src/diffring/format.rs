//! Text and JSON renderings of differential polynomials; text comes in
//! plain and LaTeX styles.

use serde_json::{json, Map, Value};

use super::{DerVar, DiffPoly, Monomial, Ring, RingContext, VarKind};
use crate::error::{Error, Result};
use crate::field::{BaseField, Coeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatStyle {
    Text,
    Latex,
}

fn latex_name(ring: &RingContext, d: DerVar) -> String {
    let name = ring.name(d.var as usize);
    let split = name
        .find(|c: char| c.is_ascii_digit() || c == '_')
        .unwrap_or(name.len());
    let (stem, sub) = name.split_at(split);
    let sub = sub.trim_start_matches('_').replace('_', ",");
    let mut s = if sub.is_empty() {
        stem.to_string()
    } else {
        format!("{stem}_{{{sub}}}")
    };
    match d.order {
        0 => {}
        1..=3 => s.push_str(&"'".repeat(d.order as usize)),
        k => s.push_str(&format!("^{{({k})}}")),
    }
    s
}

fn monomial_text(ring: &RingContext, m: &Monomial, style: FormatStyle) -> String {
    let parts: Vec<String> = m
        .factors()
        .iter()
        .map(|&(d, e)| match style {
            FormatStyle::Text => {
                let n = ring.dervar_name(d);
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            }
            FormatStyle::Latex => {
                let n = latex_name(ring, d);
                match (e, d.order) {
                    (1, _) => n,
                    (_, 1..=3) => format!("({n})^{{{e}}}"),
                    _ => format!("{n}^{{{e}}}"),
                }
            }
        })
        .collect();
    match style {
        FormatStyle::Text => parts.join("*"),
        FormatStyle::Latex => parts.join(" "),
    }
}

fn coeff_text(c: &Coeff, style: FormatStyle) -> String {
    match style {
        FormatStyle::Text => c.to_text(),
        FormatStyle::Latex => c.to_latex(),
    }
}

pub(super) fn format(p: &DiffPoly, style: FormatStyle) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = if neg { c.neg() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = monomial_text(&p.ring, m, style);
        if m.is_one() {
            out.push_str(&coeff_text(&a, style));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&coeff_text(&a, style));
            out.push_str(match style {
                FormatStyle::Text => "*",
                FormatStyle::Latex => " ",
            });
            out.push_str(&mono);
        }
    }
    out
}

pub(super) fn to_json(p: &DiffPoly) -> Value {
    let ring = &p.ring;
    let names: Vec<&str> = ring.vars().iter().map(|v| v.name.as_str()).collect();
    let params: Vec<&str> = ring
        .vars()
        .iter()
        .filter(|v| v.kind == VarKind::Parameter)
        .map(|v| v.name.as_str())
        .collect();
    let terms: Vec<Value> = p
        .terms
        .iter()
        .rev()
        .map(|(m, c)| {
            let mut mono = Map::new();
            for &(d, e) in m.factors() {
                mono.insert(ring.dervar_name(d), json!(e));
            }
            json!({"coeff": c.to_text(), "monomial": mono})
        })
        .collect();
    json!({
        "base": ring.base(),
        "ring": names,
        "parameters": params,
        "terms": terms,
    })
}

impl DiffPoly {
    /// Reads the JSON form written by [`DiffPoly::to_json`]. The ring is
    /// rebuilt from the declaration fields.
    pub fn from_json(v: &Value) -> Result<DiffPoly> {
        let bad = |m: &str| Error::InvalidInput(format!("polynomial JSON: {m}"));
        let names = v
            .get("ring")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `ring` array"))?;
        let params: Vec<&str> = match v.get("parameters") {
            Some(p) => p
                .as_array()
                .ok_or_else(|| bad("`parameters` must be an array"))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .ok_or_else(|| bad("parameter names must be strings"))
                })
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let base: BaseField = match v.get("base") {
            Some(b) => serde_json::from_value(b.clone()).map_err(|_| bad("bad `base`"))?,
            None => BaseField::RationalsQ,
        };
        let vars = names
            .iter()
            .map(|x| {
                let n = x
                    .as_str()
                    .ok_or_else(|| bad("variable names must be strings"))?;
                let kind = if params.contains(&n) {
                    VarKind::Parameter
                } else {
                    VarKind::Main
                };
                Ok((n.to_string(), kind))
            })
            .collect::<Result<Vec<_>>>()?;
        let ring = RingContext::new(base, vars)?;
        Self::from_json_in(&ring, v)
    }

    /// Reads the `terms` of a JSON polynomial into an existing ring.
    pub fn from_json_in(ring: &Ring, v: &Value) -> Result<DiffPoly> {
        let bad = |m: &str| Error::InvalidInput(format!("polynomial JSON: {m}"));
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `terms` array"))?;
        let mut acc = DiffPoly::zero(ring);
        for t in terms {
            let c = t
                .get("coeff")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("term without string `coeff`"))?;
            let mut term = DiffPoly::parse(ring, c)?;
            if !term.is_constant() {
                return Err(bad("coefficient is not a constant"));
            }
            let mono = t
                .get("monomial")
                .and_then(Value::as_object)
                .ok_or_else(|| bad("term without `monomial` object"))?;
            for (k, e) in mono {
                let e = e
                    .as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| bad("exponents must be unsigned integers"))?;
                let f = DiffPoly::parse(ring, k)?;
                term = &term * &f.pow(e);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }
}
