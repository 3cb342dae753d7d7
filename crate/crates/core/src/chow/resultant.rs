//! Matrix representation of the simplest nonlinear differential resultant
//! and exact evaluation of resultants.

use std::collections::HashMap;

use crate::algelim;
use crate::diffring::{DerVar, DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::field::Coeff;

use super::{coefficient_ring, generic_polynomial, joint_ring, y_ring, GenericShape};

/// Coefficient matrix of the multiplied generic polynomials together with
/// its determinant.
#[derive(Clone, Debug)]
pub struct ResultantMatrix {
    pub row_labels: Vec<String>,
    pub column_labels: Vec<String>,
    pub matrix: Vec<Vec<DiffPoly>>,
    pub determinant: DiffPoly,
}

impl ResultantMatrix {
    /// `det / r`, failing unless the division is exact.
    pub fn quotient(&self, r: &DiffPoly) -> Result<DiffPoly> {
        let r = r.embed(self.determinant.ring())?;
        algelim::divide_exact(&self.determinant, &r)
    }
}

/// The 14×14 matrix for `n = 1`, orders `(0, 1)`, degrees `(2, 2)`.
///
/// Rows are `P0, y'P0, y²P0, yy'P0, y'²P0, P0', yP0', y'P0', yy'P0',
/// y'²P0', P1, yP1, y'P1, yy'P1`; columns are `y^a (y')^b` with `a + b ≤ 4`
/// and `b ≤ 3`.
pub fn resultant_matrix_1var() -> Result<ResultantMatrix> {
    let shapes = [GenericShape::new(0, 2)?, GenericShape::new(1, 2)?];
    let ys = y_ring(1);
    let all: Vec<String> = (0..2)
        .flat_map(|i| (0..shapes[i].ncoeffs(1)).map(move |j| super::coeff_name(i, j)))
        .collect();
    let ring = joint_ring(&ys, 1, &shapes, &all)?;
    let out = coefficient_ring(&ys, 1, &shapes)?;
    let p0 = generic_polynomial(&ring, 1, 0, shapes[0])?;
    let p1 = generic_polynomial(&ring, 1, 1, shapes[1])?;
    let dp0 = p0.derivative();
    let y = DerVar::new(0, 0);
    let y1 = DerVar::new(0, 1);
    let mono = |a: u32, b: u32| {
        let mut f = Vec::new();
        if a > 0 {
            f.push((y, a));
        }
        if b > 0 {
            f.push((y1, b));
        }
        Monomial::from_factors(f)
    };
    let rows: Vec<(String, DiffPoly)> = vec![
        ("P0", p0.clone(), mono(0, 0)),
        ("y'P0", p0.clone(), mono(0, 1)),
        ("y^2P0", p0.clone(), mono(2, 0)),
        ("yy'P0", p0.clone(), mono(1, 1)),
        ("y'^2P0", p0.clone(), mono(0, 2)),
        ("P0'", dp0.clone(), mono(0, 0)),
        ("yP0'", dp0.clone(), mono(1, 0)),
        ("y'P0'", dp0.clone(), mono(0, 1)),
        ("yy'P0'", dp0.clone(), mono(1, 1)),
        ("y'^2P0'", dp0.clone(), mono(0, 2)),
        ("P1", p1.clone(), mono(0, 0)),
        ("yP1", p1.clone(), mono(1, 0)),
        ("y'P1", p1.clone(), mono(0, 1)),
        ("yy'P1", p1.clone(), mono(1, 1)),
    ]
    .into_iter()
    .map(|(l, p, m)| (l.to_string(), p.mul_monomial(&m)))
    .collect();
    let mut cols = Vec::new();
    for b in 0..=3u32 {
        for a in 0..=(4 - b) {
            cols.push((a, b));
        }
    }
    cols.sort_by_key(|&(a, b)| (a + b, b));
    let mut matrix = Vec::with_capacity(rows.len());
    for (label, p) in &rows {
        let mut row = vec![DiffPoly::zero(&out); cols.len()];
        for (m, c) in p.terms() {
            let a = m.degree_in(y);
            let b = m.degree_in(y1);
            let rest = m.filter(|d| d.var != 0);
            let Some(k) = cols.iter().position(|&x| x == (a, b)) else {
                return Err(Error::Internal(format!(
                    "row {label} leaves the column set"
                )));
            };
            let t = DiffPoly::term(&ring, rest, c.clone()).embed(&out)?;
            row[k] = &row[k] + &t;
        }
        matrix.push(row);
    }
    let determinant = algelim::det(&matrix)?;
    let label = |a: u32, b: u32| match (a, b) {
        (0, 0) => "1".to_string(),
        _ => {
            let mut s = String::new();
            if a > 0 {
                s.push('y');
                if a > 1 {
                    s.push_str(&format!("^{a}"));
                }
            }
            if b > 0 {
                s.push_str("y'");
                if b > 1 {
                    s.push_str(&format!("^{b}"));
                }
            }
            s
        }
    };
    Ok(ResultantMatrix {
        row_labels: rows.into_iter().map(|(l, _)| l).collect(),
        column_labels: cols.iter().map(|&(a, b)| label(a, b)).collect(),
        matrix,
        determinant,
    })
}

/// `R` and `S_R = ∂R/∂u00^{(h0)}` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct DresValue {
    pub value: Coeff,
    pub separant: Coeff,
}

/// Evaluates `R` and its separant; each coefficient variable is assigned a
/// base-field element whose derivatives are taken in the base field.
pub fn dres_evaluate(r: &DiffPoly, assignment: &HashMap<String, Coeff>) -> Result<DresValue> {
    let ring = r.ring();
    for k in assignment.keys() {
        ring.var_or_err(k)?;
    }
    let u00 = ring.var_or_err(&super::coeff_name(0, 0))?;
    let h0 = r.order_wrt(u00).finite().unwrap_or(0);
    let s = r.partial(DerVar::new(u00, h0));
    let value_of = |d: DerVar| -> Option<Coeff> {
        let mut c = assignment.get(ring.name(d.var as usize))?.clone();
        for _ in 0..d.order {
            c = c.derivative();
        }
        Some(c)
    };
    Ok(DresValue {
        value: r.eval_exact(value_of)?,
        separant: s.eval_exact(value_of)?,
    })
}
