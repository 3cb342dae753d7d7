//! Rankings on derivatives and the leader/initial/separant decomposition.

use std::cmp::Ordering;
use std::fmt;

use crate::diffring::{same_ring, DerVar, DiffPoly, Ring, VarKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RankingKind {
    /// Total order first, then variable index.
    Orderly,
    /// Variables listed lowest first; `y_i > y_j` forces every derivative of
    /// `y_i` above every derivative of `y_j`.
    Elimination(Vec<usize>),
    /// Blocks listed lowest first, orderly inside each block.
    Block(Vec<Vec<usize>>),
}

/// A ranking on the derivatives of a ring's main variables. Parameters sit
/// below every main derivative and are never leaders.
#[derive(Clone, Debug)]
pub struct Ranking {
    ring: Ring,
    kind: RankingKind,
    group: Vec<u32>,
}

impl PartialEq for Ranking {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.ring, &o.ring) && self.kind == o.kind
    }
}

impl Ranking {
    pub fn orderly(ring: &Ring) -> Ranking {
        Ranking {
            ring: ring.clone(),
            kind: RankingKind::Orderly,
            group: vec![0; ring.nvars()],
        }
    }

    /// Elimination ranking with `order` listed lowest first. Every main
    /// variable must appear exactly once.
    pub fn elimination(ring: &Ring, order: &[usize]) -> Result<Ranking> {
        let blocks: Vec<Vec<usize>> = order.iter().map(|&v| vec![v]).collect();
        let group = Self::groups(ring, &blocks)?;
        Ok(Ranking {
            ring: ring.clone(),
            kind: RankingKind::Elimination(order.to_vec()),
            group,
        })
    }

    /// Block ranking with blocks listed lowest first.
    pub fn block(ring: &Ring, blocks: &[Vec<usize>]) -> Result<Ranking> {
        let group = Self::groups(ring, blocks)?;
        Ok(Ranking {
            ring: ring.clone(),
            kind: RankingKind::Block(blocks.to_vec()),
            group,
        })
    }

    fn groups(ring: &Ring, blocks: &[Vec<usize>]) -> Result<Vec<u32>> {
        let mut group = vec![u32::MAX; ring.nvars()];
        for (b, vs) in blocks.iter().enumerate() {
            for &v in vs {
                if v >= ring.nvars() {
                    return Err(Error::InvalidRanking(format!(
                        "variable index {v} out of range"
                    )));
                }
                if ring.kind(v) == VarKind::Parameter {
                    return Err(Error::InvalidRanking(format!(
                        "`{}` is a parameter and always ranks below main variables",
                        ring.name(v)
                    )));
                }
                if group[v] != u32::MAX {
                    return Err(Error::InvalidRanking(format!(
                        "`{}` listed twice",
                        ring.name(v)
                    )));
                }
                group[v] = b as u32;
            }
        }
        for v in ring.main_vars() {
            if group[v] == u32::MAX {
                return Err(Error::InvalidRanking(format!(
                    "main variable `{}` missing from ranking",
                    ring.name(v)
                )));
            }
        }
        for g in group.iter_mut() {
            if *g == u32::MAX {
                *g = 0;
            }
        }
        Ok(group)
    }

    /// Parses `orderly`, `elim:y1<y2<u00` or `block:[u00|y1,y2]`.
    pub fn parse(ring: &Ring, spec: &str) -> Result<Ranking> {
        let spec = spec.trim();
        let names = |s: &str, sep: char| -> Result<Vec<usize>> {
            s.split(sep)
                .map(|n| {
                    let n = n.trim();
                    ring.var(n)
                        .ok_or_else(|| Error::InvalidRanking(format!("unknown variable `{n}`")))
                })
                .collect()
        };
        if spec == "orderly" {
            Ok(Self::orderly(ring))
        } else if let Some(rest) = spec.strip_prefix("elim:") {
            Self::elimination(ring, &names(rest, '<')?)
        } else if let Some(rest) = spec.strip_prefix("block:") {
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::InvalidRanking("block ranking must be `[..|..]`".into()))?;
            let blocks = inner
                .split('|')
                .map(|b| names(b, ','))
                .collect::<Result<Vec<_>>>()?;
            Self::block(ring, &blocks)
        } else {
            Err(Error::InvalidRanking(format!(
                "unrecognized ranking `{spec}`"
            )))
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn kind(&self) -> &RankingKind {
        &self.kind
    }

    /// True when derivatives are compared by order before anything else.
    pub fn is_orderly(&self) -> bool {
        match &self.kind {
            RankingKind::Orderly => true,
            RankingKind::Elimination(v) => v.len() <= 1,
            RankingKind::Block(b) => b.len() <= 1,
        }
    }

    /// The same ranking on another ring with identical variable names.
    pub fn rebind(&self, ring: &Ring) -> Result<Ranking> {
        let map = |v: usize| ring.var_or_err(self.ring.name(v));
        match &self.kind {
            RankingKind::Orderly => Ok(Self::orderly(ring)),
            RankingKind::Elimination(o) => Self::elimination(
                ring,
                &o.iter().map(|&v| map(v)).collect::<Result<Vec<_>>>()?,
            ),
            RankingKind::Block(bs) => Self::block(
                ring,
                &bs.iter()
                    .map(|b| b.iter().map(|&v| map(v)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    fn key(&self, d: DerVar) -> (u8, u32, u32, u32) {
        let v = d.var as usize;
        if self.ring.kind(v) == VarKind::Parameter {
            return (0, 0, d.order, d.var);
        }
        let tie = match self.kind {
            RankingKind::Elimination(_) => 0,
            _ => d.var,
        };
        (1, self.group[v], d.order, tie)
    }

    pub fn compare_dervar(&self, a: DerVar, b: DerVar) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Checked comparison that rejects variables outside the ring.
    pub fn try_compare(&self, a: DerVar, b: DerVar) -> Result<Ordering> {
        let n = self.ring.nvars() as u32;
        for d in [a, b] {
            if d.var >= n {
                return Err(Error::UnknownVariable(format!("#{}", d.var)));
            }
        }
        Ok(self.compare_dervar(a, b))
    }

    /// Greatest main derivative occurring in `p`.
    pub fn leader(&self, p: &DiffPoly) -> Option<DerVar> {
        p.dervars()
            .into_iter()
            .filter(|d| self.ring.is_main(*d))
            .max_by(|a, b| self.compare_dervar(*a, *b))
    }

    pub fn decompose(&self, p: &DiffPoly) -> Result<RankDecomposition> {
        if !same_ring(p.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        let leader = self.leader(p).ok_or(Error::NoLeader)?;
        let rank_degree = p.degree(leader);
        Ok(RankDecomposition {
            leader,
            initial: p.coeff_in(leader, rank_degree),
            separant: p.partial(leader),
            rank_degree,
        })
    }

    /// `(leader, degree)`, or `None` for elements of the coefficient field.
    pub fn rank(&self, p: &DiffPoly) -> Option<(DerVar, u32)> {
        self.leader(p).map(|l| (l, p.degree(l)))
    }

    /// The rank preorder: polynomials without a leader are lowest.
    pub fn compare_rank(&self, p: &DiffPoly, q: &DiffPoly) -> Ordering {
        match (self.rank(p), self.rank(q)) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some((a, da)), Some((b, db))) => self.compare_dervar(a, b).then(da.cmp(&db)),
        }
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |v: &usize| self.ring.name(*v).to_string();
        match &self.kind {
            RankingKind::Orderly => f.write_str("orderly"),
            RankingKind::Elimination(o) => {
                write!(
                    f,
                    "elim:{}",
                    o.iter().map(name).collect::<Vec<_>>().join("<")
                )
            }
            RankingKind::Block(bs) => write!(
                f,
                "block:[{}]",
                bs.iter()
                    .map(|b| b.iter().map(name).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join("|")
            ),
        }
    }
}

/// Leader, initial, separant and leader degree of a polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RankDecomposition {
    pub leader: DerVar,
    pub initial: DiffPoly,
    pub separant: DiffPoly,
    pub rank_degree: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::RingContext;

    fn ring3() -> Ring {
        RingContext::main_q(&["y1", "y2", "y3"])
    }

    fn all_dervars(n: usize, max_order: u32) -> Vec<DerVar> {
        (0..n)
            .flat_map(|v| (0..=max_order).map(move |k| DerVar::new(v, k)))
            .collect()
    }

    fn rankings(r: &Ring) -> Vec<Ranking> {
        vec![
            Ranking::orderly(r),
            Ranking::elimination(r, &[0, 1, 2]).unwrap(),
            Ranking::elimination(r, &[2, 0, 1]).unwrap(),
            Ranking::block(r, &[vec![1], vec![0, 2]]).unwrap(),
        ]
    }

    #[test]
    fn orderly_examples() {
        let r = RingContext::main_q(&["y1", "y2"]);
        let o = Ranking::orderly(&r);
        assert_eq!(
            o.compare_dervar(DerVar::new(0, 2), DerVar::new(1, 1)),
            Ordering::Greater
        );
        assert_eq!(
            o.compare_dervar(DerVar::new(0, 1), DerVar::new(1, 1)),
            Ordering::Less
        );
        let e = Ranking::parse(&r, "elim:y1<y2").unwrap();
        assert_eq!(
            e.compare_dervar(DerVar::new(1, 0), DerVar::new(0, 5)),
            Ordering::Greater
        );
    }

    #[test]
    fn orderly_tie_break_matches_index_oracle() {
        let r = ring3();
        let o = Ranking::orderly(&r);
        let ds = all_dervars(3, 4);
        for &a in &ds {
            for &b in &ds {
                let oracle = if a.order != b.order {
                    a.order.cmp(&b.order)
                } else {
                    a.var.cmp(&b.var)
                };
                assert_eq!(o.compare_dervar(a, b), oracle, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn total_order_axioms_exhaustive() {
        let r = ring3();
        let ds = all_dervars(3, 4);
        for rk in rankings(&r) {
            for &a in &ds {
                assert_eq!(rk.compare_dervar(a, a), Ordering::Equal);
                assert_eq!(rk.compare_dervar(a.diff(1), a), Ordering::Greater);
                for &b in &ds {
                    let ab = rk.compare_dervar(a, b);
                    assert_eq!(ab, rk.compare_dervar(b, a).reverse());
                    if a != b {
                        assert_ne!(ab, Ordering::Equal);
                    }
                    if ab == Ordering::Greater {
                        assert_eq!(rk.compare_dervar(a.diff(1), b.diff(1)), Ordering::Greater);
                    }
                    for &c in &ds {
                        if ab == Ordering::Greater && rk.compare_dervar(b, c) == Ordering::Greater {
                            assert_eq!(rk.compare_dervar(a, c), Ordering::Greater);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parameters_rank_below_main() {
        let r = RingContext::with_params(crate::BaseField::RationalsQ, &["y1"], &["u00", "u01"])
            .unwrap();
        let o = Ranking::orderly(&r);
        assert_eq!(
            o.compare_dervar(DerVar::new(1, 7), DerVar::new(0, 0)),
            Ordering::Less
        );
        let p = DiffPoly::parse(&r, "u01*y1 + u00").unwrap();
        let dec = o.decompose(&p).unwrap();
        assert_eq!(dec.leader, DerVar::new(0, 0));
        assert_eq!(dec.initial, DiffPoly::parse(&r, "u01").unwrap());
        assert_eq!(dec.separant, DiffPoly::parse(&r, "u01").unwrap());
        assert_eq!(
            o.decompose(&DiffPoly::parse(&r, "u00'").unwrap()),
            Err(Error::NoLeader)
        );
    }

    #[test]
    fn decomposition_of_riccati_type() {
        let r = RingContext::main_q(&["y1"]);
        let o = Ranking::orderly(&r);
        let p = DiffPoly::parse(&r, "y1'^2 - 4*y1").unwrap();
        let dec = o.decompose(&p).unwrap();
        assert_eq!(dec.leader, DerVar::new(0, 1));
        assert!(dec.initial.is_one());
        assert_eq!(dec.separant, DiffPoly::parse(&r, "2*y1'").unwrap());
        assert_eq!(dec.rank_degree, 2);
        let q = DiffPoly::parse(&r, "y1'").unwrap();
        assert_eq!(o.compare_rank(&p, &q), Ordering::Greater);
        let init_of_derivative = o.decompose(&p.derivative()).unwrap().initial;
        assert_eq!(init_of_derivative, dec.separant);
    }

    #[test]
    fn parse_and_display() {
        let r = RingContext::main_q(&["y1", "y2", "u00"]);
        for s in ["orderly", "elim:y1<y2<u00", "block:[u00|y1,y2]"] {
            assert_eq!(Ranking::parse(&r, s).unwrap().to_string(), s);
        }
        assert!(Ranking::parse(&r, "elim:y1<y2").is_err());
        assert!(Ranking::parse(&r, "lex").is_err());
        assert!(!Ranking::parse(&r, "block:[u00|y1,y2]")
            .unwrap()
            .is_orderly());
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn separant_is_initial_of_derivative(
            terms in prop::collection::vec((1i64..5, 0u32..3, 0u32..3, 0u32..3), 1..5)
        ) {
            let r = RingContext::main_q(&["y1", "y2"]);
            let p = terms.iter().fold(DiffPoly::zero(&r), |acc, &(c, o1, o2, e)| {
                let m = crate::Monomial::from_factors(vec![
                    (DerVar::new(0, o1), e),
                    (DerVar::new(1, o2), 1),
                ]);
                &acc + &DiffPoly::term(&r, m, crate::Coeff::from_int(c))
            });
            let o = Ranking::orderly(&r);
            if let Ok(dec) = o.decompose(&p) {
                let dp = o.decompose(&p.derivative()).unwrap();
                prop_assert_eq!(dp.leader, dec.leader.diff(1));
                prop_assert_eq!(dp.initial, dec.separant);
            }
        }
    }
}
