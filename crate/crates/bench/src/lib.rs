//! Shared inputs for the benchmarks.

use delta_chow::{charset, DiffChain, DiffPoly, Ranking, RingContext};

/// Orderly characteristic set of the given polynomials over `Q`.
pub fn chain(names: &[&str], polys: &[&str]) -> DiffChain {
    let r = RingContext::main_q(names);
    let ps: Vec<DiffPoly> = polys
        .iter()
        .map(|s| DiffPoly::parse(&r, s).unwrap())
        .collect();
    charset(&ps, &Ranking::orderly(&r)).unwrap()
}
