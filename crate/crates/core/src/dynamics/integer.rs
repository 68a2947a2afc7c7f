//! Exact enumeration of integer points in an orbit on a κ level set.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::kappa_exact;
use crate::error::{Error, Result};
use crate::model::SurfaceModel;
use crate::moves::{apply_move_exact, MoveKind};

use super::walk::{move_stream, OrbitConfig};

pub type IntTriple = [BigInt; 3];

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Traversal {
    BreadthFirst,
    DepthFirst,
}

/// Sign of `xyz`: the class preserved by double sign changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

/// Sorted absolute values together with the sign class of the product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalTriple {
    pub abs_sorted: IntTriple,
    pub sign: SignClass,
}

pub fn canonical_form(p: &IntTriple) -> CanonicalTriple {
    let mut abs = [p[0].abs(), p[1].abs(), p[2].abs()];
    abs.sort();
    let prod = &p[0] * &p[1] * &p[2];
    let sign = if prod.is_zero() {
        SignClass::Zero
    } else if prod.is_positive() {
        SignClass::Positive
    } else {
        SignClass::Negative
    };
    CanonicalTriple { abs_sorted: abs, sign }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegerCensus {
    pub start: IntTriple,
    pub bound: BigInt,
    pub kappa: BigInt,
    pub raw: BTreeSet<IntTriple>,
    pub canonical: BTreeSet<CanonicalTriple>,
}

fn within(p: &IntTriple, bound: &BigInt) -> bool {
    p.iter().all(|v| v.abs() <= *bound)
}

/// Closure of `start` under all one-holed torus moves, keeping only triples
/// with every `|coordinate| ≤ bound`.
pub fn integer_orbit(
    start: &IntTriple,
    bound: &BigInt,
    traversal: Traversal,
    state_limit: usize,
) -> Result<IntegerCensus> {
    if !within(start, bound) {
        return Err(Error::InvalidConfig(format!("start exceeds bound {bound}")));
    }
    let mut seen: BTreeSet<IntTriple> = BTreeSet::new();
    let mut frontier: VecDeque<IntTriple> = VecDeque::new();
    seen.insert(start.clone());
    frontier.push_back(start.clone());
    let next = |f: &mut VecDeque<IntTriple>| match traversal {
        Traversal::BreadthFirst => f.pop_front(),
        Traversal::DepthFirst => f.pop_back(),
    };
    while let Some(p) = next(&mut frontier) {
        for kind in MoveKind::ALL {
            let q = apply_move_exact(kind, &p);
            if within(&q, bound) && !seen.contains(&q) {
                if seen.len() >= state_limit {
                    return Err(Error::BoundOverflow { limit: state_limit });
                }
                seen.insert(q.clone());
                frontier.push_back(q);
            }
        }
    }
    let canonical = seen.iter().map(canonical_form).collect();
    Ok(IntegerCensus {
        start: start.clone(),
        bound: bound.clone(),
        kappa: kappa_exact(start),
        raw: seen,
        canonical,
    })
}

pub fn integer_orbit_bfs(start: &IntTriple, bound: &BigInt) -> Result<IntegerCensus> {
    integer_orbit(start, bound, Traversal::BreadthFirst, DEFAULT_STATE_LIMIT)
}

pub fn int_triple(x: i64, y: i64, z: i64) -> IntTriple {
    [BigInt::from(x), BigInt::from(y), BigInt::from(z)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegerWalkReport {
    pub steps: u64,
    pub recorded: u64,
    /// Recorded samples equal to the start.
    pub returns: u64,
    pub escaped_steps: u64,
    pub max_bits: u64,
}

/// Replays the move sequence of a one-holed torus walk in exact integer
/// arithmetic, escaping only once a coordinate exceeds `escape_bound` in
/// absolute value.
pub fn integer_walk(start: &IntTriple, cfg: &OrbitConfig, escape_bound: &BigInt) -> Result<IntegerWalkReport> {
    cfg.validate()?;
    let too_big = |p: &IntTriple| !within(p, escape_bound);
    let mut stack: Vec<(MoveKind, IntTriple, bool)> = Vec::new();
    let mut cur = start.clone();
    let mut out = too_big(&cur);
    let (mut recorded, mut returns, mut escaped, mut max_bits) = (0u64, 0u64, 0u64, 0u64);
    for (i, kind) in move_stream(cfg, SurfaceModel::OneHoledTorus).enumerate() {
        let step = i as u64 + 1;
        if cfg.exact_backtrack && stack.last().is_some_and(|(k, _, _)| *k == kind.inverse()) {
            if let Some((_, p, o)) = stack.pop() {
                cur = p;
                out = o;
            }
        } else {
            let next = if out { cur.clone() } else { apply_move_exact(kind, &cur) };
            if cfg.exact_backtrack {
                stack.push((kind, std::mem::replace(&mut cur, next), out));
            } else {
                cur = next;
            }
            out = out || too_big(&cur);
        }
        if out {
            escaped += 1;
        } else {
            max_bits = max_bits.max(cur.iter().map(|v| v.bits()).max().unwrap_or(0));
        }
        if step.is_multiple_of(cfg.record_every) {
            recorded += 1;
            if !out && cur == *start {
                returns += 1;
            }
        }
    }
    Ok(IntegerWalkReport {
        steps: cfg.steps,
        recorded,
        returns,
        escaped_steps: escaped,
        max_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_fixed() {
        let c = integer_orbit_bfs(&int_triple(0, 0, 0), &BigInt::from(10)).unwrap();
        assert_eq!(c.raw.len(), 1);
    }

    #[test]
    fn markov_census_representatives() {
        let c = integer_orbit_bfs(&int_triple(3, 3, 3), &BigInt::from(100)).unwrap();
        let reps: Vec<_> = c.canonical.iter().map(|t| t.abs_sorted.clone()).collect();
        let want = vec![
            int_triple(3, 3, 3),
            int_triple(3, 3, 6),
            int_triple(3, 6, 15),
            int_triple(3, 15, 39),
            int_triple(6, 15, 87),
        ];
        assert_eq!(reps, want);
        assert!(c.canonical.iter().all(|t| t.sign == SignClass::Positive));
        assert_eq!(c.raw.len(), 88);
        assert!(c.raw.iter().all(|p| kappa_exact(p) == BigInt::from(-2)));
    }

    #[test]
    fn traversal_order_is_irrelevant() {
        for start in [int_triple(3, 3, 3), int_triple(1, 2, 3), int_triple(4, 0, 1)] {
            let b = BigInt::from(60);
            let bfs = integer_orbit(&start, &b, Traversal::BreadthFirst, DEFAULT_STATE_LIMIT).unwrap();
            let dfs = integer_orbit(&start, &b, Traversal::DepthFirst, DEFAULT_STATE_LIMIT).unwrap();
            assert_eq!(bfs.raw, dfs.raw);
        }
    }

    #[test]
    fn integer_replay_matches_float_walk() {
        use crate::dynamics::walk::random_walk_orbit;
        use crate::model::TracePoint;
        let cfg = OrbitConfig::new(8, 20_000);
        let float = random_walk_orbit(&TracePoint::oneholed_real(3.0, 3.0, 3.0), &cfg).unwrap();
        let exact = integer_walk(&int_triple(3, 3, 3), &cfg, &BigInt::from(1_000_000)).unwrap();
        assert_eq!(float.recurrence_hits, exact.returns);
        assert_eq!(float.escaped_steps, exact.escaped_steps);
        let wide = integer_walk(&int_triple(3, 3, 3), &cfg, &(BigInt::from(1) << 2000)).unwrap();
        assert_eq!(wide.returns, exact.returns);
        assert!(wide.max_bits > 1000);
    }

    #[test]
    fn limits() {
        assert!(integer_orbit_bfs(&int_triple(300, 3, 3), &BigInt::from(100)).is_err());
        assert_eq!(
            integer_orbit(&int_triple(3, 3, 3), &BigInt::from(100), Traversal::BreadthFirst, 10).unwrap_err(),
            Error::BoundOverflow { limit: 10 }
        );
    }
}
