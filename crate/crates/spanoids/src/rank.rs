//! Exact rank: the size of a smallest spanning set.
//!
//! Two independent engines compute it. When the minimal open sets are
//! enumerable, rank is the minimum hitting set over them, found by
//! branch-and-bound with a greedy upper bound and packing/LP lower
//! bounds. Otherwise an iterative-deepening search over subsets runs
//! directly on the span operator, pruning prefixes that contain an
//! element already spanned by the rest (minimum spanning sets never do).
//! Both finish by scanning bitmasks of the optimal size in ascending
//! numeric order, so the reported witness is the numerically smallest
//! spanning bitmask and is identical whichever engine ran.

use crate::cover::cover_value_of_opens;
use crate::error::{Error, Result};
use crate::lp::Rat;
use crate::represent::for_each_mask_of_size;
use crate::spanoid::Spanoid;
use crate::subset::Subset;
use num_traits::ToPrimitive;

/// Ground-set ceiling for exact rank search (bitmask engines).
pub const RANK_GROUND_MAX: usize = 64;

/// Default node budget shared by both engines.
pub const RANK_NODE_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RankMethod {
    /// branch-and-bound over minimal open sets
    HittingSet,
    /// iterative-deepening search on the span operator
    DirectSearch,
}

/// An exact rank with a spanning witness of that size.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub rank: usize,
    pub witness: Subset,
    pub method: RankMethod,
}

/// Computes the exact rank, choosing the hitting-set engine when the
/// minimal open sets are enumerable and the direct search otherwise.
pub fn rank(sp: &Spanoid) -> Result<RankCertificate> {
    rank_budgeted(sp, RANK_NODE_BUDGET)
}

pub fn rank_budgeted(sp: &Spanoid, node_budget: u64) -> Result<RankCertificate> {
    match sp.minimal_open_sets() {
        Ok(opens) => rank_hitting_set_impl(sp, opens.masks(), node_budget),
        Err(Error::Capacity { .. }) => rank_direct_budgeted(sp, node_budget),
        Err(e) => Err(e),
    }
}

/// Rank via minimum hitting set of the minimal open sets.
pub fn rank_hitting_set(sp: &Spanoid) -> Result<RankCertificate> {
    let opens = sp.minimal_open_sets()?;
    rank_hitting_set_impl(sp, opens.masks(), RANK_NODE_BUDGET)
}

/// Rank via iterative-deepening search on the span operator.
pub fn rank_direct(sp: &Spanoid) -> Result<RankCertificate> {
    rank_direct_budgeted(sp, RANK_NODE_BUDGET)
}

/// log2 of the number of closed sets, an upper bound for the rank.
pub fn rank_log_bound(sp: &Spanoid) -> Result<f64> {
    let closed = sp.closed_sets()?;
    Ok((closed.len() as f64).log2())
}

fn rank_hitting_set_impl(
    sp: &Spanoid,
    opens: &[u64],
    node_budget: u64,
) -> Result<RankCertificate> {
    let n = sp.ground_size();
    check_ground(n)?;
    let (size, bound_mask) = hitting_set_minimum(n, opens, node_budget)?;
    let witness = canonical_witness(sp, size, bound_mask);
    Ok(RankCertificate {
        rank: size,
        witness,
        method: RankMethod::HittingSet,
    })
}

fn check_ground(n: usize) -> Result<()> {
    if n > RANK_GROUND_MAX {
        return Err(Error::RangeViolation {
            what: "rank search ground set",
            value: n,
            min: 0,
            max: RANK_GROUND_MAX,
        });
    }
    Ok(())
}

/// Minimum hitting set over bitmask sets: exact size plus one optimal
/// mask (not necessarily the canonical one). Shared with the product
/// constructions, which know their minimal opens directly.
pub(crate) fn hitting_set_minimum(
    n: usize,
    opens: &[u64],
    node_budget: u64,
) -> Result<(usize, u64)> {
    debug_assert!(opens.iter().all(|&m| m != 0));
    if opens.is_empty() {
        return Ok((0, 0));
    }
    let (greedy_size, greedy_mask) = greedy_hitting(n, opens);
    let lp_floor = lp_lower_bound(n, opens);
    if greedy_size <= lp_floor {
        debug_assert_eq!(greedy_size, lp_floor);
        return Ok((greedy_size, greedy_mask));
    }
    let mut search = HittingSearch {
        best_size: greedy_size,
        best_mask: greedy_mask,
        strongest_floor: lp_floor.max(packing_lower_bound(opens)),
        nodes: 0,
        budget: node_budget,
    };
    match search.dfs(0, 0, opens) {
        Ok(()) => Ok((search.best_size, search.best_mask)),
        Err(()) => Err(Error::Budget {
            what: "hitting-set search",
            budget: node_budget,
            lower: search.strongest_floor,
            upper: search.best_size,
        }),
    }
}

fn greedy_hitting(n: usize, opens: &[u64]) -> (usize, u64) {
    let mut remaining: Vec<u64> = opens.to_vec();
    let mut chosen = 0u64;
    let mut count = 0usize;
    while !remaining.is_empty() {
        let best = (0..n as u32)
            .max_by_key(|&e| {
                let hits = remaining.iter().filter(|&&m| m >> e & 1 == 1).count();
                // ties broken toward the smallest element
                (hits, std::cmp::Reverse(e))
            })
            .expect("nonempty ground set");
        chosen |= 1 << best;
        count += 1;
        remaining.retain(|&m| m >> best & 1 == 0);
    }
    (count, chosen)
}

/// Greedy disjoint subfamily: pairwise disjoint opens each need their own
/// element, so the count is a lower bound.
fn packing_lower_bound(opens: &[u64]) -> usize {
    let mut taken = 0u64;
    let mut count = 0usize;
    let mut order: Vec<u64> = opens.to_vec();
    order.sort_by_key(|m| m.count_ones());
    for &m in &order {
        if m & taken == 0 {
            taken |= m;
            count += 1;
        }
    }
    count
}

fn lp_lower_bound(n: usize, opens: &[u64]) -> usize {
    let value = cover_value_of_opens(n, opens);
    rat_ceil(&value)
}

/// ceil(p/q) for a nonnegative rational, as usize.
pub(crate) fn rat_ceil(value: &Rat) -> usize {
    use num_bigint::BigInt;
    use num_traits::One;
    let ceiled = (value.numer() + value.denom() - BigInt::one()) / value.denom();
    ceiled.to_usize().expect("value fits usize")
}

struct HittingSearch {
    best_size: usize,
    best_mask: u64,
    strongest_floor: usize,
    nodes: u64,
    budget: u64,
}

impl HittingSearch {
    /// Returns Err(()) when the node budget runs out.
    fn dfs(
        &mut self,
        chosen: u64,
        count: usize,
        remaining: &[u64],
    ) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if remaining.is_empty() {
            if count < self.best_size {
                self.best_size = count;
                self.best_mask = chosen;
            }
            return Ok(());
        }
        if count + packing_lower_bound(remaining) >= self.best_size {
            return Ok(());
        }
        // Branch on each element of a smallest uncovered open: one of
        // them is in every hitting set extending this node.
        let target = *remaining
            .iter()
            .min_by_key(|m| m.count_ones())
            .expect("nonempty");
        let mut elems: Vec<u32> = (0..64).filter(|&e| target >> e & 1 == 1).collect();
        elems.sort_unstable();
        for e in elems {
            let next: Vec<u64> = remaining
                .iter()
                .copied()
                .filter(|m| m >> e & 1 == 0)
                .collect();
            self.dfs(chosen | 1 << e, count + 1, &next)?;
        }
        Ok(())
    }
}

fn rank_direct_budgeted(sp: &Spanoid, node_budget: u64) -> Result<RankCertificate> {
    let n = sp.ground_size();
    check_ground(n)?;
    let compiled = sp.compiled_rules();
    let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let base_span = Spanoid::span_mask(&compiled, 0);
    if base_span == full {
        return Ok(RankCertificate {
            rank: 0,
            witness: Subset::empty(n),
            method: RankMethod::DirectSearch,
        });
    }
    // Elements no rule can introduce must sit in every spanning set.
    let mut concluded = 0u64;
    for r in sp.rules() {
        if !r.is_vacuous() {
            concluded |= 1 << r.conclusion();
        }
    }
    let forced = (!concluded & full).count_ones() as usize;
    let mut nodes = 0u64;
    for depth in forced.max(1)..=n {
        let mut found: Option<u64> = None;
        let exhausted = deepening_dfs(
            &compiled,
            n,
            full,
            0,
            0,
            base_span,
            depth,
            &mut nodes,
            node_budget,
            &mut found,
        );
        if let Some(mask) = found {
            let witness = canonical_witness(sp, depth, mask);
            return Ok(RankCertificate {
                rank: depth,
                witness,
                method: RankMethod::DirectSearch,
            });
        }
        if exhausted.is_err() {
            return Err(Error::Budget {
                what: "direct rank search",
                budget: node_budget,
                lower: depth,
                upper: n,
            });
        }
    }
    unreachable!("the full ground set always spans itself")
}

/// Depth-limited extension of an independent prefix; fills `found` with
/// the first spanning completion. Err(()) when the budget runs out.
#[allow(clippy::too_many_arguments)]
fn deepening_dfs(
    compiled: &[(u64, u32)],
    n: usize,
    full: u64,
    first: u32,
    mask: u64,
    span: u64,
    depth_left: usize,
    nodes: &mut u64,
    budget: u64,
    found: &mut Option<u64>,
) -> std::result::Result<(), ()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(());
    }
    if depth_left == 0 {
        if span == full {
            *found = Some(mask);
        }
        return Ok(());
    }
    let last = n as u32 - depth_left as u32;
    for e in first..=last {
        // Skip elements the prefix already derives: no minimum spanning
        // set contains one.
        if span >> e & 1 == 1 {
            continue;
        }
        let next_span = Spanoid::span_mask(compiled, span | 1 << e);
        deepening_dfs(
            compiled,
            n,
            full,
            e + 1,
            mask | 1 << e,
            next_span,
            depth_left - 1,
            nodes,
            budget,
            found,
        )?;
        if found.is_some() {
            return Ok(());
        }
    }
    Ok(())
}

/// The numerically smallest spanning bitmask of the given size. `bound`
/// is a known spanning mask of that size, so the scan always terminates
/// at or before it.
fn canonical_witness(sp: &Spanoid, size: usize, bound: u64) -> Subset {
    let n = sp.ground_size();
    if size == 0 {
        return Subset::empty(n);
    }
    let compiled = sp.compiled_rules();
    let full = if n == 64 { !0u64 } else { (1u64 << n) - 1 };
    let mut winner: Option<u64> = None;
    for_each_mask_of_size(n, size, |mask| {
        if mask > bound {
            return false;
        }
        if Spanoid::span_mask(&compiled, mask) == full {
            winner = Some(mask);
            return false;
        }
        true
    });
    let mask = winner.expect("bound itself spans");
    debug_assert_eq!(Spanoid::span_mask(&compiled, mask), full);
    Subset::from_mask(n, mask)
}

/// Exact check of the logarithmic closed-set bound: 2^rank ≤ |closed|.
/// Returns the pair (rank, closed count) it verified.
pub fn verify_log_bound(sp: &Spanoid) -> Result<(usize, usize)> {
    let r = rank(sp)?.rank;
    let count = sp.closed_sets()?.len();
    assert!(
        (1u128 << r) <= count as u128,
        "closed family smaller than 2^rank"
    );
    Ok((r, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::lp_cover;
    use crate::spanoid::tests::pentagon;
    use crate::spanoid::Rule;

    fn brute_force_rank(sp: &Spanoid) -> (usize, u64) {
        let n = sp.ground_size();
        let compiled = sp.compiled_rules();
        let full = (1u64 << n) - 1;
        for size in 0..=n {
            let mut hit = None;
            for_each_mask_of_size(n, size, |mask| {
                if Spanoid::span_mask(&compiled, mask) == full {
                    hit = Some(mask);
                    return false;
                }
                true
            });
            if let Some(mask) = hit {
                return (size, mask);
            }
        }
        unreachable!()
    }

    #[test]
    fn pentagon_rank_three_with_canonical_witness() {
        let cert = rank(&pentagon()).unwrap();
        assert_eq!(cert.rank, 3);
        let (oracle_rank, oracle_mask) = brute_force_rank(&pentagon());
        assert_eq!(oracle_rank, 3);
        assert_eq!(cert.witness.to_mask(), oracle_mask);
    }

    #[test]
    fn rule_free_rank_is_ground_size() {
        let cert = rank(&Spanoid::rule_free(4)).unwrap();
        assert_eq!(cert.rank, 4);
        assert_eq!(cert.witness.to_mask(), 0b1111);
    }

    #[test]
    fn xu_rank_is_two() {
        let sp = crate::cover::tests::xu_spanoid();
        let cert = rank(&sp).unwrap();
        assert_eq!(cert.rank, 2);
    }

    #[test]
    fn engines_agree_with_brute_force_on_random_spanoids() {
        let mut state = 0x6a09e667f3bcc908u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..80 {
            let n = 2 + (next() % 8) as usize; // 2..=9
            let num_rules = (next() % 7) as usize;
            let rules: Vec<Rule> = (0..num_rules)
                .map(|_| {
                    let conclusion = (next() % n as u64) as u32;
                    let premise: Vec<u32> = (0..n as u32)
                        .filter(|&i| i != conclusion && next() % 3 == 0)
                        .collect();
                    Rule::new(premise, conclusion)
                })
                .collect();
            let sp = Spanoid::new(n, rules).unwrap();
            let (oracle_rank, _) = brute_force_rank(&sp);
            let a = rank_hitting_set(&sp).unwrap();
            let b = rank_direct(&sp).unwrap();
            assert_eq!(a.rank, oracle_rank);
            assert_eq!(b.rank, oracle_rank);
            // identical canonical witnesses from both engines
            assert_eq!(a.witness.to_mask(), b.witness.to_mask());
            let full = sp.span_of(&[]).unwrap().complement().to_mask() == 0;
            assert!(a.rank > 0 || full);
        }
    }

    #[test]
    fn rank_never_increases_when_rules_are_added() {
        let mut state = 0xbb67ae8584caa73bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let n = 3 + (next() % 5) as usize; // 3..=7
            let mut sp = Spanoid::rule_free(n);
            let mut prev = rank(&sp).unwrap().rank;
            for _ in 0..4 {
                let conclusion = (next() % n as u64) as u32;
                let premise: Vec<u32> = (0..n as u32)
                    .filter(|&i| i != conclusion && next() % 2 == 0)
                    .collect();
                sp = sp.with_rules(vec![Rule::new(premise, conclusion)]).unwrap();
                let r = rank(&sp).unwrap().rank;
                assert!(r <= prev, "adding a rule increased rank");
                prev = r;
            }
        }
    }

    #[test]
    fn log_bound_dominates_rank() {
        for sp in [
            pentagon(),
            Spanoid::rule_free(3),
            crate::cover::tests::xu_spanoid(),
        ] {
            let (r, count) = verify_log_bound(&sp).unwrap();
            let bound = rank_log_bound(&sp).unwrap();
            assert!((r as f64) <= bound + 1e-12);
            assert!(1usize << r <= count);
        }
        assert_eq!(rank_log_bound(&Spanoid::rule_free(3)).unwrap(), 3.0);
    }

    #[test]
    fn cover_lower_bounds_rank() {
        for sp in [pentagon(), crate::cover::tests::xu_spanoid()] {
            let cover = lp_cover(&sp).unwrap();
            let r = rank(&sp).unwrap().rank;
            assert!(cover <= crate::lp::rat_int(r as i64));
        }
    }

    #[test]
    fn everything_derivable_has_rank_zero() {
        let rules = (0..4).map(|i| Rule::new(vec![], i)).collect();
        let sp = Spanoid::new(4, rules).unwrap();
        let cert = rank(&sp).unwrap();
        assert_eq!(cert.rank, 0);
        assert!(cert.witness.is_empty());
    }

    #[test]
    fn budget_exhaustion_carries_bounds() {
        // Two disjoint pentagons: the cover LP gives 5, the true rank is
        // 6, so the integrality gap forces an actual search.
        let mut rules = Vec::new();
        for block in [0u32, 5] {
            for i in 0..5u32 {
                rules.push(Rule::new(
                    vec![block + i, block + (i + 1) % 5],
                    block + (i + 3) % 5,
                ));
            }
        }
        let sp = Spanoid::new(10, rules).unwrap();
        match rank_budgeted(&sp, 1) {
            Err(Error::Budget { lower, upper, .. }) => {
                assert!(lower >= 5);
                assert!(upper >= lower);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert_eq!(rank(&sp).unwrap().rank, 6);
    }

    #[test]
    fn canonical_witness_is_smallest_spanning_mask() {
        // Rules make {3,4} spanning; among 2-subsets the smallest
        // spanning bitmask must still be found by the scan.
        let rules = vec![
            Rule::new(vec![3, 4], 0),
            Rule::new(vec![3, 4], 1),
            Rule::new(vec![3, 4], 2),
            Rule::new(vec![0, 1], 2),
            Rule::new(vec![0, 1], 3),
            Rule::new(vec![0, 1], 4),
        ];
        let sp = Spanoid::new(5, rules).unwrap();
        let cert = rank(&sp).unwrap();
        assert_eq!(cert.rank, 2);
        // {0,1} = 0b00011 spans and is numerically below {3,4} = 0b11000.
        assert_eq!(cert.witness.to_mask(), 0b00011);
    }
}
