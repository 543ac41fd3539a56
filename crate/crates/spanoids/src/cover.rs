//! Fractional covering bounds over the minimal open sets.
//!
//! The smallest spanning set of a spanoid is exactly the smallest hitting
//! set of its nonempty minimal open sets, so the natural LP relaxation
//! assigns a weight to every element and asks each minimal open set to
//! collect total weight at least one. Its dual puts a multiplier on every
//! minimal open set, charging each element at most one. Both sides are
//! solved independently here and checked equal, giving a certified exact
//! value that lower-bounds the rank.

use crate::error::Result;
use crate::lp::{solve_exact, Constraint, LinearProgram, Rat, Rel, Sense};
use crate::spanoid::Spanoid;
use num_traits::One;

/// Optimal dual of the covering LP: one multiplier per minimal open set,
/// keyed by the set's bitmask, in ascending mask order.
#[derive(Clone, Debug)]
pub struct CoverDual {
    pub optimum: Rat,
    pub multipliers: Vec<(u64, Rat)>,
}

/// Exact optimum of the fractional hitting LP over the nonempty minimal
/// open sets. Lower-bounds the rank.
pub fn lp_cover(sp: &Spanoid) -> Result<Rat> {
    let opens = sp.minimal_open_sets()?;
    Ok(cover_value_of_opens(sp.ground_size(), opens.masks()))
}

/// The same optimum reached from the dual side, with the optimal
/// multipliers. Strong duality against [`lp_cover`] is asserted.
pub fn lp_cover_dual(sp: &Spanoid) -> Result<CoverDual> {
    let opens = sp.minimal_open_sets()?;
    let n = sp.ground_size();
    let lp = dual_lp_of_opens(n, opens.masks());
    let sol = solve_exact(&lp).expect("packing LP is feasible and bounded");
    let primal_value = lp_cover(sp)?;
    assert_eq!(sol.value, primal_value, "cover LP strong duality");
    let multipliers = opens
        .masks()
        .iter()
        .copied()
        .zip(sol.primal.iter().cloned())
        .collect();
    Ok(CoverDual {
        optimum: sol.value,
        multipliers,
    })
}

/// Covering optimum for an explicitly given family of open-set masks.
/// Shared with the product constructions, which know their minimal opens
/// without enumerating closed sets.
pub(crate) fn cover_value_of_opens(n: usize, opens: &[u64]) -> Rat {
    let lp = primal_lp_of_opens(n, opens);
    let sol = solve_exact(&lp).expect("covering LP is feasible and bounded");
    sol.value
}

fn primal_lp_of_opens(n: usize, opens: &[u64]) -> LinearProgram {
    let mut lp = LinearProgram::new(Sense::Minimize, n);
    lp.objective = (0..n).map(|i| (i, Rat::one())).collect();
    for &mask in opens {
        debug_assert!(mask != 0, "minimal opens are nonempty");
        let coeffs = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| (i, Rat::one()))
            .collect();
        lp.constraints
            .push(Constraint::new(coeffs, Rel::Ge, Rat::one()));
    }
    lp
}

fn dual_lp_of_opens(n: usize, opens: &[u64]) -> LinearProgram {
    let mut lp = LinearProgram::new(Sense::Maximize, opens.len());
    lp.objective = (0..opens.len()).map(|s| (s, Rat::one())).collect();
    for i in 0..n {
        let coeffs: Vec<(usize, Rat)> = opens
            .iter()
            .enumerate()
            .filter(|(_, &mask)| mask >> i & 1 == 1)
            .map(|(s, _)| (s, Rat::one()))
            .collect();
        if !coeffs.is_empty() {
            lp.constraints
                .push(Constraint::new(coeffs, Rel::Le, Rat::one()));
        }
    }
    lp
}
