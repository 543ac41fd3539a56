//! Entropy-style LP relaxation of the rank.
//!
//! One variable f(S) per nonempty subset, with f of the empty set pinned
//! at zero. The feasible region is cut out by the stored-rule equalities
//! f(S ∪ {i}) = f(S), unit caps on singletons, and a monotone-submodular
//! family that comes in two equivalent flavors: `Full` ranges over all
//! pairs (monotonicity f(A) ≤ f(B) for A ⊆ B and submodularity
//! f(A∪B) + f(A∩B) ≤ f(A) + f(B)), while `Elemental` keeps only the
//! generating rows f(A∪{i}) + f(A∪{j}) ≥ f(A∪{i,j}) + f(A) plus
//! f([n]) ≥ f([n] \ {i}), which imply the rest. Row generation keeps the
//! working tableau small: solve, scan the whole family for violated rows
//! in a fixed order, add a batch, repeat. The final scan that finds
//! nothing is an exact feasibility certificate for the returned profile.
//!
//! Instantiating the rule equalities only at the stored premises is
//! enough: if a stored rule derives i from P, then for any S ⊇ P not
//! containing i, submodularity on (S, P ∪ {i}) gives
//! f(S ∪ {i}) ≤ f(S) + f(P ∪ {i}) - f(P) = f(S), and monotonicity gives
//! the reverse, so the equality lifts to every derivation step.

use crate::error::{Error, Result};
use crate::lp::{solve_exact, Constraint, LinearProgram, Rat, Rel, Sense};
use crate::spanoid::Spanoid;
use crate::subset::Subset;
use num_traits::{One, Zero};

/// Ground-set caps per mode; the variable count is 2^n - 1 either way.
pub const ENTROPY_FULL_MAX: usize = 12;
pub const ENTROPY_ELEMENTAL_MAX: usize = 16;

/// How many violated rows one separation pass may add.
const BATCH_CAP: usize = 512;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EntropyMode {
    /// all monotonicity and submodularity pairs
    Full,
    /// the generating subfamily only
    Elemental,
}

/// A feasible assignment S -> f(S), dense over all 2^n subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyProfile {
    n: usize,
    values: Vec<Rat>,
}

impl EntropyProfile {
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: &Subset) -> &Rat {
        assert_eq!(s.ground_size(), self.n);
        &self.values[s.to_mask() as usize]
    }

    /// All (subset mask, value) pairs in ascending mask order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &Rat)> + '_ {
        self.values.iter().enumerate().map(|(m, v)| (m as u64, v))
    }
}

/// Exact maximum of f([n]) over the feasible region, with an optimal
/// profile. Both modes define the same region, hence the same optimum.
pub fn lp_entropy(sp: &Spanoid, mode: EntropyMode) -> Result<(Rat, EntropyProfile)> {
    let n = sp.ground_size();
    let cap = match mode {
        EntropyMode::Full => ENTROPY_FULL_MAX,
        EntropyMode::Elemental => ENTROPY_ELEMENTAL_MAX,
    };
    if n > cap {
        return Err(Error::Capacity {
            what: "entropy LP",
            n,
            cap,
            max: cap,
        });
    }
    if n == 0 {
        return Ok((
            Rat::zero(),
            EntropyProfile {
                n,
                values: vec![Rat::zero()],
            },
        ));
    }
    let num_vars = (1usize << n) - 1;
    let full = num_vars as u64;
    let mut lp = LinearProgram::new(Sense::Maximize, num_vars);
    lp.objective = vec![(var(full), Rat::one())];
    lp.constraints = seed_rows(sp, n);
    let mut rounds = 0u32;
    loop {
        rounds += 1;
        assert!(rounds < 10_000, "row generation failed to converge");
        let sol = solve_exact(&lp).expect("entropy LP is feasible and bounded");
        let violated = separate(mode, n, &sol.primal);
        if violated.is_empty() {
            let mut values = Vec::with_capacity(num_vars + 1);
            values.push(Rat::zero());
            values.extend(sol.primal.iter().cloned());
            return Ok((sol.value, EntropyProfile { n, values }));
        }
        lp.constraints.extend(violated);
    }
}

fn var(mask: u64) -> usize {
    debug_assert!(mask != 0);
    (mask - 1) as usize
}

/// A row `sum of terms <= rhs`, dropping the eliminated empty set.
fn le_row(terms: &[(u64, i64)], rhs: i64) -> Constraint {
    let coeffs = terms
        .iter()
        .filter(|(mask, c)| *mask != 0 && *c != 0)
        .map(|(mask, c)| (var(*mask), Rat::from_integer((*c).into())))
        .collect();
    Constraint::new(coeffs, Rel::Le, Rat::from_integer(rhs.into()))
}

/// Always-valid starting rows: rule equalities (as opposed pairs, keeping
/// the all-slack basis feasible), singleton caps, top monotonicity, and a
/// prefix chain of subadditivity rows that bounds f([n]) from the start.
fn seed_rows(sp: &Spanoid, n: usize) -> Vec<Constraint> {
    let mut rows = Vec::new();
    for rule in sp.rules() {
        if rule.is_vacuous() {
            continue;
        }
        let premise = Subset::from_elems(n, rule.premise()).to_mask();
        let target = premise | 1 << rule.conclusion();
        rows.push(le_row(&[(target, 1), (premise, -1)], 0));
        rows.push(le_row(&[(premise, 1), (target, -1)], 0));
    }
    for i in 0..n {
        rows.push(le_row(&[(1 << i, 1)], 1));
    }
    let full = ((1u128 << n) - 1) as u64;
    for i in 0..n {
        rows.push(le_row(&[(full & !(1 << i), 1), (full, -1)], 0));
    }
    for k in 1..n {
        let prefix = (1u64 << (k + 1)) - 1;
        rows.push(le_row(&[(prefix, 1), (prefix >> 1, -1), (1 << k, -1)], 0));
    }
    rows
}

/// First violated family rows in a fixed scan order, at most BATCH_CAP of
/// them. An empty result is an exact certificate that the assignment
/// satisfies the whole family of the given mode.
fn separate(mode: EntropyMode, n: usize, primal: &[Rat]) -> Vec<Constraint> {
    let zero = Rat::zero();
    let val = |mask: u64| -> &Rat {
        if mask == 0 {
            &zero
        } else {
            &primal[var(mask)]
        }
    };
    let full = ((1u128 << n) - 1) as u64;
    let mut out = Vec::new();
    match mode {
        EntropyMode::Elemental => {
            'scan: for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    let ij = 1u64 << i | 1 << j;
                    let rest = full & !ij;
                    // subsets of `rest` in ascending numeric order
                    let mut a = 0u64;
                    loop {
                        if val(a | ij) + val(a) > val(a | 1 << i) + val(a | 1 << j) {
                            out.push(le_row(
                                &[(a | ij, 1), (a, 1), (a | 1 << i, -1), (a | 1 << j, -1)],
                                0,
                            ));
                            if out.len() >= BATCH_CAP {
                                break 'scan;
                            }
                        }
                        if a == rest {
                            break;
                        }
                        a = (a.wrapping_sub(rest)) & rest;
                    }
                }
            }
            if out.len() < BATCH_CAP {
                for i in 0..n as u32 {
                    let without = full & !(1 << i);
                    if val(without) > val(full) {
                        out.push(le_row(&[(without, 1), (full, -1)], 0));
                    }
                }
            }
        }
        EntropyMode::Full => {
            // monotonicity: f(A) <= f(B) for A a proper subset of B
            'mono: for b in 1..=full {
                let mut a = b & b.wrapping_sub(1);
                loop {
                    if val(a) > val(b) {
                        out.push(le_row(&[(a, 1), (b, -1)], 0));
                        if out.len() >= BATCH_CAP {
                            break 'mono;
                        }
                    }
                    if a == 0 {
                        break;
                    }
                    a = a.wrapping_sub(1) & b;
                }
            }
            // submodularity over unordered incomparable pairs
            if out.len() < BATCH_CAP {
                'sub: for a in 1..=full {
                    for b in a + 1..=full {
                        if a & b == a || a & b == b {
                            continue;
                        }
                        if val(a | b) + val(a & b) > val(a) + val(b) {
                            out.push(le_row(&[(a | b, 1), (a & b, 1), (a, -1), (b, -1)], 0));
                            if out.len() >= BATCH_CAP {
                                break 'sub;
                            }
                        }
                    }
                }
            }
        }
    }
    // singleton caps, common to both modes
    if out.len() < BATCH_CAP {
        for i in 0..n {
            if *val(1 << i) > Rat::one() {
                out.push(le_row(&[(1 << i, 1)], 1));
            }
        }
    }
    out
}
