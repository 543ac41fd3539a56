//! Set-system representations of spanoids.
//!
//! A representation assigns each ground element i a subset S_i of some
//! universe. In the intersection flavor, A derives i exactly when the
//! intersection of the sets indexed by A is contained in S_i; in the union
//! flavor, exactly when S_i is covered by the union of the sets indexed by
//! A. Complementing every set swaps the two flavors without changing the
//! induced derivation relation.

use crate::error::{Error, Result};
use crate::spanoid::{Rule, Spanoid};
use crate::subset::Subset;
use crate::transversal::minimal_transversals;

pub const REPRESENT_SEARCH_MAX: usize = 22;
const COVER_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flavor {
    Intersection,
    Union,
}

/// One set per represented element, over a shared universe.
#[derive(Clone, Debug)]
pub struct SetRepresentation {
    universe: usize,
    sets: Vec<Subset>,
    flavor: Flavor,
}

impl SetRepresentation {
    pub fn new(universe: usize, sets: Vec<Subset>, flavor: Flavor) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptyInput("set representation"));
        }
        for s in &sets {
            if s.ground_size() != universe {
                return Err(Error::GroundSetMismatch {
                    left: universe,
                    right: s.ground_size(),
                });
            }
        }
        Ok(SetRepresentation {
            universe,
            sets,
            flavor,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Does the index set A derive element i under this flavor?
    pub fn models(&self, a: &[u32], i: u32) -> bool {
        let i = i as usize;
        assert!(i < self.sets.len(), "element {i} out of range");
        match self.flavor {
            Flavor::Intersection => {
                let mut meet = Subset::full(self.universe);
                for &j in a {
                    meet.intersect_with(&self.sets[j as usize]);
                }
                meet.is_subset_of(&self.sets[i])
            }
            Flavor::Union => {
                let mut join = Subset::empty(self.universe);
                for &j in a {
                    join.union_with(&self.sets[j as usize]);
                }
                self.sets[i].is_subset_of(&join)
            }
        }
    }

    /// Complements every set, swapping the flavor; the derivation relation
    /// is unchanged.
    pub fn complement(&self) -> SetRepresentation {
        SetRepresentation {
            universe: self.universe,
            sets: self.sets.iter().map(|s| s.complement()).collect(),
            flavor: match self.flavor {
                Flavor::Intersection => Flavor::Union,
                Flavor::Union => Flavor::Intersection,
            },
        }
    }

    /// Smallest number of sets whose intersection (union, for the union
    /// flavor) already equals the intersection (union) of the whole list.
    pub fn intersection_dimension(&self) -> Result<usize> {
        let n = self.sets.len();
        if n > REPRESENT_SEARCH_MAX {
            return Err(Error::Capacity {
                what: "representation dimension search",
                n,
                cap: REPRESENT_SEARCH_MAX,
                max: REPRESENT_SEARCH_MAX,
            });
        }
        let target = match self.flavor {
            Flavor::Intersection => {
                let mut t = Subset::full(self.universe);
                for s in &self.sets {
                    t.intersect_with(s);
                }
                t
            }
            Flavor::Union => {
                let mut t = Subset::empty(self.universe);
                for s in &self.sets {
                    t.union_with(s);
                }
                t
            }
        };
        let combined = |mask: u64| -> Subset {
            let mut acc = match self.flavor {
                Flavor::Intersection => Subset::full(self.universe),
                Flavor::Union => Subset::empty(self.universe),
            };
            let mut m = mask;
            while m != 0 {
                let j = m.trailing_zeros() as usize;
                m &= m - 1;
                match self.flavor {
                    Flavor::Intersection => acc.intersect_with(&self.sets[j]),
                    Flavor::Union => acc.union_with(&self.sets[j]),
                }
            }
            acc
        };
        for k in 0..=n {
            let mut found = false;
            for_each_mask_of_size(n, k, |mask| {
                if combined(mask) == target {
                    found = true;
                    return false;
                }
                true
            });
            if found {
                return Ok(k);
            }
        }
        unreachable!("the full index set always reproduces the target")
    }
}

/// Visits all n-bit masks with exactly k bits in ascending numeric order,
/// stopping early when the callback returns false.
pub(crate) fn for_each_mask_of_size(n: usize, k: usize, mut f: impl FnMut(u64) -> bool) {
    assert!(n <= 63);
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = 1u64 << n;
    let mut mask = (1u64 << k) - 1;
    while mask < limit {
        if !f(mask) {
            return;
        }
        // Gosper's hack: next mask with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        if r >= limit || c == 0 {
            break;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

/// The canonical intersection-flavor representation: the universe indexes
/// the closed sets (in ascending mask order) and S_i collects the closed
/// sets containing i. Index sets then derive exactly what the spanoid
/// derives.
pub fn set_representation(sp: &Spanoid) -> Result<SetRepresentation> {
    let closed = sp.closed_sets()?;
    let universe = closed.masks().len();
    let n = sp.ground_size();
    let mut sets = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = Subset::empty(universe);
        for (c, &mask) in closed.masks().iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.insert(c as u32);
            }
        }
        sets.push(s);
    }
    SetRepresentation::new(universe, sets, Flavor::Intersection)
}

/// Builds the spanoid induced by a union-flavor set list: A derives i
/// exactly when S_i is covered by the union of the sets indexed by A. The
/// synthesized rules are the inclusion-minimal covers of each S_i by the
/// other sets.
pub fn from_union_family(sets: &[Subset]) -> Result<Spanoid> {
    if sets.is_empty() {
        return Err(Error::EmptyInput("union family"));
    }
    let n = sets.len();
    if n > 60 {
        return Err(Error::Capacity {
            what: "union family size",
            n,
            cap: 60,
            max: 60,
        });
    }
    let universe = sets[0].ground_size();
    for s in sets {
        if s.ground_size() != universe {
            return Err(Error::GroundSetMismatch {
                left: universe,
                right: s.ground_size(),
            });
        }
    }
    let mut rules = Vec::new();
    for i in 0..n {
        // Covering S_i is hitting, for every point u of S_i, the set of
        // indices whose set contains u; i itself is excluded so the rule
        // is not vacuous.
        let mut targets: Vec<u64> = Vec::new();
        for u in sets[i].iter() {
            let mut t = 0u64;
            for (j, other) in sets.iter().enumerate() {
                if j != i && other.contains(u) {
                    t |= 1 << j;
                }
            }
            targets.push(t);
        }
        targets.sort_unstable();
        targets.dedup();
        let covers = minimal_transversals(&targets, COVER_NODE_BUDGET).ok_or(Error::Budget {
            what: "minimal cover enumeration",
            budget: COVER_NODE_BUDGET,
            lower: 0,
            upper: 0,
        })?;
        for cover in covers {
            let premise: Vec<u32> = (0..n as u32).filter(|&j| cover >> j & 1 == 1).collect();
            rules.push(Rule::new(premise, i as u32));
        }
    }
    Spanoid::new(n, rules)
}
