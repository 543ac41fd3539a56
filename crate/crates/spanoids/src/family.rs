//! Families of subsets of a small ground set, stored as sorted masks.

use crate::error::{Error, Result};
use crate::subset::Subset;

/// Largest ground set representable by single-word family members.
pub const FAMILY_GROUND_MAX: usize = 60;

/// A finite family of subsets of {0, .., n-1}, deduplicated and kept in
/// ascending mask order, which the output formats rely on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SetFamily {
    n: usize,
    members: Vec<u64>,
}

impl SetFamily {
    /// Builds a family from subsets, deduplicating and sorting.
    pub fn new(n: usize, sets: impl IntoIterator<Item = Subset>) -> Result<Self> {
        if n > FAMILY_GROUND_MAX {
            return Err(Error::RangeViolation {
                what: "set family ground size",
                value: n,
                min: 0,
                max: FAMILY_GROUND_MAX,
            });
        }
        let mut members = Vec::new();
        for s in sets {
            if s.ground_size() != n {
                return Err(Error::GroundSetMismatch {
                    left: n,
                    right: s.ground_size(),
                });
            }
            members.push(s.to_mask());
        }
        Ok(Self::from_masks(n, members))
    }

    /// Builds a family from raw masks, deduplicating and sorting.
    pub fn from_masks(n: usize, mut members: Vec<u64>) -> Self {
        assert!(n <= FAMILY_GROUND_MAX);
        let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
        for m in &members {
            assert!(m & !full == 0, "member has elements outside the ground set");
        }
        members.sort_unstable();
        members.dedup();
        SetFamily { n, members }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    pub fn full_mask(&self) -> u64 {
        if self.n == 0 {
            0
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Members as subsets, in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().map(|&m| Subset::from_mask(self.n, m))
    }

    /// Verifies that pairwise intersections stay in the family.
    pub fn check_intersection_closed(&self) -> Result<()> {
        for (ai, &a) in self.members.iter().enumerate() {
            for &b in &self.members[ai + 1..] {
                if !self.contains_mask(a & b) {
                    return Err(Error::NotIntersectionClosed {
                        a: Subset::from_mask(self.n, a).elems(),
                        b: Subset::from_mask(self.n, b).elems(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Verifies that pairwise unions stay in the family.
    pub fn check_union_closed(&self) -> Result<()> {
        for (ai, &a) in self.members.iter().enumerate() {
            for &b in &self.members[ai + 1..] {
                if !self.contains_mask(a | b) {
                    return Err(Error::NotUnionClosed {
                        a: Subset::from_mask(self.n, a).elems(),
                        b: Subset::from_mask(self.n, b).elems(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The family of complements of the members.
    pub fn complement_family(&self) -> SetFamily {
        let full = self.full_mask();
        Self::from_masks(self.n, self.members.iter().map(|&m| full & !m).collect())
    }

    /// Inclusion-minimal members.
    pub fn minimal_members(&self) -> SetFamily {
        let mut by_size: Vec<u64> = self.members.clone();
        by_size.sort_by_key(|m| (m.count_ones(), *m));
        let mut minimal: Vec<u64> = Vec::new();
        for &m in &by_size {
            if !minimal.iter().any(|&kept| kept & !m == 0) {
                minimal.push(m);
            }
        }
        Self::from_masks(self.n, minimal)
    }

    /// Inclusion-maximal members.
    pub fn maximal_members(&self) -> SetFamily {
        let mut by_size: Vec<u64> = self.members.clone();
        by_size.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
        let mut maximal: Vec<u64> = Vec::new();
        for &m in &by_size {
            if !maximal.iter().any(|&kept| m & !kept == 0) {
                maximal.push(m);
            }
        }
        Self::from_masks(self.n, maximal)
    }

    /// Drops the empty set, if present.
    pub fn without_empty(&self) -> SetFamily {
        Self::from_masks(
            self.n,
            self.members.iter().copied().filter(|&m| m != 0).collect(),
        )
    }
}

/// Element of maximum frequency across the nonempty members of a
/// union-closed family, with ties broken toward the smallest element.
///
/// Returns `(element, count)`. The count is conjectured to always reach
/// half the number of nonempty members; tests exercise that bound but the
/// function only reports the exact count.
pub fn frankl_max_frequency(fam: &SetFamily) -> Result<(u32, usize)> {
    fam.check_union_closed()?;
    let nonempty: Vec<u64> = fam.masks().iter().copied().filter(|&m| m != 0).collect();
    if nonempty.is_empty() {
        return Err(Error::EmptyInput("union-closed family of nonempty sets"));
    }
    let mut best: Option<(u32, usize)> = None;
    for e in 0..fam.ground_size() as u32 {
        let count = nonempty.iter().filter(|&&m| m >> e & 1 == 1).count();
        if best.is_none_or(|(_, c)| count > c) {
            best = Some((e, count));
        }
    }
    Ok(best.expect("nonzero ground set because some member is nonempty"))
}
