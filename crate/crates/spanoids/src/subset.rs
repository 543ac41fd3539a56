//! Subsets of a ground set {0, .., n-1}, stored as bit blocks.
//!
//! This representation works at any ground-set size; the 2^n enumeration
//! routines elsewhere convert to single-word masks first and are capped
//! separately.

/// A subset of {0, .., n-1}. Elements are 0-based everywhere in the library;
/// the text formats and the CLI translate to 1-based at the boundary.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    n: usize,
    blocks: Vec<u64>,
}

fn block_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl Subset {
    /// The empty subset of a ground set of size `n`.
    pub fn empty(n: usize) -> Self {
        Subset {
            n,
            blocks: vec![0; block_count(n)],
        }
    }

    /// The full ground set {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for e in 0..n {
            s.insert(e as u32);
        }
        s
    }

    /// Builds a subset from 0-based elements. Panics on out-of-range input;
    /// use [`Subset::try_from_elems`] for validated construction.
    pub fn from_elems(n: usize, elems: &[u32]) -> Self {
        let mut s = Self::empty(n);
        for &e in elems {
            assert!((e as usize) < n, "element {e} out of range for n={n}");
            s.insert(e);
        }
        s
    }

    /// Validated construction from 0-based elements.
    pub fn try_from_elems(n: usize, elems: &[u32]) -> crate::error::Result<Self> {
        for &e in elems {
            if e as usize >= n {
                return Err(crate::error::Error::ElementOutOfRange { element: e, n });
            }
        }
        Ok(Self::from_elems(n, elems))
    }

    /// Builds a subset of a small ground set from a single-word mask.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 64);
        debug_assert!(n == 64 || mask < (1u64 << n));
        let mut s = Self::empty(n);
        if !s.blocks.is_empty() {
            s.blocks[0] = mask;
        }
        s
    }

    /// The single-word mask of a subset of a small ground set.
    pub fn to_mask(&self) -> u64 {
        assert!(self.n <= 64);
        self.blocks.first().copied().unwrap_or(0)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, e: u32) -> bool {
        let e = e as usize;
        e < self.n && self.blocks[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn insert(&mut self, e: u32) {
        let e = e as usize;
        assert!(e < self.n);
        self.blocks[e / 64] |= 1 << (e % 64);
    }

    pub fn remove(&mut self, e: u32) {
        let e = e as usize;
        assert!(e < self.n);
        self.blocks[e / 64] &= !(1 << (e % 64));
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &Subset) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn complement(&self) -> Subset {
        let mut s = Self::full(self.n);
        for (a, b) in s.blocks.iter_mut().zip(&self.blocks) {
            *a &= !b;
        }
        s
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        assert_eq!(self.n, other.n);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Iterates elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let base = (bi * 64) as u32;
            BitIter { block }.map(move |b| base + b)
        })
    }

    /// Elements as an ascending vector.
    pub fn elems(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

struct BitIter {
    block: u64,
}

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.block == 0 {
            return None;
        }
        let b = self.block.trailing_zeros();
        self.block &= self.block - 1;
        Some(b)
    }
}

impl std::fmt::Debug for Subset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_contains() {
        let mut s = Subset::empty(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert!(s.contains(0) && s.contains(64) && s.contains(129));
        assert!(!s.contains(1) && !s.contains(128));
        assert_eq!(s.len(), 3);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.elems(), vec![0, 129]);
    }

    #[test]
    fn set_algebra() {
        let a = Subset::from_elems(10, &[1, 3, 5]);
        let b = Subset::from_elems(10, &[3, 5, 7]);
        assert_eq!(a.union(&b).elems(), vec![1, 3, 5, 7]);
        assert_eq!(a.intersection(&b).elems(), vec![3, 5]);
        assert!(a.intersection(&b).is_subset_of(&a));
        assert!(!a.is_subset_of(&b));
        assert_eq!(a.complement().elems(), vec![0, 2, 4, 6, 7, 8, 9]);
    }

    #[test]
    fn mask_round_trip() {
        let s = Subset::from_mask(5, 0b10110);
        assert_eq!(s.elems(), vec![1, 2, 4]);
        assert_eq!(s.to_mask(), 0b10110);
        assert!(Subset::empty(0).is_empty());
        assert!(Subset::full(5).is_full());
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(Subset::try_from_elems(3, &[3]).is_err());
        assert!(Subset::try_from_elems(3, &[0, 2]).is_ok());
    }
}
