//! The core inference structure: a ground set together with rules
//! "premise spans conclusion", and the closure operator they induce.
//!
//! Reflexivity and monotonicity are implicit: `span` grows a set by firing
//! every rule whose premise is already contained, until nothing changes.
//! Closed sets are the fixpoints; open sets are their complements.

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::subset::Subset;
use crate::transversal::minimal_transversals;

/// Default bound on ground-set size for 2^n enumeration routines.
pub const ENUM_BOUND_DEFAULT: usize = 22;
/// Hard ceiling for the enumeration bound.
pub const ENUM_BOUND_MAX: usize = 30;

/// A single stored rule: `premise` spans `conclusion`. Premises may be
/// empty (the conclusion is then derivable from any set) and may contain
/// the conclusion (vacuous under reflexivity, but preserved).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rule {
    premise: Vec<u32>, // sorted ascending, deduplicated
    conclusion: u32,
}

impl Rule {
    pub fn new(mut premise: Vec<u32>, conclusion: u32) -> Self {
        premise.sort_unstable();
        premise.dedup();
        Rule {
            premise,
            conclusion,
        }
    }

    pub fn premise(&self) -> &[u32] {
        &self.premise
    }

    pub fn conclusion(&self) -> u32 {
        self.conclusion
    }

    pub fn is_vacuous(&self) -> bool {
        self.premise.binary_search(&self.conclusion).is_ok()
    }

    /// Orders rules by the integer value of the premise bitmask, then by
    /// conclusion; used as the canonical storage order.
    fn canonical_cmp(&self, other: &Rule) -> std::cmp::Ordering {
        let mut a = self.premise.iter().rev();
        let mut b = other.premise.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return self.conclusion.cmp(&other.conclusion),
                (None, Some(_)) => return std::cmp::Ordering::Less,
                (Some(_), None) => return std::cmp::Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(y),
                _ => {}
            }
        }
    }
}

/// A ground set {0, .., n-1} with stored spanning rules.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spanoid {
    n: usize,
    rules: Vec<Rule>,
    /// rule indices whose premise contains each element
    occur: Vec<Vec<u32>>,
    /// rules with empty premise
    empty_premise: Vec<u32>,
}

impl Spanoid {
    /// Builds a spanoid, validating indices and canonicalizing the rule
    /// list (sorted by premise mask then conclusion, duplicates removed).
    pub fn new(n: usize, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            for &e in &r.premise {
                if e as usize >= n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
            }
            if r.conclusion as usize >= n {
                return Err(Error::ElementOutOfRange {
                    element: r.conclusion,
                    n,
                });
            }
        }
        let mut rules = rules;
        rules.sort_by(Rule::canonical_cmp);
        rules.dedup();
        let mut occur = vec![Vec::new(); n];
        let mut empty_premise = Vec::new();
        for (idx, r) in rules.iter().enumerate() {
            if r.premise.is_empty() {
                empty_premise.push(idx as u32);
            }
            for &e in &r.premise {
                occur[e as usize].push(idx as u32);
            }
        }
        Ok(Spanoid {
            n,
            rules,
            occur,
            empty_premise,
        })
    }

    /// The rule-free spanoid: every set spans only itself.
    pub fn rule_free(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("no rules to validate")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Adds rules, returning a new spanoid.
    pub fn with_rules(&self, extra: Vec<Rule>) -> Result<Self> {
        let mut rules = self.rules.clone();
        rules.extend(extra);
        Self::new(self.n, rules)
    }

    /// Diagnostics about degenerate rules: empty premises (the conclusion
    /// is spanned by every set, so span(∅) is nonempty) and premises that
    /// already contain their conclusion.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rules {
            if r.premise.is_empty() {
                out.push(format!(
                    "rule with empty premise: element {} is spanned by every set",
                    r.conclusion
                ));
            } else if r.is_vacuous() {
                out.push(format!(
                    "rule {:?} -> {} has its conclusion in the premise and never adds anything",
                    r.premise, r.conclusion
                ));
            }
        }
        out
    }

    /// Least fixpoint of rule application containing `start`: repeatedly
    /// adds the conclusion of every rule whose premise is contained in the
    /// current set. Runs in time linear in the total premise size.
    pub fn span(&self, start: &Subset) -> Subset {
        assert_eq!(start.ground_size(), self.n);
        self.span_until(start, None).0
    }

    /// True when `target` lies in the span of `start`; stops as soon as the
    /// target is derived.
    pub fn models(&self, start: &Subset, target: u32) -> bool {
        assert!((target as usize) < self.n);
        if start.contains(target) {
            return true;
        }
        self.span_until(start, Some(target)).1
    }

    fn span_until(&self, start: &Subset, target: Option<u32>) -> (Subset, bool) {
        let mut current = start.clone();
        let mut remaining: Vec<u32> = self
            .rules
            .iter()
            .map(|r| r.premise.iter().filter(|&&e| !start.contains(e)).count() as u32)
            .collect();
        let mut queue: Vec<u32> = Vec::new();
        for &ri in &self.empty_premise {
            let c = self.rules[ri as usize].conclusion;
            if !current.contains(c) {
                current.insert(c);
                queue.push(c);
            }
        }
        for (ri, &rem) in remaining.iter().enumerate() {
            if rem == 0 {
                let c = self.rules[ri].conclusion;
                if !current.contains(c) {
                    current.insert(c);
                    queue.push(c);
                }
            }
        }
        if let Some(t) = target {
            if current.contains(t) {
                return (current, true);
            }
        }
        while let Some(e) = queue.pop() {
            for &ri in &self.occur[e as usize] {
                let rem = &mut remaining[ri as usize];
                debug_assert!(*rem > 0 || self.rules[ri as usize].premise.contains(&e));
                if *rem > 0 {
                    *rem -= 1;
                    if *rem == 0 {
                        let c = self.rules[ri as usize].conclusion;
                        if !current.contains(c) {
                            current.insert(c);
                            if Some(c) == target {
                                return (current, true);
                            }
                            queue.push(c);
                        }
                    }
                }
            }
        }
        (current, target.is_none())
    }

    /// Convenience: span of a 0-based element list.
    pub fn span_of(&self, elems: &[u32]) -> Result<Subset> {
        Ok(self.span(&Subset::try_from_elems(self.n, elems)?))
    }

    /// Rules compiled to single-word masks; only valid when n <= 64.
    pub(crate) fn compiled_rules(&self) -> Vec<(u64, u32)> {
        assert!(self.n <= 64);
        self.rules
            .iter()
            .map(|r| {
                let mut m = 0u64;
                for &e in &r.premise {
                    m |= 1 << e;
                }
                (m, r.conclusion)
            })
            .collect()
    }

    /// Span over single-word masks; only valid when n <= 64. Used by the
    /// enumeration and search routines.
    pub(crate) fn span_mask(compiled: &[(u64, u32)], start: u64) -> u64 {
        let mut cur = start;
        loop {
            let mut grew = false;
            for &(premise, c) in compiled {
                if premise & !cur == 0 && cur >> c & 1 == 0 {
                    cur |= 1 << c;
                    grew = true;
                }
            }
            if !grew {
                return cur;
            }
        }
    }

    fn check_enum_bound(&self, what: &'static str, cap: usize) -> Result<()> {
        let cap = cap.min(ENUM_BOUND_MAX);
        if self.n > cap {
            return Err(Error::Capacity {
                what,
                n: self.n,
                cap,
                max: ENUM_BOUND_MAX,
            });
        }
        Ok(())
    }

    /// All closed sets (span(B) = B), by scanning every subset. Bounded by
    /// the default enumeration cap.
    pub fn closed_sets(&self) -> Result<SetFamily> {
        self.closed_sets_bounded(ENUM_BOUND_DEFAULT)
    }

    /// All closed sets with an explicit enumeration bound (capped at
    /// [`ENUM_BOUND_MAX`]).
    pub fn closed_sets_bounded(&self, cap: usize) -> Result<SetFamily> {
        self.check_enum_bound("closed-set enumeration", cap)?;
        let compiled = self.compiled_rules();
        let mut members = Vec::new();
        for mask in 0..1u64 << self.n {
            if Self::is_closed_mask(&compiled, mask) {
                members.push(mask);
            }
        }
        Ok(SetFamily::from_masks(self.n, members))
    }

    pub(crate) fn is_closed_mask(compiled: &[(u64, u32)], mask: u64) -> bool {
        compiled
            .iter()
            .all(|&(premise, c)| premise & !mask != 0 || mask >> c & 1 == 1)
    }

    /// Complements of the closed sets.
    pub fn open_sets(&self) -> Result<SetFamily> {
        self.open_sets_bounded(ENUM_BOUND_DEFAULT)
    }

    pub fn open_sets_bounded(&self, cap: usize) -> Result<SetFamily> {
        Ok(self.closed_sets_bounded(cap)?.complement_family())
    }

    /// Inclusion-minimal nonempty open sets; rank is their minimum hitting
    /// set and the cover relaxation ranges over them.
    pub fn minimal_open_sets(&self) -> Result<SetFamily> {
        self.minimal_open_sets_bounded(ENUM_BOUND_DEFAULT)
    }

    pub fn minimal_open_sets_bounded(&self, cap: usize) -> Result<SetFamily> {
        Ok(self
            .open_sets_bounded(cap)?
            .without_empty()
            .minimal_members())
    }

    /// Reconstructs a spanoid whose span operator is
    /// A -> intersection of the family members containing A.
    ///
    /// The family must contain the full ground set and be closed under
    /// pairwise intersection. For each element, the synthesized premises
    /// are the minimal transversals of the minimal open sets containing it:
    /// a set derives the element exactly when it is contained in no closed
    /// set avoiding it.
    pub fn from_closed_family(fam: &SetFamily) -> Result<Spanoid> {
        let n = fam.ground_size();
        if n > ENUM_BOUND_MAX {
            return Err(Error::Capacity {
                what: "rule synthesis from a closed family",
                n,
                cap: ENUM_BOUND_MAX,
                max: ENUM_BOUND_MAX,
            });
        }
        if !fam.contains_mask(fam.full_mask()) {
            return Err(Error::MissingFullSet);
        }
        fam.check_intersection_closed()?;
        let full = fam.full_mask();
        let mut rules = Vec::new();
        for i in 0..n as u32 {
            let avoiding: Vec<u64> = fam
                .masks()
                .iter()
                .copied()
                .filter(|&m| m >> i & 1 == 0)
                .collect();
            let maximal = SetFamily::from_masks(n, avoiding).maximal_members();
            // Complements of the maximal closed sets avoiding i, with i
            // itself removed: a premise not containing i must hit each one.
            let targets: Vec<u64> = maximal
                .masks()
                .iter()
                .map(|&m| (full & !m) & !(1u64 << i))
                .collect();
            let transversals = minimal_transversals(&targets, 200_000_000)
                .ok_or(Error::Budget {
                    what: "rule synthesis from a closed family",
                    budget: 200_000_000,
                    lower: 0,
                    upper: 0,
                })?;
            for t in transversals {
                rules.push(Rule::new(Subset::from_mask(n, t).elems(), i));
            }
        }
        Spanoid::new(n, rules)
    }
}
