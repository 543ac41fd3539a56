//! Locally correctable spanning instances and their spanning-set search.
//!
//! An instance pairs a spanoid with explicit correction structure: for
//! every element i, a matching of pairwise-disjoint q-subsets of the
//! other elements, each of which spans i by a stored rule, with at
//! least delta*n subsets per element. The Hadamard instance realizes
//! this with all XOR pairs over nonzero k-bit vectors; random instances
//! draw disjoint q-subsets per element.
//!
//! The spanning-set procedures exploit the matchings through a random
//! graph process: each round contributes implication edges whose
//! sources, once contracted, leave few components. The union of the
//! sampled restriction elements and one representative per source
//! component always spans, and every returned set is re-verified with
//! the closure operator before it is handed back, so randomness only
//! influences the size of the answer, never its correctness.

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, Digraph};
use crate::lp::Rat;
use crate::spanoid::{Rule, Spanoid};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// A q-query locally correctable spanning instance.
#[derive(Clone, Debug)]
pub struct LcsInstance {
    sp: Spanoid,
    q: u32,
    delta: Rat,
    matchings: Vec<Vec<Vec<u32>>>,
}

/// First failed invariant of an instance, reported with 1-based
/// elements and 0-based positions inside a matching, matching the text
/// conventions used everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LcsViolation {
    /// A matching has fewer than delta*n subsets.
    MatchingTooSmall {
        element: u32,
        size: usize,
        required: Rat,
    },
    /// A subset does not have exactly q elements.
    WrongArity {
        element: u32,
        index: usize,
        size: usize,
    },
    /// A subset contains the element it is supposed to span.
    ContainsOwner { element: u32, index: usize },
    /// Two subsets of one matching share an element.
    Overlap {
        element: u32,
        first: usize,
        second: usize,
    },
    /// A subset is not a stored rule for its element.
    MissingRule { element: u32, index: usize },
}

impl fmt::Display for LcsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsViolation::MatchingTooSmall {
                element,
                size,
                required,
            } => write!(
                f,
                "element {}: matching has {size} subsets, fewer than delta*n = {}/{}",
                element + 1,
                required.numer(),
                required.denom()
            ),
            LcsViolation::WrongArity {
                element,
                index,
                size,
            } => write!(
                f,
                "element {}: subset {index} has {size} elements instead of q",
                element + 1
            ),
            LcsViolation::ContainsOwner { element, index } => write!(
                f,
                "element {}: subset {index} contains the element itself",
                element + 1
            ),
            LcsViolation::Overlap {
                element,
                first,
                second,
            } => write!(
                f,
                "element {}: subsets {first} and {second} overlap",
                element + 1
            ),
            LcsViolation::MissingRule { element, index } => write!(
                f,
                "element {}: subset {index} is not a stored rule",
                element + 1
            ),
        }
    }
}

impl LcsInstance {
    /// Wraps an existing spanoid with correction structure. Subsets are
    /// sorted and deduplicated; semantic invariants are left to
    /// [`LcsInstance::validate`] so defective instances can be built
    /// and inspected.
    pub fn new(
        sp: Spanoid,
        q: u32,
        delta: Rat,
        matchings: Vec<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let n = sp.ground_size();
        if q < 2 {
            return Err(Error::RangeViolation {
                what: "query arity",
                value: q as usize,
                min: 2,
                max: u32::MAX as usize,
            });
        }
        if matchings.len() != n {
            return Err(Error::GroundSetMismatch {
                left: n,
                right: matchings.len(),
            });
        }
        if !delta.is_positive() || delta > Rat::one() {
            return Err(Error::InvalidLcs(format!(
                "error tolerance {}/{} outside (0, 1]",
                delta.numer(),
                delta.denom()
            )));
        }
        let mut normalized = matchings;
        for matching in &mut normalized {
            for subset in matching.iter_mut() {
                subset.sort_unstable();
                subset.dedup();
                for &e in subset.iter() {
                    if e as usize >= n {
                        return Err(Error::ElementOutOfRange { element: e, n });
                    }
                }
            }
        }
        Ok(LcsInstance {
            sp,
            q,
            delta,
            matchings: normalized,
        })
    }

    pub fn spanoid(&self) -> &Spanoid {
        &self.sp
    }

    pub fn ground_size(&self) -> usize {
        self.sp.ground_size()
    }

    pub fn queries(&self) -> u32 {
        self.q
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn matchings(&self) -> &[Vec<Vec<u32>>] {
        &self.matchings
    }

    /// Checks the correction invariants and reports the first failure.
    /// Elements are scanned in ascending order; per element, the
    /// matching size comes first, then each subset in order: arity,
    /// owner exclusion, disjointness against earlier subsets, and rule
    /// presence. `None` means the instance is valid.
    pub fn validate(&self) -> Option<LcsViolation> {
        let n = self.sp.ground_size();
        let required = &self.delta * Rat::from_integer(BigInt::from(n));
        let stored: HashSet<&Rule> = self.sp.rules().iter().collect();
        for (i, matching) in self.matchings.iter().enumerate() {
            let element = i as u32;
            if Rat::from_integer(BigInt::from(matching.len())) < required {
                return Some(LcsViolation::MatchingTooSmall {
                    element,
                    size: matching.len(),
                    required: required.clone(),
                });
            }
            let mut seen: Vec<u32> = Vec::new();
            for (index, subset) in matching.iter().enumerate() {
                if subset.len() != self.q as usize {
                    return Some(LcsViolation::WrongArity {
                        element,
                        index,
                        size: subset.len(),
                    });
                }
                if subset.binary_search(&element).is_ok() {
                    return Some(LcsViolation::ContainsOwner { element, index });
                }
                if let Some(&shared) =
                    subset.iter().find(|e| seen.binary_search(e).is_ok())
                {
                    let first = matching[..index]
                        .iter()
                        .position(|t| t.binary_search(&shared).is_ok())
                        .expect("shared element came from an earlier subset");
                    return Some(LcsViolation::Overlap {
                        element,
                        first,
                        second: index,
                    });
                }
                if !stored.contains(&Rule::new(subset.clone(), element)) {
                    return Some(LcsViolation::MissingRule { element, index });
                }
                for &e in subset {
                    let at = seen.binary_search(&e).unwrap_err();
                    seen.insert(at, e);
                }
            }
        }
        None
    }
}

/// The XOR instance over all nonzero k-bit vectors: element index v-1
/// stands for the vector v, every pair {a, b} spans a^b, and the pairs
/// containing a fixed v pair up the remaining n-1 vectors perfectly.
/// Rule storage grows quadratically in n = 2^k - 1, so construction
/// beyond k around 12 is memory-bound even though k up to 20 passes the
/// range check.
pub fn hadamard_spanoid(k: u32) -> Result<LcsInstance> {
    if !(2..=20).contains(&k) {
        return Err(Error::RangeViolation {
            what: "hadamard parameter",
            value: k as usize,
            min: 2,
            max: 20,
        });
    }
    let n: u32 = (1 << k) - 1;
    let mut rules = Vec::with_capacity((n as usize * (n as usize - 1)) / 2);
    for a in 1..=n {
        for b in a + 1..=n {
            rules.push(Rule::new(vec![a - 1, b - 1], (a ^ b) - 1));
        }
    }
    let sp = Spanoid::new(n as usize, rules)?;
    let mut matchings = Vec::with_capacity(n as usize);
    for v in 1..=n {
        let mut matching = Vec::with_capacity((n as usize - 1) / 2);
        for a in 1..=n {
            let b = a ^ v;
            if a < b {
                matching.push(vec![a - 1, b - 1]);
            }
        }
        matchings.push(matching);
    }
    let delta = Rat::new(BigInt::from((n - 1) / 2), BigInt::from(n));
    LcsInstance::new(sp, 2, delta, matchings)
}

/// A random q-query instance: every element gets floor(n/2q) disjoint
/// q-subsets drawn uniformly from the other elements, each becoming a
/// stored rule.
pub fn random_qlcs(n: usize, q: u32, seed: u64) -> Result<LcsInstance> {
    if q < 3 {
        return Err(Error::RangeViolation {
            what: "query arity",
            value: q as usize,
            min: 3,
            max: u32::MAX as usize,
        });
    }
    if n < 2 * q as usize {
        return Err(Error::RangeViolation {
            what: "ground size",
            value: n,
            min: 2 * q as usize,
            max: usize::MAX,
        });
    }
    let per_element = n / (2 * q as usize);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rules = Vec::with_capacity(n * per_element);
    let mut matchings = Vec::with_capacity(n);
    for i in 0..n as u32 {
        let mut pool: Vec<u32> = (0..n as u32).filter(|&e| e != i).collect();
        // partial Fisher-Yates: the first per_element*q slots end up as
        // a uniform ordered sample without replacement
        let take = per_element * q as usize;
        for s in 0..take {
            let r = s + rng.gen_range(0..pool.len() - s);
            pool.swap(s, r);
        }
        let mut matching: Vec<Vec<u32>> = pool[..take]
            .chunks(q as usize)
            .map(|chunk| {
                let mut subset = chunk.to_vec();
                subset.sort_unstable();
                subset
            })
            .collect();
        matching.sort();
        for subset in &matching {
            rules.push(Rule::new(subset.clone(), i));
        }
        matchings.push(matching);
    }
    let sp = Spanoid::new(n, rules)?;
    let delta = Rat::new(BigInt::from(per_element), BigInt::from(n));
    LcsInstance::new(sp, q, delta, matchings)
}

/// Outcome of a spanning-set search: the set itself (ascending,
/// verified to span the ground set), the number of sampling rounds, the
/// number of source components at the end, and how many attempts ran.
#[derive(Clone, Debug)]
pub struct SpanningSetRun {
    pub set: Vec<u32>,
    pub rounds: usize,
    pub sources: usize,
    pub attempts: u32,
}

/// Tuning knobs for the spanning-set searches. The default reproduces
/// the documented constants; set a field to override one. Inclusion
/// probabilities are clamped into [0, 1] and thresholds below zero are
/// raised to zero, so no setting can break soundness: every returned
/// set is still verified to span.
#[derive(Clone, Debug, Default)]
pub struct SearchTuning {
    /// Sampling rounds per attempt. Default: ceil((8/delta) ln n) for
    /// the 2-query search, ceil(16 ln n) for q >= 3.
    pub rounds: Option<usize>,
    /// Inclusion probability for q >= 3 rounds. Default
    /// (delta*n)^(-1/(q-1)).
    pub inclusion: Option<f64>,
    /// Discard threshold for q >= 3 rounds. Default
    /// 4 * delta^(-1/(q-1)) * n^((q-2)/(q-1)).
    pub oversize: Option<f64>,
}

fn require_valid(inst: &LcsInstance) -> Result<()> {
    if let Some(violation) = inst.validate() {
        return Err(Error::InvalidLcs(violation.to_string()));
    }
    Ok(())
}

/// Partner index for 2-query matchings: entry l lists every pair
/// (target i, partner j) such that {j, l} lies in the matching of i.
pub(crate) fn partner_index(matchings: &[Vec<Vec<u32>>], n: usize) -> Vec<Vec<(u32, u32)>> {
    let mut occurrences: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (i, matching) in matchings.iter().enumerate() {
        for pair in matching {
            let (a, b) = (pair[0], pair[1]);
            occurrences[a as usize].push((i as u32, b));
            occurrences[b as usize].push((i as u32, a));
        }
    }
    occurrences
}

/// Inclusion probability and discard threshold for the q >= 3 sampling
/// rounds: elements enter J with probability (delta*n)^(-1/(q-1)) and a
/// J of at least 4 * delta^(-1/(q-1)) * n^((q-2)/(q-1)) elements is
/// thrown away.
pub(crate) fn qlcs_parameters(inst: &LcsInstance) -> (f64, f64) {
    let n = inst.ground_size() as f64;
    let q = inst.queries() as f64;
    let delta = inst
        .delta()
        .to_f64()
        .expect("delta is a ratio of machine integers");
    let inclusion = (delta * n).powf(-1.0 / (q - 1.0)).min(1.0);
    let oversize = 4.0 * delta.powf(-1.0 / (q - 1.0)) * n.powf((q - 2.0) / (q - 1.0));
    (inclusion, oversize)
}

/// Spanning-set search for 2-query instances. Each round draws one
/// element l uniformly and adds an implication edge j -> i whenever
/// {j, l} lies in the matching of i; after ceil((8/delta) ln n) rounds
/// the sampled elements plus one representative per source component
/// are returned. The chain of rule containments behind the edges makes
/// that union span unconditionally, and the closure check enforces it.
pub fn spanning_set_2lcs(
    inst: &LcsInstance,
    seed: u64,
    retries: u32,
) -> Result<SpanningSetRun> {
    spanning_set_2lcs_with(inst, seed, retries, &SearchTuning::default())
}

/// [`spanning_set_2lcs`] with explicit tuning.
pub fn spanning_set_2lcs_with(
    inst: &LcsInstance,
    seed: u64,
    retries: u32,
    tuning: &SearchTuning,
) -> Result<SpanningSetRun> {
    if inst.queries() != 2 {
        return Err(Error::RangeViolation {
            what: "query arity for the 2-query search",
            value: inst.queries() as usize,
            min: 2,
            max: 2,
        });
    }
    require_valid(inst)?;
    if retries == 0 {
        return Err(Error::RangeViolation {
            what: "retries",
            value: 0,
            min: 1,
            max: u32::MAX as usize,
        });
    }
    let n = inst.ground_size();
    let occurrences = partner_index(inst.matchings(), n);
    let rounds = tuning.rounds.unwrap_or_else(|| {
        ((Rat::from_integer(BigInt::from(8)) / inst.delta())
            .to_f64()
            .expect("delta is a ratio of machine integers")
            * (n as f64).ln())
        .ceil()
        .max(0.0) as usize
    });
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut last = (0usize, 0usize);
    for attempt in 1..=retries {
        let mut g = Digraph::new(n);
        let mut chosen: BTreeSet<u32> = BTreeSet::new();
        for _ in 0..rounds {
            let l = rng.gen_range(0..n as u32);
            chosen.insert(l);
            for &(i, j) in &occurrences[l as usize] {
                g.add_edge(j, i);
            }
        }
        let scc = strongly_connected_components(&g);
        let reps = scc.source_representatives(&g);
        let sources = reps.len();
        chosen.extend(reps);
        let set: Vec<u32> = chosen.into_iter().collect();
        if inst.spanoid().span_of(&set)?.is_full() {
            return Ok(SpanningSetRun {
                set,
                rounds,
                sources,
                attempts: attempt,
            });
        }
        last = (set.len(), sources);
    }
    Err(Error::RetriesExhausted {
        what: "2-query spanning-set search",
        attempts: retries,
        detail: format!(
            "last attempt kept {} elements over {} sources without spanning",
            last.0, last.1
        ),
    })
}

/// One sampling round for q >= 3: an inclusion set J, and the edges it
/// fires. Oversized J yields the empty graph and is not retained.
pub(crate) struct QlcsRound {
    pub(crate) retained: Option<Vec<u32>>,
    pub(crate) edges: Vec<(u32, u32, usize)>, // (from, to, matching index)
}

pub(crate) fn qlcs_round(
    inst: &LcsInstance,
    rng: &mut ChaCha12Rng,
    inclusion: f64,
    oversize: f64,
) -> QlcsRound {
    let n = inst.ground_size();
    let mut member = vec![false; n];
    let mut j_set: Vec<u32> = Vec::new();
    for e in 0..n {
        if rng.gen::<f64>() < inclusion {
            member[e] = true;
            j_set.push(e as u32);
        }
    }
    if j_set.len() as f64 >= oversize {
        return QlcsRound {
            retained: None,
            edges: Vec::new(),
        };
    }
    let q = inst.queries() as usize;
    let mut edges = Vec::new();
    for (i, matching) in inst.matchings().iter().enumerate() {
        // subsets whose distinguished first q-1 elements landed in J
        let hits: Vec<usize> = matching
            .iter()
            .enumerate()
            .filter(|(_, t)| t[..q - 1].iter().all(|&e| member[e as usize]))
            .map(|(idx, _)| idx)
            .collect();
        if hits.is_empty() {
            continue;
        }
        let idx = hits[rng.gen_range(0..hits.len())];
        edges.push((matching[idx][q - 1], i as u32, idx));
    }
    QlcsRound {
        retained: Some(j_set),
        edges,
    }
}

/// Spanning-set search for q >= 3. Each round includes every element in
/// J independently with probability (delta*n)^(-1/(q-1)), discards J
/// when it reaches 4 * delta^(-1/(q-1)) * n^((q-2)/(q-1)) elements, and
/// otherwise fires, for every element with at least one matching subset
/// whose first q-1 elements lie inside J, one uniformly chosen such
/// subset as the edge last-element -> element. After ceil(16 ln n)
/// rounds the union of the retained J's plus one representative per
/// source component is verified to span and returned.
pub fn spanning_set_qlcs(
    inst: &LcsInstance,
    seed: u64,
    retries: u32,
) -> Result<SpanningSetRun> {
    spanning_set_qlcs_with(inst, seed, retries, &SearchTuning::default())
}

/// [`spanning_set_qlcs`] with explicit tuning.
pub fn spanning_set_qlcs_with(
    inst: &LcsInstance,
    seed: u64,
    retries: u32,
    tuning: &SearchTuning,
) -> Result<SpanningSetRun> {
    if inst.queries() < 3 {
        return Err(Error::RangeViolation {
            what: "query arity for the q-query search",
            value: inst.queries() as usize,
            min: 3,
            max: u32::MAX as usize,
        });
    }
    require_valid(inst)?;
    if retries == 0 {
        return Err(Error::RangeViolation {
            what: "retries",
            value: 0,
            min: 1,
            max: u32::MAX as usize,
        });
    }
    let n = inst.ground_size();
    let (mut inclusion, mut oversize) = qlcs_parameters(inst);
    if let Some(p) = tuning.inclusion {
        inclusion = p.clamp(0.0, 1.0);
    }
    if let Some(s) = tuning.oversize {
        oversize = s.max(0.0);
    }
    let rounds = tuning
        .rounds
        .unwrap_or_else(|| (16.0 * (n as f64).ln()).ceil().max(0.0) as usize);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut last = (0usize, 0usize);
    for attempt in 1..=retries {
        let mut g = Digraph::new(n);
        let mut union: BTreeSet<u32> = BTreeSet::new();
        for _ in 0..rounds {
            let round = qlcs_round(inst, &mut rng, inclusion, oversize);
            if let Some(j_set) = round.retained {
                union.extend(j_set);
                for &(from, to, _) in &round.edges {
                    g.add_edge(from, to);
                }
            }
        }
        let scc = strongly_connected_components(&g);
        let reps = scc.source_representatives(&g);
        let sources = reps.len();
        union.extend(reps);
        let set: Vec<u32> = union.into_iter().collect();
        if inst.spanoid().span_of(&set)?.is_full() {
            return Ok(SpanningSetRun {
                set,
                rounds,
                sources,
                attempts: attempt,
            });
        }
        last = (set.len(), sources);
    }
    Err(Error::RetriesExhausted {
        what: "q-query spanning-set search",
        attempts: retries,
        detail: format!(
            "last attempt kept {} elements over {} sources without spanning",
            last.0, last.1
        ),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lp::rat;
    use crate::rank::rank;

    #[test]
    fn smallest_hadamard_instance_is_the_xor_triangle() {
        let inst = hadamard_spanoid(2).unwrap();
        assert_eq!(inst.ground_size(), 3);
        assert_eq!(inst.queries(), 2);
        assert_eq!(inst.delta(), &rat(1, 3));
        assert_eq!(inst.matchings()[0], vec![vec![1, 2]]);
        assert_eq!(inst.matchings()[1], vec![vec![0, 2]]);
        assert_eq!(inst.matchings()[2], vec![vec![0, 1]]);
        assert!(inst.validate().is_none());
        assert_eq!(inst.spanoid().rules().len(), 3);
    }

    #[test]
    fn hadamard_shape_and_validity() {
        let inst = hadamard_spanoid(3).unwrap();
        assert_eq!(inst.ground_size(), 7);
        assert_eq!(inst.delta(), &rat(3, 7));
        assert!(inst.matchings().iter().all(|m| m.len() == 3));
        assert!(inst.validate().is_none());
        assert_eq!(inst.spanoid().rules().len(), 21);
        assert!(matches!(
            hadamard_spanoid(1),
            Err(Error::RangeViolation { .. })
        ));
        assert!(matches!(
            hadamard_spanoid(21),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn hadamard_rank_matches_the_bit_width() {
        assert_eq!(rank(hadamard_spanoid(3).unwrap().spanoid()).unwrap().rank, 3);
        assert_eq!(rank(hadamard_spanoid(4).unwrap().spanoid()).unwrap().rank, 4);
    }

    #[test]
    fn basis_columns_span_every_hadamard_instance() {
        for k in 2..=8u32 {
            let inst = hadamard_spanoid(k).unwrap();
            let basis: Vec<u32> = (0..k).map(|j| (1u32 << j) - 1).collect();
            assert!(
                inst.spanoid().span_of(&basis).unwrap().is_full(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn validation_reports_the_first_violation() {
        let base = hadamard_spanoid(2).unwrap();
        let sp = base.spanoid().clone();

        // shrink one matching below delta*n
        let mut m = base.matchings().to_vec();
        m[1].clear();
        let inst = LcsInstance::new(sp.clone(), 2, rat(1, 3), m).unwrap();
        assert_eq!(
            inst.validate(),
            Some(LcsViolation::MatchingTooSmall {
                element: 1,
                size: 0,
                required: rat(1, 1),
            })
        );

        // overlapping subsets within one matching
        let m = vec![
            vec![vec![1, 2], vec![2, 1]],
            vec![vec![0, 2]],
            vec![vec![0, 1]],
        ];
        let inst = LcsInstance::new(sp.clone(), 2, rat(1, 3), m).unwrap();
        assert_eq!(
            inst.validate(),
            Some(LcsViolation::Overlap {
                element: 0,
                first: 0,
                second: 1,
            })
        );

        // wrong arity
        let m = vec![
            vec![vec![1, 2]],
            vec![vec![2]],
            vec![vec![0, 1]],
        ];
        let inst = LcsInstance::new(sp.clone(), 2, rat(1, 3), m).unwrap();
        assert_eq!(
            inst.validate(),
            Some(LcsViolation::WrongArity {
                element: 1,
                index: 0,
                size: 1,
            })
        );

        // subset containing its own element
        let m = vec![
            vec![vec![0, 1]],
            vec![vec![0, 2]],
            vec![vec![0, 1]],
        ];
        let inst = LcsInstance::new(sp.clone(), 2, rat(1, 3), m).unwrap();
        assert_eq!(
            inst.validate(),
            Some(LcsViolation::ContainsOwner {
                element: 0,
                index: 0,
            })
        );

        // a subset that is not a stored rule
        let plain = Spanoid::rule_free(3);
        let m = vec![
            vec![vec![1, 2]],
            vec![vec![0, 2]],
            vec![vec![0, 1]],
        ];
        let inst = LcsInstance::new(plain, 2, rat(1, 3), m).unwrap();
        assert_eq!(
            inst.validate(),
            Some(LcsViolation::MissingRule {
                element: 0,
                index: 0,
            })
        );
    }

    #[test]
    fn random_instances_satisfy_their_own_invariants() {
        let inst = random_qlcs(30, 3, 7).unwrap();
        assert_eq!(inst.ground_size(), 30);
        assert_eq!(inst.delta(), &rat(1, 6));
        assert!(inst.matchings().iter().all(|m| m.len() == 5));
        assert!(inst.validate().is_none());
        // deterministic under the seed
        let again = random_qlcs(30, 3, 7).unwrap();
        assert_eq!(inst.matchings(), again.matchings());
        let other = random_qlcs(30, 3, 8).unwrap();
        assert_ne!(inst.matchings(), other.matchings());
    }

    #[test]
    fn random_instance_ranges_are_enforced() {
        assert!(matches!(
            random_qlcs(5, 3, 0),
            Err(Error::RangeViolation { .. })
        ));
        assert!(matches!(
            random_qlcs(30, 2, 0),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn random_instance_rank_sits_in_the_certified_window() {
        let inst = random_qlcs(20, 3, 1).unwrap();
        let cert = rank(inst.spanoid()).unwrap();
        let cover = crate::cover::lp_cover(inst.spanoid()).unwrap();
        assert!(Rat::from_integer(BigInt::from(cert.rank)) >= cover);
        let run = spanning_set_qlcs(&inst, 1, 100).unwrap();
        assert!(cert.rank <= run.set.len());
    }

    #[test]
    fn two_query_search_spans_hadamard_instances() {
        let inst = hadamard_spanoid(3).unwrap();
        let run = spanning_set_2lcs(&inst, 1, 100).unwrap();
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
        assert!(run.set.len() <= 20);
        assert_eq!(run.attempts, 1);
        // deterministic under the seed
        let again = spanning_set_2lcs(&inst, 1, 100).unwrap();
        assert_eq!(run.set, again.set);

        let inst = hadamard_spanoid(5).unwrap();
        let run = spanning_set_2lcs(&inst, 3, 100).unwrap();
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
        assert!(run.set.len() <= inst.ground_size());
    }

    #[test]
    fn two_query_search_rejects_wrong_arity_and_bad_instances() {
        let q3 = random_qlcs(30, 3, 0).unwrap();
        assert!(matches!(
            spanning_set_2lcs(&q3, 0, 1),
            Err(Error::RangeViolation { .. })
        ));
        let had = hadamard_spanoid(2).unwrap();
        assert!(matches!(
            spanning_set_2lcs(&had, 0, 0),
            Err(Error::RangeViolation { .. })
        ));
        // an invalid instance is refused before any sampling
        let mut m = had.matchings().to_vec();
        m[0].clear();
        let broken =
            LcsInstance::new(had.spanoid().clone(), 2, rat(1, 3), m).unwrap();
        assert!(matches!(
            spanning_set_2lcs(&broken, 0, 5),
            Err(Error::InvalidLcs(_))
        ));
    }

    #[test]
    fn q_query_search_spans_random_instances() {
        let inst = random_qlcs(100, 3, 5).unwrap();
        let run = spanning_set_qlcs(&inst, 5, 100).unwrap();
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
        assert_eq!(run.attempts, 1);
        // documented bound: 4 * delta^(-1/2) * sqrt(n) * ceil(log2 n)
        // plus one element per source
        let delta = inst.delta().to_f64().unwrap();
        let bound = 4.0 * delta.powf(-0.5) * 10.0 * 7.0 + run.sources as f64;
        assert!((run.set.len() as f64) <= bound);
        let again = spanning_set_qlcs(&inst, 5, 100).unwrap();
        assert_eq!(run.set, again.set);

        let inst = random_qlcs(200, 4, 9).unwrap();
        let run = spanning_set_qlcs(&inst, 9, 100).unwrap();
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
        assert!(matches!(
            spanning_set_qlcs(&hadamard_spanoid(3).unwrap(), 0, 1),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn routed_instance_yields_a_small_set_quickly() {
        // element 0 spans everything on its own, and every matching
        // routes through it
        let mut rules = vec![Rule::new(vec![1, 2], 0)];
        for i in 1..5u32 {
            rules.push(Rule::new(vec![0], i));
            let partner = if i == 1 { 2 } else { 1 };
            rules.push(Rule::new(vec![0, partner], i));
        }
        let sp = Spanoid::new(5, rules).unwrap();
        let matchings = vec![
            vec![vec![1, 2]],
            vec![vec![0, 2]],
            vec![vec![0, 1]],
            vec![vec![0, 1]],
            vec![vec![0, 1]],
        ];
        let inst = LcsInstance::new(sp, 2, rat(1, 5), matchings).unwrap();
        assert!(inst.validate().is_none());
        let run = spanning_set_2lcs(&inst, 0, 100).unwrap();
        assert_eq!(run.attempts, 1);
        assert!(run.set.len() <= 5);
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
    }

    #[test]
    fn tuning_overrides_keep_results_sound() {
        // zero rounds leaves the graph empty, so every vertex is its
        // own source and the whole ground set comes back, verified
        let inst = hadamard_spanoid(3).unwrap();
        let tuning = SearchTuning {
            rounds: Some(0),
            ..Default::default()
        };
        let run = spanning_set_2lcs_with(&inst, 0, 1, &tuning).unwrap();
        assert_eq!(run.set, (0..7).collect::<Vec<_>>());
        assert_eq!(run.rounds, 0);

        // inclusion forced to certainty with the discard disabled pulls
        // every element into J
        let inst = random_qlcs(30, 3, 2).unwrap();
        let tuning = SearchTuning {
            rounds: Some(3),
            inclusion: Some(1.0),
            oversize: Some(f64::INFINITY),
        };
        let run = spanning_set_qlcs_with(&inst, 2, 1, &tuning).unwrap();
        assert_eq!(run.set.len(), 30);
        assert!(inst.spanoid().span_of(&run.set).unwrap().is_full());
    }

    #[test]
    fn fired_edges_reconstruct_from_matching_subsets() {
        let inst = random_qlcs(40, 3, 11).unwrap();
        let q = inst.queries() as usize;
        let (inclusion, oversize) = qlcs_parameters(&inst);
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut fired = 0usize;
        for _ in 0..50 {
            let round = qlcs_round(&inst, &mut rng, inclusion, oversize);
            let Some(j_set) = round.retained else { continue };
            assert!((j_set.len() as f64) < oversize);
            for (from, to, idx) in round.edges {
                let subset = &inst.matchings()[to as usize][idx];
                // the fired subset is a stored rule whose distinguished
                // elements all lie in J and whose tail is the edge source
                assert_eq!(subset[q - 1], from);
                assert!(subset[..q - 1].iter().all(|e| j_set.contains(e)));
                fired += 1;
            }
        }
        assert!(fired > 0);
    }
}
