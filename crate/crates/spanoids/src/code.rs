//! Consistent codes over finite alphabets.
//!
//! A code is consistent with a spanoid when, for every stored rule, the
//! coordinates of the premise determine the coordinate of the conclusion
//! across all codewords. Determination composes along derivations, so
//! checking the stored rules certifies every derived one. The central
//! construction turns the optimal dual multipliers of the covering LP
//! into a union-style set representation and packs it into codewords,
//! giving codes whose dimension meets the covering LP value exactly; a
//! seeded sampling variant trades a constant factor of dimension for a
//! much smaller alphabet. A tiny-instance exhaustive search provides the
//! maximum consistent code as an independent oracle.

use crate::cover::{lp_cover, lp_cover_dual};
use crate::entropy::{lp_entropy, EntropyMode};
use crate::error::{Error, Result};
use crate::lp::Rat;
use crate::rank::rat_ceil;
use crate::represent::{Flavor, SetRepresentation};
use crate::spanoid::{Rule, Spanoid};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Universe ceiling for materializing exponential-size codes.
pub const MATERIALIZE_UNIVERSE_MAX: usize = 20;

/// Vertex ceiling for the exhaustive maximum-code search.
pub const MAX_CODE_VERTICES: usize = 4096;

/// A set of distinct words of fixed length over symbols 0..s-1, kept in
/// ascending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    n: usize,
    s: u32,
    words: Vec<Vec<u32>>,
}

impl Code {
    pub fn new(n: usize, s: u32, mut words: Vec<Vec<u32>>) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidCode("alphabet size must be at least 1".into()));
        }
        if words.is_empty() {
            return Err(Error::EmptyInput("code word list"));
        }
        for w in &words {
            if w.len() != n {
                return Err(Error::InvalidCode(format!(
                    "word length {} does not match n = {n}",
                    w.len()
                )));
            }
            if let Some(&sym) = w.iter().find(|&&sym| sym >= s) {
                return Err(Error::InvalidCode(format!(
                    "symbol {sym} outside alphabet 0..{s}"
                )));
            }
        }
        words.sort_unstable();
        if words.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::InvalidCode("duplicate words".into()));
        }
        Ok(Code { n, s, words })
    }

    pub fn word_length(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> u32 {
        self.s
    }

    pub fn words(&self) -> &[Vec<u32>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// The first stored rule two codewords break, under the canonical rule
/// order and sorted word order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub words: (Vec<u32>, Vec<u32>),
}

/// Checks every stored rule: two words that agree on a premise must agree
/// on its conclusion. Returns the first violation if any.
pub fn check_consistent(sp: &Spanoid, code: &Code) -> Result<Option<Violation>> {
    if code.word_length() != sp.ground_size() {
        return Err(Error::GroundSetMismatch {
            left: sp.ground_size(),
            right: code.word_length(),
        });
    }
    for rule in sp.rules() {
        if rule.is_vacuous() {
            continue;
        }
        let premise = rule.premise();
        let target = rule.conclusion() as usize;
        // sort-and-group on the premise projection; words are already in
        // sorted order, making the first reported pair canonical
        let mut order: Vec<usize> = (0..code.len()).collect();
        order.sort_by(|&a, &b| {
            let pa = premise.iter().map(|&p| code.words[a][p as usize]);
            let pb = premise.iter().map(|&p| code.words[b][p as usize]);
            pa.cmp(pb).then(a.cmp(&b))
        });
        let same_projection = |a: usize, b: usize| {
            premise
                .iter()
                .all(|&p| code.words[a][p as usize] == code.words[b][p as usize])
        };
        let mut group_start = 0;
        for k in 1..=order.len() {
            if k == order.len() || !same_projection(order[group_start], order[k]) {
                let leader = order[group_start];
                for &other in &order[group_start + 1..k] {
                    if code.words[other][target] != code.words[leader][target] {
                        return Ok(Some(Violation {
                            rule: rule.clone(),
                            words: (code.words[leader].clone(), code.words[other].clone()),
                        }));
                    }
                }
                group_start = k;
            }
        }
    }
    Ok(None)
}

/// A code dimension: exact rational when the word count is a perfect
/// rational power of the alphabet size, else a float approximation.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeDimension {
    Exact(Rat),
    Approx(f64),
}

impl CodeDimension {
    pub fn as_f64(&self) -> f64 {
        match self {
            CodeDimension::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            CodeDimension::Approx(x) => *x,
        }
    }
}

impl std::fmt::Display for CodeDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CodeDimension::Exact(r) => write!(f, "{}", crate::lp::format_rat(r)),
            CodeDimension::Approx(x) => write!(f, "{x:.6}"),
        }
    }
}

fn prime_factorize(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= v {
        if v.is_multiple_of(p) {
            let mut e = 0;
            while v.is_multiple_of(p) {
                v /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

/// log_s(|words|): exact p/q whenever |words|^q = s^p for integers p, q,
/// else an f64 approximation.
pub fn code_dimension(code: &Code) -> Result<CodeDimension> {
    let count = code.len() as u64;
    if count == 1 {
        return Ok(CodeDimension::Exact(Rat::zero()));
    }
    if code.alphabet_size() < 2 {
        return Err(Error::InvalidCode(
            "dimension needs an alphabet of size at least 2 (or a singleton code)".into(),
        ));
    }
    let fc = prime_factorize(count);
    let fs = prime_factorize(code.alphabet_size() as u64);
    if fc.len() == fs.len() && fc.iter().zip(&fs).all(|(a, b)| a.0 == b.0) {
        // same prime support; exact iff all exponent ratios agree
        let (b0, a0) = (fc[0].1 as i64, fs[0].1 as i64);
        if fc
            .iter()
            .zip(&fs)
            .all(|(c, s)| c.1 as i64 * a0 == s.1 as i64 * b0)
        {
            return Ok(CodeDimension::Exact(Rat::new(b0.into(), a0.into())));
        }
    }
    Ok(CodeDimension::Approx(
        (count as f64).ln() / (code.alphabet_size() as f64).ln(),
    ))
}

/// Packs a union-style representation into codewords: one index bit per
/// universe member, each coordinate reading off its set's bits (ascending
/// member order) padded with zeros up to `ell` bits per symbol.
fn pack_code(universe: usize, ell: u32, sets: &[Vec<usize>]) -> Result<Code> {
    if universe > MATERIALIZE_UNIVERSE_MAX {
        return Err(Error::Capacity {
            what: "code materialization",
            n: universe,
            cap: MATERIALIZE_UNIVERSE_MAX,
            max: MATERIALIZE_UNIVERSE_MAX,
        });
    }
    if ell >= 32 {
        return Err(Error::InvalidCode(format!(
            "symbol width {ell} exceeds the 31-bit materialization limit"
        )));
    }
    for (i, set) in sets.iter().enumerate() {
        if set.len() > ell as usize {
            return Err(Error::InvalidCode(format!(
                "set {i} has {} members, exceeding symbol width {ell}",
                set.len()
            )));
        }
        debug_assert!(set.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(set.iter().all(|&u| u < universe));
    }
    let s = 1u32 << ell;
    let mut words = Vec::with_capacity(1usize << universe);
    for x in 0u64..1 << universe {
        let word = sets
            .iter()
            .map(|set| {
                set.iter()
                    .enumerate()
                    .map(|(k, &u)| (((x >> u) & 1) as u32) << k)
                    .sum()
            })
            .collect();
        words.push(word);
    }
    Code::new(sets.len(), s, words)
}

/// Builds the 2^|U|-word code of a union representation: symbols are
/// ell-bit blocks, coordinate i reading the index bits of S_i.
pub fn code_from_union_representation(rep: &SetRepresentation, ell: u32) -> Result<Code> {
    if rep.flavor() != Flavor::Union {
        return Err(Error::InvalidCode(
            "code construction needs a union-flavor representation".into(),
        ));
    }
    let sets: Vec<Vec<usize>> = rep
        .sets()
        .iter()
        .map(|s| s.iter().map(|u| u as usize).collect())
        .collect();
    pack_code(rep.universe(), ell, &sets)
}

/// The covering-LP code, kept symbolic: universe H is the multiset of
/// minimal opens weighted by the scaled dual multipliers, coordinate sets
/// collect the members containing each element, and symbols are ell-bit
/// blocks. The dimension |H|/ell equals the covering LP value exactly.
#[derive(Clone, Debug)]
pub struct CoverCodePlan {
    universe: usize,
    ell: u32,
    sets: Vec<Vec<usize>>,
    dimension: Rat,
}

impl CoverCodePlan {
    pub fn universe_size(&self) -> usize {
        self.universe
    }

    /// bits per symbol; the alphabet is 2^ell
    pub fn symbol_width(&self) -> u32 {
        self.ell
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn dimension(&self) -> &Rat {
        &self.dimension
    }

    /// Expands the plan into explicit words; capacity-limited.
    pub fn materialize(&self) -> Result<Code> {
        pack_code(self.universe, self.ell, &self.sets)
    }
}

pub(crate) fn plan_from_multiset(n: usize, weighted_opens: &[(u64, u64)], ell: u64) -> CoverCodePlan {
    // one universe slot per multiset copy, opens in ascending mask order
    let mut sets = vec![Vec::new(); n];
    let mut slot = 0usize;
    for &(mask, mult) in weighted_opens {
        for _ in 0..mult {
            for (i, set) in sets.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    set.push(slot);
                }
            }
            slot += 1;
        }
    }
    let ell_u32 = u32::try_from(ell).unwrap_or(u32::MAX);
    CoverCodePlan {
        universe: slot,
        ell: ell_u32,
        sets,
        dimension: Rat::new(BigInt::from(slot), BigInt::from(ell)),
    }
}

/// [`plan_from_multiset`] for grounds wider than a machine word: opens
/// arrive as subsets with integer multiplicities, in caller order.
pub(crate) fn plan_from_weighted_subsets(
    n: usize,
    weighted_opens: &[(crate::subset::Subset, u64)],
    ell: u64,
) -> CoverCodePlan {
    let mut sets = vec![Vec::new(); n];
    let mut slot = 0usize;
    for (open, mult) in weighted_opens {
        for _ in 0..*mult {
            for i in open.iter() {
                sets[i as usize].push(slot);
            }
            slot += 1;
        }
    }
    let ell_u32 = u32::try_from(ell).unwrap_or(u32::MAX);
    CoverCodePlan {
        universe: slot,
        ell: ell_u32,
        sets,
        dimension: Rat::new(BigInt::from(slot), BigInt::from(ell)),
    }
}

/// Scales the optimal dual multipliers to integers and lays out the
/// weighted multiset of minimal opens as a symbolic code plan whose
/// dimension is exactly lp_cover(sp).
pub fn build_cover_plan(sp: &Spanoid) -> Result<CoverCodePlan> {
    let dual = lp_cover_dual(sp)?;
    let mut ell = BigInt::one();
    for (_, lambda) in &dual.multipliers {
        ell = ell.lcm(lambda.denom());
    }
    let ell_int = ell.to_u64().ok_or_else(|| {
        Error::InvalidCode("dual denominators overflow the symbol width".into())
    })?;
    let weighted: Vec<(u64, u64)> = dual
        .multipliers
        .iter()
        .filter(|(_, lambda)| lambda.is_positive())
        .map(|(mask, lambda)| {
            let copies = (lambda * Rat::from(ell.clone()))
                .to_integer()
                .to_u64()
                .expect("scaled multiplier is a small integer");
            (*mask, copies)
        })
        .collect();
    let plan = plan_from_multiset(sp.ground_size(), &weighted, ell_int.max(1));
    debug_assert_eq!(plan.dimension, lp_cover(sp)?);
    Ok(plan)
}

/// Materialized covering-LP code; see [`build_cover_plan`].
pub fn build_cover_code(sp: &Spanoid) -> Result<Code> {
    build_cover_plan(sp)?.materialize()
}

/// Bernoulli trial with exact rational probability.
fn rational_bernoulli(rng: &mut ChaCha12Rng, p: &Rat) -> bool {
    if p.is_negative() || Zero::is_zero(p) {
        return false;
    }
    if p >= &Rat::one() {
        return true;
    }
    let draw: u64 = rng.gen();
    BigInt::from(draw) * p.denom() < p.numer() << 64
}

/// Samples a sub-multiset H of the minimal opens (each kept independently
/// with its dual probability), retrying until |H| is at least half the
/// covering value and no element appears in more than ceil(e ln n / ln ln n)
/// members; the induced code then has dimension at least |H|/Delta(H)
/// over the much smaller alphabet 2^Delta(H).
pub fn sample_small_alphabet_code(sp: &Spanoid, seed: u64, retries: u32) -> Result<Code> {
    if retries == 0 {
        return Err(Error::RangeViolation {
            what: "sampling retries",
            value: 0,
            min: 1,
            max: u32::MAX as usize,
        });
    }
    let n = sp.ground_size();
    let dual = lp_cover_dual(sp)?;
    let delta_cap: usize = if n >= 3 {
        let x = std::f64::consts::E * (n as f64).ln() / (n as f64).ln().ln();
        x.ceil() as usize
    } else {
        usize::MAX
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best: Option<(usize, usize)> = None;
    for _ in 0..retries {
        let kept: Vec<u64> = dual
            .multipliers
            .iter()
            .filter(|(_, lambda)| rational_bernoulli(&mut rng, lambda))
            .map(|(mask, _)| *mask)
            .collect();
        let delta = (0..n)
            .map(|i| kept.iter().filter(|&&m| m >> i & 1 == 1).count())
            .max()
            .unwrap_or(0);
        // |H| >= lp_cover / 2, compared exactly: 2 |H| den >= num
        let big_enough =
            BigInt::from(2 * kept.len()) * dual.optimum.denom() >= dual.optimum.numer().clone();
        let spread_enough = delta <= delta_cap;
        if big_enough && spread_enough {
            let weighted: Vec<(u64, u64)> = kept.iter().map(|&m| (m, 1)).collect();
            let plan = plan_from_multiset(n, &weighted, delta.max(1) as u64);
            return plan.materialize();
        }
        let better = match best {
            None => true,
            Some((bh, _)) => kept.len() > bh,
        };
        if better {
            best = Some((kept.len(), delta));
        }
    }
    let (bh, bd) = best.unwrap_or((0, 0));
    Err(Error::RetriesExhausted {
        what: "small-alphabet code sampling",
        attempts: retries,
        detail: format!("best |H| = {bh} with max multiplicity {bd}"),
    })
}

/// floor(s^(p/q)) exactly: the largest m with m^q <= s^p.
fn floor_alphabet_power(s: u32, exponent: &Rat) -> BigInt {
    let p = exponent.numer().to_u32().expect("small exponent");
    let q = exponent.denom().to_u32().expect("small exponent");
    let target = BigInt::from(s).pow(p);
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(s).pow(p.div_ceil(q).max(1));
    while lo < hi {
        let mid: BigInt = (&lo + &hi + 1) / 2;
        if mid.pow(q) <= target {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Exhaustive maximum consistent code over alphabet size s, as a
/// branch-and-bound clique search over the word-compatibility graph.
/// Cardinality is certified maximal, either by exhausting the search or
/// by meeting the entropy-LP ceiling floor(s^lp_entropy).
pub fn max_consistent_code(sp: &Spanoid, s: u32, node_budget: u64) -> Result<Code> {
    let n = sp.ground_size();
    if s == 0 {
        return Err(Error::InvalidCode("alphabet size must be at least 1".into()));
    }
    if s == 1 {
        return Code::new(n, 1, vec![vec![0; n]]);
    }
    let vertex_count = (s as u64).checked_pow(n as u32).and_then(|v| v.to_usize());
    let num_words = match vertex_count {
        Some(v) if v <= MAX_CODE_VERTICES => v,
        _ => {
            return Err(Error::RangeViolation {
                what: "maximum-code search space s^n",
                value: vertex_count.unwrap_or(usize::MAX),
                min: 1,
                max: MAX_CODE_VERTICES,
            })
        }
    };
    let words: Vec<Vec<u32>> = (0..num_words)
        .map(|mut idx| {
            let mut w = vec![0u32; n];
            for slot in (0..n).rev() {
                w[slot] = (idx % s as usize) as u32;
                idx /= s as usize;
            }
            w
        })
        .collect();
    let rules: Vec<(Vec<usize>, usize)> = sp
        .rules()
        .iter()
        .filter(|r| !r.is_vacuous())
        .map(|r| {
            (
                r.premise().iter().map(|&p| p as usize).collect(),
                r.conclusion() as usize,
            )
        })
        .collect();
    let compatible = |a: &[u32], b: &[u32]| {
        rules.iter().all(|(premise, target)| {
            a[*target] == b[*target] || premise.iter().any(|&p| a[p] != b[p])
        })
    };
    // Per-coordinate symbol bijections preserve consistency, so some
    // maximum code contains the all-zero word; search only its
    // compatibility neighborhood.
    let candidates: Vec<usize> = (1..num_words)
        .filter(|&v| compatible(&words[0], &words[v]))
        .collect();
    let adjacency: Vec<Vec<bool>> = candidates
        .iter()
        .map(|&a| {
            candidates
                .iter()
                .map(|&b| a != b && compatible(&words[a], &words[b]))
                .collect()
        })
        .collect();
    // entropy ceiling: |C| <= s^lp_entropy
    let (entropy, _) = lp_entropy(sp, EntropyMode::Elemental)?;
    let ceiling = floor_alphabet_power(s, &entropy)
        .to_usize()
        .unwrap_or(usize::MAX);
    // greedy incumbent over the neighborhood
    let mut incumbent: Vec<usize> = Vec::new();
    for (c, _) in candidates.iter().enumerate() {
        if incumbent.iter().all(|&g| adjacency[g][c]) {
            incumbent.push(c);
        }
    }
    // The covering-LP code stays consistent over any alphabet at least as
    // large, contains the zero word, and often meets the entropy ceiling
    // outright, closing the search before it starts.
    if let Some(words_of_cover) = cover_incumbent(sp, s, n) {
        let mapped: Option<Vec<usize>> = words_of_cover
            .iter()
            .filter(|w| w.iter().any(|&sym| sym != 0))
            .map(|w| {
                let idx = w.iter().fold(0usize, |acc, &sym| acc * s as usize + sym as usize);
                candidates.binary_search(&idx).ok()
            })
            .collect();
        if let Some(mapped) = mapped {
            if mapped.len() > incumbent.len() {
                incumbent = mapped;
            }
        }
    }
    let mut search = CliqueSearch {
        adjacency: &adjacency,
        best: incumbent,
        nodes: 0,
        budget: node_budget,
        ceiling: ceiling.saturating_sub(1), // excluding the zero word
    };
    let all: Vec<usize> = (0..candidates.len()).collect();
    if search.best.len() < search.ceiling {
        search
            .expand(&mut Vec::new(), all)
            .map_err(|()| Error::Budget {
                what: "maximum-code search",
                budget: node_budget,
                lower: search.best.len() + 1,
                upper: ceiling,
            })?;
    }
    let mut chosen: Vec<Vec<u32>> = vec![words[0].clone()];
    chosen.extend(search.best.iter().map(|&c| words[candidates[c]].clone()));
    let code = Code::new(n, s, chosen)?;
    debug_assert!(check_consistent(sp, &code)?.is_none());
    Ok(code)
}

fn cover_incumbent(sp: &Spanoid, s: u32, n: usize) -> Option<Vec<Vec<u32>>> {
    let plan = build_cover_plan(sp).ok()?;
    if plan.universe_size() > MATERIALIZE_UNIVERSE_MAX || plan.symbol_width() >= 32 {
        return None;
    }
    if u64::from(s) < 1u64 << plan.symbol_width() {
        return None;
    }
    let code = plan.materialize().ok()?;
    if code.word_length() != n {
        return None;
    }
    Some(code.words().to_vec())
}

struct CliqueSearch<'a> {
    adjacency: &'a [Vec<bool>],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    /// stop as soon as a clique reaches this size
    ceiling: usize,
}

impl CliqueSearch<'_> {
    fn expand(
        &mut self,
        clique: &mut Vec<usize>,
        candidates: Vec<usize>,
    ) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        if self.best.len() >= self.ceiling {
            return Ok(());
        }
        for (k, &v) in candidates.iter().enumerate() {
            if clique.len() + (candidates.len() - k) <= self.best.len() {
                return Ok(());
            }
            let rest: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|&u| self.adjacency[v][u])
                .collect();
            clique.push(v);
            self.expand(clique, rest)?;
            clique.pop();
            if self.best.len() >= self.ceiling {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// The rank certificate floor: every consistent code has at most
/// s^lp_entropy words; used by tests and kept here with the search.
pub fn entropy_word_ceiling(sp: &Spanoid, s: u32) -> Result<BigInt> {
    let (entropy, _) = lp_entropy(sp, EntropyMode::Elemental)?;
    Ok(floor_alphabet_power(s, &entropy))
}

/// Convenience: ceil of lp_cover as a starting size for spanning-set
/// searches seeded from code constructions.
pub fn cover_ceiling(sp: &Spanoid) -> Result<usize> {
    Ok(rat_ceil(&lp_cover(sp)?))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lp::rat;
    use crate::spanoid::tests::pentagon;
    use crate::subset::Subset;

    /// The explicit pentagon code: coordinate i reads the bits at
    /// positions i+3 and i+1 (mod 5) of a 5-bit index.
    pub(crate) fn pentagon_code() -> Code {
        let words = (0u64..32)
            .map(|x| {
                (0..5)
                    .map(|i| {
                        let low = (x >> ((i + 3) % 5)) & 1;
                        let high = (x >> ((i + 1) % 5)) & 1;
                        (low | high << 1) as u32
                    })
                    .collect()
            })
            .collect();
        Code::new(5, 4, words).unwrap()
    }

    #[test]
    fn pentagon_code_is_consistent_with_dimension_five_halves() {
        let code = pentagon_code();
        assert_eq!(code.len(), 32);
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
        assert_eq!(
            code_dimension(&code).unwrap(),
            CodeDimension::Exact(rat(5, 2))
        );
    }

    #[test]
    fn full_binary_code_violates_the_first_pentagon_rule() {
        let words: Vec<Vec<u32>> = (0u32..32)
            .map(|x| (0..5).map(|i| (x >> i) & 1).collect())
            .collect();
        let code = Code::new(5, 2, words).unwrap();
        let violation = check_consistent(&pentagon(), &code).unwrap().unwrap();
        assert_eq!(violation.rule.premise(), &[0, 1]);
        assert_eq!(violation.rule.conclusion(), 3);
        let (a, b) = violation.words;
        assert_eq!(a[0], b[0]);
        assert_eq!(a[1], b[1]);
        assert_ne!(a[3], b[3]);
    }

    #[test]
    fn constant_code_is_always_consistent() {
        let code = Code::new(5, 3, vec![vec![2; 5]]).unwrap();
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
        assert_eq!(
            code_dimension(&code).unwrap(),
            CodeDimension::Exact(Rat::zero())
        );
    }

    #[test]
    fn dimension_exact_and_approximate_cases() {
        let word = |k: u32| vec![k];
        let c8 = Code::new(1, 2, vec![vec![0], vec![1]]).unwrap();
        assert_eq!(code_dimension(&c8).unwrap(), CodeDimension::Exact(rat(1, 1)));
        let c3of10 = Code::new(1, 10, (0..3).map(word).collect()).unwrap();
        match code_dimension(&c3of10).unwrap() {
            CodeDimension::Approx(x) => assert!((x - 3f64.ln() / 10f64.ln()).abs() < 1e-12),
            other => panic!("expected approximation, got {other:?}"),
        }
        // 8 words over s=4: same support, exponents 3 vs 2 -> 3/2 exact
        let c8of4 = Code::new(2, 4, (0..8).map(|k| vec![k / 4, k % 4]).collect()).unwrap();
        assert_eq!(
            code_dimension(&c8of4).unwrap(),
            CodeDimension::Exact(rat(3, 2))
        );
    }

    #[test]
    fn code_validation_rejects_bad_input() {
        assert!(Code::new(2, 2, vec![vec![0]]).is_err());
        assert!(Code::new(1, 2, vec![vec![2]]).is_err());
        assert!(Code::new(1, 2, vec![vec![0], vec![0]]).is_err());
        assert!(Code::new(1, 2, vec![]).is_err());
        assert!(Code::new(1, 0, vec![vec![0]]).is_err());
    }

    #[test]
    fn union_representation_code_matches_windows() {
        // pentagon window sets: S_i = {i+3 mod 5, i+1 mod 5}
        let sets: Vec<Subset> = (0..5)
            .map(|i| Subset::from_elems(5, &[(i + 3) % 5, (i + 1) % 5]))
            .collect();
        let rep = SetRepresentation::new(5, sets, Flavor::Union).unwrap();
        let code = code_from_union_representation(&rep, 2).unwrap();
        assert_eq!(code.len(), 32);
        assert_eq!(code.alphabet_size(), 4);
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
        assert_eq!(
            code_dimension(&code).unwrap(),
            CodeDimension::Exact(rat(5, 2))
        );
    }

    #[test]
    fn union_representation_rejects_oversized_sets() {
        let sets = vec![Subset::from_elems(3, &[0, 1, 2]), Subset::from_elems(3, &[0])];
        let rep = SetRepresentation::new(3, sets, Flavor::Union).unwrap();
        match code_from_union_representation(&rep, 2) {
            Err(Error::InvalidCode(msg)) => assert!(msg.contains("set 0")),
            other => panic!("expected invalid code, got {other:?}"),
        }
    }

    #[test]
    fn single_full_set_gives_repetition_style_code() {
        let rep = SetRepresentation::new(
            3,
            vec![Subset::full(3)],
            Flavor::Union,
        )
        .unwrap();
        let code = code_from_union_representation(&rep, 3).unwrap();
        assert_eq!(code.len(), 8);
        assert_eq!(
            code_dimension(&code).unwrap(),
            CodeDimension::Exact(rat(1, 1))
        );
    }

    #[test]
    fn cover_code_dimension_equals_cover_value() {
        for sp in [
            pentagon(),
            Spanoid::rule_free(2),
            crate::cover::tests::xu_spanoid(),
        ] {
            let plan = build_cover_plan(&sp).unwrap();
            assert_eq!(plan.dimension(), &lp_cover(&sp).unwrap());
            let code = plan.materialize().unwrap();
            assert_eq!(check_consistent(&sp, &code).unwrap(), None);
            assert_eq!(
                code_dimension(&code).unwrap(),
                CodeDimension::Exact(lp_cover(&sp).unwrap())
            );
        }
    }

    #[test]
    fn pentagon_cover_code_is_the_32_word_code() {
        let code = build_cover_code(&pentagon()).unwrap();
        assert_eq!(code.len(), 32);
        assert_eq!(code.alphabet_size(), 4);
        assert_eq!(code.word_length(), 5);
    }

    #[test]
    fn sampled_code_meets_its_bounds() {
        let code = sample_small_alphabet_code(&pentagon(), 1, 64).unwrap();
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
        // the packing is injective, so |H| = log2(word count); the sampler
        // guarantees |H| >= lp_cover / 2 = 5/4, i.e. at least 2
        assert!(code.len().is_power_of_two());
        let kept = code.len().trailing_zeros();
        assert!(kept >= 2, "kept only {kept} opens");
        assert!(code.alphabet_size() <= 1 << 10);
    }

    #[test]
    fn sampling_single_forced_open() {
        // one minimal open {0,1} with lambda = 1: H is forced, Delta = 1
        let sp = Spanoid::new(2, vec![Rule::new(vec![0], 1), Rule::new(vec![1], 0)]).unwrap();
        let code = sample_small_alphabet_code(&sp, 7, 8).unwrap();
        assert_eq!(code.len(), 2);
        assert_eq!(check_consistent(&sp, &code).unwrap(), None);
    }

    #[test]
    fn sampling_rule_free_reaches_half_dimension() {
        let code = sample_small_alphabet_code(&Spanoid::rule_free(4), 3, 64).unwrap();
        assert!(code_dimension(&code).unwrap().as_f64() >= 2.0 - 1e-9);
    }

    #[test]
    fn max_code_pentagon_over_four_symbols_is_32() {
        let code = max_consistent_code(&pentagon(), 4, 50_000_000).unwrap();
        assert_eq!(code.len(), 32);
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
    }

    #[test]
    fn max_code_binary_pentagon_within_entropy_ceiling() {
        let code = max_consistent_code(&pentagon(), 2, 50_000_000).unwrap();
        let ceiling = entropy_word_ceiling(&pentagon(), 2).unwrap();
        assert!(BigInt::from(code.len()) <= ceiling);
        assert!(code.len() >= 2);
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
    }

    #[test]
    fn max_code_single_symbol() {
        let code = max_consistent_code(&pentagon(), 1, 1000).unwrap();
        assert_eq!(code.len(), 1);
    }

    #[test]
    fn max_code_monotone_in_alphabet() {
        let sp = crate::cover::tests::xu_spanoid();
        let mut prev = 0;
        for s in 1..=3 {
            let size = max_consistent_code(&sp, s, 50_000_000).unwrap().len();
            assert!(size >= prev);
            prev = size;
        }
    }
}
