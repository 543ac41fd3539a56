//! Products of spanoids over paired ground sets.
//!
//! Three constructions combine factors over X1 and X2 into a spanoid on
//! X1 x X2 (flattened row-major: (i, j) maps to i*n2 + j). The dot
//! product is defined by its open sets, the unions of rectangles A x B
//! with A open on the left and B open on the right; the tensor and
//! semidirect products instantiate rule schemata: both lift a right
//! rule B derives j to {i} x B derives (i, j) for every i, while a left
//! rule A derives i becomes A x {j} derives (i, j) under tensor and
//! A x X2 derives (i, j) under semidirect. Schemata range over stored
//! factor rules only; generated closure makes this span-equivalent to
//! ranging over all derived inferences, which the tests re-verify
//! exhaustively on small factors.
//!
//! The dot product's minimal opens are exactly the rectangles of factor
//! minimal opens, which makes its covering LP multiplicative. For the
//! semidirect product, sets of the form union over i in A of {i} x B_i
//! (A open left, each B_i open right) have closed complements: a lifted
//! left rule fitting inside the complement keeps its premise out of all
//! the chosen columns, so its conclusion stays outside A; a lifted
//! right rule inside column i of A has its premise disjoint from B_i,
//! so its conclusion avoids B_i. Tensoring covering duals along this
//! structure keeps the covering value multiplicative at any power, and
//! [`semidirect_power`] carries the scaled dual along as a certificate.

use crate::cover::{cover_value_of_opens, lp_cover_dual};
use crate::error::{Error, Result};
use crate::family::{SetFamily, FAMILY_GROUND_MAX};
use crate::lp::Rat;
use crate::spanoid::{Rule, Spanoid};
use crate::subset::Subset;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Ceiling on flattened product ground sizes.
pub const PRODUCT_GROUND_MAX: usize = 1 << 20;

/// Ceiling on the open-family size during dot-product construction.
pub const DOT_FAMILY_CAP: usize = 1 << 12;

/// Ceiling on tensored covering-dual entries.
pub const DUAL_TENSOR_CAP: usize = 1 << 18;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductKind {
    Dot,
    Tensor,
    Semidirect,
}

impl ProductKind {
    pub fn name(self) -> &'static str {
        match self {
            ProductKind::Dot => "dot",
            ProductKind::Tensor => "tensor",
            ProductKind::Semidirect => "semidirect",
        }
    }
}

/// A product spanoid together with its factors and index layout.
#[derive(Clone, Debug)]
pub struct ProductSpanoid {
    kind: ProductKind,
    left: Spanoid,
    right: Spanoid,
    base: Spanoid,
}

impl ProductSpanoid {
    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    pub fn left(&self) -> &Spanoid {
        &self.left
    }

    pub fn right(&self) -> &Spanoid {
        &self.right
    }

    pub fn spanoid(&self) -> &Spanoid {
        &self.base
    }

    pub fn into_spanoid(self) -> Spanoid {
        self.base
    }

    /// Row-major flattening of a factor pair.
    pub fn flatten(&self, i: u32, j: u32) -> u32 {
        assert!((i as usize) < self.left.ground_size());
        assert!((j as usize) < self.right.ground_size());
        i * self.right.ground_size() as u32 + j
    }

    pub fn unflatten(&self, e: u32) -> (u32, u32) {
        assert!((e as usize) < self.base.ground_size());
        let n2 = self.right.ground_size() as u32;
        (e / n2, e % n2)
    }
}

pub fn product(kind: ProductKind, s1: &Spanoid, s2: &Spanoid) -> Result<ProductSpanoid> {
    match kind {
        ProductKind::Dot => product_dot(s1, s2),
        ProductKind::Tensor => product_tensor(s1, s2),
        ProductKind::Semidirect => product_semidirect(s1, s2),
    }
}

fn check_product_size(n1: usize, n2: usize) -> Result<usize> {
    let n = n1.checked_mul(n2).unwrap_or(usize::MAX);
    if n > PRODUCT_GROUND_MAX {
        return Err(Error::RangeViolation {
            what: "product ground size",
            value: n,
            min: 0,
            max: PRODUCT_GROUND_MAX,
        });
    }
    Ok(n)
}

fn flatten_at(n2: usize, i: u32, j: u32) -> u32 {
    i * n2 as u32 + j
}

/// Instantiates both rule schemata over the stored factor rules. Left
/// premises cover whole columns (A x X2) for the semidirect product and
/// single columns (A x {j}) for the tensor product.
fn schema_rules(s1: &Spanoid, s2: &Spanoid, whole_column: bool) -> Vec<Rule> {
    let n1 = s1.ground_size();
    let n2 = s2.ground_size();
    let mut rules = Vec::new();
    for rule in s1.rules() {
        for j in 0..n2 as u32 {
            let premise: Vec<u32> = if whole_column {
                rule.premise()
                    .iter()
                    .flat_map(|&a| (0..n2 as u32).map(move |y| flatten_at(n2, a, y)))
                    .collect()
            } else {
                rule.premise()
                    .iter()
                    .map(|&a| flatten_at(n2, a, j))
                    .collect()
            };
            rules.push(Rule::new(premise, flatten_at(n2, rule.conclusion(), j)));
        }
    }
    for rule in s2.rules() {
        for i in 0..n1 as u32 {
            let premise: Vec<u32> = rule
                .premise()
                .iter()
                .map(|&b| flatten_at(n2, i, b))
                .collect();
            rules.push(Rule::new(premise, flatten_at(n2, i, rule.conclusion())));
        }
    }
    rules
}

pub fn product_semidirect(s1: &Spanoid, s2: &Spanoid) -> Result<ProductSpanoid> {
    let n = check_product_size(s1.ground_size(), s2.ground_size())?;
    let base = Spanoid::new(n, schema_rules(s1, s2, true))?;
    Ok(ProductSpanoid {
        kind: ProductKind::Semidirect,
        left: s1.clone(),
        right: s2.clone(),
        base,
    })
}

pub fn product_tensor(s1: &Spanoid, s2: &Spanoid) -> Result<ProductSpanoid> {
    let n = check_product_size(s1.ground_size(), s2.ground_size())?;
    let base = Spanoid::new(n, schema_rules(s1, s2, false))?;
    Ok(ProductSpanoid {
        kind: ProductKind::Tensor,
        left: s1.clone(),
        right: s2.clone(),
        base,
    })
}

/// The mask of A x B under row-major flattening.
fn rectangle_mask(n2: usize, a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        out |= b << (i as usize * n2);
        rest &= rest - 1;
    }
    out
}

fn union_closure(seeds: BTreeSet<u64>, cap: usize) -> Result<BTreeSet<u64>> {
    // every union of seeds is reachable by adjoining one seed at a time,
    // so closing against the seeds alone closes the whole family
    let generators: Vec<u64> = seeds.iter().copied().collect();
    let mut family = seeds;
    let mut frontier: Vec<u64> = family.iter().copied().collect();
    while let Some(next) = frontier.pop() {
        for &s in &generators {
            let u = next | s;
            if family.insert(u) {
                frontier.push(u);
            }
        }
        if family.len() > cap {
            return Err(Error::Capacity {
                what: "dot-product open family",
                n: family.len(),
                cap,
                max: cap,
            });
        }
    }
    Ok(family)
}

/// Builds the dot product from its defining open family: all unions of
/// rectangles of factor opens, synthesized back into rules through the
/// complement (closed) family.
pub fn product_dot(s1: &Spanoid, s2: &Spanoid) -> Result<ProductSpanoid> {
    let n = check_product_size(s1.ground_size(), s2.ground_size())?;
    if n > crate::spanoid::ENUM_BOUND_MAX {
        return Err(Error::Capacity {
            what: "dot-product construction",
            n,
            cap: crate::spanoid::ENUM_BOUND_MAX,
            max: crate::spanoid::ENUM_BOUND_MAX,
        });
    }
    let o1 = s1.open_sets()?;
    let o2 = s2.open_sets()?;
    let n2 = s2.ground_size();
    let mut seeds = BTreeSet::new();
    seeds.insert(0u64); // the empty union keeps the full set closed
    for &a in o1.masks() {
        for &b in o2.masks() {
            seeds.insert(rectangle_mask(n2, a, b));
        }
    }
    let opens = union_closure(seeds, DOT_FAMILY_CAP)?;
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let closed: Vec<u64> = opens.iter().map(|&m| full & !m).collect();
    let base = Spanoid::from_closed_family(&SetFamily::from_masks(n, closed))?;
    Ok(ProductSpanoid {
        kind: ProductKind::Dot,
        left: s1.clone(),
        right: s2.clone(),
        base,
    })
}

/// Structural minimal opens of the dot product: rectangles of factor
/// minimal opens. Matches enumeration wherever both are feasible.
pub fn dot_minimal_opens(s1: &Spanoid, s2: &Spanoid) -> Result<SetFamily> {
    let n = check_product_size(s1.ground_size(), s2.ground_size())?;
    if n > FAMILY_GROUND_MAX {
        return Err(Error::RangeViolation {
            what: "structural dot-open ground size",
            value: n,
            min: 0,
            max: FAMILY_GROUND_MAX,
        });
    }
    let masks = dot_minimal_open_masks(s1, s2)?;
    Ok(SetFamily::from_masks(n, masks))
}

fn dot_minimal_open_masks(s1: &Spanoid, s2: &Spanoid) -> Result<Vec<u64>> {
    let o1 = s1.minimal_open_sets()?;
    let o2 = s2.minimal_open_sets()?;
    let n2 = s2.ground_size();
    let mut masks = Vec::with_capacity(o1.len() * o2.len());
    for &a in o1.masks() {
        for &b in o2.masks() {
            masks.push(rectangle_mask(n2, a, b));
        }
    }
    Ok(masks)
}

/// Covering LP value of the dot product, computed over the structural
/// minimal opens; exact and multiplicative in the factors.
pub fn lp_cover_dot(s1: &Spanoid, s2: &Spanoid) -> Result<Rat> {
    let n = check_product_size(s1.ground_size(), s2.ground_size())?;
    if n > 64 {
        return Err(Error::RangeViolation {
            what: "dot covering-LP ground size",
            value: n,
            min: 0,
            max: 64,
        });
    }
    let masks = dot_minimal_open_masks(s1, s2)?;
    Ok(cover_value_of_opens(n, &masks))
}

/// A weighted family of open sets: a (scaled) feasible dual of the
/// covering LP, kept as exact rationals over block subsets so it works
/// beyond single-word ground sets.
#[derive(Clone, Debug)]
pub struct WeightedOpens {
    n: usize,
    entries: Vec<(Subset, Rat)>,
}

impl WeightedOpens {
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(Subset, Rat)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all weights: the covering value the dual certifies.
    pub fn total(&self) -> Rat {
        let mut sum = Rat::zero();
        for (_, w) in &self.entries {
            sum += w;
        }
        sum
    }

    /// The largest per-element weight load.
    pub fn max_load(&self) -> Rat {
        let mut loads = vec![Rat::zero(); self.n];
        for (open, w) in &self.entries {
            for e in open.iter() {
                loads[e as usize] += w;
            }
        }
        loads.into_iter().max().unwrap_or_else(Rat::zero)
    }

    /// Dual feasibility: every element carries load at most one.
    pub fn is_feasible(&self) -> bool {
        self.max_load() <= Rat::one()
    }

    /// True when the complement of every member is closed, i.e. every
    /// member really is an open set of `sp`.
    pub fn all_open_in(&self, sp: &Spanoid) -> bool {
        self.entries.iter().all(|(open, _)| {
            let complement = open.complement();
            sp.span(&complement) == complement
        })
    }
}

/// The optimal covering dual of a single spanoid as weighted opens.
pub fn cover_dual_opens(sp: &Spanoid) -> Result<WeightedOpens> {
    let n = sp.ground_size();
    let dual = lp_cover_dual(sp)?;
    let entries = dual
        .multipliers
        .into_iter()
        .filter(|(_, w)| w > &Rat::zero())
        .map(|(mask, w)| (Subset::from_mask(n, mask), w))
        .collect();
    Ok(WeightedOpens { n, entries })
}

/// Tensors a covering dual of the left factor with one of the right
/// factor along the semidirect open structure: each left open A and
/// assignment of a right open B_i to every i in A yields the open
/// union over i of {i} x B_i, weighted
/// w(A) * prod w(B_i) / total(right)^(|A|-1).
///
/// The result sums to total(left) * total(right) and stays feasible:
/// fixing A through i and summing over assignments leaves
/// w(A) * load_right(j), so the load at (i, j) is at most
/// load_left(i) * load_right(j).
pub fn semidirect_dual_tensor(
    left: &WeightedOpens,
    right: &WeightedOpens,
) -> Result<WeightedOpens> {
    let n1 = left.ground_size();
    let n2 = right.ground_size();
    let n = check_product_size(n1, n2)?;
    let right_total = right.total();
    let mut entries = Vec::new();
    for (a, wa) in &left.entries {
        let members: Vec<u32> = a.iter().collect();
        let choices = right.entries.len();
        if choices == 0 {
            // no right opens: the tensored dual is empty
            continue;
        }
        let count = (choices as u64)
            .checked_pow(members.len() as u32)
            .and_then(|c| usize::try_from(c).ok())
            .filter(|c| entries.len() + c <= DUAL_TENSOR_CAP);
        if count.is_none() {
            return Err(Error::Capacity {
                what: "tensored covering dual",
                n: members.len(),
                cap: DUAL_TENSOR_CAP,
                max: DUAL_TENSOR_CAP,
            });
        }
        // scale factor 1 / total^( |A| - 1 )
        let mut divisor = Rat::one();
        for _ in 1..members.len() {
            divisor *= &right_total;
        }
        let mut assignment = vec![0usize; members.len()];
        loop {
            let mut open = Subset::empty(n);
            let mut weight = wa / &divisor;
            for (slot, &i) in members.iter().enumerate() {
                let (b, wb) = &right.entries[assignment[slot]];
                weight *= wb;
                for j in b.iter() {
                    open.insert(flatten_at(n2, i, j));
                }
            }
            entries.push((open, weight));
            // mixed-radix increment over assignments
            let mut slot = 0;
            loop {
                if slot == assignment.len() {
                    break;
                }
                assignment[slot] += 1;
                if assignment[slot] < choices {
                    break;
                }
                assignment[slot] = 0;
                slot += 1;
            }
            if slot == assignment.len() {
                break;
            }
        }
    }
    Ok(WeightedOpens { n, entries })
}

/// A left-associated iterated semidirect power with the tensored
/// covering dual carried along as a certificate.
pub struct SemidirectPower {
    pub spanoid: Spanoid,
    pub dual: WeightedOpens,
}

pub fn semidirect_power(base: &Spanoid, k: u32) -> Result<SemidirectPower> {
    if k == 0 {
        return Err(Error::RangeViolation {
            what: "semidirect power exponent",
            value: 0,
            min: 1,
            max: u32::MAX as usize,
        });
    }
    let mut spanoid = base.clone();
    let mut dual = cover_dual_opens(base)?;
    let base_dual = cover_dual_opens(base)?;
    for _ in 1..k {
        dual = semidirect_dual_tensor(&dual, &base_dual)?;
        spanoid = product_semidirect(&spanoid, base)?.into_spanoid();
    }
    Ok(SemidirectPower { spanoid, dual })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cover::lp_cover;
    use crate::cover::tests::xu_spanoid;
    use crate::entropy::{lp_entropy, EntropyMode};
    use crate::lp::rat;
    use crate::rank::rank;
    use crate::spanoid::tests::pentagon;

    /// Each pair of elements spans the third.
    pub(crate) fn triangle() -> Spanoid {
        Spanoid::new(
            3,
            vec![
                Rule::new(vec![0, 1], 2),
                Rule::new(vec![0, 2], 1),
                Rule::new(vec![1, 2], 0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn flatten_is_row_major() {
        let p = product_semidirect(&pentagon(), &triangle()).unwrap();
        assert_eq!(p.spanoid().ground_size(), 15);
        assert_eq!(p.flatten(0, 0), 0);
        assert_eq!(p.flatten(0, 2), 2);
        assert_eq!(p.flatten(1, 0), 3);
        assert_eq!(p.flatten(4, 2), 14);
        assert_eq!(p.unflatten(14), (4, 2));
        assert_eq!(p.unflatten(3), (1, 0));
    }

    #[test]
    fn semidirect_schema_instantiates_whole_columns() {
        let p = product_semidirect(&pentagon(), &pentagon()).unwrap();
        assert_eq!(p.spanoid().rules().len(), 50);
        // left rule {0,1} -> 3 at column 0: premise {0,1} x X2
        let lifted = Rule::new(vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9], 15);
        assert!(p.spanoid().rules().contains(&lifted));
        // right rule {0,1} -> 3 in row 0
        let lifted = Rule::new(vec![0, 1], 3);
        assert!(p.spanoid().rules().contains(&lifted));
    }

    #[test]
    fn tensor_schema_instantiates_single_columns() {
        let p = product_tensor(&pentagon(), &pentagon()).unwrap();
        assert_eq!(p.spanoid().rules().len(), 50);
        // left rule {0,1} -> 3 at column 2: premise {(0,2),(1,2)}
        let lifted = Rule::new(vec![2, 7], 17);
        assert!(p.spanoid().rules().contains(&lifted));
    }

    #[test]
    fn rule_free_products_are_rule_free() {
        let f = Spanoid::rule_free(2);
        for kind in [ProductKind::Dot, ProductKind::Tensor, ProductKind::Semidirect] {
            let p = product(kind, &f, &f).unwrap();
            assert_eq!(p.spanoid().ground_size(), 4);
            assert!(p.spanoid().rules().is_empty(), "{}", kind.name());
            assert_eq!(rank(p.spanoid()).unwrap().rank, 4);
        }
    }

    #[test]
    fn rank_is_multiplicative_under_semidirect() {
        let corpus: Vec<Spanoid> = vec![
            Spanoid::rule_free(2),
            triangle(),
            xu_spanoid(),
            pentagon(),
        ];
        for s1 in &corpus {
            for s2 in &corpus {
                if s1.ground_size() * s2.ground_size() > 20 {
                    continue;
                }
                let p = product_semidirect(s1, s2).unwrap();
                let r1 = rank(s1).unwrap().rank;
                let r2 = rank(s2).unwrap().rank;
                assert_eq!(rank(p.spanoid()).unwrap().rank, r1 * r2);
            }
        }
    }

    #[test]
    fn xu_semidirect_xu_has_rank_four() {
        let p = product_semidirect(&xu_spanoid(), &xu_spanoid()).unwrap();
        assert_eq!(rank(p.spanoid()).unwrap().rank, 4);
    }

    #[test]
    fn xu_tensor_xu_is_spanned_by_the_known_triple() {
        let p = product_tensor(&xu_spanoid(), &xu_spanoid()).unwrap();
        let triple = [p.flatten(0, 0), p.flatten(1, 2), p.flatten(2, 1)];
        let span = p.spanoid().span_of(&triple).unwrap();
        assert!(span.is_full());
        assert!(rank(p.spanoid()).unwrap().rank <= 3);
    }

    #[test]
    fn pentagon_tensor_pentagon_has_a_small_spanning_set() {
        let p = product_tensor(&pentagon(), &pentagon()).unwrap();
        let set: Vec<u32> = [
            (0, 0),
            (0, 1),
            (1, 0),
            (1, 1),
            (2, 2),
            (2, 3),
            (3, 2),
            (4, 4),
        ]
        .iter()
        .map(|&(i, j)| p.flatten(i, j))
        .collect();
        assert!(p.spanoid().span_of(&set).unwrap().is_full());
    }

    #[test]
    fn dot_minimal_opens_match_enumeration() {
        let pairs = [
            (Spanoid::rule_free(2), xu_spanoid()),
            (triangle(), triangle()),
            (xu_spanoid(), xu_spanoid()),
        ];
        for (s1, s2) in &pairs {
            let p = product_dot(s1, s2).unwrap();
            let enumerated = p.spanoid().minimal_open_sets().unwrap();
            let structural = dot_minimal_opens(s1, s2).unwrap();
            assert_eq!(enumerated, structural);
        }
    }

    #[test]
    fn lp_cover_is_multiplicative_under_dot() {
        let corpus: Vec<Spanoid> = vec![
            Spanoid::rule_free(2),
            triangle(),
            xu_spanoid(),
            pentagon(),
        ];
        for s1 in &corpus {
            for s2 in &corpus {
                let product_value = lp_cover_dot(s1, s2).unwrap();
                let expected = lp_cover(s1).unwrap() * lp_cover(s2).unwrap();
                assert_eq!(product_value, expected);
            }
        }
        assert_eq!(lp_cover_dot(&pentagon(), &pentagon()).unwrap(), rat(25, 4));
    }

    #[test]
    fn lp_cover_of_constructed_dot_matches_structural_value() {
        let pairs = [
            (Spanoid::rule_free(2), xu_spanoid()),
            (triangle(), triangle()),
            (xu_spanoid(), xu_spanoid()),
        ];
        for (s1, s2) in &pairs {
            let p = product_dot(s1, s2).unwrap();
            assert_eq!(
                lp_cover(p.spanoid()).unwrap(),
                lp_cover_dot(s1, s2).unwrap()
            );
        }
    }

    #[test]
    fn open_families_nest_across_the_three_kinds() {
        let s = xu_spanoid();
        let dot = product_dot(&s, &s).unwrap();
        let tensor = product_tensor(&s, &s).unwrap();
        let semi = product_semidirect(&s, &s).unwrap();
        let open_masks = |sp: &Spanoid| -> BTreeSet<u64> {
            sp.open_sets().unwrap().masks().iter().copied().collect()
        };
        let o_dot = open_masks(dot.spanoid());
        let o_tensor = open_masks(tensor.spanoid());
        let o_semi = open_masks(semi.spanoid());
        assert!(o_dot.is_subset(&o_tensor));
        assert!(o_tensor.is_subset(&o_semi));
        assert!(o_dot.len() < o_semi.len());
    }

    #[test]
    fn measures_are_ordered_across_the_three_kinds() {
        let pairs = [
            (Spanoid::rule_free(2), xu_spanoid()),
            (triangle(), triangle()),
            (Spanoid::rule_free(2), triangle()),
        ];
        for (s1, s2) in &pairs {
            let dot = product_dot(s1, s2).unwrap();
            let tensor = product_tensor(s1, s2).unwrap();
            let semi = product_semidirect(s1, s2).unwrap();
            let ranks: Vec<usize> = [&dot, &tensor, &semi]
                .iter()
                .map(|p| rank(p.spanoid()).unwrap().rank)
                .collect();
            assert!(ranks[0] <= ranks[1] && ranks[1] <= ranks[2]);
            let covers: Vec<Rat> = [&dot, &tensor, &semi]
                .iter()
                .map(|p| lp_cover(p.spanoid()).unwrap())
                .collect();
            assert!(covers[0] <= covers[1] && covers[1] <= covers[2]);
            // the exact-rational entropy LP only stays cheap on small
            // ground sets, so gate that leg on the product size
            if s1.ground_size() * s2.ground_size() > 6 {
                continue;
            }
            let entropies: Vec<Rat> = [&dot, &tensor, &semi]
                .iter()
                .map(|p| lp_entropy(p.spanoid(), EntropyMode::Elemental).unwrap().0)
                .collect();
            assert!(entropies[0] <= entropies[1] && entropies[1] <= entropies[2]);
        }
    }

    #[test]
    fn entropy_is_submultiplicative_under_semidirect() {
        let pairs = [
            (Spanoid::rule_free(2), Spanoid::rule_free(2)),
            (Spanoid::rule_free(2), triangle()),
            (triangle(), Spanoid::rule_free(2)),
        ];
        for (s1, s2) in &pairs {
            let p = product_semidirect(s1, s2).unwrap();
            let (e, _) = lp_entropy(p.spanoid(), EntropyMode::Elemental).unwrap();
            let (e1, _) = lp_entropy(s1, EntropyMode::Elemental).unwrap();
            let (e2, _) = lp_entropy(s2, EntropyMode::Elemental).unwrap();
            assert!(e <= e1 * e2);
        }
    }

    #[test]
    fn stored_rule_schemata_are_span_equivalent_to_derived_ones() {
        let mut state = 0xa54ff53a5f1d36f1u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut factors: Vec<Spanoid> =
            vec![Spanoid::rule_free(2), triangle(), xu_spanoid()];
        for _ in 0..2 {
            let n = 3 + (next() % 2) as usize;
            let rules: Vec<Rule> = (0..2 + next() % 3)
                .map(|_| {
                    let conclusion = (next() % n as u64) as u32;
                    let premise: Vec<u32> =
                        (0..n as u32).filter(|_| next() % 2 == 0).collect();
                    Rule::new(premise, conclusion)
                })
                .collect();
            factors.push(Spanoid::new(n, rules).unwrap());
        }
        // replace stored rules by every derived inference (T, e not in T
        // with e in span(T)) and compare span operators exhaustively
        let derived_closure = |sp: &Spanoid| -> Spanoid {
            let n = sp.ground_size();
            let mut rules = Vec::new();
            for mask in 0..1u64 << n {
                let t = Subset::from_mask(n, mask);
                let span = sp.span(&t);
                for e in span.iter() {
                    if !t.contains(e) {
                        rules.push(Rule::new(t.iter().collect(), e));
                    }
                }
            }
            Spanoid::new(n, rules).unwrap()
        };
        for s1 in &factors {
            for s2 in &factors {
                if s1.ground_size() * s2.ground_size() > 16 {
                    continue;
                }
                let d1 = derived_closure(s1);
                let d2 = derived_closure(s2);
                for whole_column in [false, true] {
                    let stored =
                        Spanoid::new(s1.ground_size() * s2.ground_size(),
                            schema_rules(s1, s2, whole_column)).unwrap();
                    let derived =
                        Spanoid::new(s1.ground_size() * s2.ground_size(),
                            schema_rules(&d1, &d2, whole_column)).unwrap();
                    let n = stored.ground_size();
                    for mask in 0..1u64 << n {
                        let t = Subset::from_mask(n, mask);
                        assert_eq!(stored.span(&t), derived.span(&t));
                    }
                }
            }
        }
    }

    #[test]
    fn cover_dual_opens_certify_the_cover_value() {
        for sp in [pentagon(), xu_spanoid(), triangle(), Spanoid::rule_free(3)] {
            let dual = cover_dual_opens(&sp).unwrap();
            assert_eq!(dual.total(), lp_cover(&sp).unwrap());
            assert!(dual.is_feasible());
            assert!(dual.all_open_in(&sp));
        }
    }

    #[test]
    fn tensored_dual_certifies_the_pentagon_square() {
        let power = semidirect_power(&pentagon(), 2).unwrap();
        assert_eq!(power.spanoid.ground_size(), 25);
        assert_eq!(power.dual.len(), 125);
        assert_eq!(power.dual.total(), rat(25, 4));
        assert!(power.dual.is_feasible());
        assert!(power.dual.all_open_in(&power.spanoid));
        // every tensored open has four elements: two columns of two
        for (open, w) in power.dual.entries() {
            assert_eq!(open.len(), 4);
            assert_eq!(w, &rat(1, 20));
        }
    }

    #[test]
    fn semidirect_power_one_is_the_base() {
        let power = semidirect_power(&xu_spanoid(), 1).unwrap();
        assert_eq!(power.spanoid, xu_spanoid());
        assert_eq!(power.dual.total(), rat(3, 2));
        assert!(matches!(
            semidirect_power(&xu_spanoid(), 0),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn dot_construction_respects_capacity() {
        assert!(matches!(
            product_dot(&pentagon(), &pentagon()),
            Err(Error::Capacity { .. })
        ));
        // the structural covering value still works at that size
        assert_eq!(lp_cover_dot(&pentagon(), &pentagon()).unwrap(), rat(25, 4));
    }
}
