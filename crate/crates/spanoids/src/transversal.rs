//! Enumeration of all inclusion-minimal transversals (hitting sets) of a
//! small family of sets, given as masks.

/// Enumerates every inclusion-minimal set that intersects all of `sets`.
/// Members of the returned list are masks, sorted ascending. An empty
/// `sets` input has the empty transversal as its unique minimal one.
///
/// Intended for small inputs (rule synthesis); `node_budget` bounds the
/// search tree and `None` is returned when it is exhausted.
pub fn minimal_transversals(sets: &[u64], node_budget: u64) -> Option<Vec<u64>> {
    if sets.contains(&0) {
        return Some(Vec::new()); // an empty set can never be hit
    }
    let mut out = std::collections::BTreeSet::new();
    let mut budget = node_budget;
    let mut ordered: Vec<u64> = sets.to_vec();
    ordered.sort_by_key(|s| (s.count_ones(), *s));
    ordered.dedup();
    if !extend(0, &ordered, &mut out, &mut budget) {
        return None;
    }
    // The branching can emit supersets of other transversals; keep the
    // inclusion-minimal ones only.
    let candidates: Vec<u64> = out.into_iter().collect();
    let mut by_size = candidates.clone();
    by_size.sort_by_key(|m| (m.count_ones(), *m));
    let mut minimal: Vec<u64> = Vec::new();
    for &c in &by_size {
        if !minimal.iter().any(|&kept| kept & !c == 0) {
            minimal.push(c);
        }
    }
    minimal.sort_unstable();
    Some(minimal)
}

fn extend(
    chosen: u64,
    sets: &[u64],
    out: &mut std::collections::BTreeSet<u64>,
    budget: &mut u64,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    match sets.iter().find(|&&s| s & chosen == 0) {
        None => {
            out.insert(chosen);
            true
        }
        Some(&unhit) => {
            let mut rest = unhit;
            while rest != 0 {
                let e = rest.trailing_zeros();
                rest &= rest - 1;
                if !extend(chosen | 1 << e, sets, out, budget) {
                    return false;
                }
            }
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_family_has_empty_transversal() {
        assert_eq!(minimal_transversals(&[], 1000), Some(vec![0]));
    }

    #[test]
    fn unhittable_empty_set() {
        assert_eq!(minimal_transversals(&[0b1, 0b0], 1000), Some(vec![]));
    }

    #[test]
    fn triangle_edges() {
        // Edges of a triangle on {0,1,2}: minimal vertex covers are the
        // three 2-element sets.
        let sets = [0b011, 0b101, 0b110];
        assert_eq!(
            minimal_transversals(&sets, 1000),
            Some(vec![0b011, 0b101, 0b110])
        );
    }

    #[test]
    fn star_hits_center_or_all_leaves() {
        // Sets {0,1}, {0,2}, {0,3}: either {0} or {1,2,3}.
        let sets = [0b0011, 0b0101, 0b1001];
        assert_eq!(
            minimal_transversals(&sets, 1000),
            Some(vec![0b0001, 0b1110])
        );
    }

    #[test]
    fn budget_exhaustion_reported() {
        let sets = [0b011, 0b101, 0b110];
        assert_eq!(minimal_transversals(&sets, 1), None);
    }
}
