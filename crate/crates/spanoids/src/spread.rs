//! Spread samplers and the accumulating random graph process.
//!
//! A sampler is a seeded distribution over simple directed graphs on a
//! fixed vertex set, labeled with declared spread parameters (alpha,
//! beta): every vertex should receive an incoming edge with probability
//! at least alpha, and any specific edge should appear with probability
//! at most beta/n. Declarations are checked empirically by a Monte
//! Carlo audit with three-sigma binomial slack rather than trusted.
//!
//! The graph process unions independent samples step by step and
//! reports the number of source strongly-connected components after
//! each step. Well-spread samplers drive that count down to roughly
//! n*(1 - alpha/4)^t + 2*beta/alpha, which is what makes the
//! spanning-set searches built on these rounds return small sets.

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, Digraph};
use crate::lcs::{partner_index, qlcs_parameters, qlcs_round, LcsInstance};
use crate::lp::Rat;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

enum SamplerKind {
    Empty,
    Complete,
    /// One uniform vertex j is drawn; owners[j] lists the vertices
    /// whose fixed set contains j, and each receives the edge j -> i.
    FixedSets { owners: Vec<Vec<u32>> },
    /// One uniform element l is drawn; occurrences[l] lists (target,
    /// partner) pairs from 2-query matchings, firing partner -> target.
    TwoQuery { occurrences: Vec<Vec<(u32, u32)>> },
    /// A q >= 3 correction round: random inclusion set, one fired
    /// subset per reachable element.
    QQuery {
        inst: LcsInstance,
        inclusion: f64,
        oversize: f64,
    },
}

/// A seeded distribution over simple directed graphs with declared
/// spread parameters.
pub struct SpreadSampler {
    n: usize,
    alpha: Rat,
    beta: Rat,
    kind: SamplerKind,
}

impl SpreadSampler {
    /// Never emits an edge. Declared (0, 0)-spread.
    pub fn empty(n: usize) -> Self {
        SpreadSampler {
            n,
            alpha: Rat::zero(),
            beta: Rat::zero(),
            kind: SamplerKind::Empty,
        }
    }

    /// Always emits every ordered pair. Declared (1, n)-spread, except
    /// that a lone vertex has no incoming edge, so n < 2 declares 0.
    pub fn complete(n: usize) -> Self {
        let alpha = if n >= 2 { Rat::one() } else { Rat::zero() };
        SpreadSampler {
            n,
            alpha,
            beta: Rat::from_integer(BigInt::from(n)),
            kind: SamplerKind::Complete,
        }
    }

    /// Fixed sets S_1..S_n: a uniform vertex j is drawn and every
    /// vertex i with j in S_i receives the edge j -> i. Self-membership
    /// is ignored. Declared (min_i |S_i \ {i}| / n, 1)-spread.
    pub fn fixed_sets(n: usize, sets: Vec<Vec<u32>>) -> Result<Self> {
        if sets.len() != n {
            return Err(Error::GroundSetMismatch {
                left: n,
                right: sets.len(),
            });
        }
        let mut owners: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut smallest = usize::MAX;
        for (i, set) in sets.iter().enumerate() {
            let mut set = set.clone();
            set.sort_unstable();
            set.dedup();
            let mut kept = 0usize;
            for &j in &set {
                if j as usize >= n {
                    return Err(Error::ElementOutOfRange { element: j, n });
                }
                if j as usize != i {
                    owners[j as usize].push(i as u32);
                    kept += 1;
                }
            }
            smallest = smallest.min(kept);
        }
        let alpha = if n == 0 {
            Rat::zero()
        } else {
            Rat::new(BigInt::from(smallest), BigInt::from(n))
        };
        Ok(SpreadSampler {
            n,
            alpha,
            beta: Rat::one(),
            kind: SamplerKind::FixedSets { owners },
        })
    }

    /// Fixed consecutive windows: S_i = {i+1, ..., i+k} modulo n, a
    /// concrete (k/n, 1)-spread family. Requires 1 <= k < n.
    pub fn fixed_windows(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::RangeViolation {
                what: "window width",
                value: k,
                min: 1,
                max: n.saturating_sub(1),
            });
        }
        let sets = (0..n)
            .map(|i| (1..=k).map(|d| ((i + d) % n) as u32).collect())
            .collect();
        SpreadSampler::fixed_sets(n, sets)
    }

    /// The 2-query correction round: one uniform element l, edges
    /// j -> i whenever {j, l} lies in the matching of i. Declared
    /// (2*delta, 1)-spread: the matchings of i cover at least 2*delta*n
    /// elements, and a fixed edge fires for at most one draw.
    pub fn two_query(inst: &LcsInstance) -> Result<Self> {
        if inst.queries() != 2 {
            return Err(Error::RangeViolation {
                what: "query arity for the 2-query sampler",
                value: inst.queries() as usize,
                min: 2,
                max: 2,
            });
        }
        if let Some(violation) = inst.validate() {
            return Err(Error::InvalidLcs(violation.to_string()));
        }
        let n = inst.ground_size();
        Ok(SpreadSampler {
            n,
            alpha: inst.delta() * Rat::from_integer(BigInt::from(2)),
            beta: Rat::one(),
            kind: SamplerKind::TwoQuery {
                occurrences: partner_index(inst.matchings(), n),
            },
        })
    }

    /// The q >= 3 correction round. Declared (1/4, 1/delta)-spread: a
    /// random inclusion set hits some distinguished subset of each
    /// matching with probability at least 1/2 and survives the size
    /// filter with probability at least 3/4, while a fixed edge needs
    /// its own distinguished subset inside the inclusion set.
    pub fn q_query(inst: &LcsInstance) -> Result<Self> {
        if inst.queries() < 3 {
            return Err(Error::RangeViolation {
                what: "query arity for the q-query sampler",
                value: inst.queries() as usize,
                min: 3,
                max: u32::MAX as usize,
            });
        }
        if let Some(violation) = inst.validate() {
            return Err(Error::InvalidLcs(violation.to_string()));
        }
        let (inclusion, oversize) = qlcs_parameters(inst);
        Ok(SpreadSampler {
            n: inst.ground_size(),
            alpha: Rat::new(BigInt::from(1), BigInt::from(4)),
            beta: inst.delta().recip(),
            kind: SamplerKind::QQuery {
                inst: inst.clone(),
                inclusion,
                oversize,
            },
        })
    }

    /// Replaces the declared parameters, e.g. to let the audit check a
    /// foreign claim about this sampler.
    pub fn declare(mut self, alpha: Rat, beta: Rat) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    pub fn beta(&self) -> &Rat {
        &self.beta
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SamplerKind::Empty => "empty",
            SamplerKind::Complete => "complete",
            SamplerKind::FixedSets { .. } => "fixed-sets",
            SamplerKind::TwoQuery { .. } => "2-query",
            SamplerKind::QQuery { .. } => "q-query",
        }
    }

    /// Draws one graph.
    pub fn sample(&self, rng: &mut ChaCha12Rng) -> Digraph {
        let mut g = Digraph::new(self.n);
        match &self.kind {
            SamplerKind::Empty => {}
            SamplerKind::Complete => {
                for from in 0..self.n as u32 {
                    for to in 0..self.n as u32 {
                        if from != to {
                            g.add_edge(from, to);
                        }
                    }
                }
            }
            SamplerKind::FixedSets { owners } => {
                let j = rng.gen_range(0..self.n as u32);
                for &i in &owners[j as usize] {
                    g.add_edge(j, i);
                }
            }
            SamplerKind::TwoQuery { occurrences } => {
                let l = rng.gen_range(0..self.n as u32);
                for &(i, j) in &occurrences[l as usize] {
                    g.add_edge(j, i);
                }
            }
            SamplerKind::QQuery {
                inst,
                inclusion,
                oversize,
            } => {
                for (from, to, _) in qlcs_round(inst, rng, *inclusion, *oversize).edges {
                    g.add_edge(from, to);
                }
            }
        }
        g
    }
}

/// Unions `t_max` fresh samples step by step and reports the number of
/// source strongly-connected components after each step. Deterministic
/// under the seed; `t_max` of zero yields an empty report.
pub fn graph_process_run(mu: &SpreadSampler, t_max: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut g = Digraph::new(mu.vertex_count());
    let mut counts = Vec::with_capacity(t_max);
    for _ in 0..t_max {
        let fresh = mu.sample(&mut rng);
        for from in 0..fresh.vertex_count() as u32 {
            for &to in fresh.out_neighbors(from) {
                g.add_edge(from, to);
            }
        }
        let scc = strongly_connected_components(&g);
        counts.push(scc.source_components(&g).len());
    }
    counts
}

/// The source-count level a well-spread sampler reaches with positive
/// probability after t steps: n*(1 - alpha/4)^t + 2*beta/alpha.
pub fn source_bound(n: usize, alpha: &Rat, beta: &Rat, t: usize) -> f64 {
    let a = alpha.to_f64().unwrap_or(0.0);
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let b = beta.to_f64().unwrap_or(0.0);
    n as f64 * (1.0 - a / 4.0).powi(t as i32) + 2.0 * b / a
}

/// Outcome of a Monte Carlo audit of declared spread parameters.
#[derive(Clone, Debug)]
pub struct SpreadAudit {
    pub samples: usize,
    /// Declared incoming-edge probability floor.
    pub alpha: f64,
    /// Declared per-edge probability ceiling beta/n, clamped to 1.
    pub edge_ceiling: f64,
    /// Smallest observed per-vertex incoming frequency.
    pub worst_incoming: f64,
    /// Largest observed per-edge frequency.
    pub worst_edge: f64,
    pub incoming_ok: bool,
    pub edge_ok: bool,
}

impl SpreadAudit {
    pub fn passed(&self) -> bool {
        self.incoming_ok && self.edge_ok
    }
}

/// Samples the distribution and checks both declared parameters with
/// two-sided binomial slack of three standard deviations: every vertex
/// must receive an incoming edge in at least an alpha - 3*sigma
/// fraction of the samples and no ordered pair may appear in more than
/// a beta/n + 3*sigma fraction.
pub fn audit_spread(mu: &SpreadSampler, samples: usize, seed: u64) -> Result<SpreadAudit> {
    if samples == 0 {
        return Err(Error::RangeViolation {
            what: "audit sample count",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    let n = mu.vertex_count();
    let mut incoming = vec![0u64; n];
    let mut edges = vec![0u64; n * n];
    let mut seen = vec![false; n];
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let g = mu.sample(&mut rng);
        seen.fill(false);
        for from in 0..n {
            for &to in g.out_neighbors(from as u32) {
                seen[to as usize] = true;
                edges[from * n + to as usize] += 1;
            }
        }
        for (i, hit) in seen.iter().enumerate() {
            if *hit {
                incoming[i] += 1;
            }
        }
    }
    let alpha = mu.alpha().to_f64().unwrap_or(0.0);
    let edge_ceiling = if n == 0 {
        0.0
    } else {
        (mu.beta().to_f64().unwrap_or(0.0) / n as f64).min(1.0)
    };
    let total = samples as f64;
    let sigma_in = (alpha * (1.0 - alpha) / total).sqrt();
    let sigma_edge = (edge_ceiling * (1.0 - edge_ceiling) / total).sqrt();
    let worst_incoming = incoming
        .iter()
        .map(|&c| c as f64 / total)
        .fold(1.0f64, f64::min);
    let worst_edge = edges
        .iter()
        .map(|&c| c as f64 / total)
        .fold(0.0f64, f64::max);
    Ok(SpreadAudit {
        samples,
        alpha,
        edge_ceiling,
        worst_incoming,
        worst_edge,
        incoming_ok: worst_incoming >= alpha - 3.0 * sigma_in,
        edge_ok: worst_edge <= edge_ceiling + 3.0 * sigma_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcs::{hadamard_spanoid, random_qlcs};
    use crate::lp::rat;

    #[test]
    fn empty_sampler_leaves_every_vertex_a_source() {
        let mu = SpreadSampler::empty(6);
        assert_eq!(graph_process_run(&mu, 4, 0), vec![6; 4]);
        let audit = audit_spread(&mu, 200, 0).unwrap();
        assert!(audit.passed());
        assert_eq!(audit.worst_edge, 0.0);
    }

    #[test]
    fn complete_sampler_collapses_to_one_source() {
        let mu = SpreadSampler::complete(5);
        assert_eq!(graph_process_run(&mu, 3, 0), vec![1, 1, 1]);
        let audit = audit_spread(&mu, 200, 0).unwrap();
        assert!(audit.passed());
        assert_eq!(audit.worst_incoming, 1.0);
        assert_eq!(audit.worst_edge, 1.0);
    }

    #[test]
    fn window_sampler_declares_its_shape() {
        let mu = SpreadSampler::fixed_windows(50, 10).unwrap();
        assert_eq!(mu.alpha(), &rat(1, 5));
        assert_eq!(mu.beta(), &rat(1, 1));
        assert_eq!(mu.kind_name(), "fixed-sets");
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let g = mu.sample(&mut rng);
        assert_eq!(g.edge_count(), 10);
        // all ten edges leave the one sampled vertex
        let out_degrees: Vec<usize> = (0..50).map(|v| g.out_neighbors(v).len()).collect();
        assert_eq!(out_degrees.iter().filter(|&&d| d > 0).count(), 1);
        assert!(matches!(
            SpreadSampler::fixed_windows(5, 5),
            Err(Error::RangeViolation { .. })
        ));
        assert!(matches!(
            SpreadSampler::fixed_windows(5, 0),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn fixed_sets_ignore_self_membership() {
        // vertex 0 lists itself, which cannot produce an edge
        let mu = SpreadSampler::fixed_sets(3, vec![vec![0, 1], vec![2], vec![0]]).unwrap();
        assert_eq!(mu.alpha(), &rat(1, 3));
        let audit = audit_spread(&mu, 2000, 5).unwrap();
        assert!(audit.passed());
        assert!(matches!(
            SpreadSampler::fixed_sets(3, vec![vec![3], vec![], vec![]]),
            Err(Error::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            SpreadSampler::fixed_sets(2, vec![vec![0]]),
            Err(Error::GroundSetMismatch { .. })
        ));
    }

    #[test]
    fn process_is_deterministic_and_weakly_decreasing() {
        let mu = SpreadSampler::fixed_windows(50, 10).unwrap();
        let counts = graph_process_run(&mu, 40, 0);
        assert_eq!(counts, graph_process_run(&mu, 40, 0));
        assert!(counts.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn window_process_reaches_the_source_bound() {
        let mu = SpreadSampler::fixed_windows(50, 10).unwrap();
        let t = (4.0 / 0.2 * (50.0f64).ln()).ceil() as usize;
        assert_eq!(t, 79);
        let bound = source_bound(50, mu.alpha(), mu.beta(), t);
        assert!(bound < 11.0 && bound > 10.0);
        let mut hits = 0;
        for seed in 0..100u64 {
            let counts = graph_process_run(&mu, t, seed);
            assert!(counts.windows(2).all(|w| w[1] <= w[0]));
            if (counts[t - 1] as f64) <= bound {
                hits += 1;
            }
        }
        assert!(hits >= 1, "no seed reached the bound {bound}");
    }

    #[test]
    fn declared_parameters_survive_their_audits() {
        let windows = SpreadSampler::fixed_windows(50, 10).unwrap();
        assert!(audit_spread(&windows, 10_000, 7).unwrap().passed());

        let two = SpreadSampler::two_query(&hadamard_spanoid(3).unwrap()).unwrap();
        assert_eq!(two.alpha(), &rat(6, 7));
        let audit = audit_spread(&two, 10_000, 7).unwrap();
        assert!(audit.passed());

        let q = SpreadSampler::q_query(&random_qlcs(30, 3, 7).unwrap()).unwrap();
        assert_eq!(q.alpha(), &rat(1, 4));
        assert_eq!(q.beta(), &rat(6, 1));
        assert!(audit_spread(&q, 10_000, 7).unwrap().passed());
    }

    #[test]
    fn audits_reject_overclaimed_parameters() {
        let windows = SpreadSampler::fixed_windows(50, 10).unwrap();
        let inflated = SpreadSampler::fixed_windows(50, 10)
            .unwrap()
            .declare(rat(1, 2), rat(1, 1));
        let audit = audit_spread(&inflated, 10_000, 7).unwrap();
        assert!(!audit.incoming_ok);
        assert!(audit.edge_ok);

        let squeezed = SpreadSampler::fixed_windows(50, 10)
            .unwrap()
            .declare(rat(1, 5), rat(1, 100));
        let audit = audit_spread(&squeezed, 10_000, 7).unwrap();
        assert!(audit.incoming_ok);
        assert!(!audit.edge_ok);

        // sanity: honest declarations on the same stream pass
        assert!(audit_spread(&windows, 10_000, 7).unwrap().passed());
        assert!(matches!(
            audit_spread(&windows, 0, 0),
            Err(Error::RangeViolation { .. })
        ));
    }

    #[test]
    fn sampler_constructors_enforce_instance_contracts() {
        let q3 = random_qlcs(30, 3, 0).unwrap();
        assert!(matches!(
            SpreadSampler::two_query(&q3),
            Err(Error::RangeViolation { .. })
        ));
        let had = hadamard_spanoid(2).unwrap();
        assert!(matches!(
            SpreadSampler::q_query(&had),
            Err(Error::RangeViolation { .. })
        ));
    }
}
