//! End-to-end reproduction checks shared by the acceptance tests and
//! the command line front end.
//!
//! Each criterion runner recomputes its golden values from scratch and
//! reports one pass/fail line. Runners return a detail string on
//! success and a description of the first divergence on failure;
//! domain errors along the way count as failures. The pentagon-square
//! rank search is the one expensive step shared by two criteria, so
//! its certificate is computed once per process and reused.

use crate::code::{
    check_consistent, code_dimension, max_consistent_code, plan_from_weighted_subsets, Code,
    CodeDimension,
};
use crate::cover::lp_cover;
use crate::entropy::{lp_entropy, EntropyMode};
use crate::family::SetFamily;
use crate::lcs::{hadamard_spanoid, random_qlcs, spanning_set_2lcs, spanning_set_qlcs};
use crate::lp::{
    rat, rat_int, solve_exact, vertex_enumeration_optimum, Constraint, LinearProgram, Rat, Rel,
    Sense,
};
use crate::product::{
    lp_cover_dot, product, semidirect_power, ProductKind, WeightedOpens,
};
use crate::rank::{rank, rank_direct, rank_hitting_set};
use crate::spanoid::{Rule, Spanoid};
use crate::spread::{audit_spread, graph_process_run, source_bound, SpreadSampler};
use crate::subset::Subset;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

/// One criterion outcome for the pass/fail table.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {} {:<24} {} ({:.1}s) {}",
            self.index,
            self.name,
            if self.passed { "pass" } else { "FAIL" },
            self.seconds,
            self.detail
        )
    }
}

const CRITERION_NAMES: [&str; 7] = [
    "pentagon goldens",
    "measure sandwich",
    "product suite",
    "gap amplification",
    "correction spanning sets",
    "graph process",
    "oracle equivalences",
];

pub fn criterion_count() -> usize {
    CRITERION_NAMES.len()
}

type CheckResult = std::result::Result<String, String>;

/// Runs one criterion (1-based) and captures its outcome and duration.
pub fn run_criterion(index: usize) -> CriterionReport {
    let start = Instant::now();
    let outcome = match index {
        1 => pentagon_goldens(),
        2 => measure_sandwich(),
        3 => product_suite(),
        4 => gap_amplification(),
        5 => correction_spanning_sets(),
        6 => graph_process(),
        7 => oracle_equivalences(),
        _ => Err(format!("no criterion {index}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let name = CRITERION_NAMES.get(index.wrapping_sub(1)).unwrap_or(&"unknown");
    match outcome {
        Ok(detail) => CriterionReport {
            index,
            name,
            passed: true,
            detail,
            seconds,
        },
        Err(detail) => CriterionReport {
            index,
            name,
            passed: false,
            detail,
            seconds,
        },
    }
}

/// Runs all criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    (1..=criterion_count()).map(run_criterion).collect()
}

/// Formats reports as the pass/fail table printed by the front end.
pub fn render_table(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.line());
        out.push('\n');
    }
    let total: f64 = reports.iter().map(|r| r.seconds).sum();
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str(&format!("all {} criteria passed ({total:.1}s)\n", reports.len()));
    } else {
        out.push_str(&format!(
            "{failed} of {} criteria FAILED ({total:.1}s)\n",
            reports.len()
        ));
    }
    out
}

/// The five-element pentagon spanoid: each adjacent pair spans the
/// element opposite to it.
pub fn pentagon() -> Spanoid {
    let rules = (0..5)
        .map(|i| Rule::new(vec![i, (i + 1) % 5], (i + 3) % 5))
        .collect();
    Spanoid::new(5, rules).expect("pentagon rules are in range")
}

/// The 32-word consistent code over 4 symbols realizing the pentagon
/// covering value: coordinate i packs two index bits, one from each of
/// the positions whose pair spans i.
pub fn pentagon_code() -> Code {
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
    Code::new(5, 4, words).expect("pentagon words are well formed")
}

/// The four-element spanoid whose covering value 3/2 separates the
/// covering LP from rank 2, given by its closed-set family.
pub fn xu() -> Spanoid {
    let fam = SetFamily::from_masks(4, vec![0b0000, 0b0001, 0b1000, 0b1010, 0b1100, 0b1111]);
    Spanoid::from_closed_family(&fam).expect("family is intersection closed")
}

/// Three elements where any two span the third.
pub fn xor_triangle() -> Spanoid {
    let rules = (0..3)
        .map(|i| Rule::new(vec![(i + 1) % 3, (i + 2) % 3], i))
        .collect();
    Spanoid::new(3, rules).expect("triangle rules are in range")
}

/// A seeded random spanoid: up to 2n rules with premises of at most
/// three elements and arbitrary conclusions (vacuous rules included).
fn random_spanoid(rng: &mut ChaCha12Rng, n_min: usize, n_max: usize) -> Spanoid {
    let n = rng.gen_range(n_min..=n_max);
    let rule_count = rng.gen_range(0..=2 * n);
    let mut rules = Vec::with_capacity(rule_count);
    for _ in 0..rule_count {
        let size = rng.gen_range(0..=3.min(n));
        let mut pool: Vec<u32> = (0..n as u32).collect();
        for s in 0..size {
            let r = s + rng.gen_range(0..pool.len() - s);
            pool.swap(s, r);
        }
        let premise = pool[..size].to_vec();
        let conclusion = rng.gen_range(0..n as u32);
        rules.push(Rule::new(premise, conclusion));
    }
    Spanoid::new(n, rules).expect("generated rules are in range")
}

/// Pentagon-square rank certificate, shared by the product-suite and
/// gap-amplification criteria; the search is the slowest single step.
fn pentagon_square_rank() -> std::result::Result<usize, String> {
    static CACHE: OnceLock<std::result::Result<usize, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            let p = pentagon();
            let square = product(ProductKind::Semidirect, &p, &p)
                .map_err(|e| e.to_string())?
                .into_spanoid();
            let cert = rank(&square).map_err(|e| e.to_string())?;
            if !square.span(&cert.witness).is_full() {
                return Err("pentagon-square rank witness does not span".into());
            }
            Ok(cert.rank)
        })
        .clone()
}

fn pentagon_goldens() -> CheckResult {
    let sp = pentagon();
    let cert = rank(&sp).map_err(|e| e.to_string())?;
    if cert.rank != 3 || !sp.span(&cert.witness).is_full() {
        return Err(format!("pentagon rank {} instead of 3", cert.rank));
    }
    let cover = lp_cover(&sp).map_err(|e| e.to_string())?;
    if cover != rat(5, 2) {
        return Err(format!("pentagon covering value {cover} instead of 5/2"));
    }
    for mode in [EntropyMode::Full, EntropyMode::Elemental] {
        let (value, _) = lp_entropy(&sp, mode).map_err(|e| e.to_string())?;
        if value != rat(5, 2) {
            return Err(format!("pentagon entropy value {value} in {mode:?} mode"));
        }
    }
    let code = pentagon_code();
    if code.len() != 32 || code.alphabet_size() != 4 {
        return Err(format!(
            "pentagon code has {} words over {} symbols",
            code.len(),
            code.alphabet_size()
        ));
    }
    if let Some(v) = check_consistent(&sp, &code).map_err(|e| e.to_string())? {
        return Err(format!("pentagon code violates a rule: {v:?}"));
    }
    match code_dimension(&code).map_err(|e| e.to_string())? {
        CodeDimension::Exact(d) if d == rat(5, 2) => {}
        other => return Err(format!("pentagon code dimension {other:?} instead of 5/2")),
    }
    let best = max_consistent_code(&sp, 4, 50_000_000).map_err(|e| e.to_string())?;
    if best.len() != 32 {
        return Err(format!(
            "maximum 4-symbol code search found {} words instead of 32",
            best.len()
        ));
    }
    Ok("rank 3, cover 5/2, entropy 5/2 in both modes, 32-word code of dimension 5/2".into())
}

fn measure_sandwich() -> CheckResult {
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed_0002);
    let instances = 500;
    for case in 0..instances {
        let sp = random_spanoid(&mut rng, 2, 6);
        let cover = lp_cover(&sp).map_err(|e| e.to_string())?;
        let (entropy, _) =
            lp_entropy(&sp, EntropyMode::Elemental).map_err(|e| e.to_string())?;
        let r = rank(&sp).map_err(|e| e.to_string())?.rank;
        let rank_rat = Rat::from_integer(BigInt::from(r));
        if !(cover <= entropy && entropy <= rank_rat) {
            return Err(format!(
                "case {case}: cover {cover} / entropy {entropy} / rank {r} out of order"
            ));
        }
        let closed = sp.closed_sets().map_err(|e| e.to_string())?.len();
        if 1usize << r > closed {
            return Err(format!(
                "case {case}: rank {r} exceeds log2 of {closed} closed sets"
            ));
        }
    }
    Ok(format!(
        "{instances} random instances: cover <= entropy <= rank and 2^rank <= closed-set count"
    ))
}

fn product_suite() -> CheckResult {
    let p = pentagon();
    let square_rank = pentagon_square_rank()?;
    if square_rank != 9 {
        return Err(format!("pentagon semidirect square rank {square_rank} instead of 9"));
    }

    let tensor = product(ProductKind::Tensor, &p, &p).map_err(|e| e.to_string())?;
    let eight: Vec<u32> = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (4, 4)]
        .iter()
        .map(|&(i, j)| tensor.flatten(i, j))
        .collect();
    let tsp = tensor.spanoid();
    if !tsp.span_of(&eight).map_err(|e| e.to_string())?.is_full() {
        return Err("the eight-element set fails to span the tensor square".into());
    }
    let tensor_rank = rank(tsp).map_err(|e| e.to_string())?.rank;
    if tensor_rank > 8 {
        return Err(format!("tensor square rank {tensor_rank} exceeds 8"));
    }

    let x = xu();
    let xu_rank = rank(&x).map_err(|e| e.to_string())?.rank;
    if xu_rank != 2 {
        return Err(format!("xu rank {xu_rank} instead of 2"));
    }
    let xx = product(ProductKind::Tensor, &x, &x).map_err(|e| e.to_string())?;
    let triple: Vec<u32> = [(0, 0), (1, 2), (2, 1)]
        .iter()
        .map(|&(i, j)| xx.flatten(i, j))
        .collect();
    if !xx
        .spanoid()
        .span_of(&triple)
        .map_err(|e| e.to_string())?
        .is_full()
    {
        return Err("the known triple fails to span the xu tensor square".into());
    }

    let dot_value = lp_cover_dot(&p, &p).map_err(|e| e.to_string())?;
    if dot_value != rat(25, 4) {
        return Err(format!("pentagon dot-square covering value {dot_value} instead of 25/4"));
    }

    // open families nest across the three constructions on (xu, xu)
    let opens = |kind: ProductKind| -> std::result::Result<BTreeSet<u64>, String> {
        let ps = product(kind, &x, &x).map_err(|e| e.to_string())?;
        Ok(ps
            .spanoid()
            .open_sets()
            .map_err(|e| e.to_string())?
            .masks()
            .iter()
            .copied()
            .collect())
    };
    let dot = opens(ProductKind::Dot)?;
    let ten = opens(ProductKind::Tensor)?;
    let semi = opens(ProductKind::Semidirect)?;
    if !(dot.is_subset(&ten) && ten.is_subset(&semi)) {
        return Err("open families fail to nest across the product kinds".into());
    }
    Ok(format!(
        "semidirect square rank 9, tensor square rank {tensor_rank} with an 8-element spanning set, dot-square cover 25/4, open families nested"
    ))
}

/// Scales rational open weights to a common denominator, yielding
/// integer multiplicities and the symbol width.
fn scaled_multiset(dual: &WeightedOpens) -> std::result::Result<(Vec<(Subset, u64)>, u64), String> {
    let mut ell = BigInt::one();
    for (_, w) in dual.entries() {
        ell = ell.lcm(w.denom());
    }
    let ell_int = ell
        .to_u64()
        .ok_or_else(|| "dual denominators overflow the symbol width".to_string())?;
    let mut entries = Vec::with_capacity(dual.len());
    for (open, w) in dual.entries() {
        let copies = (w * Rat::from(ell.clone()))
            .to_integer()
            .to_u64()
            .ok_or_else(|| "scaled multiplier overflows".to_string())?;
        entries.push((open.clone(), copies));
    }
    Ok((entries, ell_int))
}

fn gap_amplification() -> CheckResult {
    let p = pentagon();
    let mut details = Vec::new();
    for k in 2..=3u32 {
        let power = semidirect_power(&p, k).map_err(|e| e.to_string())?;
        let expected_rank = 3usize.pow(k);
        let expected_dim = rat(5, 2).pow(k as i32);
        // rank: exact search for the square, the product rule on top
        let certified = match k {
            2 => pentagon_square_rank()?,
            _ => pentagon_square_rank()? * 3,
        };
        if certified != expected_rank {
            return Err(format!("power {k} certified rank {certified} instead of {expected_rank}"));
        }
        let dual = &power.dual;
        if dual.total() != expected_dim {
            return Err(format!(
                "power {k} dual total {} instead of {expected_dim}",
                dual.total()
            ));
        }
        if !dual.is_feasible() {
            return Err(format!("power {k} dual overloads an element"));
        }
        if !dual.all_open_in(&power.spanoid) {
            return Err(format!("power {k} dual contains a non-open set"));
        }
        let (entries, ell) = scaled_multiset(dual)?;
        let plan = plan_from_weighted_subsets(power.spanoid.ground_size(), &entries, ell);
        if plan.dimension() != &expected_dim {
            return Err(format!(
                "power {k} code plan dimension {} instead of {expected_dim}",
                plan.dimension()
            ));
        }
        let ratio = Rat::from_integer(BigInt::from(certified)) / &expected_dim;
        if ratio < rat(6, 5).pow(k as i32) {
            return Err(format!("power {k} rank/dimension ratio {ratio} below (6/5)^{k}"));
        }
        details.push(format!(
            "k={k}: rank {certified}, code dimension {}, ratio {}",
            crate::lp::format_rat(&expected_dim),
            crate::lp::format_rat(&ratio)
        ));
    }
    Ok(details.join("; "))
}

fn correction_spanning_sets() -> CheckResult {
    let mut details = Vec::new();
    for k in 3..=6u32 {
        let inst = hadamard_spanoid(k).map_err(|e| e.to_string())?;
        let run = spanning_set_2lcs(&inst, k as u64, 100).map_err(|e| e.to_string())?;
        let n = inst.ground_size() as f64;
        let inv_delta = 2.0 * n / (n - 1.0);
        let bound = 40.0 * inv_delta * n.log2();
        if (run.set.len() as f64) > bound {
            return Err(format!(
                "2-query set of {} elements exceeds the bound {bound:.1} at k={k}",
                run.set.len()
            ));
        }
        if !inst
            .spanoid()
            .span_of(&run.set)
            .map_err(|e| e.to_string())?
            .is_full()
        {
            return Err(format!("2-query set fails to span at k={k}"));
        }
        details.push(format!("k={k}:{}", run.set.len()));
    }

    let mut worst: f64 = 0.0;
    for (i, n) in (100..=300).step_by(22).enumerate() {
        let seed = i as u64;
        let inst = random_qlcs(n, 3, seed).map_err(|e| e.to_string())?;
        let run = spanning_set_qlcs(&inst, seed, 100).map_err(|e| e.to_string())?;
        if !inst
            .spanoid()
            .span_of(&run.set)
            .map_err(|e| e.to_string())?
            .is_full()
        {
            return Err(format!("q-query set fails to span at n={n}"));
        }
        let ratio = run.set.len() as f64 / ((n as f64).sqrt() * (n as f64).log2());
        worst = worst.max(ratio);
        if ratio > 16.0 {
            return Err(format!(
                "q-query set of {} elements at n={n} has ratio {ratio:.2} above 16",
                run.set.len()
            ));
        }
    }
    Ok(format!(
        "2-query sizes {}; q-query size over sqrt(n)*log2(n) at most {worst:.2} across 10 runs",
        details.join(" ")
    ))
}

fn graph_process() -> CheckResult {
    let mu = SpreadSampler::fixed_windows(50, 10).map_err(|e| e.to_string())?;
    let alpha = mu.alpha().to_f64().unwrap_or(0.0);
    let t = (4.0 / alpha * (50.0f64).ln()).ceil() as usize;
    let bound = source_bound(50, mu.alpha(), mu.beta(), t);
    let mut hits = 0usize;
    for seed in 0..100u64 {
        let counts = graph_process_run(&mu, t, seed);
        if counts.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("source counts increased under seed {seed}"));
        }
        if (counts[t - 1] as f64) <= bound {
            hits += 1;
        }
    }
    if hits == 0 {
        return Err(format!("no seed reached the source bound {bound:.2} at t={t}"));
    }
    let audit = audit_spread(&mu, 10_000, 0xa0d17).map_err(|e| e.to_string())?;
    if !audit.passed() {
        return Err(format!(
            "spread audit failed: worst incoming {:.4} vs alpha {:.4}, worst edge {:.5} vs ceiling {:.5}",
            audit.worst_incoming, audit.alpha, audit.worst_edge, audit.edge_ceiling
        ));
    }
    Ok(format!(
        "{hits}/100 seeds at or below {bound:.2} sources after {t} steps; audit passed at 10000 samples"
    ))
}

fn oracle_equivalences() -> CheckResult {
    // the two rank engines agree on every corpus instance
    let corpus: Vec<(&str, Spanoid)> = vec![
        ("rule-free 2", Spanoid::rule_free(2)),
        ("rule-free 3", Spanoid::rule_free(3)),
        ("rule-free 4", Spanoid::rule_free(4)),
        ("triangle", xor_triangle()),
        ("xu", xu()),
        ("pentagon", pentagon()),
        (
            "hadamard 3",
            hadamard_spanoid(3)
                .map_err(|e| e.to_string())?
                .spanoid()
                .clone(),
        ),
    ];
    for (name, sp) in &corpus {
        let hs = rank_hitting_set(sp).map_err(|e| e.to_string())?.rank;
        let direct = rank_direct(sp).map_err(|e| e.to_string())?.rank;
        if hs != direct {
            return Err(format!("rank engines disagree on {name}: {hs} vs {direct}"));
        }
    }

    // entropy modes agree up to six elements
    let mut rng = ChaCha12Rng::seed_from_u64(0x5eed_0007);
    let mut small: Vec<Spanoid> = corpus
        .iter()
        .filter(|(_, sp)| sp.ground_size() <= 6)
        .map(|(_, sp)| sp.clone())
        .collect();
    for _ in 0..20 {
        small.push(random_spanoid(&mut rng, 2, 5));
    }
    for (case, sp) in small.iter().enumerate() {
        let (full, _) = lp_entropy(sp, EntropyMode::Full).map_err(|e| e.to_string())?;
        let (elem, _) = lp_entropy(sp, EntropyMode::Elemental).map_err(|e| e.to_string())?;
        if full != elem {
            return Err(format!("entropy modes disagree on case {case}: {full} vs {elem}"));
        }
    }

    // the simplex matches exhaustive vertex enumeration on random
    // bounded programs: x >= 0, box x_j <= 3, random Le rows with
    // nonnegative right-hand sides keep the origin feasible
    for case in 0..100 {
        let n = rng.gen_range(2..=3usize);
        let m = rng.gen_range(2..=4usize);
        let mut lp = LinearProgram::new(
            if rng.gen::<bool>() {
                Sense::Maximize
            } else {
                Sense::Minimize
            },
            n,
        );
        lp.objective = (0..n)
            .map(|j| (j, rat_int(rng.gen_range(-3..=3i64))))
            .collect();
        for j in 0..n {
            lp.constraints
                .push(Constraint::new(vec![(j, rat_int(1))], Rel::Le, rat_int(3)));
        }
        for _ in 0..m {
            let coeffs = (0..n)
                .map(|j| (j, rat_int(rng.gen_range(-3..=3i64))))
                .collect();
            lp.constraints.push(Constraint::new(
                coeffs,
                Rel::Le,
                rat_int(rng.gen_range(0..=3i64)),
            ));
        }
        let sol = solve_exact(&lp).map_err(|e| e.to_string())?;
        let oracle = vertex_enumeration_optimum(&lp)
            .ok_or_else(|| format!("vertex oracle found case {case} infeasible"))?;
        if sol.value != oracle {
            return Err(format!(
                "simplex and vertex enumeration disagree on case {case}: {} vs {}",
                sol.value, oracle
            ));
        }
    }

    // round-tripping through the closed-set family preserves spans
    let mut round_trip: Vec<Spanoid> = corpus.into_iter().map(|(_, sp)| sp).collect();
    for _ in 0..30 {
        round_trip.push(random_spanoid(&mut rng, 2, 10));
    }
    for (case, sp) in round_trip.iter().enumerate() {
        let closed = sp.closed_sets().map_err(|e| e.to_string())?;
        let rebuilt = Spanoid::from_closed_family(&closed).map_err(|e| e.to_string())?;
        let n = sp.ground_size();
        let a = sp.compiled_rules();
        let b = rebuilt.compiled_rules();
        for mask in 0..1u64 << n {
            if Spanoid::span_mask(&a, mask) != Spanoid::span_mask(&b, mask) {
                return Err(format!(
                    "closed-family round trip changes span of {mask:#b} on case {case}"
                ));
            }
        }
    }
    Ok("rank engines, entropy modes, LP oracles, and closed-family round trips all agree".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_instances_have_their_goldens() {
        assert_eq!(rank(&pentagon()).unwrap().rank, 3);
        assert_eq!(rank(&xu()).unwrap().rank, 2);
        assert_eq!(rank(&xor_triangle()).unwrap().rank, 2);
        assert_eq!(lp_cover(&xu()).unwrap(), rat(3, 2));
        let code = pentagon_code();
        assert_eq!(code.len(), 32);
        assert_eq!(check_consistent(&pentagon(), &code).unwrap(), None);
    }

    #[test]
    fn pentagon_goldens_pass() {
        let report = run_criterion(1);
        assert!(report.passed, "{}", report.detail);
        assert!(report.seconds < 10.0);
    }

    #[test]
    fn graph_process_passes() {
        let report = run_criterion(6);
        assert!(report.passed, "{}", report.detail);
        assert!(report.seconds < 60.0);
    }

    #[test]
    fn unknown_criterion_fails_cleanly() {
        let report = run_criterion(9);
        assert!(!report.passed);
        assert_eq!(report.name, "unknown");
    }

    #[test]
    fn table_reports_failures_loudly() {
        let ok = CriterionReport {
            index: 1,
            name: "pentagon goldens",
            passed: true,
            detail: "fine".into(),
            seconds: 0.5,
        };
        let bad = CriterionReport {
            index: 2,
            name: "measure sandwich",
            passed: false,
            detail: "broken".into(),
            seconds: 1.0,
        };
        let table = render_table(&[ok.clone(), bad]);
        assert!(table.contains("FAIL"));
        assert!(table.contains("1 of 2 criteria FAILED"));
        let table = render_table(&[ok]);
        assert!(table.contains("all 1 criteria passed"));
    }
}
