//! Acceptance gate. Each test prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use limitgen::fixtures;
use limitgen::generate::{best_of_both_generate, breadth_via_index, km_subset_generate, Proposal};
use limitgen::harness::{
    distinguishing_set, estimate_curve, finite_intersection, fit_exponential, identification_set,
    labeled_distinguishing_bound, lower_bound_generation, lower_bound_identification, padded_sample, Algorithm,
    ErrorMode, ExperimentConfig,
};
use limitgen::identify::{canonicalize_index, subset_oracle_identify, LabeledIdentifier};
use limitgen::mop::{mop_decide, support_bruteforce, DecideMode, FixtureMachine, TokenMachine};
use limitgen::reductions::{identify_via_breadth_generator, GeneratorTrainer};
use limitgen::sampling::{sample_induced, total_variation, trial_rng, CanonicalEnumeration, Enumeration, Periodic};
use limitgen::{Collection, Elem, Sample};

fn report(id: u32, what: &str, ok: bool, detail: String, elapsed: Duration, limit: Duration) {
    let ok = ok && elapsed < limit;
    let line = format!(
        "{} criterion {id}: {what} ({detail}; {:.2}s of {}s)\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed");
}

#[test]
fn criterion_1_exponential_rate_generation() {
    let start = Instant::now();
    let cfg = ExperimentConfig::new("evens", Algorithm::KmMembership).seed(1);
    let curve = estimate_curve(&cfg).unwrap();
    let at40 = curve.rate_at(40).unwrap();
    let fit = fit_exponential(&curve);
    let c = fit.as_ref().map_or(f64::NAN, |f| f.c);
    report(
        1,
        "km-membership on evens decays exponentially",
        at40 <= 0.02 && c > 0.0,
        format!("error(40) = {at40}, fitted c = {c:.3}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_2_exponential_rate_identification_with_negatives() {
    let start = Instant::now();
    let gold = estimate_curve(&ExperimentConfig::new("evens", Algorithm::GoldPn).grid([30, 40]).seed(2)).unwrap();
    let exp = estimate_curve(&ExperimentConfig::new("evens", Algorithm::PosNegExp).grid([40]).seed(2)).unwrap();
    let g30 = gold.rate_at(30).unwrap();
    let g40 = gold.rate_at(40).unwrap();
    let e40 = exp.rate_at(40).unwrap();
    report(
        2,
        "labeled identification on evens",
        g30 <= 0.01 && e40 <= g40,
        format!("gold-pn error(30) = {g30}, error(40) = {g40}; posneg-exp error(40) = {e40}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_3_sufficiency_condition() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut gen_errors = 0;
    let mut id_errors = 0;
    let mut checked = Vec::new();
    for c in fixtures::all() {
        let z = c.target();
        let k = c.target_language();
        let n0 = distinguishing_set(&c, z).unwrap().n0;
        let required = identification_set(&c).unwrap();
        for _ in 0..100 {
            let size = n0.max(required.len()) + rng.gen_range(0..=10);
            let s = padded_sample(&c, &required, size, &mut rng).unwrap();
            let guess = subset_oracle_identify(&c, &s, s.len()).unwrap();
            if !c.equality_oracle(canonicalize_index(&c, guess, s.len())) {
                id_errors += 1;
            }
            // emission is only owed where K ∖ S can stay non-empty
            if !k.is_finite() && s.distinct() >= z {
                match km_subset_generate(&c, &s, s.distinct()) {
                    Ok(x) if k.contains(x) && !s.as_set().contains(&x) => {}
                    _ => gen_errors += 1,
                }
            }
        }
        checked.push(c.name().to_string());
    }
    report(
        3,
        "samples containing the distinguishing set never err",
        gen_errors == 0 && id_errors == 0,
        format!("{} fixtures, generation errors {gen_errors}, identification errors {id_errors}", checked.len()),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

fn strings_up_to(alphabet: &[char], len: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|p| alphabet.iter().map(move |&c| format!("{p}{c}")))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

#[test]
fn criterion_4_mop_decider_matches_bruteforce() {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut total = 0;
    for m in FixtureMachine::all() {
        let support = support_bruteforce(&m, 5).unwrap();
        for s in strings_up_to(&m.alphabet(), 5) {
            total += 1;
            if mop_decide(&m, &s, DecideMode::Complete).unwrap().answer != support.contains(&s) {
                mismatches += 1;
            }
        }
    }
    report(
        4,
        "decider agrees with exhaustive support",
        mismatches == 0,
        format!("{total} queries, {mismatches} mismatches"),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_5_canonicalization_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let mut checks = 0;
    for _ in 0..200 {
        let universe = rng.gen_range(1..=16u64);
        let distinct = rng.gen_range(1..=4usize);
        let base: Vec<BTreeSet<u64>> = (0..distinct)
            .map(|_| (1..=universe).filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        // duplicate languages in shuffled order, at most 8
        let size = rng.gen_range(distinct..=8);
        let sets: Vec<BTreeSet<u64>> = (0..size)
            .map(|k| if k < distinct { base[k].clone() } else { base[rng.gen_range(0..distinct)].clone() })
            .collect();
        let c = Collection::from_finite_sets("random", sets.clone(), 1);
        for i in 1..=size {
            for n in 1..=16u64 {
                checks += 1;
                let cut = |s: &BTreeSet<u64>| s.iter().filter(|&&x| x <= n).copied().collect::<BTreeSet<_>>();
                let brute = (0..i).find(|&l| cut(&sets[l]) == cut(&sets[i - 1])).unwrap() + 1;
                if canonicalize_index(&c, i, n as usize) != brute {
                    mismatches += 1;
                }
            }
        }
    }
    report(
        5,
        "canonicalization equals minimal projection match",
        mismatches == 0,
        format!("{checks} checks, {mismatches} mismatches"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_induced_sampler() {
    let start = Instant::now();
    let mut rng = trial_rng(6, 0, 0);
    let mut tvs = Vec::new();
    for (period, pmf) in [(vec![1, 2], vec![2.0 / 3.0, 1.0 / 3.0]), (vec![1, 2, 3], vec![4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0])] {
        let seq = Periodic::from_indices(&period);
        let draws: Vec<Elem> = (0..100_000).map(|_| sample_induced(&seq, &mut rng).unwrap()).collect();
        tvs.push(total_variation(&draws, |x| pmf.get(x.index() as usize - 1).copied().unwrap_or(0.0)));
    }
    report(
        6,
        "geometric-position sampler matches closed forms",
        tvs.iter().all(|&t| t <= 0.02),
        format!("total variation {:.4} and {:.4}", tvs[0], tvs[1]),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_7_lower_bounds() {
    let start = Instant::now();
    let pair = fixtures::evens().restrict(&[1, 2], 2);
    let mut id_ok = true;
    let mut notes = Vec::new();
    for a in Algorithm::identifiers() {
        for n in 1..=8 {
            let lb = lower_bound_identification(&pair, Elem::new(2), a, n).unwrap();
            id_ok &= lb.pigeonhole;
            if n == 5 {
                notes.push(format!("{}→{}", a.name(), lb.guess));
            }
        }
    }
    let c = fixtures::genlb();
    let inter = finite_intersection(&c, 200);
    let mut gen_ok = true;
    for a in Algorithm::generators() {
        for n in [1, 3, 10] {
            let lb = lower_bound_generation(&c, &inter, |s, rng| a.emit(&c, s, rng), n, 10_000, 7);
            gen_ok &= lb.dichotomy;
        }
    }
    for z in [1, 2] {
        let g = breadth_via_index(&c, z, Proposal::default());
        let lb = lower_bound_generation(&c, &inter, |_, rng| g.sample(rng), 3, 10_000, 7);
        gen_ok &= lb.dichotomy;
    }
    report(
        7,
        "all-shared-element lower bounds hold",
        id_ok && gen_ok,
        format!("identifier guesses on all-2 samples: {}", notes.join(", ")),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_8_consistency_breadth_tradeoff() {
    let start = Instant::now();
    let c = fixtures::evens();
    let k = c.target_language();
    let window = 200u64;
    let before = Sample::from_indices(&[4]);
    let g = best_of_both_generate(&c, &before, 3, Proposal::default()).unwrap();
    let supp: BTreeSet<u64> = (1..=window).filter(|&x| g.decide_support(Elem::new(x))).collect();
    let wanted: BTreeSet<u64> = (1..=window).filter(|&x| k.contains(Elem::new(x)) && x != 4).collect();
    let collapsed = supp.is_subset(&wanted) && supp != wanted && supp.iter().all(|x| x % 4 == 0);
    let after = Sample::from_indices(&[4, 2]);
    let g = best_of_both_generate(&c, &after, 3, Proposal::default()).unwrap();
    let broad = (1..=window).all(|x| g.decide_support(Elem::new(x)) == (x % 2 == 0 && x != 2 && x != 4));

    let mut reductions_ok = true;
    let mut bounds = Vec::new();
    for c in fixtures::all().into_iter().filter(|c| c.meta().known_identifiable) {
        let z = c.target();
        let bound = labeled_distinguishing_bound(&c) as usize;
        let seq = CanonicalEnumeration::new(c.target_language());
        let stream: Vec<Elem> = (1..=bound + 64).map(|j| seq.at(j)).collect();
        let trainer = GeneratorTrainer::cheat(z);
        for t in bound.max(1)..=bound + 64 {
            let guess =
                identify_via_breadth_generator(&c, &trainer, &LabeledIdentifier::GoldPosNeg, &stream, t, true).unwrap();
            reductions_ok &= c.equality_oracle(guess);
        }
        bounds.push(format!("{}:{bound}", c.name()));
    }
    report(
        8,
        "mode collapse before the distinguishing element, breadth after; breadth reduction identifies",
        collapsed && broad && reductions_ok,
        format!(
            "collapsed {collapsed}, broad {broad}, reduction {reductions_ok}; t bounds {}",
            bounds.join(" ")
        ),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_9_generation_without_identification() {
    let start = Instant::now();
    let id = estimate_curve(&ExperimentConfig::new("superfinite", Algorithm::SubsetId).grid([40]).seed(9)).unwrap();
    let gen = estimate_curve(
        &ExperimentConfig::new("superfinite", Algorithm::KmMembership)
            .grid([40])
            .seed(9)
            .mode(ErrorMode::GenerateConsistency),
    )
    .unwrap();
    let ie = id.rate_at(40).unwrap();
    let ge = gen.rate_at(40).unwrap();
    report(
        9,
        "superfinite: identification fails while generation succeeds",
        ie >= 0.5 && ge <= 0.02,
        format!("subset-id error(40) = {ie}, km-membership error(40) = {ge}"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}
