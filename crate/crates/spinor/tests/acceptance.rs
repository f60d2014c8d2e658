//! Acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor::bong::{enumerate, GoodBong, UpsRule};
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::field::{validate_model, DValue, FieldModel};
use spinor::gmaps::{big_g_classical, big_g_of, g_classical, g_of, in_a};
use spinor::groups::{norm_group, units};
use spinor::identities::{default_grid, run_identity_suite};
use spinor::oracle::{crosscheck_all, generate_pairs, random_pairs, theta_x_oracle, StepKind};
use spinor::relative::{Branch, LatticePair};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn q2() -> Arc<FieldModel> {
    Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2 model"))
}

fn lattices(m: &Arc<FieldModel>, max_rank: usize, lo: i64, hi: i64) -> Vec<GoodBong> {
    (1..=max_rank).flat_map(|r| enumerate(m, r, lo, hi)).collect()
}

fn field_axioms() -> Verdict {
    let start = Instant::now();
    let m = q2();
    let report = validate_model(&m);
    let failures: Vec<_> = report.failures().map(|c| c.name).collect();
    let mut image: Vec<String> = m.classes().map(|c| m.d(c).to_string()).collect();
    image.sort();
    image.dedup();
    let delta_ok = m.label(m.delta()) == "5";
    let minus_one = m.d(m.minus_one());
    let d_ok = minus_one == DValue::Fin(1) && m.e() == 1;
    let elapsed = start.elapsed();
    let image_ok = image == ["0", "1", "2", "inf"];
    verdict(
        failures.is_empty() && image_ok && delta_ok && d_ok && elapsed < Duration::from_secs(1),
        format!(
            "{} axiom checks, failures {failures:?}, Im d = {{{}}}, Δ = {}, d(-1) = {minus_one}, {elapsed:.2?}",
            report.checks.len(),
            image.join(","),
            m.label(m.delta())
        ),
    )
}

fn precision_stability() -> Verdict {
    let mut specs = vec![FieldSpec::q2()];
    specs.extend([-1, 2, -2, 5].map(FieldSpec::quadratic));
    let mut differing = Vec::new();
    for spec in &specs {
        let lo = build_field_model(&spec.with_precision(64));
        let hi = build_field_model(&spec.with_precision(128));
        match (lo, hi) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => differing.push(spec.kind.to_string()),
        }
    }
    verdict(differing.is_empty(), format!("{} fields at P=64 and P=128, differing: {differing:?}", specs.len()))
}

fn identity_suite() -> Verdict {
    let start = Instant::now();
    let mut summary = Vec::new();
    let mut pass = true;
    for spec in [FieldSpec::q2(), FieldSpec::quadratic(2)] {
        let m = build_field_model(&spec).expect("model");
        let checks = run_identity_suite(&m, &default_grid(&m));
        let cases: u64 = checks.iter().map(|c| c.cases).sum();
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).map(|c| c.name).collect();
        pass &= bad.is_empty();
        summary.push(format!("{}: {} identities, {cases} cases, failed {bad:?}", m.name(), checks.len()));
    }
    let elapsed = start.elapsed();
    verdict(pass && elapsed < Duration::from_secs(30), format!("{}; {elapsed:.2?}", summary.join("; ")))
}

fn g_consistency() -> Verdict {
    let mut points = 0;
    let mut bad = Vec::new();
    for spec in [FieldSpec::q2(), FieldSpec::quadratic(2), FieldSpec::quadratic(-1), FieldSpec::quadratic(5)] {
        let m = build_field_model(&spec).expect("model");
        let e = m.e() as i64;
        for a in m.classes() {
            for r in -2 * e - 2..=2 * e + 2 {
                if !matches!(in_a(&m, a, r), Ok(true)) {
                    continue;
                }
                points += 1;
                if g_of(&m, a, r) != g_classical(&m, a, r) || big_g_of(&m, a, r) != big_g_classical(&m, a, r) {
                    bad.push(format!("{}:({}, {r})", m.name(), m.label(a)));
                }
            }
        }
    }
    verdict(bad.is_empty() && points > 0, format!("{points} points of A over 4 fields, mismatches {bad:?}"))
}

fn theta_plus_refined() -> Verdict {
    let m = q2();
    let o = units(&m);
    let all = lattices(&m, 4, -2, 4);
    let (mut prop_a, mut non_a, mut maximal, mut bad) = (0, 0, 0, Vec::new());
    for l in &all {
        let t = l.theta_plus();
        if l.prop_a() {
            prop_a += 1;
            let even = l.theta_plus_refined(UpsRule::EvenGaps);
            let drop = l.theta_plus_refined(UpsRule::DropOddMaximum);
            if even != Ok(t) || drop != Ok(t) {
                bad.push(l.to_string());
            }
        } else {
            non_a += 1;
            let r = l.rs();
            let same_parity = r.iter().all(|x| (x - r[0]).rem_euclid(2) == 0);
            if !(t == o || t.is_full()) || (t == o && !same_parity) {
                bad.push(l.to_string());
            }
        }
        if l.rank() == 2 && l.binary_is_maximal() == Ok(true) && l.gap(1) != -2 * m.e() as i64 {
            maximal += 1;
            if t != norm_group(&m, m.neg(l.ratio(1))) {
                bad.push(l.to_string());
            }
        }
    }
    verdict(
        bad.is_empty() && maximal > 0,
        format!(
            "{} lattices: {prop_a} with property A, {non_a} without, {maximal} maximal binary; failures {}",
            all.len(),
            bad.len()
        ),
    )
}

fn random_chain<R: Rng>(l: &GoodBong, rng: &mut R) -> GoodBong {
    let mut cur = l.clone();
    for _ in 0..rng.gen_range(1..=6) {
        if cur.rank() < 2 {
            break;
        }
        let i = rng.gen_range(1..cur.rank());
        let choices: Vec<_> = cur.g(i).members().collect();
        let eta = *choices.choose(rng).expect("g(i) contains 1");
        cur = cur.transform(i, eta).expect("η ∈ g(i)");
    }
    cur
}

fn invariance(pairs: &[LatticePair]) -> Verdict {
    let m = q2();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sample = lattices(&m, 4, -2, 4);
    sample.shuffle(&mut rng);
    sample.truncate(1500);
    let mut bad = Vec::new();
    let mut changed = 0;
    for l in &sample {
        let k = random_chain(l, &mut rng);
        changed += (k != *l) as usize;
        if k.rs() != l.rs() || k.alphas() != l.alphas() || k.theta_plus() != l.theta_plus() || l.isometric(&k) != Ok(true)
        {
            bad.push(format!("{l} -> {k}"));
        }
    }
    let mut pair_sample: Vec<&LatticePair> = pairs.iter().filter(|p| p.rank_gap() <= 2).collect();
    pair_sample.shuffle(&mut rng);
    pair_sample.truncate(3000);
    for p in &pair_sample {
        let q = LatticePair::new(random_chain(p.outer(), &mut rng), random_chain(p.inner(), &mut rng)).expect("ranks");
        let before = (p.theta_x().group, p.condition_report().ok().map(|r| r.holds()));
        let after = (q.theta_x().group, q.condition_report().ok().map(|r| r.holds()));
        if before != after {
            bad.push(format!("{} / {}", p.outer(), p.inner()));
        }
    }
    verdict(
        bad.is_empty() && sample.len() >= 500,
        format!(
            "{} lattices ({changed} changed by their chain), {} pairs; failures {}",
            sample.len(),
            pair_sample.len(),
            bad.len()
        ),
    )
}

fn classification() -> Verdict {
    let m = q2();
    let e = m.e() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut set = lattices(&m, 3, -1, 3);
    set.shuffle(&mut rng);
    set.truncate(400);
    let mut with_variants = set.clone();
    for l in &set {
        with_variants.push(random_chain(l, &mut rng));
    }
    let mut bad = Vec::new();
    let mut iso_pairs = 0;
    let mut cor_checks = 0;
    for l in &set {
        if l.isometric(l) != Ok(true) {
            bad.push(format!("not reflexive: {l}"));
        }
        if l.isometric(&l.scaled(1)) != Ok(false) {
            bad.push(format!("scaled copy isometric: {l}"));
        }
    }
    for (x, y) in set.iter().zip(&with_variants[set.len()..]) {
        if x.isometric(y) != Ok(true) {
            bad.push(format!("variant not isometric: {x} / {y}"));
        }
    }
    for (i, x) in with_variants.iter().enumerate() {
        for y in &with_variants[i + 1..] {
            if x.rank() != y.rank() {
                continue;
            }
            let xy = x.isometric(y).expect("same rank");
            if xy != y.isometric(x).expect("same rank") {
                bad.push(format!("not symmetric: {x} / {y}"));
            }
            if !xy {
                continue;
            }
            iso_pairs += 1;
            for j in 1..x.rank() {
                if x.gap(j) > 2 * e {
                    cor_checks += 1;
                    if x.prod(1, j) != y.prod(1, j) {
                        bad.push(format!("a_(1,{j}) differs: {x} / {y}"));
                    }
                }
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{} lattices and variants, {iso_pairs} isometric pairs, {cor_checks} large-gap product checks; failures {}",
            with_variants.len(),
            bad.len()
        ),
    )
}

struct PairSet {
    exhaustive: Vec<LatticePair>,
    random: Vec<LatticePair>,
    built_in: Duration,
}

fn build_pairs() -> PairSet {
    let start = Instant::now();
    let m = q2();
    let exhaustive = generate_pairs(&m, 4, -2, 4, 1);
    let random = random_pairs(&m, 2000, &mut ChaCha8Rng::seed_from_u64(5));
    PairSet { exhaustive, random, built_in: start.elapsed() }
}

fn crosscheck(set: &PairSet) -> Verdict {
    let start = Instant::now();
    let bad_ex = crosscheck_all(&set.exhaustive);
    let bad_rand = crosscheck_all(&set.random);
    let elapsed = start.elapsed() + set.built_in;
    let mut gaps = BTreeMap::new();
    let (mut shrinks, mut scaled) = (0, 0);
    for p in &set.random {
        *gaps.entry(p.rank_gap()).or_insert(0) += 1;
        if p.inner().rank() > 0 && p.inner().r(1) > p.outer().r(1) + 1 {
            scaled += 1;
        }
        if let Ok((_, trace)) = theta_x_oracle(p) {
            shrinks += trace.steps.iter().any(|s| s.kind == StepKind::NormShrink) as usize;
        }
    }
    let covered = gaps.len() == 3 && shrinks > 0 && scaled > 0;
    verdict(
        bad_ex.is_empty() && bad_rand.is_empty() && covered && elapsed < Duration::from_secs(120),
        format!(
            "{} exhaustive + {} random pairs (gaps {gaps:?}, {shrinks} with norm shrinks, {scaled} with a deeper norm), \
             mismatches {} + {}, {elapsed:.2?}",
            set.exhaustive.len(),
            set.random.len(),
            bad_ex.len(),
            bad_rand.len()
        ),
    )
}

fn trivial_pairs() -> Verdict {
    let m = q2();
    let all = lattices(&m, 4, -2, 4);
    let bad: Vec<_> = all
        .iter()
        .filter(|l| LatticePair::new((*l).clone(), (*l).clone()).expect("ranks").theta_x().group != l.theta_plus())
        .map(|l| l.to_string())
        .collect();
    verdict(bad.is_empty(), format!("{} lattices, failures {}", all.len(), bad.len()))
}

fn appendix(set: &PairSet) -> Verdict {
    let (mut checked, mut odd, mut drops, mut brackets, mut bad) = (0, 0, 0, 0, Vec::new());
    for p in set.exhaustive.iter().chain(&set.random) {
        let Ok(r) = p.appendix_report() else { continue };
        checked += 1;
        odd += r.odd_gap_inclusions.len();
        brackets += r.bracket_bounds.len();
        drops += r.drop_rule.is_some() as usize;
        if !r.holds() {
            bad.push(format!("{} / {}", p.outer(), p.inner()));
        }
    }
    verdict(
        bad.is_empty() && odd > 0 && drops > 0,
        format!(
            "{checked} pairs with R1 and property A: {odd} odd-gap inclusions, {drops} drop-rule cases, \
             {brackets} bracket bounds; failures {}",
            bad.len()
        ),
    )
}

fn internal_checks(set: &PairSet) -> Verdict {
    let (mut reports, mut not_full, mut printed_form_misses, mut bad) = (0, 0, 0, Vec::new());
    for p in set.exhaustive.iter().chain(&set.random) {
        if let Ok(r) = p.condition_report() {
            reports += 1;
            if !r.forms_agree() {
                bad.push(format!("factor forms differ: {} / {}", p.outer(), p.inner()));
            }
        }
        let v = p.theta_x();
        if !v.group.is_full() && v.branch != Branch::RankGapAtLeast3 {
            not_full += 1;
            let s = p.strong_r1();
            if !s.shifted {
                bad.push(format!("strong R1 fails: {} / {}", p.outer(), p.inner()));
            }
            printed_form_misses += !s.unshifted as usize;
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{reports} condition reports, {not_full} non-full verdicts; failures {}; \
             info: printed index form of the dichotomy fails on {printed_form_misses}",
            bad.len()
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut results: Vec<(&str, Verdict, Duration)> = Vec::new();
    let mut run = |name: &'static str, f: &dyn Fn() -> Verdict| {
        let t = Instant::now();
        let v = f();
        results.push((name, v, t.elapsed()));
        let (name, v, d) = results.last().expect("just pushed");
        println!("{} [{:>2}] {name}: {} ({d:.2?})", if v.pass { "PASS" } else { "FAIL" }, results.len(), v.detail);
    };
    run("field axioms", &field_axioms);
    run("precision stability", &precision_stability);
    run("identity suite", &identity_suite);
    run("g/G consistency", &g_consistency);
    run("theta+ refined and verdict structure", &theta_plus_refined);
    let set = build_pairs();
    run("BONG invariance", &|| invariance(&set.exhaustive));
    run("classification coherence", &classification);
    run("closed form vs reduction", &|| crosscheck(&set));
    run("theta(X(M/M)) = theta+(M)", &trivial_pairs);
    run("appendix suite", &|| appendix(&set));
    run("condition forms and strengthened R1", &|| internal_checks(&set));
    let failed = results.iter().filter(|r| !r.1.pass).count();
    println!("{} of {} criteria passed in {:.1?}", results.len() - failed, results.len(), started.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
