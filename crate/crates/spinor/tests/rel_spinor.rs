mod common;

use std::sync::{Arc, OnceLock};

use common::{bong, cls, q2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinor::bong::enumerate;
use spinor::field::FieldModel;
use spinor::gmaps::big_g_bar;
use spinor::groups::{norm_group, units, Alpha, ClassSubgroup};
use spinor::oracle::{generate_pairs, rebasings};
use spinor::relative::{Branch, LatticePair};
use spinor::spaces::QuadSpace;

fn certified() -> &'static [LatticePair] {
    static PAIRS: OnceLock<Vec<LatticePair>> = OnceLock::new();
    PAIRS.get_or_init(|| generate_pairs(&q2(), 3, -2, 3, 1))
}

fn pair(outer: spinor::bong::GoodBong, inner: spinor::bong::GoodBong) -> LatticePair {
    LatticePair::new(outer, inner).unwrap()
}

#[test]
fn r1_examples() {
    let m = q2();
    let l = bong(&m, &[("1", 0), ("1", 1)]);
    assert!(pair(l.clone(), l.clone()).condition_r1());
    assert!(pair(l.clone(), l.scaled(1)).condition_r1());
    let outer = bong(&m, &[("1", 0), ("1", 2), ("1", 2)]);
    let inner = bong(&m, &[("1", 0), ("1", 0)]);
    assert!(!pair(outer, inner).condition_r1());
    assert!(LatticePair::new(bong(&m, &[("1", 0)]), l).is_err());
}

#[test]
fn property_a_examples() {
    let m = q2();
    let with_a = bong(&m, &[("1", 0), ("1", 1), ("1", 2)]);
    assert!(with_a.prop_a());
    assert!(pair(with_a.clone(), with_a.clone()).property_a());
    let without = bong(&m, &[("1", 0), ("3", 0), ("1", 0)]);
    assert!(!without.prop_a());
    assert!(!pair(without.clone(), without).property_a());
    let line = bong(&m, &[("1", 0)]);
    assert!(pair(with_a, line).property_a());
}

#[test]
fn t_examples() {
    let m = q2();
    let outer = bong(&m, &[("1", 0), ("1", 1), ("1", 2)]);
    let p = pair(outer.clone(), bong(&m, &[("1", 0)]));
    assert_eq!(p.t(1), Alpha::int(1));
    assert_eq!(p.t(2), Alpha::NegInf);
    let same = pair(outer.clone(), outer.clone());
    for i in 1..3 {
        assert_eq!(same.t(i), Alpha::int(outer.gap(i)));
    }
    assert_eq!(same.beta(), Alpha::int(1));
    assert_eq!(pair(bong(&m, &[("1", 0)]), bong(&m, &[("1", 0)])).beta(), Alpha::PosInf);
}

#[test]
fn g_pair_examples() {
    let m = q2();
    for l in (1..=4).flat_map(|r| enumerate(&m, r, -2, 3)).filter(|l| l.prop_a()) {
        assert_eq!(pair(l.clone(), l.clone()).g_pair(), Ok(l.theta_plus()), "{l}");
    }
    let unary = bong(&m, &[("3", 0)]);
    assert!(pair(unary.clone(), unary).g_pair().unwrap().is_trivial());
    let outer = bong(&m, &[("1", 0), ("1", 1), ("1", 2)]);
    let line = bong(&m, &[("1", 0)]);
    let p = pair(outer.clone(), line);
    let endpoint = norm_group(&m, m.neg(outer.prod(1, 3) * cls(&m, "1")));
    assert!(endpoint.is_subset(p.g_pair().unwrap()));
    assert_eq!(p.factor(2), endpoint);
}

#[test]
fn theta_x_examples() {
    let m = q2();
    for l in (1..=4).flat_map(|r| enumerate(&m, r, -2, 3)) {
        let v = pair(l.clone(), l.clone()).theta_x();
        assert_eq!(v.group, l.theta_plus(), "{l}");
    }
    let binary = bong(&m, &[("1", 0), ("1", 1)]);
    for eta in binary.g(1).members() {
        let line = spinor::bong::GoodBong::from_pairs(m.clone(), &[(eta, 0)]).unwrap();
        assert_eq!(pair(binary.clone(), line).theta_x().group, binary.theta_plus());
    }
    let ternary = bong(&m, &[("1", 0), ("1", 1), ("1", 2)]);
    for eta in ternary.g(1).members() {
        let line = spinor::bong::GoodBong::from_pairs(m.clone(), &[(eta, 0)]).unwrap();
        let expected = norm_group(&m, m.neg(ternary.prod(1, 3) * eta)).product(ternary.theta_plus());
        assert_eq!(pair(ternary.clone(), line).theta_x().group, expected);
    }
    let far = pair(ternary, spinor::bong::GoodBong::new(m.clone(), vec![]).unwrap());
    assert_eq!(far.theta_x().branch, Branch::RankGapAtLeast3);
}

#[test]
fn condition_report_examples() {
    let m = q2();
    let bounded = bong(&m, &[("1", 0), ("7", -2)]);
    assert_eq!(bounded.theta_plus(), units(&m));
    let report = pair(bounded.clone(), bounded.clone()).condition_report().unwrap();
    assert!(report.holds());
    let parity_broken = pair(bong(&m, &[("1", 0), ("3", 0), ("1", 0)]), bong(&m, &[("1", 1)]));
    let r = parity_broken.condition_report().unwrap();
    assert!(!r.parity);
    assert_eq!(parity_broken.theta_x().branch, Branch::NoPropAFull);
    let no_r1 = pair(bong(&m, &[("1", 0), ("1", 2), ("1", 2)]), bong(&m, &[("1", 0), ("1", 0)]));
    assert!(no_r1.condition_report().is_err());
    assert_eq!(no_r1.theta_x().branch, Branch::R1Fails);
    assert!(no_r1.theta_x().group.is_full());
}

#[test]
fn condition_three_has_two_equal_forms() {
    for p in certified() {
        if let Ok(r) = p.condition_report() {
            assert!(r.forms_agree(), "{} / {}", p.outer(), p.inner());
        }
    }
}

#[test]
fn conditions_agree_with_closed_form_under_property_a() {
    for p in certified() {
        let v = p.theta_x();
        if v.branch == Branch::PropAClosedForm {
            let o = units(p.model());
            assert_eq!(v.conditions.unwrap().holds(), v.group.is_subset(o), "{} / {}", p.outer(), p.inner());
        }
    }
}

#[test]
fn parity_mismatch_forces_norm_groups() {
    for p in certified() {
        let v = p.theta_x();
        let (m, n) = (p.outer().rank(), p.inner().rank());
        for i in 1..=n.min(m.saturating_sub(1)) {
            let rs: i64 = p.outer().rs()[..i].iter().sum();
            let ss: i64 = p.inner().rs()[..i].iter().sum();
            if (rs - ss).rem_euclid(2) == 1 {
                let md = p.model();
                assert!(norm_group(md, md.neg(p.mixed(i))).is_subset(v.group), "{} / {}", p.outer(), p.inner());
            }
        }
    }
}

#[test]
fn absorption_and_tilde_identity() {
    for p in certified().iter().filter(|p| p.g_pair().is_ok()) {
        let md = p.model();
        let g = p.g_pair().unwrap();
        let o = p.outer();
        let tail = (2..o.rank()).fold(ClassSubgroup::trivial(md), |acc, i| {
            acc.product(big_g_bar(md, o.ratio(i), Alpha::int(o.gap(i))))
        });
        assert_eq!(p.g_tilde().unwrap(), g.product(tail));
        for i in 2..o.rank() {
            assert!(o.big_g(i).is_subset(g), "{} / {} at {i}", p.outer(), p.inner());
        }
    }
}

#[test]
fn appendix_checks() {
    let mut odd_seen = 0;
    for p in certified().iter().filter(|p| p.g_pair().is_ok()) {
        let r = p.appendix_report().unwrap();
        assert!(r.holds(), "{} / {}: {r:?}", p.outer(), p.inner());
        odd_seen += r.odd_gap_inclusions.len();
    }
    assert!(odd_seen > 0);
}

#[test]
fn strengthened_r1_when_not_full() {
    for p in certified() {
        if !p.theta_x().group.is_full() {
            assert!(p.strong_r1().shifted, "{} / {}", p.outer(), p.inner());
        }
    }
}

#[test]
fn spacing_consequences() {
    for p in certified() {
        let Ok(r) = p.condition_report() else { continue };
        if !r.spacing.iter().all(|s| s.holds()) {
            continue;
        }
        let (o, inner) = (p.outer(), p.inner());
        let s = |i: usize| if i <= inner.rank() { inner.r(i) } else { i64::MAX / 4 };
        for i in 2..=o.rank().saturating_sub(2) {
            assert!(o.r(i + 1) + o.r(i + 2) >= s(i - 1) + s(i), "{o} / {inner}");
        }
        if r.parity {
            let e = p.model().e() as i64;
            for i in 1..=o.rank().saturating_sub(2) {
                if o.r(i) == o.r(i + 2) {
                    assert_eq!((o.gap(i) / 2 - e).rem_euclid(2), 0, "{o} / {inner}");
                }
            }
        }
    }
}

#[test]
fn verdicts_do_not_depend_on_the_bong() {
    for p in certified().iter().step_by(7) {
        let v = p.theta_x();
        let report = p.condition_report().ok().map(|r| r.holds());
        for outer in rebasings(p.outer()) {
            for inner in rebasings(p.inner()) {
                let q = pair(outer.clone(), inner);
                assert_eq!(q.theta_x().group, v.group, "{} / {}", q.outer(), q.inner());
                assert_eq!(q.condition_report().ok().map(|r| r.holds()), report);
            }
        }
    }
}

fn diag(md: &FieldModel, xs: &[spinor::field::SquareClass]) -> QuadSpace {
    QuadSpace::from_diagonal(md, xs)
}

#[test]
fn two_of_three_representation_rule() {
    let m: Arc<FieldModel> = q2();
    let classes: Vec<_> = m.classes().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4000 {
        let i = rng.gen_range(1..=3);
        let a: Vec<_> = (0..=i).map(|_| classes[rng.gen_range(0..classes.len())]).collect();
        let b: Vec<_> = (0..i).map(|_| classes[rng.gen_range(0..classes.len())]).collect();
        let stmt_a = diag(&m, &a[..i]).represents(&m, diag(&m, &b[..i - 1])).unwrap();
        let stmt_b = diag(&m, &a).represents(&m, diag(&m, &b)).unwrap();
        let prod = |xs: &[spinor::field::SquareClass]| xs.iter().fold(spinor::field::SquareClass::ONE, |x, &y| x * y);
        let stmt_c = m.hilbert(prod(&a[..i]) * prod(&b), m.neg(prod(&a) * prod(&b[..i - 1]))) == 1;
        let count = [stmt_a, stmt_b, stmt_c].iter().filter(|&&x| x).count();
        assert_ne!(count, 2, "{a:?} {b:?}");
    }
}
