mod common;

use common::{bong, cls, q2};
use spinor::bong::{enumerate, BongEntry, GoodBong, ShrinkCase, ShrinkResult, UpsRule};
use spinor::error::{BongCondition, LatticeError};
use spinor::groups::{norm_group, units, Alpha};

#[test]
fn validation_examples() {
    let m = q2();
    assert!(GoodBong::from_pairs(m.clone(), &[(cls(&m, "1"), 0), (cls(&m, "1"), 1)]).is_ok());
    assert!(GoodBong::from_pairs(m.clone(), &[(cls(&m, "1"), 0), (cls(&m, "7"), -2)]).is_ok());
    let err = GoodBong::from_pairs(m.clone(), &[(cls(&m, "1"), 0), (cls(&m, "1"), -1)]).unwrap_err();
    assert_eq!(err, LatticeError::BadBong { index: 1, condition: BongCondition::Defect });
    let err = GoodBong::from_pairs(m.clone(), &[(cls(&m, "2"), 0)]).unwrap_err();
    assert_eq!(err, LatticeError::BadBong { index: 1, condition: BongCondition::UnitParity });
    let err = GoodBong::from_pairs(m.clone(), &[(cls(&m, "1"), 2), (cls(&m, "1"), 4), (cls(&m, "1"), 0)]);
    assert!(err.is_err());
}

#[test]
fn invariant_examples() {
    let m = q2();
    let l = bong(&m, &[("1", 0), ("1", 1)]);
    let inv = l.invariants();
    assert_eq!(inv.r, vec![0, 1]);
    assert_eq!(inv.alpha, vec![Alpha::int(1)]);
    assert_eq!(inv.norm_order, 0);
    assert_eq!(inv.vol_order, 1);
    let unary = bong(&m, &[("1", 0)]);
    assert_eq!(unary.vol_order(), 0);
    assert!(unary.det().is_one());
    let h = bong(&m, &[("1", 0), ("7", -2)]);
    assert_eq!(h.scale_order(), Alpha::int(-1));
}

#[test]
fn dual_examples() {
    let m = q2();
    let l = bong(&m, &[("1", 0), ("1", 1)]);
    assert_eq!(l.dual(), bong(&m, &[("1", -1), ("1", 0)]));
    assert_eq!(l.dual().dual(), l);
    assert_eq!(bong(&m, &[("1", 1)]).dual(), bong(&m, &[("1", -1)]));
}

#[test]
fn theta_plus_examples() {
    let m = q2();
    assert_eq!(bong(&m, &[("1", 0), ("7", -2)]).theta_plus(), units(&m));
    assert_eq!(bong(&m, &[("1", 0), ("1", 1)]).theta_plus(), norm_group(&m, m.neg(cls(&m, "2"))));
    assert_eq!(bong(&m, &[("1", 0), ("1", 1)]).theta_plus().name(&m), "N(14)");
    assert!(bong(&m, &[("1", 0)]).theta_plus().is_trivial());
}

#[test]
fn isometry_examples() {
    let m = q2();
    let l = bong(&m, &[("1", 0), ("1", 1)]);
    assert_eq!(l.isometric(&l), Ok(true));
    let k = bong(&m, &[("5", 0), ("5", 1)]);
    assert_eq!(l.isometric(&k), Ok(l.g(1).contains(cls(&m, "5"))));
    assert_eq!(l.isometric(&bong(&m, &[("1", 0)])), Err(LatticeError::RankMismatch(2, 1)));
    assert_eq!(l.isometric(&l.scaled(1)), Ok(false));
}

#[test]
fn transform_examples() {
    let m = q2();
    let l = bong(&m, &[("1", 0), ("3", 2), ("1", 3)]);
    assert_eq!(l.transform(1, cls(&m, "1")), Ok(l.clone()));
    for i in 1..l.rank() {
        for eta in l.g(i).members() {
            let t = l.transform(i, eta).unwrap();
            assert_eq!(t.prod(1, i), eta * l.prod(1, i));
            for j in (1..=l.rank()).filter(|&j| j != i) {
                assert_eq!(t.prod(1, j), l.prod(1, j));
            }
            assert_eq!(l.isometric(&t), Ok(true));
            for eta2 in l.g(i).members() {
                assert_eq!(t.transform(i, eta2).unwrap(), l.transform(i, eta * eta2).unwrap());
            }
        }
        for eta in m.unit_classes().filter(|&c| !l.g(i).contains(c)) {
            assert_eq!(l.transform(i, eta), Err(LatticeError::EtaNotInG(i)));
        }
    }
    assert_eq!(l.transform(3, cls(&m, "1")), Err(LatticeError::IndexOutOfRange(3)));
}

#[test]
fn maximality_examples() {
    let m = q2();
    assert_eq!(bong(&m, &[("1", 0), ("7", -2)]).binary_is_maximal(), Ok(true));
    assert_eq!(bong(&m, &[("1", 0), ("1", 1)]).binary_is_maximal(), Ok(true));
    assert_eq!(bong(&m, &[("1", 0), ("1", 2)]).binary_is_maximal(), Ok(false));
}

#[test]
fn shrink_examples() {
    let m = q2();
    assert_eq!(
        bong(&m, &[("1", 0)]).shrink_norm(),
        Ok(ShrinkResult::Lattice { case: ShrinkCase::Leading, lattice: bong(&m, &[("1", 2)]) })
    );
    assert_eq!(bong(&m, &[("1", 0), ("7", -2)]).shrink_norm(), Ok(ShrinkResult::NotALattice));
    assert_eq!(
        bong(&m, &[("1", 0), ("3", -2)]).shrink_norm(),
        Ok(ShrinkResult::Lattice { case: ShrinkCase::DeltaPlane, lattice: bong(&m, &[("1", 2), ("3", 0)]) })
    );
}

fn lattices(max_rank: usize, lo: i64, hi: i64) -> Vec<GoodBong> {
    let m = q2();
    (1..=max_rank).flat_map(|n| enumerate(&m, n, lo, hi)).collect()
}

#[test]
fn enumeration_matches_validation() {
    let m = q2();
    let all = enumerate(&m, 2, -2, 2);
    let mut brute = 0;
    for u1 in m.unit_classes() {
        for u2 in m.unit_classes() {
            for r1 in -2..=2 {
                for r2 in -2..=2 {
                    let e = vec![BongEntry::new(u1, r1), BongEntry::new(u2, r2)];
                    brute += GoodBong::new(m.clone(), e).is_ok() as usize;
                }
            }
        }
    }
    assert_eq!(all.len(), brute);
}

#[test]
fn shrink_is_valid_and_raises_the_norm() {
    for l in lattices(4, -2, 3) {
        if l.theta_plus().is_full() {
            assert!(matches!(l.shrink_norm(), Err(LatticeError::PreconditionFailed(_))));
            continue;
        }
        match l.shrink_norm().unwrap_or_else(|e| panic!("{l}: {e}")) {
            ShrinkResult::Lattice { lattice, .. } => {
                let step = lattice.norm_order() - l.norm_order();
                assert!(step == 1 || step == 2, "{l} -> {lattice}");
                assert_eq!(lattice.rank(), l.rank());
                assert_eq!(lattice.quad_space(), l.quad_space(), "{l} -> {lattice}");
            }
            ShrinkResult::NotALattice => assert_eq!(l.gap(1), -2),
        }
    }
}

#[test]
fn theta_plus_structure() {
    let m = q2();
    let o = units(&m);
    for l in lattices(4, -2, 3) {
        let t = l.theta_plus();
        if !l.prop_a() {
            assert!(t == o || t.is_full(), "{l}");
        } else if !l.prop_b() {
            assert!(t.is_full(), "{l}: property A without B must give the full group");
        }
        if t.is_subset(o) {
            let r = l.rs();
            assert!(r.iter().all(|x| (x - r[0]).rem_euclid(2) == 0), "{l}");
        }
        if l.prop_a() {
            assert_eq!(l.theta_plus_refined(UpsRule::EvenGaps), Ok(t), "{l}");
            assert_eq!(l.theta_plus_refined(UpsRule::DropOddMaximum), Ok(t), "{l}");
        } else {
            assert_eq!(l.theta_plus_refined(UpsRule::EvenGaps), Err(LatticeError::NotPropertyA));
        }
        for i in 1..l.rank() {
            assert!(l.big_g(i).is_subset(t), "{l}");
        }
        assert_eq!(l.dual().vol_order(), -l.vol_order());
    }
}

#[test]
fn maximal_binary_norm_group() {
    let m = q2();
    for l in enumerate(&m, 2, -2, 4) {
        if l.binary_is_maximal().unwrap() && l.gap(1) != -2 {
            assert_eq!(l.theta_plus(), norm_group(&m, m.neg(l.ratio(1))), "{l}");
        }
    }
}

#[test]
fn alpha_matches_binary_sections() {
    for l in lattices(4, -2, 3) {
        let t = l.theta_plus();
        if !(l.prop_b() || t.is_subset(units(l.model()))) {
            continue;
        }
        for i in 1..l.rank() {
            let e = l.entries();
            let section = GoodBong::new(l.model().clone(), vec![e[i - 1], e[i]]).unwrap();
            assert_eq!(l.alpha(i), section.alpha(1), "{l} at {i}");
        }
    }
}

#[test]
fn isometry_is_coherent_under_transforms() {
    let m = q2();
    for l in lattices(3, -1, 3) {
        let mut seen = vec![l.clone()];
        for i in 1..l.rank() {
            for eta in l.g(i).members() {
                seen.push(l.transform(i, eta).unwrap());
            }
        }
        for k in &seen {
            assert_eq!(l.isometric(k), Ok(true), "{l} vs {k}");
            assert_eq!(k.isometric(&l), Ok(true), "{k} vs {l}");
            assert_eq!(k.rs(), l.rs());
            assert_eq!(k.alphas(), l.alphas());
            assert_eq!(k.theta_plus(), l.theta_plus());
            assert_eq!(k.prop_b(), l.prop_b(), "{l} vs {k}");
            for i in 1..l.rank() {
                if l.gap(i) > 2 * m.e() as i64 {
                    assert_eq!(k.prod(1, i), l.prod(1, i));
                }
            }
        }
        assert_eq!(l.isometric(&l.scaled(1)), Ok(false));
    }
}
