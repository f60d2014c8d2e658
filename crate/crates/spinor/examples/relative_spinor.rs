//! θ(X(M/N)) by the closed form, with its factors and the condition report.
use std::sync::Arc;

use spinor::bong::GoodBong;
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::relative::LatticePair;

fn main() {
    let m = Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2"));
    let c = |s: &str| m.class_by_label(s).expect("label");
    let bong = |xs: &[(&str, i64)]| {
        GoodBong::from_pairs(m.clone(), &xs.iter().map(|&(u, r)| (c(u), r)).collect::<Vec<_>>()).expect("good BONG")
    };
    let cases = [
        (bong(&[("1", 0), ("1", 1)]), bong(&[("1", 1), ("1", 2)])),
        (bong(&[("1", 0), ("1", 1), ("1", 2)]), bong(&[("1", 0)])),
        (bong(&[("1", 0), ("3", 0), ("1", 0)]), bong(&[("1", 1)])),
        (bong(&[("1", 0), ("7", -2)]), bong(&[("1", 0), ("7", -2)])),
    ];
    for (outer, inner) in cases {
        let p = LatticePair::new(outer, inner).expect("ranks");
        let v = p.theta_x();
        println!("{} ⊇ {}", p.outer(), p.inner());
        println!("  R1: {}  pair property A: {}  β = {}", p.condition_r1(), p.property_a(), p.beta());
        println!("  θ(X(M/N)) = {}  via {:?}", v.group.name(&m), v.branch);
        for f in &v.factors {
            println!("    Ḡ({}, {}) = {}", f.class, f.weight, f.group.name);
        }
        if let Some(r) = &v.conditions {
            println!("    parity {}  spacing {}  in units {}", r.parity, r.spacing.iter().all(|s| s.holds()), r.holds());
        }
    }
}
