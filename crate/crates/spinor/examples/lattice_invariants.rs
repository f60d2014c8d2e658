//! Invariants and θ(O⁺(L)) of a few lattices over Q₂, given by good BONGs.
use std::sync::Arc;

use spinor::bong::GoodBong;
use spinor::dyadic::{build_field_model, FieldSpec};

fn main() {
    let m = Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2"));
    let c = |s: &str| m.class_by_label(s).expect("label");
    let samples: [&[(&str, i64)]; 5] = [
        &[("1", 0), ("1", 1)],
        &[("1", 0), ("7", -2)],
        &[("1", 0), ("1", 1), ("1", 2)],
        &[("1", 0), ("3", 0), ("1", 0)],
        &[("1", 0), ("3", 2), ("5", 3), ("7", 6)],
    ];
    for entries in samples {
        let pairs: Vec<_> = entries.iter().map(|&(u, r)| (c(u), r)).collect();
        let l = GoodBong::from_pairs(m.clone(), &pairs).expect("good BONG");
        let inv = l.invariants();
        let g = l.theta_plus();
        println!("{l}");
        println!("  R = {:?}  α = {:?}", inv.r, inv.alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>());
        println!("  property A: {}  property B: {}  det = {}", inv.prop_a, inv.prop_b, inv.det);
        println!("  θ(O⁺) = {}  (index {})", g.name(&m), g.index_in_full());
    }
}
