//! Follow the chain L ⊃ L′ ⊃ L″ ⊃ … of sublattices spanned by vectors of
//! non-generic norm until θ becomes full or L′ stops being a lattice.
use std::sync::Arc;

use spinor::bong::{GoodBong, ShrinkResult};
use spinor::dyadic::{build_field_model, FieldSpec};

fn main() {
    let m = Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2"));
    let c = |s: &str| m.class_by_label(s).expect("label");
    for start in [
        vec![(c("1"), 0), (c("1"), 1)],
        vec![(c("1"), 0), (c("7"), -2)],
        vec![(c("1"), 0), (c("3"), 0), (c("1"), 2)],
    ] {
        let mut l = GoodBong::from_pairs(m.clone(), &start).expect("good BONG");
        println!("{l}  θ = {}", l.theta_plus().name(&m));
        for _ in 0..6 {
            match l.shrink_norm().expect("valid lattice") {
                ShrinkResult::NotALattice => {
                    println!("  L′ is not a lattice");
                    break;
                }
                ShrinkResult::Lattice { case, lattice } => {
                    println!("  {case:?} -> {lattice}  θ = {}", lattice.theta_plus().name(&m));
                    l = lattice;
                }
            }
        }
    }
}
