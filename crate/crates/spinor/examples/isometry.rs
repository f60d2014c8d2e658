//! Rebase a lattice by BONG transforms and confirm the isometry test sees
//! through it, while a scaled copy is told apart.
use std::sync::Arc;

use spinor::bong::GoodBong;
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::oracle::rebasings;

fn main() {
    let m = Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2"));
    let c = |s: &str| m.class_by_label(s).expect("label");
    let l = GoodBong::from_pairs(m.clone(), &[(c("1"), 0), (c("3"), 1), (c("5"), 2)]).expect("good BONG");
    let variants = rebasings(&l);
    println!("{l} has {} presentations reachable in one transform", variants.len());
    for v in &variants {
        println!("  {v}  isometric: {}", l.isometric(v).expect("same rank"));
    }
    let scaled = l.scaled(1);
    let report = l.isometry_report(&scaled).expect("same rank");
    println!("{l} vs {scaled}: {report:?}");
}
