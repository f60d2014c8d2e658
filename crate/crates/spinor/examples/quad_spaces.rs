//! Ternary spaces over Q₂: classify diagonal forms and test which binary
//! spaces they represent.
use std::collections::BTreeMap;

use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::spaces::QuadSpace;

fn main() {
    let m = build_field_model(&FieldSpec::q2()).expect("Q2");
    let classes: Vec<_> = m.classes().collect();
    let mut by_invariants: BTreeMap<(String, i8), usize> = BTreeMap::new();
    for &a in &classes {
        for &b in &classes {
            for &c in &classes {
                let v = QuadSpace::from_diagonal(&m, &[a, b, c]);
                *by_invariants.entry((m.label(v.det).to_string(), v.hasse)).or_default() += 1;
            }
        }
    }
    println!("ternary diagonal forms by (det, hasse):");
    for ((det, hasse), count) in &by_invariants {
        println!("  det {det:>3}  hasse {hasse:+}  {count} forms");
    }
    let aniso = QuadSpace::from_diagonal(&m, &[classes[0], m.class_by_label("3").unwrap(), m.class_by_label("5").unwrap()]);
    let planes = classes
        .iter()
        .flat_map(|&a| classes.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| a <= b)
        .filter(|&(a, b)| aniso.represents(&m, QuadSpace::from_diagonal(&m, &[a, b])).unwrap())
        .count();
    println!("[1,3,5] represents {planes} of {} binary diagonal forms", classes.len() * (classes.len() + 1) / 2);
}
