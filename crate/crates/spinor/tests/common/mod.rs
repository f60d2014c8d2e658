#![allow(dead_code)]

use std::sync::Arc;

use spinor::bong::GoodBong;
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::field::{FieldModel, SquareClass};

pub fn q2() -> Arc<FieldModel> {
    Arc::new(build_field_model(&FieldSpec::q2()).unwrap())
}

pub fn cls(m: &FieldModel, label: &str) -> SquareClass {
    m.class_by_label(label).unwrap_or_else(|| panic!("no class {label}"))
}

/// A lattice from (unit label, R) pairs.
pub fn bong(m: &Arc<FieldModel>, pairs: &[(&str, i64)]) -> GoodBong {
    let pairs: Vec<(SquareClass, i64)> = pairs.iter().map(|&(u, r)| (cls(m, u), r)).collect();
    GoodBong::from_pairs(m.clone(), &pairs).unwrap()
}
