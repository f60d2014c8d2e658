//! Run the ḡ/Ḡ identity battery over Q₂ and print one line per identity.
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::identities::{default_grid, run_identity_suite};

fn main() {
    let m = build_field_model(&FieldSpec::q2()).expect("Q2");
    for check in run_identity_suite(&m, &default_grid(&m)) {
        let status = if check.passed() { "ok" } else { "FAILED" };
        println!("{:<40} {:>8} cases  {status}", check.name, check.cases);
    }
}
