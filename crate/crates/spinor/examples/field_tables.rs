//! Print the square-class tables of Q₂ and a few quadratic extensions.
use spinor::dyadic::{build_field_model, FieldSpec};

fn main() {
    let mut specs = vec![FieldSpec::q2()];
    specs.extend([-1, 2, 5].map(FieldSpec::quadratic));
    for spec in specs {
        let m = build_field_model(&spec).expect("field model");
        println!("{}: e = {}, dim = {}, basis = {:?}", m.name(), m.e(), m.dim(), m.basis());
        println!("  Delta = {}, -1 = {}", m.label(m.delta()), m.label(m.minus_one()));
        for c in m.classes() {
            let row: String = m.classes().map(|x| if m.hilbert(c, x) == 1 { '+' } else { '-' }).collect();
            println!("  {:>8}  d = {:>3}  {}", m.label(c), m.d(c).to_string(), row);
        }
    }
}
