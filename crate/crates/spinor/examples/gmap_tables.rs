//! ḡ(a, R) and Ḡ(a, R) over Q₂ for every class and a range of R.
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::gmaps::{big_g_bar, g_bar};
use spinor::groups::Alpha;

fn main() {
    let m = build_field_model(&FieldSpec::q2()).expect("Q2");
    let rs: Vec<Alpha> = (-4..=4).map(Alpha::int).chain([Alpha::PosInf]).collect();
    print!("{:>4}", "a");
    for r in &rs {
        print!(" {:>10}", format!("R={r}"));
    }
    println!();
    for a in m.classes() {
        print!("{:>4}", m.label(a));
        for &r in &rs {
            print!(" {:>10}", g_bar(&m, a, r).name(&m));
        }
        println!("   ḡ");
        print!("{:>4}", "");
        for &r in &rs {
            print!(" {:>10}", big_g_bar(&m, a, r).name(&m));
        }
        println!("   Ḡ");
    }
}
