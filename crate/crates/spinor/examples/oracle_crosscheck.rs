//! Generate certified pairs, compare the closed form with the reduction,
//! and print one reduction trace.
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinor::dyadic::{build_field_model, FieldSpec};
use spinor::oracle::{crosscheck_all, generate_pairs, random_pairs, theta_x_oracle};

fn main() {
    let m = Arc::new(build_field_model(&FieldSpec::q2()).expect("Q2"));
    let start = Instant::now();
    let mut pairs = generate_pairs(&m, 3, -2, 3, 1);
    pairs.extend(random_pairs(&m, 500, &mut ChaCha8Rng::seed_from_u64(1)));
    let bad = crosscheck_all(&pairs);
    println!("{} pairs, {} disagreements, {:.1}s", pairs.len(), bad.len(), start.elapsed().as_secs_f64());
    let deep = pairs
        .iter()
        .filter_map(|p| theta_x_oracle(p).ok().map(|(g, t)| (p, g, t)))
        .max_by_key(|(_, _, t)| t.steps.len())
        .expect("pairs");
    println!("longest reduction, for {} ⊇ {}:", deep.0.outer(), deep.0.inner());
    for s in &deep.2.steps {
        println!("  {:?}: {}  ->  {}  [{}]", s.kind, s.before, s.after, s.factor_render.name);
    }
    println!("  result {}", deep.1.name(&m));
}
