//! An independent evaluator of θ(X(M/N)) that peels the pair apart one
//! reduction at a time, and a generator of pairs N ⊆ M whose containment
//! holds by construction.
//!
//! The two reductions are: replace M by its sublattice M′ of non-norm
//! generators while nN ⊂ nM; and, once the norms agree, split off the common
//! first BONG vector, which contributes θ(O⁺(M)). Pairs that cannot occur as
//! genuine sublattices are detected when the second reduction fails.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bong::{enumerate, BongEntry, GoodBong, ShrinkResult};
use crate::error::OracleError;
use crate::field::{FieldModel, SquareClass};
use crate::groups::{norm_group, ClassSubgroup, GroupRender};
use crate::relative::LatticePair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    NormShrink,
    RankDrop,
    BaseCase,
    FullShortcut,
}

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub kind: StepKind,
    pub before: String,
    pub after: String,
    #[serde(skip)]
    pub factor: ClassSubgroup,
    #[serde(rename = "factor")]
    pub factor_render: GroupRender,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<Step>,
}

impl ReductionTrace {
    /// Product of all step factors.
    pub fn product(&self, m: &FieldModel) -> ClassSubgroup {
        self.steps.iter().fold(ClassSubgroup::trivial(m), |acc, s| acc.product(s.factor))
    }
}

fn summary(outer: &GoodBong, inner: &GoodBong) -> String {
    format!("{outer} ⊇ {inner}")
}

/// θ(X(M/N)) by reduction, with the trace of steps taken.
pub fn theta_x_oracle(pair: &LatticePair) -> Result<(ClassSubgroup, ReductionTrace), OracleError> {
    let md = pair.model();
    let mut outer = pair.outer().clone();
    let mut inner = pair.inner().clone();
    let mut trace = ReductionTrace::default();
    let mut budget = level_budget(&outer, &inner);
    let push = |trace: &mut ReductionTrace, kind, before: String, after: String, factor: ClassSubgroup| {
        trace.steps.push(Step { kind, before, after, factor, factor_render: factor.render(md) });
    };
    loop {
        let (m, n) = (outer.rank(), inner.rank());
        let here = summary(&outer, &inner);
        let full = ClassSubgroup::full(md);
        if m < n {
            return Err(OracleError::InconsistentPair(format!("{here}: inner rank exceeds outer rank")));
        }
        let theta_m = outer.theta_plus();
        if m - n >= 3 || theta_m.is_full() {
            push(&mut trace, StepKind::FullShortcut, here, "Ḟ".into(), full);
            return Ok((full, trace));
        }
        if n == 0 {
            let base = match m {
                0 | 1 => ClassSubgroup::trivial(md),
                2 => norm_group(md, md.neg(outer.det())),
                _ => full,
            };
            push(&mut trace, StepKind::BaseCase, here, base.name(md), base);
            let group = trace.product(md);
            return Ok((group, trace));
        }
        if budget == 0 {
            return Err(OracleError::DepthExceeded(level_budget(pair.outer(), pair.inner())));
        }
        budget -= 1;
        let (r1, s1) = (outer.r(1), inner.r(1));
        if s1 < r1 {
            return Err(OracleError::InconsistentPair(format!("{here}: nN is larger than nM")));
        }
        if r1 < s1 {
            match outer.shrink_norm()? {
                ShrinkResult::NotALattice => {
                    push(&mut trace, StepKind::FullShortcut, here, "M′ is not a lattice".into(), full);
                    return Ok((full, trace));
                }
                ShrinkResult::Lattice { lattice, .. } => {
                    push(&mut trace, StepKind::NormShrink, here, lattice.to_string(), ClassSubgroup::trivial(md));
                    outer = lattice;
                }
            }
            continue;
        }
        let e = md.e() as i64;
        let case_a = m < 3 || outer.r(1) < outer.r(3);
        let case_b = m >= 3 && outer.r(3) - outer.r(2) == -2 * e;
        let case_c = n >= 2 && outer.r(2) == inner.r(2);
        if !(case_a || case_b || case_c) {
            push(&mut trace, StepKind::FullShortcut, here, "no first vector in common".into(), full);
            return Ok((full, trace));
        }
        let eta = outer.a(1) * inner.a(1);
        let next_outer = if m == 1 {
            if !eta.is_one() {
                return Err(OracleError::InconsistentPair(format!("{here}: unary lattices differ")));
            }
            GoodBong::new(outer.model().clone(), vec![])?
        } else {
            if !outer.g(1).contains(eta) {
                return Err(OracleError::InconsistentPair(format!("{here}: b1/a1 is not in g(a2/a1)")));
            }
            let mut rest = outer.entries()[1..].to_vec();
            rest[0].unit = eta * rest[0].unit;
            GoodBong::new(outer.model().clone(), rest)
                .map_err(|err| OracleError::InconsistentPair(format!("{here}: M* is not a good BONG ({err})")))?
        };
        let next_inner = GoodBong::new(inner.model().clone(), inner.entries()[1..].to_vec())?;
        push(&mut trace, StepKind::RankDrop, here, summary(&next_outer, &next_inner), theta_m);
        outer = next_outer;
        inner = next_inner;
        budget = level_budget(&outer, &inner);
    }
}

/// S₁ − R₁ + n + 2 shrink-or-drop steps per rank level.
fn level_budget(outer: &GoodBong, inner: &GoodBong) -> usize {
    if inner.rank() == 0 || outer.rank() == 0 {
        return 2;
    }
    (inner.r(1) - outer.r(1)).max(0) as usize + inner.rank() + 2
}

/// Sublattices of `outer` of the same rank or lower whose containment
/// follows from the construction, explored to the given depth.
pub fn sublattices(outer: &GoodBong, depth: usize) -> Vec<GoodBong> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    collect_sublattices(outer, depth, &mut seen, &mut out);
    out
}

fn collect_sublattices(
    outer: &GoodBong,
    depth: usize,
    seen: &mut HashSet<Vec<BongEntry>>,
    out: &mut Vec<GoodBong>,
) {
    let mut add = |l: GoodBong, out: &mut Vec<GoodBong>| {
        if seen.insert(l.entries().to_vec()) {
            out.push(l);
        }
    };
    add(outer.clone(), out);
    add(outer.scaled(1), out);
    if outer.rank() <= 2 {
        add(GoodBong::new(outer.model().clone(), vec![]).expect("empty BONG"), out);
    }
    let mut deeper: Vec<GoodBong> = Vec::new();
    if !outer.theta_plus().is_full() {
        if let Ok(ShrinkResult::Lattice { lattice, .. }) = outer.shrink_norm() {
            add(lattice.clone(), out);
            deeper.push(lattice);
        }
    }
    if outer.rank() >= 2 {
        for eta in outer.g(1).members() {
            let e = outer.entries();
            let line = BongEntry::new(eta * e[0].unit, e[0].r);
            add(GoodBong::new(outer.model().clone(), vec![line]).expect("unary BONG"), out);
            if depth == 0 {
                continue;
            }
            let mut rest = e[1..].to_vec();
            rest[0].unit = eta * rest[0].unit;
            let Ok(star) = GoodBong::new(outer.model().clone(), rest) else { continue };
            for sub in sublattices(&star, depth - 1) {
                let mut entries = vec![line];
                entries.extend_from_slice(sub.entries());
                if let Ok(l) = GoodBong::new(outer.model().clone(), entries) {
                    add(l, out);
                }
            }
        }
    }
    if depth > 0 {
        deeper.push(outer.scaled(1));
        for l in deeper {
            for sub in sublattices(&l, depth - 1) {
                add(sub, out);
            }
        }
    }
}

/// Every transform t_i(η) of a lattice, including the lattice itself.
pub fn rebasings(l: &GoodBong) -> Vec<GoodBong> {
    let mut out = vec![l.clone()];
    for i in 1..l.rank() {
        for eta in l.g(i).members().filter(|c| !c.is_one()) {
            if let Ok(t) = l.transform(i, eta) {
                out.push(t);
            }
        }
    }
    out
}

/// Certified pairs with outer rank at most `max_rank`, R_i in `lo..=hi`, and
/// rank gap at most 2.
pub fn generate_pairs(model: &Arc<FieldModel>, max_rank: usize, lo: i64, hi: i64, depth: usize) -> Vec<LatticePair> {
    let outers: Vec<GoodBong> = (1..=max_rank).flat_map(|r| enumerate(model, r, lo, hi)).collect();
    outers
        .par_iter()
        .flat_map_iter(|m| {
            sublattices(m, depth)
                .into_iter()
                .filter(|n| n.rank() + 2 >= m.rank())
                .map(|n| LatticePair::new(m.clone(), n).expect("same model"))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Random certified pairs built by chains of the constructions above,
/// followed by rebasing both lattices.
pub fn random_pairs<R: Rng>(model: &Arc<FieldModel>, count: usize, rng: &mut R) -> Vec<LatticePair> {
    let mut out = Vec::with_capacity(count);
    let units: Vec<SquareClass> = model.unit_classes().collect();
    while out.len() < count {
        let rank = rng.gen_range(1..=5);
        let Some(outer) = random_bong(model, &units, rank, rng) else { continue };
        let mut inner = outer.clone();
        for _ in 0..rng.gen_range(0..4) {
            let subs = sublattices(&inner, 1);
            inner = subs.choose(rng).expect("nonempty").clone();
        }
        if outer.rank() - inner.rank() > 2 {
            continue;
        }
        let outer = rebasings(&outer).choose(rng).expect("nonempty").clone();
        let inner = rebasings(&inner).choose(rng).expect("nonempty").clone();
        out.push(LatticePair::new(outer, inner).expect("same model"));
    }
    out
}

fn random_bong<R: Rng>(model: &Arc<FieldModel>, units: &[SquareClass], rank: usize, rng: &mut R) -> Option<GoodBong> {
    for _ in 0..200 {
        let mut entries = Vec::with_capacity(rank);
        let mut r = rng.gen_range(-4..=4);
        for _ in 0..rank {
            entries.push(BongEntry::new(*units.choose(rng).expect("units"), r));
            r += rng.gen_range(-2..=4);
        }
        if let Ok(l) = GoodBong::new(model.clone(), entries) {
            return Some(l);
        }
    }
    None
}

/// Outcome of comparing the closed form with the oracle on one pair.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub pair: String,
    pub agree: bool,
    pub closed_form: String,
    #[serde(serialize_with = "outcome_json")]
    pub oracle: Result<String, String>,
    pub trace: Option<ReductionTrace>,
}

fn outcome_json<S: serde::Serializer>(r: &Result<String, String>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(1))?;
    match r {
        Ok(g) => map.serialize_entry("group", g)?,
        Err(e) => map.serialize_entry("error", e)?,
    }
    map.end()
}

pub fn crosscheck(pair: &LatticePair) -> CheckResult {
    let md = pair.model();
    let closed = pair.theta_x().group;
    let text = summary(pair.outer(), pair.inner());
    match theta_x_oracle(pair) {
        Ok((g, trace)) => CheckResult {
            pair: text,
            agree: g == closed,
            closed_form: closed.name(md),
            oracle: Ok(g.name(md)),
            trace: (g != closed).then_some(trace),
        },
        Err(err) => CheckResult {
            pair: text,
            agree: false,
            closed_form: closed.name(md),
            oracle: Err(err.to_string()),
            trace: None,
        },
    }
}

/// Cross-check a batch in parallel, returning the disagreements.
pub fn crosscheck_all(pairs: &[LatticePair]) -> Vec<CheckResult> {
    pairs.par_iter().map(crosscheck).filter(|c| !c.agree).collect()
}
