//! Executable identity suite for the g-map calculus.
//!
//! Every check sweeps all classes (and pairs or triples of classes) against a
//! grid of weights and records the first violating tuple.

use rayon::prelude::*;
use serde::Serialize;

use crate::field::{FieldModel, SquareClass};
use crate::gmaps::*;
use crate::groups::{norm_group, quarter_grid, units, ups, Alpha, ClassSubgroup};

/// Outcome of one named identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: u64,
    pub violations: u64,
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

struct Tally {
    name: &'static str,
    cases: u64,
    violations: u64,
    witness: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, violations: 0, witness: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn done(self) -> IdentityCheck {
        IdentityCheck { name: self.name, cases: self.cases, violations: self.violations, witness: self.witness }
    }
}

/// Weights R for the sweep: quarter steps over [−2e−2, 2e+2].
pub fn default_grid(m: &FieldModel) -> Vec<Alpha> {
    let e = m.e() as i64;
    quarter_grid(-2 * e - 2, 2 * e + 2)
}

/// Integer weights over [−2e−2, 2e+2].
pub fn integer_grid(m: &FieldModel) -> Vec<Alpha> {
    let e = m.e() as i64;
    (-2 * e - 2..=2 * e + 2).map(Alpha::int).collect()
}

struct Ctx<'a> {
    m: &'a FieldModel,
    grid: &'a [Alpha],
    cls: Vec<SquareClass>,
    e: Alpha,
    te: Alpha,
}

impl Ctx<'_> {
    fn d(&self, c: SquareClass) -> Alpha {
        Alpha::from(self.m.d(c))
    }
    fn dn(&self, c: SquareClass) -> Alpha {
        self.d(self.m.neg(c))
    }
    fn l(&self, c: SquareClass) -> &str {
        self.m.label(c)
    }
    fn even(&self, c: SquareClass) -> bool {
        self.m.ord_parity(c) == 0
    }
    fn int_grid(&self) -> impl Iterator<Item = i64> + '_ {
        self.grid.iter().filter_map(|r| r.as_int())
    }
}

type Check = fn(&Ctx) -> IdentityCheck;

/// Run the whole suite on `m` over weight grid `grid`.
pub fn run_identity_suite(m: &FieldModel, grid: &[Alpha]) -> Vec<IdentityCheck> {
    let ctx = Ctx {
        m,
        grid,
        cls: m.classes().collect(),
        e: Alpha::int(m.e() as i64),
        te: Alpha::int(2 * m.e() as i64),
    };
    let checks: Vec<Check> = vec![
        ups_in_norm,
        ups_cap_norm_in_norm,
        min_max_defect,
        ups_filtration,
        f_shape,
        a_bar_shape,
        g_bar_in_units,
        g_bar_outside_a_bar,
        g_hat_two_cases,
        g_classical_agrees,
        g_bar_monotone_bounds,
        g_in_norm_group,
        g_product_same_weight,
        g_product_mixed_weights,
        big_g_structure,
        big_g_explicit,
        big_g_in_norm_group,
        big_g_product,
        big_g_in_units,
        big_g_in_units_closure,
        delta_membership,
        big_g_classical_agrees,
    ];
    checks.par_iter().map(|c| c(&ctx)).collect()
}

fn ups_in_norm(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("ups^a in N(c) iff a+d(c)>2e");
    for &al in x.grid {
        for &c in &x.cls {
            let lhs = ups(x.m, al).is_subset(norm_group(x.m, c));
            t.check(lhs == (al + x.d(c) > x.te), || format!("alpha={al} c={}", x.l(c)));
        }
    }
    t.done()
}

fn ups_cap_norm_in_norm(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("ups^a cap N(b) in N(c) iff a+max(d(bc),d(c))>2e");
    for &al in x.grid {
        for &b in &x.cls {
            let h = ups(x.m, al).intersect(norm_group(x.m, b));
            for &c in &x.cls {
                let rhs = al + x.d(b * c).max(x.d(c)) > x.te;
                t.check(h.is_subset(norm_group(x.m, c)) == rhs, || {
                    format!("alpha={al} b={} c={}", x.l(b), x.l(c))
                });
            }
        }
    }
    t.done()
}

fn min_max_defect(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("min(x,d(ab))+max(d(a),d(b))>2x iff d(a)+d(b)>2x");
    for &v in x.grid {
        for &a in &x.cls {
            for &b in &x.cls {
                let lhs = v.min(x.d(a * b)) + x.d(a).max(x.d(b)) > v + v;
                let rhs = x.d(a) + x.d(b) > v + v;
                t.check(lhs == rhs, || format!("x={v} a={} b={}", x.l(a), x.l(b)));
            }
        }
    }
    t.done()
}

fn ups_filtration(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("ups decreasing and ups^a ups^b = ups^min(a,b)");
    for &a in x.grid {
        for &b in x.grid {
            let (ua, ub) = (ups(x.m, a), ups(x.m, b));
            let ok = (a > b || ub.is_subset(ua)) && ua.product(ub) == ups(x.m, a.min(b));
            t.check(ok, || format!("a={a} b={b}"));
        }
    }
    t.done()
}

fn f_shape(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("f increasing bijection with f(2e)=0, f(-2e)=-2e");
    t.check(f_of(x.m, x.te) == Alpha::ZERO, || "f(2e)".into());
    t.check(f_of(x.m, -x.te) == -x.te, || "f(-2e)".into());
    for &r in x.grid {
        t.check(f_inv(x.m, f_of(x.m, r)) == r && f_of(x.m, f_inv(x.m, r)) == r, || format!("R={r}"));
        for &s in x.grid {
            if r < s {
                t.check(f_of(x.m, r) < f_of(x.m, s), || format!("R={r} S={s}"));
            }
        }
    }
    t.done()
}

fn a_bar_shape(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("A-bar alternative form and A as its integral preimage");
    let m = x.m;
    for &a in &x.cls {
        for &r in x.grid {
            let alt = (r + x.te > Alpha::ZERO && r + x.dn(a) > Alpha::ZERO)
                || is_minus_one_corner(m, a, r)
                || is_minus_delta_corner(m, a, r);
            t.check(alt == in_a_bar(m, a, r), || format!("a={} R={r}", x.l(a)));
            if let Some(ri) = r.as_int() {
                if ri.rem_euclid(2) as u32 == m.ord_parity(a) {
                    let ok = in_a(m, a, ri) == Ok(in_a_bar(m, a, r));
                    t.check(ok, || format!("integral a={} R={ri}", x.l(a)));
                }
            }
        }
    }
    t.done()
}

fn g_bar_in_units(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g-bar(a,R) in O*F*2 iff a=-Delta or (R+2e>=0 and R+d(-a)>0)");
    let (m, o) = (x.m, units(x.m));
    for &a in &x.cls {
        for &r in x.grid {
            let rhs = a == m.neg(m.delta()) || (r + x.te >= Alpha::ZERO && r + x.dn(a) > Alpha::ZERO);
            t.check(g_bar(m, a, r).is_subset(o) == rhs, || format!("a={} R={r}", x.l(a)));
        }
    }
    t.done()
}

fn g_bar_outside_a_bar(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g-bar(a,R)=N(-a) off A-bar");
    let m = x.m;
    for &a in &x.cls {
        for &r in x.grid {
            if !in_a_bar(m, a, r) {
                t.check(g_bar(m, a, r) == norm_group(m, m.neg(a)), || format!("a={} R={r}", x.l(a)));
            }
        }
    }
    t.done()
}

fn g_hat_two_cases(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g-hat two-case form and index 2 in ups^{R+d(-a)}");
    let m = x.m;
    for &a in &x.cls {
        for &r in x.grid {
            let gh = g_hat(m, a, r);
            if x.dn(a) > x.e - r.half() {
                t.check(gh == ups(m, r.half() + x.e), || format!("upper a={} R={r}", x.l(a)));
            } else {
                let u = ups(m, r + x.dn(a));
                let ok = gh == u.intersect(norm_group(m, m.neg(a)))
                    && g_bar(m, a, r) == gh
                    && u.order() == 2 * gh.order();
                t.check(ok, || format!("lower a={} R={r}", x.l(a)));
            }
        }
    }
    t.done()
}

fn g_classical_agrees(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g(a) = g-hat(a,R) cap O* = g-bar(a,R) cap O*");
    let (m, o) = (x.m, units(x.m));
    for &a in &x.cls {
        for r in x.int_grid() {
            if r.rem_euclid(2) as u32 != m.ord_parity(a) || in_a(m, a, r) != Ok(true) {
                continue;
            }
            let ra = Alpha::int(r);
            let g = g_classical(m, a, r).ok();
            let ok = g == g_of(m, a, r).ok()
                && g == Some(g_hat(m, a, ra).intersect(o))
                && g == Some(g_bar(m, a, ra).intersect(o));
            t.check(ok, || format!("a={} R={r}", x.l(a)));
        }
    }
    t.done()
}

fn g_bar_monotone_bounds(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g-bar decreasing, N(-a) for d(-a)<=-R, a in g-bar for R<=0, inside ups^R");
    let m = x.m;
    for &a in &x.cls {
        for &r in x.grid {
            let g = g_bar(m, a, r);
            for &s in x.grid {
                if r <= s {
                    t.check(g_bar(m, a, s).is_subset(g), || format!("mono a={} R={r} S={s}", x.l(a)));
                }
            }
            if x.dn(a) <= -r {
                t.check(g == norm_group(m, m.neg(a)), || format!("norm a={} R={r}", x.l(a)));
            }
            if r <= Alpha::ZERO {
                t.check(g.contains(a), || format!("contains a={} R={r}", x.l(a)));
            }
            t.check(g.is_subset(ups(m, r)), || format!("ups a={} R={r}", x.l(a)));
            if r > x.te {
                t.check(g.is_trivial(), || format!("trivial a={} R={r}", x.l(a)));
            }
        }
    }
    t.done()
}

fn g_in_norm_group(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g-hat(a,R) in N(c) iff R+d(-ac)+d(c)>2e, g-bar with corner exception");
    let m = x.m;
    for &a in &x.cls {
        for &r in x.grid {
            let (gh, gb) = (g_hat(m, a, r), g_bar(m, a, r));
            for &c in &x.cls {
                let base = r + x.dn(a * c) + x.d(c) > x.te;
                let n = norm_group(m, c);
                t.check(gh.is_subset(n) == base, || format!("hat a={} R={r} c={}", x.l(a), x.l(c)));
                let exc = is_minus_one_corner(m, a, r) && c == m.delta();
                t.check(gb.is_subset(n) == (base || exc), || {
                    format!("bar a={} R={r} c={}", x.l(a), x.l(c))
                });
            }
        }
    }
    t.done()
}

fn g_product_same_weight(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("g(a,R)g(b,R) = ups^{R+d(ab)}g(a,R) = ups^{R+d(ab)}g(b,R)");
    let m = x.m;
    let (mo, md) = (m.minus_one(), m.neg(m.delta()));
    for &r in x.grid {
        for &a in &x.cls {
            for &b in &x.cls {
                let u = ups(m, r + x.d(a * b));
                let (ha, hb) = (g_hat(m, a, r), g_hat(m, b, r));
                let p = ha.product(hb);
                t.check(p == u.product(ha) && p == u.product(hb), || {
                    format!("hat a={} b={} R={r}", x.l(a), x.l(b))
                });
                let exc = r == -x.te && ((a, b) == (mo, md) || (a, b) == (md, mo));
                if !exc {
                    let (ba, bb) = (g_bar(m, a, r), g_bar(m, b, r));
                    let p = ba.product(bb);
                    t.check(p == u.product(ba) && p == u.product(bb), || {
                        format!("bar a={} b={} R={r}", x.l(a), x.l(b))
                    });
                }
            }
        }
    }
    t.done()
}

fn g_product_mixed_weights(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("R>=S: g(a,R)g(b,S) = ups^{R+d(ab)}g(b,S)");
    let m = x.m;
    let (mo, md) = (m.minus_one(), m.neg(m.delta()));
    for &r in x.grid {
        for &s in x.grid.iter().filter(|&&s| s <= r) {
            for &a in &x.cls {
                for &b in &x.cls {
                    let u = ups(m, r + x.d(a * b));
                    let hb = g_hat(m, b, s);
                    t.check(g_hat(m, a, r).product(hb) == u.product(hb), || {
                        format!("hat a={} b={} R={r} S={s}", x.l(a), x.l(b))
                    });
                    let exc = (r == -x.te && (a, b) == (mo, md)) || (r == -x.te && s == -x.te && (a, b) == (md, mo));
                    if !exc {
                        let bb = g_bar(m, b, s);
                        t.check(g_bar(m, a, r).product(bb) == u.product(bb), || {
                            format!("bar a={} b={} R={r} S={s}", x.l(a), x.l(b))
                        });
                    }
                }
            }
        }
    }
    t.done()
}

fn big_g_structure(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G-bar decreasing, piecewise via g-bar, g-bar <= G-bar <= N(-a)");
    let (m, o) = (x.m, units(x.m));
    t.check(big_g_bar(m, m.minus_one(), -x.te) == o, || "G-bar(-1,-2e)".into());
    for &a in &x.cls {
        for &r in x.grid {
            let g = big_g_bar(m, a, r);
            for &s in x.grid.iter().filter(|&&s| s >= r) {
                t.check(big_g_bar(m, a, s).is_subset(g), || format!("mono a={} R={r} S={s}", x.l(a)));
            }
            let piece = if r <= x.te { g_bar(m, a, r.half() - x.e) } else { g_bar(m, a, r - x.te).with(a) };
            t.check(g == piece, || format!("piecewise a={} R={r}", x.l(a)));
            if !is_minus_one_corner(m, a, r) {
                t.check(g == g_hat(m, a, f_of(m, r)).with(a), || format!("hat a={} R={r}", x.l(a)));
            }
            let ok = g_bar(m, a, r).is_subset(g) && g.is_subset(norm_group(m, m.neg(a)));
            t.check(ok, || format!("sandwich a={} R={r}", x.l(a)));
        }
    }
    t.done()
}

fn big_g_explicit(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G-bar explicit ups forms, N(-a) cases, ups^{R/2+e} inside, R>4e");
    let m = x.m;
    for &a in &x.cls {
        let n = norm_group(m, m.neg(a));
        let dn = x.dn(a);
        for &r in x.grid {
            let g = big_g_bar(m, a, r);
            let corner = is_minus_one_corner(m, a, r);
            if !corner {
                let expect = if r <= x.te {
                    ups(m, (r.half().half() + x.e.half()).min(r.half() + dn - x.e)).intersect(n)
                } else {
                    ups(m, r.half().min(r + dn - x.te)).intersect(n).with(a)
                };
                t.check(g == expect, || format!("form a={} R={r}", x.l(a)));
            }
            let to_norm = dn <= x.e - r.half()
                || !in_a_bar(m, a, r)
                || (!x.even(a) && r <= x.te + Alpha::int(1))
                || (!x.even(a) && r.parity() == Some(1) && r <= x.te + Alpha::int(2));
            if to_norm {
                t.check(g == n, || format!("norm a={} R={r}", x.l(a)));
            }
            if dn > x.e - r.half() && !corner {
                t.check(ups(m, r.half() + x.e).is_subset(g), || format!("ups a={} R={r}", x.l(a)));
            }
            t.check(g.is_subset(ups(m, r - x.te).with(a)), || format!("upper a={} R={r}", x.l(a)));
            if r > x.te + x.te {
                t.check(g == ClassSubgroup::trivial(m).with(a), || format!("4e a={} R={r}", x.l(a)));
            }
        }
    }
    t.done()
}

fn big_g_in_norm_group(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G-bar(a,R) in N(c) iff f(R)+d(-ac)+d(c)>2e and (a,c)=1, with corner exception");
    let m = x.m;
    let three_e = x.te + x.e;
    for &a in &x.cls {
        for &r in x.grid {
            let g = big_g_bar(m, a, r);
            let exc_point = is_minus_one_corner(m, a, r);
            for &c in &x.cls {
                let lhs = g.is_subset(norm_group(m, c));
                let exc = exc_point && c == m.delta();
                let core = f_of(m, r) + x.dn(a * c) + x.d(c) > x.te && m.hilbert(a, c) == 1;
                t.check(lhs == (core || exc), || format!("a={} R={r} c={}", x.l(a), x.l(c)));
                let split = if r <= x.te {
                    r.half() + x.dn(a * c) + x.d(c) > three_e
                } else {
                    r + x.dn(a * c) + x.d(c) > x.te + x.te && m.hilbert(a, c) == 1
                };
                t.check(lhs == (split || exc), || format!("split a={} R={r} c={}", x.l(a), x.l(c)));
            }
        }
    }
    t.done()
}

fn big_g_product(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("R>=S: G(a,R)G(b,S) = <ab>ups^{f(R)+d(ab)}G(b,S)");
    let m = x.m;
    let (mo, md) = (m.minus_one(), m.neg(m.delta()));
    for &r in x.grid {
        for &s in x.grid.iter().filter(|&&s| s <= r) {
            for &a in &x.cls {
                for &b in &x.cls {
                    let exc = (r == -x.te && (a, b) == (mo, md)) || (r == -x.te && s == -x.te && (a, b) == (md, mo));
                    if exc {
                        continue;
                    }
                    let gb = big_g_bar(m, b, s);
                    let lhs = big_g_bar(m, a, r).product(gb);
                    let core = ups(m, f_of(m, r) + x.d(a * b)).product(gb);
                    let ok = lhs == core.with(a * b) && lhs == core.with(a) && (r > x.te || lhs == core);
                    t.check(ok, || format!("a={} b={} R={r} S={s}", x.l(a), x.l(b)));
                }
            }
        }
    }
    t.done()
}

fn big_g_in_units(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G-bar(a,R) in O*F*2 characterization and per-range form");
    let (m, o) = (x.m, units(x.m));
    for &a in &x.cls {
        let dn = x.dn(a);
        for &r in x.grid {
            let lhs = big_g_bar(m, a, r).is_subset(o);
            let rhs = dn == x.te || (x.even(a) && r >= -x.te && dn > x.e - r.half());
            t.check(lhs == rhs, || format!("a={} R={r}", x.l(a)));
            let per_range = if r < -x.te {
                dn == x.te
            } else if r == -x.te {
                dn >= x.te
            } else if r <= x.te {
                dn > x.e - r.half()
            } else {
                dn > Alpha::ZERO
            };
            t.check(lhs == per_range, || format!("range a={} R={r}", x.l(a)));
            if r >= x.te {
                t.check(lhs == x.even(a), || format!("even a={} R={r}", x.l(a)));
            }
        }
    }
    t.done()
}

fn big_g_in_units_closure(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G-bar((-1)^{s-1}a_1..a_s, R) in O*F*2 when each factor is");
    let (m, o) = (x.m, units(x.m));
    let grid: Vec<Alpha> = x.int_grid().map(Alpha::int).collect();
    let inside: Vec<Vec<bool>> = x
        .cls
        .iter()
        .map(|&a| grid.iter().map(|&r| big_g_bar(m, a, r).is_subset(o)).collect())
        .collect();
    let bounded: Vec<(SquareClass, usize)> = x
        .cls
        .iter()
        .flat_map(|&a| (0..grid.len()).map(move |i| (a, i)))
        .filter(|&(a, i)| inside[a.index()][i])
        .collect();
    let lo = grid.iter().position(|&r| r >= -x.te).unwrap_or(grid.len());
    let tail = |top: usize| lo.max(top)..grid.len();
    for &(a1, i1) in &bounded {
        for i in tail(i1) {
            t.check(inside[a1.index()][i], || format!("s=1 a={} R1={} R={}", x.l(a1), grid[i1], grid[i]));
        }
        for &(a2, i2) in &bounded {
            let p2 = m.neg(a1 * a2);
            for i in tail(i1.max(i2)) {
                t.check(inside[p2.index()][i], || {
                    format!("s=2 a=({},{}) R=({},{}) R={}", x.l(a1), x.l(a2), grid[i1], grid[i2], grid[i])
                });
            }
            for &(a3, i3) in &bounded {
                let p3 = a1 * a2 * a3;
                for i in tail(i1.max(i2).max(i3)) {
                    t.check(inside[p3.index()][i], || {
                        format!("s=3 a=({},{},{}) R={}", x.l(a1), x.l(a2), x.l(a3), grid[i])
                    });
                }
            }
        }
    }
    t.done()
}

fn delta_membership(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("Delta membership in g-bar, G-bar and g");
    let m = x.m;
    let (delta, four_e) = (m.delta(), x.te + x.te);
    for &a in &x.cls {
        for &r in x.grid {
            let lhs = g_bar(m, a, r).contains(delta);
            t.check(lhs == (x.even(a) && r <= x.te), || format!("g-bar a={} R={r}", x.l(a)));
            let lhs = big_g_bar(m, a, r).contains(delta);
            t.check(lhs == ((x.even(a) && r <= four_e) || a == delta), || {
                format!("G-bar a={} R={r}", x.l(a))
            });
        }
        for ri in x.int_grid() {
            if let Ok(g) = g_of(m, a, ri) {
                t.check(g.contains(delta) == (x.even(a) && ri <= 2 * m.e() as i64), || {
                    format!("g a={} R={ri}", x.l(a))
                });
            }
        }
    }
    t.done()
}

fn big_g_classical_agrees(x: &Ctx) -> IdentityCheck {
    let mut t = Tally::new("G(a) = G-bar(a,R) on A");
    let m = x.m;
    for &a in &x.cls {
        for ri in x.int_grid() {
            if ri.rem_euclid(2) as u32 != m.ord_parity(a) || in_a(m, a, ri) != Ok(true) {
                continue;
            }
            let ok = big_g_classical(m, a, ri).ok() == Some(big_g_bar(m, a, Alpha::int(ri)));
            t.check(ok, || format!("a={} R={ri}", x.l(a)));
        }
    }
    t.done()
}
