//! The maps ĝ, ḡ, Ḡ on pairs (a, R) ∈ Ḟ/Ḟ² × ℚ, the sets 𝒜 and 𝒜̄, and the
//! classical g(a), G(a) for lattice ratios a = π^R·u.
//!
//! ```
//! use spinor::dyadic::{build_field_model, FieldSpec};
//! use spinor::gmaps::{g_bar, big_g_bar};
//! use spinor::groups::{units, Alpha};
//!
//! let m = build_field_model(&FieldSpec::q2()).unwrap();
//! let minus_one = m.minus_one();
//! let r = Alpha::int(-2 * m.e() as i64);
//! assert_eq!(g_bar(&m, minus_one, r), units(&m));
//! assert_eq!(big_g_bar(&m, minus_one, r), units(&m));
//! ```

use serde::Serialize;

use crate::error::LatticeError;
use crate::field::{FieldModel, SquareClass};
use crate::groups::{norm_group, units, ups, Alpha, ClassSubgroup};

/// A pair (a, R): a square class with a rational weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ClassWithWeight {
    pub cls: SquareClass,
    #[serde(rename = "R")]
    pub r: Alpha,
}

impl ClassWithWeight {
    pub fn new(cls: SquareClass, r: impl Into<Alpha>) -> Self {
        ClassWithWeight { cls, r: r.into() }
    }
}

fn two_e(m: &FieldModel) -> Alpha {
    Alpha::int(2 * m.e() as i64)
}

fn e(m: &FieldModel) -> Alpha {
    Alpha::int(m.e() as i64)
}

fn d_neg(m: &FieldModel, a: SquareClass) -> Alpha {
    Alpha::from(m.d(m.neg(a)))
}

/// True at the point (−1, −2e).
pub fn is_minus_one_corner(m: &FieldModel, a: SquareClass, r: Alpha) -> bool {
    a == m.minus_one() && r == -two_e(m)
}

/// True at the point (−Δ, −2e).
pub fn is_minus_delta_corner(m: &FieldModel, a: SquareClass, r: Alpha) -> bool {
    a == m.neg(m.delta()) && r == -two_e(m)
}

/// (a, R) ∈ 𝒜̄.
pub fn in_a_bar(m: &FieldModel, a: SquareClass, r: Alpha) -> bool {
    (r + two_e(m) >= Alpha::ZERO && r + d_neg(m, a) > Alpha::ZERO) || is_minus_delta_corner(m, a, r)
}

/// Membership of π^R·a in 𝒜, where R must have the parity of ord a.
pub fn in_a(m: &FieldModel, a: SquareClass, r: i64) -> Result<bool, LatticeError> {
    if r.rem_euclid(2) as u32 != m.ord_parity(a) {
        return Err(LatticeError::ParityMismatch(r));
    }
    let r = Alpha::int(r);
    Ok(r + two_e(m) >= Alpha::ZERO && r + d_neg(m, a) >= Alpha::ZERO)
}

/// α(a, R) = min{R/2 + e, R + d(−a)}.
pub fn alpha_of(m: &FieldModel, a: SquareClass, r: Alpha) -> Alpha {
    if r == Alpha::NegInf {
        return Alpha::NegInf;
    }
    (r.half() + e(m)).min(r + d_neg(m, a))
}

/// ĝ(a, R) = ups^{α(a,R)} ∩ N(−a).
pub fn g_hat(m: &FieldModel, a: SquareClass, r: Alpha) -> ClassSubgroup {
    ups(m, alpha_of(m, a, r)).intersect(norm_group(m, m.neg(a)))
}

/// ḡ(a, R): ĝ except 𝒪*Ḟ² at (−1, −2e).
pub fn g_bar(m: &FieldModel, a: SquareClass, r: Alpha) -> ClassSubgroup {
    if is_minus_one_corner(m, a, r) {
        units(m)
    } else {
        g_hat(m, a, r)
    }
}

/// f(x) = x/2 − e for x ≤ 2e and x − 2e beyond, i.e. max{x/2 − e, x − 2e}.
pub fn f_of(m: &FieldModel, x: Alpha) -> Alpha {
    (x.half() - e(m)).max(x - two_e(m))
}

/// Inverse of f: min{2y + 2e, y + 2e}.
pub fn f_inv(m: &FieldModel, y: Alpha) -> Alpha {
    (y + y + two_e(m)).min(y + two_e(m))
}

/// Ḡ(a, R) = ⟨a⟩ ḡ(a, f(R)).
pub fn big_g_bar(m: &FieldModel, a: SquareClass, r: Alpha) -> ClassSubgroup {
    g_bar(m, a, f_of(m, r)).with(a)
}

/// g(a) for a = π^R·u ∈ 𝒜: ḡ(a, R) ∩ 𝒪*.
pub fn g_of(m: &FieldModel, a: SquareClass, r: i64) -> Result<ClassSubgroup, LatticeError> {
    if !in_a(m, a, r)? {
        return Err(LatticeError::NotInA);
    }
    Ok(g_bar(m, a, Alpha::int(r)).intersect(units(m)))
}

/// G(a) for a = π^R·u ∈ 𝒜: Ḡ(a, R).
pub fn big_g_of(m: &FieldModel, a: SquareClass, r: i64) -> Result<ClassSubgroup, LatticeError> {
    if !in_a(m, a, r)? {
        return Err(LatticeError::NotInA);
    }
    Ok(big_g_bar(m, a, Alpha::int(r)))
}

/// g(a) from its piecewise classical description, independent of ĝ.
pub fn g_classical(m: &FieldModel, a: SquareClass, r: i64) -> Result<ClassSubgroup, LatticeError> {
    if !in_a(m, a, r)? {
        return Err(LatticeError::NotInA);
    }
    let (ee, ra) = (m.e() as i64, Alpha::int(r));
    let o = units(m);
    if r > 2 * ee {
        return Ok(ClassSubgroup::trivial(m));
    }
    if is_minus_one_corner(m, a, ra) {
        return Ok(o);
    }
    let dn = d_neg(m, a);
    Ok(if dn > Alpha::int(ee) - ra.half() {
        ups(m, ra.half() + Alpha::int(ee)).intersect(o)
    } else {
        ups(m, ra + dn).intersect(norm_group(m, m.neg(a))).intersect(o)
    })
}

/// G(a) from its piecewise classical description, independent of ḡ and f.
pub fn big_g_classical(m: &FieldModel, a: SquareClass, r: i64) -> Result<ClassSubgroup, LatticeError> {
    if !in_a(m, a, r)? {
        return Err(LatticeError::NotInA);
    }
    let (ee, ra) = (Alpha::int(m.e() as i64), Alpha::int(r));
    if is_minus_one_corner(m, a, ra) {
        return Ok(units(m));
    }
    let dn = d_neg(m, a);
    let n = norm_group(m, m.neg(a));
    Ok(if r <= 2 * m.e() as i64 {
        let k = (Alpha::ratio(r, 4) + ee.half()).min(ra.half() + dn - ee);
        ups(m, k).intersect(n)
    } else {
        let k = ra.half().min(ra + dn - ee - ee);
        ups(m, k).intersect(n).with(a)
    })
}

/// JSON view of ḡ and Ḡ at one point.
#[derive(Clone, Debug, Serialize)]
pub struct GmapReport {
    pub a: String,
    #[serde(rename = "R")]
    pub r: Alpha,
    pub alpha: Alpha,
    pub f_r: Alpha,
    pub in_a_bar: bool,
    pub g_hat: crate::groups::GroupRender,
    pub g_bar: crate::groups::GroupRender,
    #[serde(rename = "G_bar")]
    pub big_g_bar: crate::groups::GroupRender,
}

pub fn gmap_report(m: &FieldModel, a: SquareClass, r: Alpha) -> GmapReport {
    GmapReport {
        a: m.label(a).to_string(),
        r,
        alpha: alpha_of(m, a, r),
        f_r: f_of(m, r),
        in_a_bar: in_a_bar(m, a, r),
        g_hat: g_hat(m, a, r).render(m),
        g_bar: g_bar(m, a, r).render(m),
        big_g_bar: big_g_bar(m, a, r).render(m),
    }
}
