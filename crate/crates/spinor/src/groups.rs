//! Subgroups of Ḟ/Ḟ² as membership bitmasks, the filtration `ups^α`, and
//! norm groups.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::rational::Ratio;
use num::{ToPrimitive, Zero};
use serde::Serialize;

use crate::field::{DValue, FieldModel, SquareClass};

/// An exact extended real: ±∞ or a rational.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Alpha {
    NegInf,
    Fin(Ratio<i64>),
    PosInf,
}

impl Alpha {
    pub const ZERO: Alpha = Alpha::Fin(Ratio::new_raw(0, 1));

    pub fn int(n: i64) -> Alpha {
        Alpha::Fin(Ratio::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Alpha {
        Alpha::Fin(Ratio::new(n, d))
    }

    pub fn half(self) -> Alpha {
        match self {
            Alpha::Fin(r) => Alpha::Fin(r / 2),
            x => x,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Alpha::Fin(_))
    }

    pub fn as_ratio(self) -> Option<Ratio<i64>> {
        match self {
            Alpha::Fin(r) => Some(r),
            _ => None,
        }
    }

    /// Integer value, if finite and integral.
    pub fn as_int(self) -> Option<i64> {
        self.as_ratio().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn floor(self) -> Alpha {
        match self {
            Alpha::Fin(r) => Alpha::Fin(r.floor()),
            x => x,
        }
    }

    pub fn ceil(self) -> Alpha {
        match self {
            Alpha::Fin(r) => Alpha::Fin(r.ceil()),
            x => x,
        }
    }

    /// Parity of an integral value; `None` otherwise.
    pub fn parity(self) -> Option<i64> {
        self.as_int().map(|n| n.rem_euclid(2))
    }

    /// Parse `3`, `-5/2`, `1.25`, `inf`, `-inf`.
    pub fn parse(s: &str) -> Option<Alpha> {
        let t = s.trim();
        match t {
            "inf" | "+inf" | "∞" => return Some(Alpha::PosInf),
            "-inf" | "-∞" => return Some(Alpha::NegInf),
            _ => {}
        }
        if let Some((n, d)) = t.split_once('/') {
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            return Some(Alpha::ratio(n.trim().parse().ok()?, d));
        }
        if let Some((ip, fp)) = t.split_once('.') {
            let neg = ip.starts_with('-');
            let ip: i64 = if ip == "-" || ip.is_empty() { 0 } else { ip.parse().ok()? };
            let den = 10i64.checked_pow(fp.len() as u32)?;
            let frac: i64 = fp.parse().ok()?;
            let num = ip.abs() * den + frac;
            return Some(Alpha::ratio(if neg { -num } else { num }, den));
        }
        t.parse().ok().map(Alpha::int)
    }
}

impl PartialOrd for Alpha {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alpha {
    fn cmp(&self, other: &Self) -> Ordering {
        use Alpha::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl Add for Alpha {
    type Output = Alpha;
    fn add(self, rhs: Alpha) -> Alpha {
        use Alpha::*;
        match (self, rhs) {
            (Fin(a), Fin(b)) => Fin(a + b),
            (NegInf, PosInf) | (PosInf, NegInf) => panic!("undefined sum -inf + inf"),
            (NegInf, _) | (_, NegInf) => NegInf,
            _ => PosInf,
        }
    }
}

impl Neg for Alpha {
    type Output = Alpha;
    fn neg(self) -> Alpha {
        match self {
            Alpha::NegInf => Alpha::PosInf,
            Alpha::PosInf => Alpha::NegInf,
            Alpha::Fin(r) => Alpha::Fin(-r),
        }
    }
}

impl Sub for Alpha {
    type Output = Alpha;
    fn sub(self, rhs: Alpha) -> Alpha {
        self + (-rhs)
    }
}

impl From<i64> for Alpha {
    fn from(n: i64) -> Alpha {
        Alpha::int(n)
    }
}

impl From<DValue> for Alpha {
    fn from(d: DValue) -> Alpha {
        match d {
            DValue::Fin(v) => Alpha::int(v as i64),
            DValue::Inf => Alpha::PosInf,
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::NegInf => write!(f, "-inf"),
            Alpha::PosInf => write!(f, "inf"),
            Alpha::Fin(r) if r.is_integer() => write!(f, "{}", r.to_integer()),
            Alpha::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// A subgroup of Ḟ/Ḟ² stored as a membership bitmask over class indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassSubgroup {
    mask: u64,
    dim: u8,
}

impl fmt::Debug for ClassSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sgp{{{:#x}}}", self.mask)
    }
}

fn full_mask(dim: u8) -> u64 {
    if dim >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << dim)) - 1
    }
}

impl ClassSubgroup {
    pub fn trivial(m: &FieldModel) -> Self {
        ClassSubgroup { mask: 1, dim: m.dim() as u8 }
    }

    pub fn full(m: &FieldModel) -> Self {
        let dim = m.dim() as u8;
        ClassSubgroup { mask: full_mask(dim), dim }
    }

    /// Subgroup whose members satisfy `pred`; caller guarantees closure.
    fn from_pred(m: &FieldModel, pred: impl Fn(SquareClass) -> bool) -> Self {
        let mut mask = 0u64;
        for c in m.classes() {
            if pred(c) {
                mask |= 1 << c.index();
            }
        }
        ClassSubgroup { mask, dim: m.dim() as u8 }
    }

    pub fn mask(self) -> u64 {
        self.mask
    }

    pub fn contains(self, c: SquareClass) -> bool {
        self.mask >> c.index() & 1 == 1
    }

    pub fn is_subset(self, other: ClassSubgroup) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn order(self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_full(self) -> bool {
        self.mask == full_mask(self.dim)
    }

    pub fn is_trivial(self) -> bool {
        self.mask == 1
    }

    /// [Ḟ : H].
    pub fn index_in_full(self) -> u32 {
        (1u32 << self.dim) / self.order()
    }

    pub fn members(self) -> impl Iterator<Item = SquareClass> {
        let mask = self.mask;
        (0..64u32).filter(move |&i| mask >> i & 1 == 1).map(SquareClass::from_bits)
    }

    /// {h·c : h ∈ H}.
    fn translate(self, c: SquareClass) -> u64 {
        let mut out = 0u64;
        for h in self.members() {
            out |= 1 << (h * c).index();
        }
        out
    }

    /// H·⟨c⟩.
    pub fn with(self, c: SquareClass) -> ClassSubgroup {
        if self.contains(c) {
            return self;
        }
        ClassSubgroup { mask: self.mask | self.translate(c), dim: self.dim }
    }

    pub fn product(self, other: ClassSubgroup) -> ClassSubgroup {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = self;
        for c in other.members() {
            acc = acc.with(c);
        }
        acc
    }

    pub fn intersect(self, other: ClassSubgroup) -> ClassSubgroup {
        debug_assert_eq!(self.dim, other.dim);
        ClassSubgroup { mask: self.mask & other.mask, dim: self.dim }
    }

    /// A minimal generating set, greedily in class order.
    pub fn generators(self) -> Vec<SquareClass> {
        let mut acc = ClassSubgroup { mask: 1, dim: self.dim };
        let mut gens = Vec::new();
        for c in self.members() {
            if !acc.contains(c) {
                acc = acc.with(c);
                gens.push(c);
            }
        }
        gens
    }

    /// Name in the vocabulary F*, O*F*2, <Δ>F*2, F*2, N(c), ups^k,
    /// <a>ups^k∩N(c), or a generator list.
    pub fn name(self, m: &FieldModel) -> String {
        if self.is_full() {
            return "F*".into();
        }
        if self == units(m) {
            return "O*F*2".into();
        }
        if self == span(m, &[m.delta()]) && !m.delta().is_one() {
            return "<Δ>F*2".into();
        }
        if self.is_trivial() {
            return "F*2".into();
        }
        for c in m.classes() {
            if self == norm_group(m, c) {
                return format!("N({})", m.label(c));
            }
        }
        let levels = d_levels(m);
        for &k in &levels {
            if self == ups(m, Alpha::int(k)) {
                return format!("ups^{k}");
            }
        }
        for a in m.classes() {
            for &k in &levels {
                for c in m.classes() {
                    let g = ups(m, Alpha::int(k)).intersect(norm_group(m, c));
                    if !g.is_trivial() && self == g.with(a) {
                        let core = format!("ups^{k}∩N({})", m.label(c));
                        return if g.contains(a) { core } else { format!("<{}>{core}", m.label(a)) };
                    }
                }
            }
        }
        let gens: Vec<&str> = self.generators().into_iter().map(|c| m.label(c)).collect();
        format!("<{}>F*2", gens.join(","))
    }

    pub fn render(self, m: &FieldModel) -> GroupRender {
        GroupRender {
            members: self.members().map(|c| m.label(c).to_string()).collect(),
            name: self.name(m),
            index: self.index_in_full(),
        }
    }
}

/// JSON view of a subgroup.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupRender {
    pub members: Vec<String>,
    pub name: String,
    pub index: u32,
}

/// Finite values of d in increasing order, plus 2e+1 standing for "∞".
fn d_levels(m: &FieldModel) -> Vec<i64> {
    let mut v: Vec<i64> = m.classes().filter_map(|c| m.d(c).finite()).map(|x| x as i64).collect();
    v.sort_unstable();
    v.dedup();
    v.retain(|&x| x > 0);
    v
}

/// ups^α = {c : d(c) ≥ α}.
pub fn ups(m: &FieldModel, alpha: Alpha) -> ClassSubgroup {
    let mask = match alpha.ceil() {
        Alpha::NegInf => return ClassSubgroup::full(m),
        Alpha::PosInf => return ClassSubgroup::from_pred(m, |c| m.d(c) == DValue::Inf),
        Alpha::Fin(r) => m.ups_mask(r.to_integer()),
    };
    ClassSubgroup { mask, dim: m.dim() as u8 }
}

/// ups^α ∩ 𝒪*.
pub fn ups_in_units(m: &FieldModel, alpha: Alpha) -> ClassSubgroup {
    ups(m, alpha).intersect(unit_classes(m))
}

/// N(c) = {x : (x, c) = 1}.
pub fn norm_group(m: &FieldModel, c: SquareClass) -> ClassSubgroup {
    ClassSubgroup { mask: m.norm_mask(c), dim: m.dim() as u8 }
}

/// 𝒪*Ḟ².
pub fn units(m: &FieldModel) -> ClassSubgroup {
    unit_classes(m)
}

/// Unit classes 𝒪*/𝒪*² viewed inside Ḟ/Ḟ² (same set as 𝒪*Ḟ²).
pub fn unit_classes(m: &FieldModel) -> ClassSubgroup {
    ClassSubgroup::from_pred(m, |c| m.ord_parity(c) == 0)
}

pub fn span(m: &FieldModel, gens: &[SquareClass]) -> ClassSubgroup {
    gens.iter().fold(ClassSubgroup::trivial(m), |acc, &g| acc.with(g))
}

/// The integer part of an Alpha, saturating at ±∞ as `i64` extremes.
pub fn alpha_to_i64_floor(a: Alpha) -> i64 {
    match a {
        Alpha::NegInf => i64::MIN,
        Alpha::PosInf => i64::MAX,
        Alpha::Fin(r) => r.floor().to_integer().to_i64().unwrap_or(0),
    }
}

/// Quarter-step grid from `lo` to `hi` inclusive.
pub fn quarter_grid(lo: i64, hi: i64) -> Vec<Alpha> {
    (4 * lo..=4 * hi).map(|k| Alpha::ratio(k, 4)).collect()
}

/// True iff `r` has no fractional part (helper for rational grids).
pub fn is_integral(r: Ratio<i64>) -> bool {
    r.is_integer() || r.numer().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{build_field_model, FieldSpec};

    fn q2() -> FieldModel {
        build_field_model(&FieldSpec::q2()).unwrap()
    }

    fn set(m: &FieldModel, labels: &[&str]) -> ClassSubgroup {
        span(m, &labels.iter().map(|l| m.class_by_label(l).unwrap()).collect::<Vec<_>>())
    }

    #[test]
    fn alpha_order_and_arith() {
        assert!(Alpha::NegInf < Alpha::int(-100));
        assert!(Alpha::ratio(7, 4) < Alpha::int(2));
        assert_eq!(Alpha::int(3).half(), Alpha::ratio(3, 2));
        assert_eq!(Alpha::ratio(-3, 2).floor(), Alpha::int(-2));
        assert_eq!(Alpha::parse("-5/4"), Some(Alpha::ratio(-5, 4)));
        assert_eq!(Alpha::parse("1.25"), Some(Alpha::ratio(5, 4)));
        assert_eq!(Alpha::parse("-0.5"), Some(Alpha::ratio(-1, 2)));
        assert_eq!(Alpha::parse("inf"), Some(Alpha::PosInf));
        assert_eq!(Alpha::PosInf + Alpha::int(3), Alpha::PosInf);
    }

    #[test]
    fn ups_examples() {
        let m = q2();
        assert!(ups(&m, Alpha::ZERO).is_full());
        assert_eq!(ups(&m, Alpha::int(1)), set(&m, &["3", "5"]));
        assert_eq!(ups(&m, Alpha::int(2)), set(&m, &["5"]));
        assert!(ups(&m, Alpha::int(3)).is_trivial());
        assert_eq!(ups(&m, Alpha::ratio(1, 4)), ups(&m, Alpha::int(1)));
        assert_eq!(ups_in_units(&m, Alpha::ZERO), set(&m, &["3", "5"]));
        assert_eq!(ups_in_units(&m, Alpha::int(2)), set(&m, &["5"]));
        assert!(ups_in_units(&m, Alpha::int(3)).is_trivial());
    }

    #[test]
    fn norm_groups() {
        let m = q2();
        assert!(norm_group(&m, SquareClass::ONE).is_full());
        assert_eq!(norm_group(&m, m.delta()), units(&m));
        let n3 = norm_group(&m, m.class_by_label("3").unwrap());
        let mut got: Vec<&str> = n3.members().map(|c| m.label(c)).collect();
        got.sort();
        assert_eq!(got, vec!["1", "14", "5", "6"]);
        assert_eq!(units(&m).index_in_full(), 2);
        assert_eq!(set(&m, &["5"]).product(n3), set(&m, &["5", "6", "14"]));
    }

    #[test]
    fn names() {
        let m = q2();
        assert_eq!(ClassSubgroup::full(&m).name(&m), "F*");
        assert_eq!(units(&m).name(&m), "O*F*2");
        assert_eq!(set(&m, &["5"]).name(&m), "<Δ>F*2");
        assert_eq!(ClassSubgroup::trivial(&m).name(&m), "F*2");
        assert_eq!(set(&m, &["6", "14"]).name(&m), "N(3)");
        assert_eq!(set(&m, &["2"]).name(&m), "<2>F*2");
    }
}
