//! Truncated 2-adic arithmetic for Q₂ and its quadratic extensions.
//!
//! Elements of the ring of integers are stored as coordinate pairs
//! `c0 + c1·w` modulo 2^P, where `w` generates an integral basis:
//! `w = √d` when d ≢ 1 (mod 4) and `w = (1+√d)/2` when d ≡ 5 (mod 8).
//! Valuations are read off the norm form. From this the backend derives the
//! finite [`FieldModel`]: unit square classes, the d-table and the Hilbert
//! pairing.

use std::collections::HashMap;
use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ArithError;
use crate::field::{DValue, FieldModel, ModelParts, SquareClass};

/// Default working precision in 2-adic digits per coordinate.
pub const DEFAULT_PRECISION: u32 = 64;

/// Which dyadic field to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "d")]
pub enum FieldKind {
    Q2,
    /// Q₂(√d) for a squarefree integer d that is not a 2-adic square.
    Quadratic(i64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Q2 => write!(f, "Q2"),
            FieldKind::Quadratic(d) => write!(f, "Q2(sqrt({d}))"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub precision: u32,
}

impl FieldSpec {
    pub fn q2() -> Self {
        FieldSpec { kind: FieldKind::Q2, precision: DEFAULT_PRECISION }
    }

    pub fn quadratic(d: i64) -> Self {
        FieldSpec { kind: FieldKind::Quadratic(d), precision: DEFAULT_PRECISION }
    }

    pub fn with_precision(self, precision: u32) -> Self {
        FieldSpec { precision, ..self }
    }

    /// Parse `q2`, `q2(-1)`, `q2:5`, `q2adjoin(2)` and similar.
    pub fn parse(s: &str) -> Result<Self, ArithError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        if t == "q2" || t == "qq2" {
            return Ok(Self::q2());
        }
        let rest = t
            .strip_prefix("q2adjoin")
            .or_else(|| t.strip_prefix("q2"))
            .ok_or_else(|| ArithError::UnsupportedExtension(s.to_string()))?;
        let rest = rest.trim_start_matches(':').trim_start_matches('(').trim_end_matches(')');
        let rest = rest.trim_start_matches("sqrt").trim_start_matches('(').trim_end_matches(')');
        let d: i64 = rest.parse().map_err(|_| ArithError::UnsupportedExtension(s.to_string()))?;
        Ok(Self::quadratic(d))
    }
}

/// An element of the ring of integers known modulo 2^P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedElement {
    coords: [BigInt; 2],
    exact_zero: bool,
}

impl TruncatedElement {
    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.coords[0], &self.coords[1])
    }
}

/// Ring of integers of Q₂ or of a quadratic extension, at fixed precision.
#[derive(Clone, Debug)]
pub struct DyadicRing {
    kind: FieldKind,
    precision: u32,
    modulus: BigInt,
    /// w² = t·w + n.
    t: i64,
    n: i64,
    deg: u32,
    e: u32,
    f: u32,
    pi: (i64, i64),
}

fn is_squarefree(d: i64) -> bool {
    let d = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl DyadicRing {
    pub fn new(spec: &FieldSpec) -> Result<Self, ArithError> {
        let precision = spec.precision;
        if precision < 4 {
            return Err(ArithError::InsufficientPrecision { needed: 4, have: precision });
        }
        let modulus = BigInt::one() << precision;
        let base = DyadicRing { kind: spec.kind, precision, modulus, t: 0, n: 0, deg: 1, e: 1, f: 1, pi: (2, 0) };
        match spec.kind {
            FieldKind::Q2 => Ok(base),
            FieldKind::Quadratic(d) => {
                if d == 0 || d == 1 || !is_squarefree(d) {
                    return Err(ArithError::UnsupportedExtension(format!("d = {d} is not a squarefree non-square")));
                }
                match d.rem_euclid(8) {
                    1 => Err(ArithError::UnsupportedExtension(format!("d = {d} is a square in Q2"))),
                    5 => Ok(DyadicRing { t: 1, n: (d - 1) / 4, deg: 2, e: 1, f: 2, pi: (2, 0), ..base }),
                    3 | 7 => Ok(DyadicRing { t: 0, n: d, deg: 2, e: 2, f: 1, pi: (1, 1), ..base }),
                    _ => Ok(DyadicRing { t: 0, n: d, deg: 2, e: 2, f: 1, pi: (0, 1), ..base }),
                }
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn residue_degree(&self) -> u32 {
        self.f
    }
    pub fn degree(&self) -> u32 {
        self.deg
    }
    /// Minimal polynomial data of the basis generator `w`: w² = t·w + n.
    pub fn generator_relation(&self) -> (i64, i64) {
        (self.t, self.n)
    }

    fn reduce(&self, x: BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn elem(&self, a: i64, b: i64) -> TruncatedElement {
        let b = if self.deg == 1 { 0 } else { b };
        TruncatedElement {
            coords: [self.reduce(BigInt::from(a)), self.reduce(BigInt::from(b))],
            exact_zero: a == 0 && b == 0,
        }
    }

    pub fn zero(&self) -> TruncatedElement {
        self.elem(0, 0)
    }

    pub fn pi(&self) -> TruncatedElement {
        self.elem(self.pi.0, self.pi.1)
    }

    pub fn add(&self, x: &TruncatedElement, y: &TruncatedElement) -> TruncatedElement {
        TruncatedElement {
            coords: [self.reduce(&x.coords[0] + &y.coords[0]), self.reduce(&x.coords[1] + &y.coords[1])],
            exact_zero: x.exact_zero && y.exact_zero,
        }
    }

    pub fn sub(&self, x: &TruncatedElement, y: &TruncatedElement) -> TruncatedElement {
        TruncatedElement {
            coords: [self.reduce(&x.coords[0] - &y.coords[0]), self.reduce(&x.coords[1] - &y.coords[1])],
            exact_zero: x.exact_zero && y.exact_zero,
        }
    }

    pub fn mul(&self, x: &TruncatedElement, y: &TruncatedElement) -> TruncatedElement {
        let [a, b] = &x.coords;
        let [c, d] = &y.coords;
        let bd = b * d;
        let c0 = a * c + &bd * self.n;
        let c1 = a * d + b * c + &bd * self.t;
        TruncatedElement { coords: [self.reduce(c0), self.reduce(c1)], exact_zero: x.exact_zero || y.exact_zero }
    }

    pub fn neg(&self, x: &TruncatedElement) -> TruncatedElement {
        self.sub(&self.zero(), x)
    }

    fn pow(&self, x: &TruncatedElement, k: u32) -> TruncatedElement {
        let mut r = self.elem(1, 0);
        for _ in 0..k {
            r = self.mul(&r, x);
        }
        r
    }

    /// Norm down to Q₂, modulo 2^P.
    fn norm(&self, x: &TruncatedElement) -> BigInt {
        let [a, b] = &x.coords;
        if self.deg == 1 {
            return a.clone();
        }
        self.reduce(a * a + a * b * self.t - b * b * self.n)
    }

    /// Conjugate of `x` (identity on Q₂).
    fn conj(&self, x: &TruncatedElement) -> TruncatedElement {
        if self.deg == 1 {
            return x.clone();
        }
        // conj(w) = t − w.
        let [a, b] = &x.coords;
        TruncatedElement {
            coords: [self.reduce(a + b * self.t), self.reduce(-b)],
            exact_zero: x.exact_zero,
        }
    }

    /// ord of `x`, or `None` for exact zero.
    pub fn ord(&self, x: &TruncatedElement) -> Result<Option<i64>, ArithError> {
        if x.exact_zero {
            return Ok(None);
        }
        let n = self.norm(x);
        if n.is_zero() {
            return Err(ArithError::IndeterminateAtPrecision { precision: self.precision });
        }
        let v = n.trailing_zeros().unwrap_or(0) as i64;
        Ok(Some(v / self.f as i64))
    }

    /// min(ord x, cap); never fails.
    fn ord_capped(&self, x: &TruncatedElement, cap: i64) -> i64 {
        let n = self.norm(x);
        if n.is_zero() {
            return cap;
        }
        (n.trailing_zeros().unwrap_or(0) as i64 / self.f as i64).min(cap)
    }

    fn require(&self, needed: u32) -> Result<(), ArithError> {
        if self.precision < needed {
            Err(ArithError::InsufficientPrecision { needed, have: self.precision })
        } else {
            Ok(())
        }
    }

    fn defect_precision(&self, ord: i64) -> u32 {
        let ord = ord.max(0) as u32;
        (ord + 2 * self.e + 4).max(self.f * (ord + 2 * self.e + 1) + 1)
    }

    /// Integral elements with coordinates in [0, 2^k), a full residue
    /// system modulo 2^k.
    fn residues(&self, k: u32) -> Vec<TruncatedElement> {
        let m = 1i64 << k;
        let bs = if self.deg == 1 { 1 } else { m };
        let mut out = Vec::new();
        for b in 0..bs {
            for a in 0..m {
                out.push(self.elem(a, b));
            }
        }
        out
    }

    /// Order of relative quadratic defect of `x`.
    pub fn defect_order(&self, x: &TruncatedElement) -> Result<DValue, ArithError> {
        let k = self.ord(x)?.ok_or(ArithError::IndeterminateAtPrecision { precision: self.precision })?;
        if k.rem_euclid(2) == 1 {
            return Ok(DValue::Fin(0));
        }
        self.require(self.defect_precision(k))?;
        let cap = k + 2 * self.e as i64 + 1;
        let scale = self.pow(&self.pi(), (k / 2).max(0) as u32);
        // Negative k never happens for integral elements.
        let mut best = 0;
        for y0 in self.residues(2) {
            let y = self.mul(&scale, &y0);
            let diff = self.sub(x, &self.mul(&y, &y));
            let v = self.ord_capped(&diff, cap);
            if v >= cap {
                return Ok(DValue::Inf);
            }
            best = best.max(v);
        }
        Ok(DValue::Fin((best - k) as u32))
    }

    /// Write `x` as π^k·u and return (u, k).
    fn split(&self, x: &TruncatedElement) -> Result<(TruncatedElement, i64), ArithError> {
        let k = self.ord(x)?.ok_or(ArithError::IndeterminateAtPrecision { precision: self.precision })?;
        self.require(self.f * k as u32 + 4)?;
        let mut u = x.clone();
        if self.pi == (2, 0) {
            for c in u.coords.iter_mut() {
                *c = &*c >> (k as usize);
            }
        } else {
            // x/π = x·conj(π)/N(π) with N(π) = 2·odd.
            let pbar = self.conj(&self.pi());
            let np = self.norm(&self.pi());
            let odd = &np >> 1usize;
            let inv = mod_inverse(&odd, &self.modulus);
            for _ in 0..k {
                let y = self.mul(&u, &pbar);
                u = TruncatedElement {
                    coords: [self.reduce((&y.coords[0] >> 1usize) * &inv), self.reduce((&y.coords[1] >> 1usize) * &inv)],
                    exact_zero: false,
                };
            }
        }
        Ok((u, k))
    }

    fn residue8(&self, u: &TruncatedElement) -> (u8, u8) {
        let m = BigInt::from(8);
        (
            u.coords[0].mod_floor(&m).to_u8().unwrap_or(0),
            u.coords[1].mod_floor(&m).to_u8().unwrap_or(0),
        )
    }

    fn is_unit_square(&self, u: &TruncatedElement) -> bool {
        let cap = 2 * self.e as i64 + 1;
        self.residues(2).iter().any(|y| self.ord_capped(&self.sub(u, &self.mul(y, y)), cap) >= cap)
    }

    /// Parse an integral element: `5`, `-3`, `1+w`, `3-2w`, `-w`, `a,b`.
    pub fn parse(&self, s: &str) -> Result<TruncatedElement, ArithError> {
        let (a, b) = parse_pair(s).ok_or_else(|| ArithError::Parse(s.to_string()))?;
        if self.deg == 1 && b != 0 {
            return Err(ArithError::Parse(s.to_string()));
        }
        Ok(self.elem(a, b))
    }

    /// Canonical printable form of (a, b).
    pub fn format_pair(&self, a: i64, b: i64) -> String {
        format_pair(a, b)
    }

    /// Q₂ closed formula, valid for deg 1 only.
    fn hilbert_q2(&self, x: &TruncatedElement, y: &TruncatedElement) -> Result<i8, ArithError> {
        let (u, a) = self.split(x)?;
        let (v, b) = self.split(y)?;
        let u8_ = self.residue8(&u).0 as i64;
        let v8 = self.residue8(&v).0 as i64;
        let eps = |t: i64| ((t - 1) / 2) & 1;
        let omega = |t: i64| ((t * t - 1) / 8) & 1;
        let s = eps(u8_) * eps(v8) + a * omega(v8) + b * omega(u8_);
        Ok(if s.rem_euclid(2) == 0 { 1 } else { -1 })
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    g.x.mod_floor(m)
}

fn parse_pair(s: &str) -> Option<(i64, i64)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.trim_start_matches('[').trim_end_matches(']').trim_start_matches('(').trim_end_matches(')');
    if let Some((a, b)) = t.split_once(',') {
        return Some((a.parse().ok()?, b.parse().ok()?));
    }
    if !t.contains('w') {
        return Some((t.parse().ok()?, 0));
    }
    // Split into signed terms.
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let (mut a, mut b) = (0i64, 0i64);
    for term in terms {
        if let Some(c) = term.strip_suffix('w') {
            let c = c.trim_end_matches('*');
            b += match c {
                "" | "+" => 1,
                "-" => -1,
                c => c.parse().ok()?,
            };
        } else {
            a += term.parse::<i64>().ok()?;
        }
    }
    Some((a, b))
}

fn format_pair(a: i64, b: i64) -> String {
    if b == 0 {
        return a.to_string();
    }
    let wt = match b {
        1 => "w".to_string(),
        -1 => "-w".to_string(),
        b => format!("{b}w"),
    };
    if a == 0 {
        wt
    } else if b > 0 {
        format!("{a}+{wt}")
    } else {
        format!("{a}{wt}")
    }
}

/// Canonical enumeration of nonzero integral elements used for labels.
fn canonical_pairs(deg: u32, max_height: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for h in 1..=max_height {
        if deg == 1 {
            out.push((h, 0));
            continue;
        }
        for bb in 0..=h {
            let aa = h - bb;
            let bsigns: &[i64] = if bb == 0 { &[1] } else { &[1, -1] };
            let asigns: &[i64] = if aa == 0 { &[1] } else { &[1, -1] };
            for &sb in bsigns {
                for &sa in asigns {
                    out.push((sa * aa, sb * bb));
                }
            }
        }
    }
    out
}

/// A concrete dyadic field together with its square-class model.
#[derive(Clone, Debug)]
pub struct DyadicField {
    ring: DyadicRing,
    model: FieldModel,
    /// Unit residues mod 8 → class bits.
    unit_table: HashMap<(u8, u8), u32>,
    reps: Vec<(i64, i64)>,
}

impl DyadicField {
    pub fn new(spec: &FieldSpec) -> Result<Self, ArithError> {
        let ring = DyadicRing::new(spec)?;
        ring.require(ring.defect_precision(0).max(ring.f * 2 + 4))?;

        // Partition unit residues mod 8 into square classes.
        let mut unit_residues = Vec::new();
        for u in ring.residues(3) {
            if ring.ord(&u)? == Some(0) {
                unit_residues.push(u);
            }
        }
        let mut class_reps: Vec<TruncatedElement> = Vec::new();
        let mut class_of: HashMap<(u8, u8), usize> = HashMap::new();
        for u in &unit_residues {
            let found = class_reps.iter().position(|r| ring.is_unit_square(&ring.mul(u, r)));
            let idx = found.unwrap_or_else(|| {
                class_reps.push(u.clone());
                class_reps.len() - 1
            });
            class_of.insert(ring.residue8(u), idx);
        }
        let unit_count = class_reps.len();
        let unit_dim = unit_count.trailing_zeros();
        if 1usize << unit_dim != unit_count || unit_dim != ring.e * ring.f + 1 {
            return Err(ArithError::UnsupportedExtension(format!(
                "found {unit_count} unit square classes, expected 2^{}",
                ring.e * ring.f + 1
            )));
        }
        let class_mul = |i: usize, j: usize| -> usize {
            let p = ring.mul(&class_reps[i], &class_reps[j]);
            class_of[&ring.residue8(&p)]
        };
        let d_of_rep: Vec<DValue> = class_reps.iter().map(|r| ring.defect_order(r)).collect::<Result<_, _>>()?;
        let one_idx = class_of[&ring.residue8(&ring.elem(1, 0))];
        let minus_idx = class_of[&ring.residue8(&ring.elem(-1, 0))];
        let delta_idx = (0..unit_count)
            .find(|&i| d_of_rep[i] == DValue::Fin(2 * ring.e))
            .ok_or_else(|| ArithError::UnsupportedExtension("no unit of defect 4O".into()))?;

        // Unit basis: −1, Δ, then canonical order.
        let mut span = vec![one_idx];
        let mut basis_idx = Vec::new();
        let mut candidates = vec![minus_idx, delta_idx];
        let pairs = canonical_pairs(ring.deg, 24);
        for &(a, b) in &pairs {
            let x = ring.elem(a, b);
            if ring.ord(&x)? == Some(0) {
                candidates.push(class_of[&ring.residue8(&x)]);
            }
        }
        for c in candidates {
            if span.contains(&c) {
                continue;
            }
            basis_idx.push(c);
            let more: Vec<usize> = span.iter().map(|&s| class_mul(s, c)).collect();
            span.extend(more);
            if span.len() == unit_count {
                break;
            }
        }
        // Coordinates of each unit class in the chosen basis (bits 1..).
        let mut bits_of = vec![0u32; unit_count];
        for mask in 0u32..(1 << basis_idx.len()) {
            let mut c = one_idx;
            for (k, &b) in basis_idx.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    c = class_mul(c, b);
                }
            }
            bits_of[c] = mask << 1;
        }
        let unit_table: HashMap<(u8, u8), u32> = class_of.iter().map(|(&r, &i)| (r, bits_of[i])).collect();

        let dim = unit_dim + 1;
        let size = 1usize << dim;
        let mut field = DyadicField {
            ring,
            model: FieldModel::new(placeholder_parts(dim))?,
            unit_table,
            reps: vec![(0, 0); size],
        };

        // Canonical representatives and labels.
        let mut seen = vec![false; size];
        let mut count = 0;
        for &(a, b) in &pairs {
            let x = field.ring.elem(a, b);
            let (c, _) = field.class_bits(&x)?;
            if !seen[c as usize] {
                seen[c as usize] = true;
                field.reps[c as usize] = (a, b);
                count += 1;
                if count == size {
                    break;
                }
            }
        }
        if count < size {
            return Err(ArithError::UnsupportedExtension("canonical representatives not found".into()));
        }
        let labels: Vec<String> = field.reps.iter().map(|&(a, b)| format_pair(a, b)).collect();

        let mut d = vec![DValue::Inf; size];
        for c in 0..size {
            d[c] = if c & 1 == 1 {
                DValue::Fin(0)
            } else {
                d_of_rep[bits_of.iter().position(|&b| b == c as u32).unwrap_or(0)]
            };
        }

        let mut basis_elems = vec![field.ring.pi];
        basis_elems.extend(basis_idx.iter().map(|&i| {
            let bits = bits_of[i] as usize;
            field.reps[bits]
        }));
        let mut basis_labels: Vec<String> = basis_elems.iter().map(|&(a, b)| format_pair(a, b)).collect();
        if field.ring.kind == FieldKind::Q2 {
            // Name the basis by the customary small integers 2, −1, 5.
            basis_labels = vec!["2".into(), "-1".into(), "5".into()];
        }

        let mut rows = vec![0u32; dim as usize];
        for (i, row) in rows.iter_mut().enumerate() {
            let xi = field.basis_element(i, &basis_elems);
            for j in 0..dim as usize {
                let xj = field.basis_element(j, &basis_elems);
                if field.hilbert_raw(&xi, &xj)? == -1 {
                    *row |= 1 << j;
                }
            }
        }
        let (minus_bits, _) = field.class_bits(&field.ring.elem(-1, 0))?;
        field.model = FieldModel::new(ModelParts {
            name: field.ring.kind.to_string(),
            e: field.ring.e,
            basis: basis_labels,
            labels: Some(labels),
            d,
            hilbert_rows: rows,
            pi: SquareClass::from_bits(1),
            minus_one: Some(SquareClass::from_bits(minus_bits)),
        })?;
        Ok(field)
    }

    fn basis_element(&self, i: usize, basis: &[(i64, i64)]) -> TruncatedElement {
        if i == 0 {
            self.ring.pi()
        } else {
            self.ring.elem(basis[i].0, basis[i].1)
        }
    }

    pub fn ring(&self) -> &DyadicRing {
        &self.ring
    }

    pub fn model(&self) -> &FieldModel {
        &self.model
    }

    pub fn into_model(self) -> FieldModel {
        self.model
    }

    /// Canonical representative (a, b) of a class.
    pub fn representative(&self, c: SquareClass) -> (i64, i64) {
        self.reps[c.index()]
    }

    fn class_bits(&self, x: &TruncatedElement) -> Result<(u32, i64), ArithError> {
        let (u, k) = self.ring.split(x)?;
        let bits = *self
            .unit_table
            .get(&self.ring.residue8(&u))
            .ok_or(ArithError::IndeterminateAtPrecision { precision: self.ring.precision })?;
        Ok((bits | (k.rem_euclid(2) as u32), k))
    }

    /// Square class of `x` and its order.
    pub fn square_class(&self, x: &TruncatedElement) -> Result<(SquareClass, i64), ArithError> {
        let (bits, k) = self.class_bits(x)?;
        Ok((SquareClass::from_bits(bits), k))
    }

    /// Unit part class and order, as used for BONG entries.
    pub fn unit_and_order(&self, x: &TruncatedElement) -> Result<(SquareClass, i64), ArithError> {
        let (c, k) = self.square_class(x)?;
        Ok((SquareClass::from_bits(c.bits() & !1), k))
    }

    pub fn defect_order(&self, x: &TruncatedElement) -> Result<DValue, ArithError> {
        self.ring.defect_order(x)
    }

    /// Hilbert symbol (x, y).
    pub fn hilbert_symbol(&self, x: &TruncatedElement, y: &TruncatedElement) -> Result<i8, ArithError> {
        self.hilbert_raw(x, y)
    }

    fn hilbert_raw(&self, x: &TruncatedElement, y: &TruncatedElement) -> Result<i8, ArithError> {
        if self.ring.deg == 1 {
            return self.ring.hilbert_q2(x, y);
        }
        let group = self.norm_group_search(x)?;
        let (c, _) = self.class_bits(y)?;
        Ok(if group.contains(&c) { 1 } else { -1 })
    }

    /// Classes of norms x² − a·y², closed under products, until the span has
    /// index at most 2. Independent of any closed formula.
    pub fn norm_group_search(&self, a: &TruncatedElement) -> Result<Vec<u32>, ArithError> {
        let size = 1usize << (self.ring.e * self.ring.f + 2);
        let (ca, _) = self.class_bits(a)?;
        if ca == 0 {
            return Ok((0..size as u32).collect());
        }
        let mut span: Vec<u32> = vec![0];
        let small = canonical_pairs(self.ring.deg, 6);
        let mut elems: Vec<TruncatedElement> = vec![self.ring.zero()];
        elems.extend(small.iter().map(|&(p, q)| self.ring.elem(p, q)));
        for x in &elems {
            for y in &elems {
                let v = self.ring.sub(&self.ring.mul(x, x), &self.ring.mul(a, &self.ring.mul(y, y)));
                if v.exact_zero || self.ring.norm(&v).is_zero() {
                    continue;
                }
                let (c, _) = self.class_bits(&v)?;
                if !span.contains(&c) {
                    let more: Vec<u32> = span.iter().map(|s| s ^ c).collect();
                    span.extend(more);
                    if span.len() * 2 >= size {
                        span.sort_unstable();
                        return Ok(span);
                    }
                }
            }
        }
        Err(ArithError::InsufficientPrecision { needed: self.ring.precision + 1, have: self.ring.precision })
    }

    /// Parse an element and return its (class, order).
    pub fn parse_class(&self, s: &str) -> Result<(SquareClass, i64), ArithError> {
        let x = self.ring.parse(s)?;
        self.square_class(&x)
    }
}

fn placeholder_parts(dim: u32) -> ModelParts {
    let size = 1usize << dim;
    let mut d = vec![DValue::Fin(1); size];
    d[0] = DValue::Inf;
    d[1] = DValue::Fin(2);
    ModelParts {
        name: String::new(),
        e: 1,
        basis: (0..dim).map(|i| format!("b{i}")).collect(),
        labels: None,
        d,
        hilbert_rows: vec![0; dim as usize],
        pi: SquareClass::from_bits(1),
        minus_one: Some(SquareClass::ONE),
    }
}

/// Build the square-class model of a concrete field.
pub fn build_field_model(spec: &FieldSpec) -> Result<FieldModel, ArithError> {
    Ok(DyadicField::new(spec)?.into_model())
}
