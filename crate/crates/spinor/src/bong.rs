//! Lattices presented by good BONGs ≺a_1, …, a_n≻ with a_i = π^{R_i}·u_i.
//!
//! Only the data (u_i, R_i) is stored. Every operation here is a function of
//! that data: invariants, duality, θ(O⁺(L)), the isometry test, the
//! transforms t_i(η), and the passage to the sublattice L′ of non-norm
//! generators.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{BongCondition, LatticeError};
use crate::field::{FieldModel, SquareClass};
use crate::gmaps::{big_g_bar, g_bar, in_a};
use crate::groups::{norm_group, units, ups, Alpha, ClassSubgroup};
use crate::spaces::QuadSpace;

/// One BONG entry: a unit class and the order R.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BongEntry {
    pub unit: SquareClass,
    pub r: i64,
}

impl BongEntry {
    pub fn new(unit: SquareClass, r: i64) -> Self {
        BongEntry { unit, r }
    }
}

#[derive(Clone)]
pub struct GoodBong {
    model: Arc<FieldModel>,
    entries: Vec<BongEntry>,
}

impl PartialEq for GoodBong {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.entries == other.entries
    }
}

impl Eq for GoodBong {}

impl fmt::Debug for GoodBong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GoodBong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e.r {
                0 => self.model.label(e.unit).to_string(),
                1 => format!("π·{}", self.model.label(e.unit)),
                r => format!("π^{r}·{}", self.model.label(e.unit)),
            })
            .collect();
        write!(f, "≺{}≻", parts.join(", "))
    }
}

pub(crate) fn same_model(a: &Arc<FieldModel>, b: &Arc<FieldModel>) -> bool {
    Arc::ptr_eq(a, b) || a.name() == b.name()
}

fn dv(m: &FieldModel, c: SquareClass) -> Alpha {
    Alpha::from(m.d(c))
}

/// Invariants of a lattice read off a good BONG.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeInvariants {
    #[serde(rename = "R")]
    pub r: Vec<i64>,
    pub alpha: Vec<Alpha>,
    pub norm_order: i64,
    pub scale_order: Alpha,
    pub vol_order: i64,
    pub det: String,
    #[serde(rename = "propA")]
    pub prop_a: bool,
    #[serde(rename = "propB")]
    pub prop_b: bool,
}

/// Which branch of the L′ computation applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShrinkCase {
    /// R₂ − R₁ = −2e and a₁a₂ ∈ −Δ: both leading orders rise by 2.
    DeltaPlane,
    /// Non-maximal leading pair (or rank 1): R₁ rises by 2.
    Leading,
    /// Maximal leading pair: both leading orders rise by 1.
    MaximalPair,
    /// R₁ = R₃: the alternating rebased presentation.
    Alternating,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShrinkResult {
    Lattice { case: ShrinkCase, lattice: GoodBong },
    NotALattice,
}

/// How the ups-factor is treated when recomputing θ(O⁺(L)) for property A.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpsRule {
    /// Minimum of (R_{i+2} − R_i)/2 over even gaps only.
    EvenGaps,
    /// Drop ups^α entirely when its exponent is attained at an odd gap.
    DropOddMaximum,
}

/// Per-condition outcome of the isometry test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsometryReport {
    pub spaces: bool,
    pub orders: bool,
    pub alphas: bool,
    pub defects: bool,
    pub representations: bool,
    pub witness: Option<String>,
}

impl IsometryReport {
    pub fn isometric(&self) -> bool {
        self.spaces && self.orders && self.alphas && self.defects && self.representations
    }
}

impl GoodBong {
    /// Validates the good-BONG conditions and builds the lattice.
    pub fn new(model: Arc<FieldModel>, entries: Vec<BongEntry>) -> Result<Self, LatticeError> {
        let m = &*model;
        let two_e = 2 * m.e() as i64;
        let bad = |index: usize, condition| Err(LatticeError::BadBong { index, condition });
        for (k, e) in entries.iter().enumerate() {
            if m.ord_parity(e.unit) != 0 {
                return bad(k + 1, BongCondition::UnitParity);
            }
        }
        for k in 0..entries.len() {
            if k + 2 < entries.len() && entries[k].r > entries[k + 2].r {
                return bad(k + 1, BongCondition::Goodness);
            }
            if k + 1 < entries.len() {
                let gap = entries[k + 1].r - entries[k].r;
                if gap + two_e < 0 {
                    return bad(k + 1, BongCondition::TwoE);
                }
                let ratio = m.with_order(entries[k].unit * entries[k + 1].unit, gap);
                if Alpha::int(gap) + dv(m, m.neg(ratio)) < Alpha::ZERO {
                    return bad(k + 1, BongCondition::Defect);
                }
            }
        }
        Ok(GoodBong { model, entries })
    }

    pub fn from_pairs(model: Arc<FieldModel>, pairs: &[(SquareClass, i64)]) -> Result<Self, LatticeError> {
        Self::new(model, pairs.iter().map(|&(u, r)| BongEntry::new(u, r)).collect())
    }

    pub fn model(&self) -> &Arc<FieldModel> {
        &self.model
    }

    pub fn entries(&self) -> &[BongEntry] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// R_i, 1-based.
    pub fn r(&self, i: usize) -> i64 {
        self.entries[i - 1].r
    }

    pub fn rs(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.r).collect()
    }

    /// The square class of a_i, 1-based.
    pub fn a(&self, i: usize) -> SquareClass {
        let e = self.entries[i - 1];
        self.model.with_order(e.unit, e.r)
    }

    /// a_{i,j} = a_i ⋯ a_j in Ḟ/Ḟ²; the empty product is 1.
    pub fn prod(&self, i: usize, j: usize) -> SquareClass {
        (i..=j).fold(SquareClass::ONE, |acc, k| acc * self.a(k))
    }

    /// a_{i+1}/a_i as a square class.
    pub fn ratio(&self, i: usize) -> SquareClass {
        self.a(i) * self.a(i + 1)
    }

    /// R_{i+1} − R_i.
    pub fn gap(&self, i: usize) -> i64 {
        self.r(i + 1) - self.r(i)
    }

    /// g(a_{i+1}/a_i) for 1 ≤ i < n.
    pub fn g(&self, i: usize) -> ClassSubgroup {
        let m = &*self.model;
        g_bar(m, self.ratio(i), Alpha::int(self.gap(i))).intersect(units(m))
    }

    /// G(a_{i+1}/a_i) for 1 ≤ i < n.
    pub fn big_g(&self, i: usize) -> ClassSubgroup {
        big_g_bar(&self.model, self.ratio(i), Alpha::int(self.gap(i)))
    }

    /// α_i(L) for 1 ≤ i < n.
    pub fn alpha(&self, i: usize) -> Alpha {
        let m = &*self.model;
        let n = self.rank();
        let e = Alpha::int(m.e() as i64);
        let dneg = |j: usize| dv(m, m.neg(self.ratio(j)));
        let mut best = Alpha::int(self.gap(i)).half() + e;
        for j in 1..=i {
            best = best.min(Alpha::int(self.r(i + 1) - self.r(j)) + dneg(j));
        }
        for j in i..n {
            best = best.min(Alpha::int(self.r(j + 1) - self.r(i)) + dneg(j));
        }
        best
    }

    pub fn alphas(&self) -> Vec<Alpha> {
        (1..self.rank()).map(|i| self.alpha(i)).collect()
    }

    pub fn prop_a(&self) -> bool {
        self.entries.windows(3).all(|w| w[0].r < w[2].r)
    }

    pub fn prop_b(&self) -> bool {
        if !self.prop_a() {
            return false;
        }
        let m = &*self.model;
        let (n, e) = (self.rank(), m.e() as i64);
        (1..n).all(|i| {
            let gap = self.gap(i);
            let tight = if gap.rem_euclid(2) == 1 {
                gap <= 2 * e + 1
            } else {
                dv(m, m.neg(self.ratio(i))) <= Alpha::int(e) - Alpha::int(gap).half()
            };
            !tight || ((i < 2 || self.gap(i - 1) > 2 * e) && (i + 2 > n || self.gap(i + 1) > 2 * e))
        })
    }

    pub fn norm_order(&self) -> i64 {
        self.r(1)
    }

    pub fn scale_order(&self) -> Alpha {
        let r1 = Alpha::int(self.r(1));
        if self.rank() < 2 {
            return r1;
        }
        r1.min(Alpha::ratio(self.r(1) + self.r(2), 2))
    }

    pub fn vol_order(&self) -> i64 {
        self.entries.iter().map(|e| e.r).sum()
    }

    pub fn det(&self) -> SquareClass {
        self.prod(1, self.rank())
    }

    pub fn invariants(&self) -> LatticeInvariants {
        LatticeInvariants {
            r: self.rs(),
            alpha: self.alphas(),
            norm_order: if self.rank() > 0 { self.norm_order() } else { 0 },
            scale_order: if self.rank() > 0 { self.scale_order() } else { Alpha::PosInf },
            vol_order: self.vol_order(),
            det: self.model.label(self.det()).to_string(),
            prop_a: self.prop_a(),
            prop_b: self.prop_b(),
        }
    }

    /// FL ≅ [a_1, …, a_n].
    pub fn quad_space(&self) -> QuadSpace {
        let diag: Vec<SquareClass> = (1..=self.rank()).map(|i| self.a(i)).collect();
        QuadSpace::from_diagonal(&self.model, &diag)
    }

    /// L# ≅ ≺a_n^{-1}, …, a_1^{-1}≻.
    pub fn dual(&self) -> GoodBong {
        let entries = self.entries.iter().rev().map(|e| BongEntry::new(e.unit, -e.r)).collect();
        GoodBong { model: self.model.clone(), entries }
    }

    /// 𝔭^k L.
    pub fn scaled(&self, k: i64) -> GoodBong {
        let entries = self.entries.iter().map(|e| BongEntry::new(e.unit, e.r + 2 * k)).collect();
        GoodBong { model: self.model.clone(), entries }
    }

    fn g_product(&self) -> ClassSubgroup {
        (1..self.rank()).fold(ClassSubgroup::trivial(&self.model), |acc, i| acc.product(self.big_g(i)))
    }

    /// min ⌊(R_{i+2} − R_i)/2⌋, or +∞ for rank ≤ 2.
    pub fn ups_exponent(&self) -> Alpha {
        self.entries
            .windows(3)
            .map(|w| Alpha::int((w[2].r - w[0].r).div_euclid(2)))
            .min()
            .unwrap_or(Alpha::PosInf)
    }

    /// The conditions deciding θ(O⁺(L)) ⊆ 𝒪*Ḟ² without property A.
    pub fn units_criterion(&self) -> bool {
        let m = &*self.model;
        let e = m.e() as i64;
        let o = units(m);
        (1..self.rank()).all(|i| self.big_g(i).is_subset(o))
            && self.entries.windows(3).all(|w| {
                let gap = w[1].r - w[0].r;
                w[0].r != w[2].r || (gap.rem_euclid(2) == 0 && (gap / 2 + e).rem_euclid(2) == 0)
            })
    }

    /// θ(O⁺(L)).
    pub fn theta_plus(&self) -> ClassSubgroup {
        let m = &*self.model;
        if self.rank() <= 1 {
            return ClassSubgroup::trivial(m);
        }
        if self.prop_a() {
            self.g_product().product(ups(m, self.ups_exponent()))
        } else if self.units_criterion() {
            units(m)
        } else {
            ClassSubgroup::full(m)
        }
    }

    /// θ(O⁺(L)) for property A with the ups-factor reduced per `rule`.
    pub fn theta_plus_refined(&self, rule: UpsRule) -> Result<ClassSubgroup, LatticeError> {
        if !self.prop_a() {
            return Err(LatticeError::NotPropertyA);
        }
        let m = &*self.model;
        let gaps: Vec<i64> = self.entries.windows(3).map(|w| w[2].r - w[0].r).collect();
        let exponent = match rule {
            UpsRule::EvenGaps => gaps
                .iter()
                .filter(|g| g.rem_euclid(2) == 0)
                .map(|g| Alpha::int(g / 2))
                .min()
                .unwrap_or(Alpha::PosInf),
            UpsRule::DropOddMaximum => {
                let alpha = self.ups_exponent();
                let at_odd = gaps.iter().any(|g| g.rem_euclid(2) == 1 && Alpha::int(g.div_euclid(2)) == alpha);
                if at_odd {
                    Alpha::PosInf
                } else {
                    alpha
                }
            }
        };
        Ok(self.g_product().product(ups(m, exponent)))
    }

    fn check_peer(&self, other: &GoodBong) -> Result<(), LatticeError> {
        if !same_model(&self.model, &other.model) {
            return Err(LatticeError::ModelMismatch);
        }
        if self.rank() != other.rank() {
            return Err(LatticeError::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    /// The classification conditions for L ≅ K, condition by condition.
    pub fn isometry_report(&self, other: &GoodBong) -> Result<IsometryReport, LatticeError> {
        self.check_peer(other)?;
        let m = &*self.model;
        let n = self.rank();
        let mut rep = IsometryReport {
            spaces: self.quad_space().isometric(other.quad_space()),
            orders: self.rs() == other.rs(),
            alphas: true,
            defects: true,
            representations: true,
            witness: None,
        };
        if !rep.orders {
            rep.witness = Some("R_i differ".into());
            return Ok(rep);
        }
        let (alpha, beta) = (self.alphas(), other.alphas());
        rep.alphas = alpha == beta;
        for i in 1..n {
            if dv(m, self.prod(1, i) * other.prod(1, i)) < alpha[i - 1] {
                rep.defects = false;
                rep.witness.get_or_insert_with(|| format!("d(a_1..a_{i} b_1..b_{i}) < alpha_{i}"));
            }
        }
        let two_e = Alpha::int(2 * m.e() as i64);
        for i in 2..n {
            if alpha[i - 2] + alpha[i - 1] > two_e {
                let big: Vec<SquareClass> = (1..=i).map(|k| self.a(k)).collect();
                let small: Vec<SquareClass> = (1..i).map(|k| other.a(k)).collect();
                let v = QuadSpace::from_diagonal(m, &big);
                let w = QuadSpace::from_diagonal(m, &small);
                if !v.represents(m, w).unwrap_or(false) {
                    rep.representations = false;
                    rep.witness.get_or_insert_with(|| format!("[b_1..b_{}] not represented by [a_1..a_{i}]", i - 1));
                }
            }
        }
        if !rep.spaces {
            rep.witness.get_or_insert_with(|| "spaces differ".into());
        }
        Ok(rep)
    }

    pub fn isometric(&self, other: &GoodBong) -> Result<bool, LatticeError> {
        Ok(self.isometry_report(other)?.isometric())
    }

    /// t_i(η): multiplies a_i and a_{i+1} by η ∈ g(a_{i+1}/a_i).
    pub fn transform(&self, i: usize, eta: SquareClass) -> Result<GoodBong, LatticeError> {
        if i == 0 || i >= self.rank() {
            return Err(LatticeError::IndexOutOfRange(i));
        }
        if self.model.ord_parity(eta) != 0 {
            return Err(LatticeError::EtaNotUnit);
        }
        if !self.g(i).contains(eta) {
            return Err(LatticeError::EtaNotInG(i));
        }
        let mut entries = self.entries.clone();
        entries[i - 1].unit = entries[i - 1].unit * eta;
        entries[i].unit = entries[i].unit * eta;
        GoodBong::new(self.model.clone(), entries)
    }

    fn leading_pair_is_maximal(&self) -> bool {
        let m = &*self.model;
        let gap = self.gap(1);
        gap == -2 * m.e() as i64 || !in_a(m, self.ratio(1), gap - 2).unwrap_or(false)
    }

    /// Maximality of a binary lattice.
    pub fn binary_is_maximal(&self) -> Result<bool, LatticeError> {
        if self.rank() != 2 {
            return Err(LatticeError::PreconditionFailed("binary_is_maximal needs rank 2"));
        }
        Ok(self.leading_pair_is_maximal())
    }

    /// L′ = {x ∈ L : x is not a norm generator}.
    pub fn shrink_norm(&self) -> Result<ShrinkResult, LatticeError> {
        let m = &*self.model;
        let n = self.rank();
        if n == 0 {
            return Err(LatticeError::PreconditionFailed("shrink_norm needs rank at least 1"));
        }
        if self.theta_plus().is_full() {
            return Err(LatticeError::PreconditionFailed("theta_plus(L) is the full group"));
        }
        let mut entries = self.entries.clone();
        let lattice = |case, entries| Ok(ShrinkResult::Lattice { case, lattice: GoodBong::new(self.model.clone(), entries)? });
        if n == 1 {
            entries[0].r += 2;
            return lattice(ShrinkCase::Leading, entries);
        }
        let flat = n >= 3 && self.r(1) == self.r(3);
        if self.gap(1) == -2 * m.e() as i64 {
            let ratio = self.ratio(1);
            if ratio == m.minus_one() || flat {
                return Ok(ShrinkResult::NotALattice);
            }
            if ratio != m.neg(m.delta()) {
                return Err(LatticeError::PreconditionFailed("R_2 - R_1 = -2e without a_1 a_2 in -1 or -Δ"));
            }
            entries[0].r += 2;
            entries[1].r += 2;
            return lattice(ShrinkCase::DeltaPlane, entries);
        }
        if flat {
            let k = (1..=(n - 1) / 2).filter(|&k| self.r(2 * k + 1) == self.r(1)).max().unwrap_or(1);
            let sign = if k % 2 == 1 { m.minus_one() } else { SquareClass::ONE };
            let eps = m.with_order(SquareClass::ONE, self.r(1)) * self.prod(1, 2 * k + 1) * sign;
            if m.ord_parity(eps) != 0 {
                return Err(LatticeError::PreconditionFailed("alternating case with a non-unit epsilon"));
            }
            for j in 1..=2 * k + 1 {
                entries[j - 1] = if j % 2 == 1 {
                    BongEntry::new(eps, self.r(j) + 2)
                } else {
                    BongEntry::new(m.neg(eps), self.r(j) - 2)
                };
            }
            return lattice(ShrinkCase::Alternating, entries);
        }
        if self.leading_pair_is_maximal() {
            let target = m.neg(self.ratio(1));
            let eta = m
                .unit_classes()
                .find(|&eta| norm_group(m, target).contains(m.pi() * eta))
                .ok_or(LatticeError::PreconditionFailed("no unit eta with (pi eta, -a_1 a_2) = 1"))?;
            for e in entries.iter_mut().take(2) {
                e.unit = e.unit * eta;
                e.r += 1;
            }
            return lattice(ShrinkCase::MaximalPair, entries);
        }
        entries[0].r += 2;
        lattice(ShrinkCase::Leading, entries)
    }
}

/// Every good BONG of the given rank with all R_i in `lo..=hi`, in
/// lexicographic order of (R_i, unit_i).
pub fn enumerate(model: &Arc<FieldModel>, rank: usize, lo: i64, hi: i64) -> Vec<GoodBong> {
    let units: Vec<SquareClass> = model.unit_classes().collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(rank);
    extend(model, &units, rank, lo, hi, &mut stack, &mut out);
    out
}

fn extend(
    model: &Arc<FieldModel>,
    units: &[SquareClass],
    rank: usize,
    lo: i64,
    hi: i64,
    stack: &mut Vec<BongEntry>,
    out: &mut Vec<GoodBong>,
) {
    if stack.len() == rank {
        out.push(GoodBong { model: model.clone(), entries: stack.clone() });
        return;
    }
    for r in lo..=hi {
        for &u in units {
            stack.push(BongEntry::new(u, r));
            let k = stack.len();
            let tail = &stack[k.saturating_sub(3)..];
            if GoodBong::new(model.clone(), tail.to_vec()).is_ok() {
                extend(model, units, rank, lo, hi, stack, out);
            }
            stack.pop();
        }
    }
}
