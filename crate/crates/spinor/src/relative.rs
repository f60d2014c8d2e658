//! Pairs N ⊆ M of lattices given by good BONGs and the closed-form
//! computation of θ(X(M/N)).
//!
//! Indices are 1-based throughout. R_i belong to M (rank m), S_i to N
//! (rank n). When m − n = 2 the missing S_{n+1} is the sentinel +∞.

use serde::Serialize;

use crate::bong::GoodBong;
use crate::error::LatticeError;
use crate::field::{FieldModel, SquareClass};
use crate::gmaps::big_g_bar;
use crate::groups::{norm_group, units, ups, Alpha, ClassSubgroup, GroupRender};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePair {
    outer: GoodBong,
    inner: GoodBong,
}

/// How [`LatticePair::theta_x`] reached its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "RankGap>=3")]
    RankGapAtLeast3,
    R1Fails,
    #[serde(rename = "PropA-ClosedForm")]
    PropAClosedForm,
    #[serde(rename = "NoPropA-UnitsBounded")]
    NoPropAUnitsBounded,
    #[serde(rename = "NoPropA-Full")]
    NoPropAFull,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairInvariants {
    #[serde(rename = "R")]
    pub r: Vec<i64>,
    #[serde(rename = "S")]
    pub s: Vec<i64>,
    #[serde(rename = "T")]
    pub t: Vec<Alpha>,
    pub beta: Alpha,
    #[serde(rename = "pairPropA")]
    pub pair_prop_a: bool,
    #[serde(rename = "R1")]
    pub r1: bool,
    pub b_products: Vec<String>,
    pub mixed_products: Vec<String>,
}

/// One factor Ḡ(a_{1,i+1}b_{1,i−1}, R_{i+1} − S_i).
#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    pub i: usize,
    pub class: String,
    pub weight: Alpha,
    pub group: GroupRender,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaVerdict {
    #[serde(skip)]
    pub group: ClassSubgroup,
    pub branch: Branch,
    pub factors: Vec<Factor>,
    pub conditions: Option<ConditionReport>,
}

/// Spacing condition at one index.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpacingCheck {
    pub i: usize,
    pub applies: bool,
    pub case_a: bool,
    pub case_b: bool,
    /// Case (a) with the parity clause read as (R_{i+2} − R_i)/2.
    pub case_a_alt_parity: bool,
}

impl SpacingCheck {
    pub fn holds(&self) -> bool {
        !self.applies || self.case_a || self.case_b
    }
}

/// Factor condition at one index, in its group form and its defect form.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FactorCheck {
    pub i: usize,
    pub class: String,
    #[serde(rename = "T")]
    pub t: Alpha,
    pub via_group: bool,
    pub via_defect: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ConditionReport {
    pub parity: bool,
    pub spacing: Vec<SpacingCheck>,
    pub factors: Vec<FactorCheck>,
    pub outer_in_units: bool,
    pub inner_in_units: bool,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.parity
            && self.spacing.iter().all(SpacingCheck::holds)
            && self.factors.iter().all(|f| f.via_group)
            && self.outer_in_units
            && self.inner_in_units
    }

    /// Whether the group and defect forms agree at every index.
    pub fn forms_agree(&self) -> bool {
        self.factors.iter().all(|f| f.via_group == f.via_defect)
    }
}

/// The two readings of the strengthened R1 that holds when θ(X(M/N)) ≠ Ḟ.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct StrongR1 {
    /// R_i ≤ S_i or (1 < i < m and R_i + R_{i+1} = S_{i−1} + S_i).
    pub shifted: bool,
    /// R_i ≤ S_i or (1 < i < m and R_{i+1} + R_{i+2} = S_i + S_{i+1}).
    pub unshifted: bool,
}

/// Appendix checks on a pair with R1 and pair property A.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AppendixReport {
    pub tilde_equals_pair: bool,
    pub bracket_bounds: Vec<(usize, bool)>,
    pub odd_gap_inclusions: Vec<(usize, bool)>,
    pub drop_rule: Option<bool>,
}

impl AppendixReport {
    pub fn holds(&self) -> bool {
        self.tilde_equals_pair
            && self.bracket_bounds.iter().all(|b| b.1)
            && self.odd_gap_inclusions.iter().all(|b| b.1)
            && self.drop_rule.unwrap_or(true)
    }
}

impl LatticePair {
    pub fn new(outer: GoodBong, inner: GoodBong) -> Result<Self, LatticeError> {
        let same = std::sync::Arc::ptr_eq(outer.model(), inner.model()) || outer.model().name() == inner.model().name();
        if !same {
            return Err(LatticeError::ModelMismatch);
        }
        if inner.rank() > outer.rank() {
            return Err(LatticeError::RankMismatch(outer.rank(), inner.rank()));
        }
        Ok(LatticePair { outer, inner })
    }

    pub fn outer(&self) -> &GoodBong {
        &self.outer
    }

    pub fn inner(&self) -> &GoodBong {
        &self.inner
    }

    pub fn model(&self) -> &FieldModel {
        self.outer.model()
    }

    fn m(&self) -> usize {
        self.outer.rank()
    }

    fn n(&self) -> usize {
        self.inner.rank()
    }

    pub fn rank_gap(&self) -> usize {
        self.m() - self.n()
    }

    fn e(&self) -> i64 {
        self.model().e() as i64
    }

    fn r(&self, i: usize) -> i64 {
        self.outer.r(i)
    }

    fn s(&self, i: usize) -> Alpha {
        if i <= self.n() {
            Alpha::int(self.inner.r(i))
        } else {
            Alpha::PosInf
        }
    }

    fn ra(&self, i: usize) -> Alpha {
        Alpha::int(self.r(i))
    }

    /// b_{1,j}.
    pub fn b_prod(&self, j: usize) -> SquareClass {
        self.inner.prod(1, j)
    }

    /// a_{1,i+1} b_{1,i−1}.
    pub fn mixed(&self, i: usize) -> SquareClass {
        self.outer.prod(1, i + 1) * self.inner.prod(1, i - 1)
    }

    pub fn condition_r1(&self) -> bool {
        let m = self.m();
        (1..=self.n()).all(|i| {
            let si = self.s(i);
            self.ra(i) <= si || (1 < i && i < m && self.ra(i) + self.ra(i + 1) <= self.s(i - 1) + si)
        })
    }

    pub fn property_a(&self) -> bool {
        (1..=self.m().saturating_sub(2)).all(|i| self.ra(i + 2) > self.s(i))
    }

    /// T_i = max{R_{i+1}, S_{i−1}} − min{S_i, R_{i+2}} for 1 ≤ i ≤ m − 1.
    pub fn t(&self, i: usize) -> Alpha {
        let hi = if i == 1 { self.ra(2) } else { self.ra(i + 1).max(self.s(i - 1)) };
        let lo = if i + 1 == self.m() { self.s(i) } else { self.s(i).min(self.ra(i + 2)) };
        if lo == Alpha::PosInf {
            return Alpha::NegInf;
        }
        hi - lo
    }

    /// β = min ⌊(R_{i+2} − S_i)/2⌋ over 1 ≤ i ≤ m − 2.
    pub fn beta(&self) -> Alpha {
        (1..=self.m().saturating_sub(2))
            .map(|i| (self.ra(i + 2) - self.s(i)).half().floor())
            .min()
            .unwrap_or(Alpha::PosInf)
    }

    fn weight(&self, i: usize) -> Alpha {
        let s = self.s(i);
        if s == Alpha::PosInf {
            Alpha::NegInf
        } else {
            self.ra(i + 1) - s
        }
    }

    /// Ḡ(a_{1,i+1}b_{1,i−1}, R_{i+1} − S_i).
    pub fn factor(&self, i: usize) -> ClassSubgroup {
        big_g_bar(self.model(), self.mixed(i), self.weight(i))
    }

    pub fn factors(&self) -> Vec<Factor> {
        let m = self.model();
        (1..self.m())
            .map(|i| Factor {
                i,
                class: m.label(self.mixed(i)).to_string(),
                weight: self.weight(i),
                group: self.factor(i).render(m),
            })
            .collect()
    }

    fn factor_product(&self, upto: usize) -> ClassSubgroup {
        (1..=upto).fold(ClassSubgroup::trivial(self.model()), |acc, i| acc.product(self.factor(i)))
    }

    /// G(M/N) from the uniform product over 1 ≤ i ≤ m − 1, without checking
    /// hypotheses. The endpoint factor for m − n = 2 is cross-checked against
    /// its explicit value N(−a_{1,m}b_{1,m−2}).
    pub fn g_pair_formula(&self) -> ClassSubgroup {
        let md = self.model();
        let m = self.m();
        let uniform = ups(md, self.beta()).product(self.factor_product(m.saturating_sub(1)));
        let endpoint = if m < 2 {
            ClassSubgroup::trivial(md)
        } else if self.rank_gap() == 2 {
            norm_group(md, md.neg(self.mixed(m - 1)))
        } else {
            self.factor(m - 1)
        };
        let explicit = ups(md, self.beta()).product(self.factor_product(m.saturating_sub(2))).product(endpoint);
        assert_eq!(uniform, explicit, "endpoint renderings of G(M/N) disagree");
        uniform
    }

    fn require_closed_form(&self) -> Result<(), LatticeError> {
        if self.rank_gap() > 2 {
            return Err(LatticeError::PreconditionFailed("rank gap exceeds 2"));
        }
        if !self.condition_r1() {
            return Err(LatticeError::PreconditionFailed("condition R1 fails"));
        }
        if !self.property_a() {
            return Err(LatticeError::PreconditionFailed("pair lacks property A"));
        }
        Ok(())
    }

    /// G(M/N); requires R1 and pair property A.
    pub fn g_pair(&self) -> Result<ClassSubgroup, LatticeError> {
        self.require_closed_form()?;
        Ok(self.g_pair_formula())
    }

    /// G̃(M/N) = G(M/N)·θ(O⁺(M)); requires R1 and pair property A.
    pub fn g_tilde(&self) -> Result<ClassSubgroup, LatticeError> {
        Ok(self.g_pair()?.product(self.outer.theta_plus()))
    }

    pub fn invariants(&self) -> PairInvariants {
        let md = self.model();
        let gap_ok = self.rank_gap() <= 2;
        PairInvariants {
            r: self.outer.rs(),
            s: self.inner.rs(),
            t: if gap_ok { (1..self.m()).map(|i| self.t(i)).collect() } else { vec![] },
            beta: self.beta(),
            pair_prop_a: gap_ok && self.property_a(),
            r1: gap_ok && self.condition_r1(),
            b_products: (1..=self.n()).map(|j| md.label(self.b_prod(j)).to_string()).collect(),
            mixed_products: if gap_ok {
                (1..self.m()).map(|i| md.label(self.mixed(i)).to_string()).collect()
            } else {
                vec![]
            },
        }
    }

    fn spacing_check(&self, i: usize) -> SpacingCheck {
        let e = self.e();
        let (r1, r2, s0, s1) = (self.r(i + 1), self.r(i + 2), self.s(i), self.s(i + 1));
        let applies = Alpha::int(r2) <= s0;
        let even_half = |x: Alpha| x.as_int().filter(|v| v.rem_euclid(2) == 0).map(|v| (v / 2 - e).rem_euclid(2) == 0);
        let s_step = s1 - s0;
        let sums_match = Alpha::int(r1 + r2) == s0 + s1;
        let case_a = sums_match && even_half(Alpha::int(r2 - r1)) == Some(true) && even_half(s_step) == Some(true);
        let case_a_alt_parity =
            sums_match && even_half(Alpha::int(r2 - self.r(i))) == Some(true) && even_half(s_step) == Some(true);
        let case_b = Alpha::int(r2) == s0 && (r2 - r1 == -2 * e || s_step == Alpha::int(-2 * e));
        SpacingCheck { i, applies, case_a, case_b, case_a_alt_parity }
    }

    fn factor_check(&self, i: usize) -> FactorCheck {
        let md = self.model();
        let o = units(md);
        let e = Alpha::int(self.e());
        let c = self.mixed(i);
        let t = self.t(i);
        let via_group = big_g_bar(md, c, t).is_subset(o);
        let dc = Alpha::from(md.d(md.neg(c)));
        let via_defect = md.ord_parity(c) == 0
            && (dc == e + e || (i <= self.n() && t >= -(e + e) && dc > e - t.half()));
        FactorCheck { i, class: md.label(c).to_string(), t, via_group, via_defect }
    }

    /// Parity, spacing, factor and unit conditions deciding θ(X(M/N)) ⊆ 𝒪*Ḟ²; requires R1 and m − n ≤ 2.
    pub fn condition_report(&self) -> Result<ConditionReport, LatticeError> {
        if self.rank_gap() > 2 {
            return Err(LatticeError::PreconditionFailed("rank gap exceeds 2"));
        }
        if !self.condition_r1() {
            return Err(LatticeError::PreconditionFailed("condition R1 fails"));
        }
        let o = units(self.model());
        let mut all = self.outer.rs();
        all.extend(self.inner.rs());
        Ok(ConditionReport {
            parity: all.iter().all(|x| (x - all[0]).rem_euclid(2) == 0),
            spacing: (1..=self.m().saturating_sub(2)).map(|i| self.spacing_check(i)).collect(),
            factors: (1..self.m()).map(|i| self.factor_check(i)).collect(),
            outer_in_units: self.outer.theta_plus().is_subset(o),
            inner_in_units: self.inner.theta_plus().is_subset(o),
        })
    }

    /// θ(X(M/N)) from the closed forms.
    pub fn theta_x(&self) -> ThetaVerdict {
        let md = self.model();
        let verdict = |group, branch, conditions| ThetaVerdict { group, branch, factors: vec![], conditions };
        if self.rank_gap() > 2 {
            return verdict(ClassSubgroup::full(md), Branch::RankGapAtLeast3, None);
        }
        if !self.condition_r1() {
            return verdict(ClassSubgroup::full(md), Branch::R1Fails, None);
        }
        let report = self.condition_report().ok();
        if self.property_a() {
            let group = self.g_pair_formula().product(self.outer.theta_plus());
            return ThetaVerdict { group, branch: Branch::PropAClosedForm, factors: self.factors(), conditions: report };
        }
        if report.as_ref().is_some_and(ConditionReport::holds) {
            verdict(units(md), Branch::NoPropAUnitsBounded, report)
        } else {
            verdict(ClassSubgroup::full(md), Branch::NoPropAFull, report)
        }
    }

    /// Both readings of the strengthened R1, over 1 ≤ i ≤ n.
    pub fn strong_r1(&self) -> StrongR1 {
        let m = self.m();
        let le = |i: usize| self.ra(i) <= self.s(i);
        let shifted = (1..=self.n())
            .all(|i| le(i) || (1 < i && i < m && self.ra(i) + self.ra(i + 1) == self.s(i - 1) + self.s(i)));
        let unshifted = (1..=self.n()).all(|i| {
            le(i) || (1 < i && i + 1 < m && self.ra(i + 1) + self.ra(i + 2) == self.s(i) + self.s(i + 1))
        });
        StrongR1 { shifted, unshifted }
    }

    /// d[ε a_{1,i} b_{1,j}] = min{d(ε a_{1,i} b_{1,j}), α_i, β_j}, with α_i
    /// dropped for i ∈ {0, m} and β_j for j ∈ {0, n}.
    pub fn d_bracket(&self, eps: SquareClass, i: usize, j: usize) -> Alpha {
        let md = self.model();
        let mut v = Alpha::from(md.d(eps * self.outer.prod(1, i) * self.inner.prod(1, j)));
        if 0 < i && i < self.m() {
            v = v.min(self.outer.alpha(i));
        }
        if 0 < j && j < self.n() {
            v = v.min(self.inner.alpha(j));
        }
        v
    }

    /// Ā_i = min{(R_{i+1} − S_i)/2 + e, R_{i+1} − S_i + d[−a_{1,i+1}b_{1,i−1}]}.
    pub fn a_bar(&self, i: usize) -> Alpha {
        let w = self.weight(i);
        let e = Alpha::int(self.e());
        (w.half() + e).min(w + self.d_bracket(self.model().minus_one(), i + 1, i - 1))
    }

    /// Checks of the appendix identities; requires R1 and pair property A.
    pub fn appendix_report(&self) -> Result<AppendixReport, LatticeError> {
        self.require_closed_form()?;
        let md = self.model();
        let g = self.g_pair_formula();
        let bracket_bounds = (1..=self.n().min(self.m().saturating_sub(1)))
            .map(|i| (i, self.d_bracket(SquareClass::ONE, i, i) >= self.a_bar(i)))
            .collect();
        let odd: Vec<usize> = (1..=self.m().saturating_sub(2))
            .filter(|&i| (self.ra(i + 2) - self.s(i)).as_int().is_some_and(|v| v.rem_euclid(2) == 1))
            .collect();
        let odd_gap_inclusions = odd
            .iter()
            .map(|&i| {
                let u = ups(md, (self.ra(i + 2) - self.s(i)).half().floor());
                (i, u.is_subset(self.factor(i).product(self.factor(i + 1))))
            })
            .collect();
        let beta = self.beta();
        let drop_rule = odd
            .iter()
            .any(|&i| (self.ra(i + 2) - self.s(i)).half().floor() == beta)
            .then(|| self.factor_product(self.m() - 1) == g);
        Ok(AppendixReport {
            tilde_equals_pair: g.product(self.outer.theta_plus()) == g,
            bracket_bounds,
            odd_gap_inclusions,
            drop_rule,
        })
    }
}
