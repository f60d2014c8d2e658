//! Finite model of the square-class structure of a dyadic field.
//!
//! A [`FieldModel`] stores the group Ḟ/Ḟ² as bitvectors over a fixed basis,
//! together with the order of relative quadratic defect `d`, the Hilbert
//! pairing, Δ and the class of −1. Everything downstream works on this table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::ModelError;

/// Largest supported F₂-dimension of Ḟ/Ḟ²; subgroups are stored as `u64` masks.
pub const MAX_DIM: u32 = 6;

/// An element of Ḟ/Ḟ², stored as its coordinate bitvector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SquareClass(u32);

impl SquareClass {
    pub const ONE: SquareClass = SquareClass(0);

    pub const fn from_bits(bits: u32) -> Self {
        SquareClass(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_one(self) -> bool {
        self.0 == 0
    }
}

impl Mul for SquareClass {
    type Output = SquareClass;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: SquareClass) -> SquareClass {
        SquareClass(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{:#b}", self.0)
    }
}

/// A value of the order of relative quadratic defect.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DValue {
    Fin(u32),
    Inf,
}

impl DValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            DValue::Fin(v) => Some(v),
            DValue::Inf => None,
        }
    }
}

impl fmt::Display for DValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DValue::Fin(v) => write!(f, "{v}"),
            DValue::Inf => write!(f, "inf"),
        }
    }
}

/// Square-class table of a dyadic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldModel {
    name: String,
    e: u32,
    dim: u32,
    basis: Vec<String>,
    labels: Vec<String>,
    d: Vec<DValue>,
    /// Row `i` has bit `j` set iff (b_i, b_j) = −1.
    hilbert_rows: Vec<u32>,
    parity_mask: u32,
    pi: SquareClass,
    delta: SquareClass,
    minus_one: SquareClass,
    /// Membership masks of N(c), indexed by c.
    norm_masks: Vec<u64>,
    /// Membership masks of {c : d(c) >= k} for k = 0..=2e+1.
    ups_masks: Vec<u64>,
}

/// Raw ingredients for a [`FieldModel`]; checked by [`FieldModel::new`].
#[derive(Clone, Debug)]
pub struct ModelParts {
    pub name: String,
    pub e: u32,
    pub basis: Vec<String>,
    pub labels: Option<Vec<String>>,
    pub d: Vec<DValue>,
    pub hilbert_rows: Vec<u32>,
    pub pi: SquareClass,
    pub minus_one: Option<SquareClass>,
}

impl FieldModel {
    /// Assemble a model. Δ and the ord parity are read off the `d` table,
    /// −1 is derived from the Hilbert pairing when not supplied.
    pub fn new(parts: ModelParts) -> Result<Self, ModelError> {
        let dim = parts.basis.len() as u32;
        if dim == 0 || dim > MAX_DIM {
            return Err(ModelError::Dimension(dim));
        }
        if parts.e == 0 {
            return Err(ModelError::Malformed("e must be positive".into()));
        }
        let size = 1usize << dim;
        if parts.d.len() != size || parts.hilbert_rows.len() != dim as usize {
            return Err(ModelError::Malformed("table sizes do not match dim".into()));
        }
        if parts.pi.index() >= size {
            return Err(ModelError::Malformed("pi outside the class group".into()));
        }
        let labels = match parts.labels {
            Some(l) if l.len() == size => l,
            Some(_) => return Err(ModelError::Malformed("wrong number of class labels".into())),
            None => (0..size).map(|c| product_label(&parts.basis, c as u32)).collect(),
        };
        let two_e = DValue::Fin(2 * parts.e);
        let deltas: Vec<usize> = (0..size).filter(|&c| parts.d[c] == two_e).collect();
        let delta = match deltas.as_slice() {
            [c] => SquareClass(*c as u32),
            _ => return Err(ModelError::Malformed("no unique class with d = 2e".into())),
        };
        let mut parity_mask = 0;
        for i in 0..dim {
            if parts.d[1usize << i] == DValue::Fin(0) {
                parity_mask |= 1 << i;
            }
        }
        let mut model = FieldModel {
            name: parts.name,
            e: parts.e,
            dim,
            basis: parts.basis,
            labels,
            d: parts.d,
            hilbert_rows: parts.hilbert_rows,
            parity_mask,
            pi: parts.pi,
            delta,
            minus_one: SquareClass::ONE,
            norm_masks: Vec::new(),
            ups_masks: Vec::new(),
        };
        model.rebuild_caches();
        model.minus_one = match parts.minus_one {
            Some(c) => c,
            None => model
                .derive_minus_one()
                .ok_or_else(|| ModelError::Malformed("Hilbert pairing has no class of −1".into()))?,
        };
        Ok(model)
    }

    fn rebuild_caches(&mut self) {
        let size = self.size();
        self.norm_masks = (0..size as u32)
            .map(|c| {
                (0..size as u32)
                    .filter(|&x| self.hilbert(SquareClass(x), SquareClass(c)) == 1)
                    .fold(0u64, |m, x| m | 1 << x)
            })
            .collect();
        self.ups_masks = (0..=2 * self.e + 1)
            .map(|k| {
                (0..size)
                    .filter(|&x| self.d[x] >= DValue::Fin(k))
                    .fold(0u64, |m, x| m | 1 << x)
            })
            .collect();
    }

    /// Mask of N(c).
    pub(crate) fn norm_mask(&self, c: SquareClass) -> u64 {
        self.norm_masks[c.index()]
    }

    /// Mask of {x : d(x) >= k} for an integer threshold k.
    pub(crate) fn ups_mask(&self, k: i64) -> u64 {
        if k <= 0 {
            return self.ups_masks[0];
        }
        match self.ups_masks.get(k as usize) {
            Some(&m) => m,
            None => (0..self.size())
                .filter(|&x| self.d[x] >= DValue::Fin(k.min(u32::MAX as i64) as u32))
                .fold(0u64, |m, x| m | 1 << x),
        }
    }

    fn derive_minus_one(&self) -> Option<SquareClass> {
        self.classes()
            .find(|&c| self.classes().all(|x| self.hilbert(x, c) == self.hilbert(x, x)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn size(&self) -> usize {
        1usize << self.dim
    }
    pub fn basis(&self) -> &[String] {
        &self.basis
    }
    pub fn pi(&self) -> SquareClass {
        self.pi
    }
    pub fn delta(&self) -> SquareClass {
        self.delta
    }
    pub fn minus_one(&self) -> SquareClass {
        self.minus_one
    }

    /// −x.
    pub fn neg(&self, x: SquareClass) -> SquareClass {
        self.minus_one * x
    }

    pub fn classes(&self) -> impl Iterator<Item = SquareClass> + '_ {
        (0..self.size() as u32).map(SquareClass)
    }

    pub fn unit_classes(&self) -> impl Iterator<Item = SquareClass> + '_ {
        self.classes().filter(move |&c| self.ord_parity(c) == 0)
    }

    pub fn ord_parity(&self, c: SquareClass) -> u32 {
        (c.0 & self.parity_mask).count_ones() & 1
    }

    /// Class of π^r·u for a unit class `u`.
    pub fn with_order(&self, unit: SquareClass, r: i64) -> SquareClass {
        if r.rem_euclid(2) == 1 {
            unit * self.pi
        } else {
            unit
        }
    }

    /// Unit part of `c` relative to the fixed uniformizer class.
    pub fn unit_part(&self, c: SquareClass) -> SquareClass {
        if self.ord_parity(c) == 1 {
            c * self.pi
        } else {
            c
        }
    }

    pub fn d(&self, c: SquareClass) -> DValue {
        self.d[c.index()]
    }

    pub fn hilbert(&self, a: SquareClass, b: SquareClass) -> i8 {
        let mut row = 0u32;
        for i in 0..self.dim {
            if a.0 >> i & 1 == 1 {
                row ^= self.hilbert_rows[i as usize];
            }
        }
        if (row & b.0).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn label(&self, c: SquareClass) -> &str {
        &self.labels[c.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Look up a class by its canonical label or a `*`-product of basis labels.
    pub fn class_by_label(&self, s: &str) -> Option<SquareClass> {
        let s = s.trim();
        if let Some(i) = self.labels.iter().position(|l| l == s) {
            return Some(SquareClass(i as u32));
        }
        if let Some(i) = self.basis.iter().position(|l| l == s) {
            return Some(SquareClass(1 << i));
        }
        if s.contains('*') {
            return s
                .split('*')
                .map(|p| self.class_by_label(p))
                .try_fold(SquareClass::ONE, |acc, c| c.map(|c| acc * c));
        }
        None
    }

    /// Hilbert pairing on basis elements as a ±1 matrix.
    pub fn hilbert_matrix(&self) -> Vec<Vec<i8>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.hilbert(SquareClass(1 << i), SquareClass(1 << j)))
                    .collect()
            })
            .collect()
    }

    /// Copy of this model with one d-table entry replaced (for negative tests).
    pub fn with_d_entry(&self, c: SquareClass, v: DValue) -> FieldModel {
        let mut m = self.clone();
        m.d[c.index()] = v;
        m.rebuild_caches();
        m
    }

    /// Copy of this model with raw Hilbert rows replaced (for negative tests).
    pub fn with_hilbert_rows(&self, rows: Vec<u32>) -> FieldModel {
        let mut m = self.clone();
        m.hilbert_rows = rows;
        m.rebuild_caches();
        m
    }

    pub fn to_dump(&self) -> ModelDump {
        ModelDump {
            schema: crate::SCHEMA.to_string(),
            name: Some(self.name.clone()),
            e: self.e,
            dim: self.dim,
            basis: self.basis.clone(),
            classes: Some(self.labels.clone()),
            d: self
                .classes()
                .map(|c| {
                    let v = match self.d(c) {
                        DValue::Fin(v) => Value::from(v),
                        DValue::Inf => Value::from("inf"),
                    };
                    (self.label(c).to_string(), v)
                })
                .collect(),
            hilbert: self.hilbert_matrix(),
            delta: self.label(self.delta).to_string(),
            pi: self.label(self.pi).to_string(),
            minus_one: Some(self.label(self.minus_one).to_string()),
        }
    }

    pub fn from_dump(dump: &ModelDump) -> Result<Self, ModelError> {
        let dim = dump.basis.len();
        if dim as u32 != dump.dim {
            return Err(ModelError::Malformed("dim disagrees with basis length".into()));
        }
        if dim == 0 || dim as u32 > MAX_DIM {
            return Err(ModelError::Dimension(dim as u32));
        }
        let size = 1usize << dim;
        let labels: Vec<String> = match &dump.classes {
            Some(l) => l.clone(),
            None => (0..size).map(|c| product_label(&dump.basis, c as u32)).collect(),
        };
        if labels.len() != size {
            return Err(ModelError::Malformed("wrong number of class labels".into()));
        }
        let find = |s: &str| -> Result<SquareClass, ModelError> {
            labels
                .iter()
                .position(|l| l == s)
                .map(|i| SquareClass(i as u32))
                .or_else(|| dump.basis.iter().position(|l| l == s).map(|i| SquareClass(1 << i)))
                .ok_or_else(|| ModelError::UnknownLabel(s.to_string()))
        };
        let mut d = vec![None; size];
        for (k, v) in &dump.d {
            let c = find(k)?;
            let val = match v {
                Value::String(s) if s == "inf" || s == "∞" => DValue::Inf,
                Value::Number(n) => DValue::Fin(
                    n.as_u64()
                        .ok_or_else(|| ModelError::Malformed(format!("bad d value for {k}")))?
                        as u32,
                ),
                _ => return Err(ModelError::Malformed(format!("bad d value for {k}"))),
            };
            d[c.index()] = Some(val);
        }
        let d: Vec<DValue> = d
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ModelError::Malformed(format!("missing d for {}", labels[i]))))
            .collect::<Result<_, _>>()?;
        if dump.hilbert.len() != dim || dump.hilbert.iter().any(|r| r.len() != dim) {
            return Err(ModelError::Malformed("hilbert must be a dim × dim matrix".into()));
        }
        let mut rows = vec![0u32; dim];
        for (i, row) in dump.hilbert.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                match v {
                    1 => {}
                    -1 => rows[i] |= 1 << j,
                    _ => return Err(ModelError::Malformed("hilbert entries must be ±1".into())),
                }
            }
        }
        let minus_one = dump.minus_one.as_deref().map(find).transpose()?;
        let model = FieldModel::new(ModelParts {
            name: dump.name.clone().unwrap_or_else(|| "table".into()),
            e: dump.e,
            basis: dump.basis.clone(),
            labels: Some(labels.clone()),
            d,
            hilbert_rows: rows,
            pi: find(&dump.pi)?,
            minus_one,
        })?;
        let declared_delta = find(&dump.delta)?;
        if declared_delta != model.delta {
            return Err(ModelError::Malformed("declared delta does not have d = 2e".into()));
        }
        Ok(model)
    }
}

fn product_label(basis: &[String], bits: u32) -> String {
    if bits == 0 {
        return "1".into();
    }
    basis
        .iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .map(|(_, b)| b.as_str())
        .collect::<Vec<_>>()
        .join("*")
}

/// JSON form of a [`FieldModel`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelDump {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub e: u32,
    pub dim: u32,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    pub d: BTreeMap<String, Value>,
    pub hilbert: Vec<Vec<i8>>,
    pub delta: String,
    pub pi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_one: Option<String>,
}

fn default_schema() -> String {
    crate::SCHEMA.to_string()
}

/// Outcome of one axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Result of [`validate_model`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Check the defect/Hilbert axioms exhaustively over all classes.
pub fn validate_model(m: &FieldModel) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, witness: Option<String>| {
        checks.push(AxiomCheck { name, passed: witness.is_none(), witness });
    };
    let e = m.e;
    let all: Vec<SquareClass> = m.classes().collect();
    let lbl = |c: SquareClass| m.label(c).to_string();

    let mut expected: Vec<DValue> = vec![DValue::Fin(0)];
    expected.extend((0..e).map(|k| DValue::Fin(2 * k + 1)).filter(|v| *v != DValue::Fin(2 * e)));
    expected.push(DValue::Fin(2 * e));
    expected.push(DValue::Inf);
    expected.sort();
    expected.dedup();
    let mut image: Vec<DValue> = all.iter().map(|&c| m.d(c)).collect();
    image.sort();
    image.dedup();
    push(
        "image of d",
        (image != expected).then(|| format!("image {image:?}, expected {expected:?}")),
    );

    push(
        "d(c)=inf iff c=1",
        all.iter().find(|&&c| (m.d(c) == DValue::Inf) != c.is_one()).map(|&c| lbl(c)),
    );
    push(
        "d(c)=2e iff c=Delta",
        all.iter()
            .find(|&&c| (m.d(c) == DValue::Fin(2 * e)) != (c == m.delta))
            .map(|&c| lbl(c)),
    );
    push(
        "d(c)=0 iff ord c odd",
        (m.ord_parity(m.pi) != 1)
            .then(|| "pi has even order".to_string())
            .or_else(|| {
                all.iter()
                    .flat_map(|&a| all.iter().map(move |&b| (a, b)))
                    .find(|&(a, b)| {
                        (m.d(a) == DValue::Fin(0)) != (m.ord_parity(a) == 1)
                            || m.ord_parity(a * b) != m.ord_parity(a) ^ m.ord_parity(b)
                    })
                    .map(|(a, b)| format!("{} {}", lbl(a), lbl(b)))
            }),
    );
    push(
        "domination",
        pairs(&all)
            .find(|&(a, b)| m.d(a * b) < m.d(a).min(m.d(b)))
            .map(|(a, b)| format!("a={} b={}", lbl(a), lbl(b))),
    );
    push(
        "hilbert symmetric",
        pairs(&all)
            .find(|&(a, b)| m.hilbert(a, b) != m.hilbert(b, a))
            .map(|(a, b)| format!("a={} b={}", lbl(a), lbl(b))),
    );
    push(
        "hilbert nondegenerate",
        all.iter()
            .find(|&&a| !a.is_one() && all.iter().all(|&b| m.hilbert(a, b) == 1))
            .map(|&a| lbl(a)),
    );
    push(
        "(a,-a)=1",
        all.iter().find(|&&a| m.hilbert(a, m.neg(a)) != 1).map(|&a| lbl(a)),
    );
    push(
        "(x,-1)=(x,x)",
        all.iter()
            .find(|&&x| m.hilbert(x, m.minus_one) != m.hilbert(x, x))
            .map(|&x| lbl(x)),
    );
    let sum = |a: DValue, b: DValue| match (a, b) {
        (DValue::Fin(x), DValue::Fin(y)) => DValue::Fin(x + y),
        _ => DValue::Inf,
    };
    push(
        "d(a)+d(b)>2e implies (a,b)=1",
        pairs(&all)
            .find(|&(a, b)| sum(m.d(a), m.d(b)) > DValue::Fin(2 * e) && m.hilbert(a, b) != 1)
            .map(|(a, b)| format!("a={} b={}", lbl(a), lbl(b))),
    );
    push(
        "partner with d(b)=2e-d(a) and (a,b)=-1",
        all.iter()
            .find(|&&a| match m.d(a) {
                DValue::Inf => false,
                DValue::Fin(da) => !all.iter().any(|&b| {
                    da <= 2 * e && m.d(b) == DValue::Fin(2 * e - da) && m.hilbert(a, b) == -1
                }),
            })
            .map(|&a| lbl(a)),
    );
    push(
        "d(-1)>=e",
        (m.d(m.minus_one) < DValue::Fin(e)).then(|| format!("d(-1)={}", m.d(m.minus_one))),
    );
    push(
        "N(c) has index 2",
        all.iter()
            .find(|&&c| {
                let kernel = all.iter().filter(|&&x| m.hilbert(x, c) == 1).count();
                let want = if c.is_one() { all.len() } else { all.len() / 2 };
                kernel != want
            })
            .map(|&c| lbl(c)),
    );
    ValidationReport { checks }
}

fn pairs(all: &[SquareClass]) -> impl Iterator<Item = (SquareClass, SquareClass)> + '_ {
    all.iter().flat_map(move |&a| all.iter().map(move |&b| (a, b)))
}
