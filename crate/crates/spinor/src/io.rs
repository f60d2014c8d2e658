//! JSON documents for lattices and pairs.
//!
//! A lattice document looks like
//! `{"schema":"spinor/1","field":{"kind":"Q2"},"M":[["1",0],["1",1]]}`; a pair
//! document carries both `"M"` and `"N"`. Units may be class labels, integers,
//! or `[a, b]` coefficient pairs in the field's integral basis. A table-driven
//! `"model"` dump may replace `"field"`, in which case units must be labels.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bong::GoodBong;
use crate::dyadic::{DyadicField, FieldKind, FieldSpec};
use crate::error::{ArithError, LatticeError, ModelError};
use crate::field::{FieldModel, ModelDump, SquareClass};
use crate::relative::LatticePair;
use crate::SCHEMA;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`, expected `{SCHEMA}`")]
    Schema(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("lattice {which}: {source}")]
    Lattice { which: &'static str, source: LatticeError },
    #[error("`{0}` is not a unit")]
    NotAUnit(String),
    #[error("document needs either \"field\" or \"model\", not both")]
    FieldChoice,
}

impl IoError {
    /// True when a larger working precision might succeed.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            IoError::Arith(ArithError::InsufficientPrecision { .. } | ArithError::IndeterminateAtPrecision { .. })
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
}

impl FieldDoc {
    pub fn spec(&self, precision: u32) -> Result<FieldSpec, IoError> {
        let base = match (self.kind.to_lowercase().as_str(), self.d) {
            ("q2", None) => FieldSpec::q2(),
            ("q2adjoin" | "quadratic", Some(d)) => FieldSpec::quadratic(d),
            (other, None) => FieldSpec::parse(other)?,
            _ => return Err(ArithError::UnsupportedExtension(self.kind.clone()).into()),
        };
        Ok(base.with_precision(precision))
    }

    pub fn from_kind(kind: FieldKind) -> Self {
        match kind {
            FieldKind::Q2 => FieldDoc { kind: "Q2".into(), d: None },
            FieldKind::Quadratic(d) => FieldDoc { kind: "Q2adjoin".into(), d: Some(d) },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum UnitDoc {
    Label(String),
    Int(i64),
    Coeffs(i64, i64),
}

type EntryDoc = (UnitDoc, i64);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDump>,
    #[serde(rename = "M")]
    pub m: Vec<EntryDoc>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<EntryDoc>>,
}

/// The field a document lives over.
pub struct FieldContext {
    pub field: Option<DyadicField>,
    pub model: Arc<FieldModel>,
}

impl FieldContext {
    pub fn from_spec(spec: &FieldSpec) -> Result<Self, IoError> {
        let field = DyadicField::new(spec)?;
        let model = Arc::new(field.model().clone());
        Ok(FieldContext { field: Some(field), model })
    }

    fn unit(&self, u: &UnitDoc) -> Result<SquareClass, IoError> {
        let m = &*self.model;
        let class = match (u, &self.field) {
            (UnitDoc::Label(s), _) if m.class_by_label(s).is_some() => m.class_by_label(s).expect("checked"),
            (UnitDoc::Label(s), Some(f)) => f.parse_class(s)?.0,
            (UnitDoc::Int(v), Some(f)) => f.parse_class(&v.to_string())?.0,
            (UnitDoc::Int(v), None) => {
                m.class_by_label(&v.to_string()).ok_or_else(|| ModelError::UnknownLabel(v.to_string()))?
            }
            (UnitDoc::Coeffs(a, b), Some(f)) => f.parse_class(&f.ring().format_pair(*a, *b))?.0,
            (UnitDoc::Label(s), None) => return Err(ModelError::UnknownLabel(s.clone()).into()),
            (UnitDoc::Coeffs(a, b), None) => return Err(ModelError::UnknownLabel(format!("[{a},{b}]")).into()),
        };
        if m.ord_parity(class) != 0 {
            return Err(IoError::NotAUnit(format!("{u:?}")));
        }
        Ok(class)
    }

    pub fn lattice(&self, entries: &[EntryDoc], which: &'static str) -> Result<GoodBong, IoError> {
        let pairs = entries.iter().map(|(u, r)| Ok((self.unit(u)?, *r))).collect::<Result<Vec<_>, IoError>>()?;
        GoodBong::from_pairs(self.model.clone(), &pairs).map_err(|source| IoError::Lattice { which, source })
    }
}

impl LatticeDoc {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let doc: LatticeDoc = serde_json::from_str(text)?;
        if let Some(s) = &doc.schema {
            if s != SCHEMA {
                return Err(IoError::Schema(s.clone()));
            }
        }
        Ok(doc)
    }

    pub fn context(&self, precision: u32) -> Result<FieldContext, IoError> {
        match (&self.field, &self.model) {
            (Some(_), Some(_)) => Err(IoError::FieldChoice),
            (_, Some(dump)) => Ok(FieldContext { field: None, model: Arc::new(FieldModel::from_dump(dump)?) }),
            (Some(f), None) => FieldContext::from_spec(&f.spec(precision)?),
            (None, None) => FieldContext::from_spec(&FieldSpec::q2().with_precision(precision)),
        }
    }

    pub fn lattice(&self, precision: u32) -> Result<GoodBong, IoError> {
        self.context(precision)?.lattice(&self.m, "M")
    }

    pub fn pair(&self, precision: u32) -> Result<LatticePair, IoError> {
        let ctx = self.context(precision)?;
        let outer = ctx.lattice(&self.m, "M")?;
        let inner = ctx.lattice(self.n.as_deref().unwrap_or(&[]), "N")?;
        LatticePair::new(outer, inner).map_err(|source| IoError::Lattice { which: "N", source })
    }

    /// Document for a lattice (and optionally a sublattice) with label units.
    pub fn from_lattices(field: FieldDoc, outer: &GoodBong, inner: Option<&GoodBong>) -> Self {
        let entries = |l: &GoodBong| -> Vec<EntryDoc> {
            l.entries().iter().map(|e| (UnitDoc::Label(l.model().label(e.unit).to_string()), e.r)).collect()
        };
        LatticeDoc {
            schema: Some(SCHEMA.to_string()),
            field: Some(field),
            model: None,
            m: entries(outer),
            n: inner.map(entries),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let text = r#"{"schema":"spinor/1","field":{"kind":"Q2"},"M":[["1",0],[3,1],["7",2]]}"#;
        let doc = LatticeDoc::parse(text).unwrap();
        let l = doc.lattice(64).unwrap();
        assert_eq!(l.rs(), vec![0, 1, 2]);
        let back = LatticeDoc::from_lattices(FieldDoc::from_kind(FieldKind::Q2), &l, None);
        let again = LatticeDoc::parse(&serde_json::to_string(&back).unwrap()).unwrap().lattice(64).unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(LatticeDoc::parse(r#"{"schema":"spinor/0","M":[]}"#), Err(IoError::Schema(_))));
        let odd = LatticeDoc::parse(r#"{"M":[["2",0]]}"#).unwrap();
        assert!(matches!(odd.lattice(64), Err(IoError::NotAUnit(_))));
        let bad = LatticeDoc::parse(r#"{"M":[["1",0],["1",-1]]}"#).unwrap();
        assert!(matches!(bad.lattice(64), Err(IoError::Lattice { which: "M", .. })));
    }

    #[test]
    fn extension_units_from_coefficients() {
        let doc = LatticeDoc::parse(r#"{"field":{"kind":"Q2adjoin","d":-1},"M":[[[1,1],0]]}"#);
        let doc = doc.unwrap();
        assert!(matches!(doc.lattice(64), Err(IoError::NotAUnit(_))));
        let doc = LatticeDoc::parse(r#"{"field":{"kind":"Q2adjoin","d":-1},"M":[[[1,2],0],[[3,0],2]]}"#).unwrap();
        assert_eq!(doc.lattice(64).unwrap().rank(), 2);
    }
}
