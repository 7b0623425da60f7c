//! `fieldbundle/v1`: a number field with its ingested arithmetic data, and
//! the checks `validate-bundle` runs on it.

use std::collections::BTreeMap;
use std::path::Path;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{log_lattice, FieldElement, NumberField, UnitSystem};
use crate::group::{Perm, PermGroupData, MAX_ORDER};
use crate::numeric::poly::{parse_rational, RationalPoly};

pub const SCHEMA: &str = "fieldbundle/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBundle {
    pub schema: String,
    pub label: String,
    /// Coefficients, constant term first.
    pub poly: Vec<String>,
    pub disc: String,
    #[serde(default)]
    pub class_number: Option<u64>,
    pub torsion: u64,
    /// Power-basis coordinates.
    pub units: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub galois_closure: Option<GaloisClosure>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisClosure {
    pub group: GroupSpec,
    #[serde(default)]
    pub field_subgroup: Option<String>,
    #[serde(default)]
    pub closure_poly: Option<Vec<String>>,
    #[serde(default)]
    pub generator_image: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default)]
    pub subgroups: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub source: String,
    #[serde(default)]
    pub detail: Option<String>,
    #[serde(default)]
    pub timestamp: Option<String>,
}

impl FieldBundle {
    pub fn from_json(s: &str) -> Result<Self> {
        let b: FieldBundle = serde_json::from_str(s)?;
        if b.schema != SCHEMA {
            return Err(Error::Schema(format!("schema {:?}, expected {SCHEMA:?}", b.schema)));
        }
        Ok(b)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let s = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle json")
    }

    pub fn polynomial(&self) -> Result<RationalPoly> {
        let c: Result<Vec<Rational>> = self.poly.iter().map(|s| parse_rational(s)).collect();
        Ok(RationalPoly::new(c?))
    }

    pub fn field(&self, prec: u32) -> Result<NumberField> {
        NumberField::build(&self.polynomial()?, prec)
    }

    pub fn discriminant(&self) -> Result<Integer> {
        self.disc.trim().parse::<Integer>().map_err(|_| Error::Schema(format!("disc {:?}", self.disc)))
    }

    pub fn unit_system(&self) -> Result<UnitSystem> {
        let units: Result<Vec<FieldElement>> = self.units.iter().map(|u| FieldElement::parse(u)).collect();
        Ok(UnitSystem::new(units?, &self.provenance.source))
    }

    /// The closure group with its named subgroups.
    pub fn group(&self) -> Result<Option<PermGroupData>> {
        let Some(gc) = &self.galois_closure else { return Ok(None) };
        let gens: Vec<&str> = gc.group.generators.iter().map(String::as_str).collect();
        let mut g = PermGroupData::parse(gc.group.degree, &gens)?;
        for (name, sub) in &gc.group.subgroups {
            let s: Vec<&str> = sub.iter().map(String::as_str).collect();
            g = g.with_subgroup(name, &s)?;
        }
        Ok(Some(g))
    }

    /// Generators of a named subgroup.
    pub fn subgroup_generators(&self, name: &str) -> Result<Vec<Perm>> {
        let gc = self.galois_closure.as_ref().ok_or_else(|| Error::Schema("no galois_closure block".into()))?;
        let sub = gc
            .group
            .subgroups
            .get(name)
            .ok_or_else(|| Error::Schema(format!("no subgroup named {name:?}")))?;
        sub.iter().map(|s| Perm::parse(s, gc.group.degree)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub label: String,
    pub checks: Vec<Check>,
}

impl Validation {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn push(&mut self, name: &str, ok: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), ok, detail: detail.into() });
        ok
    }
}

fn is_rational_square(q: &Rational) -> bool {
    *q > 0 && q.numer().is_perfect_square() && q.denom().is_perfect_square()
}

/// Runs every structural and arithmetic check; failures are recorded, not
/// returned as errors.
pub fn validate(b: &FieldBundle, prec: u32) -> Validation {
    let mut v = Validation { label: b.label.clone(), checks: Vec::new() };
    v.push("schema", b.schema == SCHEMA, b.schema.clone());
    let k = match b.field(prec) {
        Ok(k) => {
            v.push("polynomial", true, format!("degree {}, signature {:?}", k.degree(), k.signature()));
            k
        }
        Err(e) => {
            v.push("polynomial", false, e.to_string());
            return v;
        }
    };
    match b.discriminant() {
        Ok(d) if d != 0 => {
            let (_, s) = k.signature();
            let sign_ok = (d < 0) == (s % 2 == 1);
            v.push("disc_sign", sign_ok, format!("disc {d}, s = {s}"));
            let ratio = Rational::from(k.poly_discriminant() / Rational::from(d.clone()));
            v.push("disc_index", is_rational_square(&ratio), format!("poly disc / disc = {ratio}"));
        }
        Ok(_) => {
            v.push("disc", false, "zero discriminant");
        }
        Err(e) => {
            v.push("disc", false, e.to_string());
        }
    }
    let tors_ok = b.torsion >= 2 && b.torsion % 2 == 0 && (!k.is_totally_real() || b.torsion == 2);
    v.push("torsion", tors_ok, format!("w = {}", b.torsion));
    v.push(
        "class_number",
        b.class_number.is_none_or(|h| h >= 1),
        b.class_number.map_or("absent".into(), |h| format!("h = {h}")),
    );
    match b.unit_system() {
        Ok(us) => {
            let norms = us.validate(&k);
            if v.push("unit_norms", norms.is_ok(), norms.err().map_or("all norms are +-1".into(), |e| e.to_string())) {
                let want = k.unit_rank();
                let count_ok = us.units.len() == want;
                v.push("unit_count", count_ok, format!("{} units, rank {want}", us.units.len()));
                if count_ok {
                    match log_lattice(&k, &us, prec) {
                        Ok(l) => v.push("unit_rank", l.rank() == want, format!("independent rank {}", l.rank())),
                        Err(e) => v.push("unit_rank", false, e.to_string()),
                    };
                }
            }
        }
        Err(e) => {
            v.push("unit_parse", false, e.to_string());
        }
    }
    if let Some(gc) = &b.galois_closure {
        match b.group() {
            Ok(Some(g)) => {
                let order_ok = g.order() <= MAX_ORDER && g.order() % k.degree() == 0;
                v.push("closure_group", order_ok, format!("order {}", g.order()));
                if let Some(name) = &gc.field_subgroup {
                    match g.named_subgroup(name) {
                        Ok(h) => {
                            let idx = g.order() / h.len();
                            v.push("field_subgroup", idx == k.degree(), format!("{name}: index {idx}"));
                        }
                        Err(e) => {
                            v.push("field_subgroup", false, e.to_string());
                        }
                    }
                }
            }
            Ok(None) => {}
            Err(e) => {
                v.push("closure_group", false, e.to_string());
            }
        }
    }
    v
}
