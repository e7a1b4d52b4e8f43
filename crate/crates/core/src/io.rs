//! JSON interchange formats.
//!
//! Structures serialize as
//! `{"signature": {"E": 2}, "universe": ["a","b"], "relations": {"E": [["a","b"]]}}`
//! (see [`crate::structure::RawStructure`]); a signature file is the bare
//! `{"E": 2, "U": 1}` map; expansions are
//! `{"kind": "surjhom", "template": …, "terms": [{"coefficient": "-2", "structure": …}]}`
//! with coefficients as exact integer or `p/q` strings.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::basis::ExpansionKind;
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};
use crate::{Expansion, Rational};

pub fn structure_from_json(text: &str) -> Result<Structure> {
    Ok(serde_json::from_str(text)?)
}

pub fn structure_to_json(s: &Structure) -> String {
    serde_json::to_string(s).expect("structures always serialize")
}

pub fn signature_from_json(text: &str) -> Result<Signature> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let valid = !trimmed.is_empty()
        && trimmed.split('/').count() <= 2
        && trimmed.split('/').all(|part| {
            let digits = part.strip_prefix('-').unwrap_or(part);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        });
    if !valid {
        return Err(Error::InvalidCoefficient(text.to_string()));
    }
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n, d),
        None => (trimmed, "1"),
    };
    let denom = num_bigint::BigInt::from_str(denom).map_err(|_| Error::InvalidCoefficient(text.to_string()))?;
    if num_traits::Zero::is_zero(&denom) {
        return Err(Error::InvalidCoefficient(text.to_string()));
    }
    let numer = num_bigint::BigInt::from_str(numer).map_err(|_| Error::InvalidCoefficient(text.to_string()))?;
    Ok(Rational::new(numer, denom))
}

/// Integers print bare, other rationals as reduced `p/q`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    coefficient: String,
    structure: Structure,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionRecord {
    kind: ExpansionKind,
    template: Structure,
    terms: Vec<TermRecord>,
}

/// An expansion together with the template and count it reproduces.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionFile {
    pub kind: ExpansionKind,
    pub template: Structure,
    pub expansion: Expansion,
}

impl ExpansionFile {
    pub fn build(kind: ExpansionKind, template: Structure) -> Self {
        let expansion = kind.expand(&template);
        Self { kind, template, expansion }
    }

    pub fn to_json(&self) -> String {
        let record = ExpansionRecord {
            kind: self.kind,
            template: self.template.clone(),
            terms: self
                .expansion
                .terms()
                .iter()
                .map(|t| TermRecord { coefficient: format_rational(t.coefficient()), structure: t.structure().clone() })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&record).expect("expansions always serialize");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: ExpansionRecord = serde_json::from_str(text)?;
        let terms = record
            .terms
            .into_iter()
            .map(|t| Ok((parse_rational(&t.coefficient)?, t.structure)))
            .collect::<Result<Vec<_>>>()?;
        let expansion = Expansion::from_terms(terms)?;
        if expansion.signature().is_some_and(|s| s != record.template.signature()) {
            return Err(Error::SignatureMismatch);
        }
        Ok(Self { kind: record.kind, template: record.template, expansion })
    }
}
