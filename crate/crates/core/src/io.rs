//! JSON documents: the cell-complex input and the computation report.
//!
//! Input:
//! ```json
//! {"name": "rp2tw", "cells": [{"p": 1, "q": 0}, {"p": 2, "q": 2, "d": {"g1": "theta"}}]}
//! ```
//! A missing `"d"` means a zero differential. Keys of `"d"` are generator
//! labels of the previous stage, as listed in the report's stage `"basis"`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::attach::{CaseTag, ChartEntry};
use crate::module::FreeModule;
use crate::oracle::{TraceCheck, Window};
use crate::pipeline::{validate, CellComplexSpec, CellSpec, Trace, Violation};
use crate::ring::{parse_m2, Bidegree, MonomialParseError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub name: String,
    pub cells: Vec<CellDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDocument {
    pub p: i64,
    pub q: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub d: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cell {cell}, label `{label}`: {source}")]
    Monomial {
        cell: usize,
        label: String,
        #[source]
        source: MonomialParseError,
    },
    #[error("{}", ValidationList(.0))]
    Validation(Vec<Violation>),
}

struct ValidationList<'a>(&'a [Violation]);

impl fmt::Display for ValidationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid complex:")?;
        for v in self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

fn json_error(e: serde_json::Error) -> InputError {
    InputError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

impl ComplexDocument {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_spec(&self) -> Result<CellComplexSpec, InputError> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for (i, c) in self.cells.iter().enumerate() {
            let mut cell = CellSpec::new(c.p, c.q);
            for (label, text) in &c.d {
                let coeff = parse_m2(text).map_err(|source| InputError::Monomial {
                    cell: i,
                    label: label.clone(),
                    source,
                })?;
                cell.images.insert(label.clone(), coeff);
            }
            cells.push(cell);
        }
        Ok(CellComplexSpec {
            name: self.name.clone(),
            cells,
        })
    }

    pub fn from_spec(spec: &CellComplexSpec) -> Self {
        Self {
            name: spec.name.clone(),
            cells: spec
                .cells
                .iter()
                .map(|c| CellDocument {
                    p: c.deg.p,
                    q: c.deg.q,
                    d: c.images.iter().map(|(l, m)| (l.clone(), m.to_string())).collect(),
                })
                .collect(),
        }
    }
}

/// Parses a complex document without running [`validate`].
pub fn parse_complex_unchecked(text: &str) -> Result<CellComplexSpec, InputError> {
    ComplexDocument::from_json(text)?.to_spec()
}

/// Parses a complex document and rejects ordering, degree and label errors.
/// A stage that fails to attach is left for the pipeline to report.
pub fn parse_complex(text: &str) -> Result<CellComplexSpec, InputError> {
    let spec = parse_complex_unchecked(text)?;
    let mut violations = validate(&spec);
    violations.retain(|v| !matches!(v, Violation::StageFailed { .. }));
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(InputError::Validation(violations))
    }
}

pub fn serialize_complex(spec: &CellComplexSpec) -> String {
    serde_json::to_string_pretty(&ComplexDocument::from_spec(spec))
        .expect("complex documents always serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub label: String,
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRef {
    pub p: i64,
    pub q: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftDocument {
    pub ramp: Vec<String>,
    /// `[j, k]` pairs.
    pub exponents: Vec<[u32; 2]>,
    pub shifts: Vec<u32>,
    pub nu_shift: u32,
}

/// What a new generator restricts to in the previous stage. A `null`
/// restriction marks the image of the new cell's class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartDocument {
    pub p: i64,
    pub q: i64,
    pub restriction: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDocument {
    pub cell: CellRef,
    pub case: CaseTag,
    pub shifts: Option<ShiftDocument>,
    pub basis: Vec<GeneratorDocument>,
    pub chart: BTreeMap<String, ChartDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub name: String,
    pub generators: Vec<GeneratorDocument>,
    pub stages: Vec<StageDocument>,
    pub verified: bool,
    pub window: Option<Window>,
}

pub fn generator_documents(module: &FreeModule) -> Vec<GeneratorDocument> {
    module
        .gens()
        .iter()
        .map(|g| GeneratorDocument {
            label: g.label.clone(),
            p: g.deg.p,
            q: g.deg.q,
        })
        .collect()
}

pub fn module_from_documents(gens: &[GeneratorDocument]) -> crate::error::Result<FreeModule> {
    FreeModule::new(
        gens.iter()
            .map(|g| crate::module::Generator::new(g.label.clone(), Bidegree::new(g.p, g.q)))
            .collect(),
    )
}

impl ReportDocument {
    /// Builds a report. `check`, when given, supplies per-stage verification.
    pub fn from_trace(name: &str, trace: &Trace, check: Option<&TraceCheck>) -> Self {
        let stages = trace
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let r = &s.result;
                let chart = r
                    .chart
                    .iter()
                    .zip(r.new_module.gens())
                    .map(|((label, entry), g)| {
                        let restriction = match entry {
                            ChartEntry::PiImage => None,
                            ChartEntry::Restriction(x) => Some(
                                x.terms().map(|(l, m)| (l.to_owned(), m.to_string())).collect(),
                            ),
                        };
                        (label.clone(), ChartDocument { p: g.deg.p, q: g.deg.q, restriction })
                    })
                    .collect();
                StageDocument {
                    cell: CellRef { p: s.cell.deg.p, q: s.cell.deg.q },
                    case: r.case,
                    shifts: r.shift_report.as_ref().map(|sr| ShiftDocument {
                        ramp: sr.ramp.clone(),
                        exponents: sr.exponents.iter().map(|&(j, k)| [j, k]).collect(),
                        shifts: sr.shifts.clone(),
                        nu_shift: sr.nu_shift,
                    }),
                    basis: generator_documents(&r.new_module),
                    chart,
                    verified: check.map(|c| c.stages[i].passed()),
                }
            })
            .collect();
        Self {
            name: name.to_owned(),
            generators: generator_documents(&trace.final_module),
            stages,
            verified: check.is_some_and(TraceCheck::passed),
            window: check.and_then(|c| c.window),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}
