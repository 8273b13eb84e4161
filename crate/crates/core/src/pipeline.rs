//! Cell-by-cell computation over an ordered cell list, and single-bidegree
//! queries on finite-type complexes by truncation.

use std::collections::BTreeMap;
use std::fmt;

use crate::attach::{attach_cell, AttachResult};
use crate::error::{Error, Result};
use crate::module::{Differential, FreeModule, Generator};
use crate::ring::{Bidegree, M2Elem};

/// One representation cell `D(R^{p,q})` and its connecting differential,
/// given as `nu`-coefficients on generators of the previous stage.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellSpec {
    pub deg: Bidegree,
    pub images: BTreeMap<String, M2Elem>,
}

impl CellSpec {
    pub fn new(p: i64, q: i64) -> Self {
        Self {
            deg: Bidegree::new(p, q),
            images: BTreeMap::new(),
        }
    }

    pub fn with_image(mut self, label: &str, coeff: M2Elem) -> Self {
        self.images.insert(label.to_owned(), coeff);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CellComplexSpec {
    pub name: String,
    pub cells: Vec<CellSpec>,
}

/// Label of the summand for the cell attached at 1-based stage `stage`.
pub fn cell_label(stage: usize) -> String {
    format!("g{stage}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub cell: CellSpec,
    pub input: FreeModule,
    pub differential: Differential,
    pub result: AttachResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub stages: Vec<Stage>,
    pub final_module: FreeModule,
}

/// Builds the connecting differential for attaching `cell` at 1-based stage
/// `stage` to a stage with basis `basis`.
pub fn stage_differential(basis: &FreeModule, cell: &CellSpec, stage: usize) -> Result<Differential> {
    for label in cell.images.keys() {
        if basis.get(label).is_none() {
            return Err(Error::UnknownLabel(label.clone()));
        }
    }
    Differential::from_images(
        basis,
        Generator::new(cell_label(stage), cell.deg),
        cell.images.iter().map(|(l, c)| (l.as_str(), *c)),
    )
}

fn check_representation(cell: &CellSpec, index: usize) -> Result<()> {
    let Bidegree { p, q } = cell.deg;
    if !(0 <= q && q <= p) {
        return Err(Error::PreconditionViolated(format!(
            "cell {index} at {} is not a representation cell (need 0 <= q <= p)",
            cell.deg
        )));
    }
    Ok(())
}

fn check_order(cells: &[CellSpec]) -> Result<()> {
    for (i, w) in cells.windows(2).enumerate() {
        if w[1].deg < w[0].deg {
            return Err(Error::InvalidOrdering { index: i + 1 });
        }
    }
    Ok(())
}

/// A partial trace: the stages that succeeded, and the error that stopped
/// the fold, if any.
pub struct PartialTrace {
    pub trace: Trace,
    pub error: Option<Error>,
}

/// Folds [`attach_cell`] over the cells, starting from the base point.
/// Stops at the first failing stage.
pub fn compute_partial(spec: &CellComplexSpec) -> PartialTrace {
    let mut trace = Trace {
        stages: Vec::with_capacity(spec.cells.len()),
        final_module: FreeModule::empty(),
    };
    if let Err(e) = check_order(&spec.cells) {
        return PartialTrace { trace, error: Some(e) };
    }
    for (index, cell) in spec.cells.iter().enumerate() {
        let step = check_representation(cell, index)
            .and_then(|()| stage_differential(&trace.final_module, cell, index + 1))
            .and_then(|d| {
                attach_cell(&trace.final_module, cell.deg, &d).map(|result| (d, result))
            });
        match step {
            Ok((differential, result)) => {
                let input = std::mem::replace(&mut trace.final_module, result.new_module.clone());
                trace.stages.push(Stage {
                    cell: cell.clone(),
                    input,
                    differential,
                    result,
                });
            }
            Err(e) => {
                return PartialTrace {
                    trace,
                    error: Some(Error::Stage {
                        index,
                        source: Box::new(e),
                    }),
                }
            }
        }
    }
    PartialTrace { trace, error: None }
}

pub fn compute(spec: &CellComplexSpec) -> Result<Trace> {
    let partial = compute_partial(spec);
    match partial.error {
        Some(e) => Err(e),
        None => Ok(partial.trace),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    InvalidOrdering { index: usize },
    NotRepresentation { index: usize, deg: Bidegree },
    DegreeMismatch { index: usize, label: String, message: String },
    UnknownLabel { index: usize, label: String },
    /// The stage could not be attached; later label scopes are unknown.
    StageFailed { index: usize, message: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidOrdering { index } => {
                write!(f, "cell {index}: InvalidOrdering (p, then q, must be non-decreasing)")
            }
            Violation::NotRepresentation { index, deg } => {
                write!(f, "cell {index}: bidegree {deg} is not a representation (need 0 <= q <= p)")
            }
            Violation::DegreeMismatch { index, label, message } => {
                write!(f, "cell {index}: DegreeMismatch on `{label}`: {message}")
            }
            Violation::UnknownLabel { index, label } => {
                write!(f, "cell {index}: UnknownLabel `{label}`")
            }
            Violation::StageFailed { index, message } => write!(f, "cell {index}: {message}"),
        }
    }
}

/// Lists every problem with `spec`. Label scopes are found by running the
/// stages; checking stops at the first stage that cannot be attached.
pub fn validate(spec: &CellComplexSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, w) in spec.cells.windows(2).enumerate() {
        if w[1].deg < w[0].deg {
            out.push(Violation::InvalidOrdering { index: i + 1 });
        }
    }
    for (index, cell) in spec.cells.iter().enumerate() {
        if check_representation(cell, index).is_err() {
            out.push(Violation::NotRepresentation { index, deg: cell.deg });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let mut basis = FreeModule::empty();
    for (index, cell) in spec.cells.iter().enumerate() {
        let mut stage_ok = true;
        for (label, &coeff) in &cell.images {
            let Some(g) = basis.get(label) else {
                out.push(Violation::UnknownLabel { index, label: label.clone() });
                stage_ok = false;
                continue;
            };
            if let Some(deg) = coeff.bidegree() {
                let want = g.deg + Differential::SHIFT - cell.deg;
                if deg != want {
                    out.push(Violation::DegreeMismatch {
                        index,
                        label: label.clone(),
                        message: format!("coefficient {coeff} lies in {deg}, expected {want}"),
                    });
                    stage_ok = false;
                }
            }
        }
        if !stage_ok {
            break;
        }
        let step = stage_differential(&basis, cell, index + 1)
            .and_then(|d| attach_cell(&basis, cell.deg, &d));
        match step {
            Ok(r) => basis = r.new_module,
            Err(e) => {
                out.push(Violation::StageFailed { index, message: e.to_string() });
                break;
            }
        }
    }
    out
}

/// A possibly infinite cell list honoring the ordering discipline, with only
/// finitely many cells in each fixed-set dimension.
pub trait CellStream {
    fn name(&self) -> String;

    /// The cell at position `index`, or `None` past the end.
    fn cell(&self, index: usize) -> Option<CellSpec>;

    /// The shortest prefix containing every cell with `p - q <= i`.
    fn cells_with_fix_at_most(&self, i: i64) -> Vec<CellSpec>;
}

/// A finite cell list viewed as a stream.
#[derive(Clone, Debug)]
pub struct FiniteStream(pub CellComplexSpec);

impl CellStream for FiniteStream {
    fn name(&self) -> String {
        self.0.name.clone()
    }

    fn cell(&self, index: usize) -> Option<CellSpec> {
        self.0.cells.get(index).cloned()
    }

    fn cells_with_fix_at_most(&self, i: i64) -> Vec<CellSpec> {
        let end = self
            .0
            .cells
            .iter()
            .rposition(|c| c.deg.fix() <= i)
            .map_or(0, |k| k + 1);
        self.0.cells[..end].to_vec()
    }
}

/// `RP^infinity` with trivial action: one cell `(n, 0)` for every `n >= 1`,
/// all differentials zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct TrivialProjectiveSpace;

impl CellStream for TrivialProjectiveSpace {
    fn name(&self) -> String {
        "rp-infinity-trivial".into()
    }

    fn cell(&self, index: usize) -> Option<CellSpec> {
        Some(CellSpec::new(index as i64 + 1, 0))
    }

    fn cells_with_fix_at_most(&self, i: i64) -> Vec<CellSpec> {
        (1..=i.max(0)).map(|n| CellSpec::new(n, 0)).collect()
    }
}

/// The truncation parameter for `(p, q)`: `i > p` and `i > p - q - 2`.
pub fn truncation_for(p: i64, q: i64) -> i64 {
    p.max(p - q - 2) + 1
}

/// `dim H^{p,q}` of a finite-type complex, computed on the finite subcomplex
/// of cells up to the last one with fixed-set dimension at most `i`.
pub fn query_at_truncation(stream: &dyn CellStream, p: i64, q: i64, i: i64) -> Result<usize> {
    let spec = CellComplexSpec {
        name: stream.name(),
        cells: stream.cells_with_fix_at_most(i),
    };
    let trace = compute(&spec)?;
    Ok(trace.final_module.dim(p, q))
}

pub fn query_finite_type(stream: &dyn CellStream, p: i64, q: i64) -> Result<usize> {
    query_at_truncation(stream, p, q, truncation_for(p, q))
}
