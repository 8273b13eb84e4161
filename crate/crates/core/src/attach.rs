//! Attaching one representation cell: classify the connecting differential
//! and write down the free cohomology of the new stage.
//!
//! There are three outcomes. A zero differential adds a free summand for the
//! new cell. A differential that hits the top cone must be an isomorphism
//! `M2<lambda> -> M2<nu>` onto the new summand, and the pair cancels. A
//! differential into the bottom cone reduces to a ramp
//! `d(omega_i) = theta/(rho^j_i tau^k_i) nu`; the ramp generators move up in
//! weight by `s_1 = k_1 + 1`, `s_i = k_i - k_(i-1)`, and the new cell's
//! generator moves down by `k_n + 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{Differential, FreeModule, Generator, ModuleElem};
use crate::reduction::{check_hypothesis, reduce_bottom_cone, reduce_top_cone, RampStep};
use crate::ring::{Bidegree, M2Elem, Monomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    ZeroDifferential,
    TopConeKill,
    BottomConeRamp,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::ZeroDifferential => "ZeroDifferential",
            CaseTag::TopConeKill => "TopConeKill",
            CaseTag::BottomConeRamp => "BottomConeRamp",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftReport {
    pub ramp: Vec<String>,
    /// `(j_i, k_i)` with `d(omega_i) = theta/(rho^j_i tau^k_i) nu`.
    pub exponents: Vec<(u32, u32)>,
    pub shifts: Vec<u32>,
    /// Total downward shift of the new cell's generator, `k_n + 1`.
    pub nu_shift: u32,
}

/// What a generator of the new stage restricts to under `iota^*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartEntry {
    /// The kernel element of the old stage, written in the old basis.
    Restriction(ModuleElem),
    /// The image of `nu` under `pi^*`; it restricts to zero.
    PiImage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachResult {
    pub case: CaseTag,
    pub new_module: FreeModule,
    /// One entry per generator of `new_module`, in the same order.
    pub chart: Vec<(String, ChartEntry)>,
    pub shift_report: Option<ShiftReport>,
}

impl AttachResult {
    pub fn chart_entry(&self, label: &str) -> Option<&ChartEntry> {
        self.chart.iter().find(|(l, _)| l == label).map(|(_, e)| e)
    }
}

/// Weight shifts for a ramp with strictly increasing `k`.
pub fn kronholm_shifts(k: &[u32]) -> Result<Vec<u32>> {
    if k.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::PreconditionViolated(format!(
            "ramp exponents {k:?} are not strictly increasing"
        )));
    }
    Ok(k.iter()
        .enumerate()
        .map(|(i, &ki)| if i == 0 { ki + 1 } else { ki - k[i - 1] })
        .collect())
}

pub fn classify(d: &Differential) -> Result<CaseTag> {
    check_hypothesis(d)?;
    if d.map().is_zero() {
        return Ok(CaseTag::ZeroDifferential);
    }
    let has_top = d
        .source()
        .gens()
        .iter()
        .any(|g| d.coefficient(&g.label).monomial().is_some_and(Monomial::is_top));
    if has_top {
        let r = reduce_top_cone(d)?;
        if r.k0 > 0 {
            return Err(Error::NotRealizable {
                lambda: r.lambda,
                k0: r.k0,
            });
        }
        Ok(CaseTag::TopConeKill)
    } else {
        Ok(CaseTag::BottomConeRamp)
    }
}

fn a_label(i: usize, nu: &str) -> String {
    format!("a{i}_{nu}")
}

/// Computes the free cohomology after attaching the cell `cell` to a stage
/// with free basis `basis`, given the connecting differential `d`.
pub fn attach_cell(basis: &FreeModule, cell: Bidegree, d: &Differential) -> Result<AttachResult> {
    if d.source() != basis {
        return Err(Error::PreconditionViolated(
            "differential source is not the current basis".into(),
        ));
    }
    if d.nu().deg != cell {
        return Err(Error::PreconditionViolated(format!(
            "differential target {} does not match the cell {}",
            d.nu().deg,
            cell
        )));
    }
    let result = match classify(d)? {
        CaseTag::ZeroDifferential => attach_zero(basis, d)?,
        CaseTag::TopConeKill => attach_kill(d)?,
        CaseTag::BottomConeRamp => attach_ramp(d)?,
    };
    check_chart(d, &result)?;
    Ok(result)
}

fn attach_zero(basis: &FreeModule, d: &Differential) -> Result<AttachResult> {
    let mut new_module = basis.clone();
    new_module.push(d.nu().clone())?;
    let mut chart = Vec::with_capacity(new_module.rank());
    for g in basis.gens() {
        let x = ModuleElem::generator(basis, &g.label)?;
        chart.push((g.label.clone(), ChartEntry::Restriction(x)));
    }
    chart.push((d.nu().label.clone(), ChartEntry::PiImage));
    Ok(AttachResult {
        case: CaseTag::ZeroDifferential,
        new_module,
        chart,
        shift_report: None,
    })
}

fn attach_kill(d: &Differential) -> Result<AttachResult> {
    let r = reduce_top_cone(d)?;
    let gens: Vec<Generator> = r
        .new_basis
        .gens()
        .iter()
        .filter(|g| g.label != r.lambda)
        .cloned()
        .collect();
    let new_module = FreeModule::new(gens)?;
    let chart = new_module
        .gens()
        .iter()
        .map(|g| Ok((g.label.clone(), ChartEntry::Restriction(r.lift.image(&g.label)?))))
        .collect::<Result<_>>()?;
    Ok(AttachResult {
        case: CaseTag::TopConeKill,
        new_module,
        chart,
        shift_report: None,
    })
}

fn attach_ramp(d: &Differential) -> Result<AttachResult> {
    let r = reduce_bottom_cone(d)?;
    let ramp: &[RampStep] = &r.ramp;
    let n = ramp.len();
    let nu = d.nu();
    let ks: Vec<u32> = ramp.iter().map(|s| s.k).collect();
    let shifts = kronholm_shifts(&ks)?;
    let nu_shift = ks[n - 1] + 1;
    debug_assert_eq!(shifts.iter().sum::<u32>(), nu_shift);

    let omega_deg = |i: usize| r.new_basis.degree_of(&ramp[i].label);
    let mono = |m: Monomial| M2Elem::from(m);

    // Kernel elements of d in the reduced basis; a_(i) sits over omega_(i+1)
    // for i < n, and a_n over nu.
    let mut a_elems = Vec::with_capacity(n + 1);
    let first = &ramp[0];
    a_elems.push(ModuleElem::new(
        &r.new_basis,
        omega_deg(0)? + Bidegree::new(0, i64::from(first.k) + 1),
        [(first.label.as_str(), mono(Monomial::top(0, first.k + 1)))],
    )?);
    for i in 0..n - 1 {
        let (w, v) = (&ramp[i], &ramp[i + 1]);
        let deg = omega_deg(i + 1)? + Bidegree::new(0, i64::from(shifts[i + 1]));
        a_elems.push(ModuleElem::new(
            &r.new_basis,
            deg,
            [
                (w.label.as_str(), mono(Monomial::top(w.j - v.j, 0))),
                (v.label.as_str(), mono(Monomial::top(0, v.k - w.k))),
            ],
        )?);
    }
    let last = &ramp[n - 1];
    a_elems.push(ModuleElem::new(
        &r.new_basis,
        nu.deg - Bidegree::new(0, i64::from(nu_shift)),
        [(last.label.as_str(), mono(Monomial::top(last.j + 1, 0)))],
    )?);

    let mut gens = Vec::with_capacity(r.new_basis.rank() + 1);
    let mut chart = Vec::with_capacity(r.new_basis.rank() + 1);
    for g in r.new_basis.gens() {
        match ramp.iter().position(|s| s.label == g.label) {
            Some(i) => {
                let label = a_label(i, &nu.label);
                let deg = g.deg + Bidegree::new(0, i64::from(shifts[i]));
                let restriction = r.lift.apply(&a_elems[i])?;
                gens.push(Generator::new(label.clone(), deg));
                chart.push((label, ChartEntry::Restriction(restriction)));
            }
            None => {
                gens.push(g.clone());
                chart.push((g.label.clone(), ChartEntry::Restriction(r.lift.image(&g.label)?)));
            }
        }
    }
    let label = a_label(n, &nu.label);
    gens.push(Generator::new(label.clone(), nu.deg - Bidegree::new(0, i64::from(nu_shift))));
    chart.push((label, ChartEntry::Restriction(r.lift.apply(&a_elems[n])?)));

    Ok(AttachResult {
        case: CaseTag::BottomConeRamp,
        new_module: FreeModule::new(gens)?,
        chart,
        shift_report: Some(ShiftReport {
            ramp: ramp.iter().map(|s| s.label.clone()).collect(),
            exponents: ramp.iter().map(|s| (s.j, s.k)).collect(),
            shifts,
            nu_shift,
        }),
    })
}

/// Every chart element must be a nonzero kernel element of `d` sitting in the
/// bidegree of the generator it names.
fn check_chart(d: &Differential, result: &AttachResult) -> Result<()> {
    if result.chart.len() != result.new_module.rank() {
        return Err(Error::InvariantViolated("chart does not cover the new basis".into()));
    }
    for ((label, entry), g) in result.chart.iter().zip(result.new_module.gens()) {
        if *label != g.label {
            return Err(Error::InvariantViolated(format!("chart out of order at {label}")));
        }
        let ChartEntry::Restriction(x) = entry else {
            continue;
        };
        if x.is_zero() || x.deg() != g.deg {
            return Err(Error::InvariantViolated(format!(
                "chart element {x} for {label} is not a nonzero element in {}",
                g.deg
            )));
        }
        if !d.map().apply(x)?.is_zero() {
            return Err(Error::InvariantViolated(format!(
                "chart element {x} for {label} is not in ker(d)"
            )));
        }
    }
    Ok(())
}
