//! Brute-force verification of a single attachment.
//!
//! For every bidegree the long exact sequence of the attachment gives
//! `dim H(new) = dim coker(d: H^{p-1,q}(old) -> H^{p,q}(S))
//!             + dim ker(d: H^{p,q}(old) -> H^{p+1,q}(S))`,
//! whatever the extension. These counts come from `F2` matrices of `d` alone
//! and never look at the engine's answer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::attach::{AttachResult, CaseTag};
use crate::module::{Differential, FreeModule};
use crate::ring::Bidegree;

pub const DEFAULT_MARGIN: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl Window {
    /// Bounding box of `points`, expanded by `margin` on every side.
    pub fn around(points: impl IntoIterator<Item = Bidegree>, margin: i64) -> Window {
        let mut w: Option<Window> = None;
        for b in points {
            w = Some(match w {
                None => Window { p_min: b.p, p_max: b.p, q_min: b.q, q_max: b.q },
                Some(w) => Window {
                    p_min: w.p_min.min(b.p),
                    p_max: w.p_max.max(b.p),
                    q_min: w.q_min.min(b.q),
                    q_max: w.q_max.max(b.q),
                },
            });
        }
        let w = w.unwrap_or(Window { p_min: 0, p_max: 0, q_min: 0, q_max: 0 });
        Window {
            p_min: w.p_min - margin,
            p_max: w.p_max + margin,
            q_min: w.q_min - margin,
            q_max: w.q_max + margin,
        }
    }

    pub fn square(lo: i64, hi: i64) -> Window {
        Window { p_min: lo, p_max: hi, q_min: lo, q_max: hi }
    }

    pub fn contains(&self, b: Bidegree) -> bool {
        (self.p_min..=self.p_max).contains(&b.p) && (self.q_min..=self.q_max).contains(&b.q)
    }

    pub fn points(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.p_min..=self.p_max)
            .flat_map(move |p| (self.q_min..=self.q_max).map(move |q| Bidegree::new(p, q)))
    }
}

/// Values on every point of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable<T = usize> {
    pub window: Window,
    pub values: BTreeMap<Bidegree, T>,
}

impl<T: Clone> DimTable<T> {
    pub fn tabulate(window: Window, f: impl Fn(Bidegree) -> T) -> Self {
        Self {
            window,
            values: window.points().map(|b| (b, f(b))).collect(),
        }
    }
}

impl DimTable<usize> {
    pub fn get(&self, b: Bidegree) -> usize {
        self.values.get(&b).copied().unwrap_or(0)
    }
}

/// Engine and oracle dimensions where they disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub engine: usize,
    pub oracle: usize,
}

/// Middle term of the long exact sequence at `(p, q)`.
pub fn les_dim(d: &Differential, p: i64, q: i64) -> usize {
    let into = d.map().matrix_at(p - 1, q);
    let out = d.map().matrix_at(p, q);
    into.cokernel_dim() + out.kernel_dim()
}

pub fn les_table(d: &Differential, window: Window) -> DimTable {
    DimTable::tabulate(window, |b| les_dim(d, b.p, b.q))
}

/// The window used to check a stage: every generator before and after, and
/// the cell, expanded by `margin`.
pub fn stage_window(basis: &FreeModule, cell: Bidegree, result: &AttachResult, margin: i64) -> Window {
    let points = basis
        .degrees()
        .into_iter()
        .chain(result.new_module.degrees())
        .chain([cell]);
    Window::around(points, margin)
}

/// Compares `mod_dim(result.new_module)` with the long-exact-sequence count on
/// the stage window. An empty table means the stage checks out.
pub fn verify_stage(
    basis: &FreeModule,
    cell: Bidegree,
    d: &Differential,
    result: &AttachResult,
    margin: i64,
) -> DimTable<Discrepancy> {
    debug_assert_eq!(d.source(), basis);
    let window = stage_window(basis, cell, result, margin);
    let values = window
        .points()
        .filter_map(|b| {
            let engine = result.new_module.dim(b.p, b.q);
            let oracle = les_dim(d, b.p, b.q);
            (engine != oracle).then_some((b, Discrepancy { engine, oracle }))
        })
        .collect();
    DimTable { window, values }
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

/// After a ramp differential the topological dimensions and the fixed-set
/// dimensions of the generators are each preserved as multisets, with the new
/// cell's contributing one of each.
pub fn localization_check(old: &FreeModule, cell: Bidegree, result: &AttachResult) -> bool {
    if result.case != CaseTag::BottomConeRamp {
        return false;
    }
    let tops = |m: &FreeModule| m.gens().iter().map(|g| g.deg.p).collect::<Vec<_>>();
    let fixes = |m: &FreeModule| m.gens().iter().map(|g| g.deg.fix()).collect::<Vec<_>>();
    let mut want_top = tops(old);
    want_top.push(cell.p);
    let mut want_fix = fixes(old);
    want_fix.push(cell.fix());
    sorted(tops(&result.new_module)) == sorted(want_top)
        && sorted(fixes(&result.new_module)) == sorted(want_fix)
}

/// Recovers the generator bidegrees of a free module from its dimension table.
///
/// For a single `M2` at `(a, b)` the second difference
/// `f(p,q) - f(p,q-1) - f(p-1,q-1) + f(p-1,q-2)` is `1` at `(a, b)` and at
/// `(a+1, b)`, so generator counts satisfy `c(p,q) = g(p,q) - c(p-1,q)`.
/// Generators must lie at least one column right of and two rows above the
/// window's lower edges. Returns `None` if the table is not that of a free
/// module on such generators.
pub fn reconstruct_generators(table: &DimTable) -> Option<Vec<Bidegree>> {
    let w = table.window;
    let f = |p: i64, q: i64| table.get(Bidegree::new(p, q)) as i64;
    let mut counts: BTreeMap<Bidegree, i64> = BTreeMap::new();
    let mut gens = Vec::new();
    for p in w.p_min + 1..=w.p_max {
        for q in w.q_min + 2..=w.q_max {
            let g = f(p, q) - f(p, q - 1) - f(p - 1, q - 1) + f(p - 1, q - 2);
            let prev = counts.get(&Bidegree::new(p - 1, q)).copied().unwrap_or(0);
            let c = g - prev;
            if c < 0 {
                return None;
            }
            counts.insert(Bidegree::new(p, q), c);
            gens.extend(std::iter::repeat_n(Bidegree::new(p, q), c as usize));
        }
    }
    Some(gens)
}

/// Outcome of checking one stage of a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageCheck {
    pub index: usize,
    pub discrepancies: DimTable<Discrepancy>,
    /// Only meaningful for ramp stages.
    pub localization: Option<bool>,
}

impl StageCheck {
    pub fn passed(&self) -> bool {
        self.discrepancies.values.is_empty() && self.localization != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub stages: Vec<StageCheck>,
    /// Smallest window containing every stage window.
    pub window: Option<Window>,
}

impl TraceCheck {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(StageCheck::passed)
    }
}

/// Runs [`verify_stage`] and, for ramp stages, [`localization_check`] on
/// every stage of `trace`.
pub fn verify_trace(trace: &crate::pipeline::Trace, margin: i64) -> TraceCheck {
    let stages: Vec<StageCheck> = trace
        .stages
        .iter()
        .enumerate()
        .map(|(index, s)| StageCheck {
            index,
            discrepancies: verify_stage(&s.input, s.cell.deg, &s.differential, &s.result, margin),
            localization: (s.result.case == CaseTag::BottomConeRamp)
                .then(|| localization_check(&s.input, s.cell.deg, &s.result)),
        })
        .collect();
    let window = stages.iter().map(|s| s.discrepancies.window).reduce(|a, b| Window {
        p_min: a.p_min.min(b.p_min),
        p_max: a.p_max.max(b.p_max),
        q_min: a.q_min.min(b.q_min),
        q_max: a.q_max.max(b.q_max),
    });
    TraceCheck { stages, window }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attach::attach_cell;
    use crate::module::Generator;
    use crate::ring::M2Elem;

    fn rp2_stage() -> (FreeModule, Differential) {
        let basis = FreeModule::new(vec![Generator::new("g1", Bidegree::new(1, 0))]).unwrap();
        let d = Differential::from_images(
            &basis,
            Generator::new("g2", Bidegree::new(2, 2)),
            [("g1", M2Elem::THETA)],
        )
        .unwrap();
        (basis, d)
    }

    #[test]
    fn les_values_for_projective_plane() {
        let (_, d) = rp2_stage();
        assert_eq!(les_dim(&d, 2, 1), 1);
        assert_eq!(les_dim(&d, 1, 0), 0);
    }

    #[test]
    fn zero_differential_adds_a_summand() {
        let basis = FreeModule::new(vec![Generator::new("g1", Bidegree::new(1, 0))]).unwrap();
        let nu = Generator::new("g2", Bidegree::new(2, 0));
        let d = Differential::from_images(&basis, nu.clone(), []).unwrap();
        let sum = FreeModule::new(vec![basis.gens()[0].clone(), nu]).unwrap();
        for b in Window::square(-4, 6).points() {
            assert_eq!(les_dim(&d, b.p, b.q), sum.dim(b.p, b.q));
        }
    }

    #[test]
    fn verify_accepts_engine_and_rejects_corruption() {
        let (basis, d) = rp2_stage();
        let cell = Bidegree::new(2, 2);
        let mut r = attach_cell(&basis, cell, &d).unwrap();
        assert!(verify_stage(&basis, cell, &d, &r, DEFAULT_MARGIN).values.is_empty());
        assert!(localization_check(&basis, cell, &r));

        let mut gens = r.new_module.gens().to_vec();
        gens[0].deg.q += 1;
        r.new_module = FreeModule::new(gens).unwrap();
        assert!(!verify_stage(&basis, cell, &d, &r, DEFAULT_MARGIN).values.is_empty());
        assert!(!localization_check(&basis, cell, &r));
    }

    #[test]
    fn verify_accepts_cancellation() {
        let basis = FreeModule::new(vec![
            Generator::new("l", Bidegree::new(1, 1)),
            Generator::new("x", Bidegree::new(1, -2)),
        ])
        .unwrap();
        let cell = Bidegree::new(2, 1);
        let d = Differential::from_images(
            &basis,
            Generator::new("g3", cell),
            [("l", M2Elem::ONE), ("x", "theta/(tau)".parse().unwrap())],
        )
        .unwrap();
        let r = attach_cell(&basis, cell, &d).unwrap();
        assert_eq!(r.case, CaseTag::TopConeKill);
        assert!(verify_stage(&basis, cell, &d, &r, DEFAULT_MARGIN).values.is_empty());
    }

    #[test]
    fn reconstruction_recovers_generators() {
        let module = FreeModule::new(vec![
            Generator::new("a", Bidegree::new(1, 1)),
            Generator::new("b", Bidegree::new(2, 1)),
            Generator::new("c", Bidegree::new(2, 1)),
            Generator::new("d", Bidegree::new(4, 0)),
        ])
        .unwrap();
        let window = Window::around(module.degrees(), DEFAULT_MARGIN);
        let table = DimTable::tabulate(window, |b| module.dim(b.p, b.q));
        let mut want = module.degrees();
        want.sort();
        assert_eq!(reconstruct_generators(&table), Some(want));
    }
}
