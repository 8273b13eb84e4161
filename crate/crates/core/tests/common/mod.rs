//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kronholm::pipeline::{compute_partial, CellComplexSpec, CellSpec};
use kronholm::{Bidegree, Differential, FreeModule, Generator, M2Elem, Monomial};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which of the three attachment cases an instance is built to exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Zero,
    Kill,
    Ramp,
}

pub const MODES: [Mode; 3] = [Mode::Zero, Mode::Kill, Mode::Ramp];

pub struct Instance {
    pub mode: Mode,
    pub basis: FreeModule,
    pub cell: Bidegree,
    pub d: Differential,
}

/// The coefficient forced on `g` by degree, if any.
fn coefficient_for(g: Bidegree, nu: Bidegree) -> Option<Monomial> {
    Monomial::at(g + Differential::SHIFT - nu)
}

fn random_generator_degree(rng: &mut impl Rng, nu: Bidegree) -> Bidegree {
    let p = rng.gen_range(nu.p - 5..=nu.p);
    let q = if p == nu.p {
        rng.gen_range(nu.q - 4..=nu.q)
    } else {
        rng.gen_range(p - 4..=p + 3)
    };
    Bidegree::new(p, q)
}

/// A random free basis and connecting differential for one attachment, with
/// every generator respecting the degree hypothesis relative to the cell.
pub fn random_instance(rng: &mut impl Rng, mode: Mode) -> Instance {
    let p = rng.gen_range(1..=8);
    let nu = Bidegree::new(p, rng.gen_range(0..=p));
    let mut degs: Vec<Bidegree> = (0..rng.gen_range(0..=5))
        .map(|_| random_generator_degree(rng, nu))
        .collect();
    match mode {
        Mode::Zero => {}
        Mode::Kill => degs.push(nu - Differential::SHIFT),
        Mode::Ramp => {
            for _ in 0..rng.gen_range(1..=3) {
                let theta = Monomial::bottom(rng.gen_range(0..=4), rng.gen_range(0..=4));
                degs.push(nu - Differential::SHIFT + theta.bidegree());
            }
        }
    }
    degs.shuffle(rng);

    let gens: Vec<Generator> = degs
        .iter()
        .enumerate()
        .map(|(i, &deg)| Generator::new(format!("x{}", i + 1), deg))
        .collect();
    let basis = FreeModule::new(gens).unwrap();
    let mut images: Vec<(String, M2Elem)> = Vec::new();
    if mode != Mode::Zero {
        let mut forced = mode == Mode::Kill;
        let mut any_bottom = false;
        for g in basis.gens() {
            let Some(c) = coefficient_for(g.deg, nu) else { continue };
            let include = match mode {
                Mode::Kill if c.is_one() && forced => {
                    forced = false;
                    true
                }
                Mode::Kill => rng.gen_bool(0.5),
                _ => c.is_bottom() && (rng.gen_bool(0.6) || !any_bottom),
            };
            if include {
                any_bottom |= c.is_bottom();
                images.push((g.label.clone(), c.into()));
            }
        }
    }
    let d = Differential::from_images(
        &basis,
        Generator::new("nu", nu),
        images.iter().map(|(l, c)| (l.as_str(), *c)),
    )
    .unwrap();
    Instance { mode, basis, cell: nu, d }
}

/// A random complex of dimension at most `m`: sorted representation cells,
/// each attached with a random subset of its admissible coefficients. Images
/// that would make a stage non-realizable are dropped.
pub fn random_complex(rng: &mut impl Rng, m: i64) -> CellComplexSpec {
    let n = rng.gen_range(1..=6);
    let mut cells: Vec<CellSpec> = (0..n)
        .map(|_| {
            let p = rng.gen_range(0..=m);
            CellSpec::new(p, rng.gen_range(0..=p))
        })
        .collect();
    cells.sort_by_key(|c| c.deg);
    let mut spec = CellComplexSpec { name: "random".into(), cells: Vec::new() };
    for mut cell in cells {
        let basis = compute_partial(&spec).trace.final_module;
        for g in basis.gens() {
            if let Some(c) = coefficient_for(g.deg, cell.deg) {
                if rng.gen_bool(0.6) {
                    cell.images.insert(g.label.clone(), c.into());
                }
            }
        }
        spec.cells.push(cell.clone());
        if compute_partial(&spec).error.is_some() {
            let last = spec.cells.last_mut().unwrap();
            last.images.retain(|_, c| c.monomial().is_some_and(Monomial::is_bottom));
        }
    }
    spec
}
