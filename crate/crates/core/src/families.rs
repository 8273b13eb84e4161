//! Built-in complexes, addressable by name from the command line.

use crate::pipeline::{CellComplexSpec, CellSpec, CellStream, FiniteStream, TrivialProjectiveSpace};
use crate::ring::{M2Elem, Monomial};

/// `RP^2_tw`: cells `(1,0)` and `(2,2)`, with `d(g1) = theta`.
pub fn projective_plane_twisted() -> CellComplexSpec {
    CellComplexSpec {
        name: "rp2tw".into(),
        cells: vec![
            CellSpec::new(1, 0),
            CellSpec::new(2, 2).with_image("g1", M2Elem::THETA),
        ],
    }
}

/// Lines in `R^{4,1}` with the base point taken as a separate fixed cell.
pub fn grassmannian_lines_r41() -> CellComplexSpec {
    CellComplexSpec {
        name: "gr1-r41".into(),
        cells: vec![
            CellSpec::new(0, 0),
            CellSpec::new(1, 0),
            CellSpec::new(2, 0),
            CellSpec::new(3, 3)
                .with_image("g2", Monomial::bottom(1, 0).into())
                .with_image("g3", Monomial::bottom(0, 1).into()),
        ],
    }
}

/// The representation sphere `S^{p,q}`: a fixed point and one `(p,q)` cell.
pub fn sphere(p: i64, q: i64) -> CellComplexSpec {
    CellComplexSpec {
        name: format!("sphere-{p}-{q}"),
        cells: vec![CellSpec::new(0, 0), CellSpec::new(p, q)],
    }
}

pub const NAMES: &[&str] = &["rp2tw", "gr1-r41", "rp-infinity-trivial"];

/// Looks up a built-in by name.
pub fn stream_by_name(name: &str) -> Option<Box<dyn CellStream>> {
    match name {
        "rp2tw" => Some(Box::new(FiniteStream(projective_plane_twisted()))),
        "gr1-r41" => Some(Box::new(FiniteStream(grassmannian_lines_r41()))),
        "rp-infinity-trivial" => Some(Box::new(TrivialProjectiveSpace)),
        _ => None,
    }
}
