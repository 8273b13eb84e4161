//! Free `RO(C2)`-graded Bredon cohomology of `Rep(C2)`-complexes with
//! constant `Z/2` coefficients.
//!
//! Cells are attached one at a time. Each attachment is classified by its
//! connecting differential into the new summand, reduced to a normal form,
//! and the resulting free module is written down together with a chart
//! relating new generators to old ones. An independent long-exact-sequence
//! count over `F2` checks every stage.
//!
//! ```
//! use kronholm::{families, pipeline::compute, ring::Bidegree};
//!
//! let trace = compute(&families::projective_plane_twisted()).unwrap();
//! let degs = trace.final_module.degrees();
//! assert_eq!(degs, vec![Bidegree::new(1, 1), Bidegree::new(2, 1)]);
//! ```

pub mod attach;
pub mod error;
pub mod f2;
pub mod families;
pub mod io;
pub mod module;
pub mod oracle;
pub mod pipeline;
pub mod reduction;
pub mod render;
pub mod ring;

pub use attach::{attach_cell, AttachResult, CaseTag};
pub use error::{Error, Result};
pub use module::{Differential, FreeModule, Generator, ModuleElem};
pub use pipeline::{compute, CellComplexSpec, CellSpec, Trace};
pub use ring::{Bidegree, M2Elem, Monomial};
