//! Polynomial algebra and the polynomial systems of the pie-cutting
//! problem, with a plain-text exchange format.

mod format;
mod poly;
mod system;

pub use format::{export_system, model_hint, parse_system, FORMAT_VERSION};
pub use poly::{Monomial, MultiPoly};
pub use system::{
    build_piecut_system, build_single_sector_system, max_sector_fraction, piecut_feasible,
    BoxConstraint, ExactModel, FilterSpec, PolySystem, PIECUT_VARS,
    REFERENCE_SOLUTION_40_35_25, SINGLE_SECTOR_VARS,
};
