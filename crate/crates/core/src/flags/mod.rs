//! Simplicial front end: complexes, cellular sheaves, flags and the
//! filtrations they induce.

mod flag;
pub mod models;
mod sheaf;
mod simplicial;

pub use flag::{
    flag_filtration_f, kernel_filtration, preimage_flag, pushforward_flag_comparison, relative_cohomology,
    skeletal_flag, subdivide, support_filtration_g, ClosedSubcomplexFlag, FlagFiltration, FlagKind, LerayDegree,
    LerayReport, SimplicialMap,
};
pub use sheaf::{sheaf_cochains, CellularSheaf, CochainLayout};
pub(crate) use sheaf::stalk_basis;
pub use simplicial::{SimplexId, SimplicialComplex, Subcomplex};
