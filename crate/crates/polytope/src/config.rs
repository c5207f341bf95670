//! Compile-time capacity limits.
//!
//! The limits exist to turn runaway computations into clean errors instead of
//! exhausting memory.  Each limit has a display name used in capacity error
//! messages so that a user hitting one knows which knob is relevant.

/// Maximum polytope dimension handled by the analysis routines.
pub const DIM_MAX: usize = 6;
pub const DIM_MAX_NAME: &str = "POLY_Dmax";

/// Maximum number of lattice points a single polytope may enumerate.
pub const POINT_MAX: usize = 2_000_000;
pub const POINT_MAX_NAME: &str = "POINT_Nmax";

/// Maximum number of vertices (and input points fed to the hull).
pub const VERT_MAX: usize = 16_384;
pub const VERT_MAX_NAME: &str = "VERT_Nmax";

/// Maximum number of inequalities kept per elimination level when projecting
/// a facet system coordinate by coordinate.
pub const PROJ_ROW_MAX: usize = 20_000;
pub const PROJ_ROW_MAX_NAME: &str = "ELIM_Nmax";

/// Maximum number of weight entries in a combined weight system.
pub const WEIGHT_MAX: usize = 2 * DIM_MAX + 2;
pub const WEIGHT_MAX_NAME: &str = "W_Nmax";

/// Maximum number of candidate points considered when searching for
/// spanning simplices inside a point list.
pub const SIMP_CAND_MAX: usize = 32;
pub const SIMP_CAND_MAX_NAME: &str = "SIMP_Nmax";
