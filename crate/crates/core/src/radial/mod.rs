//! Radial grids and fields, the discrete radial Laplacian, and linear Dirichlet solves.

mod dump;
mod field;
mod grid;
mod operator;

pub use dump::{dump_to_string, read_dump, write_dump, DUMP_HEADER};
pub use field::RadialField;
pub use grid::{RadialGrid, Spacing, MIN_NODES};
pub(crate) use operator::fd_weights;
pub use operator::{apply_radial_laplacian, solve_linear_radial, RadialOperator};
