//! eIRA LDPC codes: degree distributions, matrix realization, alist I/O and
//! systematic encoding.

pub mod alist;
pub mod distribution;
pub mod encoder;
pub mod matrix;

pub use alist::{from_alist, load_alist, save_alist, to_alist};
pub use distribution::{solve_free_counts, DegreeDistribution, DegreeGroup, ValidationReport};
pub use encoder::EiraEncoder;
pub use matrix::{realize_matrix, realize_matrix_with, Accumulator, ParityCheckMatrix, RealizeOptions};
