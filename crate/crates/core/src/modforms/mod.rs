//! Level-one modular forms: Eisenstein series, echelon bases, Hecke operators,
//! eigenforms and nearly holomorphic forms.

pub mod basis;
pub mod eigen;
pub mod nearly;
pub mod series;

pub use basis::{dim_cusp, dim_modular, hecke_matrix, integral_basis, sturm_bound, victor_miller_basis, SpaceBasis};
pub use eigen::{eigenbasis, EigenSystem, Eigenform};
pub use nearly::{h_delta_g, NHForm};
pub use series::{delta, e4, e6};
