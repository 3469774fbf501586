//! The measures dμ_g, h·dμ_g and the evaluation of D_H at arithmetic points.

pub mod euler;
pub mod measure;
pub mod verify;

pub use euler::{correction_factors, euler_factor, EpSign, EulerData};
pub use measure::{ArithMeasure, TestFunction};
pub use verify::{classical_ratio, evaluate_d, MAX_SERIES_LEN, ordinary_space, verify, StagedError, VerifyConfig, VerifyReport};
