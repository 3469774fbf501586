//! p-stabilization, the ordinary projector, contraction and congruence data.

pub mod congruence;
pub mod space;
pub mod stabilize;

pub use congruence::{congruence_exponent, congruence_p_part, pairing_matrix, PairingCheck};
pub use space::{contract, control_rank_scan, ranks_constant, OrdinarySpace, Projection, RankRow};
pub use stabilize::{embed_all, stabilize, stabilize_embedded, EmbeddedEigenform, StabilizedEigenform};
