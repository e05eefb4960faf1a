pub mod forward;
pub mod jacobian;
pub mod param;
pub mod reconstruct;

pub use forward::{forward, forward_extended, ExtendedBundle, ForwardBundle, Side};
pub use jacobian::{jacobian_kernel_dim, jacobian_kernel_dim_dual};
pub use param::{p_cr_matrix, p_ref_blocks, torus_normalize, u0, CrystClass, HodgeParameter, LeviClass, NonCritical};
pub use reconstruct::{pin_candidates, reconstruct, reconstruct_crystalline, reconstruct_traced, PinBranch, Reconstruction};
