//! Cyclotomic FFT plans over GF(2^m), their partial and dual-partial
//! reductions, XOR-network common-subexpression elimination, and complete
//! Reed-Solomon errors-and-erasures decoders in time and transform domain,
//! with exact operation-count accounting.

pub mod bilinear;
pub mod bits;
pub mod cyclotomic;
pub mod galois;
pub mod reduction;
pub mod reference;
pub mod report;
pub mod rsdecode;
pub mod slp;

pub use bilinear::{
    build_full_cfft, builtin_kernel, evaluate_plan, naive_dft, verify_kernel, CfftPlan,
    ConvolutionKernel, PlanVariant,
};
pub use cyclotomic::{
    compute_cosets, coset_permutation, find_normal_basis, rotate_coset, CosetStructure,
    IndexPermutation, NormalBasis,
};
pub use galois::{default_prim_poly, horner_eval, FieldError, FieldSpec, Gf};
pub use reduction::{
    mult_count, reduce_dual_partial, reduce_partial, search_rotation, ReducedPlan, SupportKind,
    SupportSpec,
};
