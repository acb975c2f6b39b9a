//! Exact integer linear algebra, ℚ/ℤ scalars and cyclotomic scalars.

mod cyc;
mod matrix;
mod qz;
mod snf;

pub use cyc::{cyc_average, cyc_from_qz, cyclotomic_poly, euler_phi, CycScalar};
pub use matrix::{int_vec, vec_add, vec_is_zero, vec_neg, vec_scale, vec_sub, zero_vec, IntMatrix};
pub use qz::{
    lcm_all, qz_dot, qz_kernel_elements, qz_mat_vec, qz_vec_add, qz_vec_is_zero, qz_vec_neg, qz_vec_sub,
    qz_zero_vec, solve_qz, solve_qz_space, QmodZ, QzSolutionSpace,
};
pub use snf::{kernel_basis, kernel_mod, smith_normal_form, snf, snf_tracked, solve_int, subquotient, FgAbGroup, Snf, Subquotient, Track};
