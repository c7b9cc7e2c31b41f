//! The operators `T_n`, `H_m`, `K` and `A_n` acting on laws and step functions.

mod kruglov;
mod permutation;

pub use kruglov::{
    kruglov_dist, kruglov_dist_pruned, kruglov_iterate, poisson_tail_bound, support_iteration,
    truncation_level, DEFAULT_PRUNE, DEFAULT_TAIL_TOL,
};
pub use permutation::{
    a_n_matrix_dist, h_m_dist, repeat_vector, t_n_bruteforce, t_n_dist, t_n_stepfn, SubsetSumTable,
    ENUMERATION_LIMIT,
};
