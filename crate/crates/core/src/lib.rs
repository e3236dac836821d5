//! Finite-window combinatorics around IP-sets, J-sets and C-sets.
//!
//! Every notion about infinite subsets of ℕ is evaluated on an explicit
//! window `[1, N]`. Searches return certificates that can be re-checked
//! independently, and an empty search result is `Ok(None)`, never an error.

pub mod cst;
pub mod error;
pub mod families;
pub mod io;
pub mod jsets;
mod linalg;
pub mod rado;
pub mod symdyn;
pub mod windowsets;

pub use cst::{cst_trace, verify_cst, Companion, CstOutcome, CstStep, CstTrace, CstVerdict, Engine, YChoice};
pub use error::{Error, Result};
pub use families::{FiniteFamily, FilterVerdict, Mask, RamseyVerdict};
pub use jsets::{
    hj_check, hj_variable_word, j_witness, j_witness_after, partition_reduction, IPGenerators, JWitness, Reduction,
    VariableWord,
};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use rado::{
    columns_condition, enumerate_solutions, fs_mono_witness, monochromatic_solution, solve_in_set, verify_certificate,
    vdw_witness, Coloring, ColumnsCertificate, Progression, RationalMatrix,
};
pub use symdyn::{entering_times, essential_chain_check, indicator_word, strong_prox_times, ChainVerdict, Cylinder, SymbolicWord};
pub use windowsets::{finite_sums, DensityProfile, Transform, WindowSet};
