//! Finite groups, symmetric generating pairs with total no-conjugacy, the
//! left-right Cayley complex built from them, and spectral diagnostics of its
//! derived graphs.

mod complex;
mod group;
mod spectral;

pub use complex::{ComplexRecord, Graph, GraphKind, LeftRightCayleyComplex, Square, SquareRecord};
pub use group::{
    check_tnc, find_generating_pair, FiniteGroup, GeneratingSetPair, GroupSpec, PairSearch, Tnc, DEFAULT_PAIR_ATTEMPTS,
    MAX_GROUP_ORDER,
};
pub use spectral::{
    check_mixing, second_eigenvalue, signed_second_eigenvalue, smallest_nontrivial_eigenvalue, MixingReport,
    MAX_POWER_ITERATIONS,
};
