//! Edge ideals of forests: projective dimension, tree-like systems that
//! generate the ideal up to radical, and independent checks of those systems.

pub mod builder;
pub mod error;
pub mod graph;
pub mod ideal;
pub mod io;
pub mod lyubeznik;
pub mod monomial;
pub mod oracle;
pub mod pd;
pub mod sv;
pub mod tls;

#[cfg(test)]
mod test_forests;

pub use error::{Error, Result};
pub use graph::{make_double_star, make_line, make_star, Edge, Forest, SplittingVertex};
pub use ideal::{edge_ideal, edge_rho, AraInvariants, MonomialIdeal};
pub use monomial::SquarefreeMonomial;
pub use pd::{pd_double_star, pd_forest, pd_forest_with, pd_line, PdResult, PdStep, PdStepKind};
pub use tls::{tree_inversion, StrictChain, TlsElement, TreeLikeSystem, Violation};
pub use builder::{bound_is_sharp_line, build_stretched_tls, double_star_tls, line_tls, AraCertificate, CaseEntry, CaseTag};
pub use oracle::{default_cap, tls_vanishing_check, tls_vanishing_check_prime, vanishing_equal, DensePoly, VanishingReport, Witness, WitnessKind};
pub use sv::{sv_check, tls_to_partition, SvPartition, SvViolation};
pub use lyubeznik::{admissible_symbols, double_star_resolution, LyubeznikComplex, MatrixEntry, Monomial, SparseMatrix};
pub use io::{parse_edge_list, parse_generators, write_edge_list, Generators};
