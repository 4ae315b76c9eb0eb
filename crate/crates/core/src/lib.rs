//! Exact symbolic computation on the noncommutative sphere.
//!
//! The crate builds the quotient algebra `A_h = U(sl(2)_h)/{Delta - al}` (and
//! its compact form) with exact PBW normal forms, verifies the Cayley-Hamilton
//! identities of the matrix `L` and its higher-spin extensions `L_(k)`,
//! constructs quantum line bundles as explicit idempotents, evaluates the
//! noncommutative index pairing against finite-dimensional irreducibles, and
//! realizes a degree-truncated NC de Rham complex with `d^2 = 0`.
//!
//! All arithmetic is exact: coefficients live in the field
//! `Frac(Z[i][h, al])` adjoined `s = sqrt(h^2 - 4*al)`.

pub mod bundles;
pub mod cayley;
pub mod error;
pub mod linalg;
pub mod ncmatrix;
pub mod pbw;
pub mod rep;
pub mod report;
pub mod scalars;
pub mod spin;

pub use bundles::{basic_idempotents, e11_trivialization_witness, idempotent_suite_check, lagrange_idempotent, module_iso_check, prepicard_product, qlb_presentation, qlb_trace, Idempotent, IsoWitness};
pub use cayley::{minimal_polynomial, predicted_spectrum, spectrum_check, verify_generic_ch, verify_numeric_ch, ChReport, MinPoly, SpectrumPrediction};
pub use error::{Error, Result};
pub use linalg::ScalarMat;
pub use ncmatrix::{base_matrix, flip_perm, tensor_perm_matrix, NCMatrix};
pub use pbw::{ad_action, ad_gen, casimir_and_center, change_basis, make_algebra, AlgebraContext, NCElement, Presentation};
pub use rep::{index_pairing, pairing_table, pairing_table_tsv, Evaluator, GaussMat, Irrep, PairingCell};
pub use report::Status;
pub use scalars::{GPoly, GRat, Scalar, Specialization};
pub use spin::{coproduct_matrix, conjugate_to_compact, extension_matrix, symmetrizer, ExtensionMatrix, QlbLabel, SymBasis};
