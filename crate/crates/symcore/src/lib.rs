//! Exact symbolic algebra over the rationals: expressions, sparse
//! multivariate polynomials, canonical rational functions and jet-variable
//! bookkeeping.

pub mod context;
pub mod error;
pub mod expr;
pub mod gcd;
pub mod jets;
pub mod parser;
pub mod poly;
pub mod ratfunc;

pub use context::{JetRole, VarId, VarInfo, VarRole, VariableContext};
pub use error::{Result, SymError};
pub use expr::{differentiate, is_identically_zero, normalize, substitute, Expr};
pub use gcd::{gcd, gcd_all};
pub use jets::{collect_jet_coefficients, reconstruct, split_by_jets, JetMonomial};
pub use parser::parse_expression;
pub use poly::{int, rat, Coeff, Polynomial, Term};
pub use ratfunc::{CanonicalForm, RationalFunction};
