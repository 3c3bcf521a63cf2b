//! Verification engine for the dual braided quantum E(2) group construction.
//!
//! Every generator is realized as an exact weighted shift on integer-lattice
//! basis vectors; the dual braided multiplicative unitary
//! `Fhat = F_q(Xhat)* Yhat` and the bosonization unitary `Wtilde` are applied
//! through an FFT-based functional calculus on shift orbits. Operator
//! identities are decided exactly where both sides stay in the shift-monomial
//! class and numerically (with reported error estimates) where the quantum
//! exponential is involved.

pub mod boson;
pub mod catalog;
pub mod dual;
pub mod exact;
pub mod op;
pub mod poly;
pub mod qexp;
pub mod report;
pub mod sampling;
pub mod vector;

pub use catalog::{GeneratorCatalog, IdentityRecord, relation_registry};
pub use exact::{ExactScalar, QContext};
pub use op::{OpExpr, ShiftMonomial};
pub use qexp::{QexpParams, SymbolTable};
pub use report::ResidualReport;
pub use vector::{BasisIndex, FiniteVector};
