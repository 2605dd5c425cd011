//! Syzygy modules and multiplication matrices over prime fields.
//!
//! Given pairwise commuting matrices `M1..Mn` and a matrix `F`, the engine
//! computes the reduced Gröbner basis of the module of relations
//! `p = (p1..pm)` with `p1(M) f1 + ... + pm(M) fm = 0`, using multi-Krylov
//! linear algebra. Conversely it recovers multiplication matrices from a
//! reduced Gröbner basis, which together give a change-of-order routine.

pub mod error;
pub mod field;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod monomial;
pub mod mulmat;
pub mod oracle;
pub mod poly;
pub mod syzygy;

pub use error::{Error, Result};
pub use field::{FieldElem, PrimeField};
pub use matrix::{DenseMatrix, RankProfile};
pub use monomial::{BaseOrder, Monomial, MonomialIndex, MonomialOrder, ModuleWrapper};
pub use poly::{GroebnerBasis, ModulePoly, StaircaseData};
pub use mulmat::{change_order, krylov_eval, multiplication_matrices, MulMatResult};
pub use syzygy::{monomial_basis, syzygy_basis, Instance, MonomialBasisResult};
