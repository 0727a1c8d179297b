//! Exact scalars and finitely presented graded-commutative algebras over
//! `K(n)_* = F_p[v, v^-1]`, `deg v = -2(p^n - 1)`.
//!
//! Sign conventions: `uv = (-1)^{|u||v|} vu`, and in a tensor product
//! `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`. A tensor product is modelled as a single
//! graded-commutative algebra whose generators list the left factor first, so
//! the second rule is a consequence of the first.

mod element;
pub mod hom;
mod monomial;
pub mod parse;
mod presentation;
mod scalar;
pub mod tensor;

pub(crate) use element::Acc;
pub use element::AlgebraElement;
pub use hom::{basis_in_degree, component_elements, enumerate_homs, AlgebraHom};
pub use monomial::{product_sign, Exps, Monomial};
pub use parse::{parse_element, parse_presentation};
pub use presentation::{AlgebraPresentation, GeneratorSpec, RawTerm, Rule};
pub use scalar::{is_prime, CoeffRing, Scalar, ScalarField};
pub use tensor::{tensor, tensor_power, TensorProduct};
