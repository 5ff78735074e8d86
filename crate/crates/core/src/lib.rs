//! Schnizer modules of `U_eps(sl_{n+1})` at odd roots of unity, their affine
//! evaluation representations, and Drinfel'd polynomials.

pub mod affine;
pub mod analysis;
pub mod drinfeld;
pub mod error;
pub mod forms;
pub mod index;
pub mod linalg;
pub mod operator;
pub mod roots;
pub mod schnizer;
pub mod vector;

pub use affine::{
    enumerate_descents, full_descents, q_bracket, theta_closed, theta_full_closed, theta_ops,
    BSubscript, DescentKind, DescentSequence, ELambdaTerm, EvaluationModule,
};
pub use error::{CoreError, Result};
pub use forms::{DescentForm, LinearForm};
pub use index::{MultiIndex, Shape, SlotVector};
pub use operator::{Generator, Op, Representation};
pub use roots::{CartanData, RootLatticeElement, Sign, WeightVector};
pub use schnizer::{ModuleParams, SchnizerModule};
pub use vector::{ModuleVector, SparseOperator};
