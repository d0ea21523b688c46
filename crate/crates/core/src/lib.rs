//! Exact arithmetic in finitely generated free associative algebras over Q
//! and GF(p^k), together with decision procedures for automorphisms of the
//! category of such algebras: mirror antiautomorphism, commutator-ideal
//! membership, homomorphism/antihomomorphism classification of candidate
//! maps, semi-inner factorization and central-bijection analysis.

pub mod centrality;
pub mod classifier;
pub mod files;
pub mod freealg;
mod linalg;
pub mod morphisms;
mod parse;
pub mod random;
pub mod scalars;

pub use freealg::{AlgebraError, CommPoly, Degree, NcPoly, VarNames, Word};
pub use morphisms::{AutWitness, Morphism, MorphismError, SemiLinearMap, TwistedMorphism};
pub use scalars::{ArithOp, Field, FieldAut, FieldDesc, FieldElem, ScalarError};
pub use classifier::{ClassificationResult, ClassifyError, MulCoeffs, SemiInnerFactorization, Verdict, WordMap};
pub use centrality::{CentralCandidate, CentralityError, UnivariateForm};
