pub mod cli;
pub mod corpus;
pub mod counterexample;
pub mod error;
pub mod inequalities;
pub mod jacobi;
pub mod quadrature;
pub mod transform;
