pub mod algebra;
pub mod block;
pub mod cli;
pub mod error;
pub mod harness;
pub mod laws;
pub mod linalg;
pub mod matrix;
pub mod normality;
pub mod scalar;
pub mod toeplitz;
