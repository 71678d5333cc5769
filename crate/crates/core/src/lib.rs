pub mod cli;
pub mod cyclo;
pub mod identities;
pub mod lattice;
pub mod matrix;
pub mod tensor;
