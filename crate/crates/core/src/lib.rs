pub mod campaign;
pub mod cli;
pub mod decompose;
pub mod diagram;
pub mod error;
pub mod gf;
pub mod hom;
pub mod homsolver;
pub mod module;
pub mod semis;
