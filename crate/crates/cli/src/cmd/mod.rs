pub mod compare;
pub mod field;
pub mod gen;
pub mod run;
pub mod sym;
