pub mod algebra;
pub mod critical;
pub mod duval;
pub mod error;
pub mod pencil;
