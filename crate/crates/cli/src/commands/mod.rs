pub mod forces;
pub mod orbit;
pub mod spectrum;
pub mod tables;
pub mod ym;
