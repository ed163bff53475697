pub mod circle;
pub mod cli;
pub mod gabai_tubes;
pub mod interlacing;
pub mod manifolds;
pub mod plmap;
