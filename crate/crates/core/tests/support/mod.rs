pub mod golden;
pub mod models;
pub mod properties;
