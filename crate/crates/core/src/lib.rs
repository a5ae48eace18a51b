pub mod classify;
pub mod cubic;
pub mod field;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod solver;
pub mod structured;
