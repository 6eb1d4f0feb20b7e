pub mod arith;
pub mod bounds;
pub mod cache;
pub mod classify;
pub mod exactla;
pub mod modsym;
pub mod pointcount;
