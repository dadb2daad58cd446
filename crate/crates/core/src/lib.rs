//! Exact Deligne complexes of finite Dolbeault complexes.

pub mod exactnum;
pub mod dolbeault;
pub mod deligne;
pub mod models;
pub mod duality;
pub mod green;
pub mod format;
pub mod cli;
