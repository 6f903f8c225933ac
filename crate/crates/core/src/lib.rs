//! Positroid cluster structures from relabeled plabic graphs.

pub mod analysis;
pub mod gallery;
pub mod necklace;
pub mod perm;
pub mod plabic;
pub mod positroid;
pub mod seed;
pub mod twist;
pub mod wsc;
