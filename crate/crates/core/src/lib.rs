pub mod circuits;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod oracles;
pub mod phasespace;
pub mod random;
pub mod search;
pub mod states;
pub mod verify;
