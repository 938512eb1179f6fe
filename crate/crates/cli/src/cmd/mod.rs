pub mod dump;
pub mod kernel;
pub mod region;
pub mod solve;
pub mod verify;
