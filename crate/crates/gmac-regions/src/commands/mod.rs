pub mod region;
pub mod sir;
pub mod verify;
