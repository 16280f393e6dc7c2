pub mod alignment;
pub mod document;
pub mod gate;
pub mod logic;
pub mod network;
pub mod report;
pub mod roles;
pub mod transfer;
