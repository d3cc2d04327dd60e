#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod atomic;
pub mod branch;
pub mod clock;
pub mod graph;
pub mod instgen;
pub mod master;
pub mod oracle;
pub mod simplex;
