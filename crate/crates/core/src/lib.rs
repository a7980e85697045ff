#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod congruence;
pub mod exactlin;
pub mod genus;
pub mod quinlat;
pub mod rqfield;
pub mod sturm;
