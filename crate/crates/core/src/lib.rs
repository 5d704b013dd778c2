//! Verification and classification of codimension-2 Q-Fano weighted complete intersections.

pub mod blowup;
pub mod centers;
pub mod conditions;
pub mod enumerate;
pub mod family;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sarkisov;
pub mod singularity;
pub mod upoly;
