//! Finite p-groups given by Cayley tables or class-2 polycyclic
//! presentations, with certified construction of noninner automorphisms of
//! order `p`.

pub mod automorphism;
pub mod construction;
pub mod corpus;
pub mod exec;
pub mod oracle;
pub mod pc;
pub mod structure;
pub mod table;

#[cfg(test)]
mod fixtures;
