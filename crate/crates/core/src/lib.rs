pub mod automaton;
pub mod env;
pub mod harness;
pub mod induction;
pub mod interleave;
pub mod policy;
pub mod trace;
