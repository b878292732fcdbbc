//! Second-order quantifier elimination with witnesses.
//!
//! Given a clause set `N` and predicate variables `X̄`, the engine searches for an
//! `X̄`-eliminating derivation in the SCAN calculus, extracts a witness
//! substitution `σ` with `∃X̄ N ⟺ Nσ` (first-order when possible, greatest-fixpoint
//! form otherwise) and checks it with a built-in prover and finite-model oracle.

pub mod logic;
pub mod subsumption;
pub mod calculus;
pub mod saturation;
pub mod witness;
pub mod verify;
pub mod frontend;
