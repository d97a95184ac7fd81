//! Record linkage between publication authors and social-media accounts.
//!
//! Accounts are segmented into name hypotheses ([`namekit`]), blocked against
//! an author surname index ([`linker`]), scored by additive rules
//! ([`scoring`]) and evaluated against a gold standard ([`evalkit`]).

pub mod corpus;
pub mod evalkit;
pub mod linker;
pub mod namekit;
pub mod pipeline;
pub mod scoring;
pub mod synth;
