//! Dense hierarchical order labels.
//!
//! Tags are composite numbers over a chain of ever-finer units. Between any
//! two tags there is always room for more, so items can be inserted into
//! nested ordered structures without relabelling their neighbours. The
//! crate provides the tag type and its text form ([`label`]), allocation
//! and re-tagging ([`allocator`]), tag arithmetic and group checks
//! ([`arithmetic`]), an interpolation-driven insertion sorter ([`sorter`])
//! and a nested cave simulator that exercises the scheme end to end
//! ([`cave`]).

pub mod allocator;
pub mod arithmetic;
pub mod cave;
pub mod cli;
pub mod label;
pub mod sorter;

pub use allocator::{insert_after, insert_before, insert_between, retag_region, AllocError};
pub use label::{zwischenraum, Bound, EcnTag, LabelError, ParseTagError, Region};
