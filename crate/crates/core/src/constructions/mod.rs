//! Constructive results: sum-class packings, the two-class 3-(v,4,1)
//! packing, completions of the sum-class triple packing to Steiner triple
//! systems, the Bose and Skolem systems, and a few fixed small systems.
//!
//! Every construction emits the identity labeling as its natural labeling.

mod catalog;
mod classical;
mod fourpack;
mod schreiber_wilson;
mod sum_class;

pub use catalog::{catalog, CATALOG_NAMES};
pub use classical::{bose, bose_with_pair, skolem, skolem_with_pair};
pub use fourpack::{fourpack, fourpack_block_count};
pub use schreiber_wilson::{
    sw_complete_general, sw_complete_special, sw_general_completion, sw_special_completion,
    Completion,
};
pub use sum_class::{sum_class_of, sum_class_packing, SumClass, SumClassParams};
