//! Shared fixtures for the benchmarks.

use steiner_core::constructions::{bose, catalog, skolem, sw_complete_general};
use steiner_core::Design;

/// Named designs of increasing order.
pub fn fixtures() -> Vec<(&'static str, Design)> {
    vec![
        ("sts9", catalog("STS9").unwrap().0),
        ("skolem13", skolem(13).unwrap()),
        ("bose15", bose(15).unwrap()),
        ("sw_general19", sw_complete_general(19).unwrap().0),
        ("bose27", bose(27).unwrap()),
    ]
}
