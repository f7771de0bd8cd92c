//! Report envelope and input fingerprints.
//!
//! Every command prints exactly one report to stdout. Field order is
//! fixed, maps are key-sorted, and floats serialize shortest-roundtrip,
//! so two runs with the same configuration and seed produce identical
//! bytes except for `timing_ms`.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize)]
pub struct Report<'a> {
    pub command: &'a str,
    pub library_version: &'a str,
    pub cli_version: &'a str,
    /// Resolved configuration, keyed by long flag name, defaults filled.
    pub config: &'a Map<String, Value>,
    /// FNV-1a 64 fingerprint (hex) of every input file read.
    pub inputs: &'a BTreeMap<String, String>,
    /// Wall clock. The one field that varies between identical runs.
    pub timing_ms: f64,
    pub result: &'a Value,
}

/// FNV-1a 64. A content fingerprint for the report, not a
/// cryptographic hash; collisions cost nothing but confusion.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        // Published FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }
}
