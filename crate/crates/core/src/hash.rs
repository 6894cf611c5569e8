//! Content hashes for inputs and artifacts.

use sha2::{Digest, Sha256};

/// Git-style blob hash: SHA-256 over `"blob <len>\0"` followed by the bytes,
/// rendered as lowercase hex.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
