//! Bundled example networks.

use crate::automata::parse_aut;
use crate::dcsn::{parse_dcsn, Dcsn};
use crate::error::Error;

const TRANSFER_LINE: &[(&str, &str)] = &[
    ("a1.aut", include_str!("../models/transfer_line/a1.aut")),
    ("a2.aut", include_str!("../models/transfer_line/a2.aut")),
    ("a3.aut", include_str!("../models/transfer_line/a3.aut")),
    ("e1.aut", include_str!("../models/transfer_line/e1.aut")),
    ("e2.aut", include_str!("../models/transfer_line/e2.aut")),
    ("b3.aut", include_str!("../models/transfer_line/b3.aut")),
    ("b4.aut", include_str!("../models/transfer_line/b4.aut")),
];

/// Three machines, two shared end-effectors (E1, E2) and two one-slot
/// buffers (B3, B4) feeding the third machine.
pub fn transfer_line() -> Dcsn {
    let text = include_str!("../models/transfer_line/transfer_line.dcsn");
    parse_dcsn(text, "transfer_line.dcsn", |name| {
        let (_, body) = TRANSFER_LINE
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::invalid(format!("no bundled file {name}")))?;
        parse_aut(body, name)
    })
    .expect("bundled model parses")
}

/// Directory holding the transfer-line files on disk.
pub fn transfer_line_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("models/transfer_line")
}
