#![allow(dead_code)]

use symspace::SymmetricSpace;

pub const SPACES: [&str; 8] = ["sl:2", "sl:3", "sl:4", "so:3,1", "so:4,1", "so:3,2", "su:2,1", "sp:2"];

pub fn space(s: &str) -> SymmetricSpace {
    SymmetricSpace::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}
