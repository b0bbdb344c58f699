//! Classifies every corpus language and prints its verdict line.

use gaplab::corpus::{self, Kind, ENTRIES};
use gaplab::post::{classify, verdict};

fn main() -> gaplab::Result<()> {
    for e in ENTRIES.iter().filter(|e| e.kind == Kind::Language) {
        let c = classify(&corpus::language(e.name)?)?;
        println!("{:<12} {}", e.name, verdict(c.coclone));
    }
    Ok(())
}
