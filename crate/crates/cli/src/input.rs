//! Loading parentheses from text or `RMMT` files.

use std::path::Path;

use rmm_core::format;
use rmm_core::{ParenBitVector, StaticRmmConfig};

use crate::Failure;

pub struct Loaded {
    pub bits: ParenBitVector,
    /// Present when the input was a serialized structure.
    pub config: Option<StaticRmmConfig>,
}

pub fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = read(path)?;
    let invalid = |e: rmm_core::Error| Failure::Invalid(format!("{}: {e}", path.display()));
    if format::is_rmmt(&bytes) {
        let (bits, config) = format::decode(&bytes).map_err(invalid)?;
        return Ok(Loaded {
            bits,
            config: Some(config),
        });
    }
    let text = std::str::from_utf8(&bytes).map_err(|e| {
        Failure::Invalid(format!(
            "{}: not UTF-8 text (byte {})",
            path.display(),
            e.valid_up_to()
        ))
    })?;
    let bits = ParenBitVector::parse(text).map_err(invalid)?;
    if bits.is_empty() {
        return Err(Failure::Invalid(format!(
            "{}: parse error: no parentheses in input",
            path.display()
        )));
    }
    Ok(Loaded { bits, config: None })
}
