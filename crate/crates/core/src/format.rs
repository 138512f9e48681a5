//! Binary `RMMT` serialization of a parentheses sequence.
//!
//! Layout (all integers little-endian): the magic `RMMT`, a version byte
//! (1), the bit length as `u64`, the chunk size and arity as `u32`, then the
//! bits packed LSB-first in `u64` words. Summaries are not stored; loading
//! rebuilds them.

use crate::dynamic::DynamicRmm;
use crate::error::{Error, Result};
use crate::paren::ParenBitVector;
use crate::static_rmm::{StaticRmm, StaticRmmConfig};

pub const MAGIC: &[u8; 4] = b"RMMT";
pub const VERSION: u8 = 1;
pub const HEADER_BYTES: usize = 21;

/// Serializes `bits` with the given configuration.
pub fn encode(bits: &ParenBitVector, config: StaticRmmConfig) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_BYTES + 8 * bits.words().len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(bits.len() as u64).to_le_bytes());
    out.extend_from_slice(&(config.chunk_bits as u32).to_le_bytes());
    out.extend_from_slice(&(config.arity as u32).to_le_bytes());
    for w in bits.words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out
}

/// Whether `bytes` starts with the `RMMT` magic.
pub fn is_rmmt(bytes: &[u8]) -> bool {
    bytes.starts_with(MAGIC)
}

/// Parses a serialized sequence and its configuration.
pub fn decode(bytes: &[u8]) -> Result<(ParenBitVector, StaticRmmConfig)> {
    if bytes.len() < HEADER_BYTES || !is_rmmt(bytes) {
        return Err(Error::Format("missing RMMT header".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Format(format!(
            "unsupported RMMT version {}",
            bytes[4]
        )));
    }
    let len = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let s = u32::from_le_bytes(bytes[13..17].try_into().unwrap()) as usize;
    let k = u32::from_le_bytes(bytes[17..21].try_into().unwrap()) as usize;
    let len = usize::try_from(len).map_err(|_| Error::Format("bit length overflows".into()))?;
    let body = &bytes[HEADER_BYTES..];
    let words = len.div_ceil(64);
    if body.len() != words * 8 {
        return Err(Error::Format(format!(
            "{len} bits need {} payload bytes, found {}",
            words * 8,
            body.len()
        )));
    }
    let words: Vec<u64> = body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if len % 64 != 0 && words.last().is_some_and(|w| w >> (len % 64) != 0) {
        return Err(Error::Format("nonzero padding after the last bit".into()));
    }
    let config = StaticRmmConfig::new(s, k)?;
    Ok((ParenBitVector::from_words(words, len)?, config))
}

impl StaticRmm {
    pub fn to_bytes(&self) -> Vec<u8> {
        encode(self.bits(), self.config())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let (bits, config) = decode(bytes)?;
        StaticRmm::build(bits, config)
    }
}

impl DynamicRmm {
    /// Serializes the current sequence with the default static settings.
    pub fn to_bytes(&self) -> Vec<u8> {
        encode(&self.to_bits(), StaticRmmConfig::default())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Ok(DynamicRmm::from_bits(&decode(bytes)?.0))
    }
}
