//! Range min-max trees over balanced parentheses, with static and dynamic
//! variants, ordinal tree navigation, compressed partial sums and a
//! compressed dynamic bitmap.

pub mod bitmap;
mod bits;
pub mod codes;
pub mod dynamic;
pub mod error;
pub mod format;
pub mod oracle;
pub mod paren;
pub mod partial_sums;
pub mod pm1;
pub mod primitives;
mod scan;
mod seqtree;
pub mod static_rmm;
pub mod tree;

pub use bitmap::{CompressedDynBitmap, SpaceReport};
pub use codes::{Codec, EliasDelta, EliasGamma, FixedWidth, Weight, Weighted};
pub use dynamic::DynamicRmm;
pub use error::{Error, Result};
pub use paren::ParenBitVector;
pub use partial_sums::CodeSequence;
pub use pm1::Pm1Array;
pub use primitives::{Pattern, Primitives, RangeSummary};
pub use seqtree::AuditFailure;
pub use static_rmm::{StaticRmm, StaticRmmConfig};
pub use tree::{NodeId, OrdinalTree};
