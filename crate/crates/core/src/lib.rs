//! Watermark codec built on canonical reducible permutation graphs:
//! encoding, decoding, recognition, attack simulation and recovery from
//! small edge modifications.

pub mod analysis;
pub mod attack;
pub mod codec;
pub mod error;
pub mod graph;
pub mod invariants;
pub mod recognition;
pub mod recovery;
pub mod tree;

pub use attack::{apply_attack, enumerate_attacks, random_attack, AttackKind, AttackSpec};
pub use codec::{decode_fast, decode_via_permutation, encode, Key, Watermark};
pub use error::{AnalysisError, AttackError, CodecError, GraphError, RecoveryError, Rejection, TreeError};
pub use graph::{Digraph, Edge};
pub use recognition::{is_watermark, recognize, Recognized, TreeClass, TreeKind};
pub use tree::RepresentativeTree;
pub use recovery::{detect, recover, recover_insertions_or_mixed, recover_removals, DamageReport, RecoveryResult};
