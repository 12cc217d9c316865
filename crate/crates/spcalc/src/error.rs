use thiserror::Error;

use crate::rules::RuleKind;
use crate::tree::Position;

/// Syntax error with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Why a rule instance does not apply to a tree. Each variant names the
/// violated side condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("position {0} is not a position of the tree")]
    InvalidPosition(Position),
    #[error("atom index {index} out of range 1..={len} at {pos}")]
    AtomIndex { pos: Position, index: usize, len: usize },
    #[error("child index {index} out of range 1..={len} at {pos}")]
    ChildIndex { pos: Position, index: usize, len: usize },
    #[error("indices must differ, both are {0}")]
    EqualIndices(usize),
    #[error("child {index} at {pos} is not of the nested shape: {reason}")]
    FourShape { pos: Position, index: usize, reason: String },
    #[error("new label {new} is not smaller than {old}")]
    LabelNotSmaller { old: u64, new: u64 },
    #[error("label {left} of the target child must exceed label {right} of the moved child")]
    LabelOrder { left: u64, right: u64 },
}

/// Failure while replaying a derivation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("step {step} not applicable: {source}")]
    NotApplicable {
        step: usize,
        #[source]
        source: RuleError,
    },
    #[error("step {step} uses {kind}, which the selected system does not admit")]
    NotInSystem { step: usize, kind: RuleKind },
}

/// Failure while reordering a derivation into normal shape.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("replay of a reordered segment diverged from the original endpoint")]
    ReplayMismatch,
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(
        "an atom elimination empties the inner node of a later transitivity step at {pos}; \
         the two cannot be reordered and no equivalent normal sequence was found"
    )]
    FourObstruction { pos: Position },
    #[error("flag count failed to decrease ({parent} -> {child}); reordering aborted")]
    FlagGuard { parent: usize, child: usize },
    #[error("trees are not related by child permutations")]
    NotSigmaEquivalent,
}

/// Malformed sequent proof input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentError {
    #[error("node {0}: {1}")]
    Malformed(String, String),
    #[error("axiom {0} is not admitted by the selected system")]
    NotInSystem(String),
}
