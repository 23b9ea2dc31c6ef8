use alloc::string::String;

use crate::groundset::Subset;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ground set size {0} is outside 2..=16")]
    GroundSize(usize),
    #[error("element {0} is outside the ground set")]
    ElementOutOfRange(usize),
    #[error("subset {0} has fewer than two elements")]
    SubsetTooSmall(Subset),
    #[error("subset {0} is not contained in the ground set")]
    NotInGround(Subset),
    #[error("{0} and {1} are neither nested nor disjoint")]
    NotAForest(Subset, Subset),
    #[error("family has {0} maximal members; a tree needs exactly one")]
    NotATree(usize),
    #[error("{0} is not a member of the family")]
    NotAMember(Subset),
    #[error("family is not a thicket")]
    NotAThicket,
    #[error("family is not connected")]
    NotConnected,
    #[error("{0} is not minimal in the family")]
    NotMinimal(Subset),
    #[error("generator {0} is not in the generator family")]
    UnknownGenerator(Subset),
    #[error("monomial is already admissible")]
    AlreadyAdmissible,
    #[error("monomial is not in the normal basis")]
    NotNormal,
    #[error("invalid partition system: {0}")]
    InvalidPartitionSystem(String),
    #[error("invalid rooted tree: {0}")]
    InvalidRootedTree(String),
    #[error("graft component for {0} has the wrong vertex set")]
    GraftMismatch(Subset),
    #[error("invalid point configuration: {0}")]
    InvalidConfig(String),
    #[error("line on {0} is constant")]
    ConstantLine(Subset),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
}
