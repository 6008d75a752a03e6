//! SL2 matrices over exact or rigorous scalars, generator tuples for free
//! groups and for the genus relation, and relation repair.

pub mod matrix;
pub mod parse;
pub mod scalar;
pub mod schottky;
pub mod tuple;

pub use matrix::{int_matrix, Classification, Matrix2};
pub use parse::{parse_group, to_group_text};
pub use scalar::{Scalar, ScalarKind};
pub use schottky::{is_schottky, preset, sample_tuple, AnyTuple, PRESET_NAMES};
pub use tuple::{
    relation_defect, relation_product, relation_repair, GeneratorTuple, Relation, RelationDefect,
    RepairOutcome,
};
