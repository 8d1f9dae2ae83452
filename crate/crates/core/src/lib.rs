//! Tamari congruences and Thompson monoids.
//!
//! The crate models one monoid in four isomorphic guises and the congruence
//! that collapses each of them onto the positive Thompson monoid `P_k`:
//!
//! * [`XWord`]: words in the free monoid on `x_0, x_1, ...`, rewritten by
//!   `x_i x_j -> x_{j+k-1} x_i` (`i < j`);
//! * [`StarSequence`]: `*`-permutations and their arity-`k` analogues,
//!   multiplied by interlacing;
//! * [`LinearizedForest`]: ordered `k`-ary forests with a decreasing caret
//!   labeling, multiplied by stacking;
//! * [`PartitionSequence`]: sequences of polygons cut into `(k+1)`-gons,
//!   multiplied by gluing.
//!
//! The [`order`] module builds the weak Bruhat order on `*`-permutations with
//! a fixed star pattern, classifies it into Tamari classes and checks lattice
//! properties by brute force.

mod error;
pub mod forest;
pub mod order;
pub mod polygon;
pub mod starseq;
pub mod xmonoid;

pub use error::{Error, Result};
pub use forest::{count_shapes, single_tree_shapes, ForestShape, LinearizedForest, Node};
pub use order::{
    class_bottom, class_top, classify, hasse_dot, product_check, quotient, weak_bruhat,
    ClassInterval, CongruenceClassification, LatticeVerdict, Poset, DEFAULT_PATTERN_CAP,
    DEFAULT_SN_CAP,
};
pub use polygon::{partition_from_sequence, tamari_order_partitions, PartitionSequence, PolygonPartition};
pub use starseq::{bjorner_wachs_encoding, flatten, huang_tamari_encoding, BlockPattern, StarSequence, Term};
pub use xmonoid::{ThompsonElement, XWord};
