//! Decomposition of filtered chain complexes into interval spheres over a
//! prime field, with persistence barcodes, a column-reduction cross-check and
//! filtered kernels of simplicial maps.

pub mod barcode;
pub mod complex;
pub mod decomposition;
pub mod error;
pub mod field;
pub mod kernel;
pub mod rips;
pub mod spa;
pub mod time;

pub use barcode::{diameter_witness, to_barcode, Bar, PersistenceDiagram};
pub use complex::{FilteredChainComplexInput, Generator, GeneratorLabel, TotalBoundaryMatrix};
pub use decomposition::{
    decompose, decompose_traced, pair, split, split_trivial, Decomposer, Decomposition,
    IntervalSphere, SplitPair, Strategy,
};
pub use error::{Error, ErrorKind, Result};
pub use field::{FieldSpec, PrimeFieldElement};
pub use kernel::{decompose_kernel, SimplicialMapWithSection};
pub use rips::{build_rips, DistanceMatrix, FilteredSimplicialComplex, Metric};
pub use spa::{spa_reduce, PersistencePair, ReductionStats, SpaMode};
pub use time::{Death, Time};
