//! Pair tables `(T, W)` of a torus with a finite group acting on its
//! lattice, for the generalized Springer side and the almost commuting side
//! of a dual pair of groups, and orbit-count fingerprints of the invariant
//! rings `O(T × T × t[-1])^W`.

pub mod group;
pub mod matching;
pub mod series;
pub mod table;

pub use group::{closure, IntMatrix, DEFAULT_CEILING};
pub use matching::{endomorphism_fingerprint, match_tables, BlockFingerprint, EndomorphismReport, MatchReport};
pub use series::{orbit_series, orbit_series_by_union_find, OrbitSeries, Region};
pub use table::{load_pair_tables, load_pair_tables_file, load_table_dir, shipped_tables, PairDatum, Side, TableError};
