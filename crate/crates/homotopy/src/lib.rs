//! Finite posets and simplicial complexes: nerves, barycentric subdivision,
//! rational homology, poset expansions, and simplicial collapses.

pub mod collapse;
pub mod complex;
pub mod dset;
pub mod poset;

pub use collapse::{random_pair, verify_collapse, whitehead_collapse, CollapseError, CollapseSequence, WhiteheadCollapse};
pub use complex::{is_acyclic, rational_homology, SimplicialComplex, Subdivision};
pub use dset::{realize_dset, DSet, DSetError};
pub use poset::{build_dn, build_dn_j, is_weak_elementary_expansion, weak_elementary_expansion, Poset, PosetError};
