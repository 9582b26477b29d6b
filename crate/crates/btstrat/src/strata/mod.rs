//! Parahoric tuples, Bruhat-Tits indices, stratum descriptors and the
//! lattice-side enumeration of points of the Rapoport-Zink space.

pub mod blocks;
pub mod components;
pub mod concrete;
pub mod index;
pub mod points;
pub mod tuple;

pub use blocks::{fine_decomposition, open_selection, stratum_descriptor, Block, BlockRole, FineStratum, OpenClause, StratumCounter, StratumDescriptor};
pub use components::{irreducible_components, ComponentCensus, ComponentFamily, FamilyKind};
pub use concrete::{
    certify_feasibility, complete_index, intersect_index, leq_index, minimize_types, realize, validate_concrete, window_indices, ConcreteIndex, Feasibility,
    Intersection, WindowPoset,
};
pub use index::{abstract_leq, enumerate_abstract, maximal_indices, validate_abstract, AbstractIndex, OrbitKey, Slot};
pub use points::{bt_type_of_point, enumerate_points, point_map, PointMap, PointType, RZPoint};
pub use tuple::ParahoricTuple;
