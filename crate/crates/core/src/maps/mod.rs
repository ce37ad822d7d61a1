//! Maps between inverse sequences: thread maps (weak g-cell maps) and the
//! maps they induce on quotients, set-valued g-cell maps, level-graded cell
//! maps, and the constructions relating them.
//!
//! Every thread-level result is taken at the depth `D` carried by the map or
//! passed explicitly. Representatives and limit threads are selected
//! deterministically, so identical inputs give identical outputs.

mod dt;
mod enumerate;
mod family;
mod gcell;
mod induce;
mod lift;
mod weak;

pub use dt::{close_preservation_witness, dt_induce_weak, DTCellMap, DtInduced};
pub use enumerate::enumerate_gcell_maps;
pub use family::{family_to_gcell, LevelMapFamily};
pub use gcell::{
    check_closeness_preservation, check_compatibility, check_edges, check_gcell_map, check_limit_condition,
    check_nesting, check_semicontinuity, ClosenessReport, ClosenessWitness, GCellMap, GCellReport, GCellViolation,
    SemicontinuityReport, SemicontinuityWitness, Side,
};
pub use induce::{check_singleton_continuity, gcell_induce_weak, AlphaRule, InduceTrace, InducedWeak, SingletonReport};
pub use lift::{
    ball_condition, construct_gcell_from_quotient_map, lift_quotient_map, open_quotient_condition,
    search_representatives, BallCondition, ConstructReport, LiftReport, OpenQuotientCondition, RepresentativeSearch,
    CONSTRUCT_INTERPRETATION,
};
pub use weak::{
    check_quotient_map_continuity, check_weak_gcell, induce_quotient_map, thread_map_continuity, InducedQuotient,
    PairCheck, QuotientMap, WeakGCellMap,
};
