//! Root isolation for `Q`, certified maxima of `P`, and exhaustive oracles
//! for the structural claims about the maximizers.

mod each_opt;
mod lattice;
mod matching;
mod maximize;
mod poly;
mod roots;

pub use each_opt::{
    each_opt_k_min, each_opt_structure, each_opt_threshold, CriticalPoints, EachOptGrid,
    EachOptReport, QuadSurd,
};
pub use lattice::{brute_force_simplex_max, lattice_size, SimplexMax, MAX_LATTICE_POINTS};
pub use matching::{verify_sorted_matching, MatchingReport};
pub use maximize::{exceptional_bracket, max_p_certified, MaxCertificate, MaxMethod};
pub use roots::{appb1_root, appb1_root_enclosure, eval_q_interval, isolate_q_root, RootBracket};
