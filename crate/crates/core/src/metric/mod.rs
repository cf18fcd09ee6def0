//! Test spaces sampled from the unit sphere of `ℝᵈ` and the hyperspace
//! topology on their tests.

mod hyperspace;
mod sample;
mod topology;

pub use hyperspace::{
    directed_hausdorff, distance, dot, hausdorff_distance, matching_distance,
    matching_distance_bottleneck, matching_distance_exhaustive, separation, vietoris_member, Ball,
    VietorisBasicOpen, EXHAUSTIVE_MATCHING_MAX,
};
pub use sample::{
    parse_coords, random_rotation, sample_frames, MetricSample, DEFAULT_ORTHO_TOL, NORM_TOL,
};
pub use topology::{
    chord_for_angle, closure_check, event_cardinality_locally_constant, max_orthogonal_subset,
    max_orthogonal_subset_with_pairs, rank_bound, rank_bound_with_pairs, sum_map_lipschitz,
    tno_radius, tno_radius_with_pairs, LipschitzCheck, RankBound, ORTHO_FLOOR,
};
