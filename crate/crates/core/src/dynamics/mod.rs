//! Orbits of the mapping class group on level sets.

pub mod equidistribution;
pub mod integer;
pub mod regime;
pub mod walk;

pub use equidistribution::{
    equidistribution_test, expected_probabilities, histogram_statistics, seed_agreement,
    EquidistributionStats, Histogram2D, HistogramSpec, SeedAgreement,
};
pub use integer::{
    canonical_form, int_triple, integer_orbit, integer_orbit_bfs, integer_walk, CanonicalTriple, IntegerCensus,
    IntegerWalkReport, SignClass, Traversal,
};
pub use regime::{classify_level_set_regime, gpm_sector_regime, wandering_membership, Regime, RegimeTag};
pub use walk::{
    move_stream, random_fricke_point, random_su2_point, random_walk_orbit, recurrence_probe,
    MoveSampler, OrbitConfig, OrbitReport, RecurrenceReport,
};
