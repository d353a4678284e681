//! Random flag complexes X(n, p): clique skeletons, rational Betti numbers,
//! normalized-Laplacian spectral gaps of links, spectral vanishing
//! certificates, and the Monte Carlo harness that checks threshold and
//! Poisson-limit formulas at finite n.

mod bitset;
pub mod certify;
pub mod complex;
pub mod experiments;
pub mod graph;
pub mod homology;
pub mod spectral;

pub use complex::{count_maximal_cliques, ComplexError, Face, FlagSkeleton, SkeletonDump};
pub use graph::{Graph, GraphError, Seed, Vertex};
pub use spectral::{NormalizedLaplacian, PerturbationRecord, SpectralError, Spectrum};
pub use homology::{BettiVector, BoundaryMatrix, HomologyError, RankMethod};
pub use certify::{PropertyTCertificate, VanishingCertificate};
pub use experiments::{ExperimentRecord, Statistic, ThresholdParams, TrialConfig};
