//! Sparse oriented spanners for Euclidean point sets.
//!
//! An orientation of a geometric graph is judged by its *oriented dilation*:
//! for every pair `p, q` the length of the shortest directed closed walk
//! through both, divided by the perimeter of the smallest triangle through
//! `p` and `q` in the point set. [`build_oriented_spanner`] produces an
//! orientation with `O(n)` edges whose oriented dilation is at most
//! `2 + eps`; [`exact_oriented_dilation`] and [`approx_oriented_dilation`]
//! measure it.

pub mod ann;
pub mod dilation;
pub mod error;
pub mod gen;
pub mod geometry;
pub mod io;
pub mod min_triangle;
pub mod oracles;
pub mod orientation;
pub mod render;
pub mod spanner;
pub mod wspd;

pub use ann::AnnIndex;
pub use dilation::{
    approx_oriented_dilation, dijkstra_oracle, exact_oriented_dilation, ApproxDilationConfig,
    DijkstraOracle, DilationMode, DilationReport, DistanceMatrix, DistanceOracle, Witness,
};
pub use error::{Error, ErrorKind, Result};
pub use geometry::{distance, exact_min_triangle, triangle_perimeter, Metric, Point, PointSet, TriangleTriple};
pub use io::{parse_graph, parse_metric_matrix, parse_points, write_graph, write_points, MetricMatrix, RunReport};
pub use min_triangle::{approx_min_triangle, TriangleQueryConfig};
pub use orientation::{greedy_orient, OrientedGraph};
pub use spanner::{build_oriented_spanner, Mode, Spanner, SpannerConfig, SpannerStats};
pub use wspd::{compute_wspd, pick_representatives, SplitTree, WellSeparatedPair};
