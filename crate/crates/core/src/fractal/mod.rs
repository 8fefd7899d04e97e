//! Rauzy fractals of S-adic sequences sharing one Pisot matrix, built two
//! ways (projected stepped line, graph-directed IFS), with the Hausdorff
//! metric used to compare them.

mod csv;
mod experiments;
mod gifs;
mod hausdorff;
mod points;
mod project;

pub use self::csv::{read_csv, write_csv};
pub use experiments::{
    compare_approximations, compare_constructions, continuity_experiment, coverage_estimate,
    set_equation_check, Comparison, ContinuityReport, SetEquationCheck, RESOLUTION,
};
pub use gifs::{
    gifs_attractor, gifs_step, gifs_step_with, origin_seed, GifsEdge, GifsMap, GifsOptions,
    DEFAULT_POINT_BUDGET,
};
pub use hausdorff::{hausdorff, hausdorff_brute, hausdorff_tiles, hausdorff_with, HausdorffResult};
pub use points::{PointSet, Provenance, RauzyApprox};
pub use project::{
    derivation_cloud, prefix_constant, project_prefixes, project_prefixes_with, project_word_with,
    require_fractal_setting, stepped_line, SteppedLine,
};
