#![allow(dead_code)]

pub mod oracle;

/// The command fixture set: every subcommand, both output formats where
/// they apply, and the refusal paths.
pub const FIXTURES: &[&[&str]] = &[
    &["dist", "id", "swap"],
    &["dist", "odometer:dyadic", "odometer:dyadic:3"],
    &["--format", "json", "dist", "id", "swap"],
    &["member", "swap", "--neighborhood", "neighborhood weak base odometer dyadic radius 1"],
    &["defect", "swap", "id", "--kind", "tau-prime", "--measure", "uniform", "--partition", "{0},{1}"],
    &["compose", "swap", "odometer:dyadic"],
    &["--format", "json", "compose", "swap", "odometer:dyadic", "swap"],
    &["--depth", "3", "tabulate", "odometer:dyadic"],
    &["diff", "swap", "odometer:dyadic"],
    &["periods", "swap"],
    &["periods", "odometer:dyadic", "--bound", "4"],
    &["fullgroup", "swap", "odometer:dyadic"],
    &["centralizer", "odometer:dyadic:3", "--target", "odometer:dyadic"],
    &["centralizer", "swap", "--target", "odometer:dyadic"],
    &["synth", "odometer", "--target", "swap", "--partition", "{0},{1}"],
    &["synth", "odometer", "--target", "id", "--partition", "{0},{1}"],
    &["synth", "periodic", "--target", "odometer:dyadic", "--partition", "{0},{1}"],
    &["synth", "fundamental", "--target", "swap", "--period", "2"],
    &["synth", "aperiodize", "--target", "swap", "--period", "2", "--epsilon", "1"],
    &["synth", "truncate", "--target", "odometer:dyadic", "--epsilon", "1/4"],
    &["synth", "truncate", "--target", "odometer:dyadic", "--epsilon", "1/4", "--measure", "uniform"],
    &["synth", "rank1", "--target", "odometer:dyadic", "--measure", "uniform", "--epsilon", "1/4"],
    &["rokhlin", "--target", "odometer:dyadic", "--n", "3", "--measure", "uniform", "--epsilon", "1/4"],
    &["--format", "json", "rokhlin", "--target", "odometer:dyadic", "--n", "2", "--measure", "uniform", "--epsilon", "1/4"],
    &["graph-dot", "--target", "odometer:dyadic", "--partition", "{0},{1}"],
    &["--format", "dot", "graph-dot", "--target", "swap", "--partition", "{00},{01},{1}"],
    &["measure", "--measure", "uniform", "--set", "{0,10}"],
    &["measure", "--measure", "uniform", "--set", "{0}", "--target", "odometer:dyadic"],
    &["generate", "--seed", "7"],
    &["dist", "id", "not-a-map"],
];

pub fn run(args: &[&str]) -> (String, String, i32) {
    cdyn::cli::run(std::iter::once("cdyn").chain(args.iter().copied()))
}
