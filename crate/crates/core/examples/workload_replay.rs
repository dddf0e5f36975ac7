//! Generate a seeded grid-graph workload and verify it event by event against
//! the offline recomputation.
//!
//! cargo run --example workload_replay -- 7

use radii::cli::{verify_events, VerifyOptions};
use radii::gen::{gen_events, gen_instance, Layout, MetricChoice, WorkloadSpec};
use radii::preprocess::build;

fn main() -> radii::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let spec = WorkloadSpec {
        seed,
        metric: MetricChoice::Graph,
        layout: Layout::Grid,
        rows: 5,
        cols: 6,
        max_weight: 3,
        facilities: 6,
        events: 80,
        ..WorkloadSpec::default()
    };
    let inst = gen_instance(&spec)?;
    let events = gen_events(&spec, &inst)?;
    let (_, tree) = build(&inst)?;
    let outcome =
        verify_events(&inst, &tree, &events, &VerifyOptions::default()).map_err(|e| e.error)?;
    for line in outcome.lines.iter().rev().take(5).rev() {
        println!("{line}");
    }
    if let Some(d) = outcome.divergence {
        println!("diverged at event {}", d.index);
        std::process::exit(1);
    }
    Ok(())
}
