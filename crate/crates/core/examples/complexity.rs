//! Node-touch counts as the ratio of diameter to cheapest facility grows.
//!
//! cargo run --release --example complexity

use radii::cli::bench_events;
use radii::gen::{gen_events, gen_instance, WorkloadSpec};
use radii::preprocess::build;

fn main() -> radii::Result<()> {
    println!("height  mean_search  max_path  max_solution_touch  checks");
    for k in [2u32, 4, 6, 8] {
        let spec = WorkloadSpec {
            seed: k as u64,
            dim: 1,
            extent: 5u64.pow(k),
            facilities: 40,
            cost_min: 1,
            cost_max: 1,
            events: 400,
            mix: [0.6, 0.2, 0.2],
            ..WorkloadSpec::default()
        };
        let inst = gen_instance(&spec)?;
        let events = gen_events(&spec, &inst)?;
        let (_, tree) = build(&inst)?;
        let report = bench_events(&inst, &tree, &events).map_err(|e| e.error)?;
        let inserts: Vec<_> = report
            .records
            .iter()
            .filter(|r| r.kind == "insert")
            .collect();
        let mean = inserts.iter().map(|r| r.search_visits).sum::<usize>() as f64
            / inserts.len().max(1) as f64;
        let path = report.records.iter().map(|r| r.path_len).max().unwrap_or(0);
        let sol = report
            .records
            .iter()
            .filter(|r| r.kind == "solution")
            .map(|r| r.touched)
            .max()
            .unwrap_or(0);
        let ok = if report.passed() { "ok" } else { "fail" };
        println!(
            "{:>6}  {mean:>11.2}  {path:>8}  {sol:>18}  {ok}",
            report.height
        );
    }
    Ok(())
}
