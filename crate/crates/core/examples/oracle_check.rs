//! Compare the maintained cost with the exhaustive restricted optimum and the
//! unrestricted optimum on a tiny instance.
//!
//! cargo run --example oracle_check

use radii::dynamic::offline_dp;
use radii::metric::{load_instance, Point};
use radii::oracle::{ratio_report, restricted_exhaustive, unrestricted_opt};
use radii::preprocess::build;

fn main() -> radii::Result<()> {
    let inst = load_instance(
        "metric euclidean 2 W 60\n\
         kappa 3\n\
         facility 0 0 0 cost 2\n\
         facility 1 40 0 cost 1\n\
         facility 2 20 30 cost 4\n",
    )?;
    let (_, tree) = build(&inst)?;
    let clients: Vec<Point> = [(1.0, 1.0), (5.0, 2.0), (38.0, 3.0), (21.0, 27.0)]
        .iter()
        .map(|&(x, y)| Point::Coords(vec![x, y]))
        .collect();

    let (dp, sol) = offline_dp(&clients, &tree, &inst)?;
    let exact = restricted_exhaustive(&clients, &tree, &inst)?;
    let opt = unrestricted_opt(&clients, &inst)?;
    println!("dp {dp} exhaustive {} ({})", exact.cost, sol.to_line());
    let ids: Vec<String> = opt
        .facility_ids(&inst)
        .iter()
        .map(|f| f.to_string())
        .collect();
    println!(
        "unrestricted optimum {:.3} opening {}",
        opt.cost,
        ids.join(" ")
    );
    let report = ratio_report(&clients, &tree, &inst)?;
    println!(
        "ratio {:.3} bound {}",
        report.ratio,
        report.bound.map_or("-".into(), |b| b.to_string())
    );
    Ok(())
}
