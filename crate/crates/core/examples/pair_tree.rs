//! Build the pair hierarchy for a small planar instance and print its levels,
//! dump and structural check.
//!
//! cargo run --example pair_tree

use radii::metric::load_instance;
use radii::preprocess::{build, structural_violations};

fn main() -> radii::Result<()> {
    let inst = load_instance(
        "metric euclidean 2 W 200\n\
         kappa 3\n\
         facility 1 0 0 cost 1\n\
         facility 2 10 0 cost 3\n\
         facility 3 120 40 cost 2\n\
         facility 4 130 45 cost 9\n\
         facility 5 60 140 cost 30\n",
    )?;
    let (levels, tree) = build(&inst)?;
    let range = tree.range();
    println!(
        "logradius {}..={} height {} pairs {} max degree {}",
        range.rho_min,
        range.rho_max,
        tree.height(),
        tree.len(),
        tree.max_degree()
    );
    for r in range.levels() {
        let level = levels.level(r);
        let ids: Vec<String> = level
            .members
            .iter()
            .map(|&i| inst.facility(i).id.to_string())
            .collect();
        println!(
            "level {r}: {} of {} candidates kept: {}",
            level.members.len(),
            level.candidates.len(),
            ids.join(" ")
        );
    }
    print!("{}", tree.dump(&inst));
    println!(
        "violations {}",
        structural_violations(&inst, &levels, &tree).len()
    );
    Ok(())
}
