//! Insert and delete clients on a two-facility line and watch the cost.
//!
//! cargo run --example quickstart

use radii::dynamic::DynamicClustering;
use radii::metric::{load_instance, Point};
use radii::preprocess::build;

fn main() -> radii::Result<()> {
    let inst = load_instance(
        "metric euclidean 1 W 30\n\
         facility 0 0 cost 1\n\
         facility 30 30 cost 1\n",
    )?;
    let (_, tree) = build(&inst)?;
    let mut dc = DynamicClustering::new(&tree, &inst);

    println!("empty: cost {}", dc.cost());
    for (id, x) in [("a", 2.0), ("b", 29.0), ("c", 14.0)] {
        let stats = dc.insert(id, Point::Coords(vec![x]))?;
        println!(
            "insert {id} at {x}: cost {} (touched {} nodes)",
            dc.cost(),
            stats.touched()
        );
    }
    println!("{}", dc.solution().to_line());
    for id in ["c", "b"] {
        dc.delete(id)?;
        println!("delete {id}: cost {}", dc.cost());
    }
    println!("{}", dc.solution().to_line());
    Ok(())
}
