//! Home pairs and materialized areas over the vertices of a small graph.
//!
//! cargo run --example laminar_areas

use radii::areas::{enumerate_areas, home_pair};
use radii::metric::load_instance;
use radii::preprocess::build;

fn main() -> radii::Result<()> {
    let inst = load_instance(
        "metric graph W 12\n\
         vertex a\nvertex b\nvertex c\nvertex d\nvertex e\n\
         edge a b 1\nedge b c 2\nedge c d 4\nedge d e 5\n\
         facility 1 a cost 1\n\
         facility 2 d cost 1\n\
         facility 3 e cost 2\n",
    )?;
    let (_, tree) = build(&inst)?;
    let universe = inst.metric().universe().expect("graphs are finite");
    for p in &universe {
        let h = home_pair(p, &tree, &inst)?;
        println!(
            "{} home ({},{})",
            inst.metric().format_point(p),
            h.facility,
            h.logradius
        );
    }
    for area in enumerate_areas(&universe, &tree, &inst)? {
        let pair = tree.pair(&inst, area.node);
        let names: Vec<String> = area
            .members
            .iter()
            .map(|&i| inst.metric().format_point(&universe[i]))
            .collect();
        println!(
            "area {} {}: {}",
            pair.facility,
            pair.logradius,
            names.join(" ")
        );
    }
    Ok(())
}
