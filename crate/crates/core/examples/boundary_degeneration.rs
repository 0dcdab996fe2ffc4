//! Cells at boundary points of the two cube models: the transversal model
//! keeps the cube everywhere, the other one degenerates at a vertex.

use logvor::catalog;
use logvor::linalg::format_rational;
use logvor::logvor::{cell_boundary, degeneration_witness};

fn main() -> logvor::Result<()> {
    for m in [catalog::cube_model_1(), catalog::cube_model_2()] {
        let t = m.is_transversal()?;
        println!("{}: transversal = {}", m.name, t.transversal);
        for v in m.model_vertices()? {
            let cell = cell_boundary(&m, &v.x)?;
            let w = degeneration_witness(&m, &v)?;
            let x: Vec<String> = v.x.iter().map(format_rational).collect();
            println!(
                "  vertex ({}) support {:?}: cell f-vector {:?}, dependent zeros {:?}, degenerate co-circuits {}",
                x.join(", "),
                v.support,
                cell.f_vector(),
                w.dependent,
                w.affected.len()
            );
        }
    }
    Ok(())
}
