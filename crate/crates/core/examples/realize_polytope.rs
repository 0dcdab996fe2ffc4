//! Builds a linear model whose interior cells are pentagons.

use logvor::linalg::{format_rational, int};
use logvor::logvor::{cell_interior, realize, RealizationData};
use logvor::polytope::{combinatorial_isomorphism, Polytope, DEFAULT_NODE_CAP};

fn main() -> logvor::Result<()> {
    let pentagon = Polytope::from_vertices(&[
        vec![int(0), int(0)],
        vec![int(2), int(0)],
        vec![int(3), int(1)],
        vec![int(1), int(3)],
        vec![int(0), int(2)],
    ])?;
    let data = RealizationData::from_polytope(&pentagon)?;
    let m = realize(&data)?;
    println!("realized model: n = {}, d = {}", m.n(), m.d());
    for i in 0..m.n() {
        let row: Vec<String> = m.b().row(i).iter().map(format_rational).collect();
        println!("  B[{}] = ({})", i, row.join(", "));
    }
    let cell = cell_interior(&m, &vec![int(0); m.d()])?;
    let iso = combinatorial_isomorphism(&cell, &pentagon, DEFAULT_NODE_CAP);
    println!("cell f-vector {:?}, isomorphic to the pentagon: {}", cell.f_vector(), iso.is_isomorphic());
    Ok(())
}
