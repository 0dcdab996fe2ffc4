//! Closed-form endpoint cells of one-dimensional models, compared with the
//! cells obtained by evaluating the vertex functions.

use logvor::catalog;
use logvor::linalg::format_rational;
use logvor::logvor::{cell_boundary, cell_endpoints_d1};

fn main() -> logvor::Result<()> {
    for m in [catalog::d1_triangles(), catalog::d1_quads()] {
        let e = cell_endpoints_d1(&m)?;
        for (label, x, cell) in [("left", &e.left_x, &e.left), ("right", &e.right_x, &e.right)] {
            let direct = cell_boundary(&m, std::slice::from_ref(x))?;
            println!(
                "{} {} end x = {}: f-vector {:?}, matches vertex functions: {}",
                m.name,
                label,
                format_rational(x),
                cell.f_vector(),
                *cell == direct
            );
        }
    }
    Ok(())
}
