//! Gale transform of B and the dual slice whose combinatorial type every
//! interior cell shares.

use logvor::catalog;
use logvor::gale::{check_gale_pair, dual_slice, gale_pair, verify_type_theorem};
use logvor::linalg::int;
use logvor::polytope::DEFAULT_NODE_CAP;

fn main() -> logvor::Result<()> {
    for m in [catalog::triangle(), catalog::quadrilateral(), catalog::cube_model_1()] {
        let g = gale_pair(m.b())?;
        let slice = dual_slice(&g.a)?;
        let t = verify_type_theorem(&m, &vec![int(0); m.d()], DEFAULT_NODE_CAP)?;
        println!(
            "{}: A is {}x{}, Gale pair ok = {}, slice f-vector {:?}, cell f-vector {:?}, same type = {}",
            m.name,
            g.a.nrows(),
            g.a.ncols(),
            check_gale_pair(&g.a, &g.b),
            slice.f_vector(),
            t.cell_f_vector,
            t.holds()
        );
    }
    Ok(())
}
