//! Positive co-circuits, symbolic vertex functions and an interior cell of
//! the triangle model `B = (1, -5, 2, 2)^T`.

use logvor::catalog;
use logvor::linalg::{format_rational, int, rat};
use logvor::logvor::{cell_interior, positive_cocircuits, vertex_functions};

fn main() -> logvor::Result<()> {
    let m = catalog::triangle();
    println!("model {} (n = {}, d = {})", m.name, m.n(), m.d());

    for z in positive_cocircuits(m.b()) {
        println!("co-circuit on {:?}: {:?}", z.support, z.coeffs.iter().map(format_rational).collect::<Vec<_>>());
    }

    let names = vec!["x".to_string()];
    for f in vertex_functions(&m) {
        println!("V(x) = ({})", f.describe(&names).join(", "));
    }

    for x in [int(0), rat(1, 20)] {
        let cell = cell_interior(&m, std::slice::from_ref(&x))?;
        println!("cell at x = {}: f-vector {:?}", x, cell.f_vector());
        for v in cell.vertices() {
            println!("  {:?}", v.iter().map(format_rational).collect::<Vec<_>>());
        }
    }
    Ok(())
}
