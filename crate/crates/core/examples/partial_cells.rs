//! Cells of a partial model: inside theta, at a facet midpoint, and the
//! experimental construction at a vertex.

use logvor::catalog;
use logvor::linalg::{centroid, format_rational, int};
use logvor::oracle::conjecture_agreement;
use logvor::partial::{cell_partial_face_conjecture, cell_partial_facet, cell_partial_interior};

fn show(v: &[logvor::linalg::Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn main() -> logvor::Result<()> {
    let pm = catalog::partial_example();
    let centre = pm.theta.centroid().expect("theta is not empty");
    println!("interior cell at ({}): f-vector {:?}", show(&centre), cell_partial_interior(&pm, &centre)?.f_vector());

    for f in 0..pm.theta.halfspaces().len() {
        let mid = centroid(&pm.facet_vertices(f)?);
        let r = cell_partial_facet(&pm, f, &mid)?;
        println!(
            "facet {} at p = ({}): F-cell dim {}, model cell dim {}, Q dim {}, kept {} side",
            f,
            show(&r.p),
            r.f_cell.dim(),
            r.m_cell.dim(),
            r.q.dim(),
            if r.certificate.kept_below { "lower" } else { "upper" }
        );
    }

    let c = cell_partial_face_conjecture(&pm, &[int(0), int(0)])?;
    let a = conjecture_agreement(&pm, &c, 200, 7, 1e-6)?;
    println!(
        "vertex p = ({}): candidate dim {} (predicted {}), oracle agreement {:.3}",
        show(&c.p),
        c.candidate.dim(),
        c.predicted_dim,
        a.agreement_rate
    );
    Ok(())
}
