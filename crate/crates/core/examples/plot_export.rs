//! CSV of cell vertices along the triangle model, ready for plotting in the
//! tetrahedron.

use logvor::catalog;
use logvor::plot::{export_plot, GridSpec};

fn main() -> logvor::Result<()> {
    let csv = export_plot(&catalog::triangle(), GridSpec { points: 5 })?;
    print!("{}", csv);
    Ok(())
}
