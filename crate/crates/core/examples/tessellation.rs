//! Numeric maximum likelihood estimates and the seeded tessellation check.
//! `LOGVOR_THREADS` sets the worker count.

use logvor::catalog;
use logvor::oracle::{mle_full, mle_partial, tessellation_check, MleOptions, Target};

fn main() -> logvor::Result<()> {
    let m = catalog::cube_model_1();
    let u = [0.1, 0.2, 0.3, 0.1, 0.2, 0.1];
    let r = mle_full(&m, &u, MleOptions::default())?;
    println!("{}: x_hat = {:?} after {} iterations, residual {:e}", m.name, r.x_hat, r.iterations, r.residual);

    let pm = catalog::partial_example();
    let r = mle_partial(&pm, &[0.7, 0.1, 0.1, 0.1], MleOptions::default())?;
    println!("partial model: p_hat = {:?}, active facets {:?}", r.p_hat, r.active_constraints);

    for target in [Target::Full(&m), Target::Partial(&pm)] {
        let rep = tessellation_check(target, 500, 42, 1e-7)?;
        println!(
            "{}: {}/{} passed, worst residual {:e}, by active facets {:?}",
            rep.model, rep.passed, rep.samples, rep.worst_residual, rep.by_active
        );
    }
    Ok(())
}
