//! Fifth-order derivative recovery from modal DG coefficients.
//!
//! The electric-field Taylor expansion needs d/dx and d^2/dx^2 of
//! moment fields that live as Legendre coefficients on a periodic
//! mesh. The compact three-cell stencils used for this stay fifth
//! order; this refinement study on f(x) = exp(sin(2*pi*x)) prints the
//! relative L2 errors and observed orders for both derivatives.

use sldg::error::Result;
use sldg::field::DGField1D;
use sldg::mesh::Mesh1D;
use sldg::moments::{legendre_dx, legendre_dxx};
use std::f64::consts::PI;

fn main() -> Result<()> {
    let g = |x: f64| (2.0 * PI * x).sin().exp();
    let g1 = move |x: f64| 2.0 * PI * (2.0 * PI * x).cos() * g(x);
    let g2 = move |x: f64| {
        let (s, c) = (2.0 * PI * x).sin_cos();
        4.0 * PI * PI * (c * c - s) * g(x)
    };

    println!("{:>6} {:>14} {:>7} {:>14} {:>7}", "cells", "err_dx", "order", "err_dxx", "order");
    let mut prev: Option<(f64, f64)> = None;
    for n in [25usize, 50, 100, 200, 400] {
        let mesh = Mesh1D::new(n, 0.0, 1.0)?;
        let f = DGField1D::project(mesh, 5, g)?;
        let e1 = legendre_dx(&f)?.relative_l2_error(&DGField1D::project(mesh, 5, g1)?)?;
        let e2 = legendre_dxx(&f)?.relative_l2_error(&DGField1D::project(mesh, 5, g2)?)?;
        match prev {
            Some((p1, p2)) => println!(
                "{n:>6} {e1:>14.6e} {:>7.2} {e2:>14.6e} {:>7.2}",
                (p1 / e1).log2(),
                (p2 / e2).log2()
            ),
            None => println!("{n:>6} {e1:>14.6e} {:>7} {e2:>14.6e} {:>7}", "-", "-"),
        }
        prev = Some((e1, e2));
    }
    Ok(())
}
