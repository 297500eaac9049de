//! Uniform Cartesian meshes over phase space and over the spatial interval.

use crate::error::{Error, Result};

/// Uniform 1D mesh on [lo, hi] with `n` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub dx: f64,
}

impl Mesh1D {
    pub fn new(n: usize, lo: f64, hi: f64) -> Result<Self> {
        if n == 0 || !(hi > lo) {
            return Err(Error::Config(format!("bad 1D mesh: n={n}, [{lo}, {hi}]")));
        }
        Ok(Self { n, lo, hi, dx: (hi - lo) / n as f64 })
    }

    /// Center of element i (0-based).
    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.dx
    }

    /// Containing element and canonical coordinate for a point in [lo, hi].
    pub fn locate(&self, x: f64) -> Option<(usize, f64)> {
        if x < self.lo || x > self.hi {
            return None;
        }
        let mut i = ((x - self.lo) / self.dx).floor() as usize;
        if i >= self.n {
            i = self.n - 1;
        }
        let xi = 2.0 * (x - self.center(i)) / self.dx;
        Some((i, xi.clamp(-1.0, 1.0)))
    }
}

/// Uniform Cartesian mesh over the (x, v) phase-space rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh2D {
    pub mx: usize,
    pub mv: usize,
    pub xlo: f64,
    pub xhi: f64,
    pub vlo: f64,
    pub vhi: f64,
    pub dx: f64,
    pub dv: f64,
}

impl Mesh2D {
    pub fn new(mx: usize, mv: usize, xlo: f64, xhi: f64, vlo: f64, vhi: f64) -> Result<Self> {
        if mx == 0 || mv == 0 || !(xhi > xlo) || !(vhi > vlo) {
            return Err(Error::Config(format!(
                "bad 2D mesh: {mx}x{mv}, [{xlo}, {xhi}] x [{vlo}, {vhi}]"
            )));
        }
        Ok(Self {
            mx,
            mv,
            xlo,
            xhi,
            vlo,
            vhi,
            dx: (xhi - xlo) / mx as f64,
            dv: (vhi - vlo) / mv as f64,
        })
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.xlo + (i as f64 + 0.5) * self.dx
    }

    pub fn v_center(&self, j: usize) -> f64 {
        self.vlo + (j as f64 + 0.5) * self.dv
    }

    pub fn x_axis(&self) -> Mesh1D {
        Mesh1D { n: self.mx, lo: self.xlo, hi: self.xhi, dx: self.dx }
    }

    pub fn v_axis(&self) -> Mesh1D {
        Mesh1D { n: self.mv, lo: self.vlo, hi: self.vhi, dx: self.dv }
    }

    /// Mesh with the roles of x and v exchanged.
    pub fn transposed(&self) -> Mesh2D {
        Mesh2D {
            mx: self.mv,
            mv: self.mx,
            xlo: self.vlo,
            xhi: self.vhi,
            vlo: self.xlo,
            vhi: self.xhi,
            dx: self.dv,
            dv: self.dx,
        }
    }
}
