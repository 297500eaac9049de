//! DG field storage: per-cell Legendre coefficients in 1D and 2D.

use crate::basis::{basis_1d, basis_2d, num_coeffs_2d, transpose_index};
use crate::error::{Error, Result};
use crate::gauss::gauss_legendre;
use crate::mesh::{Mesh1D, Mesh2D};

/// Piecewise-polynomial field on a 2D phase-space mesh.
///
/// Coefficients are stored cell-major with the basis index innermost and
/// cells ordered so that a fixed-j row is contiguous in i.
#[derive(Debug, Clone, PartialEq)]
pub struct DGField2D {
    pub mesh: Mesh2D,
    pub order: usize,
    pub ncoef: usize,
    pub data: Vec<f64>,
}

impl DGField2D {
    pub fn zeros(mesh: Mesh2D, order: usize) -> Self {
        let ncoef = num_coeffs_2d(order);
        let data = vec![0.0; mesh.mx * mesh.mv * ncoef];
        Self { mesh, order, ncoef, data }
    }

    #[inline]
    pub fn cell_offset(&self, i: usize, j: usize) -> usize {
        (j * self.mesh.mx + i) * self.ncoef
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> &[f64] {
        let o = self.cell_offset(i, j);
        &self.data[o..o + self.ncoef]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut [f64] {
        let o = self.cell_offset(i, j);
        &mut self.data[o..o + self.ncoef]
    }

    /// L2-project `f(x, v)` onto the mesh using an `nquad`^2 tensor
    /// Gauss rule per cell.
    pub fn project_with(
        mesh: Mesh2D,
        order: usize,
        nquad: usize,
        f: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self> {
        let rule = gauss_legendre(nquad)?;
        let mut out = Self::zeros(mesh, order);
        let ncoef = out.ncoef;
        // basis values at the tensor quadrature points
        let nq = rule.len();
        let mut phi = vec![0.0; nq * nq * ncoef];
        for a in 0..nq {
            for b in 0..nq {
                for l in 0..ncoef {
                    phi[(a * nq + b) * ncoef + l] =
                        basis_2d(l + 1, rule.points[a], rule.points[b]);
                }
            }
        }
        for j in 0..mesh.mv {
            for i in 0..mesh.mx {
                let xc = mesh.x_center(i);
                let vc = mesh.v_center(j);
                let cell = out.cell_mut(i, j);
                for a in 0..nq {
                    let x = xc + 0.5 * mesh.dx * rule.points[a];
                    for b in 0..nq {
                        let v = vc + 0.5 * mesh.dv * rule.points[b];
                        let g = 0.25 * rule.weights[a] * rule.weights[b] * f(x, v);
                        let p = &phi[(a * nq + b) * ncoef..(a * nq + b + 1) * ncoef];
                        for l in 0..ncoef {
                            cell[l] += g * p[l];
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Projection with the paper's M^2-point rule.
    pub fn project(
        mesh: Mesh2D,
        order: usize,
        f: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self> {
        Self::project_with(mesh, order, order, f)
    }

    /// Evaluate the field at a physical point.
    pub fn eval(&self, x: f64, v: f64) -> Result<f64> {
        let (i, xi) = self.mesh.x_axis().locate(x).ok_or(Error::OutOfDomain(x, v))?;
        let (j, eta) = self.mesh.v_axis().locate(v).ok_or(Error::OutOfDomain(x, v))?;
        Ok(self.eval_cell(i, j, xi, eta))
    }

    /// Evaluate on the canonical element of cell (i, j).
    #[inline]
    pub fn eval_cell(&self, i: usize, j: usize, xi: f64, eta: f64) -> f64 {
        let cell = self.cell(i, j);
        let mut acc = 0.0;
        for (l, &c) in cell.iter().enumerate() {
            acc += c * basis_2d(l + 1, xi, eta);
        }
        acc
    }

    /// Sum of cell means; mass is this times dx * dv.
    pub fn mean_sum(&self) -> f64 {
        (0..self.mesh.mv)
            .map(|j| (0..self.mesh.mx).map(|i| self.cell(i, j)[0]).sum::<f64>())
            .sum()
    }

    /// Field with the roles of x and v exchanged. The coefficient
    /// permutation mirrors the basis swap (xi, eta) -> (eta, xi).
    pub fn transposed(&self) -> DGField2D {
        let mut out = DGField2D::zeros(self.mesh.transposed(), self.order);
        for j in 0..self.mesh.mv {
            for i in 0..self.mesh.mx {
                let src = self.cell(i, j);
                let dst = out.cell_mut(j, i);
                for l in 0..self.ncoef {
                    dst[transpose_index(l + 1) - 1] = src[l];
                }
            }
        }
        out
    }

    /// Relative L2 error against a reference function, with the norms
    /// evaluated by tensor Gauss quadrature on each cell. Unlike
    /// [`relative_l2_error`](Self::relative_l2_error) this charges the
    /// field for its projection error too.
    pub fn relative_l2_error_fn(&self, exact: impl Fn(f64, f64) -> f64) -> Result<f64> {
        let rule = crate::gauss::gauss_legendre(self.order)?;
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..self.mesh.mv {
            let vc = self.mesh.v_center(j);
            for i in 0..self.mesh.mx {
                let xc = self.mesh.x_center(i);
                for (&xi, &wa) in rule.points.iter().zip(&rule.weights) {
                    let x = xc + 0.5 * self.mesh.dx * xi;
                    for (&eta, &wb) in rule.points.iter().zip(&rule.weights) {
                        let v = vc + 0.5 * self.mesh.dv * eta;
                        let w = wa * wb;
                        let fh = self.eval_cell(i, j, xi, eta);
                        let fx = exact(x, v);
                        num += w * (fh - fx) * (fh - fx);
                        den += w * fx * fx;
                    }
                }
            }
        }
        if den == 0.0 {
            return Err(Error::UndefinedNorm);
        }
        Ok((num / den).sqrt())
    }

    /// Coefficient-space relative L2 error against a reference field.
    pub fn relative_l2_error(&self, exact: &DGField2D) -> Result<f64> {
        if self.mesh != exact.mesh || self.order != exact.order {
            return Err(Error::MeshMismatch("relative_l2_error operands differ".into()));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.data.iter().zip(&exact.data) {
            num += (a - b) * (a - b);
            den += b * b;
        }
        if den == 0.0 {
            return Err(Error::UndefinedNorm);
        }
        Ok((num / den).sqrt())
    }
}

/// Piecewise-polynomial field on a 1D mesh (densities, moments, E, phi).
#[derive(Debug, Clone, PartialEq)]
pub struct DGField1D {
    pub mesh: Mesh1D,
    pub order: usize,
    pub data: Vec<f64>,
}

impl DGField1D {
    pub fn zeros(mesh: Mesh1D, order: usize) -> Self {
        Self { mesh, order, data: vec![0.0; mesh.n * order] }
    }

    #[inline]
    pub fn cell(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn project_with(
        mesh: Mesh1D,
        order: usize,
        nquad: usize,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let rule = gauss_legendre(nquad)?;
        let mut out = Self::zeros(mesh, order);
        for i in 0..mesh.n {
            let xc = mesh.center(i);
            let cell = out.cell_mut(i);
            for (&p, &w) in rule.points.iter().zip(&rule.weights) {
                let g = 0.5 * w * f(xc + 0.5 * mesh.dx * p);
                for l in 0..order {
                    cell[l] += g * basis_1d(l + 1, p);
                }
            }
        }
        Ok(out)
    }

    pub fn project(mesh: Mesh1D, order: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::project_with(mesh, order, order, f)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let (i, xi) = self.mesh.locate(x).ok_or(Error::OutOfDomain(x, 0.0))?;
        Ok(self.eval_cell(i, xi))
    }

    #[inline]
    pub fn eval_cell(&self, i: usize, xi: f64) -> f64 {
        let cell = self.cell(i);
        let mut acc = 0.0;
        for (l, &c) in cell.iter().enumerate() {
            acc += c * basis_1d(l + 1, xi);
        }
        acc
    }

    /// Domain average of the field (first coefficients are cell means).
    pub fn domain_mean(&self) -> f64 {
        (0..self.mesh.n).map(|i| self.cell(i)[0]).sum::<f64>() / self.mesh.n as f64
    }

    /// L2 norm: sqrt(int f^2 dx) in coefficient space.
    pub fn l2_norm(&self) -> f64 {
        (self.mesh.dx * self.data.iter().map(|c| c * c).sum::<f64>()).sqrt()
    }

    /// Maximum absolute value over the per-cell Gauss points.
    pub fn max_abs(&self) -> f64 {
        let rule = gauss_legendre(self.order).expect("order within range");
        let mut m: f64 = 0.0;
        for i in 0..self.mesh.n {
            for &p in &rule.points {
                m = m.max(self.eval_cell(i, p).abs());
            }
        }
        m
    }

    pub fn relative_l2_error(&self, exact: &DGField1D) -> Result<f64> {
        if self.mesh != exact.mesh || self.order != exact.order {
            return Err(Error::MeshMismatch("relative_l2_error operands differ".into()));
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in self.data.iter().zip(&exact.data) {
            num += (a - b) * (a - b);
            den += b * b;
        }
        if den == 0.0 {
            return Err(Error::UndefinedNorm);
        }
        Ok((num / den).sqrt())
    }

    /// Cell-wise product of two fields evaluated at the order-M Gauss
    /// points and re-projected.
    pub fn pointwise_product(&self, other: &DGField1D) -> Result<DGField1D> {
        if self.mesh != other.mesh || self.order != other.order {
            return Err(Error::MeshMismatch("pointwise_product operands differ".into()));
        }
        let rule = gauss_legendre(self.order)?;
        let mut out = DGField1D::zeros(self.mesh, self.order);
        for i in 0..self.mesh.n {
            let cell = out.cell_mut(i);
            for (&p, &w) in rule.points.iter().zip(&rule.weights) {
                let g = 0.5 * w * self.eval_cell(i, p) * other.eval_cell(i, p);
                for l in 0..self.order {
                    cell[l] += g * basis_1d(l + 1, p);
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> DGField1D {
        DGField1D {
            mesh: self.mesh,
            order: self.order,
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &DGField1D) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &DGField1D) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
    }
}

/// L2 projection of `g(xi, eta)` on the canonical element with the
/// order-M tensor Gauss rule; returns the m(m+1)/2 coefficients.
pub fn project_cell(g: impl Fn(f64, f64) -> f64, order: usize) -> Result<Vec<f64>> {
    let rule = gauss_legendre(order)?;
    let ncoef = num_coeffs_2d(order);
    let mut coeffs = vec![0.0; ncoef];
    for (&xa, &wa) in rule.points.iter().zip(&rule.weights) {
        for (&xb, &wb) in rule.points.iter().zip(&rule.weights) {
            let gv = 0.25 * wa * wb * g(xa, xb);
            for l in 0..ncoef {
                coeffs[l] += gv * basis_2d(l + 1, xa, xb);
            }
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh() -> Mesh2D {
        Mesh2D::new(6, 4, -1.0, 1.0, -2.0, 2.0).unwrap()
    }

    #[test]
    fn constant_projects_to_mean() {
        let coeffs = project_cell(|_, _| 3.5, 5).unwrap();
        assert!((coeffs[0] - 3.5).abs() < 1e-14);
        for c in &coeffs[1..] {
            assert!(c.abs() < 1e-14);
        }
    }

    #[test]
    fn linear_projects_to_second_mode() {
        // <xi, sqrt(3) xi> = sqrt(3)/2 * int xi^2 = 1/sqrt(3)
        let coeffs = project_cell(|xi, _| xi, 5).unwrap();
        assert!((coeffs[1] - 1.0 / 3.0_f64.sqrt()).abs() < 1e-14);
        for (l, c) in coeffs.iter().enumerate() {
            if l != 1 {
                assert!(c.abs() < 1e-14, "l={l}");
            }
        }
    }

    #[test]
    fn basis_function_projects_to_unit_coefficient() {
        let coeffs = project_cell(|xi, eta| basis_2d(7, xi, eta), 5).unwrap();
        for (l, c) in coeffs.iter().enumerate() {
            let expect = if l == 6 { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-13, "l={l}");
        }
    }

    #[test]
    fn eval_reproduces_polynomials_exactly() {
        // degree <= M-1 polynomial is reproduced by projection
        let f = |x: f64, v: f64| 1.0 + x * v + 0.25 * x.powi(4) - v.powi(3);
        let field = DGField2D::project(mesh(), 5, f).unwrap();
        for &(x, v) in &[(-0.93, -1.7), (0.0, 0.0), (0.41, 1.99), (0.97, -0.03)] {
            assert!((field.eval(x, v).unwrap() - f(x, v)).abs() < 1e-12);
        }
    }

    #[test]
    fn eval_constant_everywhere() {
        let field = DGField2D::project(mesh(), 5, |_, _| 2.25).unwrap();
        assert!((field.eval(0.123, 0.456).unwrap() - 2.25).abs() < 1e-13);
        assert!(field.eval(5.0, 0.0).is_err());
    }

    #[test]
    fn projection_idempotent() {
        let f = |x: f64, v: f64| (x * 2.0).sin() * (-v * v).exp();
        let field = DGField2D::project(mesh(), 5, f).unwrap();
        let again = DGField2D::project(mesh(), 5, |x, v| field.eval(x, v).unwrap()).unwrap();
        for (a, b) in field.data.iter().zip(&again.data) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn relative_error_basics() {
        let f = |x: f64, v: f64| 1.0 + x + v;
        let a = DGField2D::project(mesh(), 3, f).unwrap();
        assert!(a.relative_l2_error(&a).unwrap() < 1e-15);
        let mut b = a.clone();
        for c in b.data.iter_mut() {
            *c *= 2.0;
        }
        assert!((b.relative_l2_error(&a).unwrap() - 1.0).abs() < 1e-13);
        let zero = DGField2D::zeros(mesh(), 3);
        assert!(matches!(a.relative_l2_error(&zero), Err(Error::UndefinedNorm)));
    }

    #[test]
    fn transpose_roundtrip_and_eval() {
        let f = |x: f64, v: f64| (x + 0.3).powi(3) * v - v * v + 0.7;
        let field = DGField2D::project(mesh(), 5, f).unwrap();
        let t = field.transposed();
        assert!((t.eval(-1.3, 0.5).unwrap() - f(0.5, -1.3)).abs() < 1e-12);
        assert_eq!(t.transposed(), field);
    }

    #[test]
    fn pointwise_product_exact_for_low_degree() {
        let ax = Mesh1D::new(8, 0.0, 1.0).unwrap();
        let a = DGField1D::project(ax, 5, |x| 1.0 + x).unwrap();
        let b = DGField1D::project(ax, 5, |x| x * x).unwrap();
        let p = a.pointwise_product(&b).unwrap();
        let exact = DGField1D::project(ax, 5, |x| (1.0 + x) * x * x).unwrap();
        for (u, v) in p.data.iter().zip(&exact.data) {
            assert!((u - v).abs() < 1e-13);
        }
    }
}
