use super::{replaced_levels, InversionOptions, SpectralDataset};
use crate::baseline::{base_regular_capped, BaseSpectrum};
use crate::error::{Error, Result};
use crate::sturm::RadialGrid;
use nalgebra::{DMatrix, DVector};

/// Where a basis function comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisOrigin {
    /// `φ(·, E_j)` on `q0` for the datum with this index.
    Data { index: usize },
    /// Eigenfunction of base level `index`, entering with negative weight.
    Base { index: usize },
}

/// One term `c Ψ(x) Ψ(y)` of the degenerate kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFunction {
    pub origin: BasisOrigin,
    pub energy: f64,
    pub weight: f64,
    /// Samples on the leading nodes of the grid; may be shorter than the grid.
    pub psi: Vec<f64>,
    pub psi_prime: Vec<f64>,
}

/// `L(x,y) = Σ c_i Ψ_i(x) Ψ_i(y)` with cumulative Gram matrices.
#[derive(Debug, Clone)]
pub struct DegenerateKernel {
    grid: RadialGrid,
    basis: Vec<BasisFunction>,
    retained: usize,
    /// Packed upper triangles of `G(x_i)`, one per retained node.
    gram: Vec<f64>,
}

/// Solution of the reduced system at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSolution {
    pub x: f64,
    pub beta: Vec<f64>,
    pub beta_prime: Vec<f64>,
    /// `K(x,x)`.
    pub k_diag: f64,
    /// `d K(x,x) / dx`.
    pub dk_diag: f64,
    pub condition: f64,
    /// `‖(I + CG) β + CΨ‖∞`.
    pub residual: f64,
}

fn packed(m: usize, a: usize, b: usize) -> usize {
    let (i, k) = if a <= b { (a, b) } else { (b, a) };
    i * m - i * (i + 1) / 2 + k
}

/// Assembles basis, weights and Gram matrices.
///
/// Data energies within `coincidence_tol` of a base eigenvalue reuse the
/// sampled eigenfunction so that unchanged levels cancel exactly. The domain
/// ends at the last node where every `|Ψ_i|` is below the magnitude cap.
pub fn build_kernel(
    data: &SpectralDataset,
    base: &BaseSpectrum,
    grid: RadialGrid,
    opts: &InversionOptions,
) -> Result<DegenerateKernel> {
    if base.grid != grid {
        return Err(Error::invalid("base spectrum was sampled on a different grid"));
    }
    let mut basis = Vec::new();
    for d in data.items() {
        let snapped = base
            .levels
            .iter()
            .position(|l| (l.energy - d.energy).abs() <= opts.coincidence_tol);
        let (energy, psi, psi_prime) = match snapped {
            Some(k) => {
                let f = &base.eigenfunctions[k];
                (base.levels[k].energy, f.phi.clone(), f.phi_prime.clone())
            }
            None => {
                let s = base_regular_capped(d.energy, grid, opts.magnitude_cap)?;
                (d.energy, s.phi, s.phi_prime)
            }
        };
        basis.push(BasisFunction {
            origin: BasisOrigin::Data { index: d.index },
            energy,
            weight: d.slope * d.slope,
            psi,
            psi_prime,
        });
    }
    for level in replaced_levels(data, base)? {
        let f = base.eigenfunction(level.index).expect("level exists");
        basis.push(BasisFunction {
            origin: BasisOrigin::Base { index: level.index },
            energy: level.energy,
            weight: -level.slope * level.slope,
            psi: f.phi.clone(),
            psi_prime: f.phi_prime.clone(),
        });
    }

    let retained = basis.iter().map(|b| b.psi.len()).min().unwrap_or(0);
    if retained < 2 {
        return Err(Error::Truncated {
            last_valid: retained.saturating_sub(1),
            r: 0.0,
        });
    }
    for b in &mut basis {
        b.psi.truncate(retained);
        b.psi_prime.truncate(retained);
    }

    let m = basis.len();
    let tri = m * (m + 1) / 2;
    let h = grid.spacing();
    let mut gram = vec![0.0; retained * tri];
    // two-point Hermite rule through f, f', f'' with Ψ'' = (x - E) Ψ
    let local = |i: usize, a: usize, b: usize| {
        let (pa, pb) = (&basis[a], &basis[b]);
        let x = grid.r(i);
        let f = pa.psi[i] * pb.psi[i];
        let df = pa.psi_prime[i] * pb.psi[i] + pa.psi[i] * pb.psi_prime[i];
        let d2f = (2.0 * x - pa.energy - pb.energy) * f + 2.0 * pa.psi_prime[i] * pb.psi_prime[i];
        (f, df, d2f)
    };
    for i in 1..retained {
        for a in 0..m {
            for b in a..m {
                let (f0, d0, s0) = local(i - 1, a, b);
                let (f1, d1, s1) = local(i, a, b);
                let cell = h * 0.5 * (f0 + f1) + h * h / 10.0 * (d0 - d1) + h * h * h / 120.0 * (s0 + s1);
                let k = packed(m, a, b);
                gram[i * tri + k] = gram[(i - 1) * tri + k] + cell;
            }
        }
    }

    Ok(DegenerateKernel {
        grid,
        basis,
        retained,
        gram,
    })
}

impl DegenerateKernel {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn basis(&self) -> &[BasisFunction] {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.basis.iter().map(|b| b.weight).collect()
    }

    /// Number of leading grid nodes where the kernel is available.
    pub fn retained(&self) -> usize {
        self.retained
    }

    pub fn is_truncated(&self) -> bool {
        self.retained < self.grid.len()
    }

    pub fn retained_r_max(&self) -> f64 {
        self.grid.r(self.retained - 1)
    }

    pub fn gram_at(&self, i: usize) -> DMatrix<f64> {
        let m = self.size();
        let tri = m * (m + 1) / 2;
        let g = &self.gram[i * tri..(i + 1) * tri];
        DMatrix::from_fn(m, m, |a, b| g[packed(m, a, b)])
    }

    /// `L(x_i, x_k)`.
    pub fn kernel(&self, i: usize, k: usize) -> f64 {
        self.basis.iter().map(|b| b.weight * b.psi[i] * b.psi[k]).sum()
    }

    /// Solves `(I + C G(x)) β = -C Ψ(x)` at node `i` and differentiates.
    ///
    /// The system is handled in the symmetric form `(C⁻¹ + G) β = -Ψ`,
    /// Jacobi-equilibrated before factoring; the condition estimate is the
    /// 1-norm condition number of the equilibrated matrix.
    pub fn solve_at(&self, i: usize, condition_limit: f64) -> Result<NodeSolution> {
        if i >= self.retained {
            return Err(Error::OutOfRange {
                x: self.grid.r(i),
                min: 0.0,
                max: self.retained_r_max(),
            });
        }
        let x = self.grid.r(i);
        let m = self.size();
        let active: Vec<usize> = (0..m).filter(|&a| self.basis[a].weight != 0.0).collect();
        let mut sol = NodeSolution {
            x,
            beta: vec![0.0; m],
            beta_prime: vec![0.0; m],
            k_diag: 0.0,
            dk_diag: 0.0,
            condition: 1.0,
            residual: 0.0,
        };
        if active.is_empty() {
            return Ok(sol);
        }
        let na = active.len();
        let g = self.gram_at(i);
        let psi = DVector::from_iterator(na, active.iter().map(|&a| self.basis[a].psi[i]));
        let dpsi = DVector::from_iterator(na, active.iter().map(|&a| self.basis[a].psi_prime[i]));
        let mut a_mat = DMatrix::from_fn(na, na, |p, r| g[(active[p], active[r])]);
        for (p, &a) in active.iter().enumerate() {
            a_mat[(p, p)] += self.basis[a].weight.recip();
        }
        let d = DVector::from_iterator(
            na,
            active
                .iter()
                .map(|&a| (self.basis[a].weight.recip().abs() + g[(a, a)].abs()).sqrt()),
        );
        let scaled = DMatrix::from_fn(na, na, |p, r| a_mat[(p, r)] / (d[p] * d[r]));
        let singular = || Error::Singular {
            x,
            condition: f64::INFINITY,
        };
        let inv = scaled.clone().lu().try_inverse().ok_or_else(singular)?;
        let condition = one_norm(&scaled) * one_norm(&inv);
        if !(condition.is_finite() && condition <= condition_limit) {
            return Err(Error::Singular { x, condition });
        }
        let apply = |v: &DVector<f64>| -> DVector<f64> {
            let w = v.component_div(&d);
            (&inv * w).component_div(&d)
        };
        let beta = -apply(&psi);
        let k_diag = psi.dot(&beta);
        let beta_prime = -apply(&(&psi * k_diag + &dpsi));
        let dk_diag = beta_prime.dot(&psi) + beta.dot(&dpsi);

        let r = &a_mat * &beta + &psi;
        let residual = active
            .iter()
            .enumerate()
            .map(|(p, &a)| (self.basis[a].weight * r[p]).abs())
            .fold(0.0, f64::max);

        for (p, &a) in active.iter().enumerate() {
            sol.beta[a] = beta[p];
            sol.beta_prime[a] = beta_prime[p];
        }
        sol.k_diag = k_diag;
        sol.dk_diag = dk_diag;
        sol.condition = condition;
        sol.residual = residual;
        Ok(sol)
    }

    /// `K(x_i, x_k) = Σ β_a(x_i) Ψ_a(x_k)` from a node solution.
    pub fn transformation_kernel(&self, sol: &NodeSolution, k: usize) -> f64 {
        self.basis.iter().zip(&sol.beta).map(|(b, beta)| beta * b.psi[k]).sum()
    }
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
