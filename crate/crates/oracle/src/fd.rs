//! Finite-difference spectrum of -ψ'' + V(x)ψ = Eψ on the half-line
//! [0, L], with the parity fixed by the condition at the origin and ψ(L) = 0.
//!
//! The grid is x(t) = a·sinh(kt) on uniform t, chosen so that x = δ lands on
//! a node at every refinement; the core is resolved by a fixed number of
//! cells while the far field stays coarse. The operator is the box-integrated
//! (finite-volume) three-point Laplacian with V averaged exactly over each
//! dual cell, giving a symmetric tridiagonal pencil K ψ = E W ψ. Eigenvalues
//! come from Sturm-sequence bisection and eigenvectors from inverse
//! iteration on W^{-1/2} K W^{-1/2}.

use coulomb1d::PotentialParams;

use crate::error::{OracleError, Result};

/// Boundary condition at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityBc {
    /// ψ'(0) = 0.
    EvenAtOrigin,
    /// ψ(0) = 0.
    OddAtOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub box_half_width: f64,
    /// Nodes on [0, L] including both ends; odd.
    pub grid_points: usize,
    pub parity_bc: ParityBc,
    /// Cells inside the core [0, δ] on the base grid.
    pub core_cells: usize,
}

impl FdConfig {
    /// Box of 40·n_max Bohr radii and 20001 nodes.
    pub fn new(n_max: u32, parity_bc: ParityBc) -> Self {
        Self {
            box_half_width: 40.0 * n_max.max(1) as f64,
            grid_points: 20_001,
            parity_bc,
            core_cells: 40,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 5 || self.grid_points % 2 == 0 {
            return Err(OracleError::InvalidConfig(format!(
                "grid_points must be odd and at least 5, got {}",
                self.grid_points
            )));
        }
        if !(self.box_half_width > 0.0 && self.box_half_width.is_finite()) {
            return Err(OracleError::InvalidConfig(format!(
                "box_half_width must be positive, got {}",
                self.box_half_width
            )));
        }
        if self.core_cells < 20 || self.core_cells >= self.grid_points - 1 {
            return Err(OracleError::InvalidConfig(format!(
                "core_cells must be at least 20 and below the cell count, got {}",
                self.core_cells
            )));
        }
        Ok(())
    }

    /// The same configuration with every cell halved.
    pub fn refined(&self) -> Self {
        Self {
            grid_points: 2 * self.grid_points - 1,
            core_cells: 2 * self.core_cells,
            ..*self
        }
    }
}

/// Node positions x_0 = 0 < ... < x_N = L.
#[derive(Debug, Clone, PartialEq)]
pub struct FdGrid {
    pub nodes: Vec<f64>,
}

impl FdGrid {
    pub fn uniform(length: f64, grid_points: usize) -> Self {
        let cells = grid_points - 1;
        Self {
            nodes: (0..=cells).map(|i| length * i as f64 / cells as f64).collect(),
        }
    }

    /// x(t) = a·sinh(kt), t = i/cells, with x(core_cells/cells) = δ and
    /// x(1) = L. Falls back to a uniform grid when δ/L is already at least
    /// the core's share of cells (then δ need not be a node).
    pub fn stretched(length: f64, delta: f64, grid_points: usize, core_cells: usize) -> Self {
        let cells = grid_points - 1;
        let t_core = core_cells as f64 / cells as f64;
        let target = delta / length;
        if target >= t_core {
            return Self::uniform(length, grid_points);
        }
        // sinh(k t)/sinh(k) decreases from t (k → 0) to 0; bisect for target.
        let ratio = |k: f64| (k * t_core).sinh() / k.sinh();
        let (mut lo, mut hi) = (1e-12f64, 1.0f64);
        while ratio(hi) > target {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ratio(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = 0.5 * (lo + hi);
        let a = length / k.sinh();
        let mut nodes: Vec<f64> = (0..=cells).map(|i| a * (k * i as f64 / cells as f64).sinh()).collect();
        nodes[core_cells] = delta;
        nodes[cells] = length;
        Self { nodes }
    }

    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// ∫_a^b V for the cut-off Coulomb potential on x >= 0.
pub fn coulomb_cell_integral(delta: f64) -> impl Fn(f64, f64) -> f64 {
    move |a: f64, b: f64| {
        let core_part = |lo: f64, hi: f64| -2.0 / delta * (hi - lo);
        if b <= delta {
            core_part(a, b)
        } else if a >= delta {
            -2.0 * (b / a).ln()
        } else {
            core_part(a, delta) - 2.0 * (b / delta).ln()
        }
    }
}

/// Symmetric tridiagonal form: diagonal, off-diagonal and the weights
/// that undo the W^{1/2} scaling.
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    weights: Vec<f64>,
    /// Grid index of the first unknown (1 when ψ(0) = 0).
    first: usize,
}

fn assemble<V>(grid: &FdGrid, bc: ParityBc, cell_integral: &V) -> Tridiagonal
where
    V: Fn(f64, f64) -> f64,
{
    let x = &grid.nodes;
    let cells = grid.cells();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let first = match bc {
        ParityBc::EvenAtOrigin => 0,
        ParityBc::OddAtOrigin => 1,
    };
    // unknowns: nodes first..cells-1 (ψ(L) = 0)
    let mut diag = Vec::with_capacity(cells);
    let mut weights = Vec::with_capacity(cells);
    for i in first..cells {
        let left = if i == 0 { 0.0 } else { 0.5 * h[i - 1] };
        let right = 0.5 * h[i];
        let w = left + right;
        let mut k = 1.0 / h[i];
        if i > 0 {
            k += 1.0 / h[i - 1];
        }
        k += cell_integral(x[i] - left, x[i] + right);
        diag.push(k / w);
        weights.push(w);
    }
    let off = (first..cells - 1)
        .enumerate()
        .map(|(j, i)| -1.0 / h[i] / (weights[j] * weights[j + 1]).sqrt())
        .collect();
    Tridiagonal {
        diag,
        off,
        weights,
        first,
    }
}

impl Tridiagonal {
    /// Number of eigenvalues below `lambda`.
    fn sturm_count(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0f64;
        for (i, &d) in self.diag.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = d - lambda - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let radius = |i: usize| {
            let l = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            l + r
        };
        (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            (lo.min(self.diag[i] - radius(i)), hi.max(self.diag[i] + radius(i)))
        })
    }

    /// The k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves (T - shift) v = rhs by Gaussian elimination with partial
    /// pivoting for tridiagonal systems.
    fn shifted_solve(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        // rows kept as (sub, main, sup, sup2) after pivoting
        let mut a: Vec<[f64; 3]> = (0..n)
            .map(|i| {
                [
                    self.diag[i] - shift,
                    if i + 1 < n { self.off[i] } else { 0.0 },
                    0.0,
                ]
            })
            .collect();
        let mut sub: Vec<f64> = (0..n).map(|i| if i > 0 { self.off[i - 1] } else { 0.0 }).collect();
        let mut b = rhs.to_vec();
        let tiny = f64::EPSILON * self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
        for i in 0..n.saturating_sub(1) {
            let below = sub[i + 1];
            if below.abs() > a[i][0].abs() {
                // swap rows i and i+1
                let row_i = a[i];
                a[i] = [below, a[i + 1][0], a[i + 1][1]];
                a[i + 1] = [row_i[1], row_i[2], 0.0];
                sub[i + 1] = row_i[0];
                b.swap(i, i + 1);
            }
            let pivot = if a[i][0] == 0.0 { tiny } else { a[i][0] };
            a[i][0] = pivot;
            let m = sub[i + 1] / pivot;
            a[i + 1][0] -= m * a[i][1];
            a[i + 1][1] -= m * a[i][2];
            b[i + 1] -= m * b[i];
        }
        if a[n - 1][0] == 0.0 {
            a[n - 1][0] = tiny;
        }
        let mut v = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= a[i][1] * v[i + 1];
            }
            if i + 2 < n {
                s -= a[i][2] * v[i + 2];
            }
            v[i] = s / a[i][0];
        }
        v
    }

    fn eigenvector(&self, lambda: f64, index: usize) -> Result<Vec<f64>> {
        let n = self.diag.len();
        let shift = lambda - 1e-10 * lambda.abs().max(1.0);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i % 7) as f64)).collect();
        for _ in 0..4 {
            let mut next = self.shifted_solve(shift, &v);
            let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(OracleError::EigenIteration { index });
            }
            next.iter_mut().for_each(|x| *x /= norm);
            v = next;
        }
        Ok(v)
    }
}

/// One discrete eigenpair on the half-line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FdEigenpair {
    pub energy: f64,
    /// Nodes x_0..x_N of the grid.
    pub xs: Vec<f64>,
    /// ψ at the nodes, with the boundary values included, normalized so
    /// that the full-line integral of ψ² is one and ψ > 0 next to the origin.
    pub psi: Vec<f64>,
}

/// Lowest `k_states` eigenpairs for an arbitrary potential, given through
/// its exact integral over [a, b].
pub fn fd_eigen_on<V>(grid: &FdGrid, bc: ParityBc, cell_integral: V, k_states: usize) -> Result<Vec<FdEigenpair>>
where
    V: Fn(f64, f64) -> f64,
{
    let t = assemble(grid, bc, &cell_integral);
    if k_states == 0 || k_states > t.diag.len() {
        return Err(OracleError::InvalidConfig(format!(
            "k_states must lie in 1..={}, got {k_states}",
            t.diag.len()
        )));
    }
    (0..k_states)
        .map(|k| {
            let energy = t.eigenvalue(k);
            let v = t.eigenvector(energy, k)?;
            let mut psi = vec![0.0; grid.nodes.len()];
            for (j, (&vj, &w)) in v.iter().zip(&t.weights).enumerate() {
                psi[t.first + j] = vj / w.sqrt();
            }
            // Σ w ψ² = 1 on the half-line; the full line doubles it.
            let half: f64 = v.iter().map(|x| x * x).sum();
            let scale = (2.0 * half).sqrt().recip();
            let lead = psi[t.first.max(1)];
            let sign = if lead < 0.0 { -1.0 } else { 1.0 };
            psi.iter_mut().for_each(|p| *p *= sign * scale);
            Ok(FdEigenpair {
                energy,
                xs: grid.nodes.clone(),
                psi,
            })
        })
        .collect()
}

/// Lowest `k_states` eigenpairs of the cut-off Coulomb problem for one
/// parity.
pub fn fd_eigen(p: &PotentialParams, cfg: &FdConfig, k_states: usize) -> Result<Vec<FdEigenpair>> {
    cfg.validate()?;
    let grid = FdGrid::stretched(cfg.box_half_width, p.delta(), cfg.grid_points, cfg.core_cells);
    fd_eigen_on(&grid, cfg.parity_bc, coulomb_cell_integral(p.delta()), k_states)
}

/// Energies on the configured grid and on the grid with every cell halved,
/// combined as (4 E(h/2) - E(h)) / 3.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub energies: Vec<f64>,
}

pub fn fd_energies_extrapolated(p: &PotentialParams, cfg: &FdConfig, k_states: usize) -> Result<Extrapolated> {
    let coarse: Vec<f64> = fd_eigen(p, cfg, k_states)?.into_iter().map(|e| e.energy).collect();
    let fine: Vec<f64> = fd_eigen(p, &cfg.refined(), k_states)?.into_iter().map(|e| e.energy).collect();
    let energies = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    Ok(Extrapolated { coarse, fine, energies })
}
