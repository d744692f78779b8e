//! Entropic optimal transport between discretized centred Gaussians.
//!
//! Both measures live on one `m × m` grid; the squared Euclidean cost is
//! separable, so each log-domain Sinkhorn half-step costs `O(m³)`.

use gyrator::SymMat2;

pub struct Grid {
    pub nodes: Vec<f64>,
}

impl Grid {
    pub fn symmetric(m: usize, half_width: f64) -> Self {
        let nodes = (0..m).map(|i| -half_width + 2.0 * half_width * i as f64 / (m - 1) as f64).collect();
        Grid { nodes }
    }

    /// Normalized log-weights of `N(0, sigma)` at the grid nodes.
    pub fn gaussian_log_weights(&self, sigma: SymMat2) -> Vec<f64> {
        let inv = sigma.inverse();
        let m = self.nodes.len();
        let mut lw = Vec::with_capacity(m * m);
        for &x in &self.nodes {
            for &y in &self.nodes {
                lw.push(-0.5 * inv.quad_form([x, y]));
            }
        }
        let z = log_sum_exp(&lw);
        lw.iter_mut().for_each(|v| *v -= z);
        lw
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let mx = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    mx + v.iter().map(|x| (x - mx).exp()).sum::<f64>().ln()
}

/// `out[i] = −ε LSE_j (pot[j] + log_w[j] − c(i, j)) / ε` over the grid,
/// done axis by axis.
fn soft_c_transform(grid: &Grid, pot: &[f64], log_w: &[f64], eps: f64) -> Vec<f64> {
    let m = grid.nodes.len();
    let cost: Vec<f64> = (0..m * m)
        .map(|k| {
            let d = grid.nodes[k / m] - grid.nodes[k % m];
            d * d / eps
        })
        .collect();
    let c = |a: usize, b: usize| cost[a * m + b];
    // stage 1: reduce over the second coordinate
    let mut stage = vec![0.0; m * m];
    let mut buf = vec![0.0; m];
    for j1 in 0..m {
        for i2 in 0..m {
            for j2 in 0..m {
                let j = j1 * m + j2;
                buf[j2] = (pot[j] / eps) + log_w[j] - c(i2, j2);
            }
            stage[j1 * m + i2] = log_sum_exp(&buf);
        }
    }
    let mut out = vec![0.0; m * m];
    for i1 in 0..m {
        for i2 in 0..m {
            for j1 in 0..m {
                buf[j1] = stage[j1 * m + i2] - c(i1, j1);
            }
            out[i1 * m + i2] = -eps * log_sum_exp(&buf);
        }
    }
    out
}

/// Entropic OT value `⟨f, a⟩ + ⟨g, b⟩` with ε-scaling down to `eps`, then
/// iterated until the potentials move by less than `tol`.
fn entropic_ot(grid: &Grid, la: &[f64], lb: &[f64], eps: f64, eps0: f64, tol: f64) -> f64 {
    let n = la.len();
    let (mut f, mut g) = (vec![0.0; n], vec![0.0; n]);
    let mut e = eps0;
    while e > eps {
        for _ in 0..3 {
            f = soft_c_transform(grid, &g, lb, e);
            g = soft_c_transform(grid, &f, la, e);
        }
        e = (e * 0.5).max(eps);
    }
    for _ in 0..500 {
        f = soft_c_transform(grid, &g, lb, e);
        let next = soft_c_transform(grid, &f, la, e);
        let shift = next.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        g = next;
        if shift < tol {
            break;
        }
    }
    let dot = |p: &[f64], lw: &[f64]| p.iter().zip(lw).map(|(p, l)| p * l.exp()).sum::<f64>();
    dot(&f, la) + dot(&g, lb)
}

/// Debiased Sinkhorn divergence, an estimate of `W₂²` between the two
/// discretized Gaussians.
pub fn sinkhorn_w2_squared(s0: SymMat2, s1: SymMat2, m: usize, eps: f64) -> f64 {
    let spread = s0.eigenvalues().0.max(s1.eigenvalues().0).sqrt();
    let grid = Grid::symmetric(m, 5.0 * spread);
    let la = grid.gaussian_log_weights(s0);
    let lb = grid.gaussian_log_weights(s1);
    let eps0 = spread * spread;
    let tol = 1e-4 * eps;
    entropic_ot(&grid, &la, &lb, eps, eps0, tol)
        - 0.5 * entropic_ot(&grid, &la, &la, eps, eps0, tol)
        - 0.5 * entropic_ot(&grid, &lb, &lb, eps, eps0, tol)
}
