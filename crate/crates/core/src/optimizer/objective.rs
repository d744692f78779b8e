//! The discretized work objective `A_f − μℓ²` and its exact gradient.

use crate::functionals::{heat_one_form_jet, Cycle};
use crate::manifold::{GyratorSurface, SurfaceMetric};

/// Value and gradient (with respect to the embedded points) of the discrete
/// objective, along with its parts.
#[derive(Debug, Clone)]
pub(crate) struct EmbeddedObjective {
    pub value: f64,
    pub length: f64,
    pub grad: Vec<[f64; 2]>,
    pub grad_area: Vec<[f64; 2]>,
}

/// `A = Σ ½(ωᵢ + ωᵢ₊₁)·(wᵢ₊₁ − wᵢ)`, `ℓ = Σ √(Δᵢ' g(mᵢ) Δᵢ)` with `mᵢ` the
/// segment midpoint; objective `A − μℓ²`.
pub(crate) fn embedded_objective(w: &[[f64; 2]], mu: f64) -> EmbeddedObjective {
    let n = w.len();
    let jets: Vec<([f64; 2], [[f64; 2]; 2])> = w.iter().map(|&p| heat_one_form_jet(p)).collect();
    let mut area = 0.0;
    let mut length = 0.0;
    let mut grad_area = vec![[0.0; 2]; n];
    let mut grad_len = vec![[0.0; 2]; n];
    for i in 0..n {
        let j = (i + 1) % n;
        let d = [w[j][0] - w[i][0], w[j][1] - w[i][1]];
        let (oi, ji) = jets[i];
        let (oj, jj) = jets[j];
        area += 0.5 * ((oi[0] + oj[0]) * d[0] + (oi[1] + oj[1]) * d[1]);
        for k in 0..2 {
            // ∂/∂wᵢ and ∂/∂wⱼ of this segment's trapezoid term
            grad_area[i][k] += 0.5 * (ji[0][k] * d[0] + ji[1][k] * d[1]) - 0.5 * (oi[k] + oj[k]);
            grad_area[j][k] += 0.5 * (jj[0][k] * d[0] + jj[1][k] * d[1]) + 0.5 * (oi[k] + oj[k]);
        }

        let m = [0.5 * (w[i][0] + w[j][0]), 0.5 * (w[i][1] + w[j][1])];
        let jet = GyratorSurface.jet(m);
        let s2 = jet.g.quad_form(d);
        if s2 <= 0.0 {
            continue;
        }
        let s = s2.sqrt();
        length += s;
        let gd = jet.g.apply(d);
        let quarter = [0.25 * jet.dg[0].quad_form(d), 0.25 * jet.dg[1].quad_form(d)];
        for k in 0..2 {
            grad_len[j][k] += (gd[k] + quarter[k]) / s;
            grad_len[i][k] += (-gd[k] + quarter[k]) / s;
        }
    }
    let grad = grad_area
        .iter()
        .zip(&grad_len)
        .map(|(a, l)| [a[0] - 2.0 * mu * length * l[0], a[1] - 2.0 * mu * length * l[1]])
        .collect();
    EmbeddedObjective { value: area - mu * length * length, length, grad, grad_area }
}

/// Discrete objective `A_f − μℓ²` and its gradient with respect to each
/// point's `(r, θ)`.
pub fn objective_and_gradient(cycle: &Cycle, mu: f64) -> (f64, Vec<[f64; 2]>) {
    let obj = embedded_objective(&cycle.embedded(), mu);
    let grad = cycle
        .points()
        .iter()
        .zip(&obj.grad)
        .map(|(p, g)| {
            let (s, c) = p.theta.sin_cos();
            [c * g[0] + s * g[1], p.r * (-s * g[0] + c * g[1])]
        })
        .collect();
    (obj.value, grad)
}
