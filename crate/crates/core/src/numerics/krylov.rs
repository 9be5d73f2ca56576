//! Restarted GMRES for matrix-free linear operators.

#[derive(Clone, Copy, Debug)]
pub struct GmresOptions {
    pub restart: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self { restart: 40, max_iter: 600, rel_tol: 1e-13 }
    }
}

#[derive(Clone, Debug)]
pub struct GmresOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub rel_residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve `A x = b` where `apply(v, out)` writes `A v` into `out`.
pub fn gmres(apply: impl Fn(&[f64], &mut [f64]), b: &[f64], x0: Option<&[f64]>, opts: GmresOptions) -> GmresOutcome {
    let n = b.len();
    let m = opts.restart.max(1);
    let mut x = x0.map(|v| v.to_vec()).unwrap_or_else(|| vec![0.0; n]);
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    let mut work = vec![0.0; n];
    let mut total = 0;
    let mut rel = f64::INFINITY;

    while total < opts.max_iter {
        apply(&x, &mut work);
        let r: Vec<f64> = b.iter().zip(&work).map(|(bi, ai)| bi - ai).collect();
        let beta = norm(&r);
        rel = beta / bnorm;
        if rel <= opts.rel_tol {
            return GmresOutcome { x, iterations: total, rel_residual: rel, converged: true };
        }
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut hess = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut k_used = 0;
        for k in 0..m {
            apply(&basis[k], &mut work);
            let mut v = work.clone();
            for (j, q) in basis.iter().enumerate() {
                let hjk = dot(&v, q);
                hess[j][k] = hjk;
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= hjk * qi);
            }
            // one reorthogonalization pass
            for (j, q) in basis.iter().enumerate() {
                let c = dot(&v, q);
                hess[j][k] += c;
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
            let hnext = norm(&v);
            hess[k + 1][k] = hnext;
            for j in 0..k {
                let t = cs[j] * hess[j][k] + sn[j] * hess[j + 1][k];
                hess[j + 1][k] = -sn[j] * hess[j][k] + cs[j] * hess[j + 1][k];
                hess[j][k] = t;
            }
            let denom = hess[k][k].hypot(hess[k + 1][k]);
            cs[k] = hess[k][k] / denom;
            sn[k] = hess[k + 1][k] / denom;
            hess[k][k] = denom;
            hess[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            total += 1;
            k_used = k + 1;
            rel = g[k + 1].abs() / bnorm;
            if rel <= opts.rel_tol || hnext == 0.0 || total >= opts.max_iter {
                break;
            }
            basis.push(v.iter().map(|vi| vi / hnext).collect());
        }
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= hess[i][j] * y[j];
            }
            y[i] = s / hess[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            x.iter_mut().zip(&basis[j]).for_each(|(xi, qi)| *xi += yj * qi);
        }
    }
    apply(&x, &mut work);
    let r: f64 = b.iter().zip(&work).map(|(bi, ai)| (bi - ai).powi(2)).sum::<f64>().sqrt();
    rel = rel.min(r / bnorm);
    GmresOutcome { x, iterations: total, rel_residual: rel, converged: rel <= opts.rel_tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_nonsymmetric_tridiagonal() {
        let n = 200;
        let apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                let mut s = 4.0 * v[i];
                if i > 0 {
                    s -= 1.5 * v[i - 1];
                }
                if i + 1 < n {
                    s -= 0.5 * v[i + 1];
                }
                out[i] = s;
            }
        };
        let exact: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut b = vec![0.0; n];
        apply(&exact, &mut b);
        let out = gmres(apply, &b, None, GmresOptions { restart: 10, ..Default::default() });
        assert!(out.converged);
        let e = out.x.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(e < 1e-11);
    }
}
