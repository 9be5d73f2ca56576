//! Finite-difference weights (Fornberg) and derivative samples on uniform grids.

/// Weights for the `m`-th derivative at `z` from values at `x`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Derivative of order `m` of uniformly spaced samples using a stencil of
/// `2 * radius + 1` points, shifted inward near the ends.
pub fn derivative(values: &[f64], h: f64, m: usize, radius: usize) -> Vec<f64> {
    let n = values.len();
    let width = (2 * radius + 1).min(n);
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; width];
    let mut out = vec![0.0; n];
    for i in 0..n {
        let start = i.saturating_sub(radius).min(n - width);
        let offset = i - start;
        let w = cache[offset].get_or_insert_with(|| {
            let xs: Vec<f64> = (0..width).map(|k| k as f64).collect();
            fornberg_weights(offset as f64, &xs, m)
        });
        let mut s = 0.0;
        for (k, wk) in w.iter().enumerate() {
            s += wk * values[start + k];
        }
        out[i] = s / h.powi(m as i32);
    }
    out
}
