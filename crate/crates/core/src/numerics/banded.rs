//! Banded LU factorization with partial pivoting.

/// A square matrix with `lower` sub- and `upper` super-diagonals.
#[derive(Clone, Debug)]
pub struct BandMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    // row-major, each row holds columns i-lower ..= i+upper+lower (room for pivot fill)
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        let width = 2 * lower + upper + 1;
        Self { n, lower, upper, width, data: vec![0.0; n * width] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize + self.lower as isize;
        if off < 0 || off as usize >= self.width {
            None
        } else {
            Some(i * self.width + off as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.lower >= i && j <= i + self.upper,
            "entry ({i},{j}) outside the band"
        );
        let k = self.slot(i, j).expect("inside band");
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.n - 1);
            for j in lo..=hi {
                *yi += self.get(i, j) * x[j];
            }
        }
        y
    }

    /// Product of two banded matrices.
    pub fn mul(&self, other: &BandMatrix) -> BandMatrix {
        let mut out = BandMatrix::zeros(self.n, self.lower + other.lower, self.upper + other.upper);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.n - 1);
            for k in lo..=hi {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let lo2 = k.saturating_sub(other.lower);
                let hi2 = (k + other.upper).min(self.n - 1);
                for j in lo2..=hi2 {
                    out.add(i, j, a * other.get(k, j));
                }
            }
        }
        out
    }

    /// Factor in place; returns `None` on an exactly zero pivot.
    pub fn factor(mut self) -> Option<BandLu> {
        let n = self.n;
        let mut piv = vec![0usize; n];
        let reach = self.upper + self.lower;
        for k in 0..n {
            let last = (k + self.lower).min(n - 1);
            let mut p = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return None;
            }
            piv[k] = p;
            let col_end = (k + reach).min(n - 1);
            if p != k {
                for j in k..=col_end {
                    let a = self.get(k, j);
                    let b = self.get(p, j);
                    self.raw_set(k, j, b);
                    self.raw_set(p, j, a);
                }
            }
            let pivot = self.get(k, k);
            for i in k + 1..=last {
                let l = self.get(i, k) / pivot;
                self.raw_set(i, k, l);
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..=col_end {
                    let v = self.get(i, j) - l * self.get(k, j);
                    self.raw_set(i, j, v);
                }
            }
        }
        Some(BandLu { m: self, piv })
    }

    fn raw_set(&mut self, i: usize, j: usize, v: f64) {
        if let Some(k) = self.slot(i, j) {
            self.data[k] = v;
        } else {
            debug_assert!(v == 0.0, "fill outside storage");
        }
    }
}

#[derive(Clone, Debug)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.m.n;
        let lower = self.m.lower;
        let reach = self.m.upper + self.m.lower;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let last = (k + lower).min(n - 1);
            for i in k + 1..=last {
                x[i] -= self.m.get(i, k) * x[k];
            }
        }
        for k in (0..n).rev() {
            let col_end = (k + reach).min(n - 1);
            let mut s = x[k];
            for j in k + 1..=col_end {
                s -= self.m.get(k, j) * x[j];
            }
            x[k] = s / self.m.get(k, k);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentadiagonal_solve_with_pivoting() {
        let n = 50;
        let mut a = BandMatrix::zeros(n, 2, 2);
        for i in 0..n {
            a.set(i, i, if i % 3 == 0 { 1e-3 } else { 0.5 });
            if i + 1 < n {
                a.set(i, i + 1, 2.0);
                a.set(i + 1, i, -1.0);
            }
            if i + 2 < n {
                a.set(i, i + 2, 0.3);
                a.set(i + 2, i, 1.1);
            }
        }
        let exact: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 0.01).collect();
        let b = a.matvec(&exact);
        let x = a.clone().factor().unwrap().solve(&b);
        let e = x.iter().zip(&exact).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(e < 1e-10, "{e}");
    }
}
