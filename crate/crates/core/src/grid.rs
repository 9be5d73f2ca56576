//! Symmetric uniform grid `y_j = j h`, `j = -n..=n`.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub half_length: f64,
    pub n: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { half_length: 40.0, n: 4096 }
    }
}

impl Grid {
    pub fn new(half_length: f64, n: usize) -> Self {
        assert!(half_length > 0.0 && n > 0, "grid needs L > 0 and n > 0");
        Self { half_length, n }
    }

    pub fn h(&self) -> f64 {
        self.half_length / self.n as f64
    }

    /// Total number of nodes, `2n + 1`.
    pub fn len(&self) -> usize {
        2 * self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Storage index of `y = 0`.
    pub fn center(&self) -> usize {
        self.n
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 - self.n as f64) * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Index of the node mirrored through the origin.
    pub fn mirror(&self, i: usize) -> usize {
        2 * self.n - i
    }

    /// Same half-length with half the spacing.
    pub fn refined(&self) -> Self {
        Self::new(self.half_length, 2 * self.n)
    }
}
