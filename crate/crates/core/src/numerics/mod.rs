//! Shared numerical building blocks.

pub mod banded;
pub mod fd;
pub mod jet;
pub mod krylov;
pub mod quad;

use roots::{find_root_brent, SimpleConvergency};

/// Brent root of `f` on `[a, b]`; the tolerance is absolute in both x and y.
pub fn brent(a: f64, b: f64, tol: f64, f: impl FnMut(f64) -> f64) -> Option<f64> {
    let mut conv = SimpleConvergency { eps: tol, max_iter: 200 };
    find_root_brent(a, b, f, &mut conv).ok()
}
