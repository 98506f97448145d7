//! Node-parallel helpers.
//!
//! With the `parallel` feature these fan out over rayon's global pool;
//! without it they are plain sequential loops. Results are always collected
//! in index order, so output bits never depend on the thread count.

use ndarray::Array2;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Evaluate `f` for every index in `0..n`, preserving order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Build an `n1 × n2` array by evaluating `f(i, j)` at every node.
/// Rows are distributed across workers.
pub fn fill_nodes<F>(n1: usize, n2: usize, f: F) -> Array2<f64>
where
    F: Fn(usize, usize) -> f64 + Sync + Send,
{
    let mut data = vec![0.0; n1 * n2];
    if n2 == 0 {
        return Array2::from_shape_vec((n1, n2), data).expect("shape");
    }
    #[cfg(feature = "parallel")]
    data.par_chunks_mut(n2).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(i, j);
        }
    });
    #[cfg(not(feature = "parallel"))]
    data.chunks_mut(n2).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate() {
            *v = f(i, j);
        }
    });
    Array2::from_shape_vec((n1, n2), data).expect("shape")
}

/// Whether this build fans work out to a thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
