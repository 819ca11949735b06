//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it, or with [`Parallelism::Sequential`], they are plain loops.
//! Both paths return identical results in identical order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// `Parallel` only when the crate was built with rayon.
    pub fn effective(self) -> Parallelism {
        if cfg!(feature = "parallel") {
            self
        } else {
            Parallelism::Sequential
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], par: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = par;
    items.iter().map(f).collect()
}

/// The first `Some` in item order, as a sequential scan would return it.
pub fn find_map_first<T, R, F>(items: &[T], par: Parallelism, f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if par == Parallelism::Parallel {
        use rayon::prelude::*;
        return items.par_iter().enumerate().find_map_first(|(i, t)| f(i, t));
    }
    let _ = par;
    items.iter().enumerate().find_map(|(i, t)| f(i, t))
}
