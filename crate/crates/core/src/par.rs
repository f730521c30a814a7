//! Population-wide evaluation, data-parallel when the `parallel` feature is
//! enabled and more than one worker is requested.
//!
//! Only fitness evaluation runs here. All random decisions stay in the
//! sequential breeding phase, so results do not depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub struct Evaluator {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Evaluator {
    /// `workers <= 1` evaluates on the calling thread.
    pub fn new(workers: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            let pool = (workers > 1).then(|| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("thread pool")
            });
            Evaluator { pool }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = workers;
            Evaluator {}
        }
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    pub fn run<T, F>(&self, items: &mut [T], f: F)
    where
        T: Send,
        F: Fn(&mut T) + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            pool.install(|| items.par_iter_mut().for_each(&f));
            return;
        }
        items.iter_mut().for_each(f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_result_either_way() {
        let mut a: Vec<u64> = (0..1000).collect();
        let mut b = a.clone();
        Evaluator::new(1).run(&mut a, |x| *x = *x * *x + 1);
        Evaluator::new(4).run(&mut b, |x| *x = *x * *x + 1);
        assert_eq!(a, b);
        assert!(!Evaluator::new(1).is_parallel());
    }
}
