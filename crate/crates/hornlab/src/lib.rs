//! Exact-arithmetic tools for the four equivalent realizability problems tied
//! together by Littlewood-Richardson coefficients and Horn's inequality sets:
//! eigenvalues of sums of Hermitian matrices, invariant factors of matrix
//! products, tensor-product occurrence for `GL_n` representations, and
//! Schubert-class occurrence in Grassmannian cohomology.  A floating-point
//! matrix lab samples random instances and checks the inequalities
//! numerically.

pub mod error;
pub mod horn;
pub mod lr;
pub mod matrix;
pub mod par;
pub mod partition;
pub mod smith;
pub mod spectra;

pub use error::Error;
pub use par::ExecMode;
pub use partition::{IndexSet, Partition};

/// Configures the global worker pool.  `cap` limits the number of threads;
/// `None` leaves the default.  Without the `parallel` feature this is a no-op.
pub fn init_threads(cap: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(n) = cap {
        // Ignore the error if a pool was already built.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cap;
}
