//! Transform-method solver for `q_t = (σ²(x) q_x)_x` on `(0, 1)` with
//! homogeneous Dirichlet data.
//!
//! ```
//! use varheat_core::coefficient::DEFAULT_TAU_TOL;
//! use varheat_core::spectrum::find_eigenvalues;
//! use varheat_core::transform::solve;
//! use varheat_core::{Conductivity, Contour, SeriesSpec, TravelTimeMap};
//!
//! let c = Conductivity::parabolic24();
//! let tt = TravelTimeMap::build(&c, DEFAULT_TAU_TOL)?;
//! let spec = SeriesSpec::new(2)?;
//! let q = solve(&c, &tt, |x| x * (1.0 - x), 0.5, 1.0, &spec, &Contour::default())?;
//! assert!((q.value - 0.25 * (-1f64).exp()).abs() < 1e-4);
//! let pairs = find_eigenvalues(&c, &tt, &spec, 4)?;
//! assert!((pairs[0].lambda + 1.000636).abs() < 1e-6);
//! # Ok::<(), varheat_core::Error>(())
//! ```

// `!(x > 0.0)` deliberately rejects NaN; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::too_many_arguments)]

pub mod coefficient;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod profile;
pub mod quadrature;
pub mod simplex;
pub mod spectrum;
pub mod transform;
pub mod verify;

pub use coefficient::{Conductivity, ConductivityKind, TravelTimeMap};
pub use error::{Error, Result};
pub use simplex::SeriesSpec;
pub use transform::{Contour, ContourShape, SolutionSample};
