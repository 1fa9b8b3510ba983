//! Exterior algebra on coordinate charts.
//!
//! Constant-coefficient alternating forms are stored over strictly
//! increasing multi-indices in lexicographic order; smooth fields wrap
//! evaluation closures together with a distance function to the excluded
//! singular set, and the exterior derivative is taken by central finite
//! differences.

mod field;
mod form;

pub use field::{FormField, MetricField, Plane, ScalarField, SingularSet};
pub use form::{kaehler_form, AltForm};

pub(crate) use form::{merge_sign, rank, sort_with_sign, subsets};
