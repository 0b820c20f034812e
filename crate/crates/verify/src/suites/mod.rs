//! The property catalogue, one module per suite.

mod bands;
mod bc;
mod cone;
mod conv;
mod expect;
mod mart;
mod mult;

use supcone::{Ext, ExtVec, Scalar};

use crate::suite::{Ctx, Needs, Property, Step, Suite};

pub use conv::BRUTE_TERMS;

pub(crate) fn prop<S>(suite: Suite, name: &'static str, needs: Needs, check: fn(&mut Ctx<S>) -> Step) -> Property<S> {
    Property {
        suite,
        name,
        needs,
        check,
    }
}

/// A sampling start above every finite coordinate, past which truncation
/// at `k` changes only infinite coordinates.
pub(crate) fn start_above<S: Scalar>(xs: &[&ExtVec<S>]) -> u64 {
    xs.iter()
        .flat_map(|x| x.coords().iter())
        .filter_map(Ext::finite)
        .map(|v| v.abs().ceil_u64())
        .max()
        .unwrap_or(0)
        + 1
}

/// Every property of every suite, in report order.
pub fn properties<S: Scalar>() -> Vec<Property<S>> {
    let mut all = cone::properties();
    all.extend(bands::properties());
    all.extend(mult::properties());
    all.extend(conv::properties());
    all.extend(expect::properties());
    all.extend(bc::properties());
    all.extend(mart::properties());
    all
}
