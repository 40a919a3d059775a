//! Exact integer linear algebra: Smith normal form, subgroup lattices of
//! free modules, and subquotient presentations.

mod group;
mod matrix;
pub(crate) mod presentation;
mod snf;
mod subgroup;

pub use group::AbelianGroup;
pub use matrix::{determinant, IntMatrix};
pub use presentation::{cokernel, homology_of_maps, is_zero_map, subquotient, Subquotient};
pub use snf::{smith, smith_normal_form, Smith};
pub use subgroup::{kernel_basis, Subgroup};

use serde::{Deserialize, Serialize};

/// Coefficient ring for reported groups and subgroup comparisons.
///
/// Rational mode computes over the integers and tensors with `Q` at the
/// end: groups keep their free rank, subgroups are compared through their
/// saturations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[default]
    Int,
    Rat,
}

impl Coefficients {
    pub fn group(self, g: AbelianGroup) -> AbelianGroup {
        match self {
            Coefficients::Int => g,
            Coefficients::Rat => g.tensor_rationals(),
        }
    }

    /// `Z^2 + Z/2` over the integers, `Q^2` over the rationals.
    pub fn describe(self, g: AbelianGroup) -> String {
        match self {
            Coefficients::Int => g.to_string(),
            Coefficients::Rat => match g.free_rank {
                0 => "0".into(),
                1 => "Q".into(),
                n => format!("Q^{n}"),
            },
        }
    }

    pub fn subgroup(self, s: &Subgroup) -> Subgroup {
        match self {
            Coefficients::Int => s.clone(),
            Coefficients::Rat => s.saturation(),
        }
    }
}

impl std::str::FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "int" => Ok(Coefficients::Int),
            "rat" => Ok(Coefficients::Rat),
            other => Err(format!("unknown coefficient ring '{other}' (expected int or rat)")),
        }
    }
}
