//! Closed forms and numerical oracles for analog quantum search with a
//! tunable driving term.
//!
//! The search Hamiltonian is H = E|w⟩⟨w| + γE|s⟩⟨s| with overlap x = ⟨s|w⟩
//! and γ ≥ 1; γ = 1 is the Farhi–Gutmann case. The crate covers the
//! transition probability and its timing, brute-force propagators that
//! check it, discrimination limits on the acceptable imperfection angle,
//! the distance inequalities behind the lower bound on search time, the
//! (x, γ) regions where γ > 1 pays off, and overlap priors on the sphere.

pub mod bounds;
pub mod config;
pub mod discrimination;
pub mod error;
pub mod kinematics;
pub mod output;
pub mod prior;
pub mod propagator;
pub mod regions;

pub use config::{ProbabilityValue, SearchConfig};
pub use discrimination::{DiscriminationSetup, FidelityBudget};
pub use error::{Error, Result};
pub use kinematics::{Crossing, Curve};
pub use output::{Destination, Format, ResultDocument};
pub use prior::{PriorKind, PriorSpec, QuadratureResult};
pub use propagator::{HamiltonianSpec, StateVector};
pub use regions::{RegionGrid, TableRow};
pub use bounds::BoundReport;
