//! Hamiltonians, dissipation channels and master-equation time evolution.

mod collapse;
mod drive;
mod hamiltonian;
mod integrator;
mod lindblad;
mod superop;

pub use collapse::{build_collapse_operators, CollapseOperator, CollapseOptions, SlotLayout};
pub use drive::{duration_for_angle, pulse_angle, rabi_probability_analytic, Envelope};
pub use hamiltonian::{build_hamiltonian, Coefficient, DriveTerm, Frame, Hamiltonian, HamiltonianSpec};
pub use integrator::IntegratorStats;
pub use lindblad::{lindblad_evolve, EvolutionResult, EvolveOptions, Observable};
