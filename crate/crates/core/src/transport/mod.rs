//! Doorway transport through a ballistic dot coupled to a disordered
//! background: loop functions, fine structure, averaged cross sections and
//! delays, conductance with absorption and weak localization.

mod absorption;
mod doorway;
mod loops;
mod weakloc;

pub use absorption::{kappa_of, AbsorptionParams};
pub use doorway::{
    averaged_cross_section, averaged_delay, conductance, cross_section_fine, fine_structure_roots,
    resonant_denominator, wigner_delay_fine, AveragedCrossSection, Conductance, DoorwayParams,
};
pub use loops::{loop_g, loop_l, period_average, POLE_GUARD};
pub use weakloc::{
    bracket_derivatives, delta_sigma, heisenberg_time, weak_localization, weisskopf_width,
    DeltaSigma, SymmetryClass, WeakLocParams,
};
