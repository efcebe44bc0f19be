//! The named experiments. Each one owns a parameter schema and a run function
//! that fills a [`Recorder`] with tables and checks.

use kickosc_core::Result;

use crate::config::{ParamSpec, Params};
use crate::runner::Recorder;

pub mod diffusion;
pub mod echo;
pub mod fig1;
pub mod fig2;
pub mod fig3;
pub mod fig4;
pub mod fig5;
pub mod fig6;
pub mod reversal;
pub mod transport;

mod util;

/// Experiment selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    /// Classical, quantum and smoothed position densities of a harmonic well.
    Fig1Well,
    /// θ-harmonic spectra with and without initial spread.
    Fig2Harmonics,
    /// Classical versus quantum growth of `⟨m²⟩`.
    Fig3M2Growth,
    /// Excitation distributions with and without noise.
    Fig4Distributions,
    /// Von Neumann and Shannon entropies under dephasing noise.
    Fig5Entropies,
    /// Weak-localization correction versus absorption.
    Fig6Weakloc,
    /// Chaotic diffusion of the classical action.
    ClassicalDiffusion,
    /// Classical probe-and-reverse fidelity.
    Reversal,
    /// Quantum echo decay in the perturbative and saturated regimes.
    EchoRegimes,
    /// Doorway cross sections, delays and conductance over energy.
    TransportSweep,
}

impl Experiment {
    /// Every experiment, in listing order.
    pub const ALL: [Experiment; 10] = [
        Experiment::Fig1Well,
        Experiment::Fig2Harmonics,
        Experiment::Fig3M2Growth,
        Experiment::Fig4Distributions,
        Experiment::Fig5Entropies,
        Experiment::Fig6Weakloc,
        Experiment::ClassicalDiffusion,
        Experiment::Reversal,
        Experiment::EchoRegimes,
        Experiment::TransportSweep,
    ];

    /// Config name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1Well => "fig1_well",
            Experiment::Fig2Harmonics => "fig2_harmonics",
            Experiment::Fig3M2Growth => "fig3_m2_growth",
            Experiment::Fig4Distributions => "fig4_distributions",
            Experiment::Fig5Entropies => "fig5_entropies",
            Experiment::Fig6Weakloc => "fig6_weakloc",
            Experiment::ClassicalDiffusion => "classical_diffusion",
            Experiment::Reversal => "reversal",
            Experiment::EchoRegimes => "echo_regimes",
            Experiment::TransportSweep => "transport_sweep",
        }
    }

    /// Inverse of [`Experiment::name`].
    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == name)
    }

    /// One-line description.
    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Fig1Well => fig1::SUMMARY,
            Experiment::Fig2Harmonics => fig2::SUMMARY,
            Experiment::Fig3M2Growth => fig3::SUMMARY,
            Experiment::Fig4Distributions => fig4::SUMMARY,
            Experiment::Fig5Entropies => fig5::SUMMARY,
            Experiment::Fig6Weakloc => fig6::SUMMARY,
            Experiment::ClassicalDiffusion => diffusion::SUMMARY,
            Experiment::Reversal => reversal::SUMMARY,
            Experiment::EchoRegimes => echo::SUMMARY,
            Experiment::TransportSweep => transport::SUMMARY,
        }
    }

    /// Parameter schema.
    pub fn schema(self) -> &'static [ParamSpec] {
        match self {
            Experiment::Fig1Well => fig1::SCHEMA,
            Experiment::Fig2Harmonics => fig2::SCHEMA,
            Experiment::Fig3M2Growth => fig3::SCHEMA,
            Experiment::Fig4Distributions => fig4::SCHEMA,
            Experiment::Fig5Entropies => fig5::SCHEMA,
            Experiment::Fig6Weakloc => fig6::SCHEMA,
            Experiment::ClassicalDiffusion => diffusion::SCHEMA,
            Experiment::Reversal => reversal::SCHEMA,
            Experiment::EchoRegimes => echo::SCHEMA,
            Experiment::TransportSweep => transport::SCHEMA,
        }
    }

    /// Checks that involve several parameters at once.
    pub fn cross_check(self, p: &Params) -> Vec<String> {
        match self {
            Experiment::Fig1Well => fig1::cross_check(p),
            Experiment::Fig2Harmonics => fig2::cross_check(p),
            Experiment::Fig3M2Growth => fig3::cross_check(p),
            Experiment::Fig4Distributions => fig4::cross_check(p),
            Experiment::Fig5Entropies => fig5::cross_check(p),
            Experiment::Fig6Weakloc => fig6::cross_check(p),
            Experiment::ClassicalDiffusion => diffusion::cross_check(p),
            Experiment::Reversal => reversal::cross_check(p),
            Experiment::EchoRegimes => echo::cross_check(p),
            Experiment::TransportSweep => transport::cross_check(p),
        }
    }

    /// Runs the experiment.
    pub fn run(self, p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
        match self {
            Experiment::Fig1Well => fig1::run(p, seed, rec),
            Experiment::Fig2Harmonics => fig2::run(p, seed, rec),
            Experiment::Fig3M2Growth => fig3::run(p, seed, rec),
            Experiment::Fig4Distributions => fig4::run(p, seed, rec),
            Experiment::Fig5Entropies => fig5::run(p, seed, rec),
            Experiment::Fig6Weakloc => fig6::run(p, seed, rec),
            Experiment::ClassicalDiffusion => diffusion::run(p, seed, rec),
            Experiment::Reversal => reversal::run(p, seed, rec),
            Experiment::EchoRegimes => echo::run(p, seed, rec),
            Experiment::TransportSweep => transport::run(p, seed, rec),
        }
    }
}
