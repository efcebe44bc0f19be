//! θ-harmonic weight distributions `W_m(t)` of the quantum state for a
//! narrow (`Δ = 0`) and a wide (`Δ > 0`) initial mixture.

use kickosc_core::metrics::{mean_abs_m, HarmonicSpectrum};
use kickosc_core::quantum::FloquetSpec;
use kickosc_core::Result;

use super::util::{growth_fit, tag, GrowingMixture};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "harmonic weight spectra of narrow and wide initial states";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("hbar", 1.0, Rule::Positive, "Planck constant"),
    ParamSpec::list(
        "deltas",
        &[0.0, 25.0],
        Rule::NonNegative,
        "initial spreads Δ",
    ),
    ParamSpec::list(
        "times",
        &[10.0, 30.0, 50.0],
        Rule::Count(1),
        "snapshot kicks",
    ),
    ParamSpec::number("n_max", 8192.0, Rule::Levels, "largest truncation"),
    ParamSpec::number(
        "discard",
        1e-4,
        Rule::OpenUnit,
        "initial weight dropped from the Fock mixture",
    ),
    ParamSpec::number("m_max", 4096.0, Rule::Count(1), "largest harmonic written"),
    ParamSpec::number(
        "decay_floor",
        1e-6,
        Rule::OpenUnit,
        "W_m/W_1 below which the decay fit stops",
    ),
    ParamSpec::number(
        "decay_r2",
        0.9,
        Rule::OpenUnit,
        "minimum R^2 of the log-linear decay fit",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    let t = p.list("times");
    if t.windows(2).any(|w| w[1] <= w[0]) {
        vec!["times must be increasing".to_string()]
    } else {
        Vec::new()
    }
}

/// Log-linear fit of `W_m` over `1 ≤ m` until `W_m < floor · W_1`.
fn decay_r2(s: &HarmonicSpectrum, floor: f64) -> f64 {
    let w = s.weights();
    let cut = w.get(1).copied().unwrap_or(0.0) * floor;
    let last = w
        .iter()
        .skip(1)
        .position(|&x| x < cut)
        .map_or(w.len() - 1, |i| i);
    let m: Vec<f64> = (0..w.len()).map(|m| m as f64).collect();
    growth_fit(&m, w, 1.0, last as f64).map_or(f64::NAN, |f| f.r_squared)
}

pub(crate) fn run(p: &Params, _seed: u64, rec: &mut Recorder) -> Result<()> {
    let hbar = p.number("hbar");
    let spec = FloquetSpec::new(p.number("omega0"), p.number("g0"), hbar, p.count("n_max"))?;
    let times: Vec<usize> = p.list("times").iter().map(|&t| t as usize).collect();
    let m_max = p.count("m_max");
    let floor = p.number("decay_floor");
    let min_r2 = p.number("decay_r2");
    let last = times.last().copied().unwrap_or(0);

    for &delta in &p.list("deltas") {
        let (mut g, dropped) = GrowingMixture::initial(delta, spec, p.number("discard"))?;
        let purity0 = g.mixture().purity();
        let mut spectra = Vec::new();
        for t in 1..=last {
            g.step(0.0)?;
            if times.contains(&t) {
                spectra.push(g.mixture().harmonic_weights()?);
            }
        }
        let drift = (g.mixture().purity() - purity0).abs();
        rec.invariant(
            format!("purity conserved (delta={})", tag(delta)),
            drift < 1e-9,
            format!("drift {drift:.3e} after {last} kicks"),
        );
        let worst = spectra
            .iter()
            .map(|s| (s.weights().iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        rec.invariant(
            format!("harmonic weights normalized (delta={})", tag(delta)),
            worst < 1e-9,
            format!("max |sum W - 1| {worst:.3e}"),
        );

        let mut table =
            Table::new(format!("harmonics_delta_{}", tag(delta))).int("m", "1", 0..=m_max as i64);
        for (t, s) in times.iter().zip(&spectra) {
            table = table.real(&format!("w_t{t}"), "1", (0..=m_max).map(|m| s.weight(m)));
        }
        rec.table(table);

        let widths: Vec<f64> = spectra.iter().map(mean_abs_m).collect();
        let r2: Vec<f64> = spectra.iter().map(|s| decay_r2(s, floor)).collect();
        rec.expect(
            format!("spectrum widens with t (delta={})", tag(delta)),
            widths.windows(2).all(|w| w[1] > w[0]),
            times
                .iter()
                .zip(&widths)
                .map(|(t, w)| format!("t={t}: <|m|> {w:.3}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        rec.expect(
            format!("near-exponential decay in m (delta={})", tag(delta)),
            r2.iter().all(|&r| r >= min_r2),
            times
                .iter()
                .zip(&r2)
                .map(|(t, r)| format!("t={t}: R^2 {r:.4}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        rec.note(format!(
            "delta={}: {} components, discarded weight {dropped:.3e}, final truncation {}, largest top-level leakage {:.3e}",
            tag(delta),
            g.mixture().len(),
            g.dim(),
            g.largest_leakage()
        ));
    }
    Ok(())
}
