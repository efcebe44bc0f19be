//! Growth of the mean squared θ-harmonic `⟨m²⟩` from an isotropic initial
//! state: classical exponential growth against quantum curves that follow it
//! up to about the Ehrenfest time and then fall behind.

use kickosc_core::classical::{ehrenfest_time, sample_isotropic, tangent_m2_from, MapParams};
use kickosc_core::numerics::RandomStream;
use kickosc_core::quantum::FloquetSpec;
use kickosc_core::Result;

use super::util::{correlation_time, growth_fit, tag, GrowingMixture};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "classical vs quantum growth of the mean squared harmonic";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 1.5, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("area", 0.5, Rule::Positive, "initial mean action <I>"),
    ParamSpec::list(
        "hbars",
        &[1.0, 0.1, 0.01],
        Rule::Positive,
        "Planck constants",
    ),
    ParamSpec::list("t_max", &[12.0, 8.0, 5.0], Rule::Count(1), "kicks per hbar"),
    ParamSpec::list(
        "n_max",
        &[1024.0, 4096.0, 16384.0],
        Rule::Levels,
        "largest truncation per hbar",
    ),
    ParamSpec::number(
        "discard",
        1e-3,
        Rule::OpenUnit,
        "initial weight dropped from the Fock mixture",
    ),
    ParamSpec::number(
        "trajectories",
        1e5,
        Rule::Count(100),
        "classical sample size",
    ),
    ParamSpec::number(
        "fit_from",
        1.0,
        Rule::Count(0),
        "first kick of the classical growth fit",
    ),
    ParamSpec::number(
        "fit_to",
        8.0,
        Rule::Count(1),
        "last kick of the classical growth fit",
    ),
    ParamSpec::number(
        "correlation_to",
        10.0,
        Rule::Count(2),
        "last kick of the correlation-time fit",
    ),
    ParamSpec::number(
        "departure_ratio",
        0.5,
        Rule::OpenUnit,
        "quantum/classical ratio marking departure",
    ),
    ParamSpec::number(
        "suppression_delay",
        10.0,
        Rule::Count(0),
        "kicks after t_E at which the largest hbar is compared",
    ),
    ParamSpec::number(
        "suppression_factor",
        10.0,
        Rule::Positive,
        "required classical/quantum ratio at that time",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    let k = p.list("hbars").len();
    let mut e = Vec::new();
    for key in ["t_max", "n_max"] {
        if p.list(key).len() != k {
            e.push(format!("{key} needs one entry per hbar"));
        }
    }
    if p.number("fit_from") >= p.number("fit_to") {
        e.push("fit_from must be below fit_to".to_string());
    }
    if p.number("area") < 0.5 * p.list("hbars").iter().copied().fold(0.0, f64::max) {
        e.push("area must be at least hbar/2 for every hbar".to_string());
    }
    e
}

/// One quantum curve.
struct QuantumCurve {
    hbar: f64,
    m2: Vec<f64>,
}

pub(crate) fn run(p: &Params, seed: u64, rec: &mut Recorder) -> Result<()> {
    let params = MapParams::new(p.number("omega0"), p.number("g0"))?;
    let area = p.number("area");
    let hbars = p.list("hbars");
    let t_max: Vec<u64> = p.list("t_max").iter().map(|&t| t as u64).collect();
    let caps: Vec<usize> = p.list("n_max").iter().map(|&n| n as usize).collect();
    let horizon = t_max.iter().copied().max().unwrap_or(1);
    let n_traj = p.count("trajectories");

    rec.stream("classical initial ensemble", 0);
    let e0 = sample_isotropic(area, n_traj, params, &mut RandomStream::new(seed, 0))?;
    let classical = tangent_m2_from(&e0, area, horizon)?;
    let (corr, tau_c) = correlation_time(&e0, p.count("correlation_to") as u64)?;

    let ct = classical.times_f64();
    let (from, to) = (p.number("fit_from"), p.number("fit_to"));
    let fit = growth_fit(&ct, classical.values(), from, to);
    let predicted: Vec<f64> = ct
        .iter()
        .map(|&t| fit.map_or(f64::NAN, |f| f.predict(t).exp()))
        .collect();
    rec.table(
        Table::new("classical")
            .int("t", "kicks", classical.times().iter().map(|&t| t as i64))
            .real("m2", "1", classical.values().iter().copied())
            .real("fit", "1", predicted.iter().copied()),
    );
    rec.table(
        Table::new("phase_correlation")
            .int("t", "kicks", corr.times().iter().map(|&t| t as i64))
            .real("correlation", "1", corr.values().iter().copied()),
    );
    let r2 = fit.map_or(f64::NAN, |f| f.r_squared);
    rec.expect(
        "classical growth is log-linear",
        r2 > 0.95,
        format!(
            "R^2 {r2:.5} over t in [{from}, {to}], rate {:.4}/kick",
            fit.map_or(f64::NAN, |f| f.slope)
        ),
    );
    rec.note(format!("correlation time tau_c = {tau_c:.6}"));

    let mut curves = Vec::new();
    for ((&hbar, &steps), &cap) in hbars.iter().zip(&t_max).zip(&caps) {
        let spec = FloquetSpec::new(params.omega0, params.g0, hbar, cap)?;
        let (mut g, dropped) =
            GrowingMixture::initial(area - 0.5 * hbar, spec, p.number("discard"))?;
        let purity0 = g.mixture().purity();
        let mut m2 = vec![g.mixture().mean_m2()];
        let mut purity = vec![purity0];
        let mut mean_n = vec![g.mixture().mean_excitation()];
        let mut dims = vec![g.dim() as i64];
        let mut outcome = Ok(());
        for _ in 0..steps {
            if let Err(e) = g.step(0.0) {
                outcome = Err(e);
                break;
            }
            m2.push(g.mixture().mean_m2());
            purity.push(g.mixture().purity());
            mean_n.push(g.mixture().mean_excitation());
            dims.push(g.dim() as i64);
        }
        let name = format!("quantum_hbar_{}", tag(hbar));
        rec.table(
            Table::new(name)
                .int("t", "kicks", 0..m2.len() as i64)
                .real("m2", "1", m2.iter().copied())
                .real(
                    "ratio_to_classical",
                    "1",
                    m2.iter().zip(classical.values()).map(|(q, c)| q / c),
                )
                .real("purity", "1", purity.iter().copied())
                .real("mean_n", "levels", mean_n.iter().copied())
                .int("levels", "levels", dims.iter().copied()),
        );
        let drift = purity
            .iter()
            .map(|x| (x - purity0).abs())
            .fold(0.0, f64::max);
        rec.invariant(
            format!("purity conserved (hbar={})", tag(hbar)),
            drift < 1e-9,
            format!("max drift {drift:.3e}"),
        );
        rec.note(format!(
            "hbar={}: {} mixture components, discarded weight {dropped:.3e}, largest top-level leakage {:.3e}",
            tag(hbar),
            g.mixture().len(),
            g.largest_leakage()
        ));
        outcome?;
        curves.push(QuantumCurve { hbar, m2 });
    }

    let Some(fit) = fit else {
        return Ok(());
    };
    let ratio = p.number("departure_ratio");
    let mut rows = Vec::new();
    for c in &curves {
        let departure = (1..c.m2.len()).find(|&t| c.m2[t] < ratio * classical.values()[t]);
        let t_e = ehrenfest_time(tau_c, area, c.hbar).unwrap_or(f64::NAN);
        rows.push((c.hbar, t_e, departure, c.m2.len() - 1));
    }
    rec.table(
        Table::new("departure")
            .real("hbar", "1", rows.iter().map(|r| r.0))
            .real("ehrenfest_time", "kicks", rows.iter().map(|r| r.1))
            .int(
                "departure",
                "kicks",
                rows.iter().map(|r| r.2.map_or(-1, |t| t as i64)),
            )
            .int("horizon", "kicks", rows.iter().map(|r| r.3 as i64)),
    );

    if let Some((i, c)) = curves
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.hbar.total_cmp(&b.1.hbar))
    {
        let t_e = rows[i].1.max(0.0);
        let t = (t_e + p.number("suppression_delay")).ceil() as usize;
        let factor = p.number("suppression_factor");
        match c.m2.get(t) {
            Some(&q) => {
                let cl = fit.predict(t as f64).exp();
                rec.expect(
                    format!(
                        "hbar={} falls {factor}x below the classical fit",
                        tag(c.hbar)
                    ),
                    q * factor <= cl,
                    format!(
                        "t={t}: quantum {q:.4e}, classical fit {cl:.4e}, ratio {:.3e}",
                        cl / q
                    ),
                );
            }
            None => rec.expect(
                format!(
                    "hbar={} falls {factor}x below the classical fit",
                    tag(c.hbar)
                ),
                false,
                format!("t={t} lies beyond the simulated {} kicks", c.m2.len() - 1),
            ),
        }
    }

    let mut order: Vec<_> = rows.iter().collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let ordered = order.windows(2).all(|w| match (w[0].2, w[1].2) {
        (Some(a), Some(b)) => b > a,
        (Some(a), None) => w[1].3 >= a,
        (None, _) => false,
    });
    rec.expect(
        "smaller hbar follows the classical curve longer",
        ordered,
        order
            .iter()
            .map(|r| match r.2 {
                Some(t) => format!("hbar={}: departs at t={t}", tag(r.0)),
                None => format!("hbar={}: still tracking at t={}", tag(r.0), r.3),
            })
            .collect::<Vec<_>>()
            .join("; "),
    );
    Ok(())
}
