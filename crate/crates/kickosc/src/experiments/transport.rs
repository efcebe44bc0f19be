//! Doorway resonance over a picket-fence background: fine-structure cross
//! section and delay, their period averages against the smooth formulas,
//! and the conductance with background absorption.

use kickosc_core::transport::{
    averaged_cross_section, averaged_delay, conductance, cross_section_fine, fine_structure_roots,
    period_average, wigner_delay_fine, AbsorptionParams, DoorwayParams,
};
use kickosc_core::Result;

use super::util::tag;
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "doorway cross sections, delays and conductance over energy";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("e_res", 0.0, Rule::Finite, "doorway energy"),
    ParamSpec::list("lead1", &[0.1], Rule::Positive, "partial widths of lead 1"),
    ParamSpec::list("lead2", &[0.1], Rule::Positive, "partial widths of lead 2"),
    ParamSpec::number("gamma_s", 200.0, Rule::NonNegative, "spreading width"),
    ParamSpec::number("d", 1.0, Rule::Positive, "background level spacing"),
    ParamSpec::number(
        "fine_from",
        -5.0,
        Rule::Finite,
        "start of the fine-structure window",
    ),
    ParamSpec::number(
        "fine_to",
        6.0,
        Rule::Finite,
        "end of the fine-structure window",
    ),
    ParamSpec::number(
        "fine_points",
        2201.0,
        Rule::Count(2),
        "energies in the fine-structure window",
    ),
    ParamSpec::list(
        "average_centers",
        &[-300.0, -100.0, -30.0, 0.0, 30.0, 100.0, 300.0],
        Rule::Finite,
        "energies whose period is averaged",
    ),
    ParamSpec::number(
        "quadrature_points",
        1e5,
        Rule::Count(10),
        "midpoint nodes per period",
    ),
    ParamSpec::number(
        "average_tolerance",
        5e-3,
        Rule::Positive,
        "relative tolerance of period averages",
    ),
    ParamSpec::list(
        "kappas",
        &[0.0, 0.1, 1.0, 10.0, 100.0],
        Rule::NonNegative,
        "absorption strengths",
    ),
    ParamSpec::number(
        "conductance_halfwidth",
        600.0,
        Rule::Positive,
        "half-width of the conductance energy window",
    ),
    ParamSpec::number(
        "conductance_points",
        601.0,
        Rule::Count(2),
        "energies in the conductance window",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    if p.number("fine_from") >= p.number("fine_to") {
        vec!["fine_from must be below fine_to".to_string()]
    } else {
        Vec::new()
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Nudges `e` off a background pole by a thousandth of the spacing.
fn off_pole(e: f64, d: f64) -> f64 {
    let x = e / d;
    if (x - x.round()).abs() < 1e-9 {
        e + 1e-3 * d
    } else {
        e
    }
}

pub(crate) fn run(p: &Params, _seed: u64, rec: &mut Recorder) -> Result<()> {
    let d = p.number("d");
    let doorway = DoorwayParams::new(
        p.number("e_res"),
        p.list("lead1"),
        p.list("lead2"),
        p.number("gamma_s"),
        d,
    )?;
    let (a, b) = (0, doorway.lead1.len());
    let g = doorway.gamma();

    let energies: Vec<f64> = grid(
        p.number("fine_from"),
        p.number("fine_to"),
        p.count("fine_points"),
    )
    .into_iter()
    .map(|e| off_pole(e, d))
    .collect();
    let mut sigma = Vec::with_capacity(energies.len());
    let mut delay = Vec::with_capacity(energies.len());
    let mut sigma_av = Vec::with_capacity(energies.len());
    let mut delay_av = Vec::with_capacity(energies.len());
    for &e in &energies {
        sigma.push(cross_section_fine(e, &doorway, a, b)?);
        delay.push(wigner_delay_fine(e, &doorway)?);
        sigma_av.push(averaged_cross_section(e, &doorway, a, b)?.total());
        delay_av.push(averaged_delay(e, &doorway));
    }
    rec.table(
        Table::new("fine_structure")
            .real("energy", "d", energies.iter().copied())
            .real("cross_section", "1", sigma.iter().copied())
            .real("averaged_cross_section", "1", sigma_av.iter().copied())
            .real("wigner_delay", "1/energy", delay.iter().copied())
            .real("averaged_delay", "1/energy", delay_av.iter().copied()),
    );
    let lowest = delay.iter().copied().fold(f64::INFINITY, f64::min);
    rec.invariant(
        "Wigner delay positive",
        lowest > 0.0,
        format!("smallest delay {lowest:.6e}"),
    );

    let reach = g + doorway.gamma_s;
    let (lo, hi) = (doorway.e_res - reach, doorway.e_res + reach);
    let roots = fine_structure_roots(&doorway, lo, hi)?;
    let peak = 4.0 * doorway.channel_width(a)? * doorway.channel_width(b)? / (g * g);
    let mut worst_peak: f64 = 0.0;
    let mut per_interval = true;
    for (i, &r) in roots.iter().enumerate() {
        worst_peak = worst_peak.max((cross_section_fine(r, &doorway, a, b)? / peak - 1.0).abs());
        if i > 0 && (r / d).floor() == (roots[i - 1] / d).floor() {
            per_interval = false;
        }
    }
    let intervals = ((hi / d).ceil() - (lo / d).floor()) as usize;
    rec.invariant(
        "one fine-structure root per background interval",
        per_interval && roots.len().abs_diff(intervals) <= 1,
        format!(
            "{} roots over {intervals} intervals in [{lo:.3}, {hi:.3}]",
            roots.len()
        ),
    );
    rec.invariant(
        "cross section peaks at 4 Gamma^a Gamma^b / Gamma^2 on every root",
        worst_peak < 1e-6,
        format!("largest relative deviation {worst_peak:.3e}"),
    );
    rec.table(
        Table::new("fine_structure_roots")
            .int("index", "1", 0..roots.len() as i64)
            .real("energy", "d", roots.iter().copied()),
    );

    let nodes = p.count("quadrature_points");
    let centers = p.list("average_centers");
    let mut rows = Vec::new();
    for &c in &centers {
        let mid = ((c / d).floor() + 0.5) * d;
        let s_num = period_average(c, d, nodes, |e| cross_section_fine(e, &doorway, a, b))?;
        let t_num = period_average(c, d, nodes, |e| wigner_delay_fine(e, &doorway))?;
        let s_ref = averaged_cross_section(mid, &doorway, a, b)?.total();
        let t_ref = averaged_delay(mid, &doorway);
        rows.push((mid, s_num, s_ref, t_num, t_ref));
    }
    rec.table(
        Table::new("period_averages")
            .real("period_center", "d", rows.iter().map(|r| r.0))
            .real("cross_section_quadrature", "1", rows.iter().map(|r| r.1))
            .real("cross_section_formula", "1", rows.iter().map(|r| r.2))
            .real(
                "cross_section_relative_error",
                "1",
                rows.iter().map(|r| r.1 / r.2 - 1.0),
            )
            .real("delay_quadrature", "1/energy", rows.iter().map(|r| r.3))
            .real("delay_formula", "1/energy", rows.iter().map(|r| r.4))
            .real(
                "delay_relative_error",
                "1",
                rows.iter().map(|r| r.3 / r.4 - 1.0),
            ),
    );
    let tol = p.number("average_tolerance");
    let ws = rows
        .iter()
        .map(|r| (r.1 / r.2 - 1.0).abs())
        .fold(0.0, f64::max);
    let wt = rows
        .iter()
        .map(|r| (r.3 / r.4 - 1.0).abs())
        .fold(0.0, f64::max);
    rec.expect(
        "period-averaged cross section matches the smooth formula",
        ws <= tol,
        format!("largest relative error {ws:.3e}"),
    );
    rec.expect(
        "period-averaged delay matches the smooth formula",
        wt <= tol,
        format!("largest relative error {wt:.3e}"),
    );

    let half = p.number("conductance_halfwidth");
    let ce = grid(
        doorway.e_res - half,
        doorway.e_res + half,
        p.count("conductance_points"),
    );
    let kappas = p.list("kappas");
    let mut table = Table::new("conductance").real("energy", "d", ce.iter().copied());
    let mut curves = Vec::new();
    for &k in &kappas {
        let abs = AbsorptionParams::from_kappa(k, d)?;
        let gk: Vec<f64> = ce
            .iter()
            .map(|&e| conductance(e, &doorway, &abs).g)
            .collect();
        table = table.real(&format!("g_kappa_{}", tag(k)), "e^2/h", gk.iter().copied());
        curves.push((k, gk));
    }
    rec.table(table);
    curves.sort_by(|x, y| x.0.total_cmp(&y.0));
    let monotone = curves
        .windows(2)
        .all(|w| w[0].1.iter().zip(&w[1].1).all(|(lo, hi)| hi <= lo));
    rec.expect(
        "absorption lowers the conductance at every energy",
        monotone,
        format!(
            "kappas {}",
            kappas
                .iter()
                .map(|k| tag(*k))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    Ok(())
}
