//! Position densities of a harmonic-oscillator level: the classical
//! `1/p_c(x)` law, the quantum `|ψ_n|²`, its local position average, and
//! uniform incoherent mixtures over `n ± dn`.

use kickosc_core::correspondence::{
    classical_density, mixed_density, position_averaged_density, quantum_density, PositionGrid,
    WellSpec,
};
use kickosc_core::Result;

use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str = "classical vs quantum position densities of one oscillator level";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("n", 25.0, Rule::Count(0), "central level"),
    ParamSpec::list(
        "dn",
        &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
        Rule::Count(0),
        "mixture half-widths in levels",
    ),
    ParamSpec::number("mass", 1.0, Rule::Positive, "mass"),
    ParamSpec::number("omega", 1.0, Rule::Positive, "angular frequency"),
    ParamSpec::number("hbar", 1.0, Rule::Positive, "Planck constant"),
    ParamSpec::number("points", 2001.0, Rule::Count(3), "grid points"),
    ParamSpec::number(
        "inner_fraction",
        0.8,
        Rule::OpenUnit,
        "compared fraction of the allowed region",
    ),
    ParamSpec::number(
        "tolerance",
        0.15,
        Rule::Positive,
        "target distance as a fraction of the classical peak",
    ),
    ParamSpec::number(
        "target_dn",
        3.0,
        Rule::Count(0),
        "half-width expected to meet the tolerance",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    let n = p.number("n");
    let mut errors = Vec::new();
    if p.list("dn").iter().any(|&d| d > n) {
        errors.push("dn must not exceed n".to_string());
    }
    if n + p.list("dn").iter().copied().fold(0.0, f64::max) > 1e4 {
        errors.push("n + dn must not exceed 10000".to_string());
    }
    errors
}

pub(crate) fn run(p: &Params, _seed: u64, rec: &mut Recorder) -> Result<()> {
    let well = WellSpec::new(p.number("mass"), p.number("omega"), p.number("hbar"))?;
    let n = p.count("n") as u64;
    let dns: Vec<u64> = p.list("dn").iter().map(|&d| d as u64).collect();
    let widest = dns.iter().copied().max().unwrap_or(0);
    let reach = PositionGrid::for_level(&well, n + widest);
    let half = -reach.x(0);
    let grid = PositionGrid::symmetric(half, p.count("points"))?;

    let classical = classical_density(&well, n, &grid);
    let quantum = quantum_density(&well, n, &grid)?;
    let smoothed = position_averaged_density(&well, n, &grid)?;
    let mixed = dns
        .iter()
        .map(|&dn| mixed_density(&well, n, dn, &grid))
        .collect::<Result<Vec<_>>>()?;

    let radius = p.number("inner_fraction") * well.amplitude(n);
    let peak = classical.peak_within(radius);
    let distances = mixed
        .iter()
        .map(|m| m.distance_within(&classical, radius))
        .collect::<Result<Vec<_>>>()?;

    let mut densities = Table::new("densities")
        .real("x", "length", grid.points())
        .real("classical", "1/length", classical.values.iter().copied())
        .real("quantum", "1/length", quantum.values.iter().copied())
        .real(
            "position_averaged",
            "1/length",
            smoothed.values.iter().copied(),
        );
    for (dn, m) in dns.iter().zip(&mixed) {
        densities = densities.real(
            &format!("mixed_dn{dn}"),
            "1/length",
            m.values.iter().copied(),
        );
    }
    rec.table(densities);
    rec.table(
        Table::new("distances")
            .int("dn", "levels", dns.iter().map(|&d| d as i64))
            .real("max_distance", "1/length", distances.iter().copied())
            .real(
                "relative_to_classical_peak",
                "1",
                distances.iter().map(|d| d / peak),
            ),
    );

    let classical_norm = classical.integral();
    rec.invariant(
        "classical density normalized",
        (classical_norm - 1.0).abs() < 1e-9,
        format!("integral {classical_norm:.12}"),
    );
    let worst = std::iter::once(&quantum)
        .chain(&mixed)
        .map(|d| (d.integral() - 1.0).abs())
        .fold(0.0, f64::max);
    rec.invariant(
        "quantum densities normalized",
        worst < 1e-6,
        format!("max |integral - 1| {worst:.3e}"),
    );

    let target = p.count("target_dn") as u64;
    let tol = p.number("tolerance");
    if let Some(i) = dns.iter().position(|&d| d == target) {
        let r = distances[i] / peak;
        rec.expect(
            format!("dn={target} within tolerance of the classical density"),
            r <= tol,
            format!("distance/peak {r:.4} vs {tol}"),
        );
    }
    let mut order: Vec<(u64, f64)> = dns.iter().copied().zip(distances.iter().copied()).collect();
    order.sort_by_key(|&(d, _)| d);
    let monotone = order.windows(2).all(|w| w[1].1 <= w[0].1);
    rec.expect(
        "distance decreases monotonically with dn",
        monotone,
        order
            .iter()
            .map(|(d, x)| format!("dn={d}: {:.4}", x / peak))
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok(())
}
