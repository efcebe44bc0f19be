//! Von Neumann entropy of the noise-averaged state for a sweep of noise
//! levels against the Shannon entropy of the harmonic weights.

use kickosc_core::metrics::shannon_entropy;
use kickosc_core::quantum::{initial_mixed_state, FloquetSpec};
use kickosc_core::Result;

use super::util::{entropy_of, size_for, support_eigenvalues, tag, GrowingDensity, GrowingMixture};
use crate::config::{ParamSpec, Params, Rule};
use crate::runner::Recorder;
use crate::table::Table;

pub(crate) const SUMMARY: &str =
    "von Neumann entropies under dephasing against the Shannon entropy";

pub(crate) const SCHEMA: &[ParamSpec] = &[
    ParamSpec::number("g0", 2.0, Rule::Finite, "kick strength"),
    ParamSpec::number("omega0", 0.5, Rule::Finite, "linear frequency"),
    ParamSpec::number("hbar", 1.0, Rule::Positive, "Planck constant"),
    ParamSpec::number("delta", 0.0, Rule::NonNegative, "initial spread Δ"),
    ParamSpec::list(
        "sigmas",
        &[0.000125, 0.001, 0.008, 0.064, 0.512],
        Rule::NonNegative,
        "noise levels",
    ),
    ParamSpec::number("t_max", 16.0, Rule::Count(1), "kicks"),
    ParamSpec::number("n_max", 4096.0, Rule::Levels, "largest truncation"),
    ParamSpec::number(
        "support_tail",
        1e-14,
        Rule::OpenUnit,
        "trace left out of the entropy eigenproblem",
    ),
    ParamSpec::number(
        "bound_from",
        5.0,
        Rule::Count(0),
        "first kick of the Shannon bound check",
    ),
    ParamSpec::number(
        "bound_slack",
        0.1,
        Rule::NonNegative,
        "allowed excess of S over I",
    ),
    ParamSpec::number(
        "merge_gap",
        0.05,
        Rule::OpenUnit,
        "relative gap below which S and I have merged",
    ),
    ParamSpec::number(
        "merge_sigma",
        0.064,
        Rule::NonNegative,
        "smallest noise level required to merge",
    ),
    ParamSpec::number(
        "merge_by",
        100.0,
        Rule::Count(1),
        "kick by which merging is required",
    ),
];

pub(crate) fn cross_check(p: &Params) -> Vec<String> {
    if p.number("bound_from") > p.number("t_max") {
        vec!["bound_from must not exceed t_max".to_string()]
    } else {
        Vec::new()
    }
}

/// Entropy and diagnostics of one noise level.
struct Curve {
    sigma: f64,
    entropy: Vec<f64>,
    purity: Vec<f64>,
    min_eigenvalue: f64,
    trace_drift: f64,
    hermiticity: f64,
}

fn averaged_curve(
    spec: FloquetSpec,
    delta: f64,
    sigma: f64,
    t_max: usize,
    tail: f64,
) -> Result<Curve> {
    let start = size_for((30.0 * (delta / spec.hbar + 1.0)) as usize).min(spec.n_max);
    let rho0 = initial_mixed_state(delta, &spec.with_levels(start)?)?;
    let mut g = GrowingDensity::new(spec, rho0, sigma)?;
    let mut c = Curve {
        sigma,
        entropy: Vec::with_capacity(t_max + 1),
        purity: Vec::with_capacity(t_max + 1),
        min_eigenvalue: f64::INFINITY,
        trace_drift: 0.0,
        hermiticity: 0.0,
    };
    for t in 0..=t_max {
        if t > 0 {
            g.step()?;
        }
        let rho = g.rho();
        let values = support_eigenvalues(rho, tail)?;
        c.min_eigenvalue = c.min_eigenvalue.min(values.first().copied().unwrap_or(0.0));
        c.entropy.push(entropy_of(&values));
        c.purity.push(kickosc_core::metrics::purity(rho));
        c.trace_drift = c.trace_drift.max((rho.trace() - 1.0).abs());
        c.hermiticity = c.hermiticity.max(rho.matrix().hermiticity_defect());
    }
    Ok(c)
}

pub(crate) fn run(p: &Params, _seed: u64, rec: &mut Recorder) -> Result<()> {
    let hbar = p.number("hbar");
    let spec = FloquetSpec::new(p.number("omega0"), p.number("g0"), hbar, p.count("n_max"))?;
    let delta = p.number("delta");
    let t_max = p.count("t_max");
    let tail = p.number("support_tail");

    let (mut clean, _) = GrowingMixture::initial(delta, spec, 1e-12)?;
    let mut shannon = vec![shannon_entropy(&clean.mixture().harmonic_weights()?)];
    for _ in 0..t_max {
        clean.step(0.0)?;
        shannon.push(shannon_entropy(&clean.mixture().harmonic_weights()?));
    }

    let mut curves = Vec::new();
    for &sigma in &p.list("sigmas") {
        curves.push(averaged_curve(spec, delta, sigma, t_max, tail)?);
    }

    let mut table = Table::new("entropies")
        .int("t", "kicks", 0..=t_max as i64)
        .real("shannon", "nats", shannon.iter().copied());
    for c in &curves {
        table = table.real(
            &format!("von_neumann_sigma_{}", tag(c.sigma)),
            "nats",
            c.entropy.iter().copied(),
        );
    }
    rec.table(table);
    let mut table = Table::new("purities").int("t", "kicks", 0..=t_max as i64);
    for c in &curves {
        table = table.real(
            &format!("purity_sigma_{}", tag(c.sigma)),
            "1",
            c.purity.iter().copied(),
        );
    }
    rec.table(table);

    let trace = curves.iter().map(|c| c.trace_drift).fold(0.0, f64::max);
    rec.invariant(
        "trace preserved",
        trace < 1e-9 * t_max as f64,
        format!("max |Tr rho - 1| {trace:.3e}"),
    );
    let herm = curves.iter().map(|c| c.hermiticity).fold(0.0, f64::max);
    rec.invariant(
        "Hermiticity preserved",
        herm < 1e-10,
        format!("max defect {herm:.3e}"),
    );
    let lowest = curves
        .iter()
        .map(|c| c.min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    rec.invariant(
        "positive semidefinite",
        lowest > -1e-10,
        format!("lowest eigenvalue {lowest:.3e}"),
    );
    let rise = curves
        .iter()
        .flat_map(|c| c.purity.windows(2).map(|w| w[1] - w[0]))
        .fold(f64::NEG_INFINITY, f64::max);
    rec.invariant(
        "purity non-increasing",
        rise <= 1e-10,
        format!("largest one-step rise {rise:.3e}"),
    );

    let drop = curves
        .iter()
        .flat_map(|c| c.entropy.windows(2).map(|w| w[0] - w[1]))
        .fold(f64::NEG_INFINITY, f64::max);
    rec.expect(
        "von Neumann entropies non-decreasing",
        drop <= 1e-9,
        format!("largest one-step decrease {drop:.3e}"),
    );
    let from = p.count("bound_from");
    let slack = p.number("bound_slack");
    let excess = curves
        .iter()
        .flat_map(|c| {
            c.entropy[from..]
                .iter()
                .zip(&shannon[from..])
                .map(|(s, i)| s - i)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    rec.expect(
        format!("von Neumann entropy stays below Shannon + {slack} from t={from}"),
        excess <= slack,
        format!("largest S - I {excess:.4}"),
    );

    let gap = p.number("merge_gap");
    let merge: Vec<Option<usize>> = curves
        .iter()
        .map(|c| {
            (0..=t_max)
                .find(|&t| shannon[t] > 0.0 && (shannon[t] - c.entropy[t]).abs() < gap * shannon[t])
        })
        .collect();
    rec.table(
        Table::new("merge_times")
            .real("sigma", "1", curves.iter().map(|c| c.sigma))
            .int(
                "merge_time",
                "kicks",
                merge.iter().map(|m| m.map_or(-1, |t| t as i64)),
            )
            .real(
                "final_relative_gap",
                "1",
                curves
                    .iter()
                    .map(|c| (shannon[t_max] - c.entropy[t_max]) / shannon[t_max]),
            ),
    );
    let by = p.count("merge_by");
    let strong: Vec<(f64, Option<usize>)> = curves
        .iter()
        .zip(&merge)
        .filter(|(c, _)| c.sigma >= p.number("merge_sigma"))
        .map(|(c, m)| (c.sigma, *m))
        .collect();
    let describe = strong
        .iter()
        .map(|(s, m)| match m {
            Some(t) => format!("sigma={}: t={t}", tag(*s)),
            None => format!("sigma={}: not by t={t_max}", tag(*s)),
        })
        .collect::<Vec<_>>()
        .join(", ");
    rec.expect(
        format!("strong noise merges with the Shannon entropy before t={by}"),
        strong.iter().all(|(_, m)| m.is_some_and(|t| t < by)),
        describe.clone(),
    );
    let mut ordered = strong.clone();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    rec.expect(
        "larger noise merges earlier",
        ordered.windows(2).all(|w| match (w[0].1, w[1].1) {
            (Some(a), Some(b)) => b < a,
            (None, Some(_)) => true,
            _ => false,
        }),
        describe,
    );
    Ok(())
}
