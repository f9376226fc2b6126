//! Plain-text output of the non-assessment commands.

use std::fmt::Write as _;

use ictimpact_core::domain::Co2e;
use ictimpact_core::workbench::{AuditReport, BaselineReport, CalibrationReport, SensitivityReport};

fn t(q: Co2e) -> String {
    format!("{:.3}", q.as_tonnes())
}

pub fn sensitivity(r: &SensitivityReport) -> String {
    let mut out = String::new();
    if let Some(rows) = &r.tornado {
        let _ = writeln!(out, "{:<22} {:>14} {:>14} {:>14}  class", "parameter", "low (t)", "high (t)", "swing (t)");
        for row in rows {
            let _ = writeln!(
                out,
                "{:<22} {:>14} {:>14} {:>14}  {:?}",
                row.parameter.as_str(),
                t(row.low_effect),
                t(row.high_effect),
                t(row.swing),
                row.uncertainty_class
            );
        }
    }
    if let Some(mc) = &r.monte_carlo {
        let e = &mc.effect;
        let _ = writeln!(out, "samples {}  seed {}", mc.samples, mc.seed.seed);
        let _ = writeln!(
            out,
            "effect (t): mean {}  sd {}  p05 {}  p50 {}  p95 {}",
            t(Co2e::kg(e.mean)),
            t(Co2e::kg(e.sd)),
            t(Co2e::kg(e.p05)),
            t(Co2e::kg(e.p50)),
            t(Co2e::kg(e.p95))
        );
        if let Some(o) = &mc.overstatement {
            let _ = writeln!(out, "overstatement (t): mean {}  p05 {}  p95 {}", t(Co2e::kg(o.mean)), t(Co2e::kg(o.p05)), t(Co2e::kg(o.p95)));
        }
        let names = |ps: &[ictimpact_core::domain::ParamPath]| {
            ps.iter().map(|p| p.as_str()).collect::<Vec<_>>().join(", ")
        };
        let _ = writeln!(out, "data uncertainty: {}", names(&mc.data_uncertainty));
        let _ = writeln!(out, "future uncertainty: {}", names(&mc.future_uncertainty));
    }
    out
}

pub fn baseline(r: &BaselineReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "strategy {}, {} periods", r.strategy.as_str(), r.horizon);
    match &r.trajectory {
        None => {
            let _ = writeln!(out, "{:>5} {:>16} {:>16} {:>16}", "t", "baseline (t)", "lo (t)", "hi (t)");
            for row in &r.rows {
                let _ = writeln!(out, "{:>5} {:>16} {:>16} {:>16}", row.t, t(row.baseline), t(row.lo), t(row.hi));
            }
        }
        Some(points) => {
            let _ = writeln!(
                out,
                "{:>5} {:>14} {:>14} {:>14} {:>14} {:>14} {:>14}",
                "t", "baseline", "lo", "hi", "with service", "effect", "effect range"
            );
            for p in points {
                let _ = writeln!(
                    out,
                    "{:>5} {:>14} {:>14} {:>14} {:>14} {:>14} {:>6}..{}",
                    p.t,
                    t(p.baseline),
                    t(p.baseline_lo),
                    t(p.baseline_hi),
                    t(p.with_service),
                    t(p.effect),
                    t(p.effect_lo),
                    t(p.effect_hi)
                );
            }
        }
    }
    out
}

pub fn audit(r: &AuditReport) -> String {
    let mut out = String::new();
    if r.flags.is_empty() {
        let _ = writeln!(out, "no modelled flaw found");
    }
    for f in &r.flags {
        let severity = format!("{:?}", f.severity).to_lowercase();
        let _ = writeln!(out, "{severity:<8} {} [{}]", f.code, f.rule_source);
        let _ = writeln!(out, "         {}", f.message);
    }
    if !r.checklist.is_empty() {
        let _ = writeln!(out, "\ncorroborate with");
        for item in &r.checklist {
            let _ = writeln!(out, "  - {item}");
        }
    }
    out
}

pub fn calibration(r: &CalibrationReport) -> String {
    format!(
        "k = {} (case-study average {}, population average {})\n",
        r.k,
        r.case_study_average.as_kg(),
        r.population_average.as_kg()
    )
}
