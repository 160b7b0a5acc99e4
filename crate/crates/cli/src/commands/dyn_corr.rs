use ehrlab::dynamics::{multi_correlation, orbit_union_measure, set_measure};

use crate::args::DynCorrArgs;
use crate::error::CliResult;
use crate::io::{dec, parse_vector, rat_string, sci};
use crate::report::Report;

pub fn run(a: &DynCorrArgs) -> CliResult<Report> {
    let (system, set) = super::load_system(&a.sys)?;
    let ws = a.vectors.iter().map(|s| parse_vector(s)).collect::<CliResult<Vec<_>>>()?;
    let value = multi_correlation(&system, &set, &ws)?;
    let mut report = Report::default();
    report.set("measure", rat_string(&set_measure(&system, &set)?));
    report.set("vectors", ws.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    report.set("value", rat_string(&value.value));
    report.set("value_decimal", dec(value.to_f64()));
    report.set("error_bound", sci(value.err));
    report.set("exact", value.err == 0.0);
    report.set("positive", value.certainly_positive());
    if let Some(l) = &a.orbit {
        let lambda = parse_vector(l)?;
        report.set("orbit_union_measure", rat_string(&orbit_union_measure(&system, &set, &lambda)?));
    }
    Ok(report)
}
