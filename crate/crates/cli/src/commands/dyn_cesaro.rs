use ehrlab::dynamics::cesaro_correlation_experiment;
use ehrlab::random_walk::GeneratingMeasure;

use crate::args::DynWalkArgs;
use crate::error::CliResult;
use crate::io::{dec, parse_vector, rat_string, read_json, sci, MeasureJson};
use crate::report::{Report, Table};

pub(crate) fn walk_measure(a: &DynWalkArgs, r: usize) -> CliResult<GeneratingMeasure> {
    match &a.measure {
        Some(path) => read_json::<MeasureJson>(path.as_ref())?.to_measure(r),
        None => MeasureJson::default().to_measure(r),
    }
}

pub(crate) fn bound_text(b: &ehrlab::dynamics::MassSum) -> String {
    b.exact.as_ref().map_or_else(|| dec(b.value), rat_string)
}

pub fn run(a: &DynWalkArgs) -> CliResult<Report> {
    let (system, set) = super::load_system(&a.sys)?;
    let v = parse_vector(&a.v)?;
    let p = walk_measure(a, system.r())?;
    let rep = cesaro_correlation_experiment(&system, &set, &v, &p, a.horizon, a.trials, a.seed)?;
    let mut report = Report::default();
    report.set("v", v.to_string());
    report.set("N", a.horizon);
    report.set("M", a.trials);
    report.set("measure", rat_string(&rep.measure));
    report.set("target", rat_string(&rep.target));
    report.set("rational_part_bound", bound_text(&rep.bound));
    report.set("final_value", dec(*rep.cesaro.last().expect("N >= 1")));
    report.set("deviation", dec(rep.deviation));
    report.set("error_bound", sci(rep.err));
    report.count("trials", a.trials as u64);
    report.count("correlations", (a.trials * a.horizon) as u64);
    let mut t = Table::new("cesaro", &["N'", "cesaro_value", "stderr"]);
    for (i, (c, s)) in rep.cesaro.iter().zip(&rep.stderr).enumerate() {
        t.push(vec![(i + 1).to_string(), dec(*c), sci(*s)]);
    }
    report.tables.push(t);
    Ok(report)
}
