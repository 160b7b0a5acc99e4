use ehrlab::dynamics::c_set_experiment;

use super::dyn_cesaro::{bound_text, walk_measure};
use crate::args::DynCsetArgs;
use crate::error::CliResult;
use crate::io::{parse_rational, parse_vector, rat_string};
use crate::report::{Report, Table};

pub fn run(a: &DynCsetArgs) -> CliResult<Report> {
    let w = &a.walk;
    let (system, set) = super::load_system(&w.sys)?;
    let v = parse_vector(&w.v)?;
    let p = walk_measure(w, system.r())?;
    let c = parse_rational(&a.c)?;
    let rep = c_set_experiment(&system, &set, &v, &p, &c, w.horizon, w.trials, w.seed)?;
    let mut report = Report::default();
    report.set("v", v.to_string());
    report.set("N", w.horizon);
    report.set("M", w.trials);
    report.set("c", rat_string(&rep.c));
    report.set("c_prime", rat_string(&rep.c_prime));
    report.set("delta", rat_string(&rep.delta));
    report.set("rational_part_bound", bound_text(&rep.bound));
    report.set("lower_density", rat_string(&rep.lower_density));
    report.set("members", rep.indicators.iter().filter(|&&b| b).count());
    report.count("ambiguous_comparisons", rep.ambiguous);
    report.count("correlations", (w.trials * w.horizon) as u64);
    let mut t = Table::new("c_set", &["n", "probability", "in_C"]);
    for (i, (q, b)) in rep.probabilities.iter().zip(&rep.indicators).enumerate() {
        t.push(vec![(i + 1).to_string(), rat_string(q), u8::from(*b).to_string()]);
    }
    report.tables.push(t);
    Ok(report)
}
