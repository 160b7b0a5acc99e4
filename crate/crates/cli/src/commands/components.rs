use ehrlab::dynamics::ergodic_components;

use crate::args::ComponentsArgs;
use crate::error::CliResult;
use crate::io::rat_string;
use crate::report::{Report, Table};

pub fn run(a: &ComponentsArgs) -> CliResult<Report> {
    let (system, set) = super::load_system(&a.sys)?;
    let rep = ergodic_components(&system, &set, a.n)?;
    let mut report = Report::default();
    report.set("n", a.n);
    report.set("components", rep.components.len());
    report.set("best", rep.best);
    report.set("exceeds_third", rep.exceeds_third);
    let mut t = Table::new("components", &["index", "size", "measure", "conditional", "first_member"]);
    for (i, c) in rep.components.iter().enumerate() {
        let first = c.members.first().map(|m| format!("{m:?}")).unwrap_or_default();
        t.push(vec![i.to_string(), c.members.len().to_string(), rat_string(&c.measure), rat_string(&c.conditional), first]);
    }
    report.tables.push(t);
    Ok(report)
}
