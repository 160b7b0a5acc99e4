use ehrlab::random_walk::{proximality_check, Proximality};

use crate::args::ProximalArgs;
use crate::error::{CliError, CliResult};
use crate::io::{parse_matrix, sci};
use crate::report::{Report, Table};

pub fn run(a: &ProximalArgs) -> CliResult<Report> {
    let gamma = parse_matrix(&a.gamma)?;
    if !(a.tol > 0.0) {
        return Err(CliError::Precondition("--tol must be positive".into()));
    }
    let rep = proximality_check::<f64>(&gamma, a.tol, a.max_iter);
    let mut report = Report::default();
    report.set("gamma", gamma.to_string());
    report.set("verdict", match rep.verdict {
        Proximality::Proximal => "proximal",
        Proximality::NotProximal => "not_proximal",
        Proximality::Borderline => "borderline",
    });
    report.set("charpoly", rep.charpoly.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    report.set("relative_gap", sci(rep.relative_gap));
    let mut t = Table::new("roots", &["re", "im", "modulus", "multiplicity"]);
    for (z, m) in &rep.roots {
        t.push(vec![sci(z.re), sci(z.im), sci(z.norm()), m.to_string()]);
    }
    report.tables.push(t);
    Ok(report)
}
