use serde_json::json;

use ehrlab::haystack::{candidate_stream, first_violation, greedy_extend, hyperplane_cover_oracle, Rejection, DEFAULT_ORACLE_CAP};
use ehrlab::lattice::Vector;
use ehrlab::spectra::PointSet;

use crate::args::HaystackArgs;
use crate::error::{CliError, CliResult};
use crate::io::{read_json, HaystackJson, PointSetJson};
use crate::report::{Report, Table};

fn members_json(vs: &[Vector<i64>]) -> serde_json::Value {
    json!({ "members": vs.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>() })
}

fn cover(report: &mut Report, members: &[Vector<i64>], k: Option<usize>) -> CliResult<()> {
    if let Some(k) = k {
        report.set("cover_k", k);
        report.set("coverable", hyperplane_cover_oracle(members, k, DEFAULT_ORACLE_CAP)?);
    }
    Ok(())
}

pub fn run(a: &HaystackArgs) -> CliResult<Report> {
    let mut report = Report::default();
    if let Some(path) = &a.check {
        let h: HaystackJson = read_json(path.as_ref())?;
        let members = h.members.iter().map(|m| Vector::from_i64s(m)).collect::<ehrlab::Result<Vec<_>>>()?;
        let bad = first_violation(&members)?;
        report.set("size", members.len());
        report.set("is_haystack", bad.is_none());
        report.set("first_violation", json!(bad));
        cover(&mut report, &members, a.cover)?;
        return Ok(report);
    }
    if a.max_norm < 1 || a.target == 0 {
        return Err(CliError::Precondition("need --max-norm >= 1 and --target >= 1".into()));
    }
    let e = match &a.pointset {
        Some(p) => read_json::<PointSetJson>(p.as_ref())?.to_pointset()?,
        None => PointSet::full(a.r)?,
    };
    let mut candidates = candidate_stream(&e, a.max_norm)?;
    if a.exclude_axes {
        candidates.retain(|v| v.coords().iter().filter(|&&x| x != 0).count() > 1);
    }
    let result = greedy_extend(e.rank(), candidates, a.target)?;
    let members = result.haystack.members();
    report.set("target", a.target);
    report.set("size", members.len());
    report.set("insufficient", result.insufficient());
    report.set("is_haystack", first_violation(members)?.is_none());
    report.set("haystack", members_json(members));
    report.count("candidates_examined", result.trace.len() as u64);
    report.count("rejected", result.rejected as u64);
    report.not_found = result.insufficient();
    let mut trace = Table::new("trace", &["index", "candidate", "accepted", "reason"]);
    for t in &result.trace {
        let (accepted, reason) = match &t.rejection {
            None => (true, String::new()),
            Some(Rejection::Zero) => (false, "zero".into()),
            Some(Rejection::InSpan(s)) => (false, format!("span{s:?}")),
        };
        trace.push(vec![t.index.to_string(), t.candidate.to_string(), accepted.to_string(), reason]);
    }
    report.tables.push(trace);
    cover(&mut report, members, a.cover)?;
    Ok(report)
}
