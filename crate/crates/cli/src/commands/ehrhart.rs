use serde_json::json;

use ehrlab::ehrhart::EnumerationBudget;

use crate::args::EhrhartArgs;
use crate::error::CliResult;
use crate::io::{read_json, PolynomialJson, SimplexJson};
use crate::report::{Report, Table};

pub fn run(a: &EhrhartArgs) -> CliResult<Report> {
    let simplex = read_json::<SimplexJson>(a.simplex.as_ref())?.to_simplex()?;
    let budget = EnumerationBudget { max_points: a.max_points };
    let poly = simplex.ehrhart_polynomial(&budget)?;
    let mut report = Report::default();
    report.set("r", simplex.rank());
    report.set("vertices", json!(SimplexJson::from_simplex(&simplex).vertices));
    report.set("polynomial", json!(PolynomialJson::from_poly(&poly)));
    report.set("rfact_volume", simplex.volume_times_rfact().to_string());
    let mut coeffs = Table::new("coefficients", &["degree", "coeff"]);
    for (k, c) in poly.coeff_strings().into_iter().enumerate() {
        coeffs.push(vec![k.to_string(), c]);
    }
    report.tables.push(coeffs);
    if let Some(t) = a.t {
        let count = simplex.count_lattice_points(t, &budget)?;
        report.set("t", t);
        report.set("count", count.to_string());
    }
    Ok(report)
}
