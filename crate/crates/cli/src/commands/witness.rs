use serde_json::json;

use ehrlab::ehrhart::{EnumerationBudget, Simplex};
use ehrlab::lattice::Vector;
use ehrlab::random_walk::default_measure;
use ehrlab::spectra::{verify_inclusion, BoxRegion, Strategy, WalkSampler, WitnessBudget, WitnessOutcome};

use crate::args::WitnessArgs;
use crate::error::{CliError, CliResult};
use crate::io::{parse_vectors, read_json, vector_json, MatrixJson, PointSetJson, PolynomialJson};
use crate::report::{Report, Table};

pub fn run(a: &WitnessArgs) -> CliResult<Report> {
    let e = read_json::<PointSetJson>(a.pointset.as_ref())?.to_pointset()?;
    let basis = parse_vectors(&a.basis)?;
    let r = e.rank();
    if a.v0_radius < 0 || a.min_n == 0 || a.min_n > a.max_n {
        return Err(CliError::Precondition("need v0 radius >= 0 and 1 <= min n <= N".into()));
    }
    let sampler = if a.walks > 0 {
        let seed = a.seed.ok_or_else(|| CliError::Precondition("--walks needs an explicit --seed".into()))?;
        Some(WalkSampler { measure: default_measure(r)?, walks: a.walks, horizon: a.walk_steps, seed })
    } else {
        None
    };
    let budget = WitnessBudget {
        max_word_len: a.max_word_len,
        min_n: a.min_n,
        max_n: a.max_n,
        v0_box: BoxRegion::cube(r, -a.v0_radius, a.v0_radius)?,
        sampler,
    };
    let outcome = ehrlab::spectra::witness_search(&e, &basis, &budget)?;
    let mut report = Report::default();
    report.set("pointset", json!(PointSetJson::from_pointset(&e)));
    report.set("basis", json!(basis.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>()));
    let search = match &outcome {
        WitnessOutcome::Found { report, .. } | WitnessOutcome::NotFound(report) => report.clone(),
    };
    report.count("gammas", search.gammas);
    report.count("n_values", search.n_values);
    report.count("v0_candidates", search.v0_candidates);
    report.count("triples_examined", search.triples_examined.min(u64::MAX as u128) as u64);
    report.count("walk_gammas", search.walk_gammas);
    report.count("walk_triples_examined", search.walk_triples_examined.min(u64::MAX as u128) as u64);
    report.set("triples_examined", search.triples_examined.to_string());
    match outcome {
        WitnessOutcome::NotFound(_) => {
            report.not_found = true;
            report.set("found", false);
        }
        WitnessOutcome::Found { witness, .. } => {
            report.set("found", true);
            report.set("n", witness.n);
            report.set("gamma", json!(MatrixJson::from_matrix(witness.gamma.matrix())));
            report.set("word", json!(witness.word));
            report.set("v0", vector_json(&witness.v0));
            report.set("strategy", match witness.strategy {
                Strategy::Words => "words",
                Strategy::Walk => "walk",
            });
            report.set("verified", witness.verify(&e, &basis));
            let mut t = Table::new("images", &["k", "point", "in_E"]);
            for (k, w) in witness.images.iter().enumerate() {
                t.push(vec![k.to_string(), w.to_string(), e.contains(w).to_string()]);
            }
            report.tables.push(t);
            if a.check_inclusion {
                let mut vertices = vec![Vector::zeros(r)];
                vertices.extend(basis.iter().cloned());
                let simplex = Simplex::new(vertices)?;
                match verify_inclusion(&witness, &simplex, &EnumerationBudget::default())? {
                    Ok(p) => {
                        report.set("inclusion", "verified");
                        report.set("polynomial", json!(PolynomialJson::from_poly(&p)));
                    }
                    Err((expected, found)) => {
                        report.set("inclusion", "mismatch");
                        report.set("expected", json!(PolynomialJson::from_poly(&expected)));
                        report.set("polynomial", json!(PolynomialJson::from_poly(&found)));
                    }
                }
            }
        }
    }
    Ok(report)
}
