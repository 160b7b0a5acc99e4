use serde_json::{json, Value};

use ehrlab::dynamics::{gamma_search, GammaBudget, GammaHit, StrategyOutcome};

use crate::args::DynGammaArgs;
use crate::error::CliResult;
use crate::io::{dec, parse_vectors, rat_string, sci, MatrixJson};
use crate::report::{Report, Table};

fn hit_json(hit: &GammaHit) -> Value {
    json!({
        "gamma": MatrixJson::from_matrix(hit.gamma.matrix()),
        "word": hit.word,
        "images": hit.images.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
        "value": rat_string(&hit.value.value),
        "error_bound": sci(hit.value.err),
    })
}

fn strategy_json(s: &StrategyOutcome) -> Value {
    json!({
        "found": s.hit.is_some(),
        "tried": s.tried,
        "non_integral": s.non_integral,
        "hit": s.hit.as_ref().map(hit_json),
    })
}

pub fn run(a: &DynGammaArgs) -> CliResult<Report> {
    let (system, set) = super::load_system(&a.sys)?;
    let basis = parse_vectors(&a.basis)?;
    let budget = GammaBudget {
        max_word_len: a.max_word_len,
        shear_range: a.shear_range,
        walk_candidates: a.walk_candidates,
        seed: a.seed,
    };
    let rep = gamma_search(&system, &set, &basis, &budget)?;
    let mut report = Report::default();
    report.set("basis", basis.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    report.set("words", strategy_json(&rep.words));
    report.set("guided", strategy_json(&rep.guided));
    if let Some((g0, value)) = &rep.gamma0 {
        report.set("gamma0", json!({ "gamma": MatrixJson::from_matrix(g0.matrix()), "correlation": dec(value.to_f64()) }));
    }
    report.count("words_tried", rep.words.tried);
    report.count("shears_tried", rep.guided.tried);
    report.count("shears_non_integral", rep.guided.non_integral);
    let mut t = Table::new("gamma", &["strategy", "found", "gamma", "value", "error_bound"]);
    for (name, s) in [("words", &rep.words), ("guided", &rep.guided)] {
        match &s.hit {
            Some(h) => t.push(vec![name.into(), "true".into(), h.gamma.to_string(), rat_string(&h.value.value), sci(h.value.err)]),
            None => t.push(vec![name.into(), "false".into(), String::new(), String::new(), String::new()]),
        }
    }
    report.tables.push(t);
    match rep.found() {
        Some(h) => report.set("found", hit_json(h)),
        None => {
            report.set("found", Value::Null);
            report.not_found = true;
        }
    }
    Ok(report)
}
