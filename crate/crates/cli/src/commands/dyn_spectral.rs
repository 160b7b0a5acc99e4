use ehrlab::dynamics::{bochner_residual, rational_part_mass, spectral_measure, Mass};

use crate::args::DynSpectralArgs;
use crate::error::CliResult;
use crate::io::{dec, parse_vector, rat_string, sci};
use crate::report::{Report, Table};

pub fn run(a: &DynSpectralArgs) -> CliResult<Report> {
    let (system, set) = super::load_system(&a.sys)?;
    let atoms = spectral_measure(&system, &set, a.truncation)?;
    let rat = rational_part_mass(&atoms);
    let mut report = Report::default();
    report.set("measure", rat_string(&atoms.total));
    report.set("truncation", serde_json::json!(atoms.truncation));
    report.set("atoms", atoms.atoms.len());
    report.set("retained_mass", dec(atoms.retained_mass()));
    report.set("tail", sci(atoms.tail));
    report.set("tail_err", sci(atoms.tail_err));
    report.set("rational_part_mass", rat.exact.as_ref().map_or_else(|| dec(rat.value), rat_string));
    report.set("rational_part_err", sci(rat.err));
    let mut t = Table::new("atoms", &["label", "xi", "mass", "mass_exact", "err", "rational"]);
    for atom in &atoms.atoms {
        let exact = match &atom.mass {
            Mass::Exact(c) => c.to_rational().map_or_else(|| "algebraic".to_string(), |q| rat_string(&q)),
            Mass::Approx { .. } => String::new(),
        };
        let label = atom.label.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        t.push(vec![
            label,
            atom.xi.to_string(),
            dec(atom.mass.to_f64()),
            exact,
            sci(atom.mass.err()),
            atom.xi.is_rational_character().0.to_string(),
        ]);
    }
    report.tables.push(t);
    if let Some(v) = &a.bochner {
        let v = parse_vector(v)?;
        let b = bochner_residual(&system, &set, &atoms, &v)?;
        report.set("bochner_v", v.to_string());
        report.set("bochner_residual", sci(b.residual));
        report.set("bochner_exact_zero", serde_json::json!(b.exact_zero));
        report.set("bochner_bound", sci(b.bound));
    }
    Ok(report)
}
