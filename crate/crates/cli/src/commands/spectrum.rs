use ehrlab::spectra::{density_estimate, ehrhart_spectrum, volume_spectrum, BoxRegion, SpectrumBudget};

use crate::args::{SpectrumArgs, SpectrumKind};
use crate::error::{CliError, CliResult};
use crate::io::{parse_vector, ratio_string, read_json, PointSetJson};
use crate::report::{Report, Table};

pub fn run(a: &SpectrumArgs) -> CliResult<Report> {
    let e = read_json::<PointSetJson>(a.pointset.as_ref())?.to_pointset()?;
    let region = BoxRegion::new(parse_vector(&a.lo)?.into_coords(), parse_vector(&a.hi)?.into_coords())?;
    if region.rank() != e.rank() {
        return Err(ehrlab::Error::DimensionMismatch(format!("box rank {} vs point set rank {}", region.rank(), e.rank())).into());
    }
    if a.max_subsets == 0 {
        return Err(CliError::Precondition("--max-subsets must be positive".into()));
    }
    let budget = SpectrumBudget { max_subsets: a.max_subsets, allow_partial: a.allow_partial, ..Default::default() };
    let mut report = Report::default();
    report.set("kind", match a.kind {
        SpectrumKind::Volume => "volume",
        SpectrumKind::Ehrhart => "ehrhart",
    });
    report.set("points_in_box", e.points_in(&region).len());
    let (complete, examined) = match a.kind {
        SpectrumKind::Volume => {
            let s = volume_spectrum(&e, &region, &budget)?;
            let mut t = Table::new("volume_spectrum", &["rfact_volume"]);
            for v in &s.entries {
                t.push(vec![v.to_string()]);
            }
            report.set("size", s.entries.len());
            report.tables.push(t);
            (s.complete, s.subsets_examined)
        }
        SpectrumKind::Ehrhart => {
            let s = ehrhart_spectrum(&e, &region, &budget)?;
            let degree = e.rank() + 1;
            let header: Vec<String> = (0..degree).map(|k| format!("c{k}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut t = Table::new("ehrhart_spectrum", &header);
            for p in &s.entries {
                t.push(p.coeff_strings());
            }
            report.set("size", s.entries.len());
            report.tables.push(t);
            (s.complete, s.subsets_examined)
        }
    };
    report.set("complete", complete);
    report.count("subsets_examined", examined);
    if let Some(sizes) = &a.density {
        let sizes = sizes
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Parse(format!("bad box size in {sizes:?}"))))
            .collect::<CliResult<Vec<_>>>()?;
        let mut t = Table::new("density", &["size", "density"]);
        for (s, d) in density_estimate(&e, &sizes)? {
            t.push(vec![s.to_string(), ratio_string(&d)]);
        }
        report.tables.push(t);
    }
    Ok(report)
}
