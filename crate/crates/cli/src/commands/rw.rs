use num_bigint::BigInt;
use num_traits::Zero;

use ehrlab::lattice::Vector;
use ehrlab::random_walk::{upper_pv_density, weyl_equidistribution, GeneratingMeasure};

use crate::args::ExperimentArgs;
use crate::error::{CliError, CliResult};
use crate::io::{dec, ratio_string, read_json, sci, ExperimentJson, MembershipJson};
use crate::report::{Report, Table};

struct Experiment {
    config: ExperimentJson,
    measure: GeneratingMeasure,
    v: Vector<i64>,
    horizon: usize,
    trials: usize,
}

fn load(a: &ExperimentArgs) -> CliResult<Experiment> {
    let config: ExperimentJson = read_json(a.config.as_ref())?;
    if let Some(s) = config.seed {
        if s != a.seed {
            return Err(CliError::Precondition(format!("config seed {s} conflicts with --seed {}", a.seed)));
        }
    }
    let v = Vector::from_i64s(&config.v)?;
    let measure = config.measure.to_measure(v.rank())?;
    let horizon = a.horizon.unwrap_or(config.horizon);
    let trials = a.trials.unwrap_or(config.trials);
    if horizon == 0 || trials == 0 {
        return Err(CliError::Precondition("N and M must be positive".into()));
    }
    Ok(Experiment { config, measure, v, horizon, trials })
}

fn header(report: &mut Report, x: &Experiment) {
    report.set("v", x.v.to_string());
    report.set("N", x.horizon);
    report.set("M", x.trials);
    report.count("trials", x.trials as u64);
    report.count("steps", (x.trials * x.horizon) as u64);
}

pub fn density(a: &ExperimentArgs) -> CliResult<Report> {
    let x = load(a)?;
    let membership: Box<dyn Fn(&Vector<BigInt>) -> bool + Sync> = match &x.config.membership {
        Some(MembershipJson::Hyperplane(normal)) => {
            let n = Vector::<i64>::from_i64s(normal)?;
            n.check_rank(x.v.rank())?;
            let n = n.cast::<BigInt>().expect("i64 fits");
            Box::new(move |w: &Vector<BigInt>| n.dot(w).is_zero())
        }
        Some(MembershipJson::Pointset(p)) => {
            let e = p.to_pointset()?;
            if e.rank() != x.v.rank() {
                return Err(ehrlab::Error::DimensionMismatch("point set rank differs from v".into()).into());
            }
            Box::new(move |w: &Vector<BigInt>| e.contains(w))
        }
        None => return Err(CliError::Parse("rw-density needs a \"membership\" entry".into())),
    };
    let rep = upper_pv_density(&x.measure, &x.v, membership.as_ref(), x.horizon, x.trials, a.seed)?;
    let mut report = Report::default();
    header(&mut report, &x);
    report.set("final_value", ratio_string(&rep.final_value()));
    let mut t = Table::new("density", &["N'", "cesaro_value", "stderr"]);
    for (i, (c, s)) in rep.cesaro.iter().zip(&rep.stderr).enumerate() {
        t.push(vec![(i + 1).to_string(), ratio_string(c), sci(*s)]);
    }
    report.tables.push(t);
    Ok(report)
}

pub fn weyl(a: &ExperimentArgs) -> CliResult<Report> {
    let x = load(a)?;
    let xi = x
        .config
        .xi
        .as_ref()
        .ok_or_else(|| CliError::Parse("rw-weyl needs a \"xi\" character".into()))?
        .to_character()?;
    let rep = weyl_equidistribution(&x.measure, &xi, &x.v, x.horizon, x.trials, a.seed)?;
    let mut report = Report::default();
    header(&mut report, &x);
    report.set("xi", xi.to_string());
    report.set("final_magnitude", dec(*rep.magnitudes.last().expect("N >= 1")));
    report.set("error_bound", sci(rep.error_bound));
    let mut t = Table::new("weyl", &["N'", "magnitude"]);
    for (i, m) in rep.magnitudes.iter().enumerate() {
        t.push(vec![(i + 1).to_string(), dec(*m)]);
    }
    report.tables.push(t);
    Ok(report)
}
