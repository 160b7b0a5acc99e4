//! One module per subcommand; each turns parsed arguments into a [`Report`].

mod components;
mod dyn_cesaro;
mod dyn_corr;
mod dyn_cset;
mod dyn_gamma;
mod dyn_spectral;
mod ehrhart;
mod haystack;
mod proximal;
mod rw;
mod spectrum;
mod witness;

use crate::args::{Command, SystemArgs};
use crate::error::CliResult;
use crate::io::{read_json, SetJson, SystemJson};
use crate::report::Report;

use ehrlab::dynamics::{MeasurableSet, System};

pub fn dispatch(command: &Command) -> CliResult<Report> {
    match command {
        Command::Ehrhart(a) => ehrhart::run(a),
        Command::Spectrum(a) => spectrum::run(a),
        Command::Witness(a) => witness::run(a),
        Command::Haystack(a) => haystack::run(a),
        Command::RwDensity(a) => rw::density(a),
        Command::RwWeyl(a) => rw::weyl(a),
        Command::Proximal(a) => proximal::run(a),
        Command::DynCorr(a) => dyn_corr::run(a),
        Command::DynSpectral(a) => dyn_spectral::run(a),
        Command::DynCesaro(a) => dyn_cesaro::run(a),
        Command::DynCset(a) => dyn_cset::run(a),
        Command::DynGamma(a) => dyn_gamma::run(a),
        Command::Components(a) => components::run(a),
    }
}

pub(crate) fn load_system(a: &SystemArgs) -> CliResult<(System, MeasurableSet)> {
    let system = read_json::<SystemJson>(a.system.as_ref())?.to_system()?;
    let set = read_json::<SetJson>(a.set.as_ref())?.to_set(&system)?;
    Ok((system, set))
}
