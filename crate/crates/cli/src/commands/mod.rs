mod dioph;
mod expsum;
mod fejer;
mod orbit;
mod report;
mod sublinear;
mod transport;
mod vinogradov;
mod weyl;

use anyhow::Result;

use crate::args::{Cli, Command};
use crate::output::Outcome;

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Orbit(a) => orbit::run(a),
        Command::Expsum(a) => expsum::run(a),
        Command::Weyl(a) => weyl::run(a),
        Command::Vinogradov(a) => vinogradov::run(a),
        Command::Fejer(a) => fejer::run(a),
        Command::Sublinear(a) => sublinear::run(a, cli.seed),
        Command::Transport(a) => transport::run(a),
        Command::Dioph(a) => dioph::run(a),
        Command::Report(a) => report::run(a),
    }
}
