use std::fs;
use std::io;
use std::path::Path;

use anyhow::{anyhow, Context};
use lars_core::engine::Config;
use lars_core::model::{GroundAtom, Stream};
use lars_core::parser::{parse_background, parse_program_with, parse_stream, Consts, Program};

use crate::{Failure, Inputs};

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Input)
}

impl Inputs {
    pub fn config(&self) -> Config {
        Config {
            gc: self.gc,
            ..Config::default()
        }
    }

    pub fn program(&self) -> Result<Program, Failure> {
        let path = self
            .program
            .as_deref()
            .ok_or_else(|| Failure::Input(anyhow!("missing --program")))?;
        let consts: Consts = self.consts.iter().cloned().collect();
        parse_program_with(&read(path)?, &consts)
            .with_context(|| path.display().to_string())
            .map_err(Failure::Input)
    }

    pub fn background(&self) -> Result<Vec<GroundAtom>, Failure> {
        match &self.background {
            None => Ok(Vec::new()),
            Some(path) => parse_background(&read(path)?)
                .with_context(|| path.display().to_string())
                .map_err(Failure::Input),
        }
    }

    /// The whole stream, from the file or from standard input.
    pub fn stream(&self) -> Result<Stream, Failure> {
        match (&self.stream, self.stdin) {
            (Some(path), _) => parse_stream(&read(path)?)
                .with_context(|| path.display().to_string())
                .map_err(Failure::Input),
            (None, true) => {
                let text = io::read_to_string(io::stdin().lock())
                    .context("cannot read standard input")
                    .map_err(Failure::Input)?;
                parse_stream(&text)
                    .context("<stdin>")
                    .map_err(Failure::Input)
            }
            (None, false) => Err(Failure::Input(anyhow!("missing --stream or --stdin"))),
        }
    }
}

/// Input atoms over intensional predicates are rejected by both
/// evaluators alike.
pub fn reject_intensional<'a>(
    program: &Program,
    atoms: impl IntoIterator<Item = &'a GroundAtom>,
) -> Result<(), Failure> {
    for a in atoms {
        if program.is_intensional(&a.predicate) {
            return Err(Failure::Runtime(anyhow!(
                "input atom `{a}` has an intensional predicate"
            )));
        }
    }
    Ok(())
}
