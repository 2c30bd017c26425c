//! Fuzz entry points. Each takes arbitrary bytes, must never panic on
//! malformed input, and panics when an internal invariant breaks.

use crate::engine::{Config, EngineError};
use crate::model::Stream;
use crate::parser::{
    parse_background, parse_program, parse_program_with, parse_stream, Consts, Program,
};
use crate::workload::{differential, CheckError};

/// Separates program text from stream text in [`engine_vs_oracle`] inputs.
pub const SEPARATOR: &str = "\n---\n";

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

/// Parses a program; accepted programs must print back to themselves.
pub fn program(data: &[u8]) {
    let Some(src) = text(data) else { return };
    let consts: Consts = [("n".to_string(), 3)].into();
    if let Ok(p) = parse_program(src).or_else(|_| parse_program_with(src, &consts)) {
        let printed: Vec<String> = p.rules.iter().map(|r| r.to_string()).collect();
        let again = parse_program(&printed.join("\n")).expect("printed program reparses");
        assert_eq!(again, p, "round trip of {src:?}");
    }
}

/// Parses a stream; accepted streams must print back to themselves.
pub fn stream(data: &[u8]) {
    let Some(src) = text(data) else { return };
    if let Ok(s) = parse_stream(src) {
        let again = parse_stream(&s.to_string()).expect("printed stream reparses");
        assert_eq!(again, s, "round trip of {src:?}");
    }
}

pub fn background(data: &[u8]) {
    let Some(src) = text(data) else { return };
    if let Ok(atoms) = parse_background(src) {
        let printed: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        assert_eq!(
            parse_background(&printed.join(" ")).expect("printed atoms reparse"),
            atoms
        );
    }
}

fn small(p: &Program, s: &Stream) -> bool {
    p.rules.len() <= 6
        && s.timeline().len() <= 16
        && s.tuple_size() <= 40
        && p.max_time_window() <= 8
        && p.max_tuple_window() <= 8
}

/// Runs the engine against the oracle on inputs holding a program, then
/// [`SEPARATOR`], then a stream.
pub fn engine_vs_oracle(data: &[u8]) {
    let Some(src) = text(data) else { return };
    let Some((prog, data)) = src.split_once(SEPARATOR) else {
        return;
    };
    let (Ok(p), Ok(s)) = (parse_program(prog), parse_stream(data)) else {
        return;
    };
    if !small(&p, &s) {
        return;
    }
    for config in [
        Config::default(),
        Config {
            ssne: false,
            gc: false,
        },
    ] {
        match differential(&p, &s, &Default::default(), config) {
            Ok(None) | Err(CheckError::Engine(EngineError::IntensionalInput(_))) => {}
            Ok(Some(d)) => panic!("{d}\nprogram:\n{prog}\nstream:\n{s}"),
            Err(e) => panic!("{e}\nprogram:\n{prog}\nstream:\n{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn corpus(target: &str) -> Vec<Vec<u8>> {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../../fuzz/corpus")
            .join(target);
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
            .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
            .map(|e| e.unwrap().path())
            .collect();
        files.sort();
        assert!(!files.is_empty(), "{target} corpus is empty");
        files.iter().map(|f| std::fs::read(f).unwrap()).collect()
    }

    #[test]
    fn seeds_pass() {
        type Target = (&'static str, fn(&[u8]));
        let targets: [Target; 4] = [
            ("parse_program", program),
            ("parse_stream", stream),
            ("parse_background", background),
            ("engine_vs_oracle", engine_vs_oracle),
        ];
        for (name, run) in targets {
            for seed in corpus(name) {
                run(&seed);
            }
        }
    }

    #[test]
    fn garbage_is_ignored() {
        for data in [
            &b"\xff\xfe"[..],
            b"",
            b"q(X :- .",
            b"@timeline 5 1",
            b"--- \n---\n",
            b"3 a(X)",
        ] {
            program(data);
            stream(data);
            background(data);
            engine_vs_oracle(data);
        }
    }
}
