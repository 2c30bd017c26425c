use std::ops::Range;

use lars_core::engine::{Config, EngineError};
use lars_core::oracle::Background;
use lars_core::workload::{
    differential, random_instance, CheckError, Divergence, Instance, Limits,
};

use crate::inputs::reject_intensional;
use crate::{CheckArgs, Failure};

pub fn check(args: &CheckArgs) -> Result<(), Failure> {
    let config = Config {
        ssne: !args.no_ssne,
        ..args.inputs.config()
    };
    if let Some(seeds) = &args.fuzz {
        return fuzz(seeds.clone(), config);
    }
    let program = args.inputs.program()?;
    let background: Background = args.inputs.background()?.into_iter().collect();
    let stream = args.inputs.stream()?;
    reject_intensional(&program, stream.entries().map(|(_, a, _)| a))?;
    match differential(&program, &stream, &background, config).map_err(failure)? {
        None => {
            println!("ok: {} ticks agree", stream.timeline().len());
            Ok(())
        }
        Some(d) => {
            println!("{d}");
            Err(Failure::Divergence)
        }
    }
}

fn fuzz(seeds: Range<u64>, config: Config) -> Result<(), Failure> {
    let (mut agreed, mut skipped) = (0u64, 0u64);
    for seed in seeds {
        let inst = random_instance(seed, Limits::default());
        match differential(&inst.program, &inst.stream, &inst.background, config) {
            Ok(None) => agreed += 1,
            Err(CheckError::Engine(EngineError::CollectWithBareAt)) => skipped += 1,
            Ok(Some(d)) => {
                report(seed, &inst, &d);
                return Err(Failure::Divergence);
            }
            Err(e) => {
                println!("seed {seed}: {e}\n{}", inst.source);
                return Err(failure(e));
            }
        }
    }
    println!("ok: {agreed} instances agree, {skipped} skipped");
    Ok(())
}

fn report(seed: u64, inst: &Instance, d: &Divergence) {
    println!("seed {seed}: {d}");
    println!("program:\n{}", inst.source);
    println!("stream:\n{}", inst.stream);
    let mut bg: Vec<String> = inst.background.iter().map(|a| a.to_string()).collect();
    bg.sort();
    println!("background: {}", bg.join(" "));
}

fn failure(e: CheckError) -> Failure {
    Failure::Runtime(e.into())
}
