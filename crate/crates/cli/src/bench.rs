use std::io;

use anyhow::anyhow;
use lars_core::engine::Config;
use lars_core::workload::{measure, EngineKind};

use crate::run::io_failure;
use crate::{BenchArgs, EngineChoice, Failure};

const HEADER: [&str; 7] = [
    "scenario",
    "window",
    "rate",
    "engine",
    "total_s",
    "per_atom_us",
    "firings",
];

pub fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let scenario = args
        .scenario
        .or(args.scenario_name)
        .ok_or_else(|| Failure::Input(anyhow!("missing scenario")))?;
    let engines: Vec<EngineKind> = match args.engine {
        Some(EngineChoice::Incremental) => vec![EngineKind::Incremental],
        Some(EngineChoice::Naive) => vec![EngineKind::Naive],
        None => vec![EngineKind::Incremental, EngineKind::Naive],
    };
    let mut out = csv::Writer::from_writer(io::stdout().lock());
    out.write_record(HEADER)
        .map_err(|e| Failure::Runtime(e.into()))?;
    for &window in &args.windows {
        let program = scenario
            .program(window)
            .map_err(|e| Failure::Input(e.into()))?;
        for &rate in &args.rates {
            let stream = scenario.stream(rate, args.ticks, args.seed);
            for &kind in &engines {
                let m = measure(kind, &program, &stream, Config::default())
                    .map_err(|e| Failure::Runtime(e.into()))?;
                out.write_record([
                    scenario.name().to_string(),
                    window.to_string(),
                    rate.to_string(),
                    kind.name().to_string(),
                    format!("{:.6}", m.total.as_secs_f64()),
                    format!("{:.3}", m.per_atom_us()),
                    m.firings.to_string(),
                ])
                .map_err(|e| Failure::Runtime(e.into()))?;
                out.flush().map_err(io_failure)?;
            }
        }
    }
    Ok(())
}
