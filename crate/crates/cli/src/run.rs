use std::io::{self, BufRead, Write};

use anyhow::{anyhow, Context};
use lars_core::engine::{Engine, Telemetry};
use lars_core::model::{GroundAtom, Time, Timeline};
use lars_core::oracle::{output_stream_naive, Background};
use lars_core::parser::{parse_stream_line, Program, StreamLine};

use crate::inputs::reject_intensional;
use crate::output::Printer;
use crate::{EngineChoice, Failure, RunArgs};

pub fn run(args: &RunArgs) -> Result<(), Failure> {
    let program = args.inputs.program()?;
    let background = args.inputs.background()?;
    let stdout = io::stdout().lock();
    let mut printer = Printer::new(args.format, stdout).map_err(io_failure)?;

    if args.engine == EngineChoice::Incremental && args.inputs.stdin && args.inputs.stream.is_none()
    {
        let mut session = Session {
            program: &program,
            background,
            args,
            engine: None,
            timeline: None,
            pending: None,
        };
        return session.follow(io::stdin().lock(), &mut printer);
    }

    let stream = args.inputs.stream()?;
    reject_intensional(&program, stream.entries().map(|(_, a, _)| a))?;
    let tl = stream.timeline();
    match args.engine {
        EngineChoice::Incremental => {
            let mut engine = Engine::new(&program, background, tl.start(), args.inputs.config())
                .map_err(runtime)?;
            for t in tl.points() {
                let out = engine.tick(t, stream.eval(t).cloned()).map_err(runtime)?;
                if args.telemetry {
                    report(t, &engine.telemetry());
                }
                printer.tick(t, &out).map_err(io_failure)?;
            }
        }
        EngineChoice::Naive => {
            if args.telemetry {
                eprintln!("note: the naive evaluator keeps no telemetry");
            }
            let bg: Background = background.into_iter().collect();
            let out = output_stream_naive(&program, &stream, &bg).map_err(runtime)?;
            for (t, atoms) in &out {
                printer.tick(*t, atoms).map_err(io_failure)?;
            }
        }
    }
    Ok(())
}

/// Incremental evaluation of a stream arriving line by line. Lines of the
/// same tick are merged; a tick is evaluated once a later one shows up or
/// the input ends.
struct Session<'a> {
    program: &'a Program,
    background: Vec<GroundAtom>,
    args: &'a RunArgs,
    engine: Option<Engine>,
    timeline: Option<Timeline>,
    pending: Option<(Time, Vec<GroundAtom>)>,
}

impl Session<'_> {
    fn follow<W: Write>(
        &mut self,
        input: impl BufRead,
        printer: &mut Printer<W>,
    ) -> Result<(), Failure> {
        for (i, line) in input.lines().enumerate() {
            let line = line
                .context("cannot read standard input")
                .map_err(Failure::Input)?;
            let parsed = parse_stream_line(&line, i + 1)
                .context("<stdin>")
                .map_err(Failure::Input)?;
            match parsed {
                None => {}
                Some(StreamLine::Timeline(tl)) => {
                    if self.engine.is_some() || self.pending.is_some() || self.timeline.is_some() {
                        return Err(Failure::Input(anyhow!(
                            "<stdin>: line {}: `@timeline` must precede all data",
                            i + 1
                        )));
                    }
                    self.timeline = Some(tl);
                }
                Some(StreamLine::Data(t, atoms)) => {
                    if let Some(tl) = self.timeline.filter(|tl| !tl.contains(t)) {
                        return Err(Failure::Input(anyhow!(
                            "<stdin>: line {}: tick {t} lies outside the timeline {tl}",
                            i + 1
                        )));
                    }
                    reject_intensional(self.program, &atoms)?;
                    match &mut self.pending {
                        Some((p, buf)) if *p == t => buf.extend(atoms),
                        Some((p, _)) if *p > t => {
                            return Err(Failure::Input(anyhow!(
                                "<stdin>: line {}: tick {t} arrives after tick {p}",
                                i + 1
                            )))
                        }
                        _ => {
                            self.flush(printer)?;
                            self.advance(t.saturating_sub(1), printer)?;
                            self.pending = Some((t, atoms));
                        }
                    }
                }
            }
        }
        self.flush(printer)?;
        if let Some(tl) = self.timeline {
            self.advance(tl.end(), printer)?;
        }
        Ok(())
    }

    fn engine(&mut self, first: Time) -> Result<&mut Engine, Failure> {
        if self.engine.is_none() {
            let start = self.timeline.map_or(first, |tl| tl.start());
            let bg = std::mem::take(&mut self.background);
            let e =
                Engine::new(self.program, bg, start, self.args.inputs.config()).map_err(runtime)?;
            self.engine = Some(e);
        }
        Ok(self.engine.as_mut().expect("just set"))
    }

    fn step<W: Write>(
        &mut self,
        t: Time,
        atoms: Vec<GroundAtom>,
        printer: &mut Printer<W>,
    ) -> Result<(), Failure> {
        let telemetry = self.args.telemetry;
        let engine = self.engine(t)?;
        let out = engine.tick(t, atoms).map_err(runtime)?;
        if telemetry {
            report(t, &engine.telemetry());
        }
        printer.tick(t, &out).map_err(io_failure)
    }

    fn flush<W: Write>(&mut self, printer: &mut Printer<W>) -> Result<(), Failure> {
        match self.pending.take() {
            Some((t, atoms)) => {
                self.advance(t.saturating_sub(1), printer)?;
                self.step(t, atoms, printer)
            }
            None => Ok(()),
        }
    }

    /// Evaluates every tick without input up to and including `until`.
    fn advance<W: Write>(&mut self, until: Time, printer: &mut Printer<W>) -> Result<(), Failure> {
        let next = match (&self.engine, self.timeline) {
            (Some(e), _) => e.now().map_or(0, |t| t + 1),
            (None, Some(tl)) => tl.start(),
            (None, None) => return Ok(()),
        };
        for t in next..=until {
            self.step(t, Vec::new(), printer)?;
        }
        Ok(())
    }
}

fn report(t: Time, m: &Telemetry) {
    eprintln!(
        "tick={t} firings={} grd={} db={} data={} expired={} collected={}",
        m.firings, m.grd_calls, m.db_size, m.data_size, m.expired, m.collected
    );
}

fn runtime(e: impl std::error::Error + Send + Sync + 'static) -> Failure {
    Failure::Runtime(e.into())
}

pub fn io_failure(e: io::Error) -> Failure {
    Failure::Runtime(e.into())
}
