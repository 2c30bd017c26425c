use std::collections::BTreeSet;
use std::io::{self, Write};

use lars_core::model::{GroundAtom, Time};

use crate::Format;

/// Writes one record per tick: `t -> a, b` in text mode, one `tick,atom`
/// row per atom in CSV mode.
pub enum Printer<W: Write> {
    Text(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> Printer<W> {
    pub fn new(format: Format, out: W) -> io::Result<Self> {
        Ok(match format {
            Format::Text => Printer::Text(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["tick", "atom"])?;
                Printer::Csv(Box::new(w))
            }
        })
    }

    pub fn tick(&mut self, t: Time, atoms: &BTreeSet<GroundAtom>) -> io::Result<()> {
        let mut names: Vec<String> = atoms.iter().map(|a| a.to_string()).collect();
        names.sort();
        match self {
            Printer::Text(w) => {
                if names.is_empty() {
                    writeln!(w, "{t} ->")?;
                } else {
                    writeln!(w, "{t} -> {}", names.join(", "))?;
                }
                w.flush()
            }
            Printer::Csv(w) => {
                let tick = t.to_string();
                for n in &names {
                    w.write_record([tick.as_str(), n])?;
                }
                w.flush()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lars_core::model::Value;

    fn render(format: Format, ticks: &[(Time, Vec<GroundAtom>)]) -> String {
        let mut buf = Vec::new();
        {
            let mut p = Printer::new(format, &mut buf).unwrap();
            for (t, atoms) in ticks {
                p.tick(*t, &atoms.iter().cloned().collect()).unwrap();
            }
        }
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn text_lines() {
        let q = |x: &str| GroundAtom::new("q", vec![Value::sym(x), Value::Int(10)]);
        let out = render(Format::Text, &[(3, vec![]), (4, vec![q("b"), q("a")])]);
        assert_eq!(out, "3 ->\n4 -> q(a,10), q(b,10)\n");
    }

    #[test]
    fn csv_quotes_atoms() {
        let out = render(
            Format::Csv,
            &[(
                0,
                vec![GroundAtom::new("r", vec![Value::Int(1), Value::Int(2)])],
            )],
        );
        assert_eq!(out, "tick,atom\n0,\"r(1,2)\"\n");
    }
}
