use crate::model::{GroundAtom, Stream, StreamBuilder, Time, Timeline};

use super::lexer::{lex, Tok};
use super::{parse_atom_tokens, ParseError};

/// One non-blank line of a stream file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StreamLine {
    Timeline(Timeline),
    Data(Time, Vec<GroundAtom>),
}

/// Parses a single stream line (`line` is 1-based, for diagnostics).
/// Returns `None` for blank and comment-only lines.
pub fn parse_stream_line(text: &str, line: usize) -> Result<Option<StreamLine>, ParseError> {
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("@timeline") {
        let nums: Vec<&str> = rest
            .split('%')
            .next()
            .unwrap_or("")
            .split_whitespace()
            .collect();
        let parsed: Option<Vec<Time>> = nums.iter().map(|s| s.parse().ok()).collect();
        return match parsed.as_deref() {
            Some([lo, hi]) => Timeline::new(*lo, *hi)
                .map(|tl| Some(StreamLine::Timeline(tl)))
                .map_err(|source| ParseError::Stream { line, source }),
            _ => Err(ParseError::MalformedLine {
                line,
                message: "expected `@timeline <start> <end>`".into(),
            }),
        };
    }
    let toks = lex(text, line - 1)?;
    let Some(first) = toks.first() else {
        return Ok(None);
    };
    let tick = match first.tok {
        Tok::Int(i) if i >= 0 => i as Time,
        _ => {
            return Err(ParseError::MalformedLine {
                line,
                message: "expected a non-negative tick".into(),
            })
        }
    };
    let mut atoms = Vec::new();
    let mut pos = 1;
    while pos < toks.len() {
        let (atom, used) = parse_atom_tokens(&toks[pos..])?;
        pos += used;
        match atom.to_ground() {
            Some(g) => atoms.push(g),
            None => {
                return Err(ParseError::NonGroundData {
                    line,
                    atom: atom.to_string(),
                })
            }
        }
    }
    Ok(Some(StreamLine::Data(tick, atoms)))
}

/// Parses a stream file.
///
/// ```text
/// @timeline 35 42
/// 36 a(x1,y)
/// 38 a(x2,y) b(y,z)
/// 40 a(x3,y)
/// ```
///
/// Arrival order is line order, then left to right. Without a header the
/// timeline spans the first to the last tick.
pub fn parse_stream(text: &str) -> Result<Stream, ParseError> {
    let mut builder: Option<StreamBuilder> = None;
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        match parse_stream_line(raw, line)? {
            None => {}
            Some(StreamLine::Timeline(tl)) => {
                if builder.is_some() || seen_data {
                    return Err(ParseError::MalformedLine {
                        line,
                        message: "`@timeline` must precede all data".into(),
                    });
                }
                builder = Some(StreamBuilder::with_timeline(tl));
            }
            Some(StreamLine::Data(t, atoms)) => {
                seen_data = true;
                let b = builder.get_or_insert_with(StreamBuilder::new);
                b.touch(t)
                    .map_err(|source| ParseError::Stream { line, source })?;
                for a in atoms {
                    b.push(t, a)
                        .map_err(|source| ParseError::Stream { line, source })?;
                }
            }
        }
    }
    Ok(match builder {
        Some(b) => b.build(),
        None => Stream::empty(Timeline::new(0, 0).expect("0 <= 0")),
    })
}

/// Parses background data: ground atoms separated by whitespace, commas or
/// periods.
pub fn parse_background(text: &str) -> Result<Vec<GroundAtom>, ParseError> {
    let toks = lex(text, 0)?;
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        if matches!(toks[pos].tok, Tok::Dot | Tok::Comma) {
            pos += 1;
            continue;
        }
        let line = toks[pos].line;
        let (atom, used) = parse_atom_tokens(&toks[pos..])?;
        pos += used;
        match atom.to_ground() {
            Some(g) => out.push(g),
            None => {
                return Err(ParseError::NonGroundData {
                    line,
                    atom: atom.to_string(),
                })
            }
        }
    }
    Ok(out)
}
