use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lowercase identifier: predicate, symbolic constant, keyword.
    Ident(String),
    /// Uppercase or underscore-led identifier.
    Var(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    If,
    Diamond,
    Box,
    At,
    Hash,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::If => "`:-`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::Box => "`[]`".into(),
            Tok::At => "`@`".into(),
            Tok::Hash => "`#`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Ne => "`!=`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Splits `src` into tokens. `%` starts a comment running to end of line.
/// `line_offset` is added to reported line numbers.
pub(crate) fn lex(src: &str, line_offset: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1 + line_offset, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, width: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                col: start_col,
            });
            *i += width;
            *col += width;
        };
        let next = chars.get(i + 1).copied();
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' if next == Some(']') => push(Tok::Box, 2, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            ':' if next == Some('-') => push(Tok::If, 2, &mut i, &mut col),
            '<' if next == Some('>') => push(Tok::Diamond, 2, &mut i, &mut col),
            '<' if next == Some('=') => push(Tok::Le, 2, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '>' if next == Some('=') => push(Tok::Ge, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '!' if next == Some('=') => push(Tok::Ne, 2, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '@' => push(Tok::At, 1, &mut i, &mut col),
            '#' => push(Tok::Hash, 1, &mut i, &mut col),
            c if c.is_ascii_digit() || (c == '-' && next.is_some_and(|d| d.is_ascii_digit())) => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let v = text.parse::<i64>().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    message: format!("integer `{text}` out of range"),
                })?;
                push(Tok::Int(v), j - i, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let tok = if c.is_ascii_uppercase() || c == '_' {
                    Tok::Var(text)
                } else {
                    Tok::Ident(text)
                };
                push(tok, j - i, &mut i, &mut col);
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s, 0).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn window_tokens() {
        assert_eq!(
            toks("[3 t] <> a(X) [] @[T] [2 #]"),
            vec![
                Tok::LBracket,
                Tok::Int(3),
                Tok::Ident("t".into()),
                Tok::RBracket,
                Tok::Diamond,
                Tok::Ident("a".into()),
                Tok::LParen,
                Tok::Var("X".into()),
                Tok::RParen,
                Tok::Box,
                Tok::At,
                Tok::LBracket,
                Tok::Var("T".into()),
                Tok::RBracket,
                Tok::LBracket,
                Tok::Int(2),
                Tok::Hash,
                Tok::RBracket,
            ]
        );
    }

    #[test]
    fn comparisons_and_comments() {
        assert_eq!(
            toks("V >= -5 % trailing\n, V != 3"),
            vec![
                Tok::Var("V".into()),
                Tok::Ge,
                Tok::Int(-5),
                Tok::Comma,
                Tok::Var("V".into()),
                Tok::Ne,
                Tok::Int(3),
            ]
        );
    }

    #[test]
    fn reports_position() {
        let err = lex("a :-\n  b $", 0).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                col: 5,
                message: "unexpected character `$`".into()
            }
        );
    }
}
