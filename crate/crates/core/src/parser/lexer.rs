use crate::syntax::Span;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(f64),
    /// A numeric literal with an `i` suffix.
    Imag(f64),
    Backslash,
    Dot,
    Comma,
    Lt,
    Gt,
    TopIntro,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Semi,
    Arrow,
    Lolli,
    PlusPlus,
    At,
    Star,
    Plus,
    Minus,
    Slash,
    Amp,
    Colon,
    Eq,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(x) => write!(f, "`{x}`"),
            Tok::Imag(x) => write!(f, "`{x}i`"),
            Tok::Eof => write!(f, "end of input"),
            t => {
                let s = match t {
                    Tok::Backslash => "\\",
                    Tok::Dot => ".",
                    Tok::Comma => ",",
                    Tok::Lt => "<",
                    Tok::Gt => ">",
                    Tok::TopIntro => "<>",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::Semi => ";",
                    Tok::Arrow => "->",
                    Tok::Lolli => "-o",
                    Tok::PlusPlus => "++",
                    Tok::At => "@",
                    Tok::Star => "*",
                    Tok::Plus => "+",
                    Tok::Minus => "-",
                    Tok::Slash => "/",
                    Tok::Amp => "&",
                    Tok::Colon => ":",
                    Tok::Eq => "=",
                    _ => unreachable!(),
                };
                write!(f, "`{s}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<Token>, (String, Span)> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let at = |j: usize| chars.get(j).copied();
        let tok = if c.is_ascii_digit() {
            while at(i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            if at(i) == Some('.') && at(i + 1).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
                while at(i).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1;
                }
            }
            if matches!(at(i), Some('e' | 'E')) {
                let sign = usize::from(matches!(at(i + 1), Some('+' | '-')));
                if at(i + 1 + sign).is_some_and(|c| c.is_ascii_digit()) {
                    i += 1 + sign;
                    while at(i).is_some_and(|c| c.is_ascii_digit()) {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let x: f64 = text.parse().map_err(|_| {
                (
                    format!("bad number `{text}`"),
                    Span {
                        line,
                        col_start: col,
                        col_end: col + i - start,
                    },
                )
            })?;
            if at(i) == Some('i') && !at(i + 1).is_some_and(ident_char) {
                i += 1;
                Tok::Imag(x)
            } else {
                Tok::Num(x)
            }
        } else if c.is_alphabetic() || c == '_' {
            while at(i).is_some_and(ident_char) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '\\' | 'λ' => Tok::Backslash,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '<' if at(i) == Some('>') => {
                    i += 1;
                    Tok::TopIntro
                }
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ';' => Tok::Semi,
                '-' if at(i) == Some('>') => {
                    i += 1;
                    Tok::Arrow
                }
                '-' if at(i) == Some('o') && !at(i + 1).is_some_and(ident_char) => {
                    i += 1;
                    Tok::Lolli
                }
                '-' => Tok::Minus,
                '+' if at(i) == Some('+') => {
                    i += 1;
                    Tok::PlusPlus
                }
                '+' => Tok::Plus,
                '@' => Tok::At,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '&' => Tok::Amp,
                ':' => Tok::Colon,
                '=' => Tok::Eq,
                _ => {
                    return Err((
                        format!("unexpected character `{c}`"),
                        Span {
                            line,
                            col_start: col,
                            col_end: col + 1,
                        },
                    ))
                }
            }
        };
        let width = i - start;
        out.push(Token {
            tok,
            span: Span {
                line,
                col_start: col,
                col_end: col + width,
            },
        });
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span {
            line,
            col_start: col,
            col_end: col,
        },
    });
    Ok(out)
}
