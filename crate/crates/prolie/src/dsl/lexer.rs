use super::DslError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Newline,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

// Longest match first.
const SYMBOLS: &[&str] = &[
    "+=", "==", "<=", ">=", "(", ")", "[", "]", ",", "=", "+", "-", "*", "/", "%", "<", ">",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    col,
                });
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text.parse::<i64>().map_err(|_| DslError::Syntax {
                    line: line_no,
                    col,
                    expected: vec!["an integer that fits in 64 bits".into()],
                    found: format!("`{text}`"),
                })?;
                out.push(Token {
                    tok: Tok::Int(n),
                    line: line_no,
                    col,
                });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(Token {
                        tok: Tok::Sym(s),
                        line: line_no,
                        col,
                    });
                    i += s.len();
                }
                None => {
                    return Err(DslError::Syntax {
                        line: line_no,
                        col,
                        expected: vec!["a name, number or operator".into()],
                        found: format!("`{c}`"),
                    })
                }
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line: line_no,
            col: chars.len() + 1,
        });
    }
    let line = src.lines().count().max(1);
    out.push(Token {
        tok: Tok::Eof,
        line,
        col: src.lines().last().map_or(1, |l| l.chars().count() + 1),
    });
    Ok(out)
}
