//! Tokenizer shared by the model, bindings and instantiation-spec formats.

use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Arrow,
    FatArrow,
    Eq,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Str(s) => write!(f, "string {s:?}"),
            TokenKind::LBrace => f.write_str("`{`"),
            TokenKind::RBrace => f.write_str("`}`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Colon => f.write_str("`:`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::Dot => f.write_str("`.`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::FatArrow => f.write_str("`=>`"),
            TokenKind::Eq => f.write_str("`=`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `src` into tokens. `//` starts a comment running to end of line.
/// Identifiers may contain single hyphens between letters (`appl-class`).
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let single = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            ':' => Some(TokenKind::Colon),
            ',' => Some(TokenKind::Comma),
            '.' => Some(TokenKind::Dot),
            _ => None,
        };
        if let Some(kind) = single {
            bump!();
            out.push(Token { kind, pos });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump!();
            bump!();
            out.push(Token {
                kind: TokenKind::Arrow,
                pos,
            });
            continue;
        }
        if c == '=' {
            bump!();
            let kind = if i < chars.len() && chars[i] == '>' {
                bump!();
                TokenKind::FatArrow
            } else {
                TokenKind::Eq
            };
            out.push(Token { kind, pos });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                if i >= chars.len() || chars[i] == '\n' {
                    return Err(ParseError::new(pos, "closing `\"`", "end of line"));
                }
                match chars[i] {
                    '"' => {
                        bump!();
                        break;
                    }
                    '\\' => {
                        let esc_pos = Pos { line, column: col };
                        bump!();
                        let e = chars.get(i).copied();
                        match e {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            other => {
                                let found = other
                                    .map(|c| format!("`\\{c}`"))
                                    .unwrap_or_else(|| "end of input".into());
                                return Err(ParseError::new(esc_pos, "escape sequence", found));
                            }
                        }
                        bump!();
                    }
                    ch => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token {
                kind: TokenKind::Str(s),
                pos,
            });
            continue;
        }
        if is_ident_start(c) {
            let mut s = String::new();
            loop {
                while i < chars.len() && is_ident_char(chars[i]) {
                    s.push(chars[i]);
                    bump!();
                }
                let hyphen_word =
                    i + 1 < chars.len() && chars[i] == '-' && chars[i + 1].is_ascii_alphabetic();
                if hyphen_word {
                    s.push('-');
                    bump!();
                } else {
                    break;
                }
            }
            out.push(Token {
                kind: TokenKind::Ident(s),
                pos,
            });
            continue;
        }
        return Err(ParseError::new(pos, "token", format!("`{c}`")));
    }
    // End of input is reported on the last line that has content.
    let eof = if col == 1 && line > 1 {
        let prev = src.trim_end_matches('\n').lines().last().unwrap_or("");
        let line = src.trim_end_matches('\n').lines().count().max(1);
        Pos {
            line,
            column: prev.chars().count() + 1,
        }
    } else {
        Pos { line, column: col }
    };
    out.push(Token {
        kind: TokenKind::Eof,
        pos: eof,
    });
    Ok(out)
}

/// Cursor over a token list.
pub struct Cursor {
    tokens: Vec<Token>,
    at: usize,
}

impl Cursor {
    pub fn new(tokens: Vec<Token>) -> Self {
        Self { tokens, at: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.at.min(self.tokens.len() - 1)]
    }

    pub fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    pub fn peek_nth(&self, n: usize) -> &TokenKind {
        &self.tokens[(self.at + n).min(self.tokens.len() - 1)].kind
    }

    pub fn pos(&self) -> Pos {
        self.peek().pos
    }

    /// Whether the current token is the first on its line.
    pub fn starts_line(&self) -> bool {
        self.at == 0 || self.tokens[self.at - 1].pos.line < self.peek().pos.line
    }

    /// Current offset, for [`Cursor::rewind`].
    pub fn checkpoint(&self) -> usize {
        self.at
    }

    pub fn rewind(&mut self, at: usize) {
        self.at = at;
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek_kind(), TokenKind::Eof)
    }

    pub fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if !self.at_eof() {
            self.at += 1;
        }
        t
    }

    pub fn is(&self, kind: &TokenKind) -> bool {
        self.peek_kind() == kind
    }

    pub fn is_word(&self, word: &str) -> bool {
        matches!(self.peek_kind(), TokenKind::Ident(s) if s == word)
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.is(kind) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn eat_word(&mut self, word: &str) -> bool {
        if self.is_word(word) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn error(&self, expected: impl Into<String>) -> ParseError {
        ParseError::new(self.pos(), expected, self.peek_kind().to_string())
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<Pos, ParseError> {
        if self.is(kind) {
            Ok(self.advance().pos)
        } else {
            Err(self.error(kind.to_string()))
        }
    }

    pub fn expect_word(&mut self, word: &str) -> Result<Pos, ParseError> {
        if self.is_word(word) {
            Ok(self.advance().pos)
        } else {
            Err(self.error(format!("`{word}`")))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.peek_kind().clone() {
            TokenKind::Ident(s) => {
                let pos = self.advance().pos;
                Ok((s, pos))
            }
            _ => Err(self.error(what)),
        }
    }

    pub fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek_kind().clone() {
            TokenKind::Str(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn hyphenated_identifiers_are_single_tokens() {
        assert_eq!(
            kinds("appl-class a->b x=>y"),
            vec![
                TokenKind::Ident("appl-class".into()),
                TokenKind::Ident("a".into()),
                TokenKind::Arrow,
                TokenKind::Ident("b".into()),
                TokenKind::Ident("x".into()),
                TokenKind::FatArrow,
                TokenKind::Ident("y".into()),
                TokenKind::Eof
            ]
        );
    }

    #[test]
    fn comments_and_positions() {
        let toks = tokenize("// c\n  model M").unwrap();
        assert_eq!(toks[0].pos, Pos { line: 2, column: 3 });
        assert_eq!(toks[1].pos, Pos { line: 2, column: 9 });
    }

    #[test]
    fn strings_unescape() {
        assert_eq!(kinds(r#""a\"b\\c""#)[0], TokenKind::Str("a\"b\\c".into()));
        assert!(tokenize("\"open").is_err());
        assert!(tokenize("@").is_err());
    }
}
