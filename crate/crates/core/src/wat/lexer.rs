use super::WatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    LParen,
    RParen,
    /// Keywords, identifiers (`$x`), numbers, `offset=8` style immediates and
    /// anything else that is not a paren, string or comment.
    Atom,
    Str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset of the first byte.
    pub start: usize,
    /// Byte offset one past the last byte.
    pub end: usize,
    /// 0-based line.
    pub line: usize,
    /// 0-based column in bytes.
    pub col: usize,
}

impl<'a> Token<'a> {
    pub fn is_atom(&self, s: &str) -> bool {
        self.kind == TokenKind::Atom && self.text == s
    }
}

/// Tokenizes wat text, dropping whitespace and comments.
pub fn tokenize(src: &str) -> Result<Vec<Token<'_>>, WatError> {
    Lexer::new(src).run()
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, bytes: src.as_bytes(), pos: 0, line: 0, line_start: 0 }
    }

    fn bump(&mut self) {
        if self.bytes[self.pos] == b'\n' {
            self.line += 1;
            self.line_start = self.pos + 1;
        }
        self.pos += 1;
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn error(&self, message: impl Into<String>) -> WatError {
        WatError::Parse { line: self.line + 1, column: self.pos - self.line_start + 1, message: message.into() }
    }

    fn run(mut self) -> Result<Vec<Token<'a>>, WatError> {
        let mut out = Vec::new();
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            match c {
                b' ' | b'\t' | b'\r' | b'\n' => self.bump(),
                b';' if self.peek_at(1) == Some(b';') => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                b'(' if self.peek_at(1) == Some(b';') => self.block_comment()?,
                b'(' | b')' => {
                    let kind = if c == b'(' { TokenKind::LParen } else { TokenKind::RParen };
                    out.push(self.token(kind, self.pos, self.pos + 1));
                    self.bump();
                }
                b'"' => {
                    let (start, line, col) = (self.pos, self.line, self.pos - self.line_start);
                    self.bump();
                    loop {
                        match self.peek_at(0) {
                            None => return Err(self.error("unterminated string literal")),
                            Some(b'"') => {
                                self.bump();
                                break;
                            }
                            Some(b'\\') => {
                                self.bump();
                                if self.pos < self.bytes.len() {
                                    self.bump();
                                }
                            }
                            Some(b'\n') => return Err(self.error("newline in string literal")),
                            Some(_) => self.bump(),
                        }
                    }
                    out.push(Token { kind: TokenKind::Str, text: &self.src[start..self.pos], start, end: self.pos, line, col });
                }
                _ => {
                    let start = self.pos;
                    let (line, col) = (self.line, self.pos - self.line_start);
                    while let Some(b) = self.peek_at(0) {
                        if matches!(b, b' ' | b'\t' | b'\r' | b'\n' | b'(' | b')' | b'"') {
                            break;
                        }
                        if b == b';' && self.peek_at(1) == Some(b';') {
                            break;
                        }
                        self.bump();
                    }
                    out.push(Token { kind: TokenKind::Atom, text: &self.src[start..self.pos], start, end: self.pos, line, col });
                }
            }
        }
        Ok(out)
    }

    fn token(&self, kind: TokenKind, start: usize, end: usize) -> Token<'a> {
        Token { kind, text: &self.src[start..end], start, end, line: self.line, col: start - self.line_start }
    }

    fn block_comment(&mut self) -> Result<(), WatError> {
        let mut depth = 0usize;
        loop {
            match (self.peek_at(0), self.peek_at(1)) {
                (Some(b'('), Some(b';')) => {
                    depth += 1;
                    self.bump();
                    self.bump();
                }
                (Some(b';'), Some(b')')) => {
                    depth -= 1;
                    self.bump();
                    self.bump();
                    if depth == 0 {
                        return Ok(());
                    }
                }
                (Some(_), _) => self.bump(),
                (None, _) => return Err(self.error("unterminated block comment")),
            }
        }
    }
}

/// True for plain instruction keywords such as `i32.load` or `br_if`.
pub fn is_opcode(atom: &str) -> bool {
    let mut chars = atom.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    if atom == "nan" || atom == "inf" || atom.starts_with("nan:") {
        return false;
    }
    atom.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '.' || c == '_')
}
