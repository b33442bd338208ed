use std::fmt;

use super::{FreeWord, Presentation, WordsError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor {
    chars: Vec<(usize, usize, char)>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        let mut chars = Vec::new();
        let (mut line, mut col) = (1, 1);
        for c in src.chars() {
            chars.push((line, col, c));
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Cursor { chars, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].2.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.2)
    }

    fn location(&self) -> (usize, usize) {
        match self.chars.get(self.pos) {
            Some(&(l, c, _)) => (l, c),
            None => match self.chars.last() {
                Some(&(l, _, ch)) if ch == '\n' => (l + 1, 1),
                Some(&(l, c, _)) => (l, c + 1),
                None => (1, 1),
            },
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.location();
        ParseError { line, column, message: message.into() }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return Err(self.error(format!("expected a generator name, found `{c}`"))),
            None => return Err(self.error("expected a generator name, found end of input")),
        }
        let mut s = String::new();
        while let Some(&(_, _, c)) = self.chars.get(self.pos) {
            if c.is_ascii_alphanumeric() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(s)
    }

    fn signed_integer(&mut self) -> Result<i64, ParseError> {
        let parenthesized = self.peek() == Some('(');
        if parenthesized {
            self.pos += 1;
        }
        let start = self.location();
        let mut s = String::new();
        if let Some(c @ ('-' | '+')) = self.peek() {
            s.push(c);
            self.pos += 1;
        }
        self.skip_ws();
        while let Some(&(_, _, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                s.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        let value = s.parse::<i64>().map_err(|_| ParseError {
            line: start.0,
            column: start.1,
            message: format!("expected an integer exponent, found `{s}`"),
        })?;
        if parenthesized {
            self.expect(')')?;
        }
        Ok(value)
    }

    fn word(&mut self) -> Result<(FreeWord, Vec<(String, (usize, usize))>), ParseError> {
        let mut pairs = Vec::new();
        let mut names = Vec::new();
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok((FreeWord::identity(), names));
        }
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = self.location();
                    let name = self.name()?;
                    let exponent = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.signed_integer()?
                    } else {
                        1
                    };
                    names.push((name.clone(), at));
                    pairs.push((name, exponent));
                }
                _ => break,
            }
        }
        if pairs.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.error(format!("expected a word, found `{c}`")),
                None => self.error("expected a word, found end of input"),
            });
        }
        Ok((FreeWord::from_syllables(pairs), names))
    }
}

/// Parses `<a, t | t a t^-1 = a^2>`. A relation `r = s` becomes the relator
/// `r s^-1`.
pub fn parse_presentation(text: &str) -> Result<Presentation, WordsError> {
    let mut cur = Cursor::new(text);
    cur.expect('<')?;
    let mut generators: Vec<String> = Vec::new();
    loop {
        let g = cur.name()?;
        if generators.contains(&g) {
            return Err(WordsError::DuplicateGenerator(g));
        }
        generators.push(g);
        if cur.peek() == Some(',') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    cur.expect('|')?;
    let mut relators = Vec::new();
    if cur.peek() != Some('>') {
        loop {
            let (lhs, mut used) = cur.word()?;
            let relator = if cur.peek() == Some('=') {
                cur.pos += 1;
                let (rhs, more) = cur.word()?;
                used.extend(more);
                lhs.multiply(&rhs.invert())
            } else {
                lhs
            };
            if let Some((name, _)) = used.iter().find(|(n, _)| !generators.contains(n)) {
                return Err(WordsError::UnknownGenerator(name.clone()));
            }
            relators.push(relator);
            if cur.peek() == Some(',') {
                cur.pos += 1;
            } else {
                break;
            }
        }
    }
    cur.expect('>')?;
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected trailing input `{c}`")).into());
    }
    Presentation::new(generators, relators)
}

/// Parses a single word such as `t a^-2 t^-1`.
pub fn parse_word(text: &str) -> Result<FreeWord, ParseError> {
    let mut cur = Cursor::new(text);
    let (w, _) = cur.word()?;
    if let Some(c) = cur.peek() {
        return Err(cur.error(format!("unexpected trailing input `{c}`")));
    }
    Ok(w)
}
