//! Word/command tokenizer for class bodies.
//!
//! A script is a sequence of commands separated by newlines or `;`. A command
//! is a sequence of words: bare words, `{braced}` blocks (verbatim content,
//! nesting counted), `"quoted"` strings and `[bracketed]` substitutions
//! (kept verbatim, never evaluated). `#` at the start of a command comments
//! out the rest of the line.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordKind {
    Bare,
    Braced,
    Quoted,
    Bracketed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub text: String,
    pub kind: WordKind,
    pub line: usize,
    /// Line on which the word's content starts (differs from `line` only for
    /// braced words whose content begins after a newline).
    pub content_line: usize,
}

impl Word {
    pub fn is_bare(&self, s: &str) -> bool {
        self.kind == WordKind::Bare && self.text == s
    }

    pub fn is_option(&self) -> bool {
        self.kind == WordKind::Bare && self.text.starts_with('-')
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub words: Vec<Word>,
    pub line: usize,
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn at_separator(&self) -> bool {
        match self.peek() {
            None => true,
            Some(c) => c.is_whitespace() || c == ';',
        }
    }

    /// Skip blanks within a command; backslash-newline counts as a blank.
    fn skip_blanks(&mut self) {
        loop {
            match self.peek() {
                Some(' ') | Some('\t') | Some('\r') => {
                    self.bump();
                }
                Some('\\') if self.peek_at(1) == Some('\n') => {
                    self.bump();
                    self.bump();
                }
                _ => break,
            }
        }
    }

    fn script(&mut self) -> Result<Vec<Command>> {
        let mut cmds = Vec::new();
        let mut words: Vec<Word> = Vec::new();
        let mut cmd_line = self.line;
        loop {
            self.skip_blanks();
            match self.peek() {
                None => break,
                Some('\n') | Some(';') => {
                    self.bump();
                    if !words.is_empty() {
                        cmds.push(Command {
                            words: std::mem::take(&mut words),
                            line: cmd_line,
                        });
                    }
                }
                Some('#') if words.is_empty() => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        if c == '\\' && self.peek_at(1) == Some('\n') {
                            self.bump();
                        }
                        self.bump();
                    }
                }
                Some(_) => {
                    if words.is_empty() {
                        cmd_line = self.line;
                    }
                    words.push(self.word()?);
                }
            }
        }
        if !words.is_empty() {
            cmds.push(Command {
                words,
                line: cmd_line,
            });
        }
        Ok(cmds)
    }

    fn word(&mut self) -> Result<Word> {
        let line = self.line;
        match self.peek() {
            Some('{') => {
                self.bump();
                let content_line = self.line;
                let mut depth = 1;
                let mut text = String::new();
                loop {
                    let c = self
                        .bump()
                        .ok_or_else(|| perr(line, "missing close-brace"))?;
                    match c {
                        '\\' => {
                            text.push(c);
                            if let Some(n) = self.bump() {
                                text.push(n);
                            }
                            continue;
                        }
                        '{' => depth += 1,
                        '}' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    text.push(c);
                }
                if !self.at_separator() {
                    return Err(perr(self.line, "extra characters after close-brace"));
                }
                Ok(Word {
                    text,
                    kind: WordKind::Braced,
                    line,
                    content_line,
                })
            }
            Some('"') => {
                self.bump();
                let mut text = String::new();
                loop {
                    let c = self.bump().ok_or_else(|| perr(line, "missing close-quote"))?;
                    match c {
                        '"' => break,
                        '\\' => {
                            let n = self.bump().ok_or_else(|| perr(line, "missing close-quote"))?;
                            text.push(match n {
                                'n' => '\n',
                                't' => '\t',
                                'r' => '\r',
                                other => other,
                            });
                        }
                        c => text.push(c),
                    }
                }
                if !self.at_separator() {
                    return Err(perr(self.line, "extra characters after close-quote"));
                }
                Ok(Word {
                    text,
                    kind: WordKind::Quoted,
                    line,
                    content_line: line,
                })
            }
            Some('[') => {
                let mut depth = 0;
                let mut text = String::new();
                loop {
                    let c = self
                        .bump()
                        .ok_or_else(|| perr(line, "missing close-bracket"))?;
                    text.push(c);
                    match c {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        '\\' => {
                            if let Some(n) = self.bump() {
                                text.push(n);
                            }
                        }
                        _ => {}
                    }
                }
                if !self.at_separator() {
                    return Err(perr(self.line, "extra characters after close-bracket"));
                }
                Ok(Word {
                    text,
                    kind: WordKind::Bracketed,
                    line,
                    content_line: line,
                })
            }
            _ => {
                let mut text = String::new();
                while !self.at_separator() {
                    let c = self.bump().expect("not at end");
                    if c == '\\' {
                        if let Some(n) = self.bump() {
                            text.push(n);
                        }
                    } else {
                        text.push(c);
                    }
                }
                Ok(Word {
                    text,
                    kind: WordKind::Bare,
                    line,
                    content_line: line,
                })
            }
        }
    }
}

/// Tokenize `src`, numbering lines from `first_line`.
pub fn tokenize(src: &str, first_line: usize) -> Result<Vec<Command>> {
    let mut lx = Lexer {
        chars: src.chars().collect(),
        pos: 0,
        line: first_line,
        _src: src,
    };
    lx.script()
}
