//! Recursive-descent parser for the formula text grammar.
//!
//! ```text
//! iff     := implies ("<->" implies)*        left-associative
//! implies := or ("->" implies)?              right-associative
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := ("!" | "not") unary | primary
//! primary := IDENT | "true" | "false" | "(" iff ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::formula::{Atom, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}{}", expected_hint(.expected))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// Tokens that would have been accepted at the error position.
    pub expected: Vec<&'static str>,
}

fn expected_hint(expected: &[&'static str]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!("; expected {}", expected.join(" or "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    True,
    False,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Not => f.write_str("`!`"),
            Tok::And => f.write_str("`&`"),
            Tok::Or => f.write_str("`|`"),
            Tok::Implies => f.write_str("`->`"),
            Tok::Iff => f.write_str("`<->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::True => f.write_str("`true`"),
            Tok::False => f.write_str("`false`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const OPERAND: [&str; 6] = ["atom", "`!`", "`not`", "`(`", "`true`", "`false`"];

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&(start, c)) = chars.peek() {
        let (tok_line, tok_column) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
            let (_, c) = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let tok = match c {
            '!' => {
                advance(&mut chars);
                Tok::Not
            }
            '&' => {
                advance(&mut chars);
                Tok::And
            }
            '|' => {
                advance(&mut chars);
                Tok::Or
            }
            '(' => {
                advance(&mut chars);
                Tok::LParen
            }
            ')' => {
                advance(&mut chars);
                Tok::RParen
            }
            '-' => {
                advance(&mut chars);
                if chars.peek().map(|&(_, c)| c) != Some('>') {
                    return Err(ParseError {
                        line: tok_line,
                        column: tok_column,
                        message: "incomplete operator `-`".into(),
                        expected: vec!["`->`"],
                    });
                }
                advance(&mut chars);
                Tok::Implies
            }
            '<' => {
                advance(&mut chars);
                for want in ['-', '>'] {
                    if chars.peek().map(|&(_, c)| c) != Some(want) {
                        return Err(ParseError {
                            line: tok_line,
                            column: tok_column,
                            message: "incomplete operator `<`".into(),
                            expected: vec!["`<->`"],
                        });
                    }
                    advance(&mut chars);
                }
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = start;
                while let Some(&(i, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        end = i + c.len_utf8();
                        advance(&mut chars);
                    } else {
                        break;
                    }
                }
                match &text[start..end] {
                    "not" => Tok::Not,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    word => Tok::Ident(word.to_string()),
                }
            }
            other => {
                return Err(ParseError {
                    line: tok_line,
                    column: tok_column,
                    message: format!("unexpected character `{other}`"),
                    expected: Vec::new(),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: tok_line,
            column: tok_column,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            message: format!("unexpected {}", here.tok),
            expected: expected.to_vec(),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let first = self.and()?;
        let mut operands = vec![first];
        while *self.peek() == Tok::Or {
            self.bump();
            operands.push(self.and()?);
        }
        Ok(if operands.len() == 1 {
            operands.pop().expect("one operand")
        } else {
            Formula::Or(operands)
        })
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        let mut operands = vec![first];
        while *self.peek() == Tok::And {
            self.bump();
            operands.push(self.unary()?);
        }
        Ok(if operands.len() == 1 {
            operands.pop().expect("one operand")
        } else {
            Formula::And(operands)
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let atom = Atom::new(name).map_err(|e| {
                    let mut err = self.error(&[]);
                    err.message = e.to_string();
                    err
                })?;
                self.bump();
                Ok(Formula::Atom(atom))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`", "binary operator"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(&OPERAND)),
        }
    }
}

/// Parses formula text. Empty or whitespace-only input is an error.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::Eof {
        let mut err = p.error(&OPERAND);
        err.message = "empty formula".into();
        return Err(err);
    }
    let f = p.iff()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["binary operator", "end of input"]));
    }
    Ok(f)
}
