use std::iter::Peekable;
use std::str::Chars;

use super::{AtomTable, Program, Rule};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Tilde,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: Peekable<Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, column) = (self.line, self.column);
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '%' => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    continue;
                }
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '~' => {
                    self.bump();
                    Tok::Tilde
                }
                ':' => {
                    self.bump();
                    if self.chars.peek() == Some(&'-') {
                        self.bump();
                        Tok::Neck
                    } else {
                        return Err(syntax(line, column, "expected `:-`"));
                    }
                }
                c if c.is_ascii_alphanumeric() || c == '_' => {
                    let mut ident = String::new();
                    while let Some(&c) = self.chars.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                            ident.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(ident)
                }
                other => {
                    return Err(syntax(line, column, &format!("unexpected character `{other}`")));
                }
            };
            out.push(Token { tok, line, column });
        }
        Ok(out)
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Literal {
    atom: String,
    negated: bool,
}

struct Statement {
    head: String,
    body: Vec<Literal>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    // position reported for "unexpected end of input"
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn next(&mut self, expected: &str) -> Result<Token> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(syntax(
                self.end.0,
                self.end.1,
                &format!("unexpected end of input, expected {expected}"),
            )),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Token> {
        let t = self.next(expected)?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(unexpected(&t, expected))
        }
    }

    fn statements(&mut self) -> Result<Vec<Statement>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Result<Statement> {
        let head = self.atom()?;
        let t = self.next("`:-` or `.`")?;
        let mut body = Vec::new();
        match t.tok {
            Tok::Dot => {}
            Tok::Neck => loop {
                body.push(self.literal()?);
                let sep = self.next("`,` or `.`")?;
                match sep.tok {
                    Tok::Comma => continue,
                    Tok::Dot => break,
                    _ => return Err(unexpected(&sep, "`,` or `.`")),
                }
            },
            _ => return Err(unexpected(&t, "`:-` or `.`")),
        }
        Ok(Statement { head, body })
    }

    fn literal(&mut self) -> Result<Literal> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Literal {
                    atom: self.atom()?,
                    negated: true,
                })
            }
            Some(Tok::Ident(s))
                if s == "not" && matches!(self.peek_at(1).map(|t| &t.tok), Some(Tok::Ident(_))) =>
            {
                self.pos += 1;
                Ok(Literal {
                    atom: self.atom()?,
                    negated: true,
                })
            }
            _ => Ok(Literal {
                atom: self.atom()?,
                negated: false,
            }),
        }
    }

    fn atom(&mut self) -> Result<String> {
        let t = self.next("an atom")?;
        let name = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(unexpected(&t, "an atom")),
        };
        check_ground(&t, &name)?;
        if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(syntax(
                t.line,
                t.column,
                &format!("atom `{name}` must start with a lowercase letter"),
            ));
        }
        let mut out = name;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen)) {
            self.args(&mut out)?;
        }
        Ok(out)
    }

    fn args(&mut self, out: &mut String) -> Result<()> {
        self.expect(Tok::LParen, "`(`")?;
        out.push('(');
        loop {
            self.term(out)?;
            let t = self.next("`,` or `)`")?;
            match t.tok {
                Tok::Comma => out.push(','),
                Tok::RParen => {
                    out.push(')');
                    return Ok(());
                }
                _ => return Err(unexpected(&t, "`,` or `)`")),
            }
        }
    }

    fn term(&mut self, out: &mut String) -> Result<()> {
        let t = self.next("a ground term")?;
        let name = match &t.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(unexpected(&t, "a ground term")),
        };
        check_ground(&t, &name)?;
        out.push_str(&name);
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::LParen)) {
            self.args(out)?;
        }
        Ok(())
    }
}

fn check_ground(t: &Token, name: &str) -> Result<()> {
    if name.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
        Err(Error::NonGround {
            line: t.line,
            column: t.column,
            token: name.to_string(),
        })
    } else {
        Ok(())
    }
}

fn unexpected(t: &Token, expected: &str) -> Error {
    let found = match &t.tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Neck => "`:-`".into(),
        Tok::Tilde => "`~`".into(),
    };
    syntax(t.line, t.column, &format!("expected {expected}, found {found}"))
}

/// Parses a ground normal logic program.
///
/// ```text
/// rule    := atom ( ":-" body )? "."
/// body    := literal ("," literal)*
/// literal := atom | "not" atom | "~" atom
/// atom    := lowercase-initial identifier, optionally followed by "(" ground-args ")"
/// ```
///
/// `%` starts a comment that runs to the end of the line. An atom with
/// arguments such as `p(s(0))` is one opaque atom whose name is the whole
/// token with whitespace removed.
pub fn parse_program(text: &str) -> Result<Program> {
    let tokens = Lexer::new(text).tokens()?;
    let end = text.lines().enumerate().last().map_or((1, 1), |(i, l)| (i + 1, l.chars().count() + 1));
    let statements = Parser { tokens, pos: 0, end }.statements()?;

    let atoms = AtomTable::new(
        statements
            .iter()
            .flat_map(|s| std::iter::once(s.head.as_str()).chain(s.body.iter().map(|l| l.atom.as_str()))),
    );
    let id = |name: &str| atoms.id(name).expect("interned above");
    let rules: Vec<Rule> = statements
        .iter()
        .map(|s| {
            let (neg, pos): (Vec<&Literal>, Vec<&Literal>) = s.body.iter().partition(|l| l.negated);
            Rule::new(
                id(&s.head),
                pos.iter().map(|l| id(&l.atom)).collect::<Vec<_>>(),
                neg.iter().map(|l| id(&l.atom)).collect::<Vec<_>>(),
            )
        })
        .collect();
    Program::new(atoms, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::AtomId;

    #[test]
    fn two_rule_cycle() {
        let p = parse_program("a :- b.\nb :- a.").unwrap();
        assert_eq!(p.atoms().names(), ["a", "b"]);
        assert_eq!(
            p.rules(),
            [Rule::new(AtomId(0), [AtomId(1)], []), Rule::new(AtomId(1), [AtomId(0)], [])]
        );
    }

    #[test]
    fn empty_and_comment_only() {
        let p = parse_program("").unwrap();
        assert_eq!(p.atom_count(), 0);
        assert!(p.rules().is_empty());
        assert_eq!(parse_program("% nothing here\n\n").unwrap().atom_count(), 0);
    }

    #[test]
    fn negative_rules_both_spellings() {
        let p = parse_program("a :- not b.\nb :- ~a.\nc :- not c.").unwrap();
        assert_eq!(p.atom_count(), 3);
        assert_eq!(p.rules().len(), 3);
        assert!(p.is_negative());
    }

    #[test]
    fn facts_have_empty_bodies() {
        let p = parse_program("a. b :- a.").unwrap();
        assert!(p.rules()[0].is_fact());
    }

    #[test]
    fn nested_ground_arguments_are_one_atom() {
        let p = parse_program("p(s(0)) :- p( s( s(0) ) ).\n").unwrap();
        assert_eq!(p.atoms().names(), ["p(s(0))", "p(s(s(0)))"]);
    }

    #[test]
    fn variables_are_rejected() {
        let err = parse_program("p(X) :- p(s(X)).").unwrap_err();
        match &err {
            Error::NonGround { line, column, token } => {
                assert_eq!((*line, *column, token.as_str()), (1, 3, "X"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("ground programs only"));
        assert!(matches!(parse_program("a :- B."), Err(Error::NonGround { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_program("a :- b\nc.") {
            Err(Error::Syntax { line: 2, column: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_program("a :- .") {
            Err(Error::Syntax { line: 1, column: 6, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_program("a :- b"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("a : b."), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("1a."), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("a :- b; c."), Err(Error::Syntax { .. })));
    }

    #[test]
    fn duplicate_rules_and_literals_collapse() {
        let p = parse_program("a :- b, b.\na :- b.\nb.").unwrap();
        assert_eq!(p.rules().len(), 2);
    }

    #[test]
    fn pos_and_neg_overlap_is_legal() {
        let p = parse_program("a :- b, not b.").unwrap();
        assert_eq!(p.rules()[0].pos, p.rules()[0].neg);
    }
}
