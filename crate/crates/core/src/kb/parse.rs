//! Parser for the line-oriented knowledge-base format.
//!
//! One formula per line, `#` starts a comment. Operators by decreasing
//! precedence: `!`, `&&`, `||`, `=>`, `<=>`; binary operators associate to
//! the right. `+` is verum and `-` is falsum.

use super::{Formula, KnowledgeBase};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Top,
    Bottom,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Top => "`+`".into(),
            Tok::Bottom => "`-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let rest = |s: &str| chars[i..].iter().take(s.len()).copied().eq(s.chars());
        let (tok, len) = match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' => (Tok::Not, 1),
            '+' => (Tok::Top, 1),
            '-' => (Tok::Bottom, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '&' if rest("&&") => (Tok::And, 2),
            '|' if rest("||") => (Tok::Or, 2),
            '=' if rest("=>") => (Tok::Implies, 2),
            '<' if rest("<=>") => (Tok::Iff, 3),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            c => return Err(Error::parse(lineno, col, format!("unexpected character `{c}`"))),
        };
        out.push((tok, col));
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col(), msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn binary(
        &mut self,
        op: Tok,
        next: fn(&mut Self) -> Result<Formula>,
        build: fn(Formula, Formula) -> Formula,
    ) -> Result<Formula> {
        let left = next(self)?;
        if self.eat(&op) {
            let right = self.binary(op, next, build)?;
            Ok(build(left, right))
        } else {
            Ok(left)
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        self.binary(Tok::Iff, Self::implies, Formula::iff)
    }

    fn implies(&mut self) -> Result<Formula> {
        self.binary(Tok::Implies, Self::or, Formula::implies)
    }

    fn or(&mut self) -> Result<Formula> {
        self.binary(Tok::Or, Self::and, Formula::or)
    }

    fn and(&mut self) -> Result<Formula> {
        self.binary(Tok::And, Self::unary, Formula::and)
    }

    fn unary(&mut self) -> Result<Formula> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of formula"));
        };
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Formula::not(self.unary()?)),
            Tok::Ident(name) => Ok(Formula::Atom(name)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bottom => Ok(Formula::Bottom),
            Tok::LParen => {
                let inner = self.iff()?;
                if self.eat(&Tok::RParen) {
                    Ok(inner)
                } else {
                    Err(self.error("expected `)`"))
                }
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("unexpected {}", other.describe())))
            }
        }
    }
}

fn parse_line(line: &str, lineno: usize) -> Result<Option<Formula>> {
    let toks = lex(line, lineno)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let end_col = line.split('#').next().unwrap_or("").trim_end().chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        line: lineno,
        end_col,
    };
    let f = p.iff()?;
    if let Some(t) = p.peek() {
        return Err(p.error(format!("unexpected {} after formula", t.describe())));
    }
    Ok(Some(f))
}

/// Parse a knowledge base, one formula per non-blank, non-comment line.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase> {
    let mut formulas = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if let Some(f) = parse_line(line, i + 1)? {
            formulas.push(f);
        }
    }
    Ok(KnowledgeBase::new(formulas))
}

/// Parse a single formula.
pub fn parse_formula(text: &str) -> Result<Formula> {
    match text.lines().count() {
        0 | 1 => {}
        _ => return Err(Error::parse(2, 1, "a formula must fit on one line")),
    }
    parse_line(text, 1)?.ok_or_else(|| Error::parse(1, 1, "empty formula"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("a || b && !c => d <=> e").unwrap();
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(
                    Formula::atom("a"),
                    Formula::and(Formula::atom("b"), Formula::not(Formula::atom("c"))),
                ),
                Formula::atom("d"),
            ),
            Formula::atom("e"),
        );
        assert_eq!(f, expected);
        let g = parse_formula("a => b => c").unwrap();
        assert_eq!(
            g,
            Formula::implies(
                Formula::atom("a"),
                Formula::implies(Formula::atom("b"), Formula::atom("c"))
            )
        );
    }

    #[test]
    fn comments_blank_lines_and_constants() {
        let kb = parse_kb("# header\n\nx && + # trailing\n  -  \n").unwrap();
        assert_eq!(kb.len(), 2);
        assert_eq!(kb.formulas()[0], Formula::and(Formula::atom("x"), Formula::Top));
        assert_eq!(kb.formulas()[1], Formula::Bottom);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_kb("x\ny &&\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("{other:?}"),
        }
        match parse_kb("x & y") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
        match parse_kb("(x || y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 8),
            other => panic!("{other:?}"),
        }
        assert!(parse_kb("x y").is_err());
        assert!(parse_kb(")").is_err());
    }

    #[test]
    fn empty_input_is_empty_kb() {
        assert!(parse_kb("").unwrap().is_empty());
        assert!(parse_kb("# only comments\n").unwrap().is_empty());
    }
}
