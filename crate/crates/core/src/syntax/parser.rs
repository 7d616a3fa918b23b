use crate::error::{Error, Result};
use crate::formula::{signature_of, Formula, Quantifier, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Var(String),
    Ident(String),
    LParen,
    RParen,
    Comma,
    And,
    Or,
    Arrow,
    Iff,
    Not,
    Eq,
    Neq,
    False,
    True,
    Forall,
    Exists,
    Eof,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Var(v) => format!("variable {v}"),
            Token::Ident(i) => format!("identifier {i}"),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Comma => "','".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Arrow => "'->'".into(),
            Token::Iff => "'<->'".into(),
            Token::Not => "'not'".into(),
            Token::Eq => "'='".into(),
            Token::Neq => "'!='".into(),
            Token::False => "'false'".into(),
            Token::True => "'true'".into(),
            Token::Forall => "'forall'".into(),
            Token::Exists => "'exists'".into(),
            Token::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let syntax = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_column) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (token, len) = if rest.starts_with("<->") {
            (Token::Iff, 3)
        } else if rest.starts_with("->") {
            (Token::Arrow, 2)
        } else if rest.starts_with("!=") {
            (Token::Neq, 2)
        } else {
            match c {
                '(' => (Token::LParen, 1),
                ')' => (Token::RParen, 1),
                ',' => (Token::Comma, 1),
                '&' => (Token::And, 1),
                '|' => (Token::Or, 1),
                '=' => (Token::Eq, 1),
                c if c.is_ascii_alphabetic() => {
                    let len = chars[i..]
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                        .count();
                    let word: String = chars[i..i + len].iter().collect();
                    let token = match word.as_str() {
                        "not" => Token::Not,
                        "false" => Token::False,
                        "true" => Token::True,
                        "forall" => Token::Forall,
                        "exists" => Token::Exists,
                        _ if c.is_ascii_uppercase() => Token::Var(word),
                        _ => Token::Ident(word),
                    };
                    (token, len)
                }
                other => {
                    return Err(syntax(
                        start_line,
                        start_column,
                        format!("unexpected character {other:?}"),
                    ))
                }
            }
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_column,
        });
        i += len;
        column += len;
    }
    out.push(Spanned {
        token: Token::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].token
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].token.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let s = &self.tokens[self.pos];
        Error::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, token: Token) -> Result<()> {
        if *self.peek() == token {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                token.describe(),
                self.peek().describe()
            )))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut left = self.implication()?;
        while *self.peek() == Token::Iff {
            self.advance();
            let right = self.implication()?;
            left = left.iff(right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula> {
        let left = self.disjunction()?;
        if *self.peek() == Token::Arrow {
            self.advance();
            let right = self.implication()?;
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut left = self.conjunction()?;
        while *self.peek() == Token::Or {
            self.advance();
            left = left.or(self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut left = self.unary()?;
        while *self.peek() == Token::And {
            self.advance();
            left = left.and(self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Token::Not => {
                self.advance();
                Ok(self.unary()?.not())
            }
            Token::Forall | Token::Exists => {
                let q = if self.advance() == Token::Forall {
                    Quantifier::Forall
                } else {
                    Quantifier::Exists
                };
                let mut vars = Vec::new();
                while let Token::Var(v) = self.peek() {
                    vars.push(v.clone());
                    self.advance();
                }
                if vars.is_empty() {
                    return Err(self.error("expected a variable after quantifier"));
                }
                self.expect(Token::LParen)?;
                let body = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(vars
                    .into_iter()
                    .rev()
                    .fold(body, |acc, v| Formula::quantified(q, v, acc)))
            }
            _ => self.primary(),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.advance() {
            Token::Var(v) => Ok(Term::Var(v)),
            Token::Ident(c) => Ok(Term::Const(c)),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected a term, found {}", other.describe())))
            }
        }
    }

    fn equality_tail(&mut self, left: Term) -> Result<Formula> {
        match self.advance() {
            Token::Eq => Ok(Formula::eq(left, self.term()?)),
            Token::Neq => Ok(Formula::eq(left, self.term()?).not()),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected '=' or '!=', found {}", other.describe())))
            }
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Token::False => {
                self.advance();
                Ok(Formula::Bot)
            }
            Token::True => {
                self.advance();
                Ok(Formula::top())
            }
            Token::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Token::Var(_) => {
                let left = self.term()?;
                self.equality_tail(left)
            }
            Token::Ident(name) => match self.peek_at(1) {
                Token::Eq | Token::Neq => {
                    let left = self.term()?;
                    self.equality_tail(left)
                }
                Token::LParen => {
                    self.advance();
                    self.advance();
                    let mut args = vec![self.term()?];
                    while *self.peek() == Token::Comma {
                        self.advance();
                        args.push(self.term()?);
                    }
                    self.expect(Token::RParen)?;
                    Ok(Formula::atom(name, args))
                }
                _ => {
                    self.advance();
                    Ok(Formula::prop(name))
                }
            },
            other => Err(self.error(format!("expected a formula, found {}", other.describe()))),
        }
    }
}

/// Parses a formula that may contain free variables.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
    };
    let f = parser.formula()?;
    if *parser.peek() != Token::Eof {
        return Err(parser.error(format!("unexpected {}", parser.peek().describe())));
    }
    signature_of(&f)?;
    Ok(f.distinct_binders())
}

/// Parses a sentence; free variables are rejected.
pub fn parse(text: &str) -> Result<Formula> {
    let f = parse_formula(text)?;
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().collect()));
    }
    Ok(f)
}
