//! Recursive-descent parser for scripts.

use crate::ast::{AlgebraDecl, Expr, Script, Stmt, StmtKind};
use crate::lexer::{tokenize, Pos, SyntaxError, Tok, Token};

/// Functions callable as `name(args)` inside expressions.
pub const BUILTINS: &[&str] = &[
    "normalize", "comm", "poisson", "dag", "res", "resform", "expand", "expand_theta", "symmetric", "smbl", "nsymbol",
    "quantize", "star", "diff", "diffmulti", "opdiff", "differential", "pairing", "derive", "euler", "ad", "adgen",
    "ideal", "subst", "chain", "cyclic", "necklace", "commsum", "truncate", "hzero", "target", "left", "right", "gaugep",
    "classical", "naive_left", "naive_right", "hlr", "hrl", "glogdet", "psimap", "det", "jac", "equal", "abelianize", "embed",
];

/// Statement keywords taking `modifiers` followed by comma-separated arguments.
pub const COMMANDS: &[(&str, &[&str])] = &[
    ("jacobian", &[]),
    ("lift", &["left", "right", "classical"]),
    ("gauge", &["classical"]),
    ("psi", &[]),
    ("gradlogdet", &[]),
    ("liftdiff", &[]),
    ("mechanical", &[]),
    ("naive", &["left", "right"]),
    ("lrdiff", &[]),
    ("inverse", &["classical"]),
    ("ncjacobian", &[]),
    ("theta", &[]),
    ("divergence", &[]),
    (
        "check",
        &[
            "canonical", "classical", "left", "right", "gauge", "pair", "equal", "zero", "psi", "liftdiff", "lrdiff",
            "gradlogdet", "inverse",
        ],
    ),
];

pub fn parse(src: &str) -> Result<Script, SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0 };
    let mut stmts = Vec::new();
    while p.peek() != &Tok::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(Script { stmts })
}

/// Parses a single expression (the whole input).
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if t != Tok::Eof {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(SyntaxError { pos: self.pos(), message: message.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.err(format!("expected {wanted}, found {}", self.peek()))
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn at_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name_list(&mut self) -> PResult<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn usize_lit(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(s) => match s.parse() {
                Ok(n) => {
                    self.bump();
                    Ok(n)
                }
                Err(_) => self.err("integer too large"),
            },
            _ => self.unexpected("an integer"),
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let pos = self.pos();
        let head = match self.peek() {
            Tok::Ident(s) => Some(s.clone()),
            _ => None,
        };
        let kind = match head.as_deref() {
            Some("coords") => {
                self.bump();
                StmtKind::Coords(self.name_list()?)
            }
            Some("funcs") => {
                self.bump();
                StmtKind::Funcs(self.name_list()?)
            }
            Some("deriv") => {
                self.bump();
                let func = self.ident()?;
                self.expect(Tok::Slash)?;
                let coord = self.ident()?;
                self.expect(Tok::Eq)?;
                StmtKind::Deriv { func, coord, value: self.expr()? }
            }
            Some("relation") => {
                self.bump();
                let lhs = self.expr()?;
                self.expect(Tok::Eq)?;
                StmtKind::Relation { lhs, rhs: self.expr()? }
            }
            Some("context") => {
                self.bump();
                StmtKind::Context(self.ident()?)
            }
            Some("algebra") => {
                self.bump();
                StmtKind::Algebra(self.algebra()?)
            }
            Some("let") => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                StmtKind::Let(name, self.expr()?)
            }
            Some("print") => {
                self.bump();
                StmtKind::Print(self.expr_list()?)
            }
            Some("map") => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    let n = self.ident()?;
                    self.expect(Tok::Eq)?;
                    items.push((n, self.expr()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                StmtKind::Map(items)
            }
            Some(name) if COMMANDS.iter().any(|(c, _)| *c == name) => {
                let name = name.to_string();
                self.bump();
                let allowed = COMMANDS.iter().find(|(c, _)| *c == name).unwrap().1;
                let mut modifiers = Vec::new();
                while let Tok::Ident(m) = self.peek() {
                    if allowed.contains(&m.as_str()) && !(BUILTINS.contains(&m.as_str()) && *self.peek_at(1) == Tok::LParen) {
                        modifiers.push(m.clone());
                        self.bump();
                    } else {
                        break;
                    }
                }
                let args = if *self.peek() == Tok::Semi { Vec::new() } else { self.expr_list()? };
                StmtKind::Command { name, modifiers, args }
            }
            _ => StmtKind::Eval(self.expr()?),
        };
        self.expect(Tok::Semi)?;
        Ok(Stmt { kind, pos })
    }

    fn algebra(&mut self) -> PResult<AlgebraDecl> {
        let kind = self.ident()?;
        match kind.as_str() {
            "weyl" => {
                if self.eat(&Tok::LParen) {
                    let q = self.name_list()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::LParen)?;
                    let p = self.name_list()?;
                    self.expect(Tok::RParen)?;
                    Ok(AlgebraDecl::WeylNamed(q, p))
                } else {
                    self.keyword("n")?;
                    self.expect(Tok::Eq)?;
                    Ok(AlgebraDecl::Weyl(self.usize_lit()?))
                }
            }
            "diffop" => {
                if *self.peek() == Tok::Semi {
                    Ok(AlgebraDecl::Diffop(Vec::new()))
                } else {
                    Ok(AlgebraDecl::Diffop(self.name_list()?))
                }
            }
            "free" => Ok(AlgebraDecl::Free(self.name_list()?)),
            "commutator" => {
                let gens = self.name_list()?;
                let mut rules = Vec::new();
                if self.at_ident("with") {
                    self.bump();
                    loop {
                        self.expect(Tok::LBracket)?;
                        let a = self.ident()?;
                        self.expect(Tok::Comma)?;
                        let b = self.ident()?;
                        self.expect(Tok::RBracket)?;
                        self.expect(Tok::Eq)?;
                        rules.push((a, b, self.expr()?));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                }
                Ok(AlgebraDecl::Commutator(gens, rules))
            }
            other => Err(SyntaxError {
                pos: self.toks[self.i - 1].pos,
                message: format!("unknown algebra kind `{other}` (expected weyl, diffop, free or commutator)"),
            }),
        }
    }

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut v = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            v.push(self.expr()?);
        }
        Ok(v)
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen | Tok::LBracket | Tok::LBrace => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let mut base = self.atom()?;
        while self.eat(&Tok::Caret) {
            let neg = self.eat(&Tok::Minus);
            let e = match self.peek().clone() {
                Tok::Int(s) => match s.parse::<i64>() {
                    Ok(k) => {
                        self.bump();
                        k
                    }
                    Err(_) => return self.err("exponent too large"),
                },
                _ => return self.unexpected("an integer exponent"),
            };
            base = Expr::Pow(Box::new(base), if neg { -e } else { e });
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Expr::Int(s))
            }
            Tok::Ident(s) => {
                self.bump();
                if BUILTINS.contains(&s.as_str()) && *self.peek() == Tok::LParen {
                    self.bump();
                    let args = if *self.peek() == Tok::RParen { Vec::new() } else { self.expr_list()? };
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(s, args))
                } else {
                    Ok(Expr::Ident(s))
                }
            }
            Tok::LParen => {
                self.bump();
                let mut items = self.expr_list()?;
                self.expect(Tok::RParen)?;
                Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Tuple(items) })
            }
            Tok::LBracket => {
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::Comm(Box::new(a), Box::new(b)))
            }
            Tok::LBrace => {
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBrace)?;
                Ok(Expr::Poisson(Box::new(a), Box::new(b)))
            }
            _ => self.unexpected("an expression"),
        }
    }
}
