//! Script syntax tree and its canonical printed form.

use std::fmt;

use crate::lexer::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(String),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    /// `[a, b]`
    Comm(Box<Expr>, Box<Expr>),
    /// `{a, b}`
    Poisson(Box<Expr>, Box<Expr>),
    /// `(a, b, ...)` with at least two entries.
    Tuple(Vec<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            fmt::Display::fmt(self, f)?;
            return f.write_str(")");
        }
        fmt::Display::fmt(self, f)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        fmt::Display::fmt(e, f)?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(s) | Expr::Ident(s) => f.write_str(s),
            Expr::Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)
            }
            Expr::Pow(b, e) => {
                b.write_at(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::Comm(a, b) => write!(f, "[{a}, {b}]"),
            Expr::Poisson(a, b) => write!(f, "{{{a}, {b}}}"),
            Expr::Tuple(items) => {
                f.write_str("(")?;
                write_list(f, items)?;
                f.write_str(")")
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraDecl {
    /// `weyl n = N`: generators `q.., p..`.
    Weyl(usize),
    WeylNamed(Vec<String>, Vec<String>),
    /// Differential operators over the current context; empty means default momentum names.
    Diffop(Vec<String>),
    Free(Vec<String>),
    /// Generators and the entries `[a, b] = c` (times `h`); unlisted pairs commute.
    Commutator(Vec<String>, Vec<(String, String, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    Coords(Vec<String>),
    Funcs(Vec<String>),
    Deriv { func: String, coord: String, value: Expr },
    Relation { lhs: Expr, rhs: Expr },
    Context(String),
    Algebra(AlgebraDecl),
    Let(String, Expr),
    Print(Vec<Expr>),
    Eval(Expr),
    Map(Vec<(String, Expr)>),
    Command { name: String, modifiers: Vec<String>, args: Vec<Expr> },
}

#[derive(Clone, Debug, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

fn names(v: &[String]) -> String {
    v.join(", ")
}

impl fmt::Display for AlgebraDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDecl::Weyl(n) => write!(f, "weyl n = {n}"),
            AlgebraDecl::WeylNamed(q, p) => write!(f, "weyl ({}) ({})", names(q), names(p)),
            AlgebraDecl::Diffop(m) if m.is_empty() => f.write_str("diffop"),
            AlgebraDecl::Diffop(m) => write!(f, "diffop {}", names(m)),
            AlgebraDecl::Free(g) => write!(f, "free {}", names(g)),
            AlgebraDecl::Commutator(g, rules) => {
                write!(f, "commutator {}", names(g))?;
                for (i, (a, b, c)) in rules.iter().enumerate() {
                    f.write_str(if i == 0 { " with " } else { ", " })?;
                    write!(f, "[{a}, {b}] = {c}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Coords(v) => write!(f, "coords {};", names(v)),
            StmtKind::Funcs(v) => write!(f, "funcs {};", names(v)),
            StmtKind::Deriv { func, coord, value } => write!(f, "deriv {func} / {coord} = {value};"),
            StmtKind::Relation { lhs, rhs } => write!(f, "relation {lhs} = {rhs};"),
            StmtKind::Context(name) => write!(f, "context {name};"),
            StmtKind::Algebra(d) => write!(f, "algebra {d};"),
            StmtKind::Let(n, e) => write!(f, "let {n} = {e};"),
            StmtKind::Print(items) => {
                f.write_str("print ")?;
                write_list(f, items)?;
                f.write_str(";")
            }
            StmtKind::Eval(e) => write!(f, "{e};"),
            StmtKind::Map(items) => {
                f.write_str("map ")?;
                for (i, (n, e)) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n} = {e}")?;
                }
                f.write_str(";")
            }
            StmtKind::Command { name, modifiers, args } => {
                f.write_str(name)?;
                for m in modifiers {
                    write!(f, " {m}")?;
                }
                if !args.is_empty() {
                    f.write_str(" ")?;
                    write_list(f, args)?;
                }
                f.write_str(";")
            }
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
