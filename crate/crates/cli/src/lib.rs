//! Script language, evaluator and report writer for `weylcalc`.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod report;

pub use ast::{Expr, Script, Stmt, StmtKind};
pub use eval::{Session, Value};
pub use parser::{parse, parse_expr};
pub use report::{emit, Format, Report};

/// Parses and evaluates a script in a fresh session. A syntax error yields
/// a report with a single error entry at its location.
pub fn run_script(src: &str) -> Report {
    match parse(src) {
        Ok(script) => Session::new().run(&script),
        Err(e) => {
            let mut r = Report::default();
            r.push(report::Entry {
                line: e.pos.line,
                column: e.pos.col,
                statement: String::new(),
                status: report::Status::Error,
                values: Vec::new(),
                residuals: Vec::new(),
                message: Some(e.to_string()),
            });
            r
        }
    }
}
