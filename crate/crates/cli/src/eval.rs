//! Sequential evaluation of scripts against a session state.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use weylcalc_core::brackets::{
    bracket_expansion_pair, bracket_expansion_theta, check_divergence, dagger, divergence_witness, normal_quantize,
    normal_symbol, poisson, res, res_form, smbl, star_normal, symmetric_form, theta_table,
};
use weylcalc_core::calculus::{
    ad, ad_generator_formula, apply_derivation, chain_rule_check, cyclic_variational, differential, euler_operator,
    ideal_preserved, is_commutator_sum, necklace, op_partial, pair, partial_multi, partial_seq, substitute,
};
use weylcalc_core::canon::{
    abelianize, attempt_inverse, attempt_inverse_pair, check_canonical_classical, check_canonical_quantum, classical_lift,
    compose_polys, format_inverse, gauge_lift, gauge_lift_classical, grad_log_det, grad_log_det_routes,
    identity_matrix, lift_difference_residual, lift_left, lift_right, lr_difference, map_polys, mechanical_lr,
    nc_jacobian, naive_transformed_hamiltonian, psi_defect, symbol_to_poly,
};
use weylcalc_core::ncalg::{embed_weyl, normalize_with, to_raw};
use weylcalc_core::poly::{format_poly, int};
use weylcalc_core::selftest::Budget;
use weylcalc_core::{
    AlgebraSpec, CanonicalReport, ClassicalPair, CommutativeSymbol, DerivationSpec, Error, InverseSearch, Matrix, Mode,
    NCPoly, OneForm, PointMap, Poly, QuantumPair, Rational, Scalar, ScalarContext, Side, Strategy, Var,
};

use crate::ast::{AlgebraDecl, Expr, Script, Stmt, StmtKind};
use crate::report::{Entry, Item, Report, ResidualItem, Status};

/// Evaluation failure of one statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalError(pub String);

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for EvalError {
    fn from(e: Error) -> Self {
        EvalError(e.to_string())
    }
}

type EResult<T> = Result<T, EvalError>;

fn fail<T>(msg: impl Into<String>) -> EResult<T> {
    Err(EvalError(msg.into()))
}

#[derive(Clone, Debug)]
pub enum Value {
    Elem(NCPoly),
    Sym(CommutativeSymbol),
    Bool(bool),
    Form(OneForm),
    Text(String),
    Tuple(Vec<Value>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Elem(x) => f.write_str(&x.format()),
            Value::Sym(s) => f.write_str(&s.format()),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Form(w) => f.write_str(&w.format()),
            Value::Text(t) => f.write_str(t),
            Value::Tuple(items) => {
                f.write_str("(")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    v.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Elem(_) => "an algebra element",
            Value::Sym(_) => "a commutative symbol",
            Value::Bool(_) => "a truth value",
            Value::Form(_) => "a 1-form",
            Value::Text(_) => "text",
            Value::Tuple(_) => "a tuple",
        }
    }

    fn elem(self) -> EResult<NCPoly> {
        match self {
            Value::Elem(x) => Ok(x),
            other => fail(format!("expected an algebra element, found {}", other.kind())),
        }
    }

    /// A commutative symbol; elements of a Weyl algebra are read through
    /// their normal symbol.
    fn sym(self) -> EResult<CommutativeSymbol> {
        match self {
            Value::Sym(s) => Ok(s),
            Value::Elem(x) => Ok(normal_symbol(&x)?),
            other => fail(format!("expected a commutative symbol, found {}", other.kind())),
        }
    }

    fn tuple(self) -> Vec<Value> {
        match self {
            Value::Tuple(v) => v,
            other => vec![other],
        }
    }
}

fn sym_scalar(s: &CommutativeSymbol) -> Option<Scalar> {
    let mut it = s.terms();
    match (it.next(), it.next()) {
        (None, _) => Some(s.ctx().zero()),
        (Some((m, c)), None) if m.degree() == 0 => Some(c.clone()),
        _ => None,
    }
}

/// Declarative description of the scalar context.
#[derive(Clone, Debug, Default)]
struct ContextSpec {
    coords: Vec<String>,
    funcs: Vec<String>,
    derivs: Vec<(String, String, Expr)>,
    relations: Vec<(Expr, Expr)>,
}

impl ContextSpec {
    fn polar() -> Self {
        let id = |s: &str| Expr::Ident(s.into());
        ContextSpec {
            coords: vec!["r".into(), "theta".into()],
            funcs: vec!["s".into(), "c".into()],
            derivs: vec![
                ("s".into(), "theta".into(), id("c")),
                ("c".into(), "theta".into(), Expr::Neg(Box::new(id("s")))),
            ],
            relations: vec![(
                Expr::Pow(Box::new(id("s")), 2),
                Expr::Sub(Box::new(Expr::Int("1".into())), Box::new(Expr::Pow(Box::new(id("c")), 2))),
            )],
        }
    }

    fn build(&self) -> EResult<ScalarContext> {
        let mut ctx = ScalarContext::new(&self.coords, &self.funcs)?;
        let empty = BTreeMap::new();
        for (lhs, rhs) in &self.relations {
            let alg = scalar_algebra(Arc::new(ctx.clone()))?;
            let ev = Evaluator { alg: &alg, bindings: &empty, map: None };
            let d = ev.scalar(&Expr::Sub(Box::new(lhs.clone()), Box::new(rhs.clone())))?;
            if !d.is_polynomial() {
                return fail("relations must be polynomial");
            }
            let den = d.denom().constant_term();
            ctx.add_relation_poly(&d.numer().scale(&den.recip()))?;
        }
        for (func, coord, value) in &self.derivs {
            let alg = scalar_algebra(Arc::new(ctx.clone()))?;
            let ev = Evaluator { alg: &alg, bindings: &empty, map: None };
            let v = ev.scalar(value)?;
            ctx.set_derivative(func, coord, v)?;
        }
        ctx.validate()?;
        Ok(ctx)
    }
}

fn scalar_algebra(ctx: Arc<ScalarContext>) -> EResult<Arc<AlgebraSpec>> {
    Ok(AlgebraSpec::free::<&str>(&[], ctx)?)
}

/// Interpreter state carried across statements.
pub struct Session {
    spec: ContextSpec,
    ctx: Arc<ScalarContext>,
    alg: Arc<AlgebraSpec>,
    map: Option<PointMap>,
    bindings: BTreeMap<String, Value>,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

struct Outcome {
    status: Status,
    values: Vec<Item>,
    residuals: Vec<ResidualItem>,
    message: Option<String>,
}

impl Outcome {
    fn ok(values: Vec<Item>) -> Self {
        Outcome { status: Status::Ok, values, residuals: Vec::new(), message: None }
    }

    fn check(passed: bool, values: Vec<Item>, residuals: Vec<ResidualItem>) -> Self {
        Outcome { status: if passed { Status::Pass } else { Status::Fail }, values, residuals, message: None }
    }

    fn canonical(rep: &CanonicalReport) -> Self {
        let residuals = rep
            .residuals
            .iter()
            .map(|r| ResidualItem { label: r.label.clone(), value: r.value.clone(), zero: r.zero })
            .collect();
        Outcome::check(rep.is_canonical(), Vec::new(), residuals)
    }
}

fn residual(label: impl Into<String>, x: &NCPoly) -> ResidualItem {
    ResidualItem { label: label.into(), value: x.format(), zero: x.is_zero() }
}

impl Session {
    pub fn new() -> Self {
        let ctx = Arc::new(ScalarContext::bare());
        let alg = scalar_algebra(ctx.clone()).expect("empty algebra");
        Session { spec: ContextSpec::default(), ctx, alg, map: None, bindings: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.alg
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    pub fn run(&mut self, script: &Script) -> Report {
        let mut report = Report::default();
        for s in &script.stmts {
            report.push(self.execute(s));
        }
        report
    }

    /// Evaluates one statement; on error the session is left unchanged.
    pub fn execute(&mut self, s: &Stmt) -> Entry {
        let out = self.step(&s.kind).unwrap_or_else(|e| Outcome {
            status: Status::Error,
            values: Vec::new(),
            residuals: Vec::new(),
            message: Some(e.0),
        });
        Entry {
            line: s.pos.line,
            column: s.pos.col,
            statement: s.to_string(),
            status: out.status,
            values: out.values,
            residuals: out.residuals,
            message: out.message,
        }
    }

    fn evaluator(&self) -> Evaluator<'_> {
        Evaluator { alg: &self.alg, bindings: &self.bindings, map: self.map.as_ref() }
    }

    fn set_context(&mut self, spec: ContextSpec) -> EResult<Outcome> {
        let ctx = Arc::new(spec.build()?);
        self.alg = scalar_algebra(ctx.clone())?;
        self.ctx = ctx;
        self.spec = spec;
        self.map = None;
        Ok(Outcome::ok(Vec::new()))
    }

    fn require_map(&self) -> EResult<&PointMap> {
        self.map.as_ref().ok_or_else(|| EvalError("no map defined (use `map ...;` first)".into()))
    }

    fn step(&mut self, kind: &StmtKind) -> EResult<Outcome> {
        match kind {
            StmtKind::Coords(v) => {
                let mut spec = self.spec.clone();
                spec.coords = v.clone();
                self.set_context(spec)
            }
            StmtKind::Funcs(v) => {
                let mut spec = self.spec.clone();
                spec.funcs = v.clone();
                self.set_context(spec)
            }
            StmtKind::Deriv { func, coord, value } => {
                let mut spec = self.spec.clone();
                spec.derivs.retain(|(f, c, _)| !(f == func && c == coord));
                spec.derivs.push((func.clone(), coord.clone(), value.clone()));
                self.set_context(spec)
            }
            StmtKind::Relation { lhs, rhs } => {
                let mut spec = self.spec.clone();
                spec.relations.push((lhs.clone(), rhs.clone()));
                self.set_context(spec)
            }
            StmtKind::Context(name) => match name.as_str() {
                "polar" => self.set_context(ContextSpec::polar()),
                "bare" => self.set_context(ContextSpec::default()),
                other => fail(format!("unknown context `{other}` (expected polar or bare)")),
            },
            StmtKind::Algebra(decl) => {
                let alg = self.declare_algebra(decl)?;
                let gens = alg.generators().join(", ");
                let mode = alg.mode().name();
                self.alg = alg;
                self.map = None;
                Ok(Outcome::ok(vec![Item::plain(format!("{mode} on {{{gens}}}"))]))
            }
            StmtKind::Let(name, e) => {
                let v = self.evaluator().eval(e)?;
                let item = Item::labeled(name.clone(), v.to_string());
                self.bindings.insert(name.clone(), v);
                Ok(Outcome::ok(vec![item]))
            }
            StmtKind::Print(items) => {
                let ev = self.evaluator();
                let values = items.iter().map(|e| Ok(Item::plain(ev.eval(e)?.to_string()))).collect::<EResult<_>>()?;
                Ok(Outcome::ok(values))
            }
            StmtKind::Eval(e) => Ok(Outcome::ok(vec![Item::plain(self.evaluator().eval(e)?.to_string())])),
            StmtKind::Map(items) => {
                let ev = self.evaluator();
                let names: Vec<String> = items.iter().map(|(n, _)| n.clone()).collect();
                let targets = items.iter().map(|(_, e)| ev.scalar(e)).collect::<EResult<Vec<_>>>()?;
                let map = PointMap::new(&self.alg, &names, targets)?;
                let mut values: Vec<Item> = names
                    .iter()
                    .zip(map.targets())
                    .map(|(n, t)| Item::labeled(n.clone(), map.ctx().format(t)))
                    .collect();
                values.push(Item::labeled("det J", map.ctx().format(&map.jacobian().det)));
                self.map = Some(map);
                Ok(Outcome::ok(values))
            }
            StmtKind::Command { name, modifiers, args } => self.command(name, modifiers, args),
        }
    }

    fn declare_algebra(&self, decl: &AlgebraDecl) -> EResult<Arc<AlgebraSpec>> {
        Ok(match decl {
            AlgebraDecl::Weyl(n) => {
                if *n == 0 {
                    return fail("a Weyl algebra needs n >= 1");
                }
                AlgebraSpec::weyl(*n)
            }
            AlgebraDecl::WeylNamed(q, p) => AlgebraSpec::weyl_named(q, p)?,
            AlgebraDecl::Diffop(m) => AlgebraSpec::diffop(self.ctx.clone(), if m.is_empty() { None } else { Some(m) })?,
            AlgebraDecl::Free(g) => AlgebraSpec::free(g, self.ctx.clone())?,
            AlgebraDecl::Commutator(g, rules) => {
                let m = g.len();
                let mut table = vec![vec![Rational::from_integer(0.into()); m]; m];
                let ev = self.evaluator();
                for (a, b, c) in rules {
                    let idx = |n: &String| {
                        g.iter().position(|x| x == n).ok_or_else(|| EvalError(format!("`{n}` is not a generator")))
                    };
                    let (i, j) = (idx(a)?, idx(b)?);
                    if i == j {
                        return fail(format!("[{a}, {a}] is always zero"));
                    }
                    let k = ev.scalar(c)?.as_constant().ok_or_else(|| EvalError("commutator entries must be rational constants".into()))?;
                    table[i][j] = k.clone();
                    table[j][i] = -k;
                }
                AlgebraSpec::constant(g, table, self.ctx.clone())?
            }
        })
    }

    fn momentum_label(map: &PointMap, i: usize) -> String {
        format!("p_{}", map.target_ctx().coordinate_names()[i])
    }

    fn target_label(map: &PointMap, i: usize) -> String {
        map.target_ctx().coordinate_names()[i].clone()
    }

    fn quantum_items(map: &PointMap, pair: &QuantumPair) -> Vec<Item> {
        let mut v: Vec<Item> = pair.p.iter().enumerate().map(|(i, p)| Item::labeled(Self::momentum_label(map, i), p.format())).collect();
        v.extend(pair.q.iter().enumerate().map(|(i, q)| Item::labeled(Self::target_label(map, i), q.format())));
        v
    }

    fn classical_items(map: &PointMap, pair: &ClassicalPair) -> Vec<Item> {
        let mut v: Vec<Item> = pair.p.iter().enumerate().map(|(i, p)| Item::labeled(Self::momentum_label(map, i), p.format())).collect();
        v.extend(pair.q.iter().enumerate().map(|(i, q)| Item::labeled(Self::target_label(map, i), q.format())));
        v
    }

    /// Evaluates a metric `((a11, a12), (a21, a22))` and a potential in the
    /// target coordinates of the current map.
    fn target_data(&self, map: &PointMap, metric: Option<&Expr>, potential: Option<&Expr>) -> EResult<(Matrix, Scalar)> {
        let tctx = map.target_ctx().clone();
        let alg = scalar_algebra(tctx.clone())?;
        let ev = Evaluator { alg: &alg, bindings: &BTreeMap::new(), map: None };
        let n = map.n();
        let a = match metric {
            None => identity_matrix(&tctx, n),
            Some(e) => {
                let rows = ev.eval(e)?.tuple();
                let m = rows
                    .into_iter()
                    .map(|r| r.tuple().into_iter().map(|x| x.elem()?.as_scalar().ok_or_else(|| EvalError("metric entries must be scalars".into()))).collect::<EResult<Vec<_>>>())
                    .collect::<EResult<Matrix>>()?;
                if m.len() != n || m.iter().any(|r| r.len() != n) {
                    return fail(format!("metric must be {n}x{n}"));
                }
                m
            }
        };
        let v = match potential {
            None => tctx.zero(),
            Some(e) => ev.scalar(e)?,
        };
        Ok((a, v))
    }

    fn bound(&self, args: &[Expr], default: u32) -> EResult<u32> {
        match args.first() {
            None => Ok(default),
            Some(e) => Ok(self.evaluator().index(e)? as u32),
        }
    }

    fn command(&mut self, name: &str, mods: &[String], args: &[Expr]) -> EResult<Outcome> {
        let has = |m: &str| mods.iter().any(|x| x == m);
        let ev = self.evaluator();
        let argc = |lo: usize, hi: usize| -> EResult<()> {
            if args.len() < lo || args.len() > hi {
                return fail(format!("`{name}` takes {lo}..{hi} arguments, got {}", args.len()));
            }
            Ok(())
        };
        match name {
            "jacobian" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                let ctx = map.ctx();
                let j = map.jacobian();
                let row = |r: &Vec<Scalar>| format!("({})", r.iter().map(|x| ctx.format(x)).collect::<Vec<_>>().join(", "));
                let mut v: Vec<Item> = j.entries.iter().enumerate().map(|(i, r)| Item::labeled(format!("J row {}", i + 1), row(r))).collect();
                v.push(Item::labeled("det J", ctx.format(&j.det)));
                v.extend(j.inv.iter().enumerate().map(|(i, r)| Item::labeled(format!("J^-1 row {}", i + 1), row(r))));
                Ok(Outcome::ok(v))
            }
            "lift" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                if has("classical") {
                    return Ok(Outcome::ok(Self::classical_items(map, &classical_lift(map)?)));
                }
                let pair = if has("left") { lift_left(map)? } else { lift_right(map)? };
                Ok(Outcome::ok(Self::quantum_items(map, &pair)))
            }
            "gauge" => {
                argc(1, 1)?;
                let map = self.require_map()?;
                let f = ev.scalar(&args[0])?;
                if has("classical") {
                    return Ok(Outcome::ok(Self::classical_items(map, &gauge_lift_classical(map, &f)?)));
                }
                Ok(Outcome::ok(Self::quantum_items(map, &gauge_lift(map, &f)?)))
            }
            "psi" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                let d = psi_defect(map)?;
                let gens = map.alg().generators();
                let mut v = Vec::new();
                for i in 0..map.n() {
                    v.push(Item::labeled(format!("Psi({})", gens[i]), d.psi[i].format()));
                }
                Ok(Outcome::ok(v))
            }
            "gradlogdet" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                let names = map.ctx().coordinate_names();
                let v = (0..map.n())
                    .map(|i| Ok(Item::labeled(format!("d/d{} ln det J", names[i]), map.ctx().format(&grad_log_det(map, i)?))))
                    .collect::<EResult<_>>()?;
                Ok(Outcome::ok(v))
            }
            "liftdiff" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                let r = lift_right(map)?;
                let l = lift_left(map)?;
                let v = (0..map.n())
                    .map(|i| Ok(Item::labeled(format!("right - left ({})", Self::momentum_label(map, i)), r.p[i].checked_sub(&l.p[i])?.format())))
                    .collect::<EResult<_>>()?;
                Ok(Outcome::ok(v))
            }
            "mechanical" => {
                argc(0, 2)?;
                let map = self.require_map()?;
                let (a, v) = self.target_data(map, args.first(), args.get(1))?;
                let (hlr, hrl) = mechanical_lr(map, &a, &v)?;
                Ok(Outcome::ok(vec![Item::labeled("H^lr", hlr.format()), Item::labeled("H^rl", hrl.format())]))
            }
            "naive" => {
                argc(0, 0)?;
                let map = self.require_map()?;
                let side = if has("left") { Side::Left } else { Side::Right };
                let (h, d) = naive_transformed_hamiltonian(map, side)?;
                Ok(Outcome::ok(vec![Item::labeled("H", h.format()), Item::labeled("H - dag(H)", d.format())]))
            }
            "lrdiff" => {
                argc(0, 1)?;
                let map = self.require_map()?;
                let (a, _) = self.target_data(map, args.first(), None)?;
                let d = lr_difference(map, &a)?;
                Ok(Outcome::ok(vec![Item::labeled("direct", d.direct.format()), Item::labeled("closed form", d.closed_form.format())]))
            }
            "inverse" => {
                argc(0, 1)?;
                let map = self.require_map()?;
                let bound = self.bound(args, 4)?;
                let (search, names) = self.inverse(map, has("classical"), bound)?;
                Ok(Outcome::ok(match search {
                    InverseSearch::Found(g) => format_inverse(&g, &names.1).into_iter().zip(&names.0).map(|(v, l)| Item::labeled(l.clone(), v)).collect(),
                    InverseSearch::NoneUpTo(b) => vec![Item::plain(format!("no inverse of degree <= {b}"))],
                }))
            }
            "ncjacobian" => {
                argc(1, usize::MAX)?;
                let f = args.iter().map(|e| ev.eval(e)?.elem()).collect::<EResult<Vec<_>>>()?;
                let j = nc_jacobian(&f)?;
                let mut v = Vec::new();
                for (i, row) in j.variational.iter().enumerate() {
                    for (k, x) in row.iter().enumerate() {
                        v.push(Item::labeled(format!("dF{}/d{}", i + 1, f[i].alg().generators()[k]), x.format()));
                    }
                }
                Ok(Outcome::ok(v))
            }
            "theta" => {
                argc(1, 1)?;
                self.alg.require_mode(Mode::ConstantCommutator)?;
                let s = ev.index(&args[0])? as u32;
                let t = theta_table(self.alg.table(), s)?;
                let idx = |v: &[u32]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
                let v = t
                    .entries
                    .iter()
                    .map(|((a, b), c)| Item::labeled(format!("theta[({}),({})]", idx(a), idx(b)), ScalarContext::format_rational(c)))
                    .collect();
                Ok(Outcome::ok(v))
            }
            "divergence" => {
                argc(2, 2)?;
                let a = ev.scalar(&args[0])?;
                let b = ev.scalar(&args[1])?;
                let g = divergence_witness(&self.ctx, &a, &b)?;
                let ok = check_divergence(&self.ctx, &a, &b, &g)?;
                let mut v: Vec<Item> = g.iter().enumerate().map(|(i, x)| Item::labeled(format!("g{}", i + 1), self.ctx.format(x))).collect();
                v.push(Item::labeled("verified", ok.to_string()));
                Ok(Outcome::ok(v))
            }
            "check" => self.check(mods, args),
            other => fail(format!("unknown command `{other}`")),
        }
    }

    /// The inverse search and, for output, the labels and variable names.
    #[allow(clippy::type_complexity)]
    fn inverse(&self, map: &PointMap, classical: bool, bound: u32) -> EResult<(InverseSearch, (Vec<String>, Vec<String>))> {
        let src = map.ctx().coordinate_names().to_vec();
        let tgt = map.target_ctx().coordinate_names().to_vec();
        if classical {
            let pair = classical_lift(map)?;
            let mut labels = src.clone();
            labels.extend(map.alg().generators().iter().cloned());
            let mut names = tgt.clone();
            names.extend((0..map.n()).map(|i| Self::momentum_label(map, i)));
            Ok((attempt_inverse_pair(&pair, bound)?, (labels, names)))
        } else {
            Ok((attempt_inverse(map, bound)?, (src, tgt)))
        }
    }

    fn check(&self, mods: &[String], args: &[Expr]) -> EResult<Outcome> {
        let ev = self.evaluator();
        let has = |m: &str| mods.iter().any(|x| x == m);
        let mode = mods.first().map(String::as_str).unwrap_or("");
        match mode {
            "canonical" => {
                let pair = if has("pair") {
                    let (p, q) = ev.pair_args(args)?;
                    QuantumPair { p: p.into_iter().map(Value::elem).collect::<EResult<_>>()?, q: q.into_iter().map(Value::elem).collect::<EResult<_>>()? }
                } else {
                    let map = self.require_map()?;
                    if has("gauge") {
                        let f = args.first().ok_or_else(|| EvalError("`check canonical gauge` needs a function".into()))?;
                        gauge_lift(map, &ev.scalar(f)?)?
                    } else if has("left") {
                        lift_left(map)?
                    } else {
                        lift_right(map)?
                    }
                };
                Ok(Outcome::canonical(&check_canonical_quantum(&pair)?))
            }
            "classical" => {
                let pair = if has("pair") {
                    let (p, q) = ev.pair_args(args)?;
                    ClassicalPair { p: p.into_iter().map(Value::sym).collect::<EResult<_>>()?, q: q.into_iter().map(Value::sym).collect::<EResult<_>>()? }
                } else {
                    let map = self.require_map()?;
                    if has("gauge") {
                        let f = args.first().ok_or_else(|| EvalError("`check classical gauge` needs a function".into()))?;
                        gauge_lift_classical(map, &ev.scalar(f)?)?
                    } else {
                        classical_lift(map)?
                    }
                };
                Ok(Outcome::canonical(&check_canonical_classical(&pair)?))
            }
            "equal" => {
                if args.len() != 2 {
                    return fail("`check equal` takes two expressions");
                }
                let a = ev.eval(&args[0])?;
                let b = ev.eval(&args[1])?;
                let d = ev.sub(a.clone(), b)?;
                let zero = value_is_zero(&d)?;
                let r = ResidualItem { label: "lhs - rhs".into(), value: d.to_string(), zero };
                Ok(Outcome::check(zero, vec![Item::plain(a.to_string())], vec![r]))
            }
            "zero" => {
                if args.len() != 1 {
                    return fail("`check zero` takes one expression");
                }
                let a = ev.eval(&args[0])?;
                let zero = value_is_zero(&a)?;
                Ok(Outcome::check(zero, Vec::new(), vec![ResidualItem { label: "value".into(), value: a.to_string(), zero }]))
            }
            "psi" => {
                let map = self.require_map()?;
                let d = psi_defect(map)?;
                let gens = map.alg().generators();
                let res = d.residual.iter().enumerate().map(|(i, x)| residual(format!("Psi({0}) - {0} - h d ln det J", gens[i]), x)).collect();
                Ok(Outcome::check(d.is_zero(), Vec::new(), res))
            }
            "liftdiff" => {
                let map = self.require_map()?;
                let r = lift_difference_residual(map)?;
                let ok = r.iter().all(NCPoly::is_zero);
                let res = r.iter().enumerate().map(|(i, x)| residual(format!("right - left - h J^-T grad ln det J ({})", Self::momentum_label(map, i)), x)).collect();
                Ok(Outcome::check(ok, Vec::new(), res))
            }
            "lrdiff" => {
                let map = self.require_map()?;
                let (a, _) = self.target_data(map, args.first(), None)?;
                let d = lr_difference(map, &a)?;
                let mut res = vec![residual("direct - closed form", &d.residual)];
                for (j, s) in d.divergence_identity.iter().enumerate() {
                    res.push(ResidualItem { label: format!("divergence identity {}", j + 1), value: map.ctx().format(s), zero: s.is_zero() });
                }
                Ok(Outcome::check(d.agrees(), vec![Item::labeled("difference", d.direct.format())], res))
            }
            "gradlogdet" => {
                let map = self.require_map()?;
                let ctx = map.ctx();
                let mut res = Vec::new();
                for i in 0..map.n() {
                    let [a, b, c] = grad_log_det_routes(map, i)?;
                    for (lbl, other) in [("adjugate", &b), ("determinant", &c)] {
                        let d = ctx.sub(&a, other);
                        res.push(ResidualItem { label: format!("trace - {lbl} route ({})", ctx.coordinate_names()[i]), value: ctx.format(&d), zero: d.is_zero() });
                    }
                }
                let ok = res.iter().all(|r| r.zero);
                Ok(Outcome::check(ok, Vec::new(), res))
            }
            "inverse" => {
                let map = self.require_map()?;
                let classical = has("classical");
                let bound = self.bound(args, 4)?;
                let (search, (labels, names)) = self.inverse(map, classical, bound)?;
                let InverseSearch::Found(g) = search else {
                    return Ok(Outcome { status: Status::Fail, values: Vec::new(), residuals: Vec::new(), message: Some(format!("no inverse of degree <= {bound}")) });
                };
                let f = if classical {
                    let pair = classical_lift(map)?;
                    pair.q.iter().chain(&pair.p).map(|s| symbol_to_poly(s, map.n())).collect::<Result<Vec<_>, _>>()?
                } else {
                    map_polys(map)?
                };
                let m = f.len();
                let comp = compose_polys(&g, &f);
                let vars: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
                let mut res = Vec::new();
                for (i, c) in comp.iter().enumerate() {
                    let d = c - &Poly::var(m, i);
                    res.push(ResidualItem { label: format!("G(F)_{} - {}", i + 1, labels[i]), value: format_inverse(std::slice::from_ref(&d), &vars).remove(0), zero: d.is_zero() });
                }
                let values = format_inverse(&g, &names).into_iter().zip(&labels).map(|(v, l)| Item::labeled(l.clone(), v)).collect();
                let ok = res.iter().all(|r| r.zero);
                Ok(Outcome::check(ok, values, res))
            }
            _ => {
                if args.len() != 1 {
                    return fail("`check` takes one truth-valued expression");
                }
                match ev.eval(&args[0])? {
                    Value::Bool(b) => Ok(Outcome::check(b, Vec::new(), Vec::new())),
                    other => fail(format!("`check` needs a truth value, found {}", other.kind())),
                }
            }
        }
    }
}

fn value_is_zero(v: &Value) -> EResult<bool> {
    match v {
        Value::Elem(x) => Ok(x.is_zero()),
        Value::Sym(s) => Ok(s.is_zero()),
        Value::Tuple(items) => items.iter().map(value_is_zero).try_fold(true, |a, b| Ok(a && b?)),
        other => fail(format!("cannot compare {}", other.kind())),
    }
}

/// Expression evaluation over one algebra.
pub struct Evaluator<'a> {
    alg: &'a Arc<AlgebraSpec>,
    bindings: &'a BTreeMap<String, Value>,
    map: Option<&'a PointMap>,
}

impl<'a> Evaluator<'a> {
    fn map(&self) -> EResult<&'a PointMap> {
        self.map.ok_or_else(|| EvalError("no map defined (use `map ...;` first)".into()))
    }

    fn scalar(&self, e: &Expr) -> EResult<Scalar> {
        match self.eval(e)? {
            Value::Elem(x) => x.as_scalar().ok_or_else(|| EvalError(format!("`{e}` is not a scalar"))),
            Value::Sym(s) => sym_scalar(&s).ok_or_else(|| EvalError(format!("`{e}` is not a scalar"))),
            other => fail(format!("expected a scalar, found {}", other.kind())),
        }
    }

    fn index(&self, e: &Expr) -> EResult<usize> {
        let s = self.scalar(e)?;
        let k = s.as_constant().filter(|k| k.is_integer() && *k >= int(0)).ok_or_else(|| EvalError(format!("`{e}` is not a nonnegative integer")))?;
        k.to_integer().try_into().map_err(|_| EvalError(format!("`{e}` is too large")))
    }

    /// A 1-based index into `0..n`.
    fn position(&self, e: &Expr, n: usize) -> EResult<usize> {
        let k = self.index(e)?;
        if k == 0 || k > n {
            return fail(format!("index {k} out of range 1..{n}"));
        }
        Ok(k - 1)
    }

    fn var(&self, e: &Expr, alg: &AlgebraSpec) -> EResult<Var> {
        match e {
            Expr::Ident(n) => alg.var_by_name(n).ok_or_else(|| EvalError(format!("`{n}` is not a variable of the algebra"))),
            _ => fail(format!("expected a variable name, found `{e}`")),
        }
    }

    fn gen(&self, e: &Expr, alg: &AlgebraSpec) -> EResult<usize> {
        match self.var(e, alg)? {
            Var::Gen(g) => Ok(g),
            Var::Coord(_) => fail(format!("`{e}` is a coordinate, not a generator")),
        }
    }

    fn pair_args(&self, args: &[Expr]) -> EResult<(Vec<Value>, Vec<Value>)> {
        if args.len() != 2 {
            return fail("a pair is given as (P1, ..., PN), (Q1, ..., QN)");
        }
        let p = self.eval(&args[0])?.tuple();
        let q = self.eval(&args[1])?.tuple();
        if p.len() != q.len() {
            return fail("P and Q must have the same length");
        }
        Ok((p, q))
    }

    pub fn eval(&self, e: &Expr) -> EResult<Value> {
        Ok(match e {
            Expr::Int(s) => {
                let k: Rational = s.parse().map_err(|_| EvalError(format!("bad integer `{s}`")))?;
                Value::Elem(NCPoly::constant(self.alg, k))
            }
            Expr::Ident(n) => self.ident(n)?,
            Expr::Neg(x) => match self.eval(x)? {
                Value::Elem(x) => Value::Elem(x.neg()),
                Value::Sym(s) => Value::Sym(s.neg()),
                other => return fail(format!("cannot negate {}", other.kind())),
            },
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?)?,
            Expr::Sub(a, b) => self.sub(self.eval(a)?, self.eval(b)?)?,
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?)?,
            Expr::Div(a, b) => {
                let den = self.scalar(b).map_err(|_| EvalError(format!("division by `{b}`, which is not a scalar")))?;
                match self.eval(a)? {
                    Value::Elem(x) => {
                        if x.ctx() != self.alg.ctx().as_ref() {
                            return fail("division across scalar contexts");
                        }
                        Value::Elem(x.div_scalar(&den)?)
                    }
                    Value::Sym(s) => {
                        let inv = s.ctx().inv(&self.phase_scalar(&den, s.ctx())?)?;
                        Value::Sym(s.scale(&inv))
                    }
                    other => return fail(format!("cannot divide {}", other.kind())),
                }
            }
            Expr::Pow(b, k) => match self.eval(b)? {
                Value::Elem(x) => {
                    if *k >= 0 {
                        Value::Elem(x.pow(*k as u32)?)
                    } else {
                        let s = x.as_scalar().ok_or(Error::NegativePower)?;
                        Value::Elem(NCPoly::scalar(x.alg(), x.ctx().pow(&s, *k)?))
                    }
                }
                Value::Sym(s) => {
                    if *k < 0 {
                        let c = sym_scalar(&s).ok_or(Error::NegativePower)?;
                        Value::Sym(s.constant_like(s.ctx().pow(&c, *k)?))
                    } else {
                        let mut acc = s.constant_like(s.ctx().one());
                        for _ in 0..*k {
                            acc = acc.mul(&s)?;
                        }
                        Value::Sym(acc)
                    }
                }
                other => return fail(format!("cannot raise {} to a power", other.kind())),
            },
            Expr::Comm(a, b) => Value::Elem(self.eval(a)?.elem()?.commutator(&self.eval(b)?.elem()?)?),
            Expr::Poisson(a, b) => Value::Sym(poisson(&self.eval(a)?.sym()?, &self.eval(b)?.sym()?)?),
            Expr::Tuple(items) => Value::Tuple(items.iter().map(|x| self.eval(x)).collect::<EResult<_>>()?),
            Expr::Call(name, args) => self.call(name, args)?,
        })
    }

    /// A scalar of the algebra's context read in the phase-space context
    /// (they differ for Weyl algebras with abstract generators).
    fn phase_scalar(&self, s: &Scalar, phase: &ScalarContext) -> EResult<Scalar> {
        if let Some(k) = s.as_constant() {
            return Ok(phase.constant(k));
        }
        let alg_ctx = self.alg.ctx();
        if alg_ctx.as_ref() == phase {
            return Ok(s.clone());
        }
        Ok(phase.eval_foreign_poly(alg_ctx, s.numer(), &alg_ctx.names().iter().map(|n| phase.symbol(n)).collect::<Result<Vec<_>, _>>()?)
            .and_then(|num| {
                let den = phase.eval_foreign_poly(alg_ctx, s.denom(), &alg_ctx.names().iter().map(|n| phase.symbol(n)).collect::<Result<Vec<_>, _>>()?)?;
                phase.div(&num, &den)
            })?)
    }

    fn ident(&self, n: &str) -> EResult<Value> {
        if let Some(v) = self.bindings.get(n) {
            return Ok(v.clone());
        }
        if let Some(v) = self.alg.var_by_name(n) {
            return Ok(Value::Elem(NCPoly::var(self.alg, v)));
        }
        match self.alg.ctx().symbol(n) {
            Ok(s) => Ok(Value::Elem(NCPoly::scalar(self.alg, s))),
            Err(_) => fail(format!("unknown name `{n}`")),
        }
    }

    fn binop(
        &self,
        a: Value,
        b: Value,
        elem: &dyn Fn(&NCPoly, &NCPoly) -> weylcalc_core::Result<NCPoly>,
        sym: &dyn Fn(&CommutativeSymbol, &CommutativeSymbol) -> weylcalc_core::Result<CommutativeSymbol>,
        what: &str,
    ) -> EResult<Value> {
        Ok(match (a, b) {
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(elem(&x, &y)?),
            (Value::Tuple(x), Value::Tuple(y)) if x.len() == y.len() && what != "multiply" => {
                Value::Tuple(x.into_iter().zip(y).map(|(a, b)| self.binop(a, b, elem, sym, what)).collect::<EResult<_>>()?)
            }
            (a @ (Value::Elem(_) | Value::Sym(_)), b @ (Value::Elem(_) | Value::Sym(_))) => {
                let (x, y) = (self.to_sym(a)?, self.to_sym(b)?);
                Value::Sym(sym(&x, &y)?)
            }
            (a, b) => return fail(format!("cannot {what} {} and {}", a.kind(), b.kind())),
        })
    }

    /// Mixed arithmetic reads elements through their normal symbol; bare
    /// scalars are carried over into the symbol's context.
    fn to_sym(&self, v: Value) -> EResult<CommutativeSymbol> {
        v.sym()
    }

    fn add(&self, a: Value, b: Value) -> EResult<Value> {
        self.binop(a, b, &|x, y| x.checked_add(y), &|x, y| x.add(y), "add")
    }

    fn sub(&self, a: Value, b: Value) -> EResult<Value> {
        self.binop(a, b, &|x, y| x.checked_sub(y), &|x, y| x.sub(y), "subtract")
    }

    fn mul(&self, a: Value, b: Value) -> EResult<Value> {
        self.binop(a, b, &|x, y| x.checked_mul(y), &|x, y| x.mul(y), "multiply")
    }

    fn call(&self, name: &str, args: &[Expr]) -> EResult<Value> {
        let arity = |lo: usize, hi: usize| -> EResult<()> {
            if args.len() < lo || args.len() > hi {
                let want = if lo == hi { lo.to_string() } else if hi == usize::MAX { format!("at least {lo}") } else { format!("{lo} to {hi}") };
                return fail(format!("`{name}` takes {want} arguments, got {}", args.len()));
            }
            Ok(())
        };
        let el = |i: usize| -> EResult<NCPoly> { self.eval(&args[i])?.elem() };
        let sy = |i: usize| -> EResult<CommutativeSymbol> { self.eval(&args[i])?.sym() };
        let elems = |from: usize| -> EResult<Vec<NCPoly>> { args[from..].iter().map(|e| self.eval(e)?.elem()).collect() };
        Ok(match name {
            "normalize" => {
                arity(1, 2)?;
                let x = el(0)?;
                if args.len() == 2 {
                    let seed = self.index(&args[1])? as u64;
                    let mut rng = Budget { seed, scale_percent: 100 }.rng(0);
                    Value::Elem(normalize_with(x.alg(), &to_raw(&x), Strategy::Random(&mut rng))?)
                } else {
                    Value::Elem(x)
                }
            }
            "comm" => {
                arity(2, 2)?;
                Value::Elem(el(0)?.commutator(&el(1)?)?)
            }
            "poisson" => {
                arity(2, 2)?;
                Value::Sym(poisson(&sy(0)?, &sy(1)?)?)
            }
            "dag" => {
                arity(1, 1)?;
                Value::Elem(dagger(&el(0)?)?)
            }
            "res" => {
                arity(1, 1)?;
                let x = el(0)?;
                let layout = x.alg().require_weyl()?;
                Value::Sym(CommutativeSymbol::scalar(layout, res(&x)?))
            }
            "resform" => {
                arity(2, 2)?;
                let x = el(0)?;
                let layout = x.alg().require_weyl()?;
                Value::Sym(CommutativeSymbol::scalar(layout, res_form(&x, &el(1)?)?))
            }
            "expand" => {
                arity(2, 2)?;
                Value::Elem(bracket_expansion_pair(&el(0)?, &el(1)?)?)
            }
            "expand_theta" => {
                arity(2, 2)?;
                Value::Elem(bracket_expansion_theta(&el(0)?, &el(1)?)?)
            }
            "symmetric" => {
                arity(2, 2)?;
                Value::Elem(symmetric_form(&el(0)?, &el(1)?)?)
            }
            "smbl" => {
                arity(1, 1)?;
                Value::Sym(smbl(&el(0)?)?)
            }
            "nsymbol" => {
                arity(1, 1)?;
                Value::Sym(normal_symbol(&el(0)?)?)
            }
            "hzero" => {
                arity(1, 1)?;
                match self.eval(&args[0])? {
                    Value::Sym(s) => Value::Sym(s.at_h_zero()?),
                    Value::Elem(x) => Value::Elem(x.map_coeffs(|c| x.ctx().at_h_zero(c))?),
                    other => return fail(format!("cannot set h = 0 in {}", other.kind())),
                }
            }
            "quantize" => {
                arity(1, 1)?;
                Value::Elem(normal_quantize(&sy(0)?, self.alg)?)
            }
            "star" => {
                arity(2, 2)?;
                Value::Sym(star_normal(&sy(0)?, &sy(1)?)?)
            }
            "diff" => {
                arity(2, usize::MAX)?;
                match self.eval(&args[0])? {
                    Value::Elem(x) => {
                        let alg = x.alg().clone();
                        let vars: Vec<EResult<Var>> = args[1..].iter().map(|v| self.var(v, &alg)).collect();
                        if vars.iter().all(Result::is_ok) {
                            Value::Elem(partial_seq(&x, &vars.into_iter().collect::<EResult<Vec<_>>>()?)?)
                        } else if let Some(s) = x.as_scalar() {
                            let mut s = s;
                            for v in &args[1..] {
                                let Expr::Ident(n) = v else { return fail(format!("expected a coordinate, found `{v}`")) };
                                s = x.ctx().diff_by_name(&s, n)?;
                            }
                            Value::Elem(NCPoly::scalar(&alg, s))
                        } else {
                            return Err(vars.into_iter().find_map(Result::err).unwrap());
                        }
                    }
                    Value::Sym(s) => {
                        let mut s = s;
                        for v in &args[1..] {
                            let Expr::Ident(n) = v else { return fail(format!("expected a variable, found `{v}`")) };
                            s = if let Some(i) = s.momentum_names().iter().position(|m| m == n) {
                                s.diff_p(i)
                            } else {
                                s.diff_q(s.ctx().coordinate_index(n)?)?
                            };
                        }
                        Value::Sym(s)
                    }
                    other => return fail(format!("cannot differentiate {}", other.kind())),
                }
            }
            "diffmulti" => {
                arity(1, usize::MAX)?;
                let x = el(0)?;
                let sigma = args[1..].iter().map(|e| Ok(self.index(e)? as u32)).collect::<EResult<Vec<_>>>()?;
                Value::Elem(partial_multi(&x, &sigma)?)
            }
            "opdiff" => {
                arity(3, 3)?;
                let h = el(0)?;
                let k = self.gen(&args[1], h.alg())?;
                Value::Elem(op_partial(&h, k, &el(2)?)?)
            }
            "differential" => {
                arity(1, 1)?;
                Value::Form(differential(&el(0)?))
            }
            "pairing" => {
                arity(2, usize::MAX)?;
                let Value::Form(w) = self.eval(&args[0])? else { return fail("`pairing` needs a 1-form first") };
                let x = DerivationSpec::new(w.alg(), elems(1)?)?;
                Value::Elem(pair(&w, &x)?)
            }
            "derive" => {
                arity(1, usize::MAX)?;
                let h = el(0)?;
                let x = DerivationSpec::new(h.alg(), elems(1)?)?;
                Value::Elem(apply_derivation(&x, &h)?)
            }
            "euler" => {
                arity(1, 1)?;
                Value::Elem(euler_operator(&el(0)?)?)
            }
            "ad" => {
                arity(2, 2)?;
                Value::Elem(ad(&el(0)?, &el(1)?)?)
            }
            "adgen" => {
                arity(2, 2)?;
                let h = el(0)?;
                let i = self.gen(&args[1], h.alg())?;
                Value::Elem(ad_generator_formula(&h, i)?)
            }
            "ideal" => {
                arity(5, 5)?;
                let i = self.gen(&args[3], self.alg)?;
                let j = self.gen(&args[4], self.alg)?;
                Value::Bool(ideal_preserved(self.alg, &el(0)?, &el(1)?, &el(2)?, i, j)?)
            }
            "subst" => {
                arity(2, usize::MAX)?;
                let h = el(0)?;
                let images = elems(1)?;
                let target = images[0].alg().clone();
                Value::Elem(substitute(&h, &images, &target)?)
            }
            "chain" => {
                arity(4, 4)?;
                let h = el(0)?;
                let u = self.eval(&args[1])?.tuple().into_iter().map(Value::elem).collect::<EResult<Vec<_>>>()?;
                let x = el(3)?;
                let alpha = self.gen(&args[2], x.alg())?;
                Value::Bool(chain_rule_check(&h, &u, alpha, &x)?)
            }
            "cyclic" => {
                arity(2, 2)?;
                let f = el(0)?;
                let j = self.gen(&args[1], f.alg())?;
                Value::Elem(cyclic_variational(&f, j)?)
            }
            "necklace" => {
                arity(1, 1)?;
                let x = el(0)?;
                let classes = necklace(&x)?;
                let gens = x.alg().generators();
                let parts: Vec<String> = classes
                    .iter()
                    .map(|(w, c)| {
                        let word = if w.is_empty() { "1".to_string() } else { w.iter().map(|&g| gens[g].as_str()).collect::<Vec<_>>().join(" ") };
                        format!("<{word}>: {}", x.ctx().format(c))
                    })
                    .collect();
                Value::Text(if parts.is_empty() { "0".into() } else { parts.join(", ") })
            }
            "commsum" => {
                arity(1, 1)?;
                Value::Bool(is_commutator_sum(&el(0)?)?)
            }
            "abelianize" => {
                arity(1, 1)?;
                let x = el(0)?;
                Value::Text(format_poly(&abelianize(&x)?, x.alg().generators()))
            }
            "embed" => {
                arity(1, 1)?;
                Value::Elem(embed_weyl(&el(0)?, self.alg)?)
            }
            "truncate" => {
                arity(2, 2)?;
                let k = self.index(&args[1])? as u32;
                Value::Elem(el(0)?.truncate_h(k))
            }
            "equal" => {
                arity(2, 2)?;
                let d = self.sub(self.eval(&args[0])?, self.eval(&args[1])?)?;
                Value::Bool(value_is_zero(&d)?)
            }
            "target" => {
                arity(1, 1)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                Value::Elem(NCPoly::scalar(map.alg(), map.targets()[i].clone()))
            }
            "left" | "right" => {
                arity(1, 1)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                let pair = if name == "left" { lift_left(map)? } else { lift_right(map)? };
                Value::Elem(pair.p[i].clone())
            }
            "gaugep" => {
                arity(2, 2)?;
                let map = self.map()?;
                let f = self.scalar(&args[0])?;
                let i = self.position(&args[1], map.n())?;
                Value::Elem(gauge_lift(map, &f)?.p[i].clone())
            }
            "classical" => {
                arity(1, 1)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                Value::Sym(classical_lift(map)?.p[i].clone())
            }
            "naive_left" | "naive_right" => {
                arity(0, 0)?;
                let side = if name == "naive_left" { Side::Left } else { Side::Right };
                Value::Elem(naive_transformed_hamiltonian(self.map()?, side)?.0)
            }
            "hlr" | "hrl" => {
                arity(0, 0)?;
                let map = self.map()?;
                let (a, b) = mechanical_lr(map, &identity_matrix(map.target_ctx(), map.n()), &map.target_ctx().zero())?;
                Value::Elem(if name == "hlr" { a } else { b })
            }
            "glogdet" => {
                arity(1, 1)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                Value::Elem(NCPoly::scalar(map.alg(), grad_log_det(map, i)?))
            }
            "psimap" => {
                arity(1, 1)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                Value::Elem(psi_defect(map)?.psi[i].clone())
            }
            "det" => {
                arity(0, 0)?;
                let map = self.map()?;
                Value::Elem(NCPoly::scalar(map.alg(), map.jacobian().det.clone()))
            }
            "jac" => {
                arity(2, 2)?;
                let map = self.map()?;
                let i = self.position(&args[0], map.n())?;
                let j = self.position(&args[1], map.n())?;
                Value::Elem(NCPoly::scalar(map.alg(), map.jacobian().entries[i][j].clone()))
            }
            other => return fail(format!("unknown function `{other}`")),
        })
    }
}
