use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::jetcalc::{BigradedForm, EvolField, Gen};
use crate::linop::LinDiffOp;
use crate::symexpr::{BundleSpec, ElemFn, Expr, JetVar, MultiIndex, Rational, Symbol};
use crate::varcalc::Lagrangian;

use super::lexer::{tokenize, Tok, Token};
use super::{Diagnostic, DiagnosticKind, Model, OperatorDecl};

const RESERVED: &[&str] = &[
    "version",
    "model",
    "independent",
    "dependent",
    "constant",
    "lagrangian",
    "symmetry",
    "operator",
    "solved",
    "chi",
    "D",
    "sin",
    "cos",
    "exp",
    "dV",
    "dH",
];

#[derive(Clone, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn of(t: &Token) -> Self {
        Pos {
            line: t.line,
            col: t.col,
        }
    }

    fn diag(&self, kind: DiagnosticKind, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(kind, self.line, self.col, msg)
    }
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Name(String),
    Jet(String, Vec<(String, Pos)>),
    DOp(Vec<(String, Pos)>),
    Call(ElemFn, Box<Ast>),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Debug)]
struct Ast {
    node: Node,
    pos: Pos,
}

enum Decl {
    Independent(Vec<(String, Pos)>),
    Dependent(Vec<(String, Pos)>),
    Constant(Vec<(String, Pos)>),
    Lagrangian(String, Pos, Ast),
    Symmetry(String, Pos, Vec<(String, Pos, Ast)>),
    Operator(String, Pos, Vec<(String, Pos)>, Vec<(Pos, Vec<Ast>)>),
    Solved(Pos, Vec<(Ast, Ast)>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, Diagnostic> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        let t = self.peek();
        Diagnostic::new(
            DiagnosticKind::Syntax,
            t.line,
            t.col,
            format!("unexpected {}", t.tok.describe()),
        )
        .with_expected(expected.iter().map(|s| s.to_string()))
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<Token, Diagnostic> {
        if self.is_punct(c) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{c}`")]))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Token, Diagnostic> {
        if self.is_keyword(kw) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[&format!("`{kw}`")]))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), Diagnostic> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                let t = self.bump();
                Ok((s, Pos::of(&t)))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn expect_eof(&self) -> Result<(), Diagnostic> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn ident_list(&mut self, stop: char) -> Result<Vec<(String, Pos)>, Diagnostic> {
        let mut out = vec![self.expect_ident()?];
        while !self.is_punct(stop) {
            if matches!(self.peek().tok, Tok::Ident(_)) {
                out.push(self.expect_ident()?);
            } else {
                return Err(self.unexpected(&["identifier", &format!("`{stop}`")]));
            }
        }
        Ok(out)
    }

    fn index_list(&mut self) -> Result<Vec<(String, Pos)>, Diagnostic> {
        self.expect_punct('[')?;
        let mut out = Vec::new();
        if self.eat_punct(']') {
            return Ok(out);
        }
        loop {
            out.push(self.expect_ident()?);
            if self.eat_punct(']') {
                return Ok(out);
            }
            if !self.eat_punct(',') {
                return Err(self.unexpected(&["`,`", "`]`"]));
            }
        }
    }

    fn expr(&mut self) -> Result<Ast, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Punct(c @ ('+' | '-')) => c,
                _ => return Ok(lhs),
            };
            let t = self.bump();
            let rhs = self.term()?;
            lhs = Ast {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos: Pos::of(&t),
            };
        }
    }

    fn term(&mut self) -> Result<Ast, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Punct(c @ ('*' | '/')) => c,
                _ => return Ok(lhs),
            };
            let t = self.bump();
            let rhs = self.unary()?;
            lhs = Ast {
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
                pos: Pos::of(&t),
            };
        }
    }

    fn unary(&mut self) -> Result<Ast, Diagnostic> {
        if self.is_punct('-') {
            let t = self.bump();
            let inner = self.unary()?;
            return Ok(Ast {
                node: Node::Neg(Box::new(inner)),
                pos: Pos::of(&t),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast, Diagnostic> {
        let base = self.atom()?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let t = self.bump();
        match &self.peek().tok {
            Tok::Int(k) => {
                let k = k.to_u32().ok_or_else(|| {
                    Pos::of(self.peek()).diag(DiagnosticKind::Semantic, "exponent too large")
                })?;
                self.bump();
                Ok(Ast {
                    node: Node::Pow(Box::new(base), k),
                    pos: Pos::of(&t),
                })
            }
            _ => Err(self.unexpected(&["non-negative integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<Ast, Diagnostic> {
        let t = self.peek().clone();
        let pos = Pos::of(&t);
        match &t.tok {
            Tok::Int(k) => {
                self.bump();
                Ok(Ast {
                    node: Node::Int(k.clone()),
                    pos,
                })
            }
            Tok::Punct('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let func = match name.as_str() {
                    "sin" => Some(ElemFn::Sin),
                    "cos" => Some(ElemFn::Cos),
                    "exp" => Some(ElemFn::Exp),
                    _ => None,
                };
                if let Some(f) = func {
                    self.bump();
                    self.expect_punct('(')?;
                    let arg = self.expr()?;
                    self.expect_punct(')')?;
                    return Ok(Ast {
                        node: Node::Call(f, Box::new(arg)),
                        pos,
                    });
                }
                if name == "D" {
                    self.bump();
                    let idx = self.index_list()?;
                    return Ok(Ast {
                        node: Node::DOp(idx),
                        pos,
                    });
                }
                let name = name.clone();
                self.bump();
                if self.is_punct('[') {
                    let idx = self.index_list()?;
                    return Ok(Ast {
                        node: Node::Jet(name, idx),
                        pos,
                    });
                }
                Ok(Ast {
                    node: Node::Name(name),
                    pos,
                })
            }
            _ => Err(self.unexpected(&["number", "identifier", "`(`", "`-`"])),
        }
    }

    fn decl(&mut self) -> Result<Decl, Diagnostic> {
        let kw = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected(&DECL_KEYWORDS)),
        };
        let start = self.bump();
        let start = Pos::of(&start);
        match kw.as_str() {
            "independent" | "dependent" | "constant" => {
                let names = self.ident_list(';')?;
                self.expect_punct(';')?;
                Ok(match kw.as_str() {
                    "independent" => Decl::Independent(names),
                    "dependent" => Decl::Dependent(names),
                    _ => Decl::Constant(names),
                })
            }
            "lagrangian" => {
                let (name, pos) = self.expect_ident()?;
                self.expect_punct('=')?;
                let e = self.expr()?;
                self.expect_punct(';')?;
                Ok(Decl::Lagrangian(name, pos, e))
            }
            "symmetry" => {
                let (name, pos) = self.expect_ident()?;
                self.expect_punct('{')?;
                let mut comps = Vec::new();
                loop {
                    if self.is_punct('}') && !comps.is_empty() {
                        self.bump();
                        break;
                    }
                    if !self.is_keyword("chi") {
                        return Err(self.unexpected(if comps.is_empty() {
                            &["`chi`"]
                        } else {
                            &["`chi`", "`}`"]
                        }));
                    }
                    self.bump();
                    self.expect_punct('[')?;
                    let (field, fpos) = self.expect_ident()?;
                    self.expect_punct(']')?;
                    self.expect_punct('=')?;
                    let e = self.expr()?;
                    self.expect_punct(';')?;
                    comps.push((field, fpos, e));
                }
                Ok(Decl::Symmetry(name, pos, comps))
            }
            "operator" => {
                let (name, pos) = self.expect_ident()?;
                self.expect_punct('(')?;
                let params = self.ident_list(')')?;
                self.expect_punct(')')?;
                self.expect_punct('{')?;
                let mut rows = Vec::new();
                loop {
                    if self.is_punct('}') && !rows.is_empty() {
                        self.bump();
                        break;
                    }
                    let rpos = Pos::of(self.peek());
                    let mut row = vec![self.expr()?];
                    while self.eat_punct(',') {
                        row.push(self.expr()?);
                    }
                    if !self.is_punct(';') {
                        return Err(self.unexpected(&["`,`", "`;`"]));
                    }
                    self.bump();
                    rows.push((rpos, row));
                }
                Ok(Decl::Operator(name, pos, params, rows))
            }
            "solved" => {
                self.expect_punct('{')?;
                let mut eqs = Vec::new();
                loop {
                    if self.is_punct('}') && !eqs.is_empty() {
                        self.bump();
                        break;
                    }
                    let lhs = self.atom()?;
                    self.expect_punct('=')?;
                    let rhs = self.expr()?;
                    self.expect_punct(';')?;
                    eqs.push((lhs, rhs));
                }
                Ok(Decl::Solved(start, eqs))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&DECL_KEYWORDS))
            }
        }
    }
}

const DECL_KEYWORDS: [&str; 8] = [
    "`independent`",
    "`dependent`",
    "`constant`",
    "`lagrangian`",
    "`symmetry`",
    "`operator`",
    "`solved`",
    "`}`",
];

/// Formal operator polynomial `sum c_I D_I` used while reading operator entries.
type OpPoly = BTreeMap<MultiIndex, Expr>;

struct Scope<'a> {
    bundle: &'a BundleSpec,
}

impl Scope<'_> {
    fn resolve_index(&self, idx: &[(String, Pos)]) -> Result<MultiIndex, Diagnostic> {
        let n = self.bundle.dim();
        let mut positions = Vec::with_capacity(idx.len());
        for (name, pos) in idx {
            match self.bundle.independent_index(name) {
                Some(i) => positions.push(i),
                None => {
                    return Err(pos.diag(
                        DiagnosticKind::Undeclared,
                        format!("`{name}` is not an independent variable"),
                    ))
                }
            }
        }
        Ok(MultiIndex::from_positions(n, &positions))
    }

    fn resolve_name(&self, name: &str, pos: &Pos) -> Result<Symbol, Diagnostic> {
        if let Some(s) = self.bundle.lookup(name) {
            return Ok(s);
        }
        if let Some((base, suffix)) = name.rsplit_once('_') {
            if let Some(field) = self.bundle.dependent_index(base) {
                if suffix.is_empty() {
                    return Err(pos.diag(
                        DiagnosticKind::Undeclared,
                        format!("`{name}` has an empty jet suffix"),
                    ));
                }
                if self.bundle.independent().iter().any(|s| s.chars().count() != 1) {
                    return Err(pos.diag(
                        DiagnosticKind::AmbiguousJetSuffix,
                        format!(
                            "suffix notation `{name}` needs single-letter independent variables; \
                             write `{base}[...]` instead"
                        ),
                    ));
                }
                let mut positions = Vec::new();
                for c in suffix.chars() {
                    match self.bundle.independent_index(&c.to_string()) {
                        Some(i) => positions.push(i),
                        None => {
                            return Err(pos.diag(
                                DiagnosticKind::Undeclared,
                                format!("`{c}` in `{name}` is not an independent variable"),
                            ))
                        }
                    }
                }
                return Ok(Symbol::Jet(self.bundle.jet(field, &positions)));
            }
        }
        Err(pos.diag(
            DiagnosticKind::Undeclared,
            format!("`{name}` is not declared"),
        ))
    }

    fn jet(&self, base: &str, idx: &[(String, Pos)], pos: &Pos) -> Result<JetVar, Diagnostic> {
        let field = self.bundle.dependent_index(base).ok_or_else(|| {
            pos.diag(
                DiagnosticKind::Undeclared,
                format!("`{base}` is not a dependent variable"),
            )
        })?;
        Ok(JetVar::new(field, self.resolve_index(idx)?))
    }

    fn expr(&self, a: &Ast) -> Result<Expr, Diagnostic> {
        Ok(match &a.node {
            Node::Int(k) => Expr::constant(Rational::from_integer(k.clone())),
            Node::Name(name) => Expr::symbol(self.resolve_name(name, &a.pos)?),
            Node::Jet(base, idx) => Expr::jet(self.jet(base, idx, &a.pos)?),
            Node::DOp(_) => {
                return Err(a.pos.diag(
                    DiagnosticKind::Semantic,
                    "`D[...]` may only appear in operator entries",
                ))
            }
            Node::Call(f, arg) => Expr::func(*f, self.expr(arg)?),
            Node::Neg(inner) => -self.expr(inner)?,
            Node::Pow(base, k) => self.expr(base)?.pow(*k),
            Node::Bin(op, l, r) => {
                let l = self.expr(l)?;
                match op {
                    '+' => l + self.expr(r)?,
                    '-' => l - self.expr(r)?,
                    '*' => l * self.expr(r)?,
                    _ => l.scale(&self.divisor(r)?),
                }
            }
        })
    }

    /// The reciprocal of a nonzero rational divisor.
    fn divisor(&self, a: &Ast) -> Result<Rational, Diagnostic> {
        let d = self.expr(a)?;
        match d.as_constant() {
            Some(c) if !c.is_zero() => Ok(c.recip()),
            Some(_) => Err(a.pos.diag(DiagnosticKind::Semantic, "division by zero")),
            None => Err(a.pos.diag(
                DiagnosticKind::Semantic,
                "divisor must be a rational number",
            )),
        }
    }

    fn op(&self, a: &Ast) -> Result<OpPoly, Diagnostic> {
        let n = self.bundle.dim();
        let scalar = |e: Expr| -> OpPoly {
            let mut m = OpPoly::new();
            if !e.is_zero() {
                m.insert(MultiIndex::empty(n), e);
            }
            m
        };
        Ok(match &a.node {
            Node::DOp(idx) => {
                let mut m = OpPoly::new();
                m.insert(self.resolve_index(idx)?, Expr::one());
                m
            }
            Node::Neg(inner) => self
                .op(inner)?
                .into_iter()
                .map(|(k, v)| (k, -v))
                .collect(),
            Node::Pow(base, k) => {
                let b = self.op(base)?;
                let mut acc = scalar(Expr::one());
                for _ in 0..*k {
                    acc = op_mul(&acc, &b);
                }
                acc
            }
            Node::Bin(op, l, r) => {
                let l = self.op(l)?;
                match op {
                    '+' => op_add(l, self.op(r)?, 1),
                    '-' => op_add(l, self.op(r)?, -1),
                    '*' => op_mul(&l, &self.op(r)?),
                    _ => {
                        let c = self.divisor(r)?;
                        l.into_iter().map(|(k, v)| (k, v.scale(&c))).collect()
                    }
                }
            }
            _ => scalar(self.expr(a)?),
        })
    }
}

fn op_add(mut l: OpPoly, r: OpPoly, sign: i64) -> OpPoly {
    for (k, v) in r {
        let v = if sign < 0 { -v } else { v };
        let e = l.remove(&k).unwrap_or_default() + v;
        if !e.is_zero() {
            l.insert(k, e);
        }
    }
    l
}

fn op_mul(l: &OpPoly, r: &OpPoly) -> OpPoly {
    let mut out = OpPoly::new();
    for (i, a) in l {
        for (j, b) in r {
            let k = i.join(j);
            let e = out.remove(&k).unwrap_or_default() + a * b;
            if !e.is_zero() {
                out.insert(k, e);
            }
        }
    }
    out
}

fn check_name(name: &str, pos: &Pos, seen: &mut BTreeSet<String>) -> Result<(), Diagnostic> {
    if RESERVED.contains(&name) {
        return Err(pos.diag(
            DiagnosticKind::Semantic,
            format!("`{name}` is a reserved word"),
        ));
    }
    if !seen.insert(name.to_string()) {
        return Err(pos.diag(
            DiagnosticKind::Semantic,
            format!("`{name}` is declared twice"),
        ));
    }
    Ok(())
}

/// Parses a complete model file.
pub fn parse_model(src: &str) -> Result<Model, Diagnostic> {
    let mut p = Parser::new(src)?;
    if p.is_keyword("version") {
        p.bump();
        match &p.peek().tok {
            Tok::Int(v) if *v == BigInt::from(1) => {
                p.bump();
            }
            Tok::Int(v) => {
                let pos = Pos::of(p.peek());
                return Err(pos.diag(
                    DiagnosticKind::Semantic,
                    format!("unsupported grammar version {v}; this reader understands version 1"),
                ));
            }
            _ => return Err(p.unexpected(&["`1`"])),
        }
        p.expect_punct(';')?;
    }
    let model_tok = p.expect_keyword("model")?;
    let name = match &p.peek().tok {
        Tok::Str(s) => {
            let s = s.clone();
            p.bump();
            s
        }
        _ => return Err(p.unexpected(&["model name string"])),
    };
    p.expect_punct('{')?;
    let mut decls = Vec::new();
    while !p.is_punct('}') {
        decls.push(p.decl()?);
    }
    p.bump();
    p.expect_eof()?;

    let (mut indep, mut dep, mut consts) = (Vec::new(), Vec::new(), Vec::new());
    let mut seen = BTreeSet::new();
    for d in &decls {
        let (list, names) = match d {
            Decl::Independent(v) => (&mut indep, v),
            Decl::Dependent(v) => (&mut dep, v),
            Decl::Constant(v) => (&mut consts, v),
            _ => continue,
        };
        for (n, pos) in names {
            check_name(n, pos, &mut seen)?;
            list.push(n.clone());
        }
    }
    let mpos = Pos::of(&model_tok);
    if indep.is_empty() {
        return Err(mpos.diag(
            DiagnosticKind::Semantic,
            "model declares no independent variables",
        ));
    }
    if dep.is_empty() {
        return Err(mpos.diag(DiagnosticKind::Semantic, "model declares no dependent variables"));
    }
    let bundle = BundleSpec::new(&indep, &dep, &consts)
        .map_err(|e| mpos.diag(DiagnosticKind::Semantic, e.to_string()))?;
    let scope = Scope { bundle: &bundle };

    let mut model = Model {
        name,
        bundle: bundle.clone(),
        lagrangians: Vec::new(),
        symmetries: Vec::new(),
        operators: Vec::new(),
        solved: None,
    };
    let mut item_names = BTreeSet::new();
    for d in &decls {
        match d {
            Decl::Independent(_) | Decl::Dependent(_) | Decl::Constant(_) => {}
            Decl::Lagrangian(name, pos, e) => {
                check_name(name, pos, &mut item_names)?;
                model
                    .lagrangians
                    .push((name.clone(), Lagrangian::new(scope.expr(e)?)));
            }
            Decl::Symmetry(name, pos, comps) => {
                check_name(name, pos, &mut item_names)?;
                let mut chi = vec![None; bundle.fields()];
                for (field, fpos, e) in comps {
                    let a = bundle.dependent_index(field).ok_or_else(|| {
                        fpos.diag(
                            DiagnosticKind::Undeclared,
                            format!("`{field}` is not a dependent variable"),
                        )
                    })?;
                    if chi[a].is_some() {
                        return Err(fpos.diag(
                            DiagnosticKind::Semantic,
                            format!("component `{field}` given twice"),
                        ));
                    }
                    chi[a] = Some(scope.expr(e)?);
                }
                let chi = chi.into_iter().map(Option::unwrap_or_default).collect();
                model.symmetries.push((name.clone(), EvolField::new(chi)));
            }
            Decl::Operator(name, pos, params, rows) => {
                check_name(name, pos, &mut item_names)?;
                let mut pseen = BTreeSet::new();
                for (pname, ppos) in params {
                    if RESERVED.contains(&pname.as_str()) || !pseen.insert(pname.clone()) {
                        return Err(ppos.diag(
                            DiagnosticKind::Semantic,
                            format!("invalid or repeated parameter `{pname}`"),
                        ));
                    }
                    if bundle.independent_index(pname).is_some()
                        || bundle.constant_index(pname).is_some()
                    {
                        return Err(ppos.diag(
                            DiagnosticKind::Semantic,
                            format!("parameter `{pname}` clashes with a declared coordinate or constant"),
                        ));
                    }
                }
                let mut op = LinDiffOp::zero(rows.len(), params.len(), bundle.dim());
                for (r, (rpos, row)) in rows.iter().enumerate() {
                    if row.len() != params.len() {
                        return Err(rpos.diag(
                            DiagnosticKind::Semantic,
                            format!(
                                "operator row has {} entries but {} parameters are declared",
                                row.len(),
                                params.len()
                            ),
                        ));
                    }
                    for (c, entry) in row.iter().enumerate() {
                        for (idx, coeff) in scope.op(entry)? {
                            op.add_term(r, c, idx, coeff);
                        }
                    }
                }
                model.operators.push((
                    name.clone(),
                    OperatorDecl {
                        params: params.iter().map(|(n, _)| n.clone()).collect(),
                        op,
                    },
                ));
            }
            Decl::Solved(pos, eqs) => {
                if model.solved.is_some() {
                    return Err(pos.diag(DiagnosticKind::Semantic, "more than one solved block"));
                }
                let mut table: Vec<(JetVar, Expr)> = Vec::new();
                for (lhs, rhs) in eqs {
                    let v = match scope.expr(lhs)?.jet_vars().into_iter().next() {
                        Some(v) if scope.expr(lhs)? == Expr::jet(v.clone()) => v,
                        _ => {
                            return Err(lhs.pos.diag(
                                DiagnosticKind::Semantic,
                                "left side of a solved form must be a jet variable",
                            ))
                        }
                    };
                    if table.iter().any(|(w, _)| w.field == v.field) {
                        return Err(lhs.pos.diag(
                            DiagnosticKind::Semantic,
                            "each field may have at most one solved form",
                        ));
                    }
                    let r = scope.expr(rhs)?;
                    if let Some(bad) = r.jet_vars().into_iter().find(|w| w.rank_key() >= v.rank_key()) {
                        return Err(rhs.pos.diag(
                            DiagnosticKind::Semantic,
                            format!(
                                "right side contains {}, which is not ranked below {}",
                                bundle.jet_name(&bad),
                                bundle.jet_name(&v)
                            ),
                        ));
                    }
                    table.push((v, r));
                }
                model.solved = Some(table);
            }
        }
    }
    Ok(model)
}

/// Parses one expression over a bundle.
pub fn parse_expr(bundle: &BundleSpec, src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser::new(src)?;
    let a = p.expr()?;
    p.expect_eof()?;
    Scope { bundle }.expr(&a)
}

/// Parses an operator printed as rows `a, b; c, d` (trailing `;` optional).
pub fn parse_operator(bundle: &BundleSpec, src: &str) -> Result<LinDiffOp, Diagnostic> {
    let mut p = Parser::new(src)?;
    let scope = Scope { bundle };
    let mut rows: Vec<(Pos, Vec<OpPoly>)> = Vec::new();
    loop {
        let rpos = Pos::of(p.peek());
        let mut row = vec![scope.op(&p.expr()?)?];
        while p.eat_punct(',') {
            row.push(scope.op(&p.expr()?)?);
        }
        rows.push((rpos, row));
        if !p.eat_punct(';') || *p.peek_at(0) == Tok::Eof {
            break;
        }
    }
    p.expect_eof()?;
    let cols = rows[0].1.len();
    let mut op = LinDiffOp::zero(rows.len(), cols, bundle.dim());
    for (r, (rpos, row)) in rows.into_iter().enumerate() {
        if row.len() != cols {
            return Err(rpos.diag(
                DiagnosticKind::Semantic,
                format!("operator row has {} entries, the first row has {cols}", row.len()),
            ));
        }
        for (c, entry) in row.into_iter().enumerate() {
            for (idx, coeff) in entry {
                op.add_term(r, c, idx, coeff);
            }
        }
    }
    Ok(op)
}

/// Parses the canonical form syntax `(c)*[dV(u[t]), dH(x)] + ...`.
///
/// The literal `0` denotes the zero form; its bidegree is taken from
/// `zero_bidegree`.
pub fn parse_form(
    bundle: &BundleSpec,
    src: &str,
    zero_bidegree: (usize, usize),
) -> Result<BigradedForm, Diagnostic> {
    let mut p = Parser::new(src)?;
    let scope = Scope { bundle };
    if matches!(&p.peek().tok, Tok::Int(k) if k.is_zero()) && *p.peek_at(1) == Tok::Eof {
        return Ok(BigradedForm::zero(zero_bidegree.0, zero_bidegree.1));
    }
    let mut out: Option<BigradedForm> = None;
    loop {
        let tpos = Pos::of(p.peek());
        p.expect_punct('(')?;
        let coeff = scope.expr(&p.expr()?)?;
        p.expect_punct(')')?;
        p.expect_punct('*')?;
        p.expect_punct('[')?;
        let mut gens = Vec::new();
        if !p.eat_punct(']') {
            loop {
                let (kind, kpos) = p.expect_ident()?;
                p.expect_punct('(')?;
                match kind.as_str() {
                    "dV" => {
                        let a = p.atom()?;
                        let e = scope.expr(&a)?;
                        match e.jet_vars().into_iter().next() {
                            Some(v) if e == Expr::jet(v.clone()) => gens.push(Gen::Contact(v)),
                            _ => {
                                return Err(a.pos.diag(
                                    DiagnosticKind::Semantic,
                                    "dV(...) takes a jet variable",
                                ))
                            }
                        }
                    }
                    "dH" => {
                        let (x, xpos) = p.expect_ident()?;
                        let i = bundle.independent_index(&x).ok_or_else(|| {
                            xpos.diag(
                                DiagnosticKind::Undeclared,
                                format!("`{x}` is not an independent variable"),
                            )
                        })?;
                        gens.push(Gen::Horizontal(i));
                    }
                    _ => {
                        return Err(kpos
                            .diag(DiagnosticKind::Syntax, format!("unexpected `{kind}`"))
                            .with_expected(["`dV`", "`dH`"]))
                    }
                }
                p.expect_punct(')')?;
                if p.eat_punct(']') {
                    break;
                }
                if !p.eat_punct(',') {
                    return Err(p.unexpected(&["`,`", "`]`"]));
                }
            }
        }
        let term = BigradedForm::monomial(coeff, gens);
        out = Some(match out {
            None => term,
            Some(acc) if acc.bidegree() == term.bidegree() => &acc + &term,
            Some(_) => {
                return Err(tpos.diag(
                    DiagnosticKind::Semantic,
                    "form terms have different bidegrees",
                ))
            }
        });
        if p.eat_punct('+') {
            continue;
        }
        p.expect_eof()?;
        return Ok(out.expect("at least one term"));
    }
}
