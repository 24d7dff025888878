use std::collections::BTreeSet;

use prolie_core::constructions::{CocycleClause, CocycleRule};
use prolie_core::exactlin::{ratio, Scalar};
use prolie_core::presentation::{
    Addend, Atom, BracketRule, CmpOp, Coeff, Elem, ElemVector, Guard, IntExpr, Presentation, Term, WeightClause,
};

use super::lexer::{tokenize, Tok, Token};
use super::DslError;

#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    idx: Vec<IntExpr>,
    line: usize,
    col: usize,
}

struct RawAddend {
    coeff: Coeff,
    term: RawTerm,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Identifiers read as expression variables in the current statement.
    used: Vec<(String, usize, usize)>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, DslError> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
            used: Vec::new(),
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

    fn error(&self, expected: &[&str]) -> DslError {
        let t = self.peek();
        DslError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn invalid(&self, t: &Token, message: String) -> DslError {
        DslError::Invalid {
            line: t.line,
            col: t.col,
            message,
        }
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == kw)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<Token, DslError> {
        if self.at_sym(s) {
            Ok(self.bump())
        } else {
            Err(self.error(&[&format!("`{s}`")]))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Token), DslError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn expect_int(&mut self) -> Result<i64, DslError> {
        let neg = self.eat_sym("-");
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.error(&["an integer"])),
        }
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    fn end_statement(&mut self) -> Result<(), DslError> {
        match self.peek().tok {
            Tok::Newline | Tok::Eof => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&["end of line"])),
        }
    }

    fn expr(&mut self) -> Result<IntExpr, DslError> {
        let mut acc = self.product()?;
        loop {
            if self.eat_sym("+") {
                acc = acc + self.product()?;
            } else if self.eat_sym("-") {
                acc = acc - self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<IntExpr, DslError> {
        let mut acc = self.unary()?;
        while self.eat_sym("*") {
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntExpr, DslError> {
        if self.eat_sym("-") {
            return Ok(match self.unary()? {
                IntExpr::Const(c) => IntExpr::Const(-c),
                e => -e,
            });
        }
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(IntExpr::Const(n))
            }
            Tok::Ident(ref s) if s != "and" && s != "for" => {
                self.bump();
                self.used.push((s.clone(), t.line, t.col));
                Ok(IntExpr::var(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.error(&["an integer", "a variable", "`(`"])),
        }
    }

    fn guard(&mut self) -> Result<Guard, DslError> {
        let mut g = Guard::new();
        loop {
            g.atoms.push(self.atom()?);
            if !self.eat_keyword("and") {
                return Ok(g);
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, DslError> {
        let lhs = self.expr()?;
        if self.at_sym("%") {
            self.bump();
            let at = self.peek().clone();
            let modulus = self.expect_int()?;
            if modulus <= 0 {
                return Err(self.invalid(&at, format!("modulus must be positive, got {modulus}")));
            }
            if !self.eat_sym("==") && !self.eat_sym("=") {
                return Err(self.error(&["`==`"]));
            }
            let residue = self.expect_int()?;
            return Ok(Atom::Congruence {
                expr: lhs,
                modulus,
                residue,
            });
        }
        let op = match &self.peek().tok {
            Tok::Sym("<") => CmpOp::Lt,
            Tok::Sym("<=") => CmpOp::Le,
            Tok::Sym("==") | Tok::Sym("=") => CmpOp::Eq,
            Tok::Sym(">=") => CmpOp::Ge,
            Tok::Sym(">") => CmpOp::Gt,
            _ => return Err(self.error(&["`<`", "`<=`", "`==`", "`>=`", "`>`", "`%`"])),
        };
        self.bump();
        Ok(Atom::Cmp(lhs, op, self.expr()?))
    }

    fn optional_guard(&mut self) -> Result<Guard, DslError> {
        if self.eat_keyword("for") {
            self.guard()
        } else {
            Ok(Guard::new())
        }
    }

    fn raw_term(&mut self) -> Result<RawTerm, DslError> {
        let (name, t) = self.expect_ident("a generator name")?;
        let mut idx = Vec::new();
        if self.eat_sym("(") {
            loop {
                idx.push(self.expr()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym(")")?;
        }
        Ok(RawTerm {
            name,
            idx,
            line: t.line,
            col: t.col,
        })
    }

    fn sum(&mut self) -> Result<Vec<RawAddend>, DslError> {
        if matches!(self.peek().tok, Tok::Int(0)) && matches!(self.peek_at(1), Tok::Newline | Tok::Eof | Tok::Ident(_)) {
            self.bump();
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut negative = self.eat_sym("-");
        loop {
            let mut a = self.addend()?;
            if negative {
                a.coeff = a.coeff.negated();
            }
            out.push(a);
            if self.eat_sym("+") {
                negative = false;
            } else if self.eat_sym("-") {
                negative = true;
            } else {
                return Ok(out);
            }
        }
    }

    fn addend(&mut self) -> Result<RawAddend, DslError> {
        let mut scale = Scalar::from_integer(1.into());
        let mut poly: Option<IntExpr> = None;
        loop {
            match self.peek().tok.clone() {
                Tok::Int(n) => {
                    self.bump();
                    let mut c = Scalar::from_integer(n.into());
                    if self.eat_sym("/") {
                        let at = self.peek().clone();
                        let d = self.expect_int()?;
                        if d == 0 {
                            return Err(self.invalid(&at, "zero denominator".into()));
                        }
                        c = ratio(n, d);
                    }
                    scale *= c;
                    self.expect_sym("*")?;
                }
                Tok::Sym("(") => {
                    self.bump();
                    let e = self.expr()?;
                    self.expect_sym(")")?;
                    poly = Some(match poly {
                        None => e,
                        Some(p) => p * e,
                    });
                    self.expect_sym("*")?;
                }
                Tok::Ident(_) => {
                    let term = self.raw_term()?;
                    return Ok(RawAddend {
                        coeff: Coeff { scale, poly },
                        term,
                    });
                }
                _ => return Err(self.error(&["a term", "a number", "`(`"])),
            }
        }
    }

    /// Every variable read in this statement must be bound or a parameter.
    fn check_bound(&mut self, bound: &BTreeSet<String>, params: &[(String, i64)]) -> Result<(), DslError> {
        for (name, line, col) in self.used.drain(..) {
            if !bound.contains(&name) && !params.iter().any(|(p, _)| *p == name) {
                return Err(DslError::UnknownName { line, col, name });
            }
        }
        Ok(())
    }
}

fn resolve(p: &Presentation, t: &RawTerm) -> Result<Term, DslError> {
    let gen = p.gen_index(&t.name).ok_or_else(|| DslError::UnknownName {
        line: t.line,
        col: t.col,
        name: t.name.clone(),
    })?;
    let arity = p.generators[gen].arity();
    if arity != t.idx.len() {
        return Err(DslError::Invalid {
            line: t.line,
            col: t.col,
            message: format!("`{}` takes {arity} indices, got {}", t.name, t.idx.len()),
        });
    }
    Ok(Term {
        gen,
        idx: t.idx.clone(),
    })
}

fn binding_vars(t: &RawTerm, params: &[(String, i64)], out: &mut BTreeSet<String>) {
    for x in &t.idx {
        if let Some(v) = x.as_var() {
            if !params.iter().any(|(p, _)| p == v) {
                out.insert(v.to_string());
            }
        }
    }
}

/// Parses a `.lie` source into a validated presentation.
pub fn parse_presentation(src: &str) -> Result<Presentation, DslError> {
    let mut ps = Parser::new(src)?;
    ps.skip_newlines();
    if !ps.eat_keyword("algebra") {
        return Err(ps.error(&["`algebra`"]));
    }
    let (name, _) = ps.expect_ident("an algebra name")?;
    ps.end_statement()?;
    let mut p = Presentation::new(&name);
    loop {
        ps.skip_newlines();
        if ps.peek().tok == Tok::Eof {
            break;
        }
        let start = ps.peek().clone();
        let (kw, _) = ps.expect_ident("a statement")?;
        match kw.as_str() {
            "param" => {
                let (n, at) = ps.expect_ident("a parameter name")?;
                ps.expect_sym("=")?;
                let v = ps.expect_int()?;
                if p.param(&n).is_some() {
                    return Err(ps.invalid(&at, format!("parameter `{n}` declared twice")));
                }
                p.set_param(&n, v);
            }
            "basis" => loop {
                let (n, at) = ps.expect_ident("a generator name")?;
                if p.gen_index(&n).is_some() {
                    return Err(ps.invalid(&at, format!("generator `{n}` declared twice")));
                }
                let mut vars = Vec::new();
                let mut domain = Guard::new();
                if ps.eat_sym("(") {
                    loop {
                        let (v, at) = ps.expect_ident("an index variable")?;
                        if vars.contains(&v) {
                            return Err(ps.invalid(&at, format!("index `{v}` repeated")));
                        }
                        vars.push(v);
                        if !ps.eat_sym(",") {
                            break;
                        }
                    }
                    ps.expect_sym(")")?;
                    domain = ps.optional_guard()?;
                }
                let bound: BTreeSet<String> = vars.iter().cloned().collect();
                ps.check_bound(&bound, &p.params)?;
                let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
                p.add_generator(&n, &refs, domain);
                if !ps.eat_sym(",") {
                    break;
                }
            },
            "complement" => loop {
                let (n, at) = ps.expect_ident("a complement name")?;
                if p.gen_index(&n).is_some() {
                    return Err(ps.invalid(&at, format!("generator `{n}` declared twice")));
                }
                p.add_complement(&n);
                if !ps.eat_sym(",") {
                    break;
                }
            },
            "weight" => {
                let (n, at) = ps.expect_ident("a generator name")?;
                let gen = p.gen_index(&n).ok_or_else(|| DslError::UnknownName {
                    line: at.line,
                    col: at.col,
                    name: n.clone(),
                })?;
                if p.generators[gen].complement {
                    return Err(ps.invalid(&at, format!("complement `{n}` carries no weight")));
                }
                let mut pattern = Vec::new();
                let mut bound = BTreeSet::new();
                if ps.eat_sym("(") {
                    loop {
                        match ps.peek().tok.clone() {
                            Tok::Ident(v) => {
                                ps.bump();
                                bound.insert(v.clone());
                                pattern.push(IntExpr::var(&v));
                            }
                            _ => pattern.push(IntExpr::Const(ps.expect_int()?)),
                        }
                        if !ps.eat_sym(",") {
                            break;
                        }
                    }
                    ps.expect_sym(")")?;
                }
                if pattern.len() != p.generators[gen].arity() {
                    return Err(ps.invalid(
                        &at,
                        format!("`{n}` takes {} indices, got {}", p.generators[gen].arity(), pattern.len()),
                    ));
                }
                ps.expect_sym("=")?;
                let value = ps.expr()?;
                let guard = ps.optional_guard()?;
                ps.check_bound(&bound, &p.params)?;
                p.weights.push(WeightClause {
                    gen,
                    pattern,
                    value,
                    guard,
                });
            }
            "bracket" => {
                ps.expect_sym("[")?;
                let left = ps.raw_term()?;
                ps.expect_sym(",")?;
                let right = ps.raw_term()?;
                ps.expect_sym("]")?;
                let additive = if ps.eat_sym("+=") {
                    true
                } else if ps.eat_sym("=") {
                    false
                } else {
                    return Err(ps.error(&["`=`", "`+=`"]));
                };
                let result = ps.sum()?;
                let guard = ps.optional_guard()?;
                let mut bound = BTreeSet::new();
                binding_vars(&left, &p.params, &mut bound);
                binding_vars(&right, &p.params, &mut bound);
                ps.check_bound(&bound, &p.params)?;
                let rule = BracketRule {
                    left: resolve(&p, &left)?,
                    right: resolve(&p, &right)?,
                    result: result
                        .into_iter()
                        .map(|a| Ok(Addend { coeff: a.coeff, term: resolve(&p, &a.term)? }))
                        .collect::<Result<_, DslError>>()?,
                    guard,
                    additive,
                };
                p.rules.push(rule);
            }
            _ => {
                return Err(DslError::Syntax {
                    line: start.line,
                    col: start.col,
                    expected: ["`param`", "`basis`", "`complement`", "`weight`", "`bracket`"]
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                    found: start.tok.describe(),
                })
            }
        }
        ps.end_statement()?;
    }
    p.validate()?;
    p.check_overlaps()?;
    Ok(p)
}

/// Parses a cocycle file against the presentation it is defined on.
pub fn parse_cocycle(src: &str, base: &Presentation) -> Result<CocycleRule, DslError> {
    let mut ps = Parser::new(src)?;
    ps.skip_newlines();
    if !ps.eat_keyword("cocycle") {
        return Err(ps.error(&["`cocycle`"]));
    }
    let (name, _) = ps.expect_ident("a cocycle name")?;
    ps.end_statement()?;
    let mut c = CocycleRule::new(&name, &[]);
    loop {
        ps.skip_newlines();
        if ps.peek().tok == Tok::Eof {
            break;
        }
        let start = ps.peek().clone();
        let (kw, _) = ps.expect_ident("a statement")?;
        match kw.as_str() {
            "space" => loop {
                let (n, at) = ps.expect_ident("a basis name")?;
                if c.space.contains(&n) || base.gen_index(&n).is_some() {
                    return Err(ps.invalid(&at, format!("name `{n}` is already in use")));
                }
                c.space.push(n);
                c.weights.push(None);
                if !ps.eat_sym(",") {
                    break;
                }
            },
            "weight" => {
                let (n, at) = ps.expect_ident("a basis name")?;
                let k = c.space.iter().position(|z| *z == n).ok_or(DslError::UnknownName {
                    line: at.line,
                    col: at.col,
                    name: n,
                })?;
                ps.expect_sym("=")?;
                c.weights[k] = Some(ps.expect_int()?);
            }
            "value" => {
                ps.expect_sym("[")?;
                let left = ps.raw_term()?;
                ps.expect_sym(",")?;
                let right = ps.raw_term()?;
                ps.expect_sym("]")?;
                if !ps.eat_sym("=") && !ps.eat_sym("+=") {
                    return Err(ps.error(&["`=`", "`+=`"]));
                }
                let result = ps.sum()?;
                let guard = ps.optional_guard()?;
                let mut bound = BTreeSet::new();
                binding_vars(&left, &base.params, &mut bound);
                binding_vars(&right, &base.params, &mut bound);
                ps.check_bound(&bound, &base.params)?;
                let mut value = Vec::new();
                for a in result {
                    let k = c.space.iter().position(|z| *z == a.term.name).ok_or(DslError::UnknownName {
                        line: a.term.line,
                        col: a.term.col,
                        name: a.term.name.clone(),
                    })?;
                    if !a.term.idx.is_empty() {
                        return Err(DslError::Invalid {
                            line: a.term.line,
                            col: a.term.col,
                            message: format!("`{}` takes no indices", a.term.name),
                        });
                    }
                    if !a.coeff.is_zero() {
                        value.push((a.coeff, k));
                    }
                }
                c.clauses.push(CocycleClause {
                    left: resolve(base, &left)?,
                    right: resolve(base, &right)?,
                    value,
                    guard,
                });
            }
            _ => {
                return Err(DslError::Syntax {
                    line: start.line,
                    col: start.col,
                    expected: vec!["`space`".into(), "`weight`".into(), "`value`".into()],
                    found: start.tok.describe(),
                })
            }
        }
        ps.end_statement()?;
    }
    Ok(c)
}

/// Parses a concrete combination such as `e(1) + 1/2*e(3)` in the elements of `p`.
pub fn parse_vector(src: &str, p: &Presentation) -> Result<ElemVector, DslError> {
    let mut ps = Parser::new(src)?;
    let sum = ps.sum()?;
    ps.skip_newlines();
    if ps.peek().tok != Tok::Eof {
        return Err(ps.error(&["end of input"]));
    }
    ps.check_bound(&BTreeSet::new(), &p.params)?;
    let env = p.env();
    let mut out = ElemVector::new();
    for a in sum {
        let t = resolve(p, &a.term)?;
        let idx = t.idx.iter().map(|x| x.eval(&env)).collect::<Result<Vec<_>, _>>()?;
        let e = Elem::new(t.gen, idx);
        if !p.in_domain(&e)? {
            return Err(DslError::Invalid {
                line: a.term.line,
                col: a.term.col,
                message: format!("{} is outside the basis", p.format_elem(&e)),
            });
        }
        out.add_term(e, &a.coeff.eval(&env)?);
    }
    Ok(out)
}
