//! Statement parser and Pratt expression parser.

use super::diagnostics::{Diagnostic, Span};
use super::lexer::{lex, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Letter(String),
    Lowered(String),
    Num(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Num(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Tr(Box<Expr>),
    D(Box<Expr>),
    /// `theta(k; a, b, ...)`
    ThetaBasis(u8, Vec<Index>, Span),
    /// A symbol with optional slot indices and Lie component (1-based).
    Sym {
        name: String,
        indices: Vec<Index>,
        lie: Option<u16>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kappa {
    Delta,
    Entries(Vec<(usize, usize, Expr)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBlock {
    pub name: String,
    pub dim: usize,
    pub f: Vec<(usize, usize, usize, Expr)>,
    pub kappa: Option<Kappa>,
    pub complete: bool,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Model(String),
    BaseDim(usize),
    Metric(Vec<Expr>),
    Lie(LieBlock),
    Coord { name: String, indices: Vec<String>, antisym: bool, gh: i32, lie: Option<String> },
    Rule { name: String, indices: Vec<Index>, lie: Option<u16>, rhs: Expr },
    Chi(Expr),
    Weak(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub stmt: Stmt,
    pub span: Span,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if *self.peek() == t {
            Ok(self.bump().span)
        } else {
            Err(Diagnostic::error(format!("expected {}, found {}", t.describe(), self.peek().describe()), self.span()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(Diagnostic::error(format!("expected identifier, found {}", other.describe()), self.span())),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            other => Err(Diagnostic::error(format!("expected `{kw}`, found {}", other.describe()), self.span())),
        }
    }

    fn uint(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Int(s) => {
                let sp = self.bump().span;
                s.parse().map_err(|_| Diagnostic::error("number too large", sp))
            }
            other => Err(Diagnostic::error(format!("expected a number, found {}", other.describe()), self.span())),
        }
    }

    fn int(&mut self) -> PResult<i32> {
        let neg = self.eat(&Tok::Minus);
        let sp = self.span();
        let v = self.uint()?;
        let v = i32::try_from(v).map_err(|_| Diagnostic::error("number too large", sp))?;
        Ok(if neg { -v } else { v })
    }

    fn statement(&mut self) -> PResult<Statement> {
        let start = self.span();
        let kw = self.ident()?;
        let stmt = match kw.as_str() {
            "model" => Stmt::Model(self.ident()?),
            "base" => {
                self.keyword("dim")?;
                self.expect(Tok::Eq)?;
                Stmt::BaseDim(self.uint()?)
            }
            "metric" => {
                self.expect(Tok::Eq)?;
                self.keyword("diag")?;
                self.expect(Tok::LParen)?;
                let mut v = vec![self.expr(0)?];
                while self.eat(&Tok::Comma) {
                    v.push(self.expr(0)?);
                }
                self.expect(Tok::RParen)?;
                Stmt::Metric(v)
            }
            "lie" => return self.lie_block(start),
            "coord" => self.coord()?,
            "Q" => {
                let name = self.ident()?;
                let indices = if *self.peek() == Tok::LBracket { self.index_list()? } else { Vec::new() };
                let lie = self.lie_component()?;
                self.expect(Tok::Eq)?;
                Stmt::Rule { name, indices, lie, rhs: self.expr(0)? }
            }
            "chi" => {
                self.expect(Tok::Eq)?;
                Stmt::Chi(self.expr(0)?)
            }
            "weak" => {
                self.expect(Tok::Eq)?;
                let sp = self.span();
                match self.ident()?.as_str() {
                    "true" => Stmt::Weak(true),
                    "false" => Stmt::Weak(false),
                    _ => return Err(Diagnostic::error("expected `true` or `false`", sp)),
                }
            }
            other => {
                return Err(Diagnostic::error(format!("unknown statement `{other}`"), start)
                    .with_hint("statements are model, base, metric, lie, coord, Q, chi, weak"))
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Statement { stmt, span: start.to(self.prev_span()) })
    }

    fn coord(&mut self) -> PResult<Stmt> {
        let name = self.ident()?;
        let mut indices = Vec::new();
        if self.eat(&Tok::LBracket) {
            indices.push(self.ident()?);
            while self.eat(&Tok::Comma) {
                indices.push(self.ident()?);
            }
            self.expect(Tok::RBracket)?;
        }
        let antisym = matches!(self.peek(), Tok::Ident(s) if s == "antisym");
        if antisym {
            self.bump();
        }
        self.expect(Tok::Colon)?;
        self.keyword("gh")?;
        self.expect(Tok::Eq)?;
        let gh = self.int()?;
        let lie = if matches!(self.peek(), Tok::Ident(s) if s == "in") {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        Ok(Stmt::Coord { name, indices, antisym, gh, lie })
    }

    fn lie_block(&mut self, start: Span) -> PResult<Statement> {
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut block = LieBlock { name, dim: 0, f: Vec::new(), kappa: None, complete: false, span: start };
        let mut entries = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let sp = self.span();
            let key = self.ident()?;
            match key.as_str() {
                "dim" => {
                    self.expect(Tok::Eq)?;
                    block.dim = self.uint()?;
                }
                "complete" => block.complete = true,
                "f" => {
                    let a = self.bracketed_uint()?;
                    let b = self.bracketed_uint()?;
                    let c = self.bracketed_uint()?;
                    self.expect(Tok::Eq)?;
                    block.f.push((a, b, c, self.expr(0)?));
                }
                "kappa" => {
                    if self.eat(&Tok::Eq) {
                        self.keyword("delta")?;
                        block.kappa = Some(Kappa::Delta);
                    } else {
                        let a = self.bracketed_uint()?;
                        let b = self.bracketed_uint()?;
                        self.expect(Tok::Eq)?;
                        entries.push((a, b, self.expr(0)?));
                    }
                }
                other => return Err(Diagnostic::error(format!("unknown lie entry `{other}`"), sp)),
            }
            self.expect(Tok::Semi)?;
        }
        if !entries.is_empty() {
            if block.kappa.is_some() {
                return Err(Diagnostic::error("kappa given both as delta and by entries", start));
            }
            block.kappa = Some(Kappa::Entries(entries));
        }
        block.span = start.to(self.prev_span());
        Ok(Statement { span: block.span, stmt: Stmt::Lie(block) })
    }

    fn bracketed_uint(&mut self) -> PResult<usize> {
        self.expect(Tok::LBracket)?;
        let v = self.uint()?;
        self.expect(Tok::RBracket)?;
        Ok(v)
    }

    fn index(&mut self) -> PResult<Index> {
        match self.peek().clone() {
            Tok::Underscore => {
                self.bump();
                Ok(Index::Lowered(self.ident()?))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Index::Letter(s))
            }
            Tok::Int(_) => {
                let sp = self.span();
                let v = self.uint()?;
                u8::try_from(v).map(Index::Num).map_err(|_| Diagnostic::error("index out of range", sp))
            }
            other => Err(Diagnostic::error(format!("expected an index, found {}", other.describe()), self.span())),
        }
    }

    fn index_list(&mut self) -> PResult<Vec<Index>> {
        self.expect(Tok::LBracket)?;
        let mut v = vec![self.index()?];
        while self.eat(&Tok::Comma) {
            v.push(self.index()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(v)
    }

    fn lie_component(&mut self) -> PResult<Option<u16>> {
        if !self.eat(&Tok::LBrace) {
            return Ok(None);
        }
        let sp = self.span();
        let v = self.uint()?;
        self.expect(Tok::RBrace)?;
        if v == 0 || v > u16::MAX as usize {
            return Err(Diagnostic::error("Lie components are numbered from 1", sp));
        }
        Ok(Some(v as u16))
    }

    /// Pratt loop: `+ -` bind at 1, `* /` at 3, prefix minus at 5.
    fn expr(&mut self, min_bp: u8) -> PResult<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, bp) = match self.peek() {
                Tok::Plus => (BinOp::Add, 1),
                Tok::Minus => (BinOp::Sub, 1),
                Tok::Star => (BinOp::Mul, 3),
                Tok::Slash => (BinOp::Div, 3),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            self.bump();
            let rhs = self.expr(bp + 1)?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Expr { kind: ExprKind::Num(s), span: start })
            }
            Tok::Minus => {
                self.bump();
                let e = self.expr(5)?;
                let span = start.to(e.span);
                Ok(Expr { kind: ExprKind::Neg(Box::new(e)), span })
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr(0)?;
                self.expect(Tok::RParen)?;
                Ok(Expr { span: start.to(self.prev_span()), ..e })
            }
            Tok::LBracket => {
                self.bump();
                let a = self.expr(0)?;
                self.expect(Tok::Comma)?;
                let b = self.expr(0)?;
                if *self.peek() == Tok::Comma {
                    return Err(Diagnostic::error("expected `]`, found `,`", self.span()).with_hint("a bracket [X, Y] takes exactly two arguments"));
                }
                self.expect(Tok::RBracket)?;
                Ok(Expr { kind: ExprKind::Bracket(Box::new(a), Box::new(b)), span: start.to(self.prev_span()) })
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "Tr" | "d" if *self.peek() == Tok::LParen => {
                        self.bump();
                        let e = self.expr(0)?;
                        self.expect(Tok::RParen)?;
                        let span = start.to(self.prev_span());
                        let kind = if name == "Tr" { ExprKind::Tr(Box::new(e)) } else { ExprKind::D(Box::new(e)) };
                        Ok(Expr { kind, span })
                    }
                    "theta" if *self.peek() == Tok::LParen => {
                        self.bump();
                        let ksp = self.span();
                        let k = self.uint()?;
                        let k = u8::try_from(k).map_err(|_| Diagnostic::error("index out of range", ksp))?;
                        let mut idx = Vec::new();
                        if self.eat(&Tok::Semi) {
                            idx.push(self.index()?);
                            while self.eat(&Tok::Comma) {
                                idx.push(self.index()?);
                            }
                        }
                        self.expect(Tok::RParen)?;
                        Ok(Expr { kind: ExprKind::ThetaBasis(k, idx, ksp), span: start.to(self.prev_span()) })
                    }
                    _ => {
                        let indices = if *self.peek() == Tok::LBracket { self.index_list()? } else { Vec::new() };
                        let lie = self.lie_component()?;
                        Ok(Expr { kind: ExprKind::Sym { name, indices, lie }, span: start.to(self.prev_span()) })
                    }
                }
            }
            other => Err(Diagnostic::error(format!("expected an expression, found {}", other.describe()), start)),
        }
    }
}

pub fn parse(src: &str) -> Result<Vec<Statement>, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parse a standalone expression (used by the CLI for points and tests).
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr(0)?;
    if *p.peek() != Tok::Eof {
        return Err(Diagnostic::error(format!("unexpected {}", p.peek().describe()), p.span()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("1 - 2*x[0] + 3").unwrap();
        let ExprKind::Bin(BinOp::Add, l, _) = e.kind else { panic!() };
        let ExprKind::Bin(BinOp::Sub, _, r) = l.kind else { panic!() };
        assert!(matches!(r.kind, ExprKind::Bin(BinOp::Mul, _, _)));
    }

    #[test]
    fn unary_minus_binds_tighter_than_product() {
        let e = parse_expr("-1/2*[C,C]").unwrap();
        let ExprKind::Bin(BinOp::Mul, l, r) = e.kind else { panic!() };
        assert!(matches!(r.kind, ExprKind::Bracket(_, _)));
        assert!(matches!(l.kind, ExprKind::Bin(BinOp::Div, _, _)));
    }

    #[test]
    fn triple_bracket_error_at_second_comma() {
        let src = "model m; Q C = [C,C,C];";
        let e = parse(src).unwrap_err();
        assert_eq!(&src[e.span.start..e.span.end], ",");
        assert_eq!(e.span.start, src.rfind(',').unwrap());
    }

    #[test]
    fn statements() {
        let s = parse("model ym; base dim = 4; coord F[a,b] antisym : gh = 0 in su2; Q F[a,b] = [F[a,b], C]; weak = true;").unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].stmt, Stmt::Model("ym".into()));
        assert!(matches!(&s[2].stmt, Stmt::Coord { antisym: true, gh: 0, .. }));
        assert_eq!(s[4].stmt, Stmt::Weak(true));
    }

    #[test]
    fn symbols_with_components() {
        let e = parse_expr("theta(2; a, _b) * F[0,1]{2} * d(C{1})").unwrap();
        let ExprKind::Bin(BinOp::Mul, l, r) = e.kind else { panic!() };
        assert!(matches!(r.kind, ExprKind::D(_)));
        let ExprKind::Bin(BinOp::Mul, t, f) = l.kind else { panic!() };
        assert!(matches!(t.kind, ExprKind::ThetaBasis(2, ref v, _) if v[1] == Index::Lowered("b".into())));
        assert!(matches!(f.kind, ExprKind::Sym { lie: Some(2), .. }));
    }
}
