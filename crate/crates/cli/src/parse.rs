//! Text forms of rings, elements, series, rational functions and forms.
//!
//! Everything except ring specs goes through one expression grammar
//! (`+ - * / ^`, parentheses, implicit multiplication, `O(t^N)`, and the
//! wedge `de^dt`); each value domain has its own evaluator.

use num::bigint::BigInt;
use num::{One, ToPrimitive};

use residue_symbols::{
    AOneForm, BaseField, Error, GlobalTwoForm, LaurentSeries, MHatElement, OneForm, Result, Ring, RingElement,
    SectionPoint, SplitRationalFunction, TwoForm,
};

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

// ---------------------------------------------------------------- rings

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| err(start, "number too large"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a variable name");
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.s.len()
    }
}

fn at(pos: usize, r: Result<Ring>) -> Result<Ring> {
    r.map_err(|e| match e {
        Error::InvalidRing(msg) => Error::Parse { pos, msg },
        other => other,
    })
}

/// `F<p>`, `Q`, `F<p>[e]/(e^<m>)`, `Q[e]/(e^<m>)`, `Z/<p^m>` (also `Z/<p>^<m>`).
pub fn parse_ring(text: &str) -> Result<Ring> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    c.skip_ws();
    let head = c.pos;
    let base = match c.s.get(c.pos) {
        Some(b'F') => {
            c.pos += 1;
            let p = c.number()?;
            at(head + 1, Ring::prime_field(p))?;
            BaseField::Prime(p)
        }
        Some(b'Q') => {
            c.pos += 1;
            BaseField::Rationals
        }
        Some(b'Z') => {
            c.pos += 1;
            c.expect(b'/')?;
            let paren = c.eat(b'(');
            let npos = c.pos;
            let n = c.number()?;
            let (p, m) = if c.eat(b'^') {
                let m = c.number()?;
                (n, m)
            } else {
                prime_power(n).ok_or_else(|| Error::Parse {
                    pos: npos,
                    msg: format!("{n} is not a prime power"),
                })?
            };
            if paren {
                c.expect(b')')?;
            }
            if !c.at_end() {
                return err(c.pos, "unexpected trailing input");
            }
            let m = u32::try_from(m).or_else(|_| err(npos, "exponent too large"))?;
            return at(npos, Ring::prime_power(p, m));
        }
        _ => return err(head, "expected F<p>, Q or Z/<p^m>"),
    };
    if c.at_end() {
        return Ok(match base {
            BaseField::Prime(p) => at(head, Ring::prime_field(p))?,
            BaseField::Rationals => Ring::rationals(),
        });
    }
    c.expect(b'[')?;
    let var = c.ident()?;
    c.expect(b']')?;
    c.expect(b'/')?;
    c.expect(b'(')?;
    let vpos = c.pos;
    if c.ident()? != var {
        return err(vpos, format!("expected the generator '{var}'"));
    }
    let mpos = c.pos;
    let m = if c.eat(b'^') { c.number()? } else { 1 };
    c.expect(b')')?;
    if !c.at_end() {
        return err(c.pos, "unexpected trailing input");
    }
    let m = u32::try_from(m).or_else(|_| err(mpos, "exponent too large"))?;
    at(mpos, Ring::truncated_in(base, &var, m))
}

fn prime_power(n: u64) -> Option<(u64, u64)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let (mut k, mut r) = (0, n);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

// ---------------------------------------------------------------- tokens

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(u8),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let s = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let c = s[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((Tok::Num(n), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < s.len() && (s[i].is_ascii_alphanumeric() || s[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if b"+-*/^()".contains(&c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return err(i, format!("unexpected character '{}'", text[i..].chars().next().unwrap()));
        }
    }
    out.push((Tok::End, s.len()));
    Ok(out)
}

// ---------------------------------------------------------------- syntax

#[derive(Clone, Debug)]
pub struct Expr {
    kind: Kind,
    pos: usize,
}

#[derive(Clone, Debug)]
enum Kind {
    Num(BigInt),
    Var(String),
    BigO(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Wedge(Box<Expr>, Box<Expr>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.next() {
            (Tok::Op(d), _) if d == c => Ok(()),
            (_, pos) => err(pos, format!("expected '{}'", c as char)),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            let pos = self.pos();
            let (bp, op) = match self.peek() {
                Tok::Op(b'+') => (10, b'+'),
                Tok::Op(b'-') => (10, b'-'),
                Tok::Op(b'*') => (20, b'*'),
                Tok::Op(b'/') => (20, b'/'),
                Tok::Op(b'^') => (30, b'^'),
                // implicit multiplication
                Tok::Num(_) | Tok::Ident(_) | Tok::Op(b'(') => (20, b' '),
                _ => break,
            };
            if bp <= min_bp {
                break;
            }
            if op != b' ' {
                self.next();
            }
            let kind = match op {
                b'^' => self.power(lhs)?,
                b'+' => Kind::Add(Box::new(lhs), Box::new(self.expr(bp)?)),
                b'-' => Kind::Sub(Box::new(lhs), Box::new(self.expr(bp)?)),
                b'/' => Kind::Div(Box::new(lhs), Box::new(self.expr(bp)?)),
                _ => Kind::Mul(Box::new(lhs), Box::new(self.expr(bp)?)),
            };
            lhs = Expr { kind, pos };
        }
        Ok(lhs)
    }

    fn power(&mut self, base: Expr) -> Result<Kind> {
        let pos = self.pos();
        if let Tok::Ident(name) = self.peek().clone() {
            self.next();
            let rhs = Expr { kind: Kind::Var(name), pos };
            return Ok(Kind::Wedge(Box::new(base), Box::new(rhs)));
        }
        let paren = matches!(self.peek(), Tok::Op(b'('));
        if paren {
            self.next();
        }
        let mut sign = 1;
        while let Tok::Op(c @ (b'-' | b'+')) = self.peek() {
            if *c == b'-' {
                sign = -sign;
            }
            self.next();
        }
        let n = match self.next() {
            (Tok::Num(n), p) => n.to_i64().ok_or_else(|| Error::Parse {
                pos: p,
                msg: "exponent too large".into(),
            })?,
            (_, p) => return err(p, "expected an integer exponent"),
        };
        if paren {
            self.expect(b')')?;
        }
        Ok(Kind::Pow(Box::new(base), sign * n))
    }

    fn prefix(&mut self) -> Result<Expr> {
        let (tok, pos) = self.next();
        let kind = match tok {
            Tok::Num(n) => Kind::Num(n),
            Tok::Ident(name) if name == "O" && matches!(self.peek(), Tok::Op(b'(')) => {
                self.next();
                let inner = self.expr(0)?;
                self.expect(b')')?;
                Kind::BigO(Box::new(inner))
            }
            Tok::Ident(name) => Kind::Var(name),
            Tok::Op(b'-') => Kind::Neg(Box::new(self.expr(25)?)),
            Tok::Op(b'+') => return self.expr(25),
            Tok::Op(b'(') => {
                let inner = self.expr(0)?;
                self.expect(b')')?;
                return Ok(inner);
            }
            Tok::End => return err(pos, "unexpected end of input"),
            Tok::Op(c) => return err(pos, format!("unexpected '{}'", c as char)),
        };
        Ok(Expr { kind, pos })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: tokenize(text)?,
        i: 0,
    };
    let e = p.expr(0)?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => err(p.pos(), "unexpected trailing input"),
    }
}

/// Attach the parse position to errors raised while evaluating a node.
fn located<T>(pos: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            pos,
            msg: other.to_string(),
        },
    })
}

// ---------------------------------------------------------------- elements

fn number(ring: &Ring, n: &BigInt) -> Result<RingElement> {
    ring.from_fraction(n, &BigInt::one())
}

pub fn eval_element(e: &Expr, ring: &Ring) -> Result<RingElement> {
    let ev = |x: &Expr| eval_element(x, ring);
    let r = match &e.kind {
        Kind::Num(n) => number(ring, n),
        Kind::Var(v) if ring.variable() == Some(v.as_str()) => Ok(ring.maximal_ideal_generator().unwrap_or(ring.zero())),
        Kind::Var(v) => return err(e.pos, format!("unknown name '{v}' in {ring}")),
        Kind::Neg(a) => Ok(-ev(a)?),
        Kind::Add(a, b) => ev(a)?.checked_add(&ev(b)?),
        Kind::Sub(a, b) => ev(a)?.checked_sub(&ev(b)?),
        Kind::Mul(a, b) => ev(a)?.checked_mul(&ev(b)?),
        Kind::Div(a, b) => ev(a)?.checked_div(&ev(b)?),
        Kind::Pow(a, k) => ev(a)?.pow(*k),
        Kind::BigO(_) | Kind::Wedge(..) => return err(e.pos, format!("not an element of {ring}")),
    };
    located(e.pos, r)
}

pub fn parse_element(text: &str, ring: &Ring) -> Result<RingElement> {
    eval_element(&parse_expr(text)?, ring)
}

/// `inf` or an element of the ring.
pub fn parse_point(text: &str, ring: &Ring) -> Result<SectionPoint> {
    match text.trim() {
        "inf" | "infinity" | "oo" => Ok(SectionPoint::Infinity),
        s => Ok(SectionPoint::Affine(parse_element(s, ring)?)),
    }
}

// ---------------------------------------------------------------- series

fn big_o_bound(arg: &Expr, var: &str) -> Result<i64> {
    match &arg.kind {
        Kind::Var(v) if v == var => Ok(1),
        Kind::Pow(b, k) if matches!(&b.kind, Kind::Var(v) if v == var) => Ok(*k),
        Kind::Num(n) if n.is_one() => Ok(0),
        _ => err(arg.pos, format!("expected O({var}^N)")),
    }
}

/// The least `N` over every `O(var^N)` in the expression.
fn global_precision(e: &Expr, var: &str) -> Result<Option<i64>> {
    let children: Vec<&Expr> = match &e.kind {
        Kind::BigO(a) => return big_o_bound(a, var).map(Some),
        Kind::Num(_) | Kind::Var(_) => vec![],
        Kind::Neg(a) | Kind::Pow(a, _) => vec![a],
        Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) | Kind::Wedge(a, b) => vec![a, b],
    };
    let mut best = None;
    for c in children {
        if let Some(n) = global_precision(c, var)? {
            best = Some(best.map_or(n, |b: i64| b.min(n)));
        }
    }
    Ok(best)
}

struct SeriesEval<'a> {
    ring: &'a Ring,
    var: &'a str,
    prec: Option<i64>,
}

impl SeriesEval<'_> {
    fn leaf(&self, e: &Expr) -> Result<Option<LaurentSeries>> {
        Ok(Some(match &e.kind {
            Kind::Num(n) => LaurentSeries::constant(&number(self.ring, n)?),
            Kind::Var(v) if v == self.var => LaurentSeries::t(self.ring),
            Kind::Var(v) if self.ring.variable() == Some(v.as_str()) => {
                LaurentSeries::constant(&self.ring.maximal_ideal_generator().unwrap_or(self.ring.zero()))
            }
            Kind::Var(v) => return err(e.pos, format!("unknown name '{v}'")),
            Kind::BigO(a) => LaurentSeries::big_o(self.ring, big_o_bound(a, self.var)?),
            _ => return Ok(None),
        }))
    }

    fn eval(&self, e: &Expr) -> Result<LaurentSeries> {
        if let Some(s) = self.leaf(e)? {
            return Ok(s);
        }
        let r = match &e.kind {
            Kind::Neg(a) => Ok(-self.eval(a)?),
            Kind::Add(a, b) => self.eval(a)?.checked_add(&self.eval(b)?),
            Kind::Sub(a, b) => self.eval(a)?.checked_sub(&self.eval(b)?),
            Kind::Mul(a, b) => self.eval(a)?.checked_mul(&self.eval(b)?),
            Kind::Div(a, b) => {
                let a = self.eval(a)?;
                self.divide(&a, &self.eval(b)?)
            }
            Kind::Pow(a, k) if *k < 0 => {
                let b = self.eval(a)?.pow(-k)?;
                self.divide(&LaurentSeries::one(self.ring), &b)
            }
            Kind::Pow(a, k) => self.eval(a)?.pow(*k),
            Kind::Wedge(..) => err(e.pos, "forms are not series"),
            _ => unreachable!("leaves handled above"),
        };
        located(e.pos, r)
    }

    /// `a / b`; a polynomial `b` whose inverse does not terminate is
    /// inverted to the precision of the enclosing `O(t^N)`.
    fn divide(&self, a: &LaurentSeries, b: &LaurentSeries) -> Result<LaurentSeries> {
        match b.inverse() {
            Ok(inv) => a.checked_mul(&inv),
            Err(Error::IndeterminateAtPrecision(msg)) => {
                let Some(n) = self.prec else {
                    return Err(Error::IndeterminateAtPrecision(format!("{msg}; add an O(t^N) term")));
                };
                let lo_a = a.lowest_index().unwrap_or(0);
                let lo_b = b.lowest_index().unwrap_or(0);
                let mut p = n - lo_a + 2 * lo_b.abs() + 2;
                let mut best = None;
                for _ in 0..8 {
                    let q = a.checked_mul(&b.with_precision(p).inverse()?)?;
                    let reached = q.precision().is_some_and(|qp| qp >= n);
                    best = Some(q);
                    if reached {
                        break;
                    }
                    p += n.max(4);
                }
                Ok(best.expect("at least one attempt"))
            }
            Err(e) => Err(e),
        }
    }
}

pub fn eval_series(e: &Expr, ring: &Ring, var: &str) -> Result<LaurentSeries> {
    let prec = global_precision(e, var)?;
    let s = SeriesEval { ring, var, prec }.eval(e)?;
    Ok(match prec {
        Some(n) => s.with_precision(n),
        None => s,
    })
}

pub fn parse_series(text: &str, ring: &Ring, var: &str) -> Result<LaurentSeries> {
    eval_series(&parse_expr(text)?, ring, var)
}

// ---------------------------------------------------------------- Kato

/// `x^<e> * (<series in z>)`, `x * (...)`, or a bare unit series in `z`.
pub fn parse_mhat(text: &str, ring: &Ring) -> Result<MHatElement> {
    let expr = parse_expr(text)?;
    let x = ring.variable().unwrap_or("x").to_string();
    let x_power = |e: &Expr| -> Option<i64> {
        match &e.kind {
            Kind::Var(v) if *v == x => Some(1),
            Kind::Pow(b, k) if matches!(&b.kind, Kind::Var(v) if *v == x) => Some(*k),
            _ => None,
        }
    };
    let (exponent, unit) = match &expr.kind {
        Kind::Mul(a, b) => match x_power(a) {
            Some(k) => (k, eval_series(b, ring, "z")?),
            None => (0, eval_series(&expr, ring, "z")?),
        },
        _ => match x_power(&expr) {
            Some(k) => (k, LaurentSeries::one(ring)),
            None => (0, eval_series(&expr, ring, "z")?),
        },
    };
    located(expr.pos, MHatElement::new(exponent, unit))
}

// ---------------------------------------------------------------- rational functions

enum RatVal {
    /// Polynomial in `x`, low degree first.
    Poly(Vec<RingElement>),
    Split(SplitRationalFunction),
}

fn poly_trim(mut p: Vec<RingElement>) -> Vec<RingElement> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_add(a: &[RingElement], b: &[RingElement], sign: i64) -> Vec<RingElement> {
    let n = a.len().max(b.len());
    let zero = a.first().or(b.first()).expect("nonempty").ring().zero();
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or(zero.clone());
            let y = b.get(i).cloned().unwrap_or(zero.clone());
            if sign > 0 {
                x + y
            } else {
                x - y
            }
        })
        .collect();
    poly_trim(out)
}

fn poly_mul(a: &[RingElement], b: &[RingElement]) -> Vec<RingElement> {
    let zero = a[0].ring().zero();
    let mut out = vec![zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    poly_trim(out)
}

fn split_of(p: &[RingElement], pos: usize) -> Result<SplitRationalFunction> {
    match p.len() {
        1 => located(pos, SplitRationalFunction::constant_function(p[0].clone())),
        2 => {
            // a x + b = a (x - (-b/a))
            let a = &p[1];
            if !a.is_unit() {
                return err(pos, format!("leading coefficient {a} of a linear factor is not a unit"));
            }
            let s = located(pos, (-&p[0]).checked_div(a))?;
            located(pos, SplitRationalFunction::new(a.clone(), vec![(s, 1)]))
        }
        _ => err(pos, "write polynomials of degree > 1 as products of linear factors"),
    }
}

fn split_pow(f: &SplitRationalFunction, k: i64) -> Result<SplitRationalFunction> {
    let factors = f.factors().iter().map(|(s, n)| (s.clone(), n * k)).collect();
    SplitRationalFunction::new(f.constant().pow(k)?, factors)
}

fn eval_rational(e: &Expr, ring: &Ring) -> Result<RatVal> {
    let as_split = |v: RatVal, pos: usize| -> Result<SplitRationalFunction> {
        match v {
            RatVal::Split(f) => Ok(f),
            RatVal::Poly(p) => split_of(&p, pos),
        }
    };
    let r = match &e.kind {
        Kind::Num(n) => RatVal::Poly(vec![located(e.pos, number(ring, n))?]),
        Kind::Var(v) if v == "x" => RatVal::Poly(vec![ring.zero(), ring.one()]),
        Kind::Var(_) => RatVal::Poly(vec![eval_element(e, ring)?]),
        Kind::Neg(a) => match eval_rational(a, ring)? {
            RatVal::Poly(p) => RatVal::Poly(p.iter().map(|c| -c).collect()),
            RatVal::Split(f) => {
                let c = -f.constant();
                RatVal::Split(located(e.pos, SplitRationalFunction::new(c, f.factors().to_vec()))?)
            }
        },
        Kind::Add(a, b) | Kind::Sub(a, b) => {
            let sign = if matches!(e.kind, Kind::Add(..)) { 1 } else { -1 };
            let poly = |v: RatVal, pos: usize| -> Result<Vec<RingElement>> {
                match v {
                    RatVal::Poly(p) => Ok(p),
                    RatVal::Split(f) if f.factors().is_empty() => Ok(vec![f.constant().clone()]),
                    RatVal::Split(_) => err(pos, "sums of rational functions are not supported; write a product of linear factors"),
                }
            };
            let x = poly(eval_rational(a, ring)?, a.pos)?;
            let y = poly(eval_rational(b, ring)?, b.pos)?;
            RatVal::Poly(poly_add(&x, &y, sign))
        }
        Kind::Mul(a, b) => match (demote(eval_rational(a, ring)?), demote(eval_rational(b, ring)?)) {
            (RatVal::Poly(x), RatVal::Poly(y)) if x.len() == 1 || y.len() == 1 => RatVal::Poly(poly_mul(&x, &y)),
            (x, y) => {
                let f = as_split(x, a.pos)?;
                let g = as_split(y, b.pos)?;
                RatVal::Split(located(e.pos, f.checked_mul(&g))?)
            }
        },
        Kind::Div(a, b) => {
            let (x, y) = (demote(eval_rational(a, ring)?), demote(eval_rational(b, ring)?));
            if let (RatVal::Poly(p), RatVal::Poly(c)) = (&x, &y) {
                if c.len() == 1 {
                    let inv = located(b.pos, c[0].inv())?;
                    return Ok(RatVal::Poly(p.iter().map(|a| a * &inv).collect()));
                }
            }
            let f = as_split(x, a.pos)?;
            let g = as_split(y, b.pos)?;
            RatVal::Split(located(e.pos, f.checked_mul(&split_pow(&g, -1)?))?)
        }
        Kind::Pow(a, k) => {
            let f = as_split(eval_rational(a, ring)?, a.pos)?;
            RatVal::Split(located(e.pos, split_pow(&f, *k))?)
        }
        Kind::BigO(_) | Kind::Wedge(..) => return err(e.pos, "not a rational function"),
    };
    Ok(r)
}

/// Constants stay polynomials so that nilpotent scalars can be formed.
fn demote(v: RatVal) -> RatVal {
    match v {
        RatVal::Split(f) if f.factors().is_empty() => RatVal::Poly(vec![f.constant().clone()]),
        v => v,
    }
}

/// `c * (x - s1)^n1 * (x - s2)^n2 * ...` with sections `s_i` in the ring.
pub fn parse_rational(text: &str, ring: &Ring) -> Result<SplitRationalFunction> {
    let e = parse_expr(text)?;
    match eval_rational(&e, ring)? {
        RatVal::Split(f) => Ok(f),
        RatVal::Poly(p) => split_of(&p, e.pos),
    }
}

// ---------------------------------------------------------------- forms

pub enum FormValue {
    Series(LaurentSeries),
    One(OneForm),
    Two(TwoForm),
}

struct FormEval<'a> {
    series: SeriesEval<'a>,
    d_eps: String,
}

impl FormEval<'_> {
    fn eval(&self, e: &Expr) -> Result<FormValue> {
        use FormValue::*;
        let ring = self.series.ring;
        let zero = || LaurentSeries::zero(ring);
        let one = || LaurentSeries::one(ring);
        let r = match &e.kind {
            Kind::Var(v) if v == "dt" => OneForm::new(one(), zero()).map(One),
            Kind::Var(v) if *v == self.d_eps => OneForm::new(zero(), one()).map(One),
            Kind::Neg(a) => self.negate(self.eval(a)?),
            Kind::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?, e.pos),
            Kind::Sub(a, b) => {
                let y = self.negate(self.eval(b)?)?;
                self.add(self.eval(a)?, y, e.pos)
            }
            Kind::Mul(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Series(f), Series(g)) => f.checked_mul(&g).map(Series),
                (Series(f), One(w)) | (One(w), Series(f)) => w.mul_series(&f).map(One),
                (Series(f), Two(w)) | (Two(w), Series(f)) => TwoForm::new(w.coefficient().checked_mul(&f)?).map(Two),
                _ => err(e.pos, "use '^' for the wedge product of forms"),
            },
            Kind::Div(a, b) => {
                let Series(g) = self.eval(b)? else {
                    return err(b.pos, "cannot divide by a form");
                };
                let inv = self.series.divide(&one(), &g)?;
                match self.eval(a)? {
                    Series(f) => f.checked_mul(&inv).map(Series),
                    One(w) => w.mul_series(&inv).map(One),
                    Two(w) => TwoForm::new(w.coefficient().checked_mul(&inv)?).map(Two),
                }
            }
            Kind::Wedge(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (One(x), One(y)) => residue_symbols::wedge(&x, &y).map(Two),
                _ => err(e.pos, "the wedge product needs two one-forms"),
            },
            _ => self.series.eval(e).map(Series),
        };
        located(e.pos, r)
    }

    fn negate(&self, v: FormValue) -> Result<FormValue> {
        Ok(match v {
            FormValue::Series(f) => FormValue::Series(-f),
            FormValue::One(w) => FormValue::One(w.mul_series(&-LaurentSeries::one(self.series.ring))?),
            FormValue::Two(w) => FormValue::Two(TwoForm::new(-w.coefficient().clone())?),
        })
    }

    fn add(&self, x: FormValue, y: FormValue, pos: usize) -> Result<FormValue> {
        use FormValue::*;
        match (x, y) {
            (Series(f), Series(g)) => f.checked_add(&g).map(Series),
            (One(a), One(b)) => a.checked_add(&b).map(One),
            (Two(a), Two(b)) => a.checked_add(&b).map(Two),
            // O(t^N) attached to a form bounds its coefficients
            (One(a), Series(s)) | (Series(s), One(a)) if s.is_zero() => {
                let n = s.precision().unwrap_or(i64::MAX);
                OneForm::new(a.dt_part().with_precision(n), a.de_part().with_precision(n)).map(One)
            }
            (Two(a), Series(s)) | (Series(s), Two(a)) if s.is_zero() => {
                TwoForm::new(a.coefficient().with_precision(s.precision().unwrap_or(i64::MAX))).map(Two)
            }
            _ => err(pos, "cannot add forms of different degrees"),
        }
    }
}

/// One-forms `f*dt + g*de` and two-forms `h*de^dt`; series are accepted as
/// degree zero.
pub fn parse_form(text: &str, ring: &Ring) -> Result<FormValue> {
    let e = parse_expr(text)?;
    let prec = global_precision(&e, "t")?;
    let ev = FormEval {
        series: SeriesEval { ring, var: "t", prec },
        d_eps: format!("d{}", ring.variable().unwrap_or("e")),
    };
    ev.eval(&e)
}

// ---------------------------------------------------------------- global two-forms

/// Partial fractions in `x`: `sum c/(x - s)^k + sum c x^j`, each `c` the
/// coefficient of `de^dx`.
enum GlobalVal {
    Poly(Vec<RingElement>),
    Fractions {
        poles: Vec<(RingElement, Vec<RingElement>)>,
        tail: Vec<RingElement>,
    },
}

fn fractions(v: GlobalVal) -> (Vec<(RingElement, Vec<RingElement>)>, Vec<RingElement>) {
    match v {
        GlobalVal::Poly(p) => (Vec::new(), p),
        GlobalVal::Fractions { poles, tail } => (poles, tail),
    }
}

fn add_coeffs(a: &mut Vec<RingElement>, b: &[RingElement]) {
    if a.len() < b.len() {
        let zero = b[0].ring().zero();
        a.resize(b.len(), zero);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = &*x + y;
    }
}

fn eval_global(e: &Expr, ring: &Ring) -> Result<GlobalVal> {
    use GlobalVal::*;
    let r = match &e.kind {
        Kind::Num(_) | Kind::Var(_) | Kind::Neg(_) | Kind::Mul(..) if is_polynomial(e) => {
            Poly(eval_poly(e, ring)?)
        }
        Kind::Neg(a) => scale_global(eval_global(a, ring)?, &-ring.one()),
        Kind::Add(a, b) | Kind::Sub(a, b) => {
            let (mut poles, mut tail) = fractions(eval_global(a, ring)?);
            let rhs = eval_global(b, ring)?;
            let rhs = if matches!(e.kind, Kind::Sub(..)) {
                scale_global(rhs, &-ring.one())
            } else {
                rhs
            };
            let (p2, t2) = fractions(rhs);
            add_coeffs(&mut tail, &t2);
            for (s, c) in p2 {
                match poles.iter_mut().find(|(r, _)| *r == s) {
                    Some((_, cs)) => add_coeffs(cs, &c),
                    None => poles.push((s, c)),
                }
            }
            Fractions { poles, tail }
        }
        Kind::Mul(a, b) => match (eval_global(a, ring)?, eval_global(b, ring)?) {
            (Poly(p), v) | (v, Poly(p)) if p.len() == 1 => scale_global(v, &p[0]),
            (Poly(p), Poly(q)) => Poly(poly_mul(&p, &q)),
            _ => return err(e.pos, "expected a sum of terms c/(x - s)^k and c*x^j"),
        },
        Kind::Div(a, b) => {
            let num = eval_global(a, ring)?;
            let (base, k) = match &b.kind {
                Kind::Pow(base, k) => (base.as_ref(), *k),
                _ => (b.as_ref(), 1),
            };
            let den = eval_poly(base, ring)?;
            match (num, den.len()) {
                (v, 1) => scale_global(v, &located(b.pos, den[0].pow(-k))?),
                (Poly(c), 2) if c.len() == 1 && k > 0 => {
                    let a1 = &den[1];
                    let s = located(b.pos, (-&den[0]).checked_div(a1))?;
                    let c = located(b.pos, c[0].checked_div(&a1.pow(k)?))?;
                    let mut cs = vec![ring.zero(); k as usize];
                    cs[k as usize - 1] = c;
                    Fractions {
                        poles: vec![(s, cs)],
                        tail: vec![ring.zero()],
                    }
                }
                _ => return err(b.pos, "expected a constant over a power of a linear factor"),
            }
        }
        Kind::Pow(..) => Poly(eval_poly(e, ring)?),
        _ => return err(e.pos, "not a two-form on the affine line"),
    };
    Ok(r)
}

fn is_polynomial(e: &Expr) -> bool {
    match &e.kind {
        Kind::Num(_) | Kind::Var(_) => true,
        Kind::Neg(a) | Kind::Pow(a, _) => is_polynomial(a),
        Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) => is_polynomial(a) && is_polynomial(b),
        _ => false,
    }
}

fn eval_poly(e: &Expr, ring: &Ring) -> Result<Vec<RingElement>> {
    let r = match &e.kind {
        Kind::Var(v) if v == "x" => vec![ring.zero(), ring.one()],
        Kind::Num(_) | Kind::Var(_) => vec![eval_element(e, ring)?],
        Kind::Neg(a) => eval_poly(a, ring)?.iter().map(|c| -c).collect(),
        Kind::Add(a, b) => poly_add(&eval_poly(a, ring)?, &eval_poly(b, ring)?, 1),
        Kind::Sub(a, b) => poly_add(&eval_poly(a, ring)?, &eval_poly(b, ring)?, -1),
        Kind::Mul(a, b) => poly_mul(&eval_poly(a, ring)?, &eval_poly(b, ring)?),
        Kind::Pow(a, k) if *k >= 0 => {
            let base = eval_poly(a, ring)?;
            let mut out = vec![ring.one()];
            for _ in 0..*k {
                out = poly_mul(&out, &base);
            }
            out
        }
        _ => return err(e.pos, "expected a polynomial in x"),
    };
    Ok(r)
}

fn scale_global(v: GlobalVal, c: &RingElement) -> GlobalVal {
    let sc = |xs: Vec<RingElement>| xs.into_iter().map(|x| &x * c).collect::<Vec<_>>();
    match v {
        GlobalVal::Poly(p) => GlobalVal::Poly(sc(p)),
        GlobalVal::Fractions { poles, tail } => GlobalVal::Fractions {
            poles: poles.into_iter().map(|(s, cs)| (s, sc(cs))).collect(),
            tail: sc(tail),
        },
    }
}

/// A two-form `h de^dx` on the affine line written as partial fractions,
/// e.g. `1/(x - 1) - 1/(x - 2) + e*x`; the text gives `h`.
pub fn parse_global_form(text: &str, ring: &Ring) -> Result<GlobalTwoForm> {
    let e = parse_expr(text)?;
    let (poles, tail) = fractions(eval_global(&e, ring)?);
    let form = |c: RingElement| AOneForm::new(c);
    let poles = poles
        .into_iter()
        .map(|(s, cs)| Ok((s, cs.into_iter().map(form).collect::<Result<Vec<_>>>()?)))
        .collect::<Result<Vec<_>>>()?;
    let mut tail = tail.into_iter().map(form).collect::<Result<Vec<_>>>()?;
    while tail.last().is_some_and(|w| w.is_zero()) {
        tail.pop();
    }
    located(e.pos, GlobalTwoForm::new(ring, poles, tail))
}

fn shift<T>(r: Result<T>, by: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    })
}

/// `s1: w1; s2: w2; ...` where each `w` is the coefficient of `de`.
pub fn parse_assignment(text: &str, ring: &Ring) -> Result<Vec<(SectionPoint, AOneForm)>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for item in text.split(';') {
        let here = offset;
        offset += item.len() + 1;
        if item.trim().is_empty() {
            continue;
        }
        let Some((pt, w)) = item.split_once(':') else {
            return err(here, "expected '<point>: <coefficient of de>'");
        };
        let point = shift(parse_point(pt, ring), here)?;
        let c = shift(parse_element(w, ring), here + pt.len() + 1)?;
        out.push((point, AOneForm::new(c)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs() {
        assert_eq!(parse_ring("F3").unwrap().to_string(), "F3");
        assert_eq!(parse_ring("Q").unwrap().to_string(), "Q");
        assert_eq!(parse_ring("F3[e]/(e^2)").unwrap().to_string(), "F3[e]/(e^2)");
        assert_eq!(parse_ring(" Q[e]/(e^3) ").unwrap().to_string(), "Q[e]/(e^3)");
        assert_eq!(parse_ring("F5[x]/(x^3)").unwrap().variable(), Some("x"));
        assert_eq!(parse_ring("Z/25").unwrap().to_string(), "Z/25");
        assert_eq!(parse_ring("Z/5^2").unwrap().to_string(), "Z/25");
        assert!(matches!(parse_ring("F4"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_ring("Z/12"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_ring("F3[e]/(x^2)"), Err(Error::Parse { pos: 7, .. })));
        assert!(matches!(parse_ring("R"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn elements() {
        let r = parse_ring("F3[e]/(e^2)").unwrap();
        assert_eq!(parse_element("1 + e", &r).unwrap().to_string(), "1+e");
        assert_eq!(parse_element("(1 - e)^-1", &r).unwrap().to_string(), "1+e");
        assert_eq!(parse_element("2e + 2", &r).unwrap().to_string(), "2+2*e");
        assert!(matches!(parse_element("1/e", &r), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_element("1 + y", &r), Err(Error::Parse { pos: 4, .. })));
        let q = parse_ring("Q").unwrap();
        assert_eq!(parse_element("1/2 - 3/4", &q).unwrap().to_string(), "-1/4");
    }

    #[test]
    fn series_round_trip_through_display() {
        let r = parse_ring("F5[e]/(e^2)").unwrap();
        for text in ["1 - e*t^-1 + 2*t^3 + O(t^8)", "(1+e)*t^2", "O(t^3)", "-e*t^-2 + 3 + t"] {
            let f = parse_series(text, &r, "t").unwrap();
            assert_eq!(parse_series(&f.to_string(), &r, "t").unwrap(), f);
        }
        let f = parse_series("1/(1 - t) + O(t^4)", &r, "t").unwrap();
        assert_eq!(f.to_string(), "1 + t + t^2 + t^3 + O(t^4)");
        assert!(matches!(parse_series("1/(1 - t)", &r, "t"), Err(Error::Parse { .. })));
    }

    #[test]
    fn mhat_elements() {
        let r = parse_ring("F5[x]/(x^3)").unwrap();
        let f = parse_mhat("x^2 * (z^-1 + x*z)", &r).unwrap();
        assert_eq!((f.exponent(), f.deg()), (2, -1));
        assert_eq!(parse_mhat("x", &r).unwrap().exponent(), 1);
        let g = parse_mhat("1 - x*z^-1", &r).unwrap();
        assert_eq!((g.exponent(), g.deg()), (0, 0));
        assert_eq!(parse_mhat(&f.to_string(), &r).unwrap(), f);
    }

    #[test]
    fn rational_functions() {
        let r = parse_ring("F3[e]/(e^2)").unwrap();
        let f = parse_rational("2 * (x + 1)^2 * x^-1", &r).unwrap();
        assert_eq!(f.to_string(), "2 * (x - 2)^2 * x^-1");
        assert_eq!(parse_rational(&f.to_string(), &r).unwrap(), f);
        let g = parse_rational("(x - e)/x", &r).unwrap();
        assert_eq!(g.order_at_infinity(), 0);
        assert_eq!(parse_rational("(x - 1)(x - 2)", &r).unwrap().factors().len(), 2);
        assert!(parse_rational("x^2 + 1", &r).is_err());
        assert!(parse_rational("(e*x - 1)", &r).is_err());
        // fractional nilpotent scalars inside a section
        let q = parse_ring("Q[e]/(e^2)").unwrap();
        let h = parse_rational("(5/2+5/3*e) * (x - (1-1/2*e))^-3", &q).unwrap();
        assert_eq!(parse_rational(&h.to_string(), &q).unwrap(), h);
        assert_eq!(parse_rational("(x - e)/2", &q).unwrap().constant(), &parse_element("1/2", &q).unwrap());
    }

    #[test]
    fn forms() {
        let r = parse_ring("F3[e]/(e^2)").unwrap();
        let FormValue::One(w) = parse_form("e*dt + t*de", &r).unwrap() else {
            panic!("expected a one-form")
        };
        assert_eq!(w.to_string(), "e*dt + t*de");
        let FormValue::Two(w) = parse_form("t^-1*de^dt", &r).unwrap() else {
            panic!("expected a two-form")
        };
        assert_eq!(residue_symbols::res2(&w).unwrap().to_string(), "de");
        let FormValue::One(w) = parse_form("dt/t", &r).unwrap() else {
            panic!("expected a one-form")
        };
        assert_eq!(residue_symbols::res1(&w).unwrap(), r.one());
    }

    #[test]
    fn global_forms() {
        let r = parse_ring("F5[e]/(e^2)").unwrap();
        let w = parse_global_form("1/(x - 1) - 1/(x - e - 2) + 3/(x-1)^2", &r).unwrap();
        assert_eq!(w.poles().len(), 2);
        assert_eq!(w.poles()[0].1.len(), 2);
        assert!(parse_global_form("1/(x - 1) + 1/(x - 1 - e)", &r).is_err());
        let a = parse_assignment("0: e; inf: -e", &r).unwrap();
        assert_eq!(a.len(), 2);
        assert!(matches!(parse_assignment("0: e; 1 e", &r), Err(Error::Parse { pos: 5, .. })));
    }
}
