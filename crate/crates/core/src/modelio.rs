//! Vector-field source files, parameter binding and the Leslie–Gower
//! dimensionless transform.

use crate::exactalg::rat::{fmt_rat, sign};
use crate::exactalg::{MPoly, Rat, Var};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// A planar polynomial system `x' = P(x, y)`, `y' = Q(x, y)` with all
/// parameters already bound to rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarSystem {
    pub p: MPoly,
    pub q: MPoly,
    pub params: BTreeMap<String, Rat>,
    /// Names used in the source; polynomials always use x, y internally.
    pub var_names: [String; 2],
}

impl PlanarSystem {
    pub fn new(p: MPoly, q: MPoly) -> Self {
        PlanarSystem {
            p,
            q,
            params: BTreeMap::new(),
            var_names: ["x".into(), "y".into()],
        }
    }

    /// `max(deg P, deg Q)`, with the zero field counted as degree 0.
    pub fn degree(&self) -> u32 {
        self.p
            .degree()
            .unwrap_or(0)
            .max(self.q.degree().unwrap_or(0))
    }

    /// Lie derivative `X(f) = P f_x + Q f_y`.
    pub fn lie(&self, f: &MPoly) -> MPoly {
        &(&self.p * &f.diff(Var::X)) + &(&self.q * &f.diff(Var::Y))
    }

    /// Multiplies the field by a constant (a time rescaling when positive).
    pub fn scaled(&self, c: &Rat) -> PlanarSystem {
        PlanarSystem {
            p: self.p.scale(c),
            q: self.q.scale(c),
            ..self.clone()
        }
    }

    /// Canonical source text; parameters are already substituted.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        if !self.params.is_empty() {
            let binds: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", fmt_rat(v)))
                .collect();
            s.push_str(&format!("# params: {}\n", binds.join(", ")));
        }
        s.push_str(&format!("dx = {}\n", self.p));
        s.push_str(&format!("dy = {}\n", self.q));
        s
    }
}

impl fmt::Display for PlanarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x' = {}, y' = {}", self.p, self.q)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unbound identifier `{name}`")]
    Unbound {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: zero denominator in rational literal")]
    ZeroDenominator { line: usize, col: usize },
    #[error("{line}:{col}: exponent must be a nonnegative integer")]
    NonIntegerExponent { line: usize, col: usize },
    #[error("missing `{0}` equation")]
    MissingEquation(&'static str),
    #[error("{line}: more than two equations")]
    ExtraEquation { line: usize },
    #[error("malformed parameter binding `{0}`")]
    BadParam(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if "+-*/^()=,:".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                line: lineno,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
    params: &'a BTreeMap<String, Rat>,
    vars: [&'a str; 2],
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.col)
            .unwrap_or(self.end_col)
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Sym('*')) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc * f;
        }
        if let Some(Tok::Sym('/')) = self.peek() {
            return Err(self.syntax("division is only allowed inside rational literals"));
        }
        Ok(acc)
    }

    // Unary minus binds looser than `^`: `-x^2` is `-(x^2)`.
    fn factor(&mut self) -> Result<MPoly, ParseError> {
        if let Some(Tok::Sym('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.pos += 1;
            let col = self.col();
            let bad = ParseError::NonIntegerExponent {
                line: self.line,
                col,
            };
            let e = match self.peek().cloned() {
                Some(Tok::Num(s)) if !s.contains('.') => {
                    s.parse::<u32>().map_err(|_| bad.clone())?
                }
                Some(Tok::Num(_)) | Some(Tok::Sym('-')) | Some(Tok::Sym('('))
                | Some(Tok::Ident(_)) => return Err(bad),
                _ => return Err(self.syntax("expected exponent")),
            };
            self.pos += 1;
            if let Some(Tok::Sym('/')) = self.peek() {
                return Err(bad);
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MPoly, ParseError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let v = self.rational(&s, col)?;
                Ok(MPoly::constant(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == self.vars[0] {
                    Ok(MPoly::x())
                } else if name == self.vars[1] {
                    Ok(MPoly::y())
                } else if let Some(v) = self.params.get(&name) {
                    Ok(MPoly::constant(v.clone()))
                } else {
                    Err(ParseError::Unbound {
                        line: self.line,
                        col,
                        name,
                    })
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => Err(self.syntax("expected `)`")),
                }
            }
            _ => Err(self.syntax("expected a number, identifier or `(`")),
        }
    }

    // INT or INT '/' POSINT; the numerator token is already consumed.
    fn rational(&mut self, num: &str, col: usize) -> Result<Rat, ParseError> {
        let n = parse_int(num).ok_or_else(|| ParseError::Syntax {
            line: self.line,
            col,
            msg: format!("`{num}` is not an integer (write decimals as p/q)"),
        })?;
        let is_literal_div = matches!(self.peek(), Some(Tok::Sym('/')))
            && matches!(
                self.toks.get(self.pos + 1).map(|t| &t.tok),
                Some(Tok::Num(_))
            );
        if !is_literal_div {
            return Ok(Rat::from_integer(n));
        }
        self.pos += 1;
        let dcol = self.col();
        let Some(Tok::Num(ds)) = self.peek().cloned() else {
            unreachable!()
        };
        self.pos += 1;
        let d = parse_int(&ds).ok_or_else(|| ParseError::Syntax {
            line: self.line,
            col: dcol,
            msg: format!("`{ds}` is not an integer"),
        })?;
        if d.is_zero() {
            return Err(ParseError::ZeroDenominator {
                line: self.line,
                col: dcol,
            });
        }
        Ok(Rat::new(n, d))
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.contains('.') {
        return None;
    }
    s.parse().ok()
}

/// Parses `NAME=RAT, NAME=RAT, ...` as used by `params:` lines and overrides.
pub fn parse_bindings(s: &str) -> Result<BTreeMap<String, Rat>, ParseError> {
    let mut out = BTreeMap::new();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| ParseError::BadParam(item.to_string()))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(ParseError::BadParam(item.to_string()));
        }
        let value = value.trim();
        let (n, d) = match value.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (value, None),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| ParseError::BadParam(item.to_string()))?;
        let d: BigInt = match d {
            Some(d) => {
                let d: BigInt = d
                    .parse()
                    .map_err(|_| ParseError::BadParam(item.to_string()))?;
                if d.is_zero() {
                    return Err(ParseError::ZeroDenominator { line: 0, col: 0 });
                }
                if d.is_negative() {
                    return Err(ParseError::BadParam(item.to_string()));
                }
                d
            }
            None => BigInt::one(),
        };
        out.insert(name.to_string(), Rat::new(n, d));
    }
    Ok(out)
}

/// Parses a vector-field source file.
pub fn parse_system(source: &str) -> Result<PlanarSystem, ParseError> {
    parse_system_with(source, &BTreeMap::new())
}

/// Parses a source file, letting `overrides` replace file bindings.
pub fn parse_system_with(
    source: &str,
    overrides: &BTreeMap<String, Rat>,
) -> Result<PlanarSystem, ParseError> {
    let mut params = BTreeMap::new();
    let mut equations: Vec<(usize, String, Vec<Token>)> = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix("params:") {
            match parse_bindings(rest) {
                Ok(b) => params.extend(b),
                Err(ParseError::ZeroDenominator { .. }) => {
                    let col = line.find('/').map(|c| c + 2).unwrap_or(1);
                    return Err(ParseError::ZeroDenominator { line: lineno, col });
                }
                Err(e) => return Err(e),
            }
            continue;
        }
        let toks = tokenize(line, lineno)?;
        let (lhs, rest) = match toks.as_slice() {
            [Token {
                tok: Tok::Ident(l), ..
            }, Token {
                tok: Tok::Sym('='), ..
            }, rest @ ..]
                if l.len() > 1 && l.starts_with('d') =>
            {
                (l[1..].to_string(), rest.to_vec())
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: lineno,
                    col: toks.first().map(|t| t.col).unwrap_or(1),
                    msg: "expected `params:` or `dVAR = EXPR`".into(),
                })
            }
        };
        if equations.len() == 2 {
            return Err(ParseError::ExtraEquation { line: lineno });
        }
        equations.push((lineno, lhs, rest));
    }
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
    if equations.is_empty() {
        return Err(ParseError::MissingEquation("dx"));
    }
    if equations.len() == 1 {
        return Err(ParseError::MissingEquation(if equations[0].1 == "y" {
            "dx"
        } else {
            "dy"
        }));
    }
    // dx/dy order in the file may be either way round
    if equations[0].1 == "y" && equations[1].1 == "x" {
        equations.swap(0, 1);
    }
    let vars = [equations[0].1.clone(), equations[1].1.clone()];
    if vars[0] == vars[1] {
        return Err(ParseError::MissingEquation("dy"));
    }
    let mut polys = Vec::new();
    for (lineno, _, toks) in &equations {
        let end_col = toks.last().map(|t| t.col + 1).unwrap_or(1);
        let mut p = ExprParser {
            toks,
            pos: 0,
            line: *lineno,
            end_col,
            params: &params,
            vars: [&vars[0], &vars[1]],
        };
        let e = p.expr()?;
        if p.pos != toks.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        polys.push(e);
    }
    let q = polys.pop().unwrap();
    let pp = polys.pop().unwrap();
    Ok(PlanarSystem {
        p: pp,
        q,
        params,
        var_names: vars,
    })
}

/// Biological parameters of the generalist-predator Leslie–Gower model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeslieGowerParams {
    pub r: Rat,
    pub k: Rat,
    pub q: Rat,
    pub s: Rat,
    pub n: Rat,
    pub c: Rat,
}

/// Dimensionless parameters `A = knq/r`, `B = s/r`, `C = c/(kn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ParamBindings {
    #[serde(rename = "A", serialize_with = "ser_rat")]
    pub a: Rat,
    #[serde(rename = "B", serialize_with = "ser_rat")]
    pub b: Rat,
    #[serde(rename = "C", serialize_with = "ser_rat")]
    pub c: Rat,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

impl ParamBindings {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        ParamBindings { a, b, c }
    }

    /// The regime quantity `1 - AC`.
    pub fn one_minus_ac(&self) -> Rat {
        Rat::one() - &self.a * &self.c
    }

    pub fn regime_sign(&self) -> i32 {
        sign(&self.one_minus_ac())
    }

    pub fn as_map(&self) -> BTreeMap<String, Rat> {
        BTreeMap::from([
            ("A".to_string(), self.a.clone()),
            ("B".to_string(), self.b.clone()),
            ("C".to_string(), self.c.clone()),
        ])
    }

    /// Reads `A`, `B`, `C` from a binding table.
    pub fn from_map(m: &BTreeMap<String, Rat>) -> Option<Self> {
        Some(ParamBindings::new(
            m.get("A")?.clone(),
            m.get("B")?.clone(),
            m.get("C")?.clone(),
        ))
    }
}

impl fmt::Display for ParamBindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={}, B={}, C={}",
            fmt_rat(&self.a),
            fmt_rat(&self.b),
            fmt_rat(&self.c)
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parameter `{0}` must be strictly positive")]
pub struct NonPositiveParam(pub &'static str);

/// `x' = x(C+x)(1-x-Ay)`, `y' = By(C+x-y)`.
pub fn leslie_gower_system(b: &ParamBindings) -> PlanarSystem {
    let x = MPoly::x();
    let y = MPoly::y();
    let one = MPoly::one();
    let cc = MPoly::constant(b.c.clone());
    let p = &x * &(&cc + &x) * (&one - &x - y.scale(&b.a));
    let q = (&y * &(&cc + &x - &y)).scale(&b.b);
    PlanarSystem {
        p,
        q,
        params: b.as_map(),
        var_names: ["x".into(), "y".into()],
    }
}

/// The dimensionless transform of the biological model, plus the
/// polynomial system it produces.
pub fn leslie_transform(
    p: &LeslieGowerParams,
) -> Result<(ParamBindings, PlanarSystem), NonPositiveParam> {
    for (name, v) in [
        ("r", &p.r),
        ("k", &p.k),
        ("q", &p.q),
        ("s", &p.s),
        ("n", &p.n),
        ("c", &p.c),
    ] {
        if !v.is_positive() {
            return Err(NonPositiveParam(name));
        }
    }
    let kn = &p.k * &p.n;
    let b = ParamBindings::new(&kn * &p.q / &p.r, &p.s / &p.r, &p.c / &kn);
    let sys = leslie_gower_system(&b);
    Ok((b, sys))
}

/// Default seed for the generic-parameter sample.
pub const DEFAULT_SAMPLE_SEED: u64 = 20_240_101;

/// Deterministic sample of positive rational triples `(A, B, C)`.
pub fn seeded_triples(seed: u64, count: usize) -> Vec<ParamBindings> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let n: i64 = rng.gen_range(1..=9);
        let d: i64 = rng.gen_range(1..=4);
        Rat::new(BigInt::from(n), BigInt::from(d))
    };
    (0..count)
        .map(|_| {
            let a = draw(&mut rng);
            let b = draw(&mut rng);
            let c = draw(&mut rng);
            ParamBindings::new(a, b, c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    const MODEL: &str = "params: A=1, B=2, C=1/2\ndx = x*(C+x)*(1-x-A*y)\ndy = B*y*(C+x-y)\n";

    #[test]
    fn parses_the_model() {
        let sys = parse_system(MODEL).unwrap();
        let expected = leslie_gower_system(&ParamBindings::new(int(1), int(2), rat(1, 2)));
        assert_eq!(sys.p, expected.p);
        assert_eq!(sys.q, expected.q);
        assert_eq!(sys.degree(), 3);
    }

    #[test]
    fn missing_equation() {
        assert_eq!(
            parse_system("dx = x"),
            Err(ParseError::MissingEquation("dy"))
        );
    }

    #[test]
    fn zero_denominator() {
        let e = parse_system("params: A=1/0\ndx = x\ndy = y").unwrap_err();
        assert!(matches!(e, ParseError::ZeroDenominator { line: 1, .. }));
        let e = parse_system("dx = 3/0*x\ndy = y").unwrap_err();
        assert_eq!(e, ParseError::ZeroDenominator { line: 1, col: 8 });
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_system("dx = x + z\ndy = y").unwrap_err(),
            ParseError::Unbound {
                line: 1,
                col: 10,
                name: "z".into()
            }
        );
        assert!(matches!(
            parse_system("dx = x^(2)\ndy = y").unwrap_err(),
            ParseError::NonIntegerExponent { line: 1, col: 8 }
        ));
        assert!(matches!(
            parse_system("dx = x^1/2\ndy = y").unwrap_err(),
            ParseError::NonIntegerExponent { .. }
        ));
        assert!(matches!(
            parse_system("dx = x^2.5\ndy = y").unwrap_err(),
            ParseError::NonIntegerExponent { .. }
        ));
        assert!(matches!(
            parse_system("dx = x/y\ndy = y").unwrap_err(),
            ParseError::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_system("dx = (x + 1\ndy = y").unwrap_err(),
            ParseError::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn other_variable_names_normalize() {
        let sys = parse_system("# prey/predator\ndu = u - u*v\ndv = -v + u*v").unwrap();
        assert_eq!(sys.p, MPoly::x() - MPoly::x() * MPoly::y());
        assert_eq!(sys.var_names, ["u".to_string(), "v".to_string()]);
    }

    #[test]
    fn overrides_replace_file_bindings() {
        let ov = parse_bindings("A=3").unwrap();
        let sys = parse_system_with(MODEL, &ov).unwrap();
        let expected = leslie_gower_system(&ParamBindings::new(int(3), int(2), rat(1, 2)));
        assert_eq!(sys.p, expected.p);
    }

    #[test]
    fn unary_minus_and_powers() {
        let sys = parse_system("dx = -x^2 - -3\ndy = (x+y)^2").unwrap();
        assert_eq!(sys.p, -MPoly::term(int(1), 2, 0) + MPoly::constant(int(3)));
        let s = MPoly::x() + MPoly::y();
        assert_eq!(sys.q, &s * &s);
    }

    #[test]
    fn transform_examples() {
        let one = int(1);
        let mk = |v: [i64; 6]| LeslieGowerParams {
            r: int(v[0]),
            k: int(v[1]),
            q: int(v[2]),
            s: int(v[3]),
            n: int(v[4]),
            c: int(v[5]),
        };
        let (b, _) = leslie_transform(&mk([1, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(b, ParamBindings::new(one.clone(), one.clone(), one.clone()));
        assert_eq!(b.regime_sign(), 0);
        let (b, _) = leslie_transform(&mk([2, 1, 1, 1, 1, 1])).unwrap();
        assert_eq!(b, ParamBindings::new(rat(1, 2), rat(1, 2), one.clone()));
        assert_eq!(b.one_minus_ac(), rat(1, 2));
        let (b, _) = leslie_transform(&mk([1, 1, 2, 1, 1, 2])).unwrap();
        assert_eq!(b, ParamBindings::new(int(2), one.clone(), int(2)));
        assert_eq!(b.one_minus_ac(), int(-3));
        assert_eq!(
            leslie_transform(&mk([1, 0, 1, 1, 1, 1])),
            Err(NonPositiveParam("k"))
        );
    }

    #[test]
    fn sample_is_deterministic_and_positive() {
        let a = seeded_triples(7, 5);
        assert_eq!(a, seeded_triples(7, 5));
        assert!(a
            .iter()
            .all(|t| t.a.is_positive() && t.b.is_positive() && t.c.is_positive()));
    }
}
