//! Text syntax for polynomials.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*' | '/') power | power)*
//! power  := atom (('^' | '**') integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant. Juxtaposition such as
//! `3x` means multiplication.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::field::Rationals;
use super::monomial::{Monomial, MAX_VARS};
use super::poly::QPoly;
use super::PolyError;

/// Ordered variable names of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

const XYZW: [&str; 4] = ["x", "y", "z", "w"];
const ABC_XYZW: [&str; 7] = ["a", "b", "c", "x", "y", "z", "w"];

impl VarNames {
    pub fn new(names: &[&str]) -> Self {
        assert!(names.len() <= MAX_VARS, "at most {MAX_VARS} variables supported");
        VarNames { names: names.iter().map(|s| s.to_string()).collect() }
    }

    /// `x, y, z, w` for up to four variables, `x0, x1, ...` otherwise.
    pub fn default_for(nvars: usize) -> Self {
        if nvars <= 4 {
            VarNames::new(&XYZW[..nvars])
        } else {
            VarNames { names: (0..nvars).map(|i| format!("x{i}")).collect() }
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, n) in self.names.iter().enumerate() {
            match m.exponent(i) {
                0 => {}
                1 => parts.push(n.clone()),
                e => parts.push(format!("{n}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Parse with an inferred ring.
///
/// Names drawn from `x, y, z, w` give the ring `x, y, z, w` truncated after
/// the last name used; names `x0, x1, ...` give `x0 .. xN`; if any of
/// `a, b, c` occur the ring is `a, b, c, x, y, z, w`, again truncated.
pub fn parse_poly(input: &str) -> Result<QPoly, PolyError> {
    let used = scan_names(input)?;
    let names = infer_names(&used)?;
    parse_poly_in(input, &names)
}

/// Parse in the ring with the given variable names.
pub fn parse_poly_in(input: &str, names: &VarNames) -> Result<QPoly, PolyError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, names };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

fn scan_names(input: &str) -> Result<Vec<(String, usize)>, PolyError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((input[start..i].to_string(), start));
        } else {
            i += 1;
        }
    }
    Ok(out)
}

fn infer_names(used: &[(String, usize)]) -> Result<VarNames, PolyError> {
    let indexed = used.iter().any(|(n, _)| is_indexed(n));
    if indexed {
        let mut max = 0usize;
        for (n, pos) in used {
            if !is_indexed(n) {
                return Err(PolyError::Parse {
                    position: *pos,
                    message: format!("cannot mix `{n}` with indexed variables"),
                });
            }
            let k: usize = n[1..]
                .parse()
                .map_err(|_| PolyError::Parse { position: *pos, message: format!("bad variable index in `{n}`") })?;
            max = max.max(k + 1);
        }
        if max > MAX_VARS {
            return Err(PolyError::TooManyVars(max));
        }
        return Ok(VarNames { names: (0..max).map(|i| format!("x{i}")).collect() });
    }
    let table: &[&str] =
        if used.iter().any(|(n, _)| matches!(n.as_str(), "a" | "b" | "c")) { &ABC_XYZW } else { &XYZW };
    let mut count = 1;
    for (n, pos) in used {
        match table.iter().position(|t| t == n) {
            Some(i) => count = count.max(i + 1),
            None => return Err(PolyError::Parse { position: *pos, message: format!("unknown variable `{n}`") }),
        }
    }
    Ok(VarNames::new(&table[..count]))
}

fn is_indexed(n: &str) -> bool {
    n.len() > 1 && n.starts_with('x') && n[1..].bytes().all(|b| b.is_ascii_digit())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { position: self.pos, message: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = QPoly::zero(Rationals, self.nvars());
        let mut sign = match self.peek() {
            Some(b'+') => {
                self.pos += 1;
                1
            }
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign > 0 { &acc + &t } else { &acc - &t };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') if self.src.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.power()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(PolyError::Parse {
                            position: at,
                            message: "division only by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&rhs.constant_term().recip());
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    let rhs = self.power()?;
                    acc = &acc * &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<QPoly, PolyError> {
        let base = self.atom()?;
        let has_pow = match self.peek() {
            Some(b'^') => {
                self.pos += 1;
                true
            }
            Some(b'*') if self.src.get(self.pos + 1) == Some(&b'*') => {
                self.pos += 2;
                true
            }
            _ => false,
        };
        if !has_pow {
            return Ok(base);
        }
        self.skip_ws();
        let e = self.integer()?;
        let e: u32 = e
            .try_into()
            .ok()
            .filter(|&e: &u32| e <= super::MAX_EXPONENT)
            .ok_or_else(|| self.err("exponent too large"))?;
        Ok(base.pow(e))
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<QPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let c = BigRational::from_integer(n);
                if c.is_zero() {
                    return Ok(QPoly::zero(Rationals, self.nvars()));
                }
                Ok(QPoly::constant(Rationals, self.nvars(), c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.index_of(name) {
                    Some(i) => Ok(QPoly::var(Rationals, self.nvars(), i)),
                    None => Err(PolyError::Parse { position: start, message: format!("unknown variable `{name}`") }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl QPoly {
    /// Parse in the default ring with `nvars` variables.
    pub fn parse_in_arity(input: &str, nvars: usize) -> Result<QPoly, PolyError> {
        parse_poly_in(input, &VarNames::default_for(nvars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_ring() {
        assert_eq!(parse_poly("x+y").unwrap().nvars(), 2);
        assert_eq!(parse_poly("w").unwrap().nvars(), 4);
        assert_eq!(parse_poly("a*x").unwrap().nvars(), 4);
        assert_eq!(parse_poly("x0 + x5").unwrap().nvars(), 6);
        assert_eq!(parse_poly("7").unwrap().nvars(), 1);
    }

    #[test]
    fn rational_coefficients() {
        let f = parse_poly("1/2*x - 3/4").unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.coefficient(&Monomial::var(0, 1)), half);
        assert_eq!(f.constant_term(), BigRational::new((-3).into(), 4.into()));
        assert_eq!(parse_poly("2x^2").unwrap(), parse_poly("2*x**2").unwrap());
        assert!(
            parse_poly("(x+1)^3").unwrap().coefficient(&Monomial::var(0, 2)) == BigRational::from_integer(3.into())
        );
        assert!(parse_poly("x^0").unwrap().is_one());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x + * y") {
            Err(PolyError::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x + q"), Err(PolyError::Parse { position: 4, .. })));
        assert!(matches!(parse_poly("x / y"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_poly("(x + y"), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_poly("x y )"), Err(PolyError::Parse { .. })));
    }
}
