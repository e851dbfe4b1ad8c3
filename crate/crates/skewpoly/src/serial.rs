//! Text formats for fields, elements and skew polynomials.
//!
//! Grammar (whitespace allowed between tokens):
//!   field:   `p=<prime>;f=<c_0>,<c_1>,...,<c_r>`   with `c_r = 1`
//!   element: `[<k_0>,...,<k_{r-1}>]`               coordinates in `[0, p)`
//!   poly:    `[<element>,<element>,...]`           degree = length - 1
//!
//! Parse errors carry 1-based line/column positions.

use crate::error::{Error, Result};
use crate::skew::SkewPoly;
use crate::tower::{Elem, Tower};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Cursor<'a> {
        Cursor { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            Some(got) => Err(self.error(format!(
                "expected '{}', found '{}'",
                c as char, got as char
            ))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn parse_u64(&mut self) -> Result<u64> {
        self.skip_ws();
        let mut val: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek() {
            if !c.is_ascii_digit() {
                break;
            }
            let d = (c - b'0') as u64;
            val = val
                .checked_mul(10)
                .and_then(|v| v.checked_add(d))
                .ok_or_else(|| self.error("integer literal overflows 64 bits"))?;
            self.bump();
            any = true;
        }
        if !any {
            return Err(self.error("expected an integer"));
        }
        Ok(val)
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("trailing input starting at '{}'", c as char))),
        }
    }
}

/// Parses `p=<prime>;f=<c_0>,...,<c_r>`; the prime and irreducibility
/// checks happen when the tower is built.
pub fn parse_field_desc(src: &str) -> Result<(u64, Vec<u64>)> {
    let mut c = Cursor::new(src);
    c.expect(b'p')?;
    c.expect(b'=')?;
    let p = c.parse_u64()?;
    c.expect(b';')?;
    c.expect(b'f')?;
    c.expect(b'=')?;
    let mut coeffs = vec![c.parse_u64()?];
    loop {
        c.skip_ws();
        if c.peek() == Some(b',') {
            c.bump();
            coeffs.push(c.parse_u64()?);
        } else {
            break;
        }
    }
    c.expect_end()?;
    if coeffs.len() < 2 {
        return Err(c.error("f must have degree >= 1"));
    }
    if *coeffs.last().unwrap() != 1 {
        return Err(c.error("leading coefficient of f must be 1"));
    }
    if coeffs.iter().any(|&v| v >= p) {
        return Err(c.error("coefficients must lie in [0, p)"));
    }
    Ok((p, coeffs))
}

pub fn print_field_desc(t: &Tower) -> String {
    let coeffs: Vec<String> = t.modulus_fp().iter().map(|c| c.to_string()).collect();
    format!("p={};f={}", t.p(), coeffs.join(","))
}

fn parse_elem_at(c: &mut Cursor, t: &Tower) -> Result<Elem> {
    c.expect(b'[')?;
    let mut coords = Vec::with_capacity(t.r());
    c.skip_ws();
    if c.peek() != Some(b']') {
        coords.push(c.parse_u64()?);
        loop {
            c.skip_ws();
            if c.peek() == Some(b',') {
                c.bump();
                coords.push(c.parse_u64()?);
            } else {
                break;
            }
        }
    }
    c.expect(b']')?;
    if coords.len() != t.r() {
        return Err(c.error(format!(
            "element needs exactly {} coordinates, found {}",
            t.r(),
            coords.len()
        )));
    }
    if coords.iter().any(|&v| v >= t.p()) {
        return Err(c.error(format!("coordinates must lie in [0, {})", t.p())));
    }
    Ok(t.elem_from_fp_coords(&coords))
}

pub fn parse_elem(src: &str, t: &Tower) -> Result<Elem> {
    let mut c = Cursor::new(src);
    let e = parse_elem_at(&mut c, t)?;
    c.expect_end()?;
    Ok(e)
}

pub fn print_elem(t: &Tower, e: &Elem) -> String {
    assert_eq!(t.base().n(), 1, "text formats cover the ground tower");
    let coords: Vec<String> = e.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", coords.join(","))
}

/// Parses a bracketed sequence of elements. `expect_len` pins the length
/// (codewords); `None` accepts any length (polynomials).
pub fn parse_word(src: &str, t: &Tower, expect_len: Option<usize>) -> Result<Vec<Elem>> {
    let mut c = Cursor::new(src);
    c.expect(b'[')?;
    let mut elems = Vec::new();
    c.skip_ws();
    if c.peek() != Some(b']') {
        elems.push(parse_elem_at(&mut c, t)?);
        loop {
            c.skip_ws();
            if c.peek() == Some(b',') {
                c.bump();
                elems.push(parse_elem_at(&mut c, t)?);
            } else {
                break;
            }
        }
    }
    c.expect(b']')?;
    c.expect_end()?;
    if let Some(n) = expect_len {
        if elems.len() != n {
            return Err(c.error(format!("expected {} elements, found {}", n, elems.len())));
        }
    }
    Ok(elems)
}

pub fn print_word(t: &Tower, word: &[Elem]) -> String {
    let parts: Vec<String> = word.iter().map(|e| print_elem(t, e)).collect();
    format!("[{}]", parts.join(","))
}

/// Parses a skew polynomial (canonicalized: trailing zeros trimmed).
pub fn parse_poly(src: &str, t: &Tower) -> Result<SkewPoly> {
    Ok(SkewPoly::from_coeffs(t, parse_word(src, t, None)?))
}

/// Canonical serialization: coefficients up to the degree, `[]` for zero.
pub fn print_poly(t: &Tower, p: &SkewPoly) -> String {
    print_word(t, p.coeffs())
}
