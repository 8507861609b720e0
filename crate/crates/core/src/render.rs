//! Text and JSON rendering plus parsing of factorization literals.
//!
//! Factorizations print as `unit * f1 * ... * fn`; U-factorizations as
//! `unit * a1 * ... * an [ b1 * ... * bm ]`. Both forms re-parse to equal
//! structures.

use crate::error::{Error, Result};
use crate::factor::{Factorization, UFactorization};
use crate::ring::{Element, Ring};
use serde_json::{json, Value};

pub fn parse_factorization(ring: &Ring, text: &str) -> Result<Factorization> {
    let s = text.trim();
    if s.contains('[') {
        return Err(Error::ParseError {
            location: s.to_string(),
            message: "unexpected `[`; use parse_u_factorization".into(),
        });
    }
    let mut parts = s.split('*').map(str::trim);
    let unit = ring.parse_element(parts.next().ok_or_else(|| Error::ParseError {
        location: s.to_string(),
        message: "empty factorization".into(),
    })?)?;
    let factors = parts.map(|p| ring.parse_element(p)).collect::<Result<Vec<_>>>()?;
    Ok(Factorization::new(unit, factors))
}

pub fn parse_u_factorization(ring: &Ring, text: &str) -> Result<UFactorization> {
    let s = text.trim();
    let open = s.find('[').ok_or_else(|| Error::ParseError {
        location: s.to_string(),
        message: "missing `[`".into(),
    })?;
    let close = s.rfind(']').ok_or_else(|| Error::ParseError {
        location: s.to_string(),
        message: "missing `]`".into(),
    })?;
    let head = s[..open].trim();
    let bracket = s[open + 1..close].trim();
    let mut head_parts = head
        .split('*')
        .map(str::trim)
        .filter(|p| !p.is_empty());
    let unit = ring.parse_element(head_parts.next().ok_or_else(|| Error::ParseError {
        location: s.to_string(),
        message: "missing unit part".into(),
    })?)?;
    let inessential = head_parts.map(|p| ring.parse_element(p)).collect::<Result<Vec<_>>>()?;
    let essential = bracket
        .split('*')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| ring.parse_element(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(UFactorization::new(unit, inessential, essential))
}

pub fn elements_json(ring: &Ring, xs: &[Element]) -> Value {
    Value::Array(xs.iter().map(|&x| Value::String(ring.show(x))).collect())
}

pub fn factorization_json(ring: &Ring, f: &Factorization) -> Value {
    json!({
        "unit": ring.show(f.unit),
        "factors": f.factors.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
        "text": f.render(ring),
    })
}

pub fn u_factorization_json(ring: &Ring, uf: &UFactorization) -> Value {
    json!({
        "unit": ring.show(uf.unit),
        "inessential": uf.inessential.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
        "essential": uf.essential.iter().map(|&x| ring.show(x)).collect::<Vec<_>>(),
        "text": uf.render(ring),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn factorization_text_round_trip() {
        let z20 = Ring::modular(20).unwrap();
        let f = Factorization::new(z20.el(3), vec![z20.el(2), z20.el(10)]);
        assert_eq!(f.render(&z20), "3 * 2 * 10");
        assert_eq!(parse_factorization(&z20, &f.render(&z20)).unwrap(), f);

        let uf = UFactorization::new(z20.el(1), vec![z20.el(5)], vec![z20.el(2), z20.el(2), z20.el(5)]);
        assert_eq!(uf.render(&z20), "1 * 5 [ 2 * 2 * 5 ]");
        assert_eq!(parse_u_factorization(&z20, &uf.render(&z20)).unwrap(), uf);

        let trivial = UFactorization::new(z20.el(1), vec![], vec![z20.el(10), z20.el(10)]);
        assert_eq!(trivial.render(&z20), "1 [ 10 * 10 ]");
        assert_eq!(parse_u_factorization(&z20, &trivial.render(&z20)).unwrap(), trivial);
    }

    #[test]
    fn product_element_literals_round_trip() {
        let r = Ring::parse("Z6xZ8").unwrap();
        let el = |s: &str| r.parse_element(s).unwrap();
        let uf = UFactorization::new(r.one(), vec![el("(3,1)")], vec![el("(3,3)"), el("(1,4)")]);
        assert_eq!(uf.render(&r), "(1,1) * (3,1) [ (3,3) * (1,4) ]");
        assert_eq!(parse_u_factorization(&r, &uf.render(&r)).unwrap(), uf);
    }
}
