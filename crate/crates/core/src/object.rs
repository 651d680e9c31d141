//! Object tokens (`pn:2`, `scroll:1,2`, `cone:quadric`, `pencil:3`,
//! `span=[..];[..]`) and the counting methods available for each.

use std::fmt;
use std::str::FromStr;

use crate::enumerate::{
    count_line_bruteforce, count_line_lattice, count_line_parametrized, count_pn, count_pn_scan, Limits,
};
use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::line::{parse_line, Line};
use crate::ruled::{
    count_cone, count_cone_bruteforce, count_pn_via_pencil, count_scroll_bruteforce, count_scroll_fibersum, Scroll,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Lattice enumeration; fiber-summed lattice counts for ruled objects,
    /// Möbius inversion for `pn`.
    Lattice,
    /// Exhaustive ambient scan.
    Brute,
    /// Projection through a coordinate pair; lines only.
    Param,
}

impl Method {
    pub fn token(&self) -> &'static str {
        match self {
            Method::Lattice => "lattice",
            Method::Brute => "brute",
            Method::Param => "param",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" | "fibersum" => Ok(Method::Lattice),
            "brute" | "bruteforce" => Ok(Method::Brute),
            "param" | "parametrized" => Ok(Method::Param),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Pn(usize),
    Scroll(Scroll),
    Cone(FieldContext),
    Pencil(usize),
    Line(Box<Line>),
}

impl Object {
    pub fn parse(token: &str, ctx: FieldContext) -> Result<Object> {
        let t = token.trim();
        let bad = || Error::Parse(format!("unrecognized object token `{t}`"));
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        if t.starts_with("span=") || t.starts_with('[') {
            return parse_line(t, ctx).map(|l| Object::Line(Box::new(l)));
        }
        let (kind, arg) = t.split_once(':').ok_or_else(bad)?;
        match kind {
            "pn" => {
                let n = num(arg)?;
                if n == 0 {
                    return Err(Error::InvalidArgument("pn needs n >= 1".into()));
                }
                Ok(Object::Pn(n))
            }
            "scroll" => {
                let (a, b) = arg.split_once(',').ok_or_else(bad)?;
                Scroll::new(num(a)? as u32, num(b)? as u32, ctx).map(Object::Scroll)
            }
            "cone" if arg == "quadric" => Ok(Object::Cone(ctx)),
            "pencil" => {
                let n = num(arg)?;
                if n < 2 {
                    return Err(Error::InvalidArgument("pencil needs n >= 2".into()));
                }
                Ok(Object::Pencil(n))
            }
            _ => Err(bad()),
        }
    }

    pub fn token(&self) -> String {
        match self {
            Object::Pn(n) => format!("pn:{n}"),
            Object::Scroll(s) => s.token(),
            Object::Cone(_) => "cone:quadric".into(),
            Object::Pencil(n) => format!("pencil:{n}"),
            Object::Line(l) => l.to_string(),
        }
    }

    pub fn methods(&self) -> &'static [Method] {
        match self {
            Object::Line(_) => &[Method::Lattice, Method::Brute, Method::Param],
            _ => &[Method::Lattice, Method::Brute],
        }
    }

    /// The pair compared by `--method both`.
    pub fn comparison(&self) -> (Method, Method) {
        (Method::Lattice, Method::Brute)
    }

    pub fn count(&self, bound: u64, method: Method, ctx: &FieldContext, limits: &Limits) -> Result<u64> {
        if !self.methods().contains(&method) {
            return Err(Error::InvalidArgument(format!("method {method} does not apply to {}", self.token())));
        }
        match (self, method) {
            (Object::Pn(n), Method::Lattice) => count_pn(*n, bound, ctx),
            (Object::Pn(n), _) => count_pn_scan(*n, bound, ctx, limits),
            (Object::Scroll(s), Method::Lattice) => count_scroll_fibersum(s, bound, limits),
            (Object::Scroll(s), _) => count_scroll_bruteforce(s, bound, limits),
            (Object::Cone(c), Method::Lattice) => count_cone(bound, c, limits),
            (Object::Cone(c), _) => count_cone_bruteforce(bound, c, limits),
            (Object::Pencil(n), Method::Lattice) => count_pn_via_pencil(*n, bound, ctx, limits),
            (Object::Pencil(n), _) => count_pn_scan(*n, bound, ctx, limits),
            (Object::Line(l), Method::Lattice) => count_line_lattice(l, bound, limits),
            (Object::Line(l), Method::Brute) => count_line_bruteforce(l, bound, limits),
            (Object::Line(l), Method::Param) => count_line_parametrized(l, bound, limits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldContext = FieldContext::RATIONAL;

    #[test]
    fn tokens_round_trip() {
        for t in ["pn:3", "scroll:1,2", "cone:quadric", "pencil:2", "span=[1:0:0];[0:1:0]"] {
            assert_eq!(Object::parse(t, Q).unwrap().token(), t);
        }
        for t in ["pn:0", "scroll:2,1", "cone:cubic", "pencil:1", "plane:2", "span=[1:2];[2:4]"] {
            assert!(Object::parse(t, Q).is_err(), "{t}");
        }
    }

    #[test]
    fn methods_agree_on_small_objects() {
        let l = Limits::default();
        for t in ["pn:1", "pn:2", "scroll:1,2", "scroll:0,2", "cone:quadric", "pencil:3", "span=[1:2:3];[0:1:5]"] {
            let o = Object::parse(t, Q).unwrap();
            for b in [1, 4] {
                let counts: Vec<u64> = o.methods().iter().map(|&m| o.count(b, m, &Q, &l).unwrap()).collect();
                assert!(counts.windows(2).all(|w| w[0] == w[1]), "{t} {counts:?}");
            }
        }
        assert_eq!(Object::parse("pn:1", Q).unwrap().count(1, Method::Lattice, &Q, &l).unwrap(), 4);
        assert!(Object::parse("pn:1", Q).unwrap().count(1, Method::Param, &Q, &l).is_err());
    }
}
