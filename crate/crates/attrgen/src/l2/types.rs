//! The L2 type language: two atomic types, lists, and function types.

use std::fmt;

use serde::de::Error as _;

/// A ground L2 type. The canonical rendering (`int`, `bool`, `[t]`,
/// `fun([a, b], r)`) is used in attribute maps and in the corpus
/// `root_type` field; [`parse_type`] reads it back.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum L2Type {
    Int,
    Bool,
    List(Box<L2Type>),
    Fun(Vec<L2Type>, Box<L2Type>),
}

impl L2Type {
    pub fn list(elem: L2Type) -> L2Type {
        L2Type::List(Box::new(elem))
    }

    pub fn fun(args: Vec<L2Type>, ret: L2Type) -> L2Type {
        L2Type::Fun(args, Box::new(ret))
    }

    pub fn is_list(&self) -> bool {
        matches!(self, L2Type::List(_))
    }

    pub fn is_fun(&self) -> bool {
        matches!(self, L2Type::Fun(..))
    }

    /// True when a function type occurs anywhere inside this type.
    pub fn contains_fun(&self) -> bool {
        match self {
            L2Type::Int | L2Type::Bool => false,
            L2Type::List(e) => e.contains_fun(),
            L2Type::Fun(..) => true,
        }
    }
}

impl fmt::Display for L2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L2Type::Int => write!(f, "int"),
            L2Type::Bool => write!(f, "bool"),
            L2Type::List(e) => write!(f, "[{e}]"),
            L2Type::Fun(args, ret) => {
                write!(f, "fun([")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "], {ret})")
            }
        }
    }
}

/// Parses the canonical type rendering. Returns `None` unless the whole
/// string is consumed.
pub fn parse_type(s: &str) -> Option<L2Type> {
    let bytes = s.as_bytes();
    let (ty, rest) = parse_prefix(bytes, 0)?;
    if skip_spaces(bytes, rest) == bytes.len() {
        Some(ty)
    } else {
        None
    }
}

fn skip_spaces(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i] == b' ' {
        i += 1;
    }
    i
}

fn parse_prefix(bytes: &[u8], at: usize) -> Option<(L2Type, usize)> {
    let at = skip_spaces(bytes, at);
    let rest = &bytes[at..];
    if rest.starts_with(b"int") {
        return Some((L2Type::Int, at + 3));
    }
    if rest.starts_with(b"bool") {
        return Some((L2Type::Bool, at + 4));
    }
    if rest.first() == Some(&b'[') {
        let (elem, next) = parse_prefix(bytes, at + 1)?;
        let next = skip_spaces(bytes, next);
        if bytes.get(next) != Some(&b']') {
            return None;
        }
        return Some((L2Type::list(elem), next + 1));
    }
    if rest.starts_with(b"fun(") {
        let mut i = skip_spaces(bytes, at + 4);
        if bytes.get(i) != Some(&b'[') {
            return None;
        }
        i = skip_spaces(bytes, i + 1);
        let mut args = Vec::new();
        if bytes.get(i) != Some(&b']') {
            loop {
                let (arg, next) = parse_prefix(bytes, i)?;
                args.push(arg);
                i = skip_spaces(bytes, next);
                match bytes.get(i) {
                    Some(b',') => i += 1,
                    Some(b']') => break,
                    _ => return None,
                }
            }
        }
        i = skip_spaces(bytes, i + 1);
        if bytes.get(i) != Some(&b',') {
            return None;
        }
        let (ret, next) = parse_prefix(bytes, i + 1)?;
        let next = skip_spaces(bytes, next);
        if bytes.get(next) != Some(&b')') {
            return None;
        }
        Some((L2Type::fun(args, ret), next + 1))
    } else {
        None
    }
}

impl serde::Serialize for L2Type {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for L2Type {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_type(&s).ok_or_else(|| D::Error::custom(format!("invalid type syntax: `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let cases = [
            L2Type::Int,
            L2Type::Bool,
            L2Type::list(L2Type::Int),
            L2Type::list(L2Type::list(L2Type::Int)),
            L2Type::fun(vec![L2Type::Bool], L2Type::Bool),
            L2Type::fun(
                vec![L2Type::list(L2Type::Int), L2Type::Int],
                L2Type::list(L2Type::Bool),
            ),
            L2Type::fun(
                vec![L2Type::fun(vec![L2Type::Int], L2Type::Int)],
                L2Type::Int,
            ),
        ];
        for ty in cases {
            let text = ty.to_string();
            assert_eq!(parse_type(&text), Some(ty.clone()), "round trip of `{text}`");
        }
    }

    #[test]
    fn rendering_is_canonical() {
        assert_eq!(L2Type::list(L2Type::list(L2Type::Int)).to_string(), "[[int]]");
        assert_eq!(
            L2Type::fun(vec![L2Type::Int, L2Type::Bool], L2Type::Int).to_string(),
            "fun([int, bool], int)"
        );
    }

    #[test]
    fn parse_rejects_trailing_garbage() {
        assert_eq!(parse_type("int]"), None);
        assert_eq!(parse_type("intx"), None);
        assert_eq!(parse_type("[int"), None);
        assert_eq!(parse_type(""), None);
    }
}
