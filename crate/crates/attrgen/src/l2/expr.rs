//! Semantic view of L2 programs: expressions, library functions, and
//! runtime values.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::{Error as _, SerializeSeq};

use super::types::L2Type;

/// The L2 library functions, in grammar declaration order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Builtin {
    And,
    Or,
    Neg,
    Plus,
    Minus,
    Times,
    Div,
    Remainder,
    Lt,
    Gt,
    IndexInto,
    Concat,
    Insert,
    Min,
    Max,
    Len,
    Map,
    Filter,
    Reduce,
    Foldl,
    Foldr,
    Recl,
}

pub const BUILTINS: [Builtin; 22] = [
    Builtin::And,
    Builtin::Or,
    Builtin::Neg,
    Builtin::Plus,
    Builtin::Minus,
    Builtin::Times,
    Builtin::Div,
    Builtin::Remainder,
    Builtin::Lt,
    Builtin::Gt,
    Builtin::IndexInto,
    Builtin::Concat,
    Builtin::Insert,
    Builtin::Min,
    Builtin::Max,
    Builtin::Len,
    Builtin::Map,
    Builtin::Filter,
    Builtin::Reduce,
    Builtin::Foldl,
    Builtin::Foldr,
    Builtin::Recl,
];

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::And => "and",
            Builtin::Or => "or",
            Builtin::Neg => "neg",
            Builtin::Plus => "plus",
            Builtin::Minus => "minus",
            Builtin::Times => "times",
            Builtin::Div => "div",
            Builtin::Remainder => "remainder",
            Builtin::Lt => "lt",
            Builtin::Gt => "gt",
            Builtin::IndexInto => "indexinto",
            Builtin::Concat => "concat",
            Builtin::Insert => "insert",
            Builtin::Min => "min",
            Builtin::Max => "max",
            Builtin::Len => "len",
            Builtin::Map => "map",
            Builtin::Filter => "filter",
            Builtin::Reduce => "reduce",
            Builtin::Foldl => "foldl",
            Builtin::Foldr => "foldr",
            Builtin::Recl => "recl",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        BUILTINS.iter().copied().find(|b| b.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Builtin::Neg | Builtin::Min | Builtin::Max | Builtin::Len => 1,
            Builtin::And
            | Builtin::Or
            | Builtin::Plus
            | Builtin::Minus
            | Builtin::Times
            | Builtin::Div
            | Builtin::Remainder
            | Builtin::Lt
            | Builtin::Gt
            | Builtin::IndexInto
            | Builtin::Concat
            | Builtin::Insert
            | Builtin::Map
            | Builtin::Filter
            | Builtin::Reduce => 2,
            Builtin::Foldl | Builtin::Foldr | Builtin::Recl => 3,
        }
    }

    /// True for the arithmetic and boolean operators excluded by the
    /// list-only language subset.
    pub fn is_arith_or_bool(self) -> bool {
        matches!(
            self,
            Builtin::And
                | Builtin::Or
                | Builtin::Neg
                | Builtin::Plus
                | Builtin::Minus
                | Builtin::Times
                | Builtin::Div
                | Builtin::Remainder
                | Builtin::Lt
                | Builtin::Gt
        )
    }

    /// Result type on ground argument types, or `None` when the arguments
    /// do not fit. This is the bottom-up typing used by attribute synthesis.
    pub fn result_type(self, args: &[Option<L2Type>]) -> Option<L2Type> {
        if args.len() != self.arity() || args.iter().any(Option::is_none) {
            return None;
        }
        let args: Vec<&L2Type> = args.iter().map(|a| a.as_ref().unwrap()).collect();
        use L2Type::{Bool, Int};
        match self {
            Builtin::And | Builtin::Or => {
                (args == [&Bool, &Bool]).then_some(Bool)
            }
            Builtin::Neg => (args == [&Bool]).then_some(Bool),
            Builtin::Plus | Builtin::Minus | Builtin::Times | Builtin::Div | Builtin::Remainder => {
                (args == [&Int, &Int]).then_some(Int)
            }
            Builtin::Lt | Builtin::Gt => (args == [&Int, &Int]).then_some(Bool),
            Builtin::IndexInto => match (args[0], args[1]) {
                (L2Type::List(e), Int) => Some((**e).clone()),
                _ => None,
            },
            Builtin::Concat => match (args[0], args[1]) {
                (L2Type::List(a), L2Type::List(b)) if a == b => Some(args[0].clone()),
                _ => None,
            },
            Builtin::Insert => match args[1] {
                L2Type::List(e) if **e == *args[0] => Some(args[1].clone()),
                _ => None,
            },
            Builtin::Min | Builtin::Max => match args[0] {
                L2Type::List(e) if **e == Int => Some(Int),
                _ => None,
            },
            Builtin::Len => matches!(args[0], L2Type::List(_)).then_some(Int),
            Builtin::Map => match (args[0], args[1]) {
                (L2Type::Fun(ps, ret), L2Type::List(e)) if ps.len() == 1 && ps[0] == **e => {
                    Some(L2Type::list((**ret).clone()))
                }
                _ => None,
            },
            Builtin::Filter => match (args[0], args[1]) {
                (L2Type::Fun(ps, ret), L2Type::List(e))
                    if ps.len() == 1 && ps[0] == **e && **ret == Bool =>
                {
                    Some(args[1].clone())
                }
                _ => None,
            },
            Builtin::Reduce => match (args[0], args[1]) {
                (L2Type::Fun(ps, ret), L2Type::List(e))
                    if ps.len() == 2 && ps[0] == **e && ps[1] == **e && **ret == **e =>
                {
                    Some((**e).clone())
                }
                _ => None,
            },
            Builtin::Foldl => match (args[0], args[2]) {
                (L2Type::Fun(ps, ret), L2Type::List(e))
                    if ps.len() == 2 && ps[0] == *args[1] && ps[1] == **e && **ret == *args[1] =>
                {
                    Some(args[1].clone())
                }
                _ => None,
            },
            Builtin::Foldr => match (args[0], args[2]) {
                (L2Type::Fun(ps, ret), L2Type::List(e))
                    if ps.len() == 2 && ps[0] == **e && ps[1] == *args[1] && **ret == *args[1] =>
                {
                    Some(args[1].clone())
                }
                _ => None,
            },
            Builtin::Recl => match (args[0], args[2]) {
                (L2Type::Fun(ps, ret), L2Type::List(e))
                    if ps.len() == 3
                        && ps[0] == **e
                        && ps[1] == *args[2]
                        && ps[2] == *args[1]
                        && **ret == *args[1] =>
                {
                    Some(args[1].clone())
                }
                _ => None,
            },
        }
    }
}

/// Semantic L2 expression. Lambda parameters optionally carry the ground
/// type they were generated with; the type checker never consults it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Int(i64),
    Bool(bool),
    Var(String),
    Lambda {
        params: Vec<(String, Option<L2Type>)>,
        body: Box<Expr>,
    },
    Call(Builtin, Vec<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }
}

pub type Env = Vec<(String, L2Value)>;

/// Runtime value. Closures never appear in serialized examples.
#[derive(Clone, PartialEq, Debug)]
pub enum L2Value {
    Int(i64),
    Bool(bool),
    List(Vec<L2Value>),
    Closure {
        params: Vec<String>,
        body: Arc<Expr>,
        env: Env,
    },
}

impl L2Value {
    pub fn is_closure(&self) -> bool {
        matches!(self, L2Value::Closure { .. })
    }

    pub fn int_list(items: impl IntoIterator<Item = i64>) -> L2Value {
        L2Value::List(items.into_iter().map(L2Value::Int).collect())
    }
}

impl fmt::Display for L2Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            L2Value::Int(n) => write!(f, "{n}"),
            L2Value::Bool(b) => write!(f, "{}", if *b { "True" } else { "False" }),
            L2Value::List(items) => {
                write!(f, "[")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
            L2Value::Closure { params, .. } => write!(f, "<closure/{}>", params.len()),
        }
    }
}

impl serde::Serialize for L2Value {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            L2Value::Int(n) => serializer.serialize_i64(*n),
            L2Value::Bool(b) => serializer.serialize_bool(*b),
            L2Value::List(items) => {
                let mut seq = serializer.serialize_seq(Some(items.len()))?;
                for item in items {
                    seq.serialize_element(item)?;
                }
                seq.end()
            }
            L2Value::Closure { .. } => Err(S::Error::custom("closures are not serializable")),
        }
    }
}

struct ValueVisitor;

impl<'de> Visitor<'de> for ValueVisitor {
    type Value = L2Value;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer, boolean, or array")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<L2Value, E> {
        Ok(L2Value::Int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<L2Value, E> {
        i64::try_from(v)
            .map(L2Value::Int)
            .map_err(|_| E::custom(format!("integer {v} out of range")))
    }

    fn visit_bool<E: de::Error>(self, v: bool) -> Result<L2Value, E> {
        Ok(L2Value::Bool(v))
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<L2Value, A::Error> {
        let mut items = Vec::new();
        while let Some(item) = seq.next_element::<L2Value>()? {
            items.push(item);
        }
        Ok(L2Value::List(items))
    }
}

impl<'de> serde::Deserialize<'de> for L2Value {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(ValueVisitor)
    }
}

/// Runtime failure classification.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RuntimeErrorKind {
    DivByZero,
    EmptyListOp,
    IndexOutOfBounds,
    ArithmeticOverflow,
    FuelExhausted,
}

impl fmt::Display for RuntimeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuntimeErrorKind::DivByZero => "division by zero",
            RuntimeErrorKind::EmptyListOp => "operation on empty list",
            RuntimeErrorKind::IndexOutOfBounds => "index out of bounds",
            RuntimeErrorKind::ArithmeticOverflow => "arithmetic overflow",
            RuntimeErrorKind::FuelExhausted => "evaluation fuel exhausted",
        };
        write!(f, "{name}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuntimeError {
    pub kind: RuntimeErrorKind,
    pub detail: String,
}

impl RuntimeError {
    pub fn new(kind: RuntimeErrorKind, detail: impl Into<String>) -> Self {
        RuntimeError { kind, detail: detail.into() }
    }
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

impl std::error::Error for RuntimeError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_round_trip() {
        for b in BUILTINS {
            assert_eq!(Builtin::from_name(b.name()), Some(b));
        }
        assert_eq!(Builtin::from_name("nope"), None);
    }

    #[test]
    fn result_type_checks_ground_arguments() {
        let int_list = L2Type::list(L2Type::Int);
        assert_eq!(
            Builtin::Plus.result_type(&[Some(L2Type::Int), Some(L2Type::Int)]),
            Some(L2Type::Int)
        );
        assert_eq!(Builtin::Plus.result_type(&[Some(L2Type::Int), Some(L2Type::Bool)]), None);
        assert_eq!(
            Builtin::IndexInto.result_type(&[Some(int_list.clone()), Some(L2Type::Int)]),
            Some(L2Type::Int)
        );
        assert_eq!(
            Builtin::Map.result_type(&[
                Some(L2Type::fun(vec![L2Type::Int], L2Type::Bool)),
                Some(int_list.clone()),
            ]),
            Some(L2Type::list(L2Type::Bool))
        );
        assert_eq!(
            Builtin::Foldl.result_type(&[
                Some(L2Type::fun(vec![L2Type::Int, L2Type::Int], L2Type::Int)),
                Some(L2Type::Int),
                Some(int_list),
            ]),
            Some(L2Type::Int)
        );
    }

    #[test]
    fn value_json_round_trip() {
        let v = L2Value::List(vec![
            L2Value::Int(-3),
            L2Value::Int(15),
        ]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, "[-3,15]");
        assert_eq!(serde_json::from_str::<L2Value>(&text).unwrap(), v);
        assert!(serde_json::from_str::<L2Value>("1.5").is_err());
    }
}
