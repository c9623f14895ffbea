//! Big-step interpreter for L2.
//!
//! Arguments are evaluated eagerly, left to right (so `and`/`or` do not
//! short-circuit). Arithmetic is checked 64-bit. Every evaluation step burns
//! one unit of fuel; the language has no general recursion, so fuel only
//! guards against very large structural folds.

use std::sync::Arc;

use super::expr::{Builtin, Env, Expr, L2Value, RuntimeError, RuntimeErrorKind};

/// Applies a program to `inputs`. The root must be a lambda whose arity
/// matches (callers type-check first); programs that are not functions take
/// no inputs and evaluate directly.
pub fn evaluate_expr(
    program: &Expr,
    inputs: &[L2Value],
    fuel: u64,
) -> Result<L2Value, RuntimeError> {
    let mut fuel = fuel;
    match program {
        Expr::Lambda { params, body } => {
            assert_eq!(
                params.len(),
                inputs.len(),
                "evaluate called with {} inputs for a {}-parameter program",
                inputs.len(),
                params.len()
            );
            let env: Env = params
                .iter()
                .map(|(name, _)| name.clone())
                .zip(inputs.iter().cloned())
                .collect();
            eval(body, &env, &mut fuel)
        }
        _ => {
            assert!(inputs.is_empty(), "non-function program given inputs");
            eval(program, &Vec::new(), &mut fuel)
        }
    }
}

fn eval(expr: &Expr, env: &Env, fuel: &mut u64) -> Result<L2Value, RuntimeError> {
    if *fuel == 0 {
        return Err(RuntimeError::new(RuntimeErrorKind::FuelExhausted, "step budget spent"));
    }
    *fuel -= 1;
    match expr {
        Expr::Int(n) => Ok(L2Value::Int(*n)),
        Expr::Bool(b) => Ok(L2Value::Bool(*b)),
        Expr::Var(name) => Ok(env
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("unbound variable `{name}` after type checking"))
            .1
            .clone()),
        Expr::Lambda { params, body } => Ok(L2Value::Closure {
            params: params.iter().map(|(n, _)| n.clone()).collect(),
            body: Arc::new((**body).clone()),
            env: env.clone(),
        }),
        Expr::Call(b, args) => {
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval(arg, env, fuel)?);
            }
            apply_builtin(*b, values, fuel)
        }
    }
}

fn apply_closure(f: &L2Value, args: Vec<L2Value>, fuel: &mut u64) -> Result<L2Value, RuntimeError> {
    let L2Value::Closure { params, body, env } = f else {
        panic!("applied a non-closure after type checking");
    };
    assert_eq!(params.len(), args.len(), "closure arity mismatch after type checking");
    let mut call_env = env.clone();
    call_env.extend(params.iter().cloned().zip(args));
    eval(body, &call_env, fuel)
}

fn as_int(v: &L2Value) -> i64 {
    match v {
        L2Value::Int(n) => *n,
        other => panic!("expected int, got {other} after type checking"),
    }
}

fn as_bool(v: &L2Value) -> bool {
    match v {
        L2Value::Bool(b) => *b,
        other => panic!("expected bool, got {other} after type checking"),
    }
}

fn as_list(v: L2Value) -> Vec<L2Value> {
    match v {
        L2Value::List(items) => items,
        other => panic!("expected list, got {other} after type checking"),
    }
}

fn checked(op: &str, result: Option<i64>) -> Result<L2Value, RuntimeError> {
    result.map(L2Value::Int).ok_or_else(|| {
        RuntimeError::new(RuntimeErrorKind::ArithmeticOverflow, format!("{op} overflowed"))
    })
}

fn apply_builtin(b: Builtin, args: Vec<L2Value>, fuel: &mut u64) -> Result<L2Value, RuntimeError> {
    match b {
        Builtin::And => Ok(L2Value::Bool(as_bool(&args[0]) && as_bool(&args[1]))),
        Builtin::Or => Ok(L2Value::Bool(as_bool(&args[0]) || as_bool(&args[1]))),
        Builtin::Neg => Ok(L2Value::Bool(!as_bool(&args[0]))),
        Builtin::Plus => checked("plus", as_int(&args[0]).checked_add(as_int(&args[1]))),
        Builtin::Minus => checked("minus", as_int(&args[0]).checked_sub(as_int(&args[1]))),
        Builtin::Times => checked("times", as_int(&args[0]).checked_mul(as_int(&args[1]))),
        Builtin::Div => {
            let (a, n) = (as_int(&args[0]), as_int(&args[1]));
            if n == 0 {
                return Err(RuntimeError::new(RuntimeErrorKind::DivByZero, format!("div({a}, 0)")));
            }
            checked("div", a.checked_div(n))
        }
        Builtin::Remainder => {
            let (a, n) = (as_int(&args[0]), as_int(&args[1]));
            if n == 0 {
                return Err(RuntimeError::new(
                    RuntimeErrorKind::DivByZero,
                    format!("remainder({a}, 0)"),
                ));
            }
            checked("remainder", a.checked_rem(n))
        }
        Builtin::Lt => Ok(L2Value::Bool(as_int(&args[0]) < as_int(&args[1]))),
        Builtin::Gt => Ok(L2Value::Bool(as_int(&args[0]) > as_int(&args[1]))),
        Builtin::IndexInto => {
            let mut it = args.into_iter();
            let items = as_list(it.next().unwrap());
            let idx = as_int(&it.next().unwrap());
            if idx < 0 || idx as usize >= items.len() {
                return Err(RuntimeError::new(
                    RuntimeErrorKind::IndexOutOfBounds,
                    format!("index {idx} into list of length {}", items.len()),
                ));
            }
            Ok(items.into_iter().nth(idx as usize).unwrap())
        }
        Builtin::Concat => {
            let mut it = args.into_iter();
            let mut left = as_list(it.next().unwrap());
            left.extend(as_list(it.next().unwrap()));
            Ok(L2Value::List(left))
        }
        Builtin::Insert => {
            // insert(x, l) places x at the front of l.
            let mut it = args.into_iter();
            let head = it.next().unwrap();
            let tail = as_list(it.next().unwrap());
            let mut items = Vec::with_capacity(tail.len() + 1);
            items.push(head);
            items.extend(tail);
            Ok(L2Value::List(items))
        }
        Builtin::Min | Builtin::Max => {
            let items = as_list(args.into_iter().next().unwrap());
            if items.is_empty() {
                return Err(RuntimeError::new(
                    RuntimeErrorKind::EmptyListOp,
                    format!("{} of empty list", b.name()),
                ));
            }
            let mut best = as_int(&items[0]);
            for item in &items[1..] {
                let n = as_int(item);
                if (b == Builtin::Min && n < best) || (b == Builtin::Max && n > best) {
                    best = n;
                }
            }
            Ok(L2Value::Int(best))
        }
        Builtin::Len => {
            let items = as_list(args.into_iter().next().unwrap());
            Ok(L2Value::Int(items.len() as i64))
        }
        Builtin::Map => {
            let mut it = args.into_iter();
            let f = it.next().unwrap();
            let items = as_list(it.next().unwrap());
            let mut out = Vec::with_capacity(items.len());
            for item in items {
                out.push(apply_closure(&f, vec![item], fuel)?);
            }
            Ok(L2Value::List(out))
        }
        Builtin::Filter => {
            let mut it = args.into_iter();
            let p = it.next().unwrap();
            let items = as_list(it.next().unwrap());
            let mut out = Vec::new();
            for item in items {
                if as_bool(&apply_closure(&p, vec![item.clone()], fuel)?) {
                    out.push(item);
                }
            }
            Ok(L2Value::List(out))
        }
        Builtin::Reduce => {
            let mut it = args.into_iter();
            let f = it.next().unwrap();
            let items = as_list(it.next().unwrap());
            let mut iter = items.into_iter();
            let Some(mut acc) = iter.next() else {
                return Err(RuntimeError::new(
                    RuntimeErrorKind::EmptyListOp,
                    "reduce of empty list",
                ));
            };
            for item in iter {
                acc = apply_closure(&f, vec![acc, item], fuel)?;
            }
            Ok(acc)
        }
        Builtin::Foldl => {
            let mut it = args.into_iter();
            let f = it.next().unwrap();
            let mut acc = it.next().unwrap();
            for item in as_list(it.next().unwrap()) {
                acc = apply_closure(&f, vec![acc, item], fuel)?;
            }
            Ok(acc)
        }
        Builtin::Foldr => {
            let mut it = args.into_iter();
            let f = it.next().unwrap();
            let mut acc = it.next().unwrap();
            for item in as_list(it.next().unwrap()).into_iter().rev() {
                acc = apply_closure(&f, vec![item, acc], fuel)?;
            }
            Ok(acc)
        }
        Builtin::Recl => {
            let mut it = args.into_iter();
            let f = it.next().unwrap();
            let init = it.next().unwrap();
            let items = as_list(it.next().unwrap());
            recl(&f, &init, &items, fuel)
        }
    }
}

/// recl(f, init, l) = init when l is empty, otherwise
/// f(head(l), tail(l), recl(f, init, tail(l))).
fn recl(
    f: &L2Value,
    init: &L2Value,
    items: &[L2Value],
    fuel: &mut u64,
) -> Result<L2Value, RuntimeError> {
    if *fuel == 0 {
        return Err(RuntimeError::new(RuntimeErrorKind::FuelExhausted, "step budget spent"));
    }
    *fuel -= 1;
    match items.split_first() {
        None => Ok(init.clone()),
        Some((head, tail)) => {
            let rest = recl(f, init, tail, fuel)?;
            apply_closure(
                f,
                vec![head.clone(), L2Value::List(tail.to_vec()), rest],
                fuel,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(names: &[&str], body: Expr) -> Expr {
        Expr::Lambda {
            params: names.iter().map(|n| (n.to_string(), None)).collect(),
            body: Box::new(body),
        }
    }

    const FUEL: u64 = 100_000;

    #[test]
    fn div_by_zero_is_reported() {
        let prog = lam(&["x"], Expr::Call(Builtin::Div, vec![Expr::Int(1), Expr::var("x")]));
        let err = evaluate_expr(&prog, &[L2Value::Int(0)], FUEL).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::DivByZero);
    }

    #[test]
    fn index_out_of_bounds_on_empty_list() {
        // lambda x : indexinto(x, minus(len(x), 1)) applied to [].
        let prog = lam(
            &["x"],
            Expr::Call(
                Builtin::IndexInto,
                vec![
                    Expr::var("x"),
                    Expr::Call(
                        Builtin::Minus,
                        vec![Expr::Call(Builtin::Len, vec![Expr::var("x")]), Expr::Int(1)],
                    ),
                ],
            ),
        );
        assert_eq!(
            evaluate_expr(&prog, &[L2Value::int_list([5, 7, 9])], FUEL).unwrap(),
            L2Value::Int(9)
        );
        let err = evaluate_expr(&prog, &[L2Value::List(vec![])], FUEL).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::IndexOutOfBounds);
    }

    #[test]
    fn max_of_maxes() {
        // lambda x : max(map(lambda l : max(l), x))
        let inner = lam(&["l"], Expr::Call(Builtin::Max, vec![Expr::var("l")]));
        let prog = lam(
            &["x"],
            Expr::Call(
                Builtin::Max,
                vec![Expr::Call(Builtin::Map, vec![inner, Expr::var("x")])],
            ),
        );
        let input = L2Value::List(vec![L2Value::int_list([1, 2]), L2Value::int_list([3, 0])]);
        assert_eq!(evaluate_expr(&prog, &[input], FUEL).unwrap(), L2Value::Int(3));
        let err = evaluate_expr(&prog, &[L2Value::List(vec![])], FUEL).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::EmptyListOp);
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let prog = lam(
            &["x"],
            Expr::Call(
                Builtin::Times,
                vec![Expr::var("x"), Expr::Int(i64::MAX)],
            ),
        );
        let err = evaluate_expr(&prog, &[L2Value::Int(2)], FUEL).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::ArithmeticOverflow);
    }

    #[test]
    fn folds_and_recl_agree_on_sum() {
        let add = lam(
            &["a", "b"],
            Expr::Call(Builtin::Plus, vec![Expr::var("a"), Expr::var("b")]),
        );
        let foldl = lam(
            &["x"],
            Expr::Call(Builtin::Foldl, vec![add.clone(), Expr::Int(0), Expr::var("x")]),
        );
        let foldr_add = lam(
            &["a", "b"],
            Expr::Call(Builtin::Plus, vec![Expr::var("a"), Expr::var("b")]),
        );
        let foldr = lam(
            &["x"],
            Expr::Call(Builtin::Foldr, vec![foldr_add, Expr::Int(0), Expr::var("x")]),
        );
        // recl's callback also receives the tail; sum ignores it.
        let recl_f = lam(
            &["a", "t", "b"],
            Expr::Call(Builtin::Plus, vec![Expr::var("a"), Expr::var("b")]),
        );
        let recl = lam(
            &["x"],
            Expr::Call(Builtin::Recl, vec![recl_f, Expr::Int(0), Expr::var("x")]),
        );
        let input = L2Value::int_list([1, 2, 3, 4]);
        for prog in [&foldl, &foldr, &recl] {
            assert_eq!(
                evaluate_expr(prog, &[input.clone()], FUEL).unwrap(),
                L2Value::Int(10)
            );
        }
    }

    #[test]
    fn reduce_requires_nonempty_list() {
        let f = lam(
            &["a", "b"],
            Expr::Call(Builtin::Plus, vec![Expr::var("a"), Expr::var("b")]),
        );
        let prog = lam(&["x"], Expr::Call(Builtin::Reduce, vec![f, Expr::var("x")]));
        let err = evaluate_expr(&prog, &[L2Value::List(vec![])], FUEL).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::EmptyListOp);
        assert_eq!(
            evaluate_expr(&prog, &[L2Value::int_list([4, 5])], FUEL).unwrap(),
            L2Value::Int(9)
        );
    }

    #[test]
    fn insert_places_element_at_front() {
        let prog = lam(
            &["x"],
            Expr::Call(Builtin::Insert, vec![Expr::Int(9), Expr::var("x")]),
        );
        assert_eq!(
            evaluate_expr(&prog, &[L2Value::int_list([1, 2])], FUEL).unwrap(),
            L2Value::int_list([9, 1, 2])
        );
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        let prog = lam(&["x"], Expr::Call(Builtin::Len, vec![Expr::var("x")]));
        let err = evaluate_expr(&prog, &[L2Value::List(vec![])], 1).unwrap_err();
        assert_eq!(err.kind, RuntimeErrorKind::FuelExhausted);
    }

    #[test]
    fn remainder_matches_truncated_division() {
        let prog = lam(
            &["a", "b"],
            Expr::Call(Builtin::Remainder, vec![Expr::var("a"), Expr::var("b")]),
        );
        let run = |a: i64, b: i64| {
            evaluate_expr(&prog, &[L2Value::Int(a), L2Value::Int(b)], FUEL).unwrap()
        };
        assert_eq!(run(7, 3), L2Value::Int(1));
        assert_eq!(run(-7, 3), L2Value::Int(-1));
        assert_eq!(run(7, -3), L2Value::Int(1));
    }
}
