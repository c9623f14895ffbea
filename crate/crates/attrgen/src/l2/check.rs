//! Independent type checking for L2 programs.
//!
//! Checking runs in two passes. A scope pass reports name errors (undeclared
//! references, re-declared binders) before any typing happens, so a program
//! with both kinds of defect is classified as a name error. The typing pass
//! is plain unification with an occurs check; lambda parameters always get
//! fresh variables — any types recorded during generation are ignored, which
//! is what makes this checker an independent oracle for generated trees.
//! Unconstrained variables default to `int` when a ground type is needed.

use std::fmt;

use super::expr::{Builtin, Expr};
use super::types::L2Type;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NameErrorKind {
    Undeclared,
    Redeclared,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CheckError {
    Name { kind: NameErrorKind, name: String },
    Type { message: String },
}

impl CheckError {
    pub fn is_name_error(&self) -> bool {
        matches!(self, CheckError::Name { .. })
    }

    fn ty(message: impl Into<String>) -> CheckError {
        CheckError::Type { message: message.into() }
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Name { kind: NameErrorKind::Undeclared, name } => {
                write!(f, "undeclared variable `{name}`")
            }
            CheckError::Name { kind: NameErrorKind::Redeclared, name } => {
                write!(f, "re-declared variable `{name}`")
            }
            CheckError::Type { message } => write!(f, "type error: {message}"),
        }
    }
}

impl std::error::Error for CheckError {}

/// Reports the first name error in `expr`, scanning left to right.
pub fn scope_check(expr: &Expr) -> Result<(), CheckError> {
    fn walk(expr: &Expr, scope: &mut Vec<String>) -> Result<(), CheckError> {
        match expr {
            Expr::Int(_) | Expr::Bool(_) => Ok(()),
            Expr::Var(name) => {
                if scope.iter().any(|s| s == name) {
                    Ok(())
                } else {
                    Err(CheckError::Name {
                        kind: NameErrorKind::Undeclared,
                        name: name.clone(),
                    })
                }
            }
            Expr::Lambda { params, body } => {
                let depth = scope.len();
                for (name, _) in params {
                    if scope.iter().any(|s| s == name) {
                        scope.truncate(depth);
                        return Err(CheckError::Name {
                            kind: NameErrorKind::Redeclared,
                            name: name.clone(),
                        });
                    }
                    scope.push(name.clone());
                }
                let result = walk(body, scope);
                scope.truncate(depth);
                result
            }
            Expr::Call(_, args) => args.iter().try_for_each(|a| walk(a, scope)),
        }
    }
    walk(expr, &mut Vec::new())
}

/// Inference-internal type term.
#[derive(Clone, PartialEq, Eq, Debug)]
enum Ty {
    Int,
    Bool,
    List(Box<Ty>),
    Fun(Vec<Ty>, Box<Ty>),
    Var(usize),
}

impl Ty {
    fn from_l2(t: &L2Type) -> Ty {
        match t {
            L2Type::Int => Ty::Int,
            L2Type::Bool => Ty::Bool,
            L2Type::List(e) => Ty::List(Box::new(Ty::from_l2(e))),
            L2Type::Fun(args, ret) => {
                Ty::Fun(args.iter().map(Ty::from_l2).collect(), Box::new(Ty::from_l2(ret)))
            }
        }
    }
}

pub struct Unifier {
    slots: Vec<Option<Ty>>,
}

impl Unifier {
    pub fn new() -> Self {
        Unifier { slots: Vec::new() }
    }

    fn fresh(&mut self) -> Ty {
        self.slots.push(None);
        Ty::Var(self.slots.len() - 1)
    }

    fn shallow_resolve(&self, mut t: Ty) -> Ty {
        while let Ty::Var(v) = t {
            match &self.slots[v] {
                Some(bound) => t = bound.clone(),
                None => return Ty::Var(v),
            }
        }
        t
    }

    fn occurs(&self, var: usize, t: &Ty) -> bool {
        match self.shallow_resolve(t.clone()) {
            Ty::Var(v) => v == var,
            Ty::List(e) => self.occurs(var, &e),
            Ty::Fun(args, ret) => args.iter().any(|a| self.occurs(var, a)) || self.occurs(var, &ret),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> Result<(), CheckError> {
        let a = self.shallow_resolve(a.clone());
        let b = self.shallow_resolve(b.clone());
        match (a, b) {
            (Ty::Int, Ty::Int) | (Ty::Bool, Ty::Bool) => Ok(()),
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if t == Ty::Var(v) {
                    return Ok(());
                }
                if self.occurs(v, &t) {
                    return Err(CheckError::ty("infinite type"));
                }
                self.slots[v] = Some(t);
                Ok(())
            }
            (Ty::List(x), Ty::List(y)) => self.unify(&x, &y),
            (Ty::Fun(xa, xr), Ty::Fun(ya, yr)) => {
                if xa.len() != ya.len() {
                    return Err(CheckError::ty(format!(
                        "function arity mismatch: {} vs {}",
                        xa.len(),
                        ya.len()
                    )));
                }
                for (x, y) in xa.iter().zip(&ya) {
                    self.unify(x, y)?;
                }
                self.unify(&xr, &yr)
            }
            (a, b) => Err(CheckError::ty(format!(
                "mismatched types: {} vs {}",
                self.describe(&a),
                self.describe(&b)
            ))),
        }
    }

    /// Ground type with unconstrained variables defaulted to `int`.
    fn default_to_ground(&self, t: &Ty) -> L2Type {
        match self.shallow_resolve(t.clone()) {
            Ty::Int | Ty::Var(_) => L2Type::Int,
            Ty::Bool => L2Type::Bool,
            Ty::List(e) => L2Type::list(self.default_to_ground(&e)),
            Ty::Fun(args, ret) => L2Type::fun(
                args.iter().map(|a| self.default_to_ground(a)).collect(),
                self.default_to_ground(&ret),
            ),
        }
    }

    fn describe(&self, t: &Ty) -> String {
        match self.shallow_resolve(t.clone()) {
            Ty::Int => "int".into(),
            Ty::Bool => "bool".into(),
            Ty::List(e) => format!("[{}]", self.describe(&e)),
            Ty::Fun(args, ret) => {
                let args: Vec<String> = args.iter().map(|a| self.describe(a)).collect();
                format!("fun([{}], {})", args.join(", "), self.describe(&ret))
            }
            Ty::Var(_) => "_".into(),
        }
    }
}

fn builtin_scheme(b: Builtin, uni: &mut Unifier) -> (Vec<Ty>, Ty) {
    use Builtin::*;
    let list = |e: Ty| Ty::List(Box::new(e));
    let fun = |args: Vec<Ty>, ret: Ty| Ty::Fun(args, Box::new(ret));
    match b {
        And | Or => (vec![Ty::Bool, Ty::Bool], Ty::Bool),
        Neg => (vec![Ty::Bool], Ty::Bool),
        Plus | Minus | Times | Div | Remainder => (vec![Ty::Int, Ty::Int], Ty::Int),
        Lt | Gt => (vec![Ty::Int, Ty::Int], Ty::Bool),
        IndexInto => {
            let a = uni.fresh();
            (vec![list(a.clone()), Ty::Int], a)
        }
        Concat => {
            let a = uni.fresh();
            (vec![list(a.clone()), list(a.clone())], list(a))
        }
        Insert => {
            let a = uni.fresh();
            (vec![a.clone(), list(a.clone())], list(a))
        }
        Min | Max => (vec![list(Ty::Int)], Ty::Int),
        Len => (vec![list(uni.fresh())], Ty::Int),
        Map => {
            let a = uni.fresh();
            let b = uni.fresh();
            (vec![fun(vec![a.clone()], b.clone()), list(a)], list(b))
        }
        Filter => {
            let a = uni.fresh();
            (vec![fun(vec![a.clone()], Ty::Bool), list(a.clone())], list(a))
        }
        Reduce => {
            let a = uni.fresh();
            (vec![fun(vec![a.clone(), a.clone()], a.clone()), list(a.clone())], a)
        }
        Foldl => {
            let a = uni.fresh();
            let b = uni.fresh();
            (vec![fun(vec![b.clone(), a.clone()], b.clone()), b.clone(), list(a)], b)
        }
        Foldr => {
            let a = uni.fresh();
            let b = uni.fresh();
            (vec![fun(vec![a.clone(), b.clone()], b.clone()), b.clone(), list(a)], b)
        }
        Recl => {
            let a = uni.fresh();
            let b = uni.fresh();
            (
                vec![
                    fun(vec![a.clone(), list(a.clone()), b.clone()], b.clone()),
                    b.clone(),
                    list(a),
                ],
                b,
            )
        }
    }
}

struct Inference {
    uni: Unifier,
    /// For each lambda in pre-order, the type variables of its parameters.
    lambda_params: Vec<Vec<Ty>>,
}

impl Inference {
    fn infer(&mut self, expr: &Expr, env: &mut Vec<(String, Ty)>) -> Result<Ty, CheckError> {
        match expr {
            Expr::Int(_) => Ok(Ty::Int),
            Expr::Bool(_) => Ok(Ty::Bool),
            Expr::Var(name) => env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, t)| t.clone())
                .ok_or_else(|| CheckError::Name {
                    kind: NameErrorKind::Undeclared,
                    name: name.clone(),
                }),
            Expr::Lambda { params, body } => {
                let vars: Vec<Ty> = params.iter().map(|_| self.uni.fresh()).collect();
                self.lambda_params.push(vars.clone());
                let depth = env.len();
                for ((name, _), var) in params.iter().zip(&vars) {
                    env.push((name.clone(), var.clone()));
                }
                let ret = self.infer(body, env);
                env.truncate(depth);
                Ok(Ty::Fun(vars, Box::new(ret?)))
            }
            Expr::Call(b, args) => {
                let (param_tys, ret) = builtin_scheme(*b, &mut self.uni);
                if args.len() != param_tys.len() {
                    return Err(CheckError::ty(format!(
                        "{} expects {} arguments, got {}",
                        b.name(),
                        param_tys.len(),
                        args.len()
                    )));
                }
                for (arg, expected) in args.iter().zip(&param_tys) {
                    let actual = self.infer(arg, env)?;
                    self.uni.unify(&actual, expected).map_err(|e| match e {
                        CheckError::Type { message } => {
                            CheckError::ty(format!("in argument of {}: {message}", b.name()))
                        }
                        other => other,
                    })?;
                }
                Ok(ret)
            }
        }
    }
}

/// Scope-checks and infers the program's type, defaulting unconstrained
/// variables to `int`. Lambda roots yield their function type.
pub fn typecheck_expr(expr: &Expr) -> Result<L2Type, CheckError> {
    scope_check(expr)?;
    let mut inf = Inference { uni: Unifier::new(), lambda_params: Vec::new() };
    let ty = inf.infer(expr, &mut Vec::new())?;
    Ok(inf.uni.default_to_ground(&ty))
}

/// Argument types of the program, re-derived from scratch. Non-function
/// programs have no inputs.
pub fn infer_input_types_expr(expr: &Expr) -> Result<Vec<L2Type>, CheckError> {
    match typecheck_expr(expr)? {
        L2Type::Fun(args, _) => Ok(args),
        _ => Ok(Vec::new()),
    }
}

/// Checks that the program can accept inputs of the given ground types
/// (unifiability, not equality, so generic programs accept any instance).
pub fn accepts_input_types(expr: &Expr, inputs: &[L2Type]) -> Result<(), CheckError> {
    scope_check(expr)?;
    let mut inf = Inference { uni: Unifier::new(), lambda_params: Vec::new() };
    let ty = inf.infer(expr, &mut Vec::new())?;
    let wanted = Ty::Fun(
        inputs.iter().map(Ty::from_l2).collect(),
        Box::new(inf.uni.fresh()),
    );
    inf.uni.unify(&ty, &wanted)
}

/// Re-infers the program and fills every lambda's parameter types with the
/// resolved (defaulted) solution. Used when converting a plain program into
/// an attributed tree.
pub fn annotate_expr(expr: &Expr) -> Result<Expr, CheckError> {
    scope_check(expr)?;
    let mut inf = Inference { uni: Unifier::new(), lambda_params: Vec::new() };
    inf.infer(expr, &mut Vec::new())?;
    let mut lambda_types = inf.lambda_params.iter();
    fn rebuild(
        expr: &Expr,
        uni: &Unifier,
        lambda_types: &mut std::slice::Iter<'_, Vec<Ty>>,
    ) -> Expr {
        match expr {
            Expr::Int(_) | Expr::Bool(_) | Expr::Var(_) => expr.clone(),
            Expr::Lambda { params, body } => {
                let vars = lambda_types.next().expect("one entry per lambda in pre-order");
                let params = params
                    .iter()
                    .zip(vars)
                    .map(|((name, _), var)| (name.clone(), Some(uni.default_to_ground(var))))
                    .collect();
                let body = Box::new(rebuild(body, uni, lambda_types));
                Expr::Lambda { params, body }
            }
            Expr::Call(b, args) => Expr::Call(
                *b,
                args.iter().map(|a| rebuild(a, uni, lambda_types)).collect(),
            ),
        }
    }
    Ok(rebuild(expr, &inf.uni, &mut lambda_types))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam1(name: &str, body: Expr) -> Expr {
        Expr::Lambda {
            params: vec![(name.into(), None)],
            body: Box::new(body),
        }
    }

    #[test]
    fn neg_program_types_as_bool_to_bool() {
        let prog = lam1("r", Expr::Call(Builtin::Neg, vec![Expr::var("r")]));
        assert_eq!(
            typecheck_expr(&prog).unwrap(),
            L2Type::fun(vec![L2Type::Bool], L2Type::Bool)
        );
        assert_eq!(infer_input_types_expr(&prog).unwrap(), vec![L2Type::Bool]);
    }

    #[test]
    fn undeclared_variable_is_a_name_error() {
        let prog = lam1(
            "x",
            Expr::Call(Builtin::Plus, vec![Expr::var("y"), Expr::Int(1)]),
        );
        let err = typecheck_expr(&prog).unwrap_err();
        assert_eq!(
            err,
            CheckError::Name { kind: NameErrorKind::Undeclared, name: "y".into() }
        );
    }

    #[test]
    fn redeclared_binder_is_a_name_error() {
        let inner = lam1("x", Expr::var("x"));
        let prog = lam1("x", Expr::Call(Builtin::Map, vec![inner, Expr::var("x")]));
        let err = typecheck_expr(&prog).unwrap_err();
        assert_eq!(
            err,
            CheckError::Name { kind: NameErrorKind::Redeclared, name: "x".into() }
        );
    }

    #[test]
    fn name_errors_take_precedence_over_type_errors() {
        // len(x) with x bool-ish is a type error, but the undeclared `q`
        // later in the program must win.
        let prog = lam1(
            "x",
            Expr::Call(
                Builtin::Plus,
                vec![
                    Expr::Call(Builtin::Len, vec![Expr::Bool(true)]),
                    Expr::var("q"),
                ],
            ),
        );
        let err = typecheck_expr(&prog).unwrap_err();
        assert!(err.is_name_error(), "got {err:?}");
    }

    #[test]
    fn length_of_bool_is_a_type_error() {
        let prog = lam1("x", Expr::Call(Builtin::Len, vec![Expr::Bool(true)]));
        let err = typecheck_expr(&prog).unwrap_err();
        assert!(matches!(err, CheckError::Type { .. }));
    }

    #[test]
    fn generic_identity_defaults_to_int_but_accepts_lists() {
        let prog = lam1("x", Expr::var("x"));
        assert_eq!(
            typecheck_expr(&prog).unwrap(),
            L2Type::fun(vec![L2Type::Int], L2Type::Int)
        );
        assert!(accepts_input_types(&prog, &[L2Type::list(L2Type::Int)]).is_ok());
        let neg = lam1("r", Expr::Call(Builtin::Neg, vec![Expr::var("r")]));
        assert!(accepts_input_types(&neg, &[L2Type::Int]).is_err());
    }

    #[test]
    fn last_element_program_infers_int_list() {
        // lambda x : indexinto(x, minus(len(x), 1))
        let prog = lam1(
            "x",
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
            infer_input_types_expr(&prog).unwrap(),
            vec![L2Type::list(L2Type::Int)]
        );
    }

    #[test]
    fn annotate_fills_parameter_types() {
        let prog = lam1("r", Expr::Call(Builtin::Neg, vec![Expr::var("r")]));
        let annotated = annotate_expr(&prog).unwrap();
        match annotated {
            Expr::Lambda { params, .. } => {
                assert_eq!(params[0].1, Some(L2Type::Bool));
            }
            _ => panic!("expected lambda"),
        }
    }
}
