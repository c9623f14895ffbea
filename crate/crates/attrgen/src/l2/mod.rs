//! The L2 language: grammar with attributes and constraint rewriters, type
//! checker, interpreter, and input sampling.
//!
//! L2 has two atomic types (ints and bools), lists, and function types. A
//! program is a lambda over one or more parameters whose body combines
//! literals, variables, nested lambdas and a fixed library of first-order
//! and higher-order functions. Surface syntax is Python-like prefix
//! application: `lambda x : indexinto(x, minus(len(x), 1))`.
//!
//! Scope is threaded through inherited attributes: a binder contributes
//! `<name>_is_decl=true` and `<name>_typevar=<type>` entries which flow into
//! the lambda body, so "only declared variables, with the right type" is an
//! ordinary attribute constraint during generation.

pub mod check;
pub mod expr;
pub mod interp;
pub mod sample;
pub mod types;

use std::collections::HashSet;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::generator::{recompute_attributes, AstNode};
use crate::grammar::{
    decl_key, typevar_key, AttrValue, AttributeMap, Constraint, ConstraintSet, Grammar,
    GrammarError, InheritFn, Rewrite, RhsItem, RuleSpec, SymbolId, SynthFn,
};

pub use check::{CheckError, NameErrorKind};
pub use expr::{Builtin, Expr, L2Value, RuntimeError, RuntimeErrorKind, BUILTINS};
pub use types::L2Type;

/// One input/output example.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct IOExample {
    pub inputs: Vec<L2Value>,
    pub output: L2Value,
}

/// The L2 grammar plus the rule-id tables needed to interpret its trees.
pub struct L2Language {
    grammar: Grammar,
    expr_symbol: SymbolId,
    rule_lambda: usize,
    rule_params_cons: usize,
    rule_params_unit: usize,
    rule_param: usize,
    rule_int_lit: usize,
    rule_bool_lit: usize,
    rule_var_chain: usize,
    rule_var: usize,
    builtin_rules: Vec<(usize, Builtin)>,
}

const VAR_NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

pub const TRUE_LIT: &str = "True";
pub const FALSE_LIT: &str = "False";

/// Integer literals share the input-sampling range.
pub const INT_LIT_LO: i64 = sample::INT_LO;
pub const INT_LIT_HI: i64 = sample::INT_HI;

fn var_name_strings() -> Vec<String> {
    VAR_NAMES.iter().map(|c| (*c as char).to_string()).collect()
}

/// Declared variables visible in `map`, name-sorted, with their types.
fn declared_vars(map: &AttributeMap) -> Vec<(String, Option<L2Type>)> {
    map.iter()
        .filter_map(|(k, v)| {
            let name = k.strip_suffix("_is_decl")?;
            if *v != AttrValue::Bool(true) {
                return None;
            }
            Some((name.to_string(), map.type_attr(&typevar_key(name)).cloned()))
        })
        .collect()
}

fn has_list_var(map: &AttributeMap) -> bool {
    declared_vars(map).iter().any(|(_, t)| t.as_ref().is_some_and(L2Type::is_list))
}

/// Element anchor for polymorphic list positions: the list type of the
/// first list-typed variable in scope, `[int]` when none.
fn anchor_list_type(map: &AttributeMap) -> L2Type {
    declared_vars(map)
        .into_iter()
        .find_map(|(_, t)| t.filter(L2Type::is_list))
        .unwrap_or_else(|| L2Type::list(L2Type::Int))
}

fn copy_bindings(from: &AttributeMap, into: &mut AttributeMap) {
    for (k, v) in from.iter() {
        if k.ends_with("_is_decl") || k.ends_with("_typevar") {
            into.insert(k.clone(), v.clone());
        }
    }
}

/// Constraint-set decomposition used by the rewriters. Conjuncts that no L2
/// rule can discharge mark the set unsupported, which rewrites to
/// unsatisfiable.
#[derive(Default)]
struct Reqs {
    ty: Option<L2Type>,
    length: Option<i64>,
    indexed: Vec<(usize, L2Type)>,
    declared: bool,
    declared_ty: Option<L2Type>,
    unsupported: bool,
}

fn parse_reqs(c: &ConstraintSet) -> Reqs {
    let mut r = Reqs::default();
    for item in c.iter() {
        match item {
            Constraint::TypeEq(key, t) if key == "type" => r.ty = Some(t.clone()),
            Constraint::TypeEq(key, t) => match key.strip_suffix(".type").and_then(|k| k.parse().ok()) {
                Some(k) => r.indexed.push((k, t.clone())),
                None => r.unsupported = true,
            },
            Constraint::LengthEq(key, n) if key == "length" => r.length = Some(*n),
            Constraint::LengthEq(..) => r.unsupported = true,
            Constraint::IsDeclared(key) if key == "varname" => r.declared = true,
            Constraint::DeclaredWithType(key, t) if key == "varname" => {
                r.declared = true;
                r.declared_ty = Some(t.clone());
            }
            Constraint::IsDeclared(_) | Constraint::DeclaredWithType(..) => r.unsupported = true,
            Constraint::True => {}
            Constraint::Unsatisfiable => r.unsupported = true,
        }
    }
    r
}

fn type_eq(key: impl Into<String>, t: L2Type) -> Constraint {
    Constraint::TypeEq(key.into(), t)
}

/// Child types demanded by a call to `b` under an optional target type.
/// `None` when the builtin cannot produce the target, or when it consumes a
/// list and no list variable is in scope (lists have no literals, so a
/// list-typed expression always bottoms out at a list variable).
fn builtin_child_types(
    b: Builtin,
    target: Option<&L2Type>,
    inherited: &AttributeMap,
) -> Option<Vec<L2Type>> {
    use Builtin::*;
    use L2Type::{Bool, Int};
    let wants = |t: &L2Type| target.is_none() || target == Some(t);
    let anchor_elem = || match anchor_list_type(inherited) {
        L2Type::List(e) => *e,
        _ => unreachable!("anchor is always a list type"),
    };
    let lists_available = has_list_var(inherited);
    match b {
        And | Or => wants(&Bool).then(|| vec![Bool, Bool]),
        Neg => wants(&Bool).then(|| vec![Bool]),
        Plus | Minus | Times | Div | Remainder => wants(&Int).then(|| vec![Int, Int]),
        Lt | Gt => wants(&Bool).then(|| vec![Int, Int]),
        IndexInto => {
            if !lists_available {
                return None;
            }
            let elem = target.cloned().unwrap_or(Int);
            Some(vec![L2Type::list(elem), Int])
        }
        Concat => {
            if !lists_available {
                return None;
            }
            let list_ty = match target {
                None => anchor_list_type(inherited),
                Some(t @ L2Type::List(_)) => t.clone(),
                Some(_) => return None,
            };
            Some(vec![list_ty.clone(), list_ty])
        }
        Insert => {
            if !lists_available {
                return None;
            }
            let list_ty = match target {
                None => anchor_list_type(inherited),
                Some(t @ L2Type::List(_)) => t.clone(),
                Some(_) => return None,
            };
            let L2Type::List(elem) = &list_ty else { unreachable!() };
            Some(vec![(**elem).clone(), list_ty.clone()])
        }
        Min | Max => (wants(&Int) && lists_available).then(|| vec![L2Type::list(Int)]),
        Len => (wants(&Int) && lists_available).then(|| vec![anchor_list_type(inherited)]),
        Map => {
            if !lists_available {
                return None;
            }
            let out_elem = match target {
                None => anchor_elem(),
                Some(L2Type::List(e)) => (**e).clone(),
                Some(_) => return None,
            };
            let in_elem = anchor_elem();
            Some(vec![
                L2Type::fun(vec![in_elem.clone()], out_elem),
                L2Type::list(in_elem),
            ])
        }
        Filter => {
            if !lists_available {
                return None;
            }
            let elem = match target {
                None => anchor_elem(),
                Some(L2Type::List(e)) => (**e).clone(),
                Some(_) => return None,
            };
            Some(vec![L2Type::fun(vec![elem.clone()], Bool), L2Type::list(elem)])
        }
        Reduce => {
            if !lists_available {
                return None;
            }
            let t = target.cloned().unwrap_or(Int);
            Some(vec![L2Type::fun(vec![t.clone(), t.clone()], t.clone()), L2Type::list(t)])
        }
        Foldl => {
            if !lists_available {
                return None;
            }
            let acc = target.cloned().unwrap_or(Int);
            let elem = anchor_elem();
            Some(vec![
                L2Type::fun(vec![acc.clone(), elem.clone()], acc.clone()),
                acc,
                L2Type::list(elem),
            ])
        }
        Foldr => {
            if !lists_available {
                return None;
            }
            let acc = target.cloned().unwrap_or(Int);
            let elem = anchor_elem();
            Some(vec![
                L2Type::fun(vec![elem.clone(), acc.clone()], acc.clone()),
                acc,
                L2Type::list(elem),
            ])
        }
        Recl => {
            if !lists_available {
                return None;
            }
            let acc = target.cloned().unwrap_or(Int);
            let elem = anchor_elem();
            Some(vec![
                L2Type::fun(
                    vec![elem.clone(), L2Type::list(elem.clone()), acc.clone()],
                    acc.clone(),
                ),
                acc,
                L2Type::list(elem),
            ])
        }
    }
}

fn call_synth(b: Builtin) -> SynthFn {
    Box::new(move |_inh, children| {
        let arg_types: Vec<Option<L2Type>> = (0..b.arity())
            .map(|k| children[2 + 2 * k].type_attr("type").cloned())
            .collect();
        let ty = match b.result_type(&arg_types) {
            Some(t) => AttrValue::Type(t),
            None => AttrValue::Undefined,
        };
        AttributeMap::new().with("type", ty)
    })
}

fn call_rewrite(b: Builtin) -> crate::grammar::RewriteFn {
    Box::new(move |c, inherited| {
        let r = parse_reqs(c);
        if r.unsupported || r.declared || r.length.is_some() || !r.indexed.is_empty() {
            return Rewrite::Unsatisfiable;
        }
        let Some(child_types) = builtin_child_types(b, r.ty.as_ref(), inherited) else {
            return Rewrite::Unsatisfiable;
        };
        let mut sets = vec![ConstraintSet::empty(); 2 + 2 * b.arity()];
        for (k, ty) in child_types.into_iter().enumerate() {
            sets[2 + 2 * k] = ConstraintSet::single(type_eq("type", ty));
        }
        Rewrite::PerChild(sets)
    })
}

fn call_rhs(b: Builtin, expr: SymbolId) -> Vec<RhsItem> {
    let mut rhs = vec![
        RhsItem::Terminal(b.name().to_string()),
        RhsItem::Terminal("(".to_string()),
        RhsItem::Nonterminal(expr),
    ];
    for _ in 1..b.arity() {
        rhs.push(RhsItem::Terminal(",".to_string()));
        rhs.push(RhsItem::Nonterminal(expr));
    }
    rhs.push(RhsItem::Terminal(")".to_string()));
    rhs
}

fn indexed_type_key(k: i64) -> String {
    format!("{k}.type")
}

impl L2Language {
    pub fn new() -> L2Language {
        Self::build().expect("static grammar construction cannot fail")
    }

    fn build() -> Result<L2Language, GrammarError> {
        let mut g = Grammar::new();
        let expr = g.add_symbol("Expr")?;
        let params = g.add_symbol("Params")?;
        let param = g.add_symbol("Param")?;
        let var = g.add_symbol("Var")?;
        let varname_class = g.add_class("varname", var_name_strings())?;
        let int_class =
            g.add_class("int", (INT_LIT_LO..=INT_LIT_HI).map(|n| n.to_string()).collect())?;
        let bool_class =
            g.add_class("bool", vec![FALSE_LIT.to_string(), TRUE_LIT.to_string()])?;

        // Rule 0: Expr -> "lambda" Params ":" Expr
        let lambda_inherit: InheritFn = Box::new(|parent, left, idx| {
            let mut map = parent.clone();
            if idx == 3 {
                if let Some(params_map) = left.get(1) {
                    copy_bindings(params_map, &mut map);
                }
            }
            map
        });
        let rule_lambda = g.add_rule(
            RuleSpec::new(
                expr,
                vec![
                    RhsItem::Terminal("lambda".into()),
                    RhsItem::Nonterminal(params),
                    RhsItem::Terminal(":".into()),
                    RhsItem::Nonterminal(expr),
                ],
            )
            .synth(Box::new(|_inh, children| {
                let params_map = &children[1];
                let body = &children[3];
                let mut out = AttributeMap::new();
                let length = params_map.int_attr("length");
                out.insert(
                    "length",
                    length.map(AttrValue::Int).unwrap_or(AttrValue::Undefined),
                );
                let mut param_types = length.map(|_| Vec::new());
                if let Some(n) = length {
                    for k in 0..n {
                        let key = indexed_type_key(k);
                        let value = params_map.get_or_undefined(&key);
                        if let (Some(tys), AttrValue::Type(t)) = (param_types.as_mut(), &value) {
                            tys.push(t.clone());
                        } else {
                            param_types = None;
                        }
                        out.insert(key, value);
                    }
                }
                let ty = match (param_types, body.type_attr("type")) {
                    (Some(args), Some(ret)) => {
                        AttrValue::Type(L2Type::fun(args, ret.clone()))
                    }
                    _ => AttrValue::Undefined,
                };
                out.insert("type", ty);
                out
            }))
            .inherit(lambda_inherit)
            .rewrite(Box::new(|c, _inh| {
                let r = parse_reqs(c);
                if r.unsupported || r.declared {
                    return Rewrite::Unsatisfiable;
                }
                let Some(L2Type::Fun(args, ret)) = r.ty else {
                    return Rewrite::Unsatisfiable;
                };
                if args.is_empty() || args.iter().any(L2Type::contains_fun) {
                    return Rewrite::Unsatisfiable;
                }
                if r.length.is_some_and(|n| n != args.len() as i64) {
                    return Rewrite::Unsatisfiable;
                }
                for (k, t) in &r.indexed {
                    if args.get(*k) != Some(t) {
                        return Rewrite::Unsatisfiable;
                    }
                }
                let mut params_set = vec![Constraint::LengthEq("length".into(), args.len() as i64)];
                for (k, t) in args.iter().enumerate() {
                    params_set.push(type_eq(indexed_type_key(k as i64), t.clone()));
                }
                Rewrite::PerChild(vec![
                    ConstraintSet::empty(),
                    ConstraintSet::from_constraints(params_set),
                    ConstraintSet::empty(),
                    ConstraintSet::single(type_eq("type", (*ret).clone())),
                ])
            })),
        )?;

        // Rule 1: Params -> Params "," Param
        let cons_inherit: InheritFn = Box::new(|parent, left, idx| {
            let mut map = parent.clone();
            if idx == 2 {
                if let Some(left_params) = left.first() {
                    copy_bindings(left_params, &mut map);
                }
            }
            map
        });
        let rule_params_cons = g.add_rule(
            RuleSpec::new(
                params,
                vec![
                    RhsItem::Nonterminal(params),
                    RhsItem::Terminal(",".into()),
                    RhsItem::Nonterminal(param),
                ],
            )
            .synth(Box::new(|_inh, children| {
                let left = &children[0];
                let p = &children[2];
                let mut out = AttributeMap::new();
                copy_bindings(left, &mut out);
                if let Some(name) = p.str_attr("varname") {
                    out.insert(decl_key(name), AttrValue::Bool(true));
                    out.insert(typevar_key(name), p.get_or_undefined("type"));
                }
                match left.int_attr("length") {
                    Some(n) => {
                        out.insert("length", AttrValue::Int(n + 1));
                        for k in 0..n {
                            let key = indexed_type_key(k);
                            out.insert(key.clone(), left.get_or_undefined(&key));
                        }
                        out.insert(indexed_type_key(n), p.get_or_undefined("type"));
                    }
                    None => out.insert("length", AttrValue::Undefined),
                }
                out
            }))
            .inherit(cons_inherit)
            .rewrite(Box::new(|c, _inh| {
                let r = parse_reqs(c);
                if r.unsupported || r.declared || r.ty.is_some() {
                    return Rewrite::Unsatisfiable;
                }
                let Some(n) = r.length else {
                    return Rewrite::Unsatisfiable;
                };
                if n < 2 {
                    return Rewrite::Unsatisfiable;
                }
                let mut left = vec![Constraint::LengthEq("length".into(), n - 1)];
                let mut last = Vec::new();
                for (k, t) in r.indexed {
                    let k = k as i64;
                    if k < n - 1 {
                        left.push(type_eq(indexed_type_key(k), t));
                    } else if k == n - 1 {
                        last.push(type_eq("type", t));
                    } else {
                        return Rewrite::Unsatisfiable;
                    }
                }
                Rewrite::PerChild(vec![
                    ConstraintSet::from_constraints(left),
                    ConstraintSet::empty(),
                    ConstraintSet::from_constraints(last),
                ])
            })),
        )?;

        // Rule 2: Params -> Param
        let rule_params_unit = g.add_rule(
            RuleSpec::new(params, vec![RhsItem::Nonterminal(param)])
                .synth(Box::new(|_inh, children| {
                    let p = &children[0];
                    let mut out = AttributeMap::new();
                    out.insert("length", AttrValue::Int(1));
                    out.insert(indexed_type_key(0), p.get_or_undefined("type"));
                    if let Some(name) = p.str_attr("varname") {
                        out.insert(decl_key(name), AttrValue::Bool(true));
                        out.insert(typevar_key(name), p.get_or_undefined("type"));
                    }
                    out
                }))
                .rewrite(Box::new(|c, _inh| {
                    let r = parse_reqs(c);
                    if r.unsupported || r.declared || r.ty.is_some() {
                        return Rewrite::Unsatisfiable;
                    }
                    if r.length != Some(1) {
                        return Rewrite::Unsatisfiable;
                    }
                    let mut set = Vec::new();
                    for (k, t) in r.indexed {
                        if k == 0 {
                            set.push(type_eq("type", t));
                        } else {
                            return Rewrite::Unsatisfiable;
                        }
                    }
                    Rewrite::PerChild(vec![ConstraintSet::from_constraints(set)])
                })),
        )?;

        // Rule 3: Param -> <fresh variable name>. The parameter's type is a
        // generation-time choice pinned from the constraint in force.
        let fresh_names = var_name_strings();
        let rule_param = g.add_rule(
            RuleSpec::new(param, vec![RhsItem::Class(varname_class)])
                .synth(Box::new(|_inh, children| {
                    let name = children[0].str_attr("text").unwrap_or_default().to_string();
                    AttributeMap::new().with("varname", AttrValue::Str(name))
                }))
                .rewrite(Box::new(move |c, inherited| {
                    let r = parse_reqs(c);
                    if r.unsupported || r.declared || r.length.is_some() || !r.indexed.is_empty() {
                        return Rewrite::Unsatisfiable;
                    }
                    // An unconstrained parameter keeps an undefined type;
                    // function-typed parameters are never generatable.
                    if r.ty.as_ref().is_some_and(L2Type::contains_fun) {
                        return Rewrite::Unsatisfiable;
                    }
                    let taken: HashSet<String> =
                        declared_vars(inherited).into_iter().map(|(n, _)| n).collect();
                    let fresh: Vec<String> =
                        fresh_names.iter().filter(|n| !taken.contains(*n)).cloned().collect();
                    if fresh.is_empty() {
                        Rewrite::Unsatisfiable
                    } else {
                        Rewrite::TerminalChoice(fresh)
                    }
                }))
                .choice_keys(&["type"]),
        )?;

        // Rule 4: Expr -> <integer literal>
        let rule_int_lit = g.add_rule(
            RuleSpec::new(expr, vec![RhsItem::Class(int_class)])
                .synth(Box::new(|_inh, _children| {
                    AttributeMap::new().with("type", AttrValue::Type(L2Type::Int))
                }))
                .rewrite(Box::new(|c, _inh| {
                    let r = parse_reqs(c);
                    if r.unsupported
                        || r.declared
                        || r.length.is_some()
                        || !r.indexed.is_empty()
                        || !matches!(r.ty, None | Some(L2Type::Int))
                    {
                        return Rewrite::Unsatisfiable;
                    }
                    Rewrite::PerChild(vec![ConstraintSet::empty()])
                })),
        )?;

        // Rule 5: Expr -> <boolean literal>
        let rule_bool_lit = g.add_rule(
            RuleSpec::new(expr, vec![RhsItem::Class(bool_class)])
                .synth(Box::new(|_inh, _children| {
                    AttributeMap::new().with("type", AttrValue::Type(L2Type::Bool))
                }))
                .rewrite(Box::new(|c, _inh| {
                    let r = parse_reqs(c);
                    if r.unsupported
                        || r.declared
                        || r.length.is_some()
                        || !r.indexed.is_empty()
                        || !matches!(r.ty, None | Some(L2Type::Bool))
                    {
                        return Rewrite::Unsatisfiable;
                    }
                    Rewrite::PerChild(vec![ConstraintSet::empty()])
                })),
        )?;

        // Rule 6: Expr -> Var. A type constraint becomes a declaredness
        // constraint on the chosen name.
        let rule_var_chain = g.add_rule(
            RuleSpec::new(expr, vec![RhsItem::Nonterminal(var)])
                .synth(Box::new(|_inh, children| {
                    AttributeMap::new().with("type", children[0].get_or_undefined("type"))
                }))
                .rewrite(Box::new(|c, _inh| {
                    let r = parse_reqs(c);
                    if r.unsupported || r.declared || r.length.is_some() || !r.indexed.is_empty() {
                        return Rewrite::Unsatisfiable;
                    }
                    let child = match r.ty {
                        Some(t) => ConstraintSet::from_constraints([
                            Constraint::DeclaredWithType("varname".into(), t.clone()),
                            type_eq("type", t),
                        ]),
                        None => ConstraintSet::single(Constraint::IsDeclared("varname".into())),
                    };
                    Rewrite::PerChild(vec![child])
                })),
        )?;

        // Rule 7: Var -> <declared variable name>
        let rule_var = g.add_rule(
            RuleSpec::new(var, vec![RhsItem::Class(varname_class)])
                .synth(Box::new(|inherited, children| {
                    let name = children[0].str_attr("text").unwrap_or_default().to_string();
                    let ty = inherited.get_or_undefined(&typevar_key(&name));
                    AttributeMap::new()
                        .with("varname", AttrValue::Str(name))
                        .with("type", ty)
                }))
                .rewrite(Box::new(|c, inherited| {
                    let r = parse_reqs(c);
                    if r.unsupported || r.length.is_some() || !r.indexed.is_empty() {
                        return Rewrite::Unsatisfiable;
                    }
                    let want = match (r.ty, r.declared_ty) {
                        (Some(a), Some(b)) if a != b => return Rewrite::Unsatisfiable,
                        (a, b) => a.or(b),
                    };
                    let names: Vec<String> = declared_vars(inherited)
                        .into_iter()
                        .filter(|(_, t)| match (&want, t) {
                            (None, _) => true,
                            (Some(w), Some(t)) => w == t,
                            (Some(_), None) => false,
                        })
                        .map(|(n, _)| n)
                        .collect();
                    if names.is_empty() {
                        Rewrite::Unsatisfiable
                    } else {
                        Rewrite::TerminalChoice(names)
                    }
                })),
        )?;

        // Rules 8..=29: the library functions.
        let mut builtin_rules = Vec::with_capacity(BUILTINS.len());
        for b in BUILTINS {
            let id = g.add_rule(
                RuleSpec::new(expr, call_rhs(b, expr))
                    .synth(call_synth(b))
                    .rewrite(call_rewrite(b)),
            )?;
            builtin_rules.push((id, b));
        }

        Ok(L2Language {
            grammar: g,
            expr_symbol: expr,
            rule_lambda,
            rule_params_cons,
            rule_params_unit,
            rule_param,
            rule_int_lit,
            rule_bool_lit,
            rule_var_chain,
            rule_var,
            builtin_rules,
        })
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn expr_symbol(&self) -> SymbolId {
        self.expr_symbol
    }

    pub fn lambda_rule(&self) -> usize {
        self.rule_lambda
    }

    pub fn param_rule(&self) -> usize {
        self.rule_param
    }

    pub fn int_lit_rule(&self) -> usize {
        self.rule_int_lit
    }

    pub fn bool_lit_rule(&self) -> usize {
        self.rule_bool_lit
    }

    pub fn var_rule(&self) -> usize {
        self.rule_var
    }

    pub fn var_chain_rule(&self) -> usize {
        self.rule_var_chain
    }

    pub fn params_unit_rule(&self) -> usize {
        self.rule_params_unit
    }

    pub fn params_cons_rule(&self) -> usize {
        self.rule_params_cons
    }

    pub fn builtin_for_rule(&self, rule: usize) -> Option<Builtin> {
        self.builtin_rules.iter().find(|(id, _)| *id == rule).map(|(_, b)| *b)
    }

    pub fn rule_for_builtin(&self, b: Builtin) -> usize {
        self.builtin_rules
            .iter()
            .find(|(_, x)| *x == b)
            .map(|(id, _)| *id)
            .expect("every builtin has a rule")
    }

    /// Rule ids of the arithmetic and boolean operators; banning them
    /// restricts generation to the list/higher-order subset.
    pub fn arith_bool_rule_ids(&self) -> HashSet<usize> {
        self.builtin_rules
            .iter()
            .filter(|(_, b)| b.is_arith_or_bool())
            .map(|(id, _)| *id)
            .collect()
    }

    /// Semantic view of a grammar tree. Fails on trees that are not
    /// L2-shaped (e.g. a tree rooted at a parameter list).
    pub fn ast_to_expr(&self, node: &AstNode) -> Result<Expr, String> {
        let AstNode::Rule { rule, children, .. } = node else {
            return Err("expected a rule node".into());
        };
        let rule = *rule;
        if rule == self.rule_lambda {
            let mut params = Vec::new();
            self.collect_params(&children[1], &mut params)?;
            let body = self.ast_to_expr(&children[3])?;
            Ok(Expr::Lambda { params, body: Box::new(body) })
        } else if rule == self.rule_int_lit {
            let text = terminal_text(&children[0])?;
            text.parse::<i64>().map(Expr::Int).map_err(|_| format!("bad int literal `{text}`"))
        } else if rule == self.rule_bool_lit {
            match terminal_text(&children[0])? {
                TRUE_LIT => Ok(Expr::Bool(true)),
                FALSE_LIT => Ok(Expr::Bool(false)),
                other => Err(format!("bad bool literal `{other}`")),
            }
        } else if rule == self.rule_var_chain {
            self.ast_to_expr_var(&children[0])
        } else if let Some(b) = self.builtin_for_rule(rule) {
            let args: Result<Vec<Expr>, String> = (0..b.arity())
                .map(|k| self.ast_to_expr(&children[2 + 2 * k]))
                .collect();
            Ok(Expr::Call(b, args?))
        } else {
            Err(format!("rule {rule} is not an expression rule"))
        }
    }

    fn ast_to_expr_var(&self, node: &AstNode) -> Result<Expr, String> {
        match node {
            AstNode::Rule { rule, children, .. } if *rule == self.rule_var => {
                Ok(Expr::Var(terminal_text(&children[0])?.to_string()))
            }
            _ => Err("expected a variable node".into()),
        }
    }

    fn collect_params(
        &self,
        node: &AstNode,
        out: &mut Vec<(String, Option<L2Type>)>,
    ) -> Result<(), String> {
        let AstNode::Rule { rule, children, synthesized, .. } = node else {
            return Err("expected a parameter-list node".into());
        };
        if *rule == self.rule_params_cons {
            self.collect_params(&children[0], out)?;
            self.collect_params(&children[2], out)
        } else if *rule == self.rule_params_unit {
            self.collect_params(&children[0], out)
        } else if *rule == self.rule_param {
            let name = terminal_text(&children[0])?.to_string();
            let ty = synthesized.type_attr("type").cloned();
            out.push((name, ty));
            Ok(())
        } else {
            Err(format!("rule {rule} is not a parameter rule"))
        }
    }

    /// Grammar tree for a semantic expression, fully attributed. Parameter
    /// types present on the expression are pinned into the tree; missing
    /// ones stay undefined.
    pub fn expr_to_ast(&self, expr: &Expr) -> AstNode {
        let mut node = self.expr_to_raw(expr);
        recompute_attributes(&self.grammar, &mut node, AttributeMap::new());
        node
    }

    fn expr_to_raw(&self, expr: &Expr) -> AstNode {
        let rule_node = |rule: usize, children: Vec<AstNode>| AstNode::Rule {
            rule,
            children,
            synthesized: AttributeMap::new(),
            inherited: AttributeMap::new(),
        };
        match expr {
            Expr::Int(n) => rule_node(self.rule_int_lit, vec![AstNode::terminal(n.to_string())]),
            Expr::Bool(b) => rule_node(
                self.rule_bool_lit,
                vec![AstNode::terminal(if *b { TRUE_LIT } else { FALSE_LIT })],
            ),
            Expr::Var(name) => rule_node(
                self.rule_var_chain,
                vec![rule_node(self.rule_var, vec![AstNode::terminal(name.clone())])],
            ),
            Expr::Lambda { params, body } => {
                let mut param_nodes = params.iter().map(|(name, ty)| AstNode::Rule {
                    rule: self.rule_param,
                    children: vec![AstNode::terminal(name.clone())],
                    synthesized: AttributeMap::new().with(
                        "type",
                        ty.clone().map(AttrValue::Type).unwrap_or(AttrValue::Undefined),
                    ),
                    inherited: AttributeMap::new(),
                });
                let first = param_nodes.next().expect("lambda has at least one parameter");
                let mut list = rule_node(self.rule_params_unit, vec![first]);
                for p in param_nodes {
                    list = rule_node(
                        self.rule_params_cons,
                        vec![list, AstNode::terminal(","), p],
                    );
                }
                rule_node(
                    self.rule_lambda,
                    vec![
                        AstNode::terminal("lambda"),
                        list,
                        AstNode::terminal(":"),
                        self.expr_to_raw(body),
                    ],
                )
            }
            Expr::Call(b, args) => {
                let rule = self.rule_for_builtin(*b);
                let mut children = vec![
                    AstNode::terminal(b.name()),
                    AstNode::terminal("("),
                ];
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        children.push(AstNode::terminal(","));
                    }
                    children.push(self.expr_to_raw(arg));
                }
                children.push(AstNode::terminal(")"));
                rule_node(rule, children)
            }
        }
    }
}

impl Default for L2Language {
    fn default() -> Self {
        Self::new()
    }
}

fn terminal_text(node: &AstNode) -> Result<&str, String> {
    match node {
        AstNode::Terminal { text } => Ok(text),
        AstNode::Rule { rule, .. } => Err(format!("expected a terminal, found rule {rule}")),
    }
}

/// Type of a grammar tree, re-derived from scratch by the independent
/// checker (stored attributes are ignored).
pub fn typecheck(lang: &L2Language, node: &AstNode) -> Result<L2Type, CheckError> {
    let expr = lang
        .ast_to_expr(node)
        .map_err(|message| CheckError::Type { message })?;
    check::typecheck_expr(&expr)
}

/// Argument types of a tree's program, re-derived from scratch.
pub fn infer_input_types(lang: &L2Language, node: &AstNode) -> Result<Vec<L2Type>, CheckError> {
    let expr = lang
        .ast_to_expr(node)
        .map_err(|message| CheckError::Type { message })?;
    check::infer_input_types_expr(&expr)
}

/// Runs a tree's program on `inputs`. The tree must have type-checked.
pub fn evaluate(
    lang: &L2Language,
    node: &AstNode,
    inputs: &[L2Value],
    fuel: u64,
) -> Result<L2Value, RuntimeError> {
    let expr = lang.ast_to_expr(node).expect("evaluate requires a type-checked tree");
    interp::evaluate_expr(&expr, inputs, fuel)
}

/// Samples a program signature for corpus generation.
pub fn sample_signature(rng: &mut ChaCha8Rng) -> (Vec<L2Type>, L2Type) {
    sample::sample_signature(rng)
}

/// Attaches `count` runtime-clean input/output examples to a generated
/// tree. Argument types come from the tree's parameter attributes when
/// present, falling back to independent inference.
pub fn generate_examples(
    lang: &L2Language,
    node: &AstNode,
    count: usize,
    fuel: u64,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<IOExample>> {
    let expr = lang.ast_to_expr(node).ok()?;
    let arg_types: Vec<L2Type> = match &expr {
        Expr::Lambda { params, .. } if params.iter().all(|(_, t)| t.is_some()) => {
            params.iter().map(|(_, t)| t.clone().unwrap()).collect()
        }
        _ => check::infer_input_types_expr(&expr).ok()?,
    };
    if arg_types.iter().any(|t| t.contains_fun()) {
        return None;
    }
    let examples = sample::generate_examples_expr(&expr, &arg_types, count, fuel, rng)?;
    Some(
        examples
            .into_iter()
            .map(|(inputs, output)| IOExample { inputs, output })
            .collect(),
    )
}
