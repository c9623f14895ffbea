//! Attributed context-free grammars.
//!
//! A [`Grammar`] is a set of symbols plus production rules. Each rule carries
//! three functions: one computing synthesized attributes (bottom-up, from the
//! children of a node), one computing inherited attributes (top-down, from a
//! node's parent and left siblings), and a constraint rewriter that turns a
//! constraint on a node into equivalent constraints on its children. The
//! rewriter is what lets a generator satisfy constraints such as "this
//! expression has type int" while expanding rules top-down.

use std::collections::btree_map;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::l2::types::L2Type;

/// Interned handle for a nonterminal symbol. The symbol's name is its
/// identity; handles are only valid for the grammar that issued them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SymbolId(pub(crate) u32);

/// Interned handle for a terminal class (a closed set of admissible strings,
/// e.g. variable names or integer literals).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClassId(pub(crate) u32);

/// A single attribute value. Attributes are generic: types, lengths, flags
/// and chosen names all flow through the same map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AttrValue {
    Str(String),
    Int(i64),
    Bool(bool),
    Type(L2Type),
    Undefined,
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Str(s) => write!(f, "{s}"),
            AttrValue::Int(n) => write!(f, "{n}"),
            AttrValue::Bool(b) => write!(f, "{b}"),
            AttrValue::Type(t) => write!(f, "{t}"),
            AttrValue::Undefined => write!(f, "undefined"),
        }
    }
}

/// Attribute map of a node. Keys are plain strings; iteration order is
/// lexicographic so every serialization of the same map is identical.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AttributeMap {
    entries: BTreeMap<String, AttrValue>,
}

impl AttributeMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, value: AttrValue) {
        self.entries.insert(key.into(), value);
    }

    pub fn with(mut self, key: impl Into<String>, value: AttrValue) -> Self {
        self.insert(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&AttrValue> {
        self.entries.get(key)
    }

    /// Value for `key`, or `Undefined` when absent. Attribute functions use
    /// this so that partially attributed trees (e.g. decoded from text that
    /// omitted attributes) still evaluate without panicking.
    pub fn get_or_undefined(&self, key: &str) -> AttrValue {
        self.entries.get(key).cloned().unwrap_or(AttrValue::Undefined)
    }

    pub fn str_attr(&self, key: &str) -> Option<&str> {
        match self.entries.get(key) {
            Some(AttrValue::Str(s)) => Some(s),
            _ => None,
        }
    }

    pub fn int_attr(&self, key: &str) -> Option<i64> {
        match self.entries.get(key) {
            Some(AttrValue::Int(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn bool_attr(&self, key: &str) -> Option<bool> {
        match self.entries.get(key) {
            Some(AttrValue::Bool(b)) => Some(*b),
            _ => None,
        }
    }

    pub fn type_attr(&self, key: &str) -> Option<&L2Type> {
        match self.entries.get(key) {
            Some(AttrValue::Type(t)) => Some(t),
            _ => None,
        }
    }

    /// Like [`AttributeMap::get`] but panics when the key is absent. Reading
    /// a key that the grammar never computes is a grammar bug, not an input
    /// error.
    pub fn expect(&self, key: &str) -> &AttrValue {
        self.entries
            .get(key)
            .unwrap_or_else(|| panic!("attribute `{key}` missing from map {self}"))
    }

    /// Union of `self` and `over`, with entries from `over` winning.
    pub fn merged(&self, over: &AttributeMap) -> AttributeMap {
        let mut entries = self.entries.clone();
        for (k, v) in &over.entries {
            entries.insert(k.clone(), v.clone());
        }
        AttributeMap { entries }
    }

    pub fn iter(&self) -> btree_map::Iter<'_, String, AttrValue> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for AttributeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<(String, AttrValue)> for AttributeMap {
    fn from_iter<T: IntoIterator<Item = (String, AttrValue)>>(iter: T) -> Self {
        AttributeMap { entries: iter.into_iter().collect() }
    }
}

/// Attribute key marking `name` as declared in scope.
pub fn decl_key(name: &str) -> String {
    format!("{name}_is_decl")
}

/// Attribute key carrying the declared type of `name`.
pub fn typevar_key(name: &str) -> String {
    format!("{name}_typevar")
}

/// One conjunct of a constraint set.
///
/// `IsDeclared`/`DeclaredWithType` take the attribute key under which the
/// node exposes the variable name it chose (conventionally `varname`); the
/// declaredness itself is looked up in the node's scope attributes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Constraint {
    TypeEq(String, L2Type),
    LengthEq(String, i64),
    IsDeclared(String),
    DeclaredWithType(String, L2Type),
    True,
    Unsatisfiable,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::TypeEq(k, t) => write!(f, "{k}={t}"),
            Constraint::LengthEq(k, n) => write!(f, "{k}={n}"),
            Constraint::IsDeclared(k) => write!(f, "declared({k})"),
            Constraint::DeclaredWithType(k, t) => write!(f, "declared({k}:{t})"),
            Constraint::True => write!(f, "true"),
            Constraint::Unsatisfiable => write!(f, "unsat"),
        }
    }
}

/// A finite conjunction of constraints, kept in normal form: sorted, deduped,
/// no `True` conjuncts, and collapsed to a single `Unsatisfiable` marker when
/// any contradiction is present.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ConstraintSet {
    items: Vec<Constraint>,
}

impl ConstraintSet {
    /// The empty conjunction (always satisfied).
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn unsatisfiable() -> Self {
        ConstraintSet { items: vec![Constraint::Unsatisfiable] }
    }

    pub fn from_constraints(items: impl IntoIterator<Item = Constraint>) -> Self {
        let mut set = ConstraintSet { items: items.into_iter().collect() };
        set.normalize();
        set
    }

    pub fn single(c: Constraint) -> Self {
        Self::from_constraints([c])
    }

    /// Conjoin `other` onto `self`, renormalizing.
    pub fn and(&self, other: &ConstraintSet) -> ConstraintSet {
        Self::from_constraints(self.items.iter().chain(other.items.iter()).cloned())
    }

    fn normalize(&mut self) {
        self.items.retain(|c| *c != Constraint::True);
        self.items.sort();
        self.items.dedup();
        let mut unsat = self.items.contains(&Constraint::Unsatisfiable);
        // Conflicting value constraints on the same key collapse to unsat.
        let mut type_eq: HashMap<&str, &L2Type> = HashMap::new();
        let mut len_eq: HashMap<&str, i64> = HashMap::new();
        let mut decl_ty: HashMap<&str, &L2Type> = HashMap::new();
        for c in &self.items {
            match c {
                Constraint::TypeEq(k, t) => {
                    if let Some(prev) = type_eq.insert(k, t) {
                        if prev != t {
                            unsat = true;
                        }
                    }
                }
                Constraint::LengthEq(k, n) => {
                    if *n < 0 {
                        unsat = true;
                    }
                    if let Some(prev) = len_eq.insert(k, *n) {
                        if prev != *n {
                            unsat = true;
                        }
                    }
                }
                Constraint::DeclaredWithType(k, t) => {
                    if let Some(prev) = decl_ty.insert(k, t) {
                        if prev != t {
                            unsat = true;
                        }
                    }
                }
                _ => {}
            }
        }
        if unsat {
            self.items = vec![Constraint::Unsatisfiable];
        }
    }

    pub fn is_unsatisfiable(&self) -> bool {
        self.items.first() == Some(&Constraint::Unsatisfiable)
    }

    /// True for the empty conjunction.
    pub fn is_trivial(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Constraint> {
        self.items.iter()
    }

    /// Looks up the type required for attribute `key`, if any conjunct pins it.
    pub fn required_type(&self, key: &str) -> Option<&L2Type> {
        self.items.iter().find_map(|c| match c {
            Constraint::TypeEq(k, t) if k == key => Some(t),
            _ => None,
        })
    }

    pub fn required_length(&self, key: &str) -> Option<i64> {
        self.items.iter().find_map(|c| match c {
            Constraint::LengthEq(k, n) if k == key => Some(*n),
            _ => None,
        })
    }

    /// True iff every conjunct holds on `attrs`. Declaredness conjuncts read
    /// the chosen name from `attrs` and then look the scope flags up in the
    /// same map, so callers pass the node's merged (inherited + synthesized)
    /// attributes.
    pub fn satisfied_by(&self, attrs: &AttributeMap) -> bool {
        self.items.iter().all(|c| match c {
            Constraint::True => true,
            Constraint::Unsatisfiable => false,
            Constraint::TypeEq(k, t) => attrs.get(k) == Some(&AttrValue::Type(t.clone())),
            Constraint::LengthEq(k, n) => attrs.get(k) == Some(&AttrValue::Int(*n)),
            Constraint::IsDeclared(k) => match attrs.str_attr(k) {
                Some(name) => attrs.bool_attr(&decl_key(name)) == Some(true),
                None => false,
            },
            Constraint::DeclaredWithType(k, t) => match attrs.str_attr(k) {
                Some(name) => {
                    attrs.bool_attr(&decl_key(name)) == Some(true)
                        && attrs.type_attr(&typevar_key(name)) == Some(t)
                }
                None => false,
            },
        })
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// One position on a rule's right-hand side.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RhsItem {
    Nonterminal(SymbolId),
    /// A fixed terminal string.
    Terminal(String),
    /// A terminal drawn from a closed class of strings.
    Class(ClassId),
}

impl RhsItem {
    pub fn is_nonterminal(&self) -> bool {
        matches!(self, RhsItem::Nonterminal(_))
    }
}

/// Result of rewriting a constraint set through a production rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rewrite {
    /// One constraint set per rhs position; terminal positions carry the
    /// empty set.
    PerChild(Vec<ConstraintSet>),
    /// The rule's single class position must draw from this restricted set.
    TerminalChoice(Vec<String>),
    Unsatisfiable,
}

/// Computes synthesized attributes: `(own inherited attributes, merged
/// attribute maps of the children) -> synthesized attributes`. Terminal
/// children appear as maps holding the single key `text`.
pub type SynthFn = Box<dyn Fn(&AttributeMap, &[AttributeMap]) -> AttributeMap + Send + Sync>;

/// Computes the inherited attributes of the child at `index`:
/// `(parent inherited attributes, merged maps of left siblings, index)`.
pub type InheritFn = Box<dyn Fn(&AttributeMap, &[AttributeMap], usize) -> AttributeMap + Send + Sync>;

/// Rewrites a (normalized) constraint set against this rule, given the
/// inherited attributes of the node being expanded.
pub type RewriteFn = Box<dyn Fn(&ConstraintSet, &AttributeMap) -> Rewrite + Send + Sync>;

/// Everything needed to register one production rule.
pub struct RuleSpec {
    pub lhs: SymbolId,
    pub rhs: Vec<RhsItem>,
    pub synth: SynthFn,
    pub inherit: InheritFn,
    pub rewrite: RewriteFn,
    /// Attribute keys whose values are chosen during generation (pinned from
    /// the constraints in force) rather than computed bottom-up. On decode
    /// they are read back from the stored attribute map.
    pub choice_keys: Vec<String>,
}

impl RuleSpec {
    pub fn new(lhs: SymbolId, rhs: Vec<RhsItem>) -> Self {
        RuleSpec {
            lhs,
            rhs,
            synth: Box::new(|_, _| AttributeMap::new()),
            inherit: inherit_passthrough(),
            rewrite: Box::new(|_, _| Rewrite::Unsatisfiable),
            choice_keys: Vec::new(),
        }
    }

    pub fn synth(mut self, f: SynthFn) -> Self {
        self.synth = f;
        self
    }

    pub fn inherit(mut self, f: InheritFn) -> Self {
        self.inherit = f;
        self
    }

    pub fn rewrite(mut self, f: RewriteFn) -> Self {
        self.rewrite = f;
        self
    }

    pub fn choice_keys(mut self, keys: &[&str]) -> Self {
        self.choice_keys = keys.iter().map(|k| k.to_string()).collect();
        self
    }
}

/// Children simply inherit their parent's inherited attributes.
pub fn inherit_passthrough() -> InheritFn {
    Box::new(|parent, _, _| parent.clone())
}

pub struct ProductionRule {
    id: usize,
    lhs: SymbolId,
    rhs: Vec<RhsItem>,
    synth: SynthFn,
    inherit: InheritFn,
    rewrite: RewriteFn,
    choice_keys: Vec<String>,
}

impl ProductionRule {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn lhs(&self) -> SymbolId {
        self.lhs
    }

    pub fn rhs(&self) -> &[RhsItem] {
        self.rhs.as_slice()
    }

    pub fn choice_keys(&self) -> &[String] {
        &self.choice_keys
    }

    pub fn has_nonterminals(&self) -> bool {
        self.rhs.iter().any(RhsItem::is_nonterminal)
    }

    /// Synthesized attributes from the children's merged maps. `children`
    /// must align with the rhs (terminals as `{text=...}` maps).
    pub fn synthesize(&self, inherited: &AttributeMap, children: &[AttributeMap]) -> AttributeMap {
        assert_eq!(
            children.len(),
            self.rhs.len(),
            "rule {} expects {} children, got {}",
            self.id,
            self.rhs.len(),
            children.len()
        );
        (self.synth)(inherited, children)
    }

    /// Inherited attributes of the child at `index`.
    pub fn inherit(
        &self,
        parent_inherited: &AttributeMap,
        left_siblings: &[AttributeMap],
        index: usize,
    ) -> AttributeMap {
        assert!(index < self.rhs.len(), "child index {index} out of range for rule {}", self.id);
        assert!(left_siblings.len() >= index.min(left_siblings.len()));
        (self.inherit)(parent_inherited, left_siblings, index)
    }

    /// Child constraint sets whose satisfaction guarantees `constraints` on
    /// this node, or `Unsatisfiable` when the rule can never satisfy them.
    pub fn rewrite(&self, constraints: &ConstraintSet, inherited: &AttributeMap) -> Rewrite {
        if constraints.is_unsatisfiable() {
            return Rewrite::Unsatisfiable;
        }
        let rw = (self.rewrite)(constraints, inherited);
        if let Rewrite::PerChild(sets) = &rw {
            assert_eq!(
                sets.len(),
                self.rhs.len(),
                "rule {} rewrite produced {} child sets for {} rhs items",
                self.id,
                sets.len(),
                self.rhs.len()
            );
            if sets.iter().any(ConstraintSet::is_unsatisfiable) {
                return Rewrite::Unsatisfiable;
            }
        }
        rw
    }
}

/// A closed set of admissible terminal strings.
pub struct TerminalClass {
    name: String,
    values: Vec<String>,
}

impl TerminalClass {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn contains(&self, text: &str) -> bool {
        self.values.binary_search_by(|v| v.as_str().cmp(text)).is_ok()
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum GrammarError {
    UnknownSymbol(String),
    DuplicateSymbol(String),
    DuplicateClass(String),
    DuplicateRule { lhs: String },
}

impl fmt::Display for GrammarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarError::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            GrammarError::DuplicateSymbol(s) => write!(f, "symbol `{s}` already registered"),
            GrammarError::DuplicateClass(s) => write!(f, "terminal class `{s}` already registered"),
            GrammarError::DuplicateRule { lhs } => {
                write!(f, "identical rule already registered for `{lhs}`")
            }
        }
    }
}

impl std::error::Error for GrammarError {}

/// An attributed grammar. Immutable once built; rules keep the integer id
/// they were assigned at registration (declaration order), which the tree
/// text format depends on.
#[derive(Default)]
pub struct Grammar {
    symbols: Vec<String>,
    symbols_by_name: HashMap<String, SymbolId>,
    classes: Vec<TerminalClass>,
    rules: Vec<ProductionRule>,
    rules_by_lhs: Vec<Vec<usize>>,
    rule_shapes: HashSet<(SymbolId, Vec<RhsItem>)>,
}

impl Grammar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_symbol(&mut self, name: &str) -> Result<SymbolId, GrammarError> {
        if self.symbols_by_name.contains_key(name) {
            return Err(GrammarError::DuplicateSymbol(name.to_string()));
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(name.to_string());
        self.symbols_by_name.insert(name.to_string(), id);
        self.rules_by_lhs.push(Vec::new());
        Ok(id)
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.symbols_by_name.get(name).copied()
    }

    pub fn symbol_name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0 as usize]
    }

    pub fn add_class(&mut self, name: &str, mut values: Vec<String>) -> Result<ClassId, GrammarError> {
        if self.classes.iter().any(|c| c.name == name) {
            return Err(GrammarError::DuplicateClass(name.to_string()));
        }
        values.sort();
        values.dedup();
        let id = ClassId(self.classes.len() as u32);
        self.classes.push(TerminalClass { name: name.to_string(), values });
        Ok(id)
    }

    pub fn class(&self, id: ClassId) -> &TerminalClass {
        &self.classes[id.0 as usize]
    }

    /// Registers a rule. The returned id equals the count of previously
    /// added rules and is never reassigned.
    pub fn add_rule(&mut self, spec: RuleSpec) -> Result<usize, GrammarError> {
        let lhs_name = self
            .symbols
            .get(spec.lhs.0 as usize)
            .ok_or_else(|| GrammarError::UnknownSymbol(format!("#{}", spec.lhs.0)))?
            .clone();
        for item in &spec.rhs {
            if let RhsItem::Nonterminal(sym) = item {
                if sym.0 as usize >= self.symbols.len() {
                    return Err(GrammarError::UnknownSymbol(format!("#{}", sym.0)));
                }
            }
        }
        let shape = (spec.lhs, spec.rhs.clone());
        if !self.rule_shapes.insert(shape) {
            return Err(GrammarError::DuplicateRule { lhs: lhs_name });
        }
        let id = self.rules.len();
        self.rules.push(ProductionRule {
            id,
            lhs: spec.lhs,
            rhs: spec.rhs,
            synth: spec.synth,
            inherit: spec.inherit,
            rewrite: spec.rewrite,
            choice_keys: spec.choice_keys,
        });
        self.rules_by_lhs[spec.lhs.0 as usize].push(id);
        Ok(id)
    }

    pub fn rule(&self, id: usize) -> Option<&ProductionRule> {
        self.rules.get(id)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn rules_for(&self, symbol: SymbolId) -> &[usize] {
        &self.rules_by_lhs[symbol.0 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_grammar() -> (Grammar, SymbolId) {
        let mut g = Grammar::new();
        let expr = g.add_symbol("Expr").unwrap();
        g.add_rule(
            RuleSpec::new(expr, vec![RhsItem::Terminal("1".into())])
                .synth(Box::new(|_, _| {
                    AttributeMap::new().with("type", AttrValue::Type(L2Type::Int))
                }))
                .rewrite(Box::new(|c, _| match c.required_type("type") {
                    Some(L2Type::Int) | None => Rewrite::PerChild(vec![ConstraintSet::empty()]),
                    Some(_) => Rewrite::Unsatisfiable,
                })),
        )
        .unwrap();
        (g, expr)
    }

    #[test]
    fn rule_ids_follow_declaration_order() {
        let (mut g, expr) = toy_grammar();
        assert_eq!(g.rules_for(expr), &[0]);
        for i in 1..40 {
            let id = g
                .add_rule(
                    RuleSpec::new(expr, vec![RhsItem::Terminal(format!("t{i}"))])
                        .rewrite(Box::new(|_, _| Rewrite::PerChild(vec![ConstraintSet::empty()]))),
                )
                .unwrap();
            assert_eq!(id, i);
        }
        assert_eq!(g.rule_count(), 40);
        assert_eq!(g.rule(39).unwrap().id(), 39);
    }

    #[test]
    fn add_rule_rejects_unknown_lhs() {
        let (mut g, _) = toy_grammar();
        let bogus = SymbolId(99);
        let err = g.add_rule(RuleSpec::new(bogus, vec![])).unwrap_err();
        assert!(matches!(err, GrammarError::UnknownSymbol(_)));
    }

    #[test]
    fn add_rule_rejects_identical_rule() {
        let (mut g, expr) = toy_grammar();
        let err = g
            .add_rule(RuleSpec::new(expr, vec![RhsItem::Terminal("1".into())]))
            .unwrap_err();
        assert_eq!(err, GrammarError::DuplicateRule { lhs: "Expr".into() });
    }

    #[test]
    fn conflicting_type_constraints_normalize_to_unsat() {
        let set = ConstraintSet::from_constraints([
            Constraint::TypeEq("type".into(), L2Type::Int),
            Constraint::TypeEq("type".into(), L2Type::Bool),
        ]);
        assert!(set.is_unsatisfiable());
    }

    #[test]
    fn unsat_member_poisons_conjunction() {
        let set = ConstraintSet::from_constraints([
            Constraint::TypeEq("type".into(), L2Type::Int),
            Constraint::Unsatisfiable,
        ]);
        assert!(set.is_unsatisfiable());
    }

    #[test]
    fn normalization_is_idempotent() {
        let once = ConstraintSet::from_constraints([
            Constraint::True,
            Constraint::LengthEq("length".into(), 3),
            Constraint::LengthEq("length".into(), 3),
            Constraint::TypeEq("type".into(), L2Type::Int),
        ]);
        let twice = ConstraintSet::from_constraints(once.iter().cloned());
        assert_eq!(once, twice);
    }

    #[test]
    fn satisfies_type_and_empty_set() {
        let attrs = AttributeMap::new().with("type", AttrValue::Type(L2Type::Int));
        let want_int = ConstraintSet::single(Constraint::TypeEq("type".into(), L2Type::Int));
        let want_bool = ConstraintSet::single(Constraint::TypeEq("type".into(), L2Type::Bool));
        assert!(want_int.satisfied_by(&attrs));
        assert!(!want_bool.satisfied_by(&attrs));
        assert!(ConstraintSet::empty().satisfied_by(&attrs));
    }

    #[test]
    fn satisfies_declaredness_via_scope_flags() {
        let attrs = AttributeMap::new()
            .with("varname", AttrValue::Str("r".into()))
            .with(decl_key("r"), AttrValue::Bool(true))
            .with(typevar_key("r"), AttrValue::Type(L2Type::Bool));
        assert!(ConstraintSet::single(Constraint::IsDeclared("varname".into())).satisfied_by(&attrs));
        assert!(ConstraintSet::single(Constraint::DeclaredWithType("varname".into(), L2Type::Bool))
            .satisfied_by(&attrs));
        assert!(!ConstraintSet::single(Constraint::DeclaredWithType("varname".into(), L2Type::Int))
            .satisfied_by(&attrs));
    }

    #[test]
    #[should_panic(expected = "attribute `type` missing")]
    fn expect_panics_on_missing_attribute() {
        AttributeMap::new().expect("type");
    }

    #[test]
    fn negative_length_is_unsatisfiable() {
        let set = ConstraintSet::single(Constraint::LengthEq("length".into(), -1));
        assert!(set.is_unsatisfiable());
    }
}
