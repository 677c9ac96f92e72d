//! Free-logic terms and formulas over an algebra, and their evaluation at a
//! configuration of an A-strategy.
//!
//! Terms may fail to denote: a variable denotes only once some event carrying
//! it has been played, and an element name denotes only when it is among the
//! latest values `last(x)`. Quantifiers range over the elements of `last(x)`
//! of the bound variable's sort.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, VariableSet};
use crate::error::{Error, Result};
use crate::report::{Rule, ValidationReport};
use crate::tag::{tag, untag, Side};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var(String),
    Elem(String),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn elem(name: &str) -> Self {
        Term::Elem(name.to_string())
    }

    fn map_names(&self, f: &impl Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Elem(a) => Term::Elem(f(a)),
        }
    }

    fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Elem(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Elem(a) => write!(f, "'{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Formula {
    Rel { name: String, args: Vec<Term> },
    Eq { left: Term, right: Term },
    Def { term: Term },
    And { left: Box<Formula>, right: Box<Formula> },
    Or { left: Box<Formula>, right: Box<Formula> },
    Not { body: Box<Formula> },
    Forall { var: String, body: Box<Formula> },
    Exists { var: String, body: Box<Formula> },
    BigAnd { items: Vec<Formula> },
    BigOr { items: Vec<Formula> },
}

impl Formula {
    pub fn rel(name: &str, args: Vec<Term>) -> Self {
        Formula::Rel { name: name.to_string(), args }
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::Eq { left, right }
    }

    pub fn def(term: Term) -> Self {
        Formula::Def { term }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And { left: Box::new(left), right: Box::new(right) }
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or { left: Box::new(left), right: Box::new(right) }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(body: Formula) -> Self {
        Formula::Not { body: Box::new(body) }
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::Forall { var: var.to_string(), body: Box::new(body) }
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::Exists { var: var.to_string(), body: Box::new(body) }
    }

    /// `a ⇒ b`, encoded as `¬a ∨ b`.
    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    /// The empty conjunction.
    pub fn truth() -> Self {
        Formula::BigAnd { items: Vec::new() }
    }

    /// The empty disjunction.
    pub fn falsity() -> Self {
        Formula::BigOr { items: Vec::new() }
    }

    pub fn big_and(items: Vec<Formula>) -> Self {
        Formula::BigAnd { items }
    }

    pub fn big_or(items: Vec<Formula>) -> Self {
        Formula::BigOr { items }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Rel { .. } | Formula::Eq { .. } | Formula::Def { .. } => 0,
            Formula::And { left, right } | Formula::Or { left, right } => 1 + left.depth().max(right.depth()),
            Formula::Not { body } | Formula::Forall { body, .. } | Formula::Exists { body, .. } => 1 + body.depth(),
            Formula::BigAnd { items } | Formula::BigOr { items } => {
                1 + items.iter().map(Formula::depth).max().unwrap_or(0)
            }
        }
    }

    fn terms(&self, out: &mut Vec<Term>) {
        match self {
            Formula::Rel { args, .. } => out.extend(args.iter().cloned()),
            Formula::Eq { left, right } => {
                out.push(left.clone());
                out.push(right.clone());
            }
            Formula::Def { term } => out.push(term.clone()),
            Formula::And { left, right } | Formula::Or { left, right } => {
                left.terms(out);
                right.terms(out);
            }
            Formula::Not { body } | Formula::Forall { body, .. } | Formula::Exists { body, .. } => body.terms(out),
            Formula::BigAnd { items } | Formula::BigOr { items } => items.iter().for_each(|i| i.terms(out)),
        }
    }

    /// Every variable name occurring in the formula, free or bound.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut terms = Vec::new();
        self.terms(&mut terms);
        let mut out: BTreeSet<String> = terms
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v),
                Term::Elem(_) => None,
            })
            .collect();
        self.binders(&mut out);
        out
    }

    fn binders(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                out.insert(var.clone());
                body.binders(out);
            }
            Formula::Not { body } => body.binders(out),
            Formula::And { left, right } | Formula::Or { left, right } => {
                left.binders(out);
                right.binders(out);
            }
            Formula::BigAnd { items } | Formula::BigOr { items } => items.iter().for_each(|i| i.binders(out)),
            _ => {}
        }
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut visit = |t: &Term, bound: &Vec<String>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::Rel { args, .. } => args.iter().for_each(|t| visit(t, bound)),
                Formula::Eq { left, right } => {
                    visit(left, bound);
                    visit(right, bound);
                }
                Formula::Def { term } => visit(term, bound),
                Formula::And { left, right } | Formula::Or { left, right } => {
                    go(left, bound, out);
                    go(right, bound, out);
                }
                Formula::Not { body } => go(body, bound, out),
                Formula::Forall { var, body } | Formula::Exists { var, body } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Formula::BigAnd { items } | Formula::BigOr { items } => {
                    items.iter().for_each(|i| go(i, bound, out))
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// `self[a/α]`: replaces the free occurrences of variable `var` by the
    /// element `elem`. Element names are never bound, so no capture occurs.
    pub fn substitute(&self, elem: &str, var: &str) -> Formula {
        let sub = |t: &Term| match t {
            Term::Var(v) if v == var => Term::Elem(elem.to_string()),
            other => other.clone(),
        };
        match self {
            Formula::Rel { name, args } => Formula::Rel { name: name.clone(), args: args.iter().map(sub).collect() },
            Formula::Eq { left, right } => Formula::Eq { left: sub(left), right: sub(right) },
            Formula::Def { term } => Formula::Def { term: sub(term) },
            Formula::And { left, right } => Formula::and(left.substitute(elem, var), right.substitute(elem, var)),
            Formula::Or { left, right } => Formula::or(left.substitute(elem, var), right.substitute(elem, var)),
            Formula::Not { body } => Formula::not(body.substitute(elem, var)),
            Formula::Forall { var: v, .. } | Formula::Exists { var: v, .. } if v == var => self.clone(),
            Formula::Forall { var: v, body } => Formula::forall(v, body.substitute(elem, var)),
            Formula::Exists { var: v, body } => Formula::exists(v, body.substitute(elem, var)),
            Formula::BigAnd { items } => Formula::BigAnd { items: items.iter().map(|i| i.substitute(elem, var)).collect() },
            Formula::BigOr { items } => Formula::BigOr { items: items.iter().map(|i| i.substitute(elem, var)).collect() },
        }
    }

    /// Substitution that first checks `sort(elem) = sort(var)`.
    pub fn substitute_checked(
        &self,
        algebra: &Algebra,
        vars: &VariableSet,
        elem: &str,
        var: &str,
    ) -> Result<Formula> {
        let es = algebra.sort_of(elem).ok_or_else(|| Error::UnknownElement(elem.to_string()))?;
        let vs = vars.sort_of(var).ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        if es != vs {
            return Err(Error::SortMismatch(format!("{elem}: {es} substituted for {var}: {vs}")));
        }
        Ok(self.substitute(elem, var))
    }

    /// Renames every variable, element and relation symbol, bound variables
    /// included.
    pub fn map_names(&self, f: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Rel { name, args } => Formula::Rel { name: f(name), args: args.iter().map(|t| t.map_names(f)).collect() },
            Formula::Eq { left, right } => Formula::Eq { left: left.map_names(f), right: right.map_names(f) },
            Formula::Def { term } => Formula::Def { term: term.map_names(f) },
            Formula::And { left, right } => Formula::and(left.map_names(f), right.map_names(f)),
            Formula::Or { left, right } => Formula::or(left.map_names(f), right.map_names(f)),
            Formula::Not { body } => Formula::not(body.map_names(f)),
            Formula::Forall { var, body } => Formula::forall(&f(var), body.map_names(f)),
            Formula::Exists { var, body } => Formula::exists(&f(var), body.map_names(f)),
            Formula::BigAnd { items } => Formula::BigAnd { items: items.iter().map(|i| i.map_names(f)).collect() },
            Formula::BigOr { items } => Formula::BigOr { items: items.iter().map(|i| i.map_names(f)).collect() },
        }
    }

    pub fn tagged(&self, side: Side) -> Formula {
        self.map_names(&|n| tag(side, n))
    }

    /// If every name in the formula carries the tag of `side`, the formula
    /// with tags removed.
    pub fn untagged(&self, side: Side) -> Option<Formula> {
        let mut names = Vec::new();
        self.collect_names(&mut names);
        if names.iter().all(|n| matches!(untag(n), Some((s, _)) if s == side)) {
            Some(self.map_names(&|n| untag(n).map(|(_, r)| r.to_string()).unwrap_or_default()))
        } else {
            None
        }
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match self {
            Formula::Rel { name, args } => {
                out.push(name.clone());
                out.extend(args.iter().map(|t| t.name().to_string()));
            }
            Formula::Eq { left, right } => {
                out.push(left.name().to_string());
                out.push(right.name().to_string());
            }
            Formula::Def { term } => out.push(term.name().to_string()),
            Formula::And { left, right } | Formula::Or { left, right } => {
                left.collect_names(out);
                right.collect_names(out);
            }
            Formula::Not { body } => body.collect_names(out),
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                out.push(var.clone());
                body.collect_names(out);
            }
            Formula::BigAnd { items } | Formula::BigOr { items } => items.iter().for_each(|i| i.collect_names(out)),
        }
    }

    /// Checks symbols, arities and sorts against an algebra and a variable
    /// set.
    pub fn check_sorts(&self, algebra: &Algebra, vars: &VariableSet) -> ValidationReport {
        let mut report = ValidationReport::new();
        self.check_into(algebra, vars, &mut report);
        report
    }

    fn term_sort<'a>(t: &Term, algebra: &'a Algebra, vars: &'a VariableSet, report: &mut ValidationReport) -> Option<&'a str> {
        match t {
            Term::Var(v) => {
                let s = vars.sort_of(v);
                if s.is_none() {
                    report.push(Rule::FormulaSort, format!("variable {v} is not declared"));
                }
                s
            }
            Term::Elem(a) => {
                let s = algebra.sort_of(a);
                if s.is_none() {
                    report.push(Rule::FormulaSort, format!("element {a} is not in the carrier"));
                }
                s
            }
        }
    }

    fn check_into(&self, algebra: &Algebra, vars: &VariableSet, report: &mut ValidationReport) {
        match self {
            Formula::Rel { name, args } => {
                let sorts: Vec<Option<&str>> = args.iter().map(|t| Self::term_sort(t, algebra, vars, report)).collect();
                match algebra.relation(name) {
                    None => report.push(Rule::FormulaSort, format!("relation {name} is not in the signature")),
                    Some(r) if r.arity.len() != args.len() => report.push(
                        Rule::FormulaSort,
                        format!("{name} has arity {} but is applied to {} terms", r.arity.len(), args.len()),
                    ),
                    Some(r) => {
                        for ((s, want), t) in sorts.iter().zip(&r.arity).zip(args) {
                            if let Some(s) = s {
                                if s != want {
                                    report.push(Rule::FormulaSort, format!("argument {t} of {name} has sort {s}, expected {want}"));
                                }
                            }
                        }
                    }
                }
            }
            Formula::Eq { left, right } => {
                let a = Self::term_sort(left, algebra, vars, report);
                let b = Self::term_sort(right, algebra, vars, report);
                if let (Some(a), Some(b)) = (a, b) {
                    if a != b {
                        report.push(Rule::FormulaSort, format!("{left} = {right} compares sorts {a} and {b}"));
                    }
                }
            }
            Formula::Def { term } => {
                Self::term_sort(term, algebra, vars, report);
            }
            Formula::And { left, right } | Formula::Or { left, right } => {
                left.check_into(algebra, vars, report);
                right.check_into(algebra, vars, report);
            }
            Formula::Not { body } => body.check_into(algebra, vars, report),
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                if !vars.contains(var) {
                    report.push(Rule::FormulaSort, format!("bound variable {var} is not declared"));
                }
                body.check_into(algebra, vars, report);
            }
            Formula::BigAnd { items } | Formula::BigOr { items } => {
                items.iter().for_each(|i| i.check_into(algebra, vars, report))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ts: &[Term]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Formula::Rel { name, args } => write!(f, "{name}({})", join(args)),
            Formula::Eq { left, right } => write!(f, "{left}={right}"),
            Formula::Def { term } => write!(f, "E({term})"),
            Formula::And { left, right } => write!(f, "({left} ∧ {right})"),
            Formula::Or { left, right } => write!(f, "({left} ∨ {right})"),
            Formula::Not { body } => write!(f, "¬{body}"),
            Formula::Forall { var, body } => write!(f, "∀{var}.{body}"),
            Formula::Exists { var, body } => write!(f, "∃{var}.{body}"),
            Formula::BigAnd { items } | Formula::BigOr { items } => {
                let op = if matches!(self, Formula::BigAnd { .. }) { "⋀" } else { "⋁" };
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                write!(f, "{op}[{}]", parts.join(", "))
            }
        }
    }
}

/// What a configuration makes visible to formulas: the value of each
/// variable at its latest event, and the set `last(x)` of those values.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation {
    values: HashMap<String, String>,
    last: HashSet<String>,
}

impl Valuation {
    /// Builds a valuation from per-variable latest values. `last(x)` is the
    /// set of those values.
    pub fn new(values: HashMap<String, String>) -> Self {
        let last = values.values().cloned().collect();
        Self { values, last }
    }

    pub fn value(&self, var: &str) -> Option<&str> {
        self.values.get(var).map(String::as_str)
    }

    pub fn values(&self) -> &HashMap<String, String> {
        &self.values
    }

    pub fn last(&self) -> &HashSet<String> {
        &self.last
    }

    /// `t[x]`, or `None` when `x ∉ ⟦t⟧`.
    pub fn eval_term<'a>(&'a self, t: &'a Term) -> Option<&'a str> {
        match t {
            Term::Var(v) => self.value(v),
            Term::Elem(a) => self.last.contains(a).then_some(a.as_str()),
        }
    }

    /// `x ⊨ φ`, by structural recursion with literal substitution at
    /// quantifiers.
    pub fn satisfies(&self, phi: &Formula, algebra: &Algebra, vars: &VariableSet) -> bool {
        match phi {
            Formula::Rel { name, args } => {
                let vals: Option<Vec<&str>> = args.iter().map(|t| self.eval_term(t)).collect();
                vals.is_some_and(|v| algebra.holds(name, &v))
            }
            Formula::Eq { left, right } => match (self.eval_term(left), self.eval_term(right)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Formula::Def { term } => self.eval_term(term).is_some(),
            Formula::And { left, right } => {
                self.satisfies(left, algebra, vars) && self.satisfies(right, algebra, vars)
            }
            Formula::Or { left, right } => {
                self.satisfies(left, algebra, vars) || self.satisfies(right, algebra, vars)
            }
            Formula::Not { body } => !self.satisfies(body, algebra, vars),
            Formula::Forall { var, body } => self
                .domain(var, algebra, vars)
                .iter()
                .all(|a| self.satisfies(&body.substitute(a, var), algebra, vars)),
            Formula::Exists { var, body } => self
                .domain(var, algebra, vars)
                .iter()
                .any(|a| self.satisfies(&body.substitute(a, var), algebra, vars)),
            Formula::BigAnd { items } => items.iter().all(|i| self.satisfies(i, algebra, vars)),
            Formula::BigOr { items } => items.iter().any(|i| self.satisfies(i, algebra, vars)),
        }
    }

    /// Elements of `last(x)` with the sort of `var`, in sorted order. Empty
    /// when `var` is undeclared.
    fn domain(&self, var: &str, algebra: &Algebra, vars: &VariableSet) -> Vec<String> {
        let Some(sort) = vars.sort_of(var) else {
            return Vec::new();
        };
        let mut d: Vec<String> = self
            .last
            .iter()
            .filter(|a| algebra.sort_of(a) == Some(sort))
            .cloned()
            .collect();
        d.sort();
        d
    }

    /// Every subformula visited during evaluation, in pre-order, with its
    /// truth value. Quantifier instances appear after their quantifier.
    pub fn trace(&self, phi: &Formula, algebra: &Algebra, vars: &VariableSet) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        self.trace_into(phi, algebra, vars, &mut out);
        out
    }

    fn trace_into(&self, phi: &Formula, algebra: &Algebra, vars: &VariableSet, out: &mut Vec<(String, bool)>) {
        out.push((phi.to_string(), self.satisfies(phi, algebra, vars)));
        match phi {
            Formula::And { left, right } | Formula::Or { left, right } => {
                self.trace_into(left, algebra, vars, out);
                self.trace_into(right, algebra, vars, out);
            }
            Formula::Not { body } => self.trace_into(body, algebra, vars, out),
            Formula::Forall { var, body } | Formula::Exists { var, body } => {
                for a in self.domain(var, algebra, vars) {
                    self.trace_into(&body.substitute(&a, var), algebra, vars, out);
                }
            }
            Formula::BigAnd { items } | Formula::BigOr { items } => {
                items.iter().for_each(|i| self.trace_into(i, algebra, vars, out))
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Relation;

    fn setup() -> (Algebra, VariableSet) {
        let alg = Algebra::set("s", &["a", "b"])
            .with_relation(Relation { name: "R".into(), arity: vec!["s".into()], tuples: vec![vec!["a".into()]] })
            .unwrap();
        let vars = VariableSet::from_pairs(&[("x", "s"), ("y", "s")]).unwrap();
        (alg, vars)
    }

    fn val(pairs: &[(&str, &str)]) -> Valuation {
        Valuation::new(pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }

    #[test]
    fn substitution_examples() {
        let phi = Formula::eq(Term::var("x"), Term::var("y"));
        assert_eq!(phi.substitute("a", "x"), Formula::eq(Term::elem("a"), Term::var("y")));
        let bound = Formula::forall("x", Formula::def(Term::var("x")));
        assert_eq!(bound.substitute("a", "x"), bound);
        let both = Formula::and(Formula::def(Term::var("x")), Formula::def(Term::var("x")));
        assert_eq!(
            both.substitute("a", "x"),
            Formula::and(Formula::def(Term::elem("a")), Formula::def(Term::elem("a")))
        );
        let (alg, _) = setup();
        let other = VariableSet::from_pairs(&[("x", "t")]).unwrap();
        assert!(matches!(phi.substitute_checked(&alg, &other, "a", "x"), Err(Error::SortMismatch(_))));
    }

    #[test]
    fn semantics_examples() {
        let (alg, vars) = setup();
        let empty = Valuation::default();
        assert!(!empty.satisfies(&Formula::exists("x", Formula::eq(Term::var("x"), Term::var("x"))), &alg, &vars));
        assert!(empty.satisfies(&Formula::forall("x", Formula::falsity()), &alg, &vars));
        let at_a = val(&[("x", "a")]);
        assert!(at_a.satisfies(&Formula::def(Term::var("x")), &alg, &vars));
        assert!(!at_a.satisfies(&Formula::def(Term::var("y")), &alg, &vars));
        assert!(at_a.satisfies(&Formula::forall("y", Formula::rel("R", vec![Term::var("y")])), &alg, &vars));
        assert!(!at_a.satisfies(&Formula::def(Term::elem("b")), &alg, &vars));
        let at_b = val(&[("x", "b")]);
        assert!(!at_b.satisfies(&Formula::forall("y", Formula::rel("R", vec![Term::var("y")])), &alg, &vars));
        assert!(at_b.satisfies(&Formula::truth(), &alg, &vars));
        assert!(!at_b.satisfies(&Formula::falsity(), &alg, &vars));
    }

    #[test]
    fn sort_checks() {
        let (alg, vars) = setup();
        assert!(Formula::rel("R", vec![Term::var("x")]).check_sorts(&alg, &vars).is_empty());
        assert!(!Formula::rel("R", vec![Term::var("x"), Term::var("y")]).check_sorts(&alg, &vars).is_empty());
        assert!(!Formula::def(Term::var("z")).check_sorts(&alg, &vars).is_empty());
        assert!(!Formula::rel("Q", vec![]).check_sorts(&alg, &vars).is_empty());
    }

    #[test]
    fn tagging_round_trip() {
        let phi = Formula::forall("x", Formula::rel("R", vec![Term::var("x"), Term::elem("a")]));
        let t = phi.tagged(Side::Right);
        assert_eq!(t.untagged(Side::Right), Some(phi.clone()));
        assert_eq!(t.untagged(Side::Left), None);
        assert!(Formula::truth().untagged(Side::Left).is_some());
    }

    #[test]
    fn json_shape() {
        let phi = Formula::forall("x", Formula::rel("R", vec![Term::var("x")]));
        let v = serde_json::to_value(&phi).unwrap();
        assert_eq!(v["op"], "forall");
        assert_eq!(v["body"]["args"][0]["var"], "x");
        let back: Formula = serde_json::from_value(v).unwrap();
        assert_eq!(back, phi);
    }
}
