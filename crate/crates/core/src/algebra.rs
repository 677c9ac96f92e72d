//! Finite relational many-sorted algebras and sorted variable sets.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Rule, ValidationReport};
use crate::tag::{tag, untag, Side};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub name: String,
    pub sort: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub arity: Vec<String>,
    #[serde(default)]
    pub tuples: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default)]
    pub sorts: Vec<String>,
    #[serde(default)]
    pub carrier: Vec<Element>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

/// A finite algebra: sorts, a sorted carrier and interpreted relation
/// symbols. Names of sorts, elements and symbols are unique.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "AlgebraDoc", into = "AlgebraDoc")]
pub struct Algebra {
    sorts: Vec<String>,
    carrier: Vec<Element>,
    relations: Vec<Relation>,
    elements: HashMap<String, usize>,
    symbols: HashMap<String, usize>,
    interp: Vec<HashSet<Vec<String>>>,
}

impl Algebra {
    pub fn new(sorts: Vec<String>, carrier: Vec<Element>, relations: Vec<Relation>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &sorts {
            if !seen.insert(s.as_str()) {
                return Err(Error::Duplicate(format!("sort {s}")));
            }
        }
        let mut elements = HashMap::new();
        for (i, e) in carrier.iter().enumerate() {
            if elements.insert(e.name.clone(), i).is_some() {
                return Err(Error::Duplicate(format!("element {}", e.name)));
            }
        }
        let mut symbols = HashMap::new();
        let mut interp = Vec::with_capacity(relations.len());
        for (i, r) in relations.iter().enumerate() {
            if symbols.insert(r.name.clone(), i).is_some() {
                return Err(Error::Duplicate(format!("relation {}", r.name)));
            }
            let mut set = HashSet::new();
            for t in &r.tuples {
                for a in t {
                    if !elements.contains_key(a) {
                        return Err(Error::UnknownElement(a.clone()));
                    }
                }
                if !set.insert(t.clone()) {
                    return Err(Error::Duplicate(format!("tuple ({}) of {}", t.join(","), r.name)));
                }
            }
            interp.push(set);
        }
        Ok(Self { sorts, carrier, relations, elements, symbols, interp })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new(), Vec::new()).expect("empty algebra")
    }

    /// Single-sorted algebra over sort `s` with the given element names.
    pub fn set(sort: &str, names: &[&str]) -> Self {
        let carrier = names
            .iter()
            .map(|n| Element { name: n.to_string(), sort: sort.to_string() })
            .collect();
        Self::new(vec![sort.to_string()], carrier, Vec::new()).expect("distinct names")
    }

    pub fn with_relation(mut self, relation: Relation) -> Result<Self> {
        self.relations.push(relation);
        Self::new(self.sorts, self.carrier, self.relations)
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn has_sort(&self, sort: &str) -> bool {
        self.sorts.iter().any(|s| s == sort)
    }

    pub fn carrier(&self) -> &[Element] {
        &self.carrier
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements.get(name).map(|&i| &self.carrier[i])
    }

    pub fn sort_of(&self, name: &str) -> Option<&str> {
        self.element(name).map(|e| e.sort.as_str())
    }

    /// Elements of the given sort, in carrier order.
    pub fn elements_of_sort<'a>(&'a self, sort: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.carrier.iter().filter(move |e| e.sort == sort).map(|e| e.name.as_str())
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.symbols.get(name).map(|&i| &self.relations[i])
    }

    /// Whether the tuple belongs to the interpretation of `symbol`. Unknown
    /// symbols hold of nothing.
    pub fn holds<S: AsRef<str>>(&self, symbol: &str, args: &[S]) -> bool {
        match self.symbols.get(symbol) {
            Some(&i) => {
                let t: Vec<String> = args.iter().map(|a| a.as_ref().to_string()).collect();
                self.interp[i].contains(&t)
            }
            None => false,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for e in &self.carrier {
            if !self.has_sort(&e.sort) {
                report.push(Rule::UnknownSort, format!("element {} has undeclared sort {}", e.name, e.sort));
            }
        }
        for r in &self.relations {
            for s in &r.arity {
                if !self.has_sort(s) {
                    report.push(Rule::UnknownSort, format!("relation {} uses undeclared sort {s}", r.name));
                }
            }
            for t in &r.tuples {
                if t.len() != r.arity.len() {
                    report.push(
                        Rule::RelationArity,
                        format!("tuple ({}) of {} has length {}, arity {}", t.join(","), r.name, t.len(), r.arity.len()),
                    );
                    continue;
                }
                for (a, s) in t.iter().zip(&r.arity) {
                    if self.sort_of(a) != Some(s.as_str()) {
                        report.push(
                            Rule::RelationSort,
                            format!("tuple ({}) of {}: {a} is not of sort {s}", t.join(","), r.name),
                        );
                    }
                }
            }
        }
        report
    }

    /// Disjoint union with every name tagged by its side of origin.
    pub fn par(left: &Algebra, right: &Algebra) -> Algebra {
        let side = |a: &Algebra, side: Side| {
            let sorts: Vec<String> = a.sorts.iter().map(|s| tag(side, s)).collect();
            let carrier: Vec<Element> = a
                .carrier
                .iter()
                .map(|e| Element { name: tag(side, &e.name), sort: tag(side, &e.sort) })
                .collect();
            let relations: Vec<Relation> = a
                .relations
                .iter()
                .map(|r| Relation {
                    name: tag(side, &r.name),
                    arity: r.arity.iter().map(|s| tag(side, s)).collect(),
                    tuples: r
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(|x| tag(side, x)).collect())
                        .collect(),
                })
                .collect();
            (sorts, carrier, relations)
        };
        let (mut sorts, mut carrier, mut relations) = side(left, Side::Left);
        let (s2, c2, r2) = side(right, Side::Right);
        sorts.extend(s2);
        carrier.extend(c2);
        relations.extend(r2);
        Algebra::new(sorts, carrier, relations).expect("tagged names are unique")
    }

    /// The part of a tagged disjoint union coming from `side`, with tags
    /// removed.
    pub fn project(&self, side: Side) -> Algebra {
        let keep = |n: &str| match untag(n) {
            Some((s, rest)) if s == side => Some(rest.to_string()),
            _ => None,
        };
        let sorts = self.sorts.iter().filter_map(|s| keep(s)).collect();
        let carrier = self
            .carrier
            .iter()
            .filter_map(|e| Some(Element { name: keep(&e.name)?, sort: keep(&e.sort)? }))
            .collect();
        let relations = self
            .relations
            .iter()
            .filter_map(|r| {
                Some(Relation {
                    name: keep(&r.name)?,
                    arity: r.arity.iter().map(|s| keep(s)).collect::<Option<_>>()?,
                    tuples: r
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(|x| keep(x)).collect::<Option<_>>())
                        .collect::<Option<_>>()?,
                })
            })
            .collect();
        Algebra::new(sorts, carrier, relations).expect("projection of a valid algebra")
    }

    /// Same sorts, carrier and interpretations, irrespective of list order.
    pub fn same_as(&self, other: &Algebra) -> bool {
        let sorts = |a: &Algebra| a.sorts.iter().cloned().collect::<HashSet<_>>();
        let carrier = |a: &Algebra| a.carrier.iter().cloned().collect::<HashSet<_>>();
        if sorts(self) != sorts(other) || carrier(self) != carrier(other) {
            return false;
        }
        self.relations.len() == other.relations.len()
            && self.relations.iter().enumerate().all(|(i, r)| {
                other.relation(&r.name).is_some_and(|o| {
                    o.arity == r.arity && other.interp[other.symbols[&r.name]] == self.interp[i]
                })
            })
    }

    /// Whether this algebra has exactly one sort.
    pub fn single_sort(&self) -> Option<&str> {
        match self.sorts.as_slice() {
            [s] => Some(s.as_str()),
            _ => None,
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Algebra {}

impl TryFrom<AlgebraDoc> for Algebra {
    type Error = Error;

    fn try_from(doc: AlgebraDoc) -> Result<Self> {
        Algebra::new(doc.sorts, doc.carrier, doc.relations)
    }
}

impl From<Algebra> for AlgebraDoc {
    fn from(a: Algebra) -> Self {
        let mut sorts = a.sorts;
        sorts.sort();
        let mut carrier = a.carrier;
        carrier.sort_by(|x, y| x.name.cmp(&y.name));
        let mut relations = a.relations;
        for r in &mut relations {
            r.tuples.sort();
        }
        relations.sort_by(|x, y| x.name.cmp(&y.name));
        AlgebraDoc { sorts, carrier, relations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub sort: String,
}

/// A finite set of sorted variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Variable>", into = "Vec<Variable>")]
pub struct VariableSet {
    vars: Vec<Variable>,
}

impl VariableSet {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::Duplicate(format!("variable {}", v.name)));
            }
        }
        let mut vars = vars;
        vars.sort();
        Ok(Self { vars })
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(n, s)| Variable { name: n.to_string(), sort: s.to_string() })
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.vars.iter()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn sort_of(&self, name: &str) -> Option<&str> {
        self.vars
            .binary_search_by(|v| v.name.as_str().cmp(name))
            .ok()
            .map(|i| self.vars[i].sort.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.sort_of(name).is_some()
    }

    pub fn par(left: &VariableSet, right: &VariableSet) -> VariableSet {
        let vars = left
            .vars
            .iter()
            .map(|v| Variable { name: tag(Side::Left, &v.name), sort: tag(Side::Left, &v.sort) })
            .chain(
                right
                    .vars
                    .iter()
                    .map(|v| Variable { name: tag(Side::Right, &v.name), sort: tag(Side::Right, &v.sort) }),
            )
            .collect();
        VariableSet::new(vars).expect("tagged names are unique")
    }
}

impl VariableSet {
    pub fn project(&self, side: Side) -> VariableSet {
        let vars = self
            .vars
            .iter()
            .filter_map(|v| match (untag(&v.name), untag(&v.sort)) {
                (Some((a, n)), Some((b, s))) if a == side && b == side => {
                    Some(Variable { name: n.to_string(), sort: s.to_string() })
                }
                _ => None,
            })
            .collect();
        VariableSet::new(vars).expect("projection keeps names unique")
    }
}

impl TryFrom<Vec<Variable>> for VariableSet {
    type Error = Error;

    fn try_from(vars: Vec<Variable>) -> Result<Self> {
        VariableSet::new(vars)
    }
}

impl From<VariableSet> for Vec<Variable> {
    fn from(v: VariableSet) -> Self {
        v.vars
    }
}
