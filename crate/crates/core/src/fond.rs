//! PDDL subset with non-deterministic `oneof` effects, grounding, and the
//! explicit FOND model.
//!
//! Supported requirements: `:strips`, `:typing`, `:negative-preconditions`,
//! `:disjunctive-preconditions`, `:equality`, `:conditional-effects`,
//! `:non-deterministic`. Nested `oneof` is distributed into a flat list of
//! outcomes at grounding time.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::Atom;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported PDDL construct `{construct}` at {line}:{column}")]
    Unsupported {
        construct: String,
        line: usize,
        column: usize,
    },
    #[error("{message} at {line}:{column}")]
    Semantic {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("grounding exceeded the cap of {cap} ground actions")]
    GroundingCap { cap: usize },
    #[error("action {action} is not applicable in the given state")]
    Inapplicable { action: String },
    #[error("unknown atom {0}")]
    UnknownAtom(String),
    #[error("unknown action {0}")]
    UnknownAction(String),
}

// ---------------------------------------------------------------------------
// s-expressions

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Loc {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone)]
enum Sexp {
    Sym(String, Loc),
    List(Vec<Sexp>, Loc),
}

impl Sexp {
    fn loc(&self) -> Loc {
        match self {
            Sexp::Sym(_, l) | Sexp::List(_, l) => *l,
        }
    }
    fn sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s, _) => Some(s),
            _ => None,
        }
    }
    fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v, _) => Some(v),
            _ => None,
        }
    }
    /// Lowercased head symbol of a list.
    fn head(&self) -> Option<String> {
        self.list()
            .and_then(|v| v.first())
            .and_then(Sexp::sym)
            .map(str::to_ascii_lowercase)
    }
}

fn syntax(loc: Loc, message: impl Into<String>) -> PddlError {
    PddlError::Syntax {
        line: loc.line,
        column: loc.column,
        message: message.into(),
    }
}

fn semantic(loc: Loc, message: impl Into<String>) -> PddlError {
    PddlError::Semantic {
        message: message.into(),
        line: loc.line,
        column: loc.column,
    }
}

fn unsupported(loc: Loc, construct: &str) -> PddlError {
    PddlError::Unsupported {
        construct: construct.to_string(),
        line: loc.line,
        column: loc.column,
    }
}

fn read_sexp(text: &str) -> Result<Sexp, PddlError> {
    let mut stack: Vec<(Vec<Sexp>, Loc)> = Vec::new();
    let mut done: Option<Sexp> = None;
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let here = Loc { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            continue;
        }
        column += 1;
        if let Some(d) = &done {
            if !c.is_whitespace() && c != ';' {
                return Err(syntax(
                    here,
                    format!("unexpected input after form starting at {}:{}", d.loc().line, d.loc().column),
                ));
            }
        }
        match c {
            ';' => {
                for d in chars.by_ref() {
                    if d == '\n' {
                        line += 1;
                        column = 1;
                        break;
                    }
                }
            }
            '(' => stack.push((Vec::new(), here)),
            ')' => {
                let (items, loc) = stack.pop().ok_or_else(|| syntax(here, "unbalanced `)`"))?;
                let node = Sexp::List(items, loc);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => done = Some(node),
                }
            }
            c if c.is_whitespace() => {}
            _ => {
                let mut word = String::from(c);
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' || d == ';' {
                        break;
                    }
                    word.push(d);
                    column += 1;
                    chars.next();
                }
                let node = Sexp::Sym(word, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => return Err(syntax(here, "expected `(`")),
                }
            }
        }
    }
    if let Some((_, loc)) = stack.pop() {
        return Err(syntax(loc, "unclosed `(`"));
    }
    done.ok_or_else(|| syntax(Loc { line, column }, "empty input"))
}

// ---------------------------------------------------------------------------
// AST

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSchema {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl fmt::Display for AtomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    True,
    Atom(AtomSchema),
    Not(Box<Condition>),
    And(Vec<Condition>),
    Or(Vec<Condition>),
    Eq(Term, Term),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::True => write!(f, "(and)"),
            Condition::Atom(a) => write!(f, "{a}"),
            Condition::Not(c) => write!(f, "(not {c})"),
            Condition::And(cs) | Condition::Or(cs) => {
                let kw = if matches!(self, Condition::And(_)) {
                    "and"
                } else {
                    "or"
                };
                write!(f, "({kw}")?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
            Condition::Eq(a, b) => write!(f, "(= {a} {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effect {
    Add(AtomSchema),
    Del(AtomSchema),
    And(Vec<Effect>),
    When(Condition, Box<Effect>),
    OneOf(Vec<Effect>),
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Add(a) => write!(f, "{a}"),
            Effect::Del(a) => write!(f, "(not {a})"),
            Effect::And(es) | Effect::OneOf(es) => {
                let kw = if matches!(self, Effect::And(_)) {
                    "and"
                } else {
                    "oneof"
                };
                write!(f, "({kw}")?;
                for e in es {
                    write!(f, " {e}")?;
                }
                write!(f, ")")
            }
            Effect::When(c, e) => write!(f, "(when {c} {e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedName {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSchema {
    pub name: String,
    pub params: Vec<TypedName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub precondition: Condition,
    pub effect: Effect,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    /// `(type, parent)`; the implicit root is `object`.
    pub types: Vec<(String, String)>,
    pub constants: Vec<TypedName>,
    pub predicates: Vec<PredicateSchema>,
    pub actions: Vec<ActionSchema>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemGoal {
    Classical(Condition),
    Temporal(crate::logic::Formula),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub name: String,
    pub domain: String,
    pub objects: Vec<TypedName>,
    pub init: BTreeSet<Atom>,
    pub goal: Option<ProblemGoal>,
}

fn write_typed(f: &mut fmt::Formatter<'_>, items: &[TypedName], var: bool) -> fmt::Result {
    let mut first = true;
    let mut i = 0;
    while i < items.len() {
        let ty = &items[i].ty;
        let mut j = i;
        while j < items.len() && &items[j].ty == ty {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}{}", if var { "?" } else { "" }, items[j].name)?;
            j += 1;
        }
        write!(f, " - {ty}")?;
        i = j;
    }
    Ok(())
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        if !self.types.is_empty() {
            write!(f, "  (:types")?;
            for (t, p) in &self.types {
                write!(f, " {t} - {p}")?;
            }
            writeln!(f, ")")?;
        }
        if !self.constants.is_empty() {
            write!(f, "  (:constants ")?;
            write_typed(f, &self.constants, false)?;
            writeln!(f, ")")?;
        }
        write!(f, "  (:predicates")?;
        for p in &self.predicates {
            write!(f, "\n    ({}", p.name)?;
            if !p.params.is_empty() {
                write!(f, " ")?;
                write_typed(f, &p.params, true)?;
            }
            write!(f, ")")?;
        }
        writeln!(f, ")")?;
        for a in &self.actions {
            writeln!(f, "  (:action {}", a.name)?;
            write!(f, "    :parameters (")?;
            write_typed(f, &a.params, true)?;
            writeln!(f, ")")?;
            writeln!(f, "    :precondition {}", a.precondition)?;
            writeln!(f, "    :effect {})", a.effect)?;
        }
        writeln!(f, ")")
    }
}

impl fmt::Display for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        if !self.objects.is_empty() {
            write!(f, "  (:objects ")?;
            write_typed(f, &self.objects, false)?;
            writeln!(f, ")")?;
        }
        write!(f, "  (:init")?;
        for a in &self.init {
            let pa = AtomSchema {
                predicate: a.predicate.clone(),
                args: a.args.iter().cloned().map(Term::Const).collect(),
            };
            write!(f, "\n    {pa}")?;
        }
        writeln!(f, ")")?;
        if let Some(ProblemGoal::Classical(g)) = &self.goal {
            writeln!(f, "  (:goal {g})")?;
        }
        writeln!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// parsing

fn typed_list(items: &[Sexp], var: bool) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<String> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let s = items[i]
            .sym()
            .ok_or_else(|| syntax(items[i].loc(), "expected a name"))?;
        if s == "-" {
            let ty = items.get(i + 1).ok_or_else(|| syntax(items[i].loc(), "missing type"))?;
            if ty.head().as_deref() == Some("either") {
                return Err(unsupported(ty.loc(), "either"));
            }
            let ty = ty.sym().ok_or_else(|| syntax(ty.loc(), "expected a type name"))?;
            for n in pending.drain(..) {
                out.push(TypedName {
                    name: n,
                    ty: ty.to_string(),
                });
            }
            i += 2;
            continue;
        }
        let name = if var {
            s.strip_prefix('?')
                .ok_or_else(|| syntax(items[i].loc(), format!("expected a variable, found `{s}`")))?
        } else {
            s
        };
        pending.push(name.to_string());
        i += 1;
    }
    for n in pending {
        out.push(TypedName {
            name: n,
            ty: "object".into(),
        });
    }
    Ok(out)
}

struct SchemaScope<'a> {
    predicates: &'a HashMap<String, usize>,
    vars: HashSet<String>,
}

impl SchemaScope<'_> {
    fn term(&self, s: &Sexp) -> Result<Term, PddlError> {
        let w = s.sym().ok_or_else(|| syntax(s.loc(), "expected a term"))?;
        match w.strip_prefix('?') {
            Some(v) if self.vars.contains(v) => Ok(Term::Var(v.to_string())),
            Some(v) => Err(semantic(s.loc(), format!("undeclared variable ?{v}"))),
            None => Ok(Term::Const(w.to_string())),
        }
    }

    fn atom(&self, s: &Sexp) -> Result<AtomSchema, PddlError> {
        let items = s.list().ok_or_else(|| syntax(s.loc(), "expected an atom"))?;
        let head = items
            .first()
            .and_then(Sexp::sym)
            .ok_or_else(|| syntax(s.loc(), "expected a predicate name"))?;
        let arity = *self
            .predicates
            .get(head)
            .ok_or_else(|| semantic(s.loc(), format!("unknown predicate `{head}`")))?;
        if items.len() - 1 != arity {
            return Err(semantic(
                s.loc(),
                format!("predicate `{head}` expects {arity} arguments, got {}", items.len() - 1),
            ));
        }
        Ok(AtomSchema {
            predicate: head.to_string(),
            args: items[1..].iter().map(|t| self.term(t)).collect::<Result<_, _>>()?,
        })
    }

    fn condition(&self, s: &Sexp) -> Result<Condition, PddlError> {
        let items = s.list().ok_or_else(|| syntax(s.loc(), "expected a condition"))?;
        let head = match s.head() {
            Some(h) => h,
            None if items.is_empty() => return Ok(Condition::True),
            None => return Err(syntax(s.loc(), "expected a condition")),
        };
        match head.as_str() {
            "and" => Ok(Condition::And(
                items[1..].iter().map(|c| self.condition(c)).collect::<Result<_, _>>()?,
            )),
            "or" => Ok(Condition::Or(
                items[1..].iter().map(|c| self.condition(c)).collect::<Result<_, _>>()?,
            )),
            "not" => {
                if items.len() != 2 {
                    return Err(syntax(s.loc(), "`not` takes one argument"));
                }
                Ok(Condition::Not(Box::new(self.condition(&items[1])?)))
            }
            "=" => {
                if items.len() != 3 {
                    return Err(syntax(s.loc(), "`=` takes two arguments"));
                }
                Ok(Condition::Eq(self.term(&items[1])?, self.term(&items[2])?))
            }
            "imply" | "forall" | "exists" | "<" | ">" | "<=" | ">=" => {
                Err(unsupported(s.loc(), &head))
            }
            _ => Ok(Condition::Atom(self.atom(s)?)),
        }
    }

    fn effect(&self, s: &Sexp) -> Result<Effect, PddlError> {
        let items = s.list().ok_or_else(|| syntax(s.loc(), "expected an effect"))?;
        let head = match s.head() {
            Some(h) => h,
            None if items.is_empty() => return Ok(Effect::And(vec![])),
            None => return Err(syntax(s.loc(), "expected an effect")),
        };
        match head.as_str() {
            "and" => Ok(Effect::And(
                items[1..].iter().map(|e| self.effect(e)).collect::<Result<_, _>>()?,
            )),
            "oneof" => {
                if items.len() < 2 {
                    return Err(semantic(s.loc(), "`oneof` needs at least one outcome"));
                }
                Ok(Effect::OneOf(
                    items[1..].iter().map(|e| self.effect(e)).collect::<Result<_, _>>()?,
                ))
            }
            "not" => {
                if items.len() != 2 {
                    return Err(syntax(s.loc(), "`not` takes one argument"));
                }
                Ok(Effect::Del(self.atom(&items[1])?))
            }
            "when" => {
                if items.len() != 3 {
                    return Err(syntax(s.loc(), "`when` takes a condition and an effect"));
                }
                Ok(Effect::When(
                    self.condition(&items[1])?,
                    Box::new(self.effect(&items[2])?),
                ))
            }
            "forall" | "increase" | "decrease" | "assign" | "scale-up" | "scale-down"
            | "probabilistic" => Err(unsupported(s.loc(), &head)),
            _ => Ok(Effect::Add(self.atom(s)?)),
        }
    }
}

fn expect_define<'a>(root: &'a Sexp, kind: &str) -> Result<(&'a [Sexp], String), PddlError> {
    let items = root
        .list()
        .ok_or_else(|| syntax(root.loc(), "expected `(define ...)`"))?;
    if root.head().as_deref() != Some("define") {
        return Err(syntax(root.loc(), "expected `(define ...)`"));
    }
    let header = items
        .get(1)
        .ok_or_else(|| syntax(root.loc(), format!("missing ({kind} NAME)")))?;
    let h = header.list().unwrap_or(&[]);
    if header.head().as_deref() != Some(kind) || h.len() != 2 {
        return Err(syntax(header.loc(), format!("expected ({kind} NAME)")));
    }
    let name = h[1]
        .sym()
        .ok_or_else(|| syntax(h[1].loc(), "expected a name"))?
        .to_string();
    Ok((&items[2..], name))
}

pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let root = read_sexp(text)?;
    let (sections, name) = expect_define(&root, "domain")?;
    let mut domain = Domain {
        name,
        requirements: vec![],
        types: vec![],
        constants: vec![],
        predicates: vec![],
        actions: vec![],
    };
    let mut action_forms = Vec::new();
    for sec in sections {
        let items = sec.list().ok_or_else(|| syntax(sec.loc(), "expected a section"))?;
        let head = sec.head().unwrap_or_default();
        match head.as_str() {
            ":requirements" => {
                for r in &items[1..] {
                    let r = r.sym().unwrap_or_default().to_ascii_lowercase();
                    match r.as_str() {
                        ":strips" | ":typing" | ":negative-preconditions"
                        | ":disjunctive-preconditions" | ":equality" | ":conditional-effects"
                        | ":non-deterministic" => domain.requirements.push(r),
                        _ => return Err(unsupported(items[0].loc(), &r)),
                    }
                }
            }
            ":types" => {
                for t in typed_list(&items[1..], false)? {
                    domain.types.push((t.name, t.ty));
                }
            }
            ":constants" => domain.constants = typed_list(&items[1..], false)?,
            ":predicates" => {
                for p in &items[1..] {
                    let ps = p.list().ok_or_else(|| syntax(p.loc(), "expected a predicate"))?;
                    let pname = ps
                        .first()
                        .and_then(Sexp::sym)
                        .ok_or_else(|| syntax(p.loc(), "expected a predicate name"))?;
                    domain.predicates.push(PredicateSchema {
                        name: pname.to_string(),
                        params: typed_list(&ps[1..], true)?,
                    });
                }
            }
            ":action" => action_forms.push(sec),
            "" => return Err(syntax(sec.loc(), "expected a section keyword")),
            other => return Err(unsupported(sec.loc(), other)),
        }
    }
    let arities: HashMap<String, usize> = domain
        .predicates
        .iter()
        .map(|p| (p.name.clone(), p.params.len()))
        .collect();
    for form in action_forms {
        domain.actions.push(parse_action(form, &arities)?);
    }
    Ok(domain)
}

fn parse_action(form: &Sexp, arities: &HashMap<String, usize>) -> Result<ActionSchema, PddlError> {
    let items = form.list().unwrap_or(&[]);
    let name = items
        .get(1)
        .and_then(Sexp::sym)
        .ok_or_else(|| syntax(form.loc(), "expected an action name"))?
        .to_string();
    let mut params = Vec::new();
    let mut pre = None;
    let mut eff = None;
    let mut i = 2;
    while i < items.len() {
        let key = items[i]
            .sym()
            .ok_or_else(|| syntax(items[i].loc(), "expected a keyword"))?
            .to_ascii_lowercase();
        let val = items
            .get(i + 1)
            .ok_or_else(|| syntax(items[i].loc(), format!("missing value for {key}")))?;
        match key.as_str() {
            ":parameters" => {
                params = typed_list(val.list().ok_or_else(|| syntax(val.loc(), "expected a list"))?, true)?
            }
            ":precondition" => pre = Some(val),
            ":effect" => eff = Some(val),
            other => return Err(unsupported(items[i].loc(), other)),
        }
        i += 2;
    }
    let scope = SchemaScope {
        predicates: arities,
        vars: params.iter().map(|p| p.name.clone()).collect(),
    };
    Ok(ActionSchema {
        name,
        precondition: pre.map(|p| scope.condition(p)).transpose()?.unwrap_or(Condition::True),
        effect: eff.map(|e| scope.effect(e)).transpose()?.unwrap_or(Effect::And(vec![])),
        params,
    })
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<ProblemInstance, PddlError> {
    let root = read_sexp(text)?;
    let (sections, name) = expect_define(&root, "problem")?;
    let arities: HashMap<String, usize> = domain
        .predicates
        .iter()
        .map(|p| (p.name.clone(), p.params.len()))
        .collect();
    let scope = SchemaScope {
        predicates: &arities,
        vars: HashSet::new(),
    };
    let mut problem = ProblemInstance {
        name,
        domain: String::new(),
        objects: vec![],
        init: BTreeSet::new(),
        goal: None,
    };
    for sec in sections {
        let items = sec.list().ok_or_else(|| syntax(sec.loc(), "expected a section"))?;
        match sec.head().unwrap_or_default().as_str() {
            ":domain" => {
                problem.domain = items
                    .get(1)
                    .and_then(Sexp::sym)
                    .unwrap_or_default()
                    .to_string()
            }
            ":objects" => problem.objects = typed_list(&items[1..], false)?,
            ":init" => {
                for a in &items[1..] {
                    let at = scope.atom(a)?;
                    problem.init.insert(Atom {
                        predicate: at.predicate,
                        args: at.args.iter().map(Term::to_string).collect(),
                    });
                }
            }
            ":goal" => {
                let g = items.get(1).ok_or_else(|| syntax(sec.loc(), "empty goal"))?;
                problem.goal = Some(ProblemGoal::Classical(scope.condition(g)?));
            }
            other => return Err(unsupported(sec.loc(), other)),
        }
    }
    if !problem.domain.is_empty() && problem.domain != domain.name {
        return Err(semantic(
            root.loc(),
            format!("problem is for domain `{}`, not `{}`", problem.domain, domain.name),
        ));
    }
    check_types(domain, &problem)?;
    Ok(problem)
}

fn type_ancestors(domain: &Domain, ty: &str) -> Vec<String> {
    let parents: HashMap<&str, &str> = domain
        .types
        .iter()
        .map(|(t, p)| (t.as_str(), p.as_str()))
        .collect();
    let mut out = vec![ty.to_string()];
    let mut cur = ty;
    while let Some(&p) = parents.get(cur) {
        if out.iter().any(|x| x == p) {
            break;
        }
        out.push(p.to_string());
        cur = p;
    }
    out.push("object".into());
    out
}

/// All objects (constants first) with their declared type.
fn all_objects(domain: &Domain, problem: &ProblemInstance) -> Vec<TypedName> {
    let mut out: Vec<TypedName> = domain.constants.clone();
    for o in &problem.objects {
        if !out.iter().any(|c| c.name == o.name) {
            out.push(o.clone());
        }
    }
    out
}

fn check_types(domain: &Domain, problem: &ProblemInstance) -> Result<(), PddlError> {
    let objects = all_objects(domain, problem);
    let ty_of: HashMap<&str, &str> = objects.iter().map(|o| (o.name.as_str(), o.ty.as_str())).collect();
    let here = Loc { line: 1, column: 1 };
    for a in &problem.init {
        let schema = domain
            .predicates
            .iter()
            .find(|p| p.name == a.predicate)
            .ok_or_else(|| semantic(here, format!("unknown predicate `{}`", a.predicate)))?;
        for (arg, param) in a.args.iter().zip(&schema.params) {
            let ty = ty_of
                .get(arg.as_str())
                .ok_or_else(|| semantic(here, format!("unknown object `{arg}` in {a}")))?;
            if !type_ancestors(domain, ty).contains(&param.ty) {
                return Err(semantic(
                    here,
                    format!("object `{arg}` of type `{ty}` used as `{}` in {a}", param.ty),
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// explicit model

/// A set of true fluents, stored as a bitset over fluent indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct State {
    words: Box<[u64]>,
}

impl State {
    pub fn empty(num_fluents: usize) -> Self {
        State {
            words: vec![0; num_fluents.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn from_indices(num_fluents: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = State::empty(num_fluents);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }

    /// Restriction to the first `n` fluents.
    pub fn project(&self, n: usize) -> State {
        State::from_indices(n, self.iter().take_while(|&i| i < n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundCondition {
    True,
    False,
    Fluent(usize),
    Not(Box<GroundCondition>),
    And(Vec<GroundCondition>),
    Or(Vec<GroundCondition>),
}

impl GroundCondition {
    pub fn holds(&self, s: &State) -> bool {
        match self {
            GroundCondition::True => true,
            GroundCondition::False => false,
            GroundCondition::Fluent(i) => s.contains(*i),
            GroundCondition::Not(c) => !c.holds(s),
            GroundCondition::And(cs) => cs.iter().all(|c| c.holds(s)),
            GroundCondition::Or(cs) => cs.iter().any(|c| c.holds(s)),
        }
    }

    fn simplify(self) -> GroundCondition {
        use GroundCondition as G;
        match self {
            G::Not(c) => match c.simplify() {
                G::True => G::False,
                G::False => G::True,
                G::Not(inner) => *inner,
                other => G::Not(Box::new(other)),
            },
            G::And(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    match c.simplify() {
                        G::True => {}
                        G::False => return G::False,
                        G::And(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => G::True,
                    1 => out.pop().unwrap(),
                    _ => G::And(out),
                }
            }
            G::Or(cs) => {
                let mut out = Vec::new();
                for c in cs {
                    match c.simplify() {
                        G::False => {}
                        G::True => return G::True,
                        G::Or(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => G::False,
                    1 => out.pop().unwrap(),
                    _ => G::Or(out),
                }
            }
            other => other,
        }
    }

    fn remap(&self, map: &[usize]) -> GroundCondition {
        use GroundCondition as G;
        match self {
            G::True => G::True,
            G::False => G::False,
            G::Fluent(i) => G::Fluent(map[*i]),
            G::Not(c) => G::Not(Box::new(c.remap(map))),
            G::And(cs) => G::And(cs.iter().map(|c| c.remap(map)).collect()),
            G::Or(cs) => G::Or(cs.iter().map(|c| c.remap(map)).collect()),
        }
    }

    /// Literals of a top-level conjunction, or `None` for other shapes.
    pub fn as_literals(&self) -> Option<Vec<(usize, bool)>> {
        use GroundCondition as G;
        match self {
            G::True => Some(vec![]),
            G::Fluent(i) => Some(vec![(*i, true)]),
            G::Not(c) => match **c {
                G::Fluent(i) => Some(vec![(i, false)]),
                _ => None,
            },
            G::And(cs) => {
                let mut out = vec![];
                for c in cs {
                    out.extend(c.as_literals()?);
                }
                Some(out)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalEffect {
    pub condition: GroundCondition,
    pub add: Vec<usize>,
    pub del: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Outcome {
    pub effects: Vec<ConditionalEffect>,
}

impl Outcome {
    pub fn apply(&self, s: &State) -> State {
        let active: Vec<&ConditionalEffect> = self
            .effects
            .iter()
            .filter(|e| e.condition.holds(s))
            .collect();
        let mut next = s.clone();
        for e in &active {
            for &d in &e.del {
                next.remove(d);
            }
        }
        for e in &active {
            for &a in &e.add {
                next.insert(a);
            }
        }
        next
    }
}

/// Identity of a ground action: schema name plus object arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionLabel {
    pub name: String,
    pub args: Vec<String>,
}

impl ActionLabel {
    pub fn new(name: &str, args: &[&str]) -> Self {
        ActionLabel {
            name: name.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

impl fmt::Display for ActionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for ActionLabel {
    type Err = PddlError;

    /// Accepts `(move 11 21)` or `move 11 21`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t);
        let mut words = inner.split_whitespace();
        let name = words.next().ok_or_else(|| PddlError::UnknownAction(s.to_string()))?;
        Ok(ActionLabel {
            name: name.to_string(),
            args: words.map(str::to_string).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub label: ActionLabel,
    pub precondition: GroundCondition,
    pub outcomes: Vec<Outcome>,
}

impl GroundAction {
    pub fn is_deterministic(&self) -> bool {
        self.outcomes.len() == 1
    }
}

/// Explicit FOND model: indexed fluents, ground actions with their
/// preconditions and outcome sets, and the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedFond {
    pub fluents: Vec<Atom>,
    pub actions: Vec<GroundAction>,
    pub initial: State,
    pub goal: Option<GroundCondition>,
    pub objects: Vec<TypedName>,
    fluent_index: HashMap<Atom, usize>,
    action_index: HashMap<ActionLabel, usize>,
}

impl GroundedFond {
    pub fn new(
        fluents: Vec<Atom>,
        actions: Vec<GroundAction>,
        initial: State,
        goal: Option<GroundCondition>,
        objects: Vec<TypedName>,
    ) -> Self {
        let fluent_index = fluents.iter().cloned().zip(0..).collect();
        let action_index = actions.iter().map(|a| a.label.clone()).zip(0..).collect();
        GroundedFond {
            fluents,
            actions,
            initial,
            goal,
            objects,
            fluent_index,
            action_index,
        }
    }

    pub fn num_fluents(&self) -> usize {
        self.fluents.len()
    }

    pub fn fluent(&self, a: &Atom) -> Option<usize> {
        self.fluent_index.get(a).copied()
    }

    pub fn action(&self, label: &ActionLabel) -> Option<usize> {
        self.action_index.get(label).copied()
    }

    pub fn is_applicable(&self, s: &State, a: usize) -> bool {
        self.actions[a].precondition.holds(s)
    }

    /// α(s), in action index order.
    pub fn applicable(&self, s: &State) -> Vec<usize> {
        (0..self.actions.len())
            .filter(|&a| self.is_applicable(s, a))
            .collect()
    }

    /// tr(s, a): one state per outcome, duplicates merged in outcome order.
    pub fn successors(&self, s: &State, a: usize) -> Result<Vec<State>, PddlError> {
        if !self.is_applicable(s, a) {
            return Err(PddlError::Inapplicable {
                action: self.actions[a].label.to_string(),
            });
        }
        Ok(self.successors_unchecked(s, a))
    }

    pub(crate) fn successors_unchecked(&self, s: &State, a: usize) -> Vec<State> {
        let mut out: Vec<State> = Vec::with_capacity(self.actions[a].outcomes.len());
        for o in &self.actions[a].outcomes {
            let n = o.apply(s);
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }

    pub fn state_atoms(&self, s: &State) -> BTreeSet<Atom> {
        s.iter().map(|i| self.fluents[i].clone()).collect()
    }

    pub fn state_from_atoms<'a>(
        &self,
        atoms: impl IntoIterator<Item = &'a Atom>,
    ) -> Result<State, PddlError> {
        let mut s = State::empty(self.num_fluents());
        for a in atoms {
            let i = self
                .fluent(a)
                .ok_or_else(|| PddlError::UnknownAtom(a.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    /// Fluents of `s` in PDDL atom syntax, space separated.
    pub fn format_state(&self, s: &State) -> String {
        s.iter()
            .map(|i| {
                let a = &self.fluents[i];
                if a.args.is_empty() {
                    format!("({})", a.predicate)
                } else {
                    a.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Inverse of [`GroundedFond::format_state`].
    pub fn parse_state(&self, text: &str) -> Result<State, PddlError> {
        let mut atoms = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let start = rest
                .find('(')
                .ok_or_else(|| PddlError::UnknownAtom(rest.to_string()))?;
            let end = rest[start..]
                .find(')')
                .ok_or_else(|| PddlError::UnknownAtom(rest.to_string()))?
                + start;
            let mut words = rest[start + 1..end].split_whitespace();
            let predicate = words.next().unwrap_or_default().to_string();
            atoms.push(Atom {
                predicate,
                args: words.map(str::to_string).collect(),
            });
            rest = rest[end + 1..].trim();
        }
        self.state_from_atoms(atoms.iter())
    }
}

// ---------------------------------------------------------------------------
// grounding

#[derive(Debug, Clone, Copy)]
pub struct GroundingOptions {
    pub max_actions: usize,
}

impl Default for GroundingOptions {
    fn default() -> Self {
        GroundingOptions {
            max_actions: 1_000_000,
        }
    }
}

struct Grounder<'a> {
    init: &'a BTreeSet<Atom>,
    statics: HashSet<&'a str>,
    fluent_ids: HashMap<Atom, usize>,
    fluents: Vec<Atom>,
}

impl Grounder<'_> {
    fn intern(&mut self, a: Atom) -> usize {
        if let Some(&i) = self.fluent_ids.get(&a) {
            return i;
        }
        let i = self.fluents.len();
        self.fluent_ids.insert(a.clone(), i);
        self.fluents.push(a);
        i
    }

    fn ground_atom(a: &AtomSchema, binding: &HashMap<&str, &str>) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => binding[v.as_str()].to_string(),
                    Term::Const(c) => c.clone(),
                })
                .collect(),
        }
    }

    fn term<'b>(t: &'b Term, binding: &HashMap<&str, &'b str>) -> &'b str {
        match t {
            Term::Var(v) => binding[v.as_str()],
            Term::Const(c) => c,
        }
    }

    fn condition(&mut self, c: &Condition, binding: &HashMap<&str, &str>) -> GroundCondition {
        use GroundCondition as G;
        match c {
            Condition::True => G::True,
            Condition::Atom(a) => {
                let ga = Self::ground_atom(a, binding);
                if self.statics.contains(a.predicate.as_str()) {
                    if self.init.contains(&ga) {
                        G::True
                    } else {
                        G::False
                    }
                } else {
                    G::Fluent(self.intern(ga))
                }
            }
            Condition::Not(inner) => G::Not(Box::new(self.condition(inner, binding))),
            Condition::And(cs) => G::And(cs.iter().map(|c| self.condition(c, binding)).collect()),
            Condition::Or(cs) => G::Or(cs.iter().map(|c| self.condition(c, binding)).collect()),
            Condition::Eq(a, b) => {
                // binding lifetimes differ from the term's; compare by value
                let x = match a {
                    Term::Var(v) => binding[v.as_str()].to_string(),
                    Term::Const(s) => s.clone(),
                };
                let y = match b {
                    Term::Var(v) => binding[v.as_str()].to_string(),
                    Term::Const(s) => s.clone(),
                };
                if x == y {
                    G::True
                } else {
                    G::False
                }
            }
        }
        .simplify()
    }

    /// Flattens an effect tree into its outcomes.
    fn outcomes(&mut self, e: &Effect, binding: &HashMap<&str, &str>) -> Vec<Outcome> {
        match e {
            Effect::Add(a) => {
                let i = self.intern(Self::ground_atom(a, binding));
                vec![Outcome {
                    effects: vec![ConditionalEffect {
                        condition: GroundCondition::True,
                        add: vec![i],
                        del: vec![],
                    }],
                }]
            }
            Effect::Del(a) => {
                let i = self.intern(Self::ground_atom(a, binding));
                vec![Outcome {
                    effects: vec![ConditionalEffect {
                        condition: GroundCondition::True,
                        add: vec![],
                        del: vec![i],
                    }],
                }]
            }
            Effect::And(es) => {
                let mut acc = vec![Outcome::default()];
                for child in es {
                    let branches = self.outcomes(child, binding);
                    let mut next = Vec::with_capacity(acc.len() * branches.len());
                    for a in &acc {
                        for b in &branches {
                            let mut o = a.clone();
                            o.effects.extend(b.effects.iter().cloned());
                            next.push(o);
                        }
                    }
                    acc = next;
                }
                acc
            }
            Effect::OneOf(es) => es.iter().flat_map(|c| self.outcomes(c, binding)).collect(),
            Effect::When(c, body) => {
                let cond = self.condition(c, binding);
                self.outcomes(body, binding)
                    .into_iter()
                    .map(|o| Outcome {
                        effects: o
                            .effects
                            .into_iter()
                            .filter_map(|ce| {
                                let condition =
                                    GroundCondition::And(vec![cond.clone(), ce.condition])
                                        .simplify();
                                (condition != GroundCondition::False).then_some(
                                    ConditionalEffect {
                                        condition,
                                        ..ce
                                    },
                                )
                            })
                            .collect(),
                    })
                    .collect()
            }
        }
    }
}

fn effect_predicates<'a>(e: &'a Effect, out: &mut HashSet<&'a str>) {
    match e {
        Effect::Add(a) | Effect::Del(a) => {
            out.insert(&a.predicate);
        }
        Effect::And(es) | Effect::OneOf(es) => es.iter().for_each(|x| effect_predicates(x, out)),
        Effect::When(_, body) => effect_predicates(body, out),
    }
}

/// Static literals of a precondition's top-level conjunction.
fn static_literals<'a>(c: &'a Condition, statics: &HashSet<&str>, out: &mut Vec<(&'a AtomSchema, bool)>) {
    match c {
        Condition::Atom(a) if statics.contains(a.predicate.as_str()) => out.push((a, true)),
        Condition::Not(inner) => {
            if let Condition::Atom(a) = &**inner {
                if statics.contains(a.predicate.as_str()) {
                    out.push((a, false));
                }
            }
        }
        Condition::And(cs) => cs.iter().for_each(|x| static_literals(x, statics, out)),
        _ => {}
    }
}

pub fn ground(domain: &Domain, problem: &ProblemInstance) -> Result<GroundedFond, PddlError> {
    ground_with(domain, problem, &GroundingOptions::default())
}

/// Instantiates every action schema over the typed objects. Bindings that
/// violate static preconditions in the initial state are pruned.
pub fn ground_with(
    domain: &Domain,
    problem: &ProblemInstance,
    opts: &GroundingOptions,
) -> Result<GroundedFond, PddlError> {
    let objects = all_objects(domain, problem);
    let mut dynamic = HashSet::new();
    for a in &domain.actions {
        effect_predicates(&a.effect, &mut dynamic);
    }
    let statics: HashSet<&str> = domain
        .predicates
        .iter()
        .map(|p| p.name.as_str())
        .filter(|p| !dynamic.contains(p))
        .collect();
    let mut g = Grounder {
        init: &problem.init,
        statics: statics.clone(),
        fluent_ids: HashMap::new(),
        fluents: Vec::new(),
    };
    for a in &problem.init {
        g.intern(a.clone());
    }

    let mut actions = Vec::new();
    for schema in &domain.actions {
        let candidates: Vec<Vec<&str>> = schema
            .params
            .iter()
            .map(|p| {
                objects
                    .iter()
                    .filter(|o| type_ancestors(domain, &o.ty).contains(&p.ty))
                    .map(|o| o.name.as_str())
                    .collect()
            })
            .collect();
        let mut lits = Vec::new();
        static_literals(&schema.precondition, &statics, &mut lits);
        let mut binding: HashMap<&str, &str> = HashMap::new();
        let mut bindings = Vec::new();
        enumerate_bindings(
            schema,
            &candidates,
            &lits,
            problem,
            0,
            &mut binding,
            &mut bindings,
            opts.max_actions,
        )?;
        for b in bindings {
            let precondition = g.condition(&schema.precondition, &b);
            if precondition == GroundCondition::False {
                continue;
            }
            let outcomes = g.outcomes(&schema.effect, &b);
            actions.push(GroundAction {
                label: ActionLabel {
                    name: schema.name.clone(),
                    args: schema.params.iter().map(|p| b[p.name.as_str()].to_string()).collect(),
                },
                precondition,
                outcomes,
            });
            if actions.len() > opts.max_actions {
                return Err(PddlError::GroundingCap {
                    cap: opts.max_actions,
                });
            }
        }
    }

    let goal = match &problem.goal {
        Some(ProblemGoal::Classical(c)) => Some(g.condition(c, &HashMap::new())),
        _ => None,
    };

    // canonical fluent order
    let mut order: Vec<usize> = (0..g.fluents.len()).collect();
    order.sort_by(|&a, &b| g.fluents[a].cmp(&g.fluents[b]));
    let mut remap = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let fluents: Vec<Atom> = order.iter().map(|&i| g.fluents[i].clone()).collect();
    let n = fluents.len();
    let remap_effects = |o: &Outcome| Outcome {
        effects: o
            .effects
            .iter()
            .map(|e| ConditionalEffect {
                condition: e.condition.remap(&remap),
                add: e.add.iter().map(|&i| remap[i]).collect(),
                del: e.del.iter().map(|&i| remap[i]).collect(),
            })
            .collect(),
    };
    let actions = actions
        .into_iter()
        .map(|a| GroundAction {
            precondition: a.precondition.remap(&remap),
            outcomes: a.outcomes.iter().map(remap_effects).collect(),
            label: a.label,
        })
        .collect();
    let initial = State::from_indices(n, problem.init.iter().map(|a| remap[g.fluent_ids[a]]));
    let goal = goal.map(|c| c.remap(&remap));
    Ok(GroundedFond::new(fluents, actions, initial, goal, objects))
}

#[allow(clippy::too_many_arguments)]
fn enumerate_bindings<'a>(
    schema: &'a ActionSchema,
    candidates: &[Vec<&'a str>],
    lits: &[(&AtomSchema, bool)],
    problem: &ProblemInstance,
    depth: usize,
    binding: &mut HashMap<&'a str, &'a str>,
    out: &mut Vec<HashMap<&'a str, &'a str>>,
    cap: usize,
) -> Result<(), PddlError> {
    // check static literals that just became fully bound
    for (a, positive) in lits {
        let bound = a.args.iter().all(|t| match t {
            Term::Var(v) => binding.contains_key(v.as_str()),
            Term::Const(_) => true,
        });
        let newly = depth > 0
            && a.args.iter().any(|t| matches!(t, Term::Var(v) if v == &schema.params[depth - 1].name));
        if bound && (newly || depth == 0) {
            let ga = Atom {
                predicate: a.predicate.clone(),
                args: a.args.iter().map(|t| Grounder::term(t, binding).to_string()).collect(),
            };
            if problem.init.contains(&ga) != *positive {
                return Ok(());
            }
        }
    }
    if depth == schema.params.len() {
        out.push(binding.clone());
        if out.len() > cap {
            return Err(PddlError::GroundingCap { cap });
        }
        return Ok(());
    }
    let name = schema.params[depth].name.as_str();
    for &o in &candidates[depth] {
        binding.insert(name, o);
        enumerate_bindings(schema, candidates, lits, problem, depth + 1, binding, out, cap)?;
    }
    binding.remove(name);
    Ok(())
}
