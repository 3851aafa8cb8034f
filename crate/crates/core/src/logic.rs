//! LTLf and PLTLf formulas over ground atoms: AST, parser, printer, and
//! finite-trace semantics.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := implication
//! implication := disjunction [ "->" implication ]
//! disjunction := conjunction [ "|" disjunction ]
//! conjunction := temporal [ "&" conjunction ]
//! temporal := unary [ ("U" | "S" | "R") temporal ]
//! unary := ("!" | "X" | "N" | "F" | "G" | "Y" | "O" | "H") unary
//!        | "true" | "false" | atom | "(" formula ")"
//! atom := ident                      -- pred, or pred_obj1_obj2
//!       | "(" ident ident* ")"       -- (pred obj1 obj2)
//! ```
//!
//! Binary operators are right-associative. `a -> b` is read as `!a | b`.
//! `R` (release) is accepted so that negation normal forms print and parse.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A ground atom `predicate(arg1, ..., argn)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new<S: Into<String>>(predicate: S, args: &[&str]) -> Self {
        Atom {
            predicate: predicate.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    pub fn prop<S: Into<String>>(predicate: S) -> Self {
        Atom {
            predicate: predicate.into(),
            args: Vec::new(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{}", self.predicate)
        } else {
            write!(f, "({}", self.predicate)?;
            for a in &self.args {
                write!(f, " {a}")?;
            }
            write!(f, ")")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dialect {
    Ltlf,
    Pltlf,
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dialect::Ltlf => write!(f, "LTLf"),
            Dialect::Pltlf => write!(f, "PLTLf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
    Yesterday(Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Once(Box<Formula>),
    Historically(Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }
    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }
    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }
    pub fn weak_next(f: Formula) -> Self {
        Formula::WeakNext(Box::new(f))
    }
    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::Until(Box::new(l), Box::new(r))
    }
    pub fn release(l: Formula, r: Formula) -> Self {
        Formula::Release(Box::new(l), Box::new(r))
    }
    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }
    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }
    pub fn yesterday(f: Formula) -> Self {
        Formula::Yesterday(Box::new(f))
    }
    pub fn since(l: Formula, r: Formula) -> Self {
        Formula::Since(Box::new(l), Box::new(r))
    }
    pub fn once(f: Formula) -> Self {
        Formula::Once(Box::new(f))
    }
    pub fn historically(f: Formula) -> Self {
        Formula::Historically(Box::new(f))
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) | Yesterday(a)
            | Once(a) | Historically(a) => vec![a],
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) | Since(a, b) => vec![a, b],
        }
    }

    /// Operator symbol in the concrete syntax, `None` for leaves.
    pub fn operator(&self) -> Option<&'static str> {
        use Formula::*;
        Some(match self {
            True | False | Atom(_) => return None,
            Not(_) => "!",
            And(..) => "&",
            Or(..) => "|",
            Next(_) => "X",
            WeakNext(_) => "N",
            Until(..) => "U",
            Release(..) => "R",
            Eventually(_) => "F",
            Always(_) => "G",
            Yesterday(_) => "Y",
            Since(..) => "S",
            Once(_) => "O",
            Historically(_) => "H",
        })
    }

    fn is_future_op(&self) -> bool {
        use Formula::*;
        matches!(
            self,
            Next(_) | WeakNext(_) | Until(..) | Release(..) | Eventually(_) | Always(_)
        )
    }

    fn is_past_op(&self) -> bool {
        use Formula::*;
        matches!(self, Yesterday(_) | Since(..) | Once(_) | Historically(_))
    }

    fn first_matching(&self, pred: &dyn Fn(&Formula) -> bool) -> Option<&Formula> {
        if pred(self) {
            return Some(self);
        }
        self.children()
            .into_iter()
            .find_map(|c| c.first_matching(pred))
    }

    /// Dialect inferred from the temporal operators used. Pure propositional
    /// formulas are LTLf. Fails if future and past operators are mixed.
    pub fn dialect(&self) -> Result<Dialect, MixedDialect> {
        let fut = self.first_matching(&Formula::is_future_op);
        let past = self.first_matching(&Formula::is_past_op);
        match (fut, past) {
            (Some(f), Some(p)) => Err(MixedDialect {
                future: f.operator().unwrap_or("?"),
                past: p.operator().unwrap_or("?"),
            }),
            (None, Some(_)) => Ok(Dialect::Pltlf),
            _ => Ok(Dialect::Ltlf),
        }
    }

    /// Operator nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Atoms in order of first occurrence (left to right).
    pub fn atoms_in_order(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_ordered(&mut out);
        out
    }

    fn collect_ordered(&self, out: &mut Vec<Atom>) {
        if let Formula::Atom(a) = self {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        for c in self.children() {
            c.collect_ordered(out);
        }
    }

    /// Rewrites every atom through `f`.
    pub fn map_atoms(&self, f: &dyn Fn(&Atom) -> Atom) -> Formula {
        use Formula::*;
        let m = |x: &Formula| Box::new(x.map_atoms(f));
        match self {
            True => True,
            False => False,
            Atom(a) => Atom(f(a)),
            Not(a) => Not(m(a)),
            And(a, b) => And(m(a), m(b)),
            Or(a, b) => Or(m(a), m(b)),
            Next(a) => Next(m(a)),
            WeakNext(a) => WeakNext(m(a)),
            Until(a, b) => Until(m(a), m(b)),
            Release(a, b) => Release(m(a), m(b)),
            Eventually(a) => Eventually(m(a)),
            Always(a) => Always(m(a)),
            Yesterday(a) => Yesterday(m(a)),
            Since(a, b) => Since(m(a), m(b)),
            Once(a) => Once(m(a)),
            Historically(a) => Historically(m(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula mixes future operator `{future}` with past operator `{past}`")]
pub struct MixedDialect {
    pub future: &'static str,
    pub past: &'static str,
}

/// Precedence levels used by the printer and parser.
fn precedence(f: &Formula) -> u8 {
    use Formula::*;
    match f {
        Or(..) => 1,
        And(..) => 2,
        Until(..) | Release(..) | Since(..) => 3,
        _ => 4,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(a) | Next(a) | WeakNext(a) | Eventually(a) | Always(a) | Yesterday(a)
            | Once(a) | Historically(a) => {
                let op = self.operator().unwrap_or_default();
                if precedence(a) < 4 {
                    write!(f, "{op}({a})")
                } else if op == "!" {
                    write!(f, "{op}{a}")
                } else {
                    write!(f, "{op} {a}")
                }
            }
            And(a, b) | Or(a, b) | Until(a, b) | Release(a, b) | Since(a, b) => {
                let op = self.operator().unwrap_or_default();
                let p = precedence(self);
                // left operand needs parentheses when its precedence is not
                // strictly higher (right associativity)
                if precedence(a) <= p {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " {op} ")?;
                if precedence(b) < p {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// A finite trace: one set of true atoms per instant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub steps: Vec<BTreeSet<Atom>>,
}

impl Trace {
    pub fn new(steps: Vec<BTreeSet<Atom>>) -> Self {
        Trace { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn holds_atom(&self, i: usize, a: &Atom) -> bool {
        self.steps.get(i).is_some_and(|s| s.contains(a))
    }
}

impl FromIterator<BTreeSet<Atom>> for Trace {
    fn from_iter<I: IntoIterator<Item = BTreeSet<Atom>>>(iter: I) -> Self {
        Trace {
            steps: iter.into_iter().collect(),
        }
    }
}

/// `trace, i |= f`. Positions at or past the end of the trace make atoms,
/// strong next and until false; everything else follows by duality.
pub fn holds_at(f: &Formula, t: &Trace, i: usize) -> bool {
    use Formula::*;
    let n = t.len();
    match f {
        True => true,
        False => false,
        Atom(a) => t.holds_atom(i, a),
        Not(a) => !holds_at(a, t, i),
        And(a, b) => holds_at(a, t, i) && holds_at(b, t, i),
        Or(a, b) => holds_at(a, t, i) || holds_at(b, t, i),
        Next(a) => i + 1 < n && holds_at(a, t, i + 1),
        WeakNext(a) => !(i + 1 < n && !holds_at(a, t, i + 1)),
        Until(a, b) => (i..n).any(|j| holds_at(b, t, j) && (i..j).all(|k| holds_at(a, t, k))),
        Release(a, b) => {
            !(i..n).any(|j| !holds_at(b, t, j) && (i..j).all(|k| !holds_at(a, t, k)))
        }
        Eventually(a) => (i..n).any(|j| holds_at(a, t, j)),
        Always(a) => (i..n).all(|j| holds_at(a, t, j)),
        Yesterday(a) => i >= 1 && holds_at(a, t, i - 1),
        Since(a, b) => {
            (0..=i).any(|k| holds_at(b, t, k) && (k + 1..=i).all(|j| holds_at(a, t, j)))
        }
        Once(a) => (0..=i).any(|k| holds_at(a, t, k)),
        Historically(a) => (0..=i).all(|k| holds_at(a, t, k)),
    }
}

/// Truth of `f` on `t` under the given dialect's convention: LTLf at the
/// first position, PLTLf at the last. On the empty trace PLTLf holds only
/// for the literal `true`.
pub fn evaluate_as(f: &Formula, t: &Trace, dialect: Dialect) -> bool {
    match dialect {
        Dialect::Ltlf => holds_at(f, t, 0),
        Dialect::Pltlf => {
            if t.is_empty() {
                matches!(f, Formula::True)
            } else {
                holds_at(f, t, t.len() - 1)
            }
        }
    }
}

/// Truth of `f` on `t` under its inferred dialect. Mixed formulas (which the
/// parser rejects) are evaluated as LTLf.
pub fn evaluate(f: &Formula, t: &Trace) -> bool {
    evaluate_as(f, t, f.dialect().unwrap_or(Dialect::Ltlf))
}

/// Negation normal form. Negation is pushed to atoms through the Boolean and
/// future operators (introducing weak next and release); for past operators
/// it moves through once/historically and stays above yesterday and since.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, neg: bool) -> Formula {
    use Formula::*;
    match (f, neg) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(a), false) => Atom(a.clone()),
        (Atom(a), true) => Formula::not(Atom(a.clone())),
        (Not(a), _) => nnf(a, !neg),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Next(a), false) => Formula::next(nnf(a, false)),
        (Next(a), true) => Formula::weak_next(nnf(a, true)),
        (WeakNext(a), false) => Formula::weak_next(nnf(a, false)),
        (WeakNext(a), true) => Formula::next(nnf(a, true)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(a), false) => Formula::eventually(nnf(a, false)),
        (Eventually(a), true) => Formula::always(nnf(a, true)),
        (Always(a), false) => Formula::always(nnf(a, false)),
        (Always(a), true) => Formula::eventually(nnf(a, true)),
        (Once(a), false) => Formula::once(nnf(a, false)),
        (Once(a), true) => Formula::historically(nnf(a, true)),
        (Historically(a), false) => Formula::historically(nnf(a, false)),
        (Historically(a), true) => Formula::once(nnf(a, true)),
        (Yesterday(a), false) => Formula::yesterday(nnf(a, false)),
        (Since(a, b), false) => Formula::since(nnf(a, false), nnf(b, false)),
        (Yesterday(_) | Since(..), true) => Formula::not(nnf(f, false)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    MixedDialect(#[from] MixedDialect),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Bang,
    Amp,
    Bar,
    Arrow,
    End,
}

const KEYWORDS: &[&str] = &[
    "true", "false", "X", "N", "F", "G", "U", "R", "Y", "S", "O", "H",
];

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '(' => {
                toks.push((Tok::LParen, l0, c0));
                advance(1, &mut i)
            }
            ')' => {
                toks.push((Tok::RParen, l0, c0));
                advance(1, &mut i)
            }
            '!' | '~' => {
                toks.push((Tok::Bang, l0, c0));
                advance(1, &mut i)
            }
            '&' => {
                let n = if chars.get(i + 1) == Some(&'&') { 2 } else { 1 };
                toks.push((Tok::Amp, l0, c0));
                advance(n, &mut i)
            }
            '|' => {
                let n = if chars.get(i + 1) == Some(&'|') { 2 } else { 1 };
                toks.push((Tok::Bar, l0, c0));
                advance(n, &mut i)
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push((Tok::Arrow, l0, c0));
                advance(2, &mut i)
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() {
                    let d = chars[j];
                    // a hyphen followed by '>' starts an implication
                    if d == '-' && chars.get(j + 1) == Some(&'>') {
                        break;
                    }
                    if !is_ident_char(d) {
                        break;
                    }
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                toks.push((Tok::Ident(word), l0, c0));
                advance(j - i, &mut i)
            }
            other => {
                return Err(FormulaError::Syntax {
                    line: l0,
                    column: c0,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    toks.push((Tok::End, line, col));
    Ok(toks)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }
    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].0
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn error(&self, message: impl Into<String>) -> FormulaError {
        let (_, line, column) = self.toks[self.pos];
        FormulaError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
    fn expect_rparen(&mut self) -> Result<(), FormulaError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error("expected `)`")),
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.conjunction()?;
        if *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.temporal()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.unary()?;
        if let Tok::Ident(w) = self.peek() {
            let ctor: Option<fn(Formula, Formula) -> Formula> = match w.as_str() {
                "U" => Some(Formula::until),
                "S" => Some(Formula::since),
                "R" => Some(Formula::release),
                _ => None,
            };
            if let Some(ctor) = ctor {
                self.bump();
                let rhs = self.temporal()?;
                return Ok(ctor(lhs, rhs));
            }
            return Err(self.error(format!("unexpected `{w}`")));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(w) => {
                let ctor: Option<fn(Formula) -> Formula> = match w.as_str() {
                    "X" => Some(Formula::next),
                    "N" => Some(Formula::weak_next),
                    "F" => Some(Formula::eventually),
                    "G" => Some(Formula::always),
                    "Y" => Some(Formula::yesterday),
                    "O" => Some(Formula::once),
                    "H" => Some(Formula::historically),
                    _ => None,
                };
                if let Some(ctor) = ctor {
                    self.bump();
                    return Ok(ctor(self.unary()?));
                }
                match w.as_str() {
                    "true" => {
                        self.bump();
                        Ok(Formula::True)
                    }
                    "false" => {
                        self.bump();
                        Ok(Formula::False)
                    }
                    "U" | "S" | "R" => Err(self.error(format!("missing left operand of `{w}`"))),
                    _ => {
                        self.bump();
                        Ok(Formula::Atom(underscore_atom(&w)))
                    }
                }
            }
            Tok::LParen => {
                if self.at_paren_atom() {
                    self.bump();
                    let mut words = Vec::new();
                    while let Tok::Ident(w) = self.peek().clone() {
                        words.push(w);
                        self.bump();
                    }
                    self.expect_rparen()?;
                    let predicate = words.remove(0);
                    return Ok(Formula::Atom(Atom {
                        predicate,
                        args: words,
                    }));
                }
                self.bump();
                let inner = self.implication()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::RParen => Err(self.error("unexpected `)`")),
            Tok::End => Err(self.error("unexpected end of input")),
            _ => Err(self.error("expected a formula")),
        }
    }

    /// `(` followed by two or more non-keyword identifiers and `)`.
    fn at_paren_atom(&self) -> bool {
        let mut k = 1;
        loop {
            match self.peek_at(k) {
                Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => k += 1,
                Tok::RParen => return k >= 3,
                _ => return false,
            }
        }
    }
}

fn underscore_atom(word: &str) -> Atom {
    let mut parts = word.split('_').filter(|p| !p.is_empty());
    let predicate = parts.next().unwrap_or(word).to_string();
    Atom {
        predicate,
        args: parts.map(str::to_string).collect(),
    }
}

/// Parses a formula and checks that it does not mix dialects.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut lx = Lexer {
        toks: lex(text)?,
        pos: 0,
    };
    let f = lx.implication()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("trailing input"));
    }
    f.dialect()?;
    Ok(f)
}

impl FromStr for Formula {
    type Err = FormulaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(p: &str) -> Formula {
        Formula::Atom(Atom::prop(p))
    }

    fn trace(steps: &[&[&str]]) -> Trace {
        steps
            .iter()
            .map(|s| s.iter().map(|p| Atom::prop(*p)).collect())
            .collect()
    }

    #[test]
    fn parses_underscore_and_paren_atoms() {
        let f = parse_formula("F(vAt_22)").unwrap();
        assert_eq!(f, Formula::eventually(Formula::Atom(Atom::new("vAt", &["22"]))));
        let g = parse_formula("F (vAt 22)").unwrap();
        assert_eq!(f, g);
        assert_eq!(parse_formula("(a)").unwrap(), a("a"));
    }

    #[test]
    fn parses_until_and_precedence() {
        assert_eq!(parse_formula("a U b").unwrap(), Formula::until(a("a"), a("b")));
        assert_eq!(
            parse_formula("a & b | c").unwrap(),
            Formula::or(Formula::and(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            parse_formula("a U b U c").unwrap(),
            Formula::until(a("a"), Formula::until(a("b"), a("c")))
        );
        assert_eq!(
            parse_formula("a -> b").unwrap(),
            Formula::or(Formula::not(a("a")), a("b"))
        );
        assert_eq!(
            parse_formula("!X a").unwrap(),
            Formula::not(Formula::next(a("a")))
        );
    }

    #[test]
    fn rejects_mixed_dialects() {
        let err = parse_formula("F(a) & Y(b)").unwrap_err();
        assert_eq!(
            err,
            FormulaError::MixedDialect(MixedDialect {
                future: "F",
                past: "Y"
            })
        );
    }

    #[test]
    fn syntax_errors_carry_location() {
        match parse_formula("a &\n  ) b") {
            Err(FormulaError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_formula("a b").is_err());
        assert!(parse_formula("U b").is_err());
        assert!(parse_formula("(a & b").is_err());
        assert!(parse_formula("a # b").is_err());
    }

    #[test]
    fn dialect_inference() {
        assert_eq!(parse_formula("a & b").unwrap().dialect(), Ok(Dialect::Ltlf));
        assert_eq!(parse_formula("O a").unwrap().dialect(), Ok(Dialect::Pltlf));
        assert_eq!(parse_formula("G a").unwrap().dialect(), Ok(Dialect::Ltlf));
    }

    #[test]
    fn next_is_bounded_by_trace_end() {
        let f = Formula::next(a("a"));
        assert!(evaluate(&f, &trace(&[&[], &["a"]])));
        assert!(!evaluate(&f, &trace(&[&["a"]])));
        assert!(evaluate(&Formula::weak_next(a("a")), &trace(&[&["a"]])));
    }

    #[test]
    fn until_and_once() {
        let f = parse_formula("a U b").unwrap();
        assert!(evaluate(&f, &trace(&[&["a"], &["a"], &["b"]])));
        assert!(!evaluate(&f, &trace(&[&["a"], &[], &["b"]])));
        let o = parse_formula("O b").unwrap();
        assert!(evaluate(&o, &trace(&[&["b"], &[]])));
        assert!(!evaluate(&o, &trace(&[&[], &[]])));
    }

    #[test]
    fn yesterday_needs_a_predecessor() {
        let y = parse_formula("Y a").unwrap();
        assert!(evaluate(&y, &trace(&[&["a"], &[]])));
        assert!(!evaluate(&y, &trace(&[&["a"]])));
    }

    #[test]
    fn empty_trace_conventions() {
        let empty = Trace::default();
        assert!(!evaluate(&a("a"), &empty));
        assert!(evaluate(&Formula::always(a("a")), &empty));
        assert!(!evaluate(&Formula::eventually(a("a")), &empty));
        assert!(!evaluate(&Formula::next(a("a")), &empty));
        assert!(!evaluate(&parse_formula("a U b").unwrap(), &empty));
        assert!(evaluate(&Formula::True, &empty));
        // PLTLf: only the literal `true` holds
        assert!(!evaluate(&parse_formula("H a").unwrap(), &empty));
        assert!(evaluate_as(&Formula::True, &empty, Dialect::Pltlf));
        assert!(!evaluate_as(&Formula::not(Formula::False), &empty, Dialect::Pltlf));
    }

    #[test]
    fn atoms_of_formula() {
        let f = parse_formula("F(vAt 22)").unwrap();
        assert_eq!(f.atoms(), [Atom::new("vAt", &["22"])].into_iter().collect());
        let f = parse_formula("a U b").unwrap();
        assert_eq!(f.atoms().len(), 2);
        assert!(Formula::True.atoms().is_empty());
    }

    #[test]
    fn nnf_duals() {
        assert_eq!(
            to_nnf(&parse_formula("!F a").unwrap()),
            Formula::always(Formula::not(a("a")))
        );
        assert_eq!(
            to_nnf(&parse_formula("!X a").unwrap()),
            Formula::weak_next(Formula::not(a("a")))
        );
        assert_eq!(
            to_nnf(&parse_formula("!(a U b)").unwrap()),
            Formula::release(Formula::not(a("a")), Formula::not(a("b")))
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "F(vAt 22)",
            "a U b U c",
            "(a U b) U c",
            "!(a & b) | X N c",
            "p & (!q S r)",
            "G !a R b",
            "F(a & X F b)",
            "(a | b) & c",
            "true U false",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = f.to_string();
            assert_eq!(parse_formula(&printed).unwrap(), f, "{text} -> {printed}");
        }
    }
}
