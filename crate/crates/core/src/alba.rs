//! The ALBA engine: first approximation, solving for variables by residuation,
//! Ackermann elimination, and unravelling to a polarity-safe clause.

use std::fmt;

use thiserror::Error;

use crate::lexer::{Cursor, ParseError, Tok};
use crate::signature::{Family, Polarity, Signature};
use crate::syntax::{
    child_sign, classify_node, find_inductive_certificate, parse_inequality_at, split_definite,
    Epsilon, Formula, Inequality, InductiveCertificate, NodeClass, Sign,
};

/// A nested quantified quasi-inequality
/// `forall noms conoms (ineqs ; clauses => consequent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub noms: Vec<String>,
    pub conoms: Vec<String>,
    pub ineqs: Vec<Inequality>,
    pub clauses: Vec<Clause>,
    pub consequent: Inequality,
}

impl Clause {
    pub fn simple(consequent: Inequality) -> Clause {
        Clause {
            noms: vec![],
            conoms: vec![],
            ineqs: vec![],
            clauses: vec![],
            consequent,
        }
    }

    /// Nesting depth matching the depth of the generated rule.
    pub fn depth(&self) -> usize {
        if self.clauses.is_empty() {
            return 0;
        }
        1 + self
            .clauses
            .iter()
            .flat_map(|g| g.clauses.iter().map(|d| d.depth()))
            .max()
            .unwrap_or(0)
    }

    /// Every inequality in the clause, nested ones included, in pre-order.
    pub fn all_inequalities(&self) -> Vec<&Inequality> {
        let mut out: Vec<&Inequality> = self.ineqs.iter().collect();
        for c in &self.clauses {
            out.extend(c.all_inequalities());
        }
        out.push(&self.consequent);
        out
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for i in self.all_inequalities() {
            for p in i.atoms() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn map_formulas(&self, f: &dyn Fn(&Formula) -> Formula) -> Clause {
        let mi = |i: &Inequality| Inequality::new(f(&i.lhs), f(&i.rhs));
        Clause {
            noms: self.noms.clone(),
            conoms: self.conoms.clone(),
            ineqs: self.ineqs.iter().map(mi).collect(),
            clauses: self.clauses.iter().map(|c| c.map_formulas(f)).collect(),
            consequent: mi(&self.consequent),
        }
    }

    /// Alpha-equivalence: binder lists are matched position-wise and every list
    /// is compared in order.
    pub fn alpha_eq(&self, other: &Clause) -> bool {
        alpha_clause(self, other, &mut Vec::new())
    }

    /// Number of nested clauses, this one included.
    pub fn count_clauses(&self) -> usize {
        1 + self.clauses.iter().map(|c| c.count_clauses()).sum::<usize>()
    }
}

fn alpha_clause(a: &Clause, b: &Clause, env: &mut Vec<(String, String)>) -> bool {
    if a.noms.len() != b.noms.len()
        || a.conoms.len() != b.conoms.len()
        || a.ineqs.len() != b.ineqs.len()
        || a.clauses.len() != b.clauses.len()
    {
        return false;
    }
    let mark = env.len();
    for (x, y) in a.noms.iter().zip(&b.noms) {
        env.push((format!("@{x}"), format!("@{y}")));
    }
    for (x, y) in a.conoms.iter().zip(&b.conoms) {
        env.push((format!("%{x}"), format!("%{y}")));
    }
    let ok = a
        .ineqs
        .iter()
        .zip(&b.ineqs)
        .all(|(x, y)| alpha_formula(&x.lhs, &y.lhs, env) && alpha_formula(&x.rhs, &y.rhs, env))
        && a
            .clauses
            .iter()
            .zip(&b.clauses)
            .all(|(x, y)| alpha_clause(x, y, env))
        && alpha_formula(&a.consequent.lhs, &b.consequent.lhs, env)
        && alpha_formula(&a.consequent.rhs, &b.consequent.rhs, env);
    env.truncate(mark);
    ok
}

fn var_key(f: &Formula) -> Option<String> {
    match f {
        Formula::Nom(j) => Some(format!("@{j}")),
        Formula::Conom(m) => Some(format!("%{m}")),
        _ => None,
    }
}

fn alpha_formula(a: &Formula, b: &Formula, env: &[(String, String)]) -> bool {
    if let (Some(x), Some(y)) = (var_key(a), var_key(b)) {
        let fwd = env.iter().rev().find(|(p, _)| *p == x).map(|(_, q)| q);
        let bwd = env.iter().rev().find(|(_, q)| *q == y).map(|(p, _)| p);
        return match (fwd, bwd) {
            (Some(q), Some(p)) => *q == y && *p == x,
            (None, None) => x == y,
            _ => false,
        };
    }
    match (a, b) {
        (Formula::And(a1, a2), Formula::And(b1, b2)) | (Formula::Or(a1, a2), Formula::Or(b1, b2)) => {
            alpha_formula(a1, b1, env) && alpha_formula(a2, b2, env)
        }
        (Formula::Conn(n, xs), Formula::Conn(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_formula(x, y, env))
        }
        _ => a == b,
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bare = self.noms.is_empty()
            && self.conoms.is_empty()
            && self.ineqs.is_empty()
            && self.clauses.is_empty();
        if bare {
            return write!(f, "{}", self.consequent);
        }
        write!(f, "forall")?;
        for j in &self.noms {
            write!(f, " @{j}")?;
        }
        for m in &self.conoms {
            write!(f, " %{m}")?;
        }
        write!(f, " (")?;
        let mut first = true;
        for i in &self.ineqs {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "{i}")?;
        }
        for c in &self.clauses {
            if !first {
                write!(f, " ; ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        if !first {
            write!(f, " => ")?;
        }
        write!(f, "{})", self.consequent)
    }
}

pub fn parse_clause(text: &str, sig: &Signature) -> Result<Clause, ParseError> {
    let mut cur = Cursor::new(text)?;
    let c = parse_clause_at(&mut cur, sig)?;
    cur.finish()?;
    Ok(c)
}

fn is_forall(cur: &Cursor) -> bool {
    matches!(cur.peek(), Some(Tok::Ident(w)) if w == "forall")
}

pub fn parse_clause_at(cur: &mut Cursor, sig: &Signature) -> Result<Clause, ParseError> {
    if !is_forall(cur) {
        return Ok(Clause::simple(parse_inequality_at(cur, sig)?));
    }
    cur.next();
    let mut noms = Vec::new();
    let mut conoms = Vec::new();
    loop {
        match cur.peek() {
            Some(Tok::Nom(j)) => {
                noms.push(j.clone());
                cur.next();
            }
            Some(Tok::Conom(m)) => {
                conoms.push(m.clone());
                cur.next();
            }
            _ => break,
        }
    }
    cur.expect(&Tok::LParen)?;
    let mut ineqs = Vec::new();
    let mut clauses = Vec::new();
    let mut items: Vec<Clause> = Vec::new();
    loop {
        items.push(parse_clause_at(cur, sig)?);
        if cur.eat(&Tok::Semi) {
            continue;
        }
        break;
    }
    let consequent = if cur.eat(&Tok::Implies) {
        parse_inequality_at(cur, sig)?
    } else {
        if items.len() != 1 {
            return Err(cur.error("expected `=>`"));
        }
        let c = items.pop().unwrap();
        if c != Clause::simple(c.consequent.clone()) {
            return Err(cur.error("consequent must be an inequality"));
        }
        c.consequent
    };
    for it in items {
        if it.noms.is_empty() && it.conoms.is_empty() && it.ineqs.is_empty() && it.clauses.is_empty() {
            ineqs.push(it.consequent);
        } else {
            clauses.push(it);
        }
    }
    cur.expect(&Tok::RParen)?;
    Ok(Clause {
        noms,
        conoms,
        ineqs,
        clauses,
        consequent,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlbaError {
    #[error("inequality is not inductive: {0}")]
    NotInductive(String),
    #[error("inequality is not definite: {0}")]
    NotDefinite(String),
    #[error("cannot solve `{ineq}` for `{var}`: {reason}")]
    Unsolvable {
        ineq: String,
        var: String,
        reason: String,
    },
    #[error("Ackermann precondition fails for `{var}` in `{ineq}`")]
    Polarity { var: String, ineq: String },
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    FirstApprox,
    Solve,
    Ackermann,
    Unravel,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepKind::FirstApprox => "first-approx",
            StepKind::Solve => "solve",
            StepKind::Ackermann => "ackermann",
            StepKind::Unravel => "unravel",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub detail: String,
    pub clause: Clause,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaState {
    pub eps: Epsilon,
    pub clause: Clause,
    pub next_nom: usize,
    pub next_conom: usize,
    pub trace: Vec<TraceStep>,
}

impl AlbaState {
    fn fresh_nom(&mut self) -> String {
        let n = format!("i{}", self.next_nom);
        self.next_nom += 1;
        n
    }

    fn fresh_conom(&mut self) -> String {
        let n = format!("m{}", self.next_conom);
        self.next_conom += 1;
        n
    }

    fn record(&mut self, kind: StepKind, detail: String) {
        self.trace.push(TraceStep {
            kind,
            detail,
            clause: self.clause.clone(),
        });
    }

    pub fn eps_of(&self, p: &str) -> Polarity {
        self.eps
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(Polarity::Pos)
    }
}

/// Replacement of the subterms hanging off a Skeleton: every maximal PIA subtree
/// and every variable leaf gets a fresh nominal (sign `+`) or conominal (sign `-`).
struct Approx<'a> {
    sig: &'a Signature,
    /// Leaves that are kept in place.
    keep: &'a dyn Fn(&Formula, Sign) -> bool,
    noms: Vec<String>,
    conoms: Vec<String>,
    side: Vec<Inequality>,
}

impl Approx<'_> {
    fn walk(&mut self, f: &Formula, s: Sign, st: &mut AlbaState) -> Formula {
        let class = classify_node(f, s, self.sig);
        if class.is_skeleton() {
            let mut i = 0;
            let parent = f.clone();
            return f.map_children(|c| {
                let cs = child_sign(&parent, i, s, self.sig);
                i += 1;
                self.walk(c, cs, st)
            });
        }
        if class == NodeClass::Leaf && (self.keep)(f, s) {
            return f.clone();
        }
        match s {
            Sign::Plus => {
                let j = st.fresh_nom();
                self.noms.push(j.clone());
                self.side.push(Inequality::new(Formula::Nom(j.clone()), f.clone()));
                Formula::Nom(j)
            }
            Sign::Minus => {
                let m = st.fresh_conom();
                self.conoms.push(m.clone());
                self.side.push(Inequality::new(f.clone(), Formula::Conom(m.clone())));
                Formula::Conom(m)
            }
        }
    }
}

fn is_constant_leaf(f: &Formula) -> bool {
    matches!(f, Formula::Top | Formula::Bot) || matches!(f, Formula::Conn(_, a) if a.is_empty())
}

/// Splits `j <= a & b` and `a | b <= m` repeatedly.
fn sra_split(ineqs: Vec<Inequality>) -> Vec<Inequality> {
    let mut out = Vec::new();
    for i in ineqs {
        match (&i.lhs, &i.rhs) {
            (_, Formula::And(a, b)) => out.extend(sra_split(vec![
                Inequality::new(i.lhs.clone(), (**a).clone()),
                Inequality::new(i.lhs.clone(), (**b).clone()),
            ])),
            (Formula::Or(a, b), _) => out.extend(sra_split(vec![
                Inequality::new((**a).clone(), i.rhs.clone()),
                Inequality::new((**b).clone(), i.rhs.clone()),
            ])),
            _ => out.push(i),
        }
    }
    out
}

pub fn first_approximation(
    ineq: &Inequality,
    cert: &InductiveCertificate,
    sig: &Signature,
) -> Result<AlbaState, AlbaError> {
    if split_definite(ineq, sig).len() != 1 {
        return Err(AlbaError::NotDefinite(ineq.to_string()));
    }
    let mut st = AlbaState {
        eps: cert.epsilon.clone(),
        clause: Clause::simple(ineq.clone()),
        next_nom: 0,
        next_conom: 0,
        trace: vec![],
    };
    let keep = |f: &Formula, _s: Sign| is_constant_leaf(f);
    let mut ap = Approx {
        sig,
        keep: &keep,
        noms: vec![],
        conoms: vec![],
        side: vec![],
    };
    let lhs = ap.walk(&ineq.lhs, Sign::Plus, &mut st);
    let rhs = ap.walk(&ineq.rhs, Sign::Minus, &mut st);
    st.clause = Clause {
        noms: ap.noms,
        conoms: ap.conoms,
        ineqs: sra_split(ap.side),
        clauses: vec![],
        consequent: Inequality::new(lhs, rhs),
    };
    st.record(StepKind::FirstApprox, ineq.to_string());
    Ok(st)
}

/// Signs of the occurrences of atom `p` in the trees `+lhs` and `-rhs`.
pub fn occurrence_signs(ineq: &Inequality, p: &str, sig: &Signature) -> Vec<Sign> {
    fn go(f: &Formula, s: Sign, p: &str, sig: &Signature, out: &mut Vec<Sign>) {
        if let Formula::Atom(q) = f {
            if q == p {
                out.push(s);
            }
            return;
        }
        for (i, c) in f.children().into_iter().enumerate() {
            go(c, child_sign(f, i, s, sig), p, sig, out);
        }
    }
    let mut out = Vec::new();
    go(&ineq.lhs, Sign::Plus, p, sig, &mut out);
    go(&ineq.rhs, Sign::Minus, p, sig, &mut out);
    out
}

/// Sign of a critical occurrence of a variable with polarity `e` inside a state inequality.
fn critical_state_sign(e: Polarity) -> Sign {
    match e {
        Polarity::Pos => Sign::Minus,
        Polarity::Neg => Sign::Plus,
    }
}

/// Rewrites `ineq` by residuation until every occurrence of `p` stands alone on one
/// side. Returns the resulting list: bounds on `p` plus side inequalities.
pub fn solve_for_variable(
    ineq: &Inequality,
    p: &str,
    sig: &Signature,
) -> Result<Vec<Inequality>, AlbaError> {
    let mut out = Vec::new();
    solve(&ineq.lhs, &ineq.rhs, p, sig, ineq, &mut out)?;
    Ok(out)
}

fn solve(
    a: &Formula,
    b: &Formula,
    p: &str,
    sig: &Signature,
    orig: &Inequality,
    out: &mut Vec<Inequality>,
) -> Result<(), AlbaError> {
    let fail = |reason: &str| AlbaError::Unsolvable {
        ineq: orig.to_string(),
        var: p.to_string(),
        reason: reason.to_string(),
    };
    let in_a = a.contains_atom(p);
    let in_b = b.contains_atom(p);
    if in_a && in_b {
        return Err(fail("variable on both sides"));
    }
    if in_b {
        match b {
            Formula::Atom(_) => out.push(Inequality::new(a.clone(), b.clone())),
            Formula::And(x, y) => {
                for part in [x, y] {
                    if part.contains_atom(p) {
                        solve(a, part, p, sig, orig, out)?;
                    } else {
                        out.push(Inequality::new(a.clone(), (**part).clone()));
                    }
                }
            }
            Formula::Conn(name, args) => {
                let c = sig.get(name).expect("known connective");
                if c.family != Family::G {
                    return Err(fail(&format!("`{name}` is not a right adjoint")));
                }
                let i = single_coordinate(args, p).ok_or_else(|| fail("variable in several coordinates"))?;
                let r = sig.residual(name, i);
                let mut ra = args.clone();
                ra[i] = a.clone();
                let new = Formula::Conn(r.name.clone(), ra);
                match c.order_type.get(i) {
                    Polarity::Pos => solve(&new, &args[i], p, sig, orig, out)?,
                    Polarity::Neg => solve(&args[i], &new, p, sig, orig, out)?,
                }
            }
            _ => return Err(fail("not displayable")),
        }
    } else if in_a {
        match a {
            Formula::Atom(_) => out.push(Inequality::new(a.clone(), b.clone())),
            Formula::Or(x, y) => {
                for part in [x, y] {
                    if part.contains_atom(p) {
                        solve(part, b, p, sig, orig, out)?;
                    } else {
                        out.push(Inequality::new((**part).clone(), b.clone()));
                    }
                }
            }
            Formula::Conn(name, args) => {
                let c = sig.get(name).expect("known connective");
                if c.family != Family::F {
                    return Err(fail(&format!("`{name}` is not a left adjoint")));
                }
                let i = single_coordinate(args, p).ok_or_else(|| fail("variable in several coordinates"))?;
                let r = sig.residual(name, i);
                let mut ra = args.clone();
                ra[i] = b.clone();
                let new = Formula::Conn(r.name.clone(), ra);
                match c.order_type.get(i) {
                    Polarity::Pos => solve(&args[i], &new, p, sig, orig, out)?,
                    Polarity::Neg => solve(&new, &args[i], p, sig, orig, out)?,
                }
            }
            _ => return Err(fail("not displayable")),
        }
    } else {
        out.push(Inequality::new(a.clone(), b.clone()));
    }
    Ok(())
}

fn single_coordinate(args: &[Formula], p: &str) -> Option<usize> {
    let hits: Vec<usize> = (0..args.len()).filter(|&i| args[i].contains_atom(p)).collect();
    (hits.len() == 1).then(|| hits[0])
}

/// Solves every top-level antecedent holding a critical occurrence of `p`.
pub fn solve_step(st: &mut AlbaState, p: &str, sig: &Signature) -> Result<(), AlbaError> {
    let crit = critical_state_sign(st.eps_of(p));
    let mut ineqs = Vec::new();
    for i in std::mem::take(&mut st.clause.ineqs) {
        if occurrence_signs(&i, p, sig).contains(&crit) {
            ineqs.extend(solve_for_variable(&i, p, sig)?);
        } else {
            ineqs.push(i);
        }
    }
    st.clause.ineqs = ineqs;
    st.record(StepKind::Solve, p.to_string());
    Ok(())
}

pub fn ackermann_eliminate(st: &mut AlbaState, p: &str, sig: &Signature) -> Result<(), AlbaError> {
    let e = st.eps_of(p);
    let crit = critical_state_sign(e);
    let atom = Formula::atom(p);
    let mut bounds = Vec::new();
    let mut rest = Vec::new();
    for i in std::mem::take(&mut st.clause.ineqs) {
        let bound = match e {
            Polarity::Pos => i.rhs == atom && !i.lhs.contains_atom(p),
            Polarity::Neg => i.lhs == atom && !i.rhs.contains_atom(p),
        };
        if bound {
            bounds.push(match e {
                Polarity::Pos => i.lhs,
                Polarity::Neg => i.rhs,
            });
        } else {
            rest.push(i);
        }
    }
    for i in rest.iter().chain(std::iter::once(&st.clause.consequent)) {
        if occurrence_signs(i, p, sig).contains(&crit) {
            return Err(AlbaError::Polarity {
                var: p.to_string(),
                ineq: i.to_string(),
            });
        }
    }
    let value = match e {
        Polarity::Pos => bounds.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot),
        Polarity::Neg => bounds.into_iter().reduce(Formula::and).unwrap_or(Formula::Top),
    };
    st.clause.ineqs = rest;
    st.clause = st.clause.map_formulas(&|f| f.subst_atom(p, &value));
    st.record(StepKind::Ackermann, format!("{p} := {value}"));
    Ok(())
}

/// Skeleton inequality with nominals only at `+` and conominals only at `-`.
pub fn is_safe_inequality(i: &Inequality, sig: &Signature) -> bool {
    fn go(f: &Formula, s: Sign, sig: &Signature) -> bool {
        match f {
            Formula::Nom(_) => s == Sign::Plus,
            Formula::Conom(_) => s == Sign::Minus,
            Formula::Atom(_) | Formula::Meta(_) => false,
            _ if f.is_leaf() => true,
            _ => {
                classify_node(f, s, sig).is_skeleton()
                    && f
                        .children()
                        .into_iter()
                        .enumerate()
                        .all(|(k, c)| go(c, child_sign(f, k, s, sig), sig))
            }
        }
    }
    go(&i.lhs, Sign::Plus, sig) && go(&i.rhs, Sign::Minus, sig)
}

pub fn is_polarity_safe(c: &Clause, sig: &Signature) -> bool {
    c.all_inequalities().into_iter().all(|i| is_safe_inequality(i, sig))
}

/// Turns one unsafe antecedent inequality into an equivalent clause.
fn unravel_inequality(i: &Inequality, st: &mut AlbaState, sig: &Signature) -> Clause {
    let keep = |f: &Formula, _s: Sign| is_constant_leaf(f);
    let mut ap = Approx {
        sig,
        keep: &keep,
        noms: vec![],
        conoms: vec![],
        side: vec![],
    };
    let consequent = match (&i.lhs, &i.rhs) {
        (_, Formula::Conom(_)) => Inequality::new(ap.walk(&i.lhs, Sign::Plus, st), i.rhs.clone()),
        (Formula::Nom(_), _) => Inequality::new(i.lhs.clone(), ap.walk(&i.rhs, Sign::Minus, st)),
        _ => {
            let n = st.fresh_conom();
            ap.conoms.push(n.clone());
            ap.side.push(Inequality::new(i.rhs.clone(), Formula::Conom(n.clone())));
            Inequality::new(ap.walk(&i.lhs, Sign::Plus, st), Formula::Conom(n))
        }
    };
    Clause {
        noms: ap.noms,
        conoms: ap.conoms,
        ineqs: ap.side,
        clauses: vec![],
        consequent,
    }
}

/// Finds the first unsafe antecedent inequality (own antecedents before nested
/// clauses) and replaces it by its clause; returns false when already safe.
fn unravel_in(c: &mut Clause, st: &mut AlbaState, sig: &Signature) -> bool {
    if let Some(k) = c.ineqs.iter().position(|i| !is_safe_inequality(i, sig)) {
        let i = c.ineqs.remove(k);
        let parts = split_definite(&i, sig);
        if parts.len() > 1 {
            for (d, part) in parts.into_iter().enumerate() {
                c.ineqs.insert(k + d, part);
            }
            return true;
        }
        let new = unravel_inequality(&i, st, sig);
        c.clauses.push(new);
        return true;
    }
    for sub in c.clauses.iter_mut() {
        if unravel_in(sub, st, sig) {
            return true;
        }
    }
    false
}

pub fn unravel_step(st: &mut AlbaState, sig: &Signature) -> bool {
    let mut clause = st.clause.clone();
    let changed = unravel_in(&mut clause, st, sig);
    if changed {
        st.clause = clause;
        st.record(StepKind::Unravel, String::new());
    }
    changed
}

/// One definite component with its final clause and the step trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaComponent {
    pub inequality: Inequality,
    pub clause: Clause,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaRun {
    pub certificate: InductiveCertificate,
    pub components: Vec<AlbaComponent>,
}

pub fn run_component(
    ineq: &Inequality,
    cert: &InductiveCertificate,
    sig: &Signature,
) -> Result<AlbaComponent, AlbaError> {
    let mut st = first_approximation(ineq, cert, sig)?;
    for p in cert.elimination_order() {
        if !st.clause.atoms().contains(&p) {
            continue;
        }
        solve_step(&mut st, &p, sig)?;
        ackermann_eliminate(&mut st, &p, sig)?;
    }
    let budget = 10_000;
    let mut steps = 0;
    while unravel_step(&mut st, sig) {
        steps += 1;
        if steps > budget {
            return Err(AlbaError::Internal("unravelling does not terminate".into()));
        }
    }
    if !st.clause.atoms().is_empty() {
        return Err(AlbaError::Internal(format!("atoms remain in {}", st.clause)));
    }
    if !is_polarity_safe(&st.clause, sig) {
        return Err(AlbaError::Internal(format!("output not polarity-safe: {}", st.clause)));
    }
    Ok(AlbaComponent {
        inequality: ineq.clone(),
        clause: st.clause.clone(),
        trace: st.trace,
    })
}

pub fn run_alba(ineq: &Inequality, sig: &Signature) -> Result<AlbaRun, AlbaError> {
    let cert = find_inductive_certificate(ineq, sig)
        .ok_or_else(|| AlbaError::NotInductive(ineq.to_string()))?;
    let mut components = Vec::new();
    for part in split_definite(ineq, sig) {
        components.push(run_component(&part, &cert, sig)?);
    }
    Ok(AlbaRun {
        certificate: cert,
        components,
    })
}

/// Variables bound at the top level of the final clause of a component.
pub fn extractors(c: &Clause) -> Vec<Formula> {
    c.noms
        .iter()
        .map(|j| Formula::Nom(j.clone()))
        .chain(c.conoms.iter().map(|m| Formula::Conom(m.clone())))
        .collect()
}

fn occurrences(f: &Formula, v: &Formula) -> usize {
    if f == v {
        return 1;
    }
    f.children().iter().map(|c| occurrences(c, v)).sum()
}

/// Structural check: each extractor occurs exactly once in the goal, and never in
/// the consequent of a clause that becomes a contract rule.
pub fn check_extractors(c: &Clause) -> Result<(), String> {
    for v in extractors(c) {
        let n = occurrences(&c.consequent.lhs, &v) + occurrences(&c.consequent.rhs, &v);
        if n != 1 {
            return Err(format!("extractor {v} occurs {n} times in the goal"));
        }
    }
    fn scan(c: &Clause, ex: &[Formula]) -> Result<(), String> {
        for g in &c.clauses {
            for d in &g.clauses {
                for v in ex {
                    let n = occurrences(&d.consequent.lhs, v) + occurrences(&d.consequent.rhs, v);
                    if n > 0 {
                        return Err(format!("extractor {v} occurs in contract-rule consequent {}", d.consequent));
                    }
                }
                scan(d, ex)?;
            }
        }
        Ok(())
    }
    scan(c, &extractors(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_inequality;
    use crate::syntax::tests::sig;

    fn run(t: &str) -> Clause {
        let s = sig();
        let r = run_alba(&parse_inequality(t, &s).unwrap(), &s).unwrap();
        assert_eq!(r.components.len(), 1);
        r.components[0].clause.clone()
    }

    fn clause(t: &str) -> Clause {
        parse_clause(t, &sig()).unwrap()
    }

    #[test]
    fn clause_round_trip() {
        let t = "forall @i @j %m (@j <= %m ; forall %n (dia(%m) o %m <= %n => @i <= box(%n)) => @i o dia(@j) <= %m)";
        let c = clause(t);
        assert_eq!(c.to_string(), t);
        assert_eq!(c.depth(), 1);
        assert_eq!(clause("p <= p").to_string(), "p <= p");
        assert_eq!(clause("forall @j %m (@j <= %m)").ineqs.len(), 0);
    }

    #[test]
    fn alpha_equivalence() {
        let a = clause("forall @j %m (@j <= %m => @j <= %m)");
        let b = clause("forall @x %y (@x <= %y => @x <= %y)");
        let c = clause("forall @x %y (@x <= %y => @x <= %z)");
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
    }

    #[test]
    fn first_approximation_example() {
        let s = sig();
        let i = parse_inequality("box(dia(p) o p) o dia(p) <= p", &s).unwrap();
        let cert = find_inductive_certificate(&i, &s).unwrap();
        let st = first_approximation(&i, &cert, &s).unwrap();
        let want = clause(
            "forall @i @j %m (@i <= box(dia(p) o p) ; @j <= p ; p <= %m => @i o dia(@j) <= %m)",
        );
        assert!(st.clause.alpha_eq(&want), "{}", st.clause);
    }

    #[test]
    fn solving() {
        let s = sig();
        let i = parse_inequality("@j <= box(p)", &s).unwrap();
        let out = solve_for_variable(&i, "p", &s).unwrap();
        assert_eq!(out[0].to_string(), "bdia(@j) <= p");
        let i = parse_inequality("dia(p) <= %m", &s).unwrap();
        assert_eq!(solve_for_variable(&i, "p", &s).unwrap()[0].to_string(), "p <= bbox(%m)");
        let i = parse_inequality("@j <= p", &s).unwrap();
        assert_eq!(solve_for_variable(&i, "p", &s).unwrap(), vec![i]);
    }

    #[test]
    fn sahlqvist_run() {
        let c = run("dia(box(p)) <= box(dia(box(p)))");
        let want = clause(
            "forall @j %m (forall @i (forall %n (bdia(@j) <= %n => @i <= box(%n)) => dia(@i) <= %m) => dia(@j) <= box(%m))",
        );
        assert!(c.alpha_eq(&want), "{c}");
    }

    #[test]
    fn example_two_run() {
        let c = run("box(dia(p) o p) o dia(p) <= p");
        let want = clause(
            "forall @i @j %m (@j <= %m ; forall %n (forall @k @h (@k <= %m ; @h <= %m => dia(@k) o @h <= %n) => @i <= box(%n)) => @i o dia(@j) <= %m)",
        );
        assert!(c.alpha_eq(&want), "{c}");
        assert_eq!(c.depth(), 1);
        check_extractors(&c).unwrap();
    }

    #[test]
    fn polarity_safety() {
        let s = sig();
        let bad = clause("forall @j %m (dia(box(bdia(@j))) <= %m => dia(@j) <= box(%m))");
        assert!(!is_polarity_safe(&bad, &s));
        let good = clause("forall @j %m (@j <= %m => @j <= %m)");
        assert!(is_polarity_safe(&good, &s));
    }
}
