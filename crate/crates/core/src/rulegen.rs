//! Translation of polarity-safe clauses into inception rules, the rules file
//! format, and a structural linter for generated rules.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::alba::{is_polarity_safe, Clause};
use crate::kernel::{check_sorts, parse_sequent, Sequent, Sort, Structure};
use crate::signature::{Polarity, Signature};
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InceptionRule {
    pub name: String,
    pub premises: Vec<Premise>,
    pub conclusion: Sequent,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Premise {
    Plain(Sequent),
    Contract(Contract),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contract {
    pub aim: Sequent,
    pub rules: Vec<InceptionRule>,
    pub uninstantiable: Vec<String>,
}

impl Contract {
    pub fn depth(&self) -> usize {
        self.rules.iter().map(|r| r.depth).max().unwrap_or(0)
    }
}

impl InceptionRule {
    pub fn contracts(&self) -> impl Iterator<Item = &Contract> {
        self.premises.iter().filter_map(|p| match p {
            Premise::Contract(c) => Some(c),
            _ => None,
        })
    }

    pub fn plain_premises(&self) -> impl Iterator<Item = &Sequent> {
        self.premises.iter().filter_map(|p| match p {
            Premise::Plain(s) => Some(s),
            _ => None,
        })
    }

    /// Depth by recursion on contracts: 0 without contracts, otherwise one more
    /// than the deepest contract rule.
    pub fn compute_depth(&self) -> usize {
        self.contracts()
            .map(|c| 1 + c.rules.iter().map(|r| r.compute_depth()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// This rule followed by every contract rule, depth first.
    pub fn closure(&self) -> Vec<&InceptionRule> {
        let mut out = vec![self];
        for c in self.contracts() {
            for r in &c.rules {
                out.extend(r.closure());
            }
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RulegenError {
    #[error("clause is not polarity-safe")]
    NotSafe,
    #[error("cannot translate `{0}` in {1:?}-sort position")]
    Untranslatable(String, Sort),
    #[error("rules file: {0}")]
    Format(String),
}

const EXTRACTOR_LETTERS: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
const INNER_LETTERS: [&str; 7] = ["N", "K", "H", "L", "O", "S", "T"];

fn letter(pool: &[&str], k: usize) -> String {
    if k < pool.len() {
        pool[k].to_string()
    } else {
        format!("{}{}", pool[0], k - pool.len() + 1)
    }
}

fn var_key(f: &Formula) -> Option<String> {
    match f {
        Formula::Nom(j) => Some(format!("@{j}")),
        Formula::Conom(m) => Some(format!("%{m}")),
        _ => None,
    }
}

fn binders(c: &Clause) -> Vec<String> {
    c.noms
        .iter()
        .map(|j| format!("@{j}"))
        .chain(c.conoms.iter().map(|m| format!("%{m}")))
        .collect()
}

fn first_occurrences(f: &Formula, out: &mut Vec<String>) {
    if let Some(k) = var_key(f) {
        if !out.contains(&k) {
            out.push(k);
        }
    }
    f.children().into_iter().for_each(|c| first_occurrences(c, out));
}

struct Translator<'a> {
    sig: &'a Signature,
    names: BTreeMap<String, String>,
    inner: usize,
}

impl Translator<'_> {
    fn bind_inner(&mut self, c: &Clause) {
        for b in binders(c) {
            let l = letter(&INNER_LETTERS, self.inner);
            self.inner += 1;
            self.names.insert(b, l);
        }
        for g in &c.clauses {
            self.bind_inner(g);
        }
    }

    fn structure(&self, f: &Formula, sort: Sort) -> Result<Structure, RulegenError> {
        if let Some(k) = var_key(f) {
            return Ok(Structure::Meta(self.names[&k].clone()));
        }
        let bad = || RulegenError::Untranslatable(f.to_string(), sort);
        match f {
            Formula::Top if sort == Sort::F => Ok(Structure::TopUnit),
            Formula::Bot if sort == Sort::G => Ok(Structure::BotUnit),
            Formula::Conn(n, args) => {
                let c = self.sig.get(n).ok_or_else(bad)?;
                if Sort::of_family(c.family) != sort {
                    return Err(bad());
                }
                let args = args
                    .iter()
                    .enumerate()
                    .map(|(i, a)| self.structure(a, sort.arg(c.order_type.get(i))))
                    .collect::<Result<_, _>>()?;
                Ok(Structure::Conn(c.family, n.clone(), args))
            }
            _ => Err(bad()),
        }
    }

    fn sequent(&self, i: &crate::syntax::Inequality) -> Result<Sequent, RulegenError> {
        Ok(Sequent::new(self.structure(&i.lhs, Sort::F)?, self.structure(&i.rhs, Sort::G)?))
    }

    /// Premises and conclusion of the rule whose clause is `c`; binders of `c`
    /// itself are already named.
    fn rule(&self, c: &Clause, name: &str) -> Result<InceptionRule, RulegenError> {
        let mut premises = Vec::new();
        for i in &c.ineqs {
            premises.push(Premise::Plain(self.sequent(i)?));
        }
        for (k, g) in c.clauses.iter().enumerate() {
            let mut rules = Vec::new();
            let mut j = 0;
            for i in &g.ineqs {
                j += 1;
                rules.push(InceptionRule {
                    name: format!("{name}.c{}.r{j}", k + 1),
                    premises: vec![],
                    conclusion: self.sequent(i)?,
                    depth: 0,
                });
            }
            for d in &g.clauses {
                j += 1;
                rules.push(self.rule(d, &format!("{name}.c{}.r{j}", k + 1))?);
            }
            premises.push(Premise::Contract(Contract {
                aim: self.sequent(&g.consequent)?,
                rules,
                uninstantiable: binders(g).iter().map(|b| self.names[b].clone()).collect(),
            }));
        }
        let mut rule = InceptionRule {
            name: name.to_string(),
            premises,
            conclusion: self.sequent(&c.consequent)?,
            depth: 0,
        };
        rule.depth = rule.compute_depth();
        Ok(rule)
    }
}

/// Translates a polarity-safe clause into an inception rule named `name`.
/// Returns the rule and the table from metavariables to clause variables.
pub fn translate(
    clause: &Clause,
    name: &str,
    sig: &Signature,
) -> Result<(InceptionRule, BTreeMap<String, String>), RulegenError> {
    if !is_polarity_safe(clause, sig) {
        return Err(RulegenError::NotSafe);
    }
    let mut order = Vec::new();
    first_occurrences(&clause.consequent.lhs, &mut order);
    first_occurrences(&clause.consequent.rhs, &mut order);
    let tops = binders(clause);
    for b in &tops {
        if !order.contains(b) {
            order.push(b.clone());
        }
    }
    let mut t = Translator {
        sig,
        names: BTreeMap::new(),
        inner: 0,
    };
    for (k, b) in order.iter().filter(|b| tops.contains(b)).enumerate() {
        t.names.insert(b.clone(), letter(&EXTRACTOR_LETTERS, k));
    }
    for g in &clause.clauses {
        t.bind_inner(g);
    }
    let rule = t.rule(clause, name)?;
    let table = t.names.into_iter().map(|(k, v)| (v, k)).collect();
    Ok((rule, table))
}

/// Alpha-equivalence of rules up to a bijective renaming of metavariables.
/// Premise and contract-rule order matter; uninstantiable sets are compared as sets.
pub fn alpha_eq(a: &InceptionRule, b: &InceptionRule) -> bool {
    let mut fwd = BTreeMap::new();
    let mut bwd = BTreeMap::new();
    rule_eq(a, b, &mut fwd, &mut bwd)
}

fn rule_eq(
    a: &InceptionRule,
    b: &InceptionRule,
    fwd: &mut BTreeMap<String, String>,
    bwd: &mut BTreeMap<String, String>,
) -> bool {
    if a.premises.len() != b.premises.len() || !seq_eq(&a.conclusion, &b.conclusion, fwd, bwd) {
        return false;
    }
    a.premises.iter().zip(&b.premises).all(|(p, q)| match (p, q) {
        (Premise::Plain(x), Premise::Plain(y)) => seq_eq(x, y, fwd, bwd),
        (Premise::Contract(x), Premise::Contract(y)) => {
            x.rules.len() == y.rules.len()
                && x.uninstantiable.len() == y.uninstantiable.len()
                && seq_eq(&x.aim, &y.aim, fwd, bwd)
                && x.rules.iter().zip(&y.rules).all(|(r, s)| rule_eq(r, s, fwd, bwd))
                && x.uninstantiable.iter().all(|u| {
                    fwd.get(u).is_some_and(|v| y.uninstantiable.contains(v))
                })
        }
        _ => false,
    })
}

fn seq_eq(a: &Sequent, b: &Sequent, fwd: &mut BTreeMap<String, String>, bwd: &mut BTreeMap<String, String>) -> bool {
    struct_eq(&a.ante, &b.ante, fwd, bwd) && struct_eq(&a.succ, &b.succ, fwd, bwd)
}

fn struct_eq(
    a: &Structure,
    b: &Structure,
    fwd: &mut BTreeMap<String, String>,
    bwd: &mut BTreeMap<String, String>,
) -> bool {
    match (a, b) {
        (Structure::Meta(x), Structure::Meta(y)) => match (fwd.get(x), bwd.get(y)) {
            (None, None) => {
                fwd.insert(x.clone(), y.clone());
                bwd.insert(y.clone(), x.clone());
                true
            }
            (Some(v), Some(u)) => v == y && u == x,
            _ => false,
        },
        (Structure::Conn(f, n, xs), Structure::Conn(g, m, ys)) => {
            f == g && n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| struct_eq(x, y, fwd, bwd))
        }
        _ => a == b,
    }
}

/// One finding of the linter, with the offending rule and condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintIssue {
    pub rule: String,
    pub condition: &'static str,
    pub msg: String,
}

impl fmt::Display for LintIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.rule, self.condition, self.msg)
    }
}

fn occurrences(s: &Structure, m: &str) -> usize {
    match s {
        Structure::Meta(x) => usize::from(x == m),
        _ => s.args().iter().map(|a| occurrences(a, m)).sum(),
    }
}

fn seq_occurrences(s: &Sequent, m: &str) -> usize {
    occurrences(&s.ante, m) + occurrences(&s.succ, m)
}

fn has_formula(s: &Sequent) -> bool {
    s.ante.has_formula() || s.succ.has_formula()
}

/// Position of every metavariable occurrence as a polarity: `Pos` for
/// precedent, `Neg` for succedent.
fn positions(s: &Sequent, sig: &Signature, out: &mut Vec<(String, Polarity)>) {
    fn go(s: &Structure, p: Polarity, sig: &Signature, out: &mut Vec<(String, Polarity)>) {
        match s {
            Structure::Meta(m) => out.push((m.clone(), p)),
            Structure::Conn(_, n, args) => {
                if let Some(c) = sig.get(n) {
                    for (i, a) in args.iter().enumerate() {
                        go(a, p.compose(c.order_type.get(i)), sig, out);
                    }
                }
            }
            _ => {}
        }
    }
    go(&s.ante, Polarity::Pos, sig, out);
    go(&s.succ, Polarity::Neg, sig, out);
}

/// Structural conditions on a generated rule and all of its contract rules.
///
/// C1/C5: no formula leaves, so premises only carry structure variables.
/// C2: every metavariable has a single sort throughout the rule.
/// C3: the rule's own metavariables occur at most once in its conclusion.
/// C4: each metavariable sits in precedent position exactly when it has F-sort.
/// Containment: plain-premise variables occur in the conclusion or an enclosing scope.
/// Freshness: contract aims only use conclusion, enclosing or uninstantiable variables,
/// and top-level conclusion variables never reach a contract-rule conclusion.
pub fn lint(rule: &InceptionRule, sig: &Signature) -> Vec<LintIssue> {
    let mut out = Vec::new();
    let mut sorts = BTreeMap::new();
    let top: BTreeSet<String> = rule.conclusion.metas().into_iter().collect();
    lint_rule(rule, sig, &BTreeSet::new(), &top, &mut sorts, true, &mut out);
    if rule.depth != rule.compute_depth() {
        out.push(issue(rule, "depth", format!("recorded depth {} differs from {}", rule.depth, rule.compute_depth())));
    }
    out
}

fn issue(r: &InceptionRule, condition: &'static str, msg: String) -> LintIssue {
    LintIssue {
        rule: r.name.clone(),
        condition,
        msg,
    }
}

fn lint_rule(
    r: &InceptionRule,
    sig: &Signature,
    outer: &BTreeSet<String>,
    extractors: &BTreeSet<String>,
    sorts: &mut BTreeMap<String, Sort>,
    is_top: bool,
    out: &mut Vec<LintIssue>,
) {
    let mut seqs = vec![&r.conclusion];
    seqs.extend(r.plain_premises());
    seqs.extend(r.contracts().map(|c| &c.aim));
    for s in &seqs {
        if has_formula(s) {
            out.push(issue(r, "C1", format!("formula in `{s}`")));
        }
        if let Err(e) = check_sorts(s, sig, sorts) {
            out.push(issue(r, "C2", format!("`{s}`: {e}")));
        }
        let mut pos = Vec::new();
        positions(s, sig, &mut pos);
        for (m, p) in pos {
            let precedent = p == Polarity::Pos;
            if let Some(&k) = sorts.get(&m) {
                if precedent != (k == Sort::F) {
                    out.push(issue(r, "C4", format!("{m} has {k:?}-sort in {} position", if precedent { "precedent" } else { "succedent" })));
                }
            }
        }
    }
    let concl: BTreeSet<String> = r.conclusion.metas().into_iter().collect();
    for m in &concl {
        if !outer.contains(m) && seq_occurrences(&r.conclusion, m) > 1 {
            out.push(issue(r, "C3", format!("{m} occurs more than once in the conclusion")));
        }
    }
    if !is_top {
        for m in extractors {
            if seq_occurrences(&r.conclusion, m) > 0 {
                out.push(issue(r, "freshness", format!("extractor {m} occurs in a contract-rule conclusion")));
            }
        }
    }
    let visible: BTreeSet<String> = outer.union(&concl).cloned().collect();
    for p in r.plain_premises() {
        for m in p.metas() {
            if !visible.contains(&m) {
                out.push(issue(r, "containment", format!("premise variable {m} not in the conclusion")));
            }
        }
    }
    for c in r.contracts() {
        let xs: BTreeSet<String> = c.uninstantiable.iter().cloned().collect();
        for x in &xs {
            if visible.contains(x) {
                out.push(issue(r, "freshness", format!("uninstantiable {x} is not fresh")));
            }
        }
        for m in c.aim.metas() {
            if !visible.contains(&m) && !xs.contains(&m) {
                out.push(issue(r, "freshness", format!("aim variable {m} neither from the conclusion nor uninstantiable")));
            }
        }
        let inner: BTreeSet<String> = visible.union(&xs).cloned().collect();
        for cr in &c.rules {
            lint_rule(cr, sig, &inner, extractors, sorts, false, out);
        }
    }
}

/// Linearity and containment for a rule without contracts.
pub fn check_analytic(rule: &InceptionRule) -> Vec<LintIssue> {
    let mut out = Vec::new();
    if rule.contracts().next().is_some() {
        out.push(issue(rule, "analytic", "rule has contract premises".into()));
    }
    let concl = rule.conclusion.metas();
    for m in &concl {
        if seq_occurrences(&rule.conclusion, m) > 1 {
            out.push(issue(rule, "linearity", format!("{m} occurs more than once in the conclusion")));
        }
    }
    for p in rule.plain_premises() {
        for m in p.metas() {
            if !concl.contains(&m) {
                out.push(issue(rule, "containment", format!("premise variable {m} not in the conclusion")));
            }
        }
    }
    out
}

/// A rules file: the rules generated from one axiom and the metavariable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulesFile {
    pub axiom: String,
    pub rules: Vec<InceptionRule>,
    pub metavariables: BTreeMap<String, String>,
}

fn rule_to_json(r: &InceptionRule) -> Value {
    let premises: Vec<Value> = r
        .premises
        .iter()
        .map(|p| match p {
            Premise::Plain(s) => json!({ "sequent": s.to_string() }),
            Premise::Contract(c) => json!({ "contract": {
                "aim": c.aim.to_string(),
                "uninstantiable": c.uninstantiable,
                "rules": c.rules.iter().map(rule_to_json).collect::<Vec<_>>(),
            }}),
        })
        .collect();
    json!({ "name": r.name, "depth": r.depth, "premises": premises, "conclusion": r.conclusion.to_string() })
}

fn rule_from_json(v: &Value, sig: &Signature) -> Result<InceptionRule, RulegenError> {
    let err = |m: &str| RulegenError::Format(m.to_string());
    let s = |v: &Value, what: &str| -> Result<Sequent, RulegenError> {
        let t = v.as_str().ok_or_else(|| err(&format!("{what} must be a string")))?;
        parse_sequent(t, sig).map_err(|e| RulegenError::Format(format!("`{t}`: {e}")))
    };
    let name = v["name"].as_str().ok_or_else(|| err("rule without name"))?.to_string();
    let conclusion = s(&v["conclusion"], "conclusion")?;
    let mut premises = Vec::new();
    for p in v["premises"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        if let Some(q) = p.get("sequent") {
            premises.push(Premise::Plain(s(q, "premise")?));
        } else if let Some(c) = p.get("contract") {
            let rules = c["rules"]
                .as_array()
                .map(|a| a.iter().map(|r| rule_from_json(r, sig)).collect::<Result<Vec<_>, _>>())
                .transpose()?
                .unwrap_or_default();
            let uninstantiable = c["uninstantiable"]
                .as_array()
                .map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect())
                .unwrap_or_default();
            premises.push(Premise::Contract(Contract {
                aim: s(&c["aim"], "aim")?,
                rules,
                uninstantiable,
            }));
        } else {
            return Err(err("premise must be a sequent or a contract"));
        }
    }
    let mut rule = InceptionRule {
        name,
        premises,
        conclusion,
        depth: 0,
    };
    rule.depth = rule.compute_depth();
    if let Some(d) = v["depth"].as_u64() {
        if d as usize != rule.depth {
            return Err(RulegenError::Format(format!("rule {} declares depth {d}, computed {}", rule.name, rule.depth)));
        }
    }
    Ok(rule)
}

impl RulesFile {
    pub fn to_json(&self) -> String {
        let v = json!({
            "axiom": self.axiom,
            "rules": self.rules.iter().map(rule_to_json).collect::<Vec<_>>(),
            "metavariables": self.metavariables,
        });
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    pub fn from_json(text: &str, sig: &Signature) -> Result<RulesFile, RulegenError> {
        let v: Value = serde_json::from_str(text).map_err(|e| RulegenError::Format(e.to_string()))?;
        let rules = v["rules"]
            .as_array()
            .ok_or_else(|| RulegenError::Format("missing rules".into()))?
            .iter()
            .map(|r| rule_from_json(r, sig))
            .collect::<Result<_, _>>()?;
        let metavariables = v["metavariables"]
            .as_object()
            .map(|o| o.iter().filter_map(|(k, x)| Some((k.clone(), x.as_str()?.to_string()))).collect())
            .unwrap_or_default();
        Ok(RulesFile {
            axiom: v["axiom"].as_str().unwrap_or_default().to_string(),
            rules,
            metavariables,
        })
    }
}

/// Proof-tree style rendering: premises over a line, then the conclusion and
/// the rule name; contract rules follow their parent.
pub fn render(rule: &InceptionRule) -> String {
    let mut out = String::new();
    for r in rule.closure() {
        let prem: Vec<String> = r
            .premises
            .iter()
            .map(|p| match p {
                Premise::Plain(s) => s.to_string(),
                Premise::Contract(c) => {
                    let names: Vec<&str> = c.rules.iter().map(|r| r.name.as_str()).collect();
                    format!("[{}]^{{{}}}_{{{}}}", c.aim, names.join(", "), c.uninstantiable.join(", "))
                }
            })
            .collect();
        let top = prem.join("    ");
        let bottom = r.conclusion.to_string();
        let w = top.chars().count().max(bottom.chars().count());
        let pad = |s: &str| format!("{}{s}", " ".repeat((w - s.chars().count()) / 2));
        out.push_str(&format!("{}\n{} {} (depth {})\n{}\n\n", pad(&top), "-".repeat(w), r.name, r.depth, pad(&bottom)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alba::run_alba;
    use crate::syntax::parse_inequality;
    use crate::syntax::tests::sig;

    fn gen(t: &str) -> InceptionRule {
        let s = sig();
        let r = run_alba(&parse_inequality(t, &s).unwrap(), &s).unwrap();
        translate(&r.components[0].clause, "R", &s).unwrap().0
    }

    fn plain(name: &str, prem: &[&str], concl: &str) -> InceptionRule {
        let s = sig();
        InceptionRule {
            name: name.into(),
            premises: prem.iter().map(|p| Premise::Plain(parse_sequent(p, &s).unwrap())).collect(),
            conclusion: parse_sequent(concl, &s).unwrap(),
            depth: 0,
        }
    }

    #[test]
    fn example_letters() {
        let r = gen("box(dia(p) o p) o dia(p) <= p");
        assert_eq!(r.conclusion.to_string(), "^o(X, ^dia(Y)) |- Z");
        assert_eq!(r.depth, 1);
        let Premise::Contract(c) = &r.premises[1] else { panic!() };
        assert_eq!(c.aim.to_string(), "X |- !box(N)");
        assert_eq!(c.rules[0].conclusion.to_string(), "^o(^dia(K), H) |- N");
        assert!(lint(&r, &sig()).is_empty(), "{:?}", lint(&r, &sig()));
    }

    #[test]
    fn depth_matches_clause() {
        let s = sig();
        for (t, d) in [
            ("dia(p) <= box(dia(p) o p)", 0),
            ("p <= dia(box(dia(box(dia(p)))))", 2),
            ("dia(p) <= dia(box(dia(box(dia(box(dia(p)))))))", 3),
        ] {
            let run = run_alba(&parse_inequality(t, &s).unwrap(), &s).unwrap();
            let r = translate(&run.components[0].clause, "R", &s).unwrap().0;
            assert_eq!(r.depth, d, "{t}");
            assert_eq!(run.components[0].clause.depth(), d, "{t}");
        }
    }

    #[test]
    fn json_round_trip() {
        let s = sig();
        let r = gen("dia(p) <= dia(box(dia(box(dia(box(dia(p)))))))");
        let f = RulesFile {
            axiom: "x".into(),
            rules: vec![r],
            metavariables: BTreeMap::new(),
        };
        assert_eq!(RulesFile::from_json(&f.to_json(), &s).unwrap(), f);
    }

    #[test]
    fn alpha_renaming() {
        let a = plain("a", &["Y |- Z"], "^o(X, ^dia(Y)) |- Z");
        let b = plain("b", &["B |- C"], "^o(A, ^dia(B)) |- C");
        let c = plain("c", &["A |- C"], "^o(A, ^dia(B)) |- C");
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn analytic_checks() {
        assert!(check_analytic(&plain("R1", &["K |- Z", "H |- Z"], "^o(^dia(K), H) |- Z")).is_empty());
        let dup = check_analytic(&plain("d", &[], "^o(X, X) |- Y"));
        assert!(dup.iter().any(|i| i.msg.contains('X')));
        assert!(!check_analytic(&plain("contraction", &["X |- Y"], "^o(X, X) |- Y")).is_empty());
        assert!(!check_analytic(&plain("weak", &["X |- Y"], "Z |- Y")).is_empty());
    }

    #[test]
    fn lint_catches_formula_and_sorts() {
        let s = sig();
        assert!(lint(&plain("f", &[], "p |- Y"), &s).iter().any(|i| i.condition == "C1"));
        assert!(lint(&plain("g", &["X |- Y"], "^o(X, Y) |- Z"), &s).iter().any(|i| i.condition == "C2"));
    }
}
