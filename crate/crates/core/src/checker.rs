//! Derivations in an inception display calculus and their checker: rule
//! instances, dreams, parameter freshness and scope, congruence, inception
//! depth and cut-freeness.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::{
    base_rules, check_sorts, display_path, match_sequent, parse_sequent, parse_structure, Sequent, Side, Structure,
    Subst, CUT_RULE, ID_RULE,
};
use crate::rulegen::{InceptionRule, RulesFile};
use crate::signature::Signature;
use crate::syntax::Formula;

/// One step from a node to a premise or a dream, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Premise(usize),
    Dream(usize),
}

pub type NodePath = Vec<Step>;

pub fn path_string(p: &[Step]) -> String {
    if p.is_empty() {
        return "/".into();
    }
    p.iter()
        .map(|s| match s {
            Step::Premise(i) => format!("/p{}", i + 1),
            Step::Dream(i) => format!("/d{}", i + 1),
        })
        .collect()
}

pub fn parse_path(text: &str) -> Option<NodePath> {
    if text == "/" {
        return Some(vec![]);
    }
    text.strip_prefix('/')?
        .split('/')
        .map(|s| {
            let n: usize = s.get(1..)?.parse().ok()?;
            match s.as_bytes().first()? {
                b'p' if n > 0 => Some(Step::Premise(n - 1)),
                b'd' if n > 0 => Some(Step::Dream(n - 1)),
                _ => None,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub seq: Sequent,
    pub rule: String,
    pub premises: Vec<Derivation>,
    pub dreams: Vec<Derivation>,
    /// Optional bindings recorded in the derivation file; checked when present.
    pub subst: BTreeMap<String, Structure>,
}

impl Derivation {
    pub fn leaf(seq: Sequent, rule: &str) -> Derivation {
        Derivation::node(seq, rule, vec![], vec![])
    }

    pub fn node(seq: Sequent, rule: &str, premises: Vec<Derivation>, dreams: Vec<Derivation>) -> Derivation {
        Derivation {
            seq,
            rule: rule.to_string(),
            premises,
            dreams,
            subst: BTreeMap::new(),
        }
    }

    pub fn get(&self, path: &[Step]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((Step::Premise(i), rest)) => self.premises.get(*i)?.get(rest),
            Some((Step::Dream(i), rest)) => self.dreams.get(*i)?.get(rest),
        }
    }

    pub fn get_mut(&mut self, path: &[Step]) -> Option<&mut Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((Step::Premise(i), rest)) => self.premises.get_mut(*i)?.get_mut(rest),
            Some((Step::Dream(i), rest)) => self.dreams.get_mut(*i)?.get_mut(rest),
        }
    }

    /// Children with their steps: premises first, then dreams.
    pub fn children(&self) -> impl Iterator<Item = (Step, &Derivation)> {
        self.premises
            .iter()
            .enumerate()
            .map(|(i, d)| (Step::Premise(i), d))
            .chain(self.dreams.iter().enumerate().map(|(i, d)| (Step::Dream(i), d)))
    }

    /// Height counting dreams as subderivations.
    pub fn height(&self) -> usize {
        1 + self.children().map(|(_, d)| d.height()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().map(|(_, d)| d.size()).sum::<usize>()
    }

    /// Every node path in preorder.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = vec![vec![]];
        for (s, d) in self.children() {
            for mut p in d.paths() {
                p.insert(0, s);
                out.push(p);
            }
        }
        out
    }

    pub fn count_rule(&self, name: &str) -> usize {
        usize::from(self.rule == name) + self.children().map(|(_, d)| d.count_rule(name)).sum::<usize>()
    }

    pub fn is_cut_free(&self) -> bool {
        self.count_rule(CUT_RULE) == 0
    }

    pub fn params(&self, out: &mut BTreeSet<String>) {
        out.extend(self.seq.params());
        self.children().for_each(|(_, d)| d.params(out));
    }

    pub fn rename_params(&self, map: &BTreeMap<String, String>) -> Derivation {
        Derivation {
            seq: self.seq.rename_params(map),
            rule: self.rule.clone(),
            premises: self.premises.iter().map(|d| d.rename_params(map)).collect(),
            dreams: self.dreams.iter().map(|d| d.rename_params(map)).collect(),
            subst: self.subst.iter().map(|(k, v)| (k.clone(), v.rename_params(map))).collect(),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({ "seq": self.seq.to_string(), "rule": self.rule });
        if !self.premises.is_empty() {
            v["premises"] = Value::Array(self.premises.iter().map(|d| d.to_value()).collect());
        }
        if !self.dreams.is_empty() {
            v["dreams"] = Value::Array(self.dreams.iter().map(|d| d.to_value()).collect());
        }
        if !self.subst.is_empty() {
            v["subst"] = Value::Object(self.subst.iter().map(|(k, s)| (k.clone(), json!(s.to_string()))).collect());
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }

    pub fn from_value(v: &Value, sig: &Signature) -> Result<Derivation, String> {
        let seq_text = v["seq"].as_str().ok_or("node without `seq`")?;
        let seq = parse_sequent(seq_text, sig).map_err(|e| format!("`{seq_text}`: {e}"))?;
        let rule = v["rule"].as_str().ok_or("node without `rule`")?.to_string();
        let list = |key: &str| -> Result<Vec<Derivation>, String> {
            v.get(key)
                .and_then(|a| a.as_array())
                .map(|a| a.iter().map(|d| Derivation::from_value(d, sig)).collect())
                .unwrap_or(Ok(vec![]))
        };
        let mut subst = BTreeMap::new();
        if let Some(o) = v.get("subst").and_then(|o| o.as_object()) {
            for (k, s) in o {
                let t = s.as_str().ok_or("substitution values must be strings")?;
                subst.insert(k.clone(), parse_structure(t, sig).map_err(|e| format!("`{t}`: {e}"))?);
            }
        }
        Ok(Derivation {
            seq,
            rule,
            premises: list("premises")?,
            dreams: list("dreams")?,
            subst,
        })
    }

    /// Parses a derivation file. Nodes named `dp*` with one premise are
    /// expanded into a chain of single display postulates.
    pub fn from_json(text: &str, sig: &Signature) -> Result<Derivation, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let d = Derivation::from_value(&v, sig)?;
        d.expand_display(sig)
    }

    fn expand_display(self, sig: &Signature) -> Result<Derivation, String> {
        let premises = self
            .premises
            .into_iter()
            .map(|d| d.expand_display(sig))
            .collect::<Result<Vec<_>, _>>()?;
        let dreams = self
            .dreams
            .into_iter()
            .map(|d| d.expand_display(sig))
            .collect::<Result<Vec<_>, _>>()?;
        if self.rule != "dp*" {
            return Ok(Derivation {
                premises,
                dreams,
                ..self
            });
        }
        let [child] = <[Derivation; 1]>::try_from(premises).map_err(|_| "`dp*` needs one premise".to_string())?;
        let chain = display_path(&self.seq, &child.seq, sig, 12)
            .ok_or_else(|| format!("no display path from `{}` to `{}`", self.seq, child.seq))?;
        let mut node = child;
        for s in chain.into_iter().rev().skip(1) {
            node = Derivation::node(s, "dp", vec![node], vec![]);
        }
        Ok(node)
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, "", "");
        out
    }

    fn render_into(&self, out: &mut String, indent: &str, label: &str) {
        out.push_str(&format!("{indent}{label}{}   [{}]\n", self.seq, self.rule));
        let inner = format!("{indent}  ");
        for (s, d) in self.children() {
            let l = match s {
                Step::Premise(_) => "",
                Step::Dream(_) => "dream: ",
            };
            d.render_into(out, &inner, l);
        }
    }
}

/// A signature together with its inception rules; base rules are implicit.
#[derive(Clone, Debug)]
pub struct Calculus {
    pub sig: Signature,
    pub rules: Vec<InceptionRule>,
    pub base: Vec<InceptionRule>,
}

impl Calculus {
    pub fn new(sig: Signature, rules: Vec<InceptionRule>) -> Calculus {
        let base = base_rules(&sig);
        Calculus { sig, rules, base }
    }

    /// Loads `{"signature": path, "rules": [paths]}`, with paths relative to the file.
    pub fn load(path: &Path) -> Result<Calculus, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let sig_path = dir.join(v["signature"].as_str().ok_or("calculus without `signature`")?);
        let sig_text = std::fs::read_to_string(&sig_path).map_err(|e| format!("{}: {e}", sig_path.display()))?;
        let sig = Signature::from_json(&sig_text).map_err(|e| e.to_string())?;
        let mut rules = Vec::new();
        for r in v["rules"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
            let p = dir.join(r.as_str().ok_or("rules entries must be paths")?);
            let t = std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            rules.extend(RulesFile::from_json(&t, &sig).map_err(|e| format!("{}: {e}", p.display()))?.rules);
        }
        Ok(Calculus::new(sig, rules))
    }

    pub fn find(&self, name: &str) -> Option<&InceptionRule> {
        self.rules.iter().chain(&self.base).find(|r| r.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckErrorKind {
    Sort,
    ParamScope,
    UnknownRule,
    Unavailable,
    Conclusion,
    PremiseCount,
    DreamCount,
    Premise(usize),
    Aim(usize),
    Uninstantiable,
    ParamReuse,
    Subst,
}

impl CheckErrorKind {
    /// Stable short name, used in mutant files and command output.
    pub fn code(&self) -> &'static str {
        match self {
            CheckErrorKind::Sort => "sort",
            CheckErrorKind::ParamScope => "param-scope",
            CheckErrorKind::UnknownRule => "unknown-rule",
            CheckErrorKind::Unavailable => "unavailable",
            CheckErrorKind::Conclusion => "conclusion",
            CheckErrorKind::PremiseCount => "premise-count",
            CheckErrorKind::DreamCount => "dream-count",
            CheckErrorKind::Premise(_) => "premise",
            CheckErrorKind::Aim(_) => "aim",
            CheckErrorKind::Uninstantiable => "uninstantiable",
            CheckErrorKind::ParamReuse => "param-reuse",
            CheckErrorKind::Subst => "subst",
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{}: {msg}", path_string(.path))]
pub struct CheckError {
    pub path: NodePath,
    pub kind: CheckErrorKind,
    pub msg: String,
}

/// An occurrence of a substructure: node, side and argument path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occ {
    pub node: NodePath,
    pub side: Side,
    pub path: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Node(Occ),
    Inst(usize, Vec<usize>),
}

/// Congruence classes of occurrences, and the occurrences that lie inside the
/// instance of a metavariable of the rule applied at their node.
#[derive(Clone, Debug, Default)]
pub struct Congruence {
    pub classes: Vec<Vec<Occ>>,
    class_of: HashMap<Occ, usize>,
    pub parametric: BTreeSet<Occ>,
}

impl Congruence {
    pub fn class_of(&self, o: &Occ) -> Option<&[Occ]> {
        self.class_of.get(o).map(|&i| self.classes[i].as_slice())
    }

    pub fn is_parametric(&self, o: &Occ) -> bool {
        self.parametric.contains(o)
    }
}

#[derive(Default)]
struct UnionFind {
    index: HashMap<Key, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    fn id(&mut self, k: Key) -> usize {
        if let Some(&i) = self.index.get(&k) {
            return i;
        }
        let i = self.parent.len();
        self.parent.push(i);
        self.index.insert(k, i);
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: Key, b: Key) {
        let (a, b) = (self.id(a), self.id(b));
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a] = b;
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub depth: usize,
    pub cut_free: bool,
    pub nodes: usize,
    pub congruence: Congruence,
}

/// Metavariables bound by enclosing rule applications, with their instance ids.
type Env = BTreeMap<String, (Structure, usize)>;

#[derive(Clone)]
struct ScopedRule {
    rule: InceptionRule,
    env: Env,
}

#[derive(Clone)]
struct Scope {
    in_dream: bool,
    contract_rules: Vec<ScopedRule>,
    params: BTreeSet<String>,
}

struct Run<'a> {
    calc: &'a Calculus,
    used_params: BTreeSet<String>,
    sorts: BTreeMap<String, crate::kernel::Sort>,
    uf: UnionFind,
    parametric: BTreeSet<Occ>,
    next_inst: usize,
    depth: usize,
}

fn err(path: &[Step], kind: CheckErrorKind, msg: impl Into<String>) -> CheckError {
    CheckError {
        path: path.to_vec(),
        kind,
        msg: msg.into(),
    }
}

/// Meta occurrences in a schema sequent: meta name, side and path.
fn meta_positions(s: &Sequent) -> Vec<(String, Side, Vec<usize>)> {
    let mut out = Vec::new();
    for side in [Side::Ante, Side::Succ] {
        for p in s.side(side).paths() {
            if let Some(Structure::Meta(m)) = s.side(side).at(&p) {
                out.push((m.clone(), side, p));
            }
        }
    }
    out
}

impl Run<'_> {
    fn candidates<'s>(&'s self, name: &str, scope: &'s Scope) -> Result<Vec<(InceptionRule, Env)>, CheckErrorKind> {
        if let Some(r) = scope.contract_rules.iter().find(|r| r.rule.name == name) {
            return Ok(vec![(r.rule.clone(), r.env.clone())]);
        }
        if name == "dp" {
            return Ok(self
                .calc
                .base
                .iter()
                .filter(|r| r.name.starts_with("dp."))
                .map(|r| (r.clone(), Env::new()))
                .collect());
        }
        if let Some(r) = self.calc.rules.iter().find(|r| r.name == name) {
            if scope.in_dream && r.depth > 0 {
                return Err(CheckErrorKind::Unavailable);
            }
            return Ok(vec![(r.clone(), Env::new())]);
        }
        if let Some(r) = self.calc.base.iter().find(|r| r.name == name) {
            return Ok(vec![(r.clone(), Env::new())]);
        }
        Err(CheckErrorKind::UnknownRule)
    }

    fn check(&mut self, d: &Derivation, path: &NodePath, scope: &Scope) -> Result<(), CheckError> {
        check_sorts(&d.seq, &self.calc.sig, &mut self.sorts)
            .map_err(|e| err(path, CheckErrorKind::Sort, e.to_string()))?;
        if !d.seq.metas().is_empty() {
            return Err(err(path, CheckErrorKind::Sort, "metavariable in a concrete sequent"));
        }
        for p in d.seq.params() {
            if !scope.params.contains(&p) {
                return Err(err(path, CheckErrorKind::ParamScope, format!("parameter #{p} used outside its contract")));
            }
        }
        let cands = self.candidates(&d.rule, scope).map_err(|k| {
            let msg = match k {
                CheckErrorKind::Unavailable => format!("rule {} is not available inside a dream", d.rule),
                _ => format!("unknown rule {}", d.rule),
            };
            err(path, k, msg)
        })?;
        let mut last = None;
        for (rule, env) in &cands {
            match self.try_rule(d, path, scope, rule, env) {
                Ok(()) => return Ok(()),
                Err(e) if cands.len() > 1 && e.path == *path => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.unwrap_or_else(|| err(path, CheckErrorKind::Conclusion, format!("no display postulate yields `{}`", d.seq))))
    }

    fn try_rule(
        &mut self,
        d: &Derivation,
        path: &NodePath,
        scope: &Scope,
        rule: &InceptionRule,
        env: &Env,
    ) -> Result<(), CheckError> {
        let name = &rule.name;
        if name == ID_RULE {
            return match (&d.seq.ante, &d.seq.succ) {
                (Structure::Formula(Formula::Atom(a)), Structure::Formula(Formula::Atom(b)))
                    if a == b && d.premises.is_empty() && d.dreams.is_empty() =>
                {
                    Ok(())
                }
                _ => Err(err(path, CheckErrorKind::Conclusion, format!("`{}` is not an identity axiom", d.seq))),
            };
        }
        let mut s = Subst::default();
        for (m, (v, _)) in env {
            s.structs.insert(m.clone(), v.clone());
        }
        let never = |_: &str| false;
        if !match_sequent(&rule.conclusion, &d.seq, &mut s, &never) {
            return Err(err(
                path,
                CheckErrorKind::Conclusion,
                format!("`{}` is not an instance of the conclusion `{}` of {name}", d.seq, rule.conclusion),
            ));
        }
        let plain: Vec<&Sequent> = rule.plain_premises().collect();
        let contracts: Vec<_> = rule.contracts().collect();
        if plain.len() != d.premises.len() {
            return Err(err(
                path,
                CheckErrorKind::PremiseCount,
                format!("{name} has {} premises, node has {}", plain.len(), d.premises.len()),
            ));
        }
        if contracts.len() != d.dreams.len() {
            return Err(err(
                path,
                CheckErrorKind::DreamCount,
                format!("{name} has {} contracts, node has {} dreams", contracts.len(), d.dreams.len()),
            ));
        }
        for (i, (p, c)) in plain.iter().zip(&d.premises).enumerate() {
            if !match_sequent(p, &c.seq, &mut s, &never) {
                return Err(err(
                    path,
                    CheckErrorKind::Premise(i),
                    format!("premise {} `{}` does not match `{}` under {name}", i + 1, c.seq, p.subst(&s)),
                ));
            }
        }
        let mut fresh = Vec::new();
        for (i, (c, dream)) in contracts.iter().zip(&d.dreams).enumerate() {
            let xs: BTreeSet<&str> = c.uninstantiable.iter().map(|x| x.as_str()).collect();
            let uninst = |m: &str| xs.contains(m);
            let before = s.clone();
            if !match_sequent(&c.aim, &dream.seq, &mut s, &uninst) {
                let mut loose = before.clone();
                let why = if match_sequent(&c.aim, &dream.seq, &mut loose, &never) {
                    (CheckErrorKind::Uninstantiable, "an uninstantiable variable is instantiated".to_string())
                } else {
                    (CheckErrorKind::Aim(i), format!("dream {} `{}` does not prove the aim `{}`", i + 1, dream.seq, c.aim.subst(&s)))
                };
                return Err(err(path, why.0, why.1));
            }
            for x in &c.uninstantiable {
                match s.structs.get(x) {
                    Some(Structure::Param(p)) => {
                        if scope.params.contains(p) || fresh.contains(p) || !self.used_params.insert(p.clone()) {
                            return Err(err(path, CheckErrorKind::ParamReuse, format!("parameter #{p} for {x} is not fresh")));
                        }
                        fresh.push(p.clone());
                    }
                    Some(v) => {
                        return Err(err(path, CheckErrorKind::Uninstantiable, format!("uninstantiable {x} instantiated to `{v}`")))
                    }
                    None => {
                        let p = format!("{x}_{}", self.used_params.len());
                        return Err(err(
                            path,
                            CheckErrorKind::Uninstantiable,
                            format!("uninstantiable {x} does not occur in the dream conclusion; expected a parameter such as #{p}"),
                        ));
                    }
                }
            }
        }
        for (k, v) in &d.subst {
            let got = s.structs.get(k).or_else(|| env.get(k).map(|e| &e.0));
            if got != Some(v) {
                return Err(err(path, CheckErrorKind::Subst, format!("recorded binding {k} := {v} disagrees with the match")));
            }
        }
        for m in crate::kernel::rule_metas(rule) {
            if !s.structs.contains_key(&m) && !contracts.iter().any(|c| c.uninstantiable.contains(&m)) {
                return Err(err(path, CheckErrorKind::Subst, format!("metavariable {m} is not determined")));
            }
        }
        self.depth = self.depth.max(rule.depth);

        let mut inst: BTreeMap<String, usize> = env.iter().map(|(m, (_, i))| (m.clone(), *i)).collect();
        for m in s.structs.keys() {
            if !inst.contains_key(m) {
                inst.insert(m.clone(), self.next_inst);
                self.next_inst += 1;
            }
        }
        let link = |schema: &Sequent, node: &NodePath, conclusion: bool, this: &mut Self| {
            for (m, side, p) in meta_positions(schema) {
                let Some(v) = s.structs.get(&m) else { continue };
                for sub in v.paths() {
                    let mut full = p.clone();
                    full.extend(&sub);
                    let occ = Occ {
                        node: node.clone(),
                        side,
                        path: full,
                    };
                    if conclusion {
                        this.parametric.insert(occ.clone());
                    }
                    this.uf.union(Key::Node(occ), Key::Inst(inst[&m], sub));
                }
            }
        };
        link(&rule.conclusion, path, true, self);
        for (i, p) in plain.iter().enumerate() {
            let mut cp = path.clone();
            cp.push(Step::Premise(i));
            link(p, &cp, false, self);
        }
        for (i, c) in contracts.iter().enumerate() {
            let mut cp = path.clone();
            cp.push(Step::Dream(i));
            link(&c.aim, &cp, false, self);
        }

        for (i, c) in d.premises.iter().enumerate() {
            let mut cp = path.clone();
            cp.push(Step::Premise(i));
            self.check(c, &cp, scope)?;
        }
        for (i, (c, dream)) in contracts.iter().zip(&d.dreams).enumerate() {
            let mut denv = env.clone();
            for (m, v) in &s.structs {
                denv.entry(m.clone()).or_insert((v.clone(), inst[m]));
            }
            let mut params = scope.params.clone();
            for x in &c.uninstantiable {
                if let Some(Structure::Param(p)) = s.structs.get(x) {
                    params.insert(p.clone());
                }
            }
            let inner = Scope {
                in_dream: true,
                contract_rules: c
                    .rules
                    .iter()
                    .map(|r| ScopedRule {
                        rule: r.clone(),
                        env: denv.clone(),
                    })
                    .collect(),
                params,
            };
            let mut cp = path.clone();
            cp.push(Step::Dream(i));
            self.check(dream, &cp, &inner)?;
        }
        Ok(())
    }
}

/// Sort discipline of every node, parameters included, before any rule is matched.
fn check_well_formed(d: &Derivation, sig: &Signature) -> Result<(), CheckError> {
    let mut sorts = BTreeMap::new();
    for p in d.paths() {
        let node = d.get(&p).expect("path from paths()");
        check_sorts(&node.seq, sig, &mut sorts).map_err(|e| err(&p, CheckErrorKind::Sort, e.to_string()))?;
        if !node.seq.metas().is_empty() {
            return Err(err(&p, CheckErrorKind::Sort, "metavariable in a concrete sequent"));
        }
    }
    Ok(())
}

/// Checks a derivation against a calculus. Sort errors are reported first;
/// otherwise the first error found in preorder, with its node path.
pub fn check(d: &Derivation, calc: &Calculus) -> Result<CheckReport, CheckError> {
    check_well_formed(d, &calc.sig)?;
    let mut run = Run {
        calc,
        used_params: BTreeSet::new(),
        sorts: BTreeMap::new(),
        uf: UnionFind::default(),
        parametric: BTreeSet::new(),
        next_inst: 0,
        depth: 0,
    };
    let scope = Scope {
        in_dream: false,
        contract_rules: vec![],
        params: BTreeSet::new(),
    };
    run.check(d, &vec![], &scope)?;
    let mut groups: BTreeMap<usize, Vec<Occ>> = BTreeMap::new();
    for p in d.paths() {
        let node = d.get(&p).expect("path from paths()");
        for (side, q) in node.seq.positions() {
            let occ = Occ {
                node: p.clone(),
                side,
                path: q,
            };
            let id = run.uf.id(Key::Node(occ.clone()));
            let root = run.uf.find(id);
            groups.entry(root).or_default().push(occ);
        }
    }
    let mut congruence = Congruence {
        parametric: run.parametric,
        ..Congruence::default()
    };
    for (_, occs) in groups {
        let i = congruence.classes.len();
        for o in &occs {
            congruence.class_of.insert(o.clone(), i);
        }
        congruence.classes.push(occs);
    }
    Ok(CheckReport {
        depth: run.depth,
        cut_free: d.is_cut_free(),
        nodes: d.size(),
        congruence,
    })
}

/// Maximal depth of an inception rule applied anywhere in the derivation.
pub fn inception_depth(d: &Derivation, calc: &Calculus) -> Result<usize, CheckError> {
    check(d, calc).map(|r| r.depth)
}

impl fmt::Display for Occ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}{}", path_string(&self.node), self.side, self.path.iter().map(|i| format!(".{}", i + 1)).collect::<String>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alba::run_alba;
    use crate::rulegen::translate;
    use crate::syntax::parse_inequality;
    use crate::syntax::tests::sig;

    fn calc() -> Calculus {
        let s = sig();
        let run = run_alba(&parse_inequality("box(dia(p) o p) o dia(p) <= p", &s).unwrap(), &s).unwrap();
        let r = translate(&run.components[0].clause, "ex32", &s).unwrap().0;
        Calculus::new(s, vec![r])
    }

    fn n(seq: &str, rule: &str, premises: Vec<Derivation>, dreams: Vec<Derivation>) -> Derivation {
        Derivation::node(parse_sequent(seq, &sig()).unwrap(), rule, premises, dreams)
    }

    /// The derivation of the axiom's sequent with the generated rule.
    fn ex32() -> Derivation {
        let id = |a: &str| n(&format!("{a} |- {a}"), "Id", vec![], vec![]);
        let dream = n(
            "box(dia(p) o p) |- !box(#N1)",
            "box_L",
            vec![n(
                "dia(p) o p |- #N1",
                "o_L",
                vec![n(
                    "^o(dia(p), p) |- #N1",
                    "dp",
                    vec![n(
                        "dia(p) |- !o.rres.1(#N1, p)",
                        "dia_L",
                        vec![n(
                            "^dia(p) |- !o.rres.1(#N1, p)",
                            "dp",
                            vec![n("^o(^dia(p), p) |- #N1", "ex32.c1.r1", vec![id("p"), id("p")], vec![])],
                            vec![],
                        )],
                        vec![],
                    )],
                    vec![],
                )],
                vec![],
            )],
            vec![],
        );
        n(
            "box(dia(p) o p) o dia(p) |- p",
            "o_L",
            vec![n(
                "^o(box(dia(p) o p), dia(p)) |- p",
                "dp",
                vec![n(
                    "dia(p) |- !o.rres.2(box(dia(p) o p), p)",
                    "dia_L",
                    vec![n(
                        "^dia(p) |- !o.rres.2(box(dia(p) o p), p)",
                        "dp",
                        vec![n("^o(box(dia(p) o p), ^dia(p)) |- p", "ex32", vec![id("p")], vec![dream])],
                        vec![],
                    )],
                    vec![],
                )],
                vec![],
            )],
            vec![],
        )
    }

    #[test]
    fn accepts_example() {
        let r = check(&ex32(), &calc()).unwrap();
        assert_eq!(r.depth, 1);
        assert!(r.cut_free);
    }

    #[test]
    fn rejects_instantiated_parameter() {
        let mut d = ex32();
        let text = d.to_json().replace("#N1", "p");
        d = Derivation::from_json(&text, &sig()).unwrap();
        let e = check(&d, &calc()).unwrap_err();
        assert_eq!(path_string(&e.path), "/p1/p1/p1/p1");
        assert_eq!(e.kind, CheckErrorKind::Uninstantiable);
    }

    #[test]
    fn rejects_missing_dream() {
        let mut d = ex32();
        d.get_mut(&parse_path("/p1/p1/p1/p1").unwrap()).unwrap().dreams.clear();
        let e = check(&d, &calc()).unwrap_err();
        assert_eq!(e.kind, CheckErrorKind::DreamCount);
    }

    #[test]
    fn contract_rule_only_in_its_dream() {
        let d = n("^o(^dia(p), p) |- q", "ex32.c1.r1", vec![], vec![]);
        let e = check(&d, &calc()).unwrap_err();
        assert_eq!(e.kind, CheckErrorKind::UnknownRule);
    }

    #[test]
    fn congruence_links_dream_to_outer_rule() {
        let d = ex32();
        let r = check(&d, &calc()).unwrap();
        let root = Occ {
            node: parse_path("/p1/p1/p1/p1").unwrap(),
            side: Side::Succ,
            path: vec![],
        };
        let class = r.congruence.class_of(&root).unwrap();
        let inner = parse_path("/p1/p1/p1/p1/d1/p1/p1/p1/p1/p1/p1").unwrap();
        assert!(class.iter().any(|o| o.node == inner), "{class:?}");
    }

    #[test]
    fn paths_round_trip() {
        for t in ["/", "/p1", "/d2/p1/p3"] {
            assert_eq!(path_string(&parse_path(t).unwrap()), t);
        }
        assert!(parse_path("/x1").is_none());
        assert!(parse_path("/p0").is_none());
    }
}
