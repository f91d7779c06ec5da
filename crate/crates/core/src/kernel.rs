//! The base display calculus: two-sorted structures and sequents, display
//! postulates, logical rules, Id and Cut, and schema matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::lexer::{Cursor, ParseError, Tok};
use crate::rulegen::{Contract, InceptionRule, Premise};
use crate::signature::{Family, Polarity, Signature};
use crate::syntax::{parse_formula_at, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    F,
    G,
}

impl Sort {
    pub fn of_family(f: Family) -> Sort {
        match f {
            Family::F => Sort::F,
            Family::G => Sort::G,
        }
    }

    pub fn flip(self) -> Sort {
        match self {
            Sort::F => Sort::G,
            Sort::G => Sort::F,
        }
    }

    /// Sort of argument `i` of a structural connective of this sort with polarity `e`.
    pub fn arg(self, e: Polarity) -> Sort {
        match e {
            Polarity::Pos => self,
            Polarity::Neg => self.flip(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Ante,
    Succ,
}

impl Side {
    pub fn sort(self) -> Sort {
        match self {
            Side::Ante => Sort::F,
            Side::Succ => Sort::G,
        }
    }

    pub fn of_sort(s: Sort) -> Side {
        match s {
            Sort::F => Side::Ante,
            Sort::G => Side::Succ,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Ante => write!(f, "ante"),
            Side::Succ => write!(f, "succ"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Formula(Formula),
    /// Structural counterpart of a connective; `Family::F` prints as `^name`, `G` as `!name`.
    Conn(Family, String, Vec<Structure>),
    /// `^top`
    TopUnit,
    /// `!bot`
    BotUnit,
    /// A fresh parameter standing for an uninstantiable variable, written `#id`.
    Param(String),
    /// A structure metavariable of a rule schema, written as a capitalised identifier.
    Meta(String),
}

/// Position of a substructure: the side of the sequent and the argument path.
pub type Position = (Side, Vec<usize>);

impl Structure {
    pub fn formula(f: Formula) -> Structure {
        Structure::Formula(f)
    }

    pub fn meta(m: &str) -> Structure {
        Structure::Meta(m.to_string())
    }

    pub fn args(&self) -> &[Structure] {
        match self {
            Structure::Conn(_, _, args) => args,
            _ => &[],
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Structure> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i)?.at(rest),
        }
    }

    pub fn replace_at(&self, path: &[usize], by: Structure) -> Structure {
        match path.split_first() {
            None => by,
            Some((&i, rest)) => match self {
                Structure::Conn(fam, n, args) => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, by);
                    Structure::Conn(*fam, n.clone(), args)
                }
                _ => panic!("invalid structure path"),
            },
        }
    }

    /// All argument paths, in preorder.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for (i, a) in self.args().iter().enumerate() {
            for mut p in a.paths() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    pub fn height(&self) -> usize {
        1 + self.args().iter().map(|a| a.height()).max().unwrap_or(0)
    }

    pub fn metas(&self, out: &mut Vec<String>) {
        match self {
            Structure::Meta(m) => {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            _ => self.args().iter().for_each(|a| a.metas(out)),
        }
    }

    pub fn params(&self, out: &mut BTreeSet<String>) {
        match self {
            Structure::Param(p) => {
                out.insert(p.clone());
            }
            _ => self.args().iter().for_each(|a| a.params(out)),
        }
    }

    pub fn has_formula(&self) -> bool {
        match self {
            Structure::Formula(_) => true,
            _ => self.args().iter().any(|a| a.has_formula()),
        }
    }

    pub fn subst(&self, s: &Subst) -> Structure {
        match self {
            Structure::Meta(m) => s.structs.get(m).cloned().unwrap_or_else(|| self.clone()),
            Structure::Formula(f) => Structure::Formula(subst_formula(f, s)),
            Structure::Conn(fam, n, args) => {
                Structure::Conn(*fam, n.clone(), args.iter().map(|a| a.subst(s)).collect())
            }
            _ => self.clone(),
        }
    }

    pub fn rename_params(&self, map: &BTreeMap<String, String>) -> Structure {
        match self {
            Structure::Param(p) => Structure::Param(map.get(p).cloned().unwrap_or_else(|| p.clone())),
            Structure::Conn(fam, n, args) => Structure::Conn(
                *fam,
                n.clone(),
                args.iter().map(|a| a.rename_params(map)).collect(),
            ),
            _ => self.clone(),
        }
    }

    pub fn rename_metas(&self, map: &BTreeMap<String, String>) -> Structure {
        match self {
            Structure::Meta(m) => Structure::Meta(map.get(m).cloned().unwrap_or_else(|| m.clone())),
            Structure::Conn(fam, n, args) => Structure::Conn(
                *fam,
                n.clone(),
                args.iter().map(|a| a.rename_metas(map)).collect(),
            ),
            _ => self.clone(),
        }
    }
}

fn subst_formula(f: &Formula, s: &Subst) -> Formula {
    match f {
        Formula::Meta(a) => s.formulas.get(a).cloned().unwrap_or_else(|| f.clone()),
        _ => f.map_children(|c| subst_formula(c, s)),
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Formula(x) => {
                if matches!(x, Formula::And(..) | Formula::Or(..))
                    || matches!(x, Formula::Conn(_, a) if a.len() == 2)
                {
                    write!(f, "({x})")
                } else {
                    write!(f, "{x}")
                }
            }
            Structure::Conn(fam, n, args) => {
                let mark = match fam {
                    Family::F => '^',
                    Family::G => '!',
                };
                write!(f, "{mark}{n}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Structure::TopUnit => write!(f, "^top"),
            Structure::BotUnit => write!(f, "!bot"),
            Structure::Param(p) => write!(f, "#{p}"),
            Structure::Meta(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ante: Structure,
    pub succ: Structure,
}

impl Sequent {
    pub fn new(ante: Structure, succ: Structure) -> Sequent {
        Sequent { ante, succ }
    }

    pub fn side(&self, s: Side) -> &Structure {
        match s {
            Side::Ante => &self.ante,
            Side::Succ => &self.succ,
        }
    }

    pub fn at(&self, pos: &Position) -> Option<&Structure> {
        self.side(pos.0).at(&pos.1)
    }

    pub fn replace_at(&self, pos: &Position, by: Structure) -> Sequent {
        let mut s = self.clone();
        match pos.0 {
            Side::Ante => s.ante = s.ante.replace_at(&pos.1, by),
            Side::Succ => s.succ = s.succ.replace_at(&pos.1, by),
        }
        s
    }

    pub fn positions(&self) -> Vec<Position> {
        let mut out: Vec<Position> = self.ante.paths().into_iter().map(|p| (Side::Ante, p)).collect();
        out.extend(self.succ.paths().into_iter().map(|p| (Side::Succ, p)));
        out
    }

    pub fn metas(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.ante.metas(&mut out);
        self.succ.metas(&mut out);
        out
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.ante.params(&mut out);
        self.succ.params(&mut out);
        out
    }

    pub fn subst(&self, s: &Subst) -> Sequent {
        Sequent::new(self.ante.subst(s), self.succ.subst(s))
    }

    pub fn rename_params(&self, map: &BTreeMap<String, String>) -> Sequent {
        Sequent::new(self.ante.rename_params(map), self.succ.rename_params(map))
    }

    pub fn rename_metas(&self, map: &BTreeMap<String, String>) -> Sequent {
        Sequent::new(self.ante.rename_metas(map), self.succ.rename_metas(map))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.ante, self.succ)
    }
}

pub fn parse_structure(text: &str, sig: &Signature) -> Result<Structure, ParseError> {
    let mut cur = Cursor::new(text)?;
    let s = parse_structure_at(&mut cur, sig)?;
    cur.finish()?;
    Ok(s)
}

pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent, ParseError> {
    let mut cur = Cursor::new(text)?;
    let ante = parse_structure_at(&mut cur, sig)?;
    cur.expect(&Tok::Turnstile)?;
    let succ = parse_structure_at(&mut cur, sig)?;
    cur.finish()?;
    Ok(Sequent::new(ante, succ))
}

fn is_meta_name(name: &str, sig: &Signature) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase()) && !sig.contains(name)
}

pub fn parse_structure_at(cur: &mut Cursor, sig: &Signature) -> Result<Structure, ParseError> {
    let pos = cur.offset();
    match cur.peek().cloned() {
        Some(Tok::Hat(n)) | Some(Tok::Check(n)) => {
            let hat = matches!(cur.peek(), Some(Tok::Hat(_)));
            cur.next();
            match (hat, n.as_str()) {
                (true, "top") => return Ok(Structure::TopUnit),
                (false, "bot") => return Ok(Structure::BotUnit),
                _ => {}
            }
            let c = sig
                .get(&n)
                .ok_or_else(|| ParseError::new(pos, format!("unknown structural connective `{n}`")))?;
            let want = if hat { Family::F } else { Family::G };
            if c.family != want {
                let (m, w) = if hat { ('^', "an F") } else { ('!', "a G") };
                return Err(ParseError::new(
                    pos,
                    format!("`{m}{n}` requires {w} connective"),
                ));
            }
            let mut args = Vec::new();
            if cur.eat(&Tok::LParen) && !cur.eat(&Tok::RParen) {
                loop {
                    args.push(parse_structure_at(cur, sig)?);
                    if cur.eat(&Tok::RParen) {
                        break;
                    }
                    cur.expect(&Tok::Comma)?;
                }
            }
            if args.len() != c.arity() {
                return Err(ParseError::new(
                    pos,
                    format!("`{n}` expects {} arguments, got {}", c.arity(), args.len()),
                ));
            }
            Ok(Structure::Conn(want, n, args))
        }
        Some(Tok::Param(p)) => {
            cur.next();
            Ok(Structure::Param(p))
        }
        Some(Tok::Ident(n))
            if is_meta_name(&n, sig) && cur.peek_at(1) != Some(&Tok::LParen) && !is_infix_next(cur, sig) =>
        {
            cur.next();
            Ok(Structure::Meta(n))
        }
        _ => Ok(Structure::Formula(parse_formula_at(cur, sig)?)),
    }
}

fn is_infix_next(cur: &Cursor, sig: &Signature) -> bool {
    matches!(cur.peek_at(1), Some(Tok::Ident(n)) if sig.get(n).is_some_and(|c| c.arity() == 2))
        || matches!(cur.peek_at(1), Some(Tok::And) | Some(Tok::Or))
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("sort error at {side}{}: {msg}", path_suffix(.path))]
pub struct SortError {
    pub side: Side,
    pub path: Vec<usize>,
    pub msg: String,
}

fn path_suffix(p: &[usize]) -> String {
    p.iter().map(|i| format!(".{}", i + 1)).collect()
}

/// Checks the two-sorted grammar and returns the sort assigned to each metavariable.
pub fn check_sorts(seq: &Sequent, sig: &Signature, metas: &mut BTreeMap<String, Sort>) -> Result<(), SortError> {
    fn go(
        s: &Structure,
        want: Sort,
        side: Side,
        path: &mut Vec<usize>,
        sig: &Signature,
        metas: &mut BTreeMap<String, Sort>,
    ) -> Result<(), SortError> {
        let err = |path: &Vec<usize>, msg: String| SortError {
            side,
            path: path.clone(),
            msg,
        };
        match s {
            Structure::Formula(_) => Ok(()),
            Structure::Param(p) => {
                let key = format!("#{p}");
                match metas.get(&key) {
                    Some(&k) if k != want => Err(err(path, format!("parameter #{p} used with both sorts"))),
                    _ => {
                        metas.insert(key, want);
                        Ok(())
                    }
                }
            }
            Structure::TopUnit if want == Sort::F => Ok(()),
            Structure::BotUnit if want == Sort::G => Ok(()),
            Structure::TopUnit | Structure::BotUnit => {
                Err(err(path, format!("`{s}` cannot occur in {want:?}-sort position")))
            }
            Structure::Meta(m) => match metas.get(m) {
                Some(&k) if k != want => Err(err(path, format!("metavariable {m} used with both sorts"))),
                _ => {
                    metas.insert(m.clone(), want);
                    Ok(())
                }
            },
            Structure::Conn(fam, n, args) => {
                let c = sig
                    .get(n)
                    .ok_or_else(|| err(path, format!("unknown connective `{n}`")))?;
                if c.family != *fam || Sort::of_family(*fam) != want {
                    return Err(err(
                        path,
                        format!("`{s}` has {:?}-sort but occurs in {want:?}-sort position", Sort::of_family(c.family)),
                    ));
                }
                if args.len() != c.arity() {
                    return Err(err(path, format!("`{n}` expects {} arguments", c.arity())));
                }
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    go(a, want.arg(c.order_type.get(i)), side, path, sig, metas)?;
                    path.pop();
                }
                Ok(())
            }
        }
    }
    go(&seq.ante, Sort::F, Side::Ante, &mut vec![], sig, metas)?;
    go(&seq.succ, Sort::G, Side::Succ, &mut vec![], sig, metas)
}

/// Sort of the substructure at `pos`, which in a well-sorted sequent is also its
/// position: F-sort substructures are in precedent position.
pub fn sort_at(seq: &Sequent, pos: &Position, sig: &Signature) -> Sort {
    let mut s = pos.0.sort();
    let mut cur = seq.side(pos.0);
    for &i in &pos.1 {
        if let Structure::Conn(_, n, args) = cur {
            s = s.arg(sig.get(n).expect("known connective").order_type.get(i));
            cur = &args[i];
        }
    }
    s
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    pub structs: BTreeMap<String, Structure>,
    pub formulas: BTreeMap<String, Formula>,
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.structs {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{k} := {v}")?;
        }
        for (k, v) in &self.formulas {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "?{k} := {v}")?;
        }
        Ok(())
    }
}

fn match_formula(pat: &Formula, f: &Formula, s: &mut Subst) -> bool {
    match (pat, f) {
        (Formula::Meta(a), _) => match s.formulas.get(a) {
            Some(v) => v == f,
            None => {
                s.formulas.insert(a.clone(), f.clone());
                true
            }
        },
        (Formula::And(a, b), Formula::And(c, d)) | (Formula::Or(a, b), Formula::Or(c, d)) => {
            match_formula(a, c, s) && match_formula(b, d, s)
        }
        (Formula::Conn(n, xs), Formula::Conn(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_formula(x, y, s))
        }
        _ => pat == f,
    }
}

/// Syntactic matching of a schema against a concrete structure, extending `s`.
/// Metavariables for which `param_only` holds match parameters only.
pub fn match_structure(
    pat: &Structure,
    t: &Structure,
    s: &mut Subst,
    param_only: &dyn Fn(&str) -> bool,
) -> bool {
    match (pat, t) {
        (Structure::Meta(m), _) => match s.structs.get(m) {
            Some(v) => v == t,
            None => {
                if param_only(m) && !matches!(t, Structure::Param(_)) {
                    return false;
                }
                s.structs.insert(m.clone(), t.clone());
                true
            }
        },
        (Structure::Formula(p), Structure::Formula(f)) => match_formula(p, f, s),
        (Structure::Conn(a, n, xs), Structure::Conn(b, m, ys)) => {
            a == b
                && n == m
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| match_structure(x, y, s, param_only))
        }
        _ => pat == t,
    }
}

pub fn match_sequent(pat: &Sequent, t: &Sequent, s: &mut Subst, param_only: &dyn Fn(&str) -> bool) -> bool {
    let saved = s.clone();
    let ok = match_structure(&pat.ante, &t.ante, s, param_only) && match_structure(&pat.succ, &t.succ, s, param_only);
    if !ok {
        *s = saved;
    }
    ok
}

/// Matches a rule's conclusion against a sequent; metavariables are instantiable.
pub fn match_conclusion(rule: &InceptionRule, seq: &Sequent) -> Option<Subst> {
    let mut s = Subst::default();
    if rule.name == ID_RULE {
        return match (&seq.ante, &seq.succ) {
            (Structure::Formula(Formula::Atom(a)), Structure::Formula(Formula::Atom(b))) if a == b => Some(s),
            _ => None,
        };
    }
    match_sequent(&rule.conclusion, seq, &mut s, &|_| false).then_some(s)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("metavariable {0} has no instance")]
    Missing(String),
    #[error("parameter #{0} is already in use")]
    ParamReuse(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractObligation {
    pub aim: Sequent,
    pub rules: Vec<InceptionRule>,
    /// Uninstantiable metavariable to its parameter.
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub premises: Vec<Sequent>,
    pub contracts: Vec<ContractObligation>,
}

/// Hands out parameter identifiers that are unique across a derivation.
#[derive(Clone, Debug, Default)]
pub struct ParamAlloc {
    pub used: BTreeSet<String>,
}

impl ParamAlloc {
    pub fn fresh(&mut self, base: &str) -> String {
        let mut k = 1;
        loop {
            let id = format!("{base}{k}");
            if self.used.insert(id.clone()) {
                return id;
            }
            k += 1;
        }
    }

    pub fn claim(&mut self, id: &str) -> Result<(), KernelError> {
        if self.used.insert(id.to_string()) {
            Ok(())
        } else {
            Err(KernelError::ParamReuse(id.to_string()))
        }
    }
}

pub fn rule_metas(rule: &InceptionRule) -> Vec<String> {
    let mut out = rule.conclusion.metas();
    for p in &rule.premises {
        match p {
            Premise::Plain(s) => s.ante.metas(&mut out),
            Premise::Contract(c) => c.aim.ante.metas(&mut out),
        }
        match p {
            Premise::Plain(s) => s.succ.metas(&mut out),
            Premise::Contract(c) => c.aim.succ.metas(&mut out),
        }
    }
    out
}

pub fn subst_rule(rule: &InceptionRule, s: &Subst) -> InceptionRule {
    InceptionRule {
        name: rule.name.clone(),
        depth: rule.depth,
        conclusion: rule.conclusion.subst(s),
        premises: rule
            .premises
            .iter()
            .map(|p| match p {
                Premise::Plain(q) => Premise::Plain(q.subst(s)),
                Premise::Contract(c) => Premise::Contract(Contract {
                    aim: c.aim.subst(s),
                    uninstantiable: c.uninstantiable.clone(),
                    rules: c.rules.iter().map(|r| subst_rule(r, s)).collect(),
                }),
            })
            .collect(),
    }
}

/// Instantiates a rule: plain premises become sequents, contracts become
/// obligations whose uninstantiable variables are fresh parameters.
pub fn instantiate(rule: &InceptionRule, s: &Subst, params: &mut ParamAlloc) -> Result<Instance, KernelError> {
    let uninst: BTreeSet<&String> = rule
        .premises
        .iter()
        .filter_map(|p| match p {
            Premise::Contract(c) => Some(c.uninstantiable.iter()),
            _ => None,
        })
        .flatten()
        .collect();
    for m in rule_metas(rule) {
        if !uninst.contains(&m) && !s.structs.contains_key(&m) {
            return Err(KernelError::Missing(m));
        }
    }
    let mut inst = Instance {
        premises: vec![],
        contracts: vec![],
    };
    for p in &rule.premises {
        match p {
            Premise::Plain(q) => inst.premises.push(q.subst(s)),
            Premise::Contract(c) => {
                let mut s2 = s.clone();
                let mut map = BTreeMap::new();
                for x in &c.uninstantiable {
                    let id = params.fresh(x);
                    s2.structs.insert(x.clone(), Structure::Param(id.clone()));
                    map.insert(x.clone(), id);
                }
                inst.contracts.push(ContractObligation {
                    aim: c.aim.subst(&s2),
                    rules: c.rules.iter().map(|r| subst_rule(r, &s2)).collect(),
                    params: map,
                });
            }
        }
    }
    Ok(inst)
}

pub const ID_RULE: &str = "Id";
pub const CUT_RULE: &str = "Cut";
pub const DISPLAY_RULE: &str = "dp";

fn sq(a: Structure, b: Structure) -> Sequent {
    Sequent::new(a, b)
}

fn fm(a: &str) -> Structure {
    Structure::Formula(Formula::Meta(a.to_string()))
}

fn plain(name: &str, premises: Vec<Sequent>, conclusion: Sequent) -> InceptionRule {
    InceptionRule {
        name: name.to_string(),
        premises: premises.into_iter().map(Premise::Plain).collect(),
        conclusion,
        depth: 0,
    }
}

/// Display postulates `dp.h.k`: the conclusion has `h` as its main structural
/// connective and the premise displays coordinate `k` (1-based in the name).
pub fn display_rules(sig: &Signature) -> Vec<InceptionRule> {
    let mut out = Vec::new();
    for c in &sig.connectives {
        let n = c.arity();
        let ws: Vec<Structure> = (1..=n).map(|i| Structure::meta(&format!("W{i}"))).collect();
        for k in 0..n {
            let r = sig.residual(&c.name, k);
            let e = c.order_type.get(k);
            let main = Structure::Conn(c.family, c.name.clone(), ws.clone());
            let v = Structure::meta("V");
            let mut rargs = ws.clone();
            rargs[k] = v.clone();
            let res = Structure::Conn(r.family, r.name.clone(), rargs);
            let wk = ws[k].clone();
            let (concl, prem) = match (c.family, e) {
                (Family::F, Polarity::Pos) => (sq(main, v), sq(wk, res)),
                (Family::F, Polarity::Neg) => (sq(main, v), sq(res, wk)),
                (Family::G, Polarity::Pos) => (sq(v, main), sq(res, wk)),
                (Family::G, Polarity::Neg) => (sq(v, main), sq(wk, res)),
            };
            out.push(plain(&format!("dp.{}.{}", c.name, k + 1), vec![prem], concl));
        }
    }
    out
}

/// The rules of the base calculus for a closed signature.
pub fn base_rules(sig: &Signature) -> Vec<InceptionRule> {
    let (x, y) = (Structure::meta("X"), Structure::meta("Y"));
    let (a, b) = (fm("A"), fm("B"));
    let fa = Formula::Meta("A".into());
    let fb = Formula::Meta("B".into());
    let mut out = vec![
        plain(ID_RULE, vec![], sq(fm("p"), fm("p"))),
        plain(
            CUT_RULE,
            vec![sq(x.clone(), a.clone()), sq(a.clone(), y.clone())],
            sq(x.clone(), y.clone()),
        ),
        plain("top", vec![], sq(x.clone(), Structure::Formula(Formula::Top))),
        plain("bot", vec![], sq(Structure::Formula(Formula::Bot), y.clone())),
        plain(
            "and_L1",
            vec![sq(a.clone(), y.clone())],
            sq(Structure::Formula(Formula::and(fa.clone(), fb.clone())), y.clone()),
        ),
        plain(
            "and_L2",
            vec![sq(b.clone(), y.clone())],
            sq(Structure::Formula(Formula::and(fa.clone(), fb.clone())), y.clone()),
        ),
        plain(
            "and_R",
            vec![sq(x.clone(), a.clone()), sq(x.clone(), b.clone())],
            sq(x.clone(), Structure::Formula(Formula::and(fa.clone(), fb.clone()))),
        ),
        plain(
            "or_L",
            vec![sq(a.clone(), y.clone()), sq(b.clone(), y.clone())],
            sq(Structure::Formula(Formula::or(fa.clone(), fb.clone())), y.clone()),
        ),
        plain(
            "or_R1",
            vec![sq(x.clone(), a.clone())],
            sq(x.clone(), Structure::Formula(Formula::or(fa.clone(), fb.clone()))),
        ),
        plain(
            "or_R2",
            vec![sq(x.clone(), b.clone())],
            sq(x.clone(), Structure::Formula(Formula::or(fa, fb))),
        ),
    ];
    for c in &sig.connectives {
        let n = c.arity();
        let avars: Vec<Formula> = (1..=n).map(|i| Formula::Meta(format!("A{i}"))).collect();
        let astructs: Vec<Structure> = avars.iter().cloned().map(Structure::Formula).collect();
        let xs: Vec<Structure> = (1..=n).map(|i| Structure::meta(&format!("X{i}"))).collect();
        let formula = Structure::Formula(Formula::Conn(c.name.clone(), avars));
        let structural = Structure::Conn(c.family, c.name.clone(), astructs.clone());
        let generic = Structure::Conn(c.family, c.name.clone(), xs.clone());
        let side_premises: Vec<Sequent> = (0..n)
            .map(|i| {
                let e = c.order_type.get(i);
                match (c.family, e) {
                    (Family::F, Polarity::Pos) | (Family::G, Polarity::Neg) => sq(xs[i].clone(), astructs[i].clone()),
                    _ => sq(astructs[i].clone(), xs[i].clone()),
                }
            })
            .collect();
        match c.family {
            Family::F => {
                out.push(plain(
                    &format!("{}_L", c.name),
                    vec![sq(structural, y.clone())],
                    sq(formula.clone(), y.clone()),
                ));
                out.push(plain(&format!("{}_R", c.name), side_premises, sq(generic, formula)));
            }
            Family::G => {
                out.push(plain(
                    &format!("{}_R", c.name),
                    vec![sq(x.clone(), structural)],
                    sq(x.clone(), formula.clone()),
                ));
                out.push(plain(&format!("{}_L", c.name), side_premises, sq(formula, generic)));
            }
        }
    }
    out.extend(display_rules(sig));
    out
}

/// Applies one display postulate on `side`, displaying coordinate `k` of the
/// main structural connective there. Returns the new sequent.
pub fn display_move(seq: &Sequent, side: Side, k: usize, sig: &Signature) -> Option<Sequent> {
    let Structure::Conn(fam, n, args) = seq.side(side) else {
        return None;
    };
    if Side::of_sort(Sort::of_family(*fam)) != side || k >= args.len() {
        return None;
    }
    let c = sig.get(n)?;
    let r = sig.residual(n, k);
    let other = seq.side(match side {
        Side::Ante => Side::Succ,
        Side::Succ => Side::Ante,
    });
    let mut rargs = args.clone();
    rargs[k] = other.clone();
    let res = Structure::Conn(r.family, r.name.clone(), rargs);
    let wk = args[k].clone();
    Some(match (c.family, c.order_type.get(k)) {
        (Family::F, Polarity::Pos) => sq(wk, res),
        (Family::F, Polarity::Neg) => sq(res, wk),
        (Family::G, Polarity::Pos) => sq(res, wk),
        (Family::G, Polarity::Neg) => sq(wk, res),
    })
}

/// Every sequent one display postulate away, labelled `dp.h.k`.
pub fn display_neighbours(seq: &Sequent, sig: &Signature) -> Vec<(String, Sequent)> {
    let mut out = Vec::new();
    for side in [Side::Ante, Side::Succ] {
        if let Structure::Conn(_, n, args) = seq.side(side) {
            for k in 0..args.len() {
                if let Some(s) = display_move(seq, side, k, sig) {
                    out.push((format!("dp.{}.{}", n, k + 1), s));
                }
            }
        }
    }
    out
}

/// Displays the substructure at `pos`. Returns the chain of sequents starting
/// with `seq` and ending with the one where the target is a whole side, along
/// with the side it ends up on.
pub fn display(seq: &Sequent, pos: &Position, sig: &Signature) -> Option<(Vec<Sequent>, Side)> {
    let mut chain = vec![seq.clone()];
    let (mut side, mut path) = (pos.0, pos.1.clone());
    while !path.is_empty() {
        let k = path.remove(0);
        let cur = chain.last().expect("nonempty");
        let Structure::Conn(_, n, _) = cur.side(side) else {
            return None;
        };
        let c = sig.get(n)?;
        let next = display_move(cur, side, k, sig)?;
        side = match (c.family, c.order_type.get(k)) {
            (Family::F, Polarity::Pos) => Side::Ante,
            (Family::F, Polarity::Neg) => Side::Succ,
            (Family::G, Polarity::Pos) => Side::Succ,
            (Family::G, Polarity::Neg) => Side::Ante,
        };
        chain.push(next);
    }
    Some((chain, side))
}

/// Shortest display-postulate path from `from` to `to`, up to `bound` moves.
pub fn display_path(from: &Sequent, to: &Sequent, sig: &Signature, bound: usize) -> Option<Vec<Sequent>> {
    let mut frontier = vec![vec![from.clone()]];
    let mut seen = BTreeSet::from([from.clone()]);
    for _ in 0..=bound {
        let mut next = Vec::new();
        for chain in frontier {
            let last = chain.last().expect("nonempty");
            if last == to {
                return Some(chain);
            }
            for (_, s) in display_neighbours(last, sig) {
                if seen.insert(s.clone()) {
                    let mut c = chain.clone();
                    c.push(s);
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::sig;

    fn seq(t: &str) -> Sequent {
        parse_sequent(t, &sig()).unwrap()
    }

    #[test]
    fn round_trip() {
        let s = sig();
        for t in [
            "^o(X, ^dia(Y)) |- Z",
            "box(dia(p) o p) |- !box(#N1)",
            "^dia(p) |- !o.rres.2((box(dia(p) o p)), p)",
            "^top |- !bot",
            "p & q |- p | q",
        ] {
            let q = parse_sequent(t, &s).unwrap();
            assert_eq!(parse_sequent(&q.to_string(), &s).unwrap(), q, "{t}");
        }
    }

    #[test]
    fn hat_check_families() {
        let s = sig();
        assert!(parse_sequent("!dia(p) |- q", &s).is_err());
        assert!(parse_sequent("p |- ^box(q)", &s).is_err());
    }

    #[test]
    fn sorts() {
        let s = sig();
        let mut m = BTreeMap::new();
        check_sorts(&seq("^o(X, ^dia(Y)) |- Z"), &s, &mut m).unwrap();
        assert_eq!(m["Z"], Sort::G);
        let mut m = BTreeMap::new();
        let e = check_sorts(&seq("^dia(!box(p)) |- q"), &s, &mut m).unwrap_err();
        assert_eq!((e.side, e.path), (Side::Ante, vec![0]));
        let mut m = BTreeMap::new();
        check_sorts(&seq("^tri(!box(p)) |- q"), &s, &mut m).unwrap();
    }

    #[test]
    fn display_residuated_pair() {
        let s = sig();
        let (chain, side) = display(&seq("^dia(X) |- Y"), &(Side::Ante, vec![0]), &s).unwrap();
        assert_eq!(chain.last().unwrap(), &seq("X |- !bbox(Y)"));
        assert_eq!(side, Side::Ante);
        let (chain, _) = display(&seq("X |- Y"), &(Side::Ante, vec![]), &s).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn display_galois() {
        let s = sig();
        let (chain, side) = display(&seq("^tri(Y) |- Z"), &(Side::Ante, vec![0]), &s).unwrap();
        assert_eq!(chain.last().unwrap(), &seq("^btri(Z) |- Y"));
        assert_eq!(side, Side::Succ);
    }

    #[test]
    fn display_inverts() {
        let s = sig();
        let start = seq("^o(^dia(p), !box(q)) |- !star(r, q)");
        for (_, n) in display_neighbours(&start, &s) {
            assert!(display_neighbours(&n, &s).iter().any(|(_, b)| b == &start), "{n}");
        }
    }

    #[test]
    fn matching() {
        let s = sig();
        let r = InceptionRule {
            name: "R0".into(),
            premises: vec![],
            conclusion: seq("^o(X, ^dia(Y)) |- Z"),
            depth: 0,
        };
        let m = match_conclusion(&r, &seq("^o(box(dia(p) o p), ^dia(p)) |- p")).unwrap();
        assert_eq!(m.structs["X"].to_string(), "box(dia(p) o p)");
        assert_eq!(m.structs["Y"].to_string(), "p");
        assert!(match_conclusion(&r, &seq("^dia(p) |- p")).is_none());
        assert!(parse_sequent("^o(X, !box(Y)) |- Z", &s).is_ok());
    }

    #[test]
    fn base_rule_inventory() {
        let s = sig();
        let names: Vec<String> = base_rules(&s).into_iter().map(|r| r.name).collect();
        for n in ["Id", "Cut", "dia_L", "dia_R", "box_L", "box_R", "dp.dia.1", "dp.bbox.1"] {
            assert!(names.contains(&n.to_string()), "{n}");
        }
        let lattice_only = Signature::new("empty", vec![]).unwrap();
        assert_eq!(base_rules(&lattice_only).len(), 10);
    }

    #[test]
    fn logical_rules_have_subformula_property() {
        let s = sig();
        for r in base_rules(&s) {
            if r.name == CUT_RULE {
                continue;
            }
            let mut concl = Vec::new();
            collect_formulas(&r.conclusion, &mut concl);
            for p in &r.premises {
                let Premise::Plain(q) = p else { unreachable!() };
                let mut prem = Vec::new();
                collect_formulas(q, &mut prem);
                for f in prem {
                    assert!(concl.iter().any(|g| is_subformula(&f, g)), "{}: {f}", r.name);
                }
            }
        }
    }

    fn collect_formulas(s: &Sequent, out: &mut Vec<Formula>) {
        fn go(s: &Structure, out: &mut Vec<Formula>) {
            if let Structure::Formula(f) = s {
                out.push(f.clone());
            }
            s.args().iter().for_each(|a| go(a, out));
        }
        go(&s.ante, out);
        go(&s.succ, out);
    }

    fn is_subformula(a: &Formula, b: &Formula) -> bool {
        a == b || b.children().iter().any(|c| is_subformula(a, c))
    }
}
